//! Corpus ingestion, results persistence, OBJ export.
//!
//! Corpus files hold one triangulation per line in the nested-list format;
//! `#` lines are comments. Results files are line-oriented: a versioned
//! header comment followed by one JSON record per line. Records embed the
//! triangulation text so realized coordinates can be re-verified on load
//! without the original corpus. All writes go through a temp file and a
//! rename, so an interrupted run never leaves a truncated file behind.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{parse_triangulation, SurfaceComplex};
use crate::exactgeom::LatticePoint;
use crate::objective::{verify_embedding, verify_immersion, Mode};
use crate::search::SearchStatus;

pub const RESULTS_HEADER: &str = "# trisurf results v1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{path}: no triangulation lines")]
    EmptyCorpus { path: String },
    #[error("{path}: expected results header '{RESULTS_HEADER}'")]
    BadHeader { path: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("record at line {line} failed verification: {message}")]
    VerificationFailed { line: usize, message: String },
    #[error("coordinate count {got} does not match vertex count {want}")]
    CoordinateMismatch { got: usize, want: usize },
}

/// A corpus triangulation with its provenance.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub file: String,
    /// 1-based line number in the corpus file.
    pub line: usize,
    pub complex: SurfaceComplex,
}

/// A malformed corpus line, reported but not fatal.
#[derive(Debug, Clone)]
pub struct CorpusDiagnostic {
    pub line: usize,
    pub message: String,
}

/// Read a corpus file: valid lines become entries, malformed lines become
/// diagnostics. A file without any triangulation line is an error.
pub fn read_corpus(path: &Path) -> Result<(Vec<CorpusEntry>, Vec<CorpusDiagnostic>), IoError> {
    let file = fs::File::open(path)?;
    let name = path.display().to_string();
    let mut entries = Vec::new();
    let mut diagnostics = Vec::new();
    let mut saw_data = false;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        saw_data = true;
        match parse_triangulation(trimmed) {
            Ok(complex) => entries.push(CorpusEntry {
                file: name.clone(),
                line: i + 1,
                complex,
            }),
            Err(e) => diagnostics.push(CorpusDiagnostic {
                line: i + 1,
                message: e.to_string(),
            }),
        }
    }
    if !saw_data {
        return Err(IoError::EmptyCorpus { path: name });
    }
    Ok((entries, diagnostics))
}

/// One search instance outcome, self-contained for re-verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub file: String,
    pub line: usize,
    pub triangulation: String,
    pub mode: Mode,
    /// Symmetry descriptor (kind plus generator cycles), or "none".
    pub symmetry: String,
    pub status: SearchStatus,
    pub steps: u64,
    pub restarts: u64,
    pub seed: u64,
    pub aut_group_order: usize,
    /// Final vertex coordinates for realized instances.
    pub coordinates: Option<Vec<[i64; 3]>>,
}

impl ResultRecord {
    pub fn triangulation_id(&self) -> String {
        format!("{}:{}", self.file, self.line)
    }

    /// Re-run the exact verification a realized record claims to pass.
    pub fn verify(&self) -> Result<(), String> {
        let complex =
            parse_triangulation(&self.triangulation).map_err(|e| e.to_string())?;
        if self.status != SearchStatus::Realized {
            return Ok(());
        }
        let Some(coords) = &self.coordinates else {
            return Err("realized record without coordinates".into());
        };
        if coords.len() != complex.vertex_count() {
            return Err(format!(
                "coordinate count {} does not match vertex count {}",
                coords.len(),
                complex.vertex_count()
            ));
        }
        let points: Vec<LatticePoint> = coords.iter().map(|&c| c.into()).collect();
        let ok = match self.mode {
            Mode::Embed => verify_embedding(&complex, &points),
            Mode::Immerse => verify_immersion(&complex, &points),
        };
        if ok {
            Ok(())
        } else {
            Err("coordinates fail the exact realization check".into())
        }
    }
}

/// Atomically write a results file (header plus one JSON record per line).
pub fn write_results(records: &[ResultRecord], path: &Path) -> Result<(), IoError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    writeln!(tmp, "{RESULTS_HEADER}")?;
    for r in records {
        let line = serde_json::to_string(r).expect("record serialization cannot fail");
        writeln!(tmp, "{line}")?;
    }
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Read a results file, re-verifying every realized record.
pub fn read_results(path: &Path) -> Result<Vec<ResultRecord>, IoError> {
    let file = fs::File::open(path)?;
    let name = path.display().to_string();
    let mut lines = BufReader::new(file).lines();
    match lines.next() {
        Some(Ok(h)) if h.trim() == RESULTS_HEADER => {}
        _ => return Err(IoError::BadHeader { path: name }),
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ResultRecord =
            serde_json::from_str(&line).map_err(|e| IoError::Malformed {
                line: i + 2,
                message: e.to_string(),
            })?;
        record.verify().map_err(|message| IoError::VerificationFailed {
            line: i + 2,
            message,
        })?;
        records.push(record);
    }
    Ok(records)
}

/// Export an assignment as a Wavefront OBJ: integer `v` lines and 1-based
/// `f` lines consistent with the input labeling.
pub fn export_obj(
    c: &SurfaceComplex,
    coords: &[LatticePoint],
    path: &Path,
) -> Result<(), IoError> {
    if coords.len() != c.vertex_count() {
        return Err(IoError::CoordinateMismatch {
            got: coords.len(),
            want: c.vertex_count(),
        });
    }
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    writeln!(tmp, "# {} vertices, {} faces", coords.len(), c.triangles().len())?;
    for p in coords {
        writeln!(tmp, "v {} {} {}", p.x, p.y, p.z)?;
    }
    for t in c.triangles() {
        writeln!(tmp, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Minimal OBJ reader for round-trip checks: integer vertices and triangular
/// faces only.
pub fn read_obj(path: &Path) -> Result<(Vec<[i64; 3]>, Vec<[usize; 3]>), IoError> {
    let file = fs::File::open(path)?;
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let mut parts = line.split_whitespace();
        let bad = |message: &str| IoError::Malformed {
            line: i + 1,
            message: message.into(),
        };
        match parts.next() {
            Some("v") => {
                let mut v = [0i64; 3];
                for slot in v.iter_mut() {
                    *slot = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad("expected three integer coordinates"))?;
                }
                vertices.push(v);
            }
            Some("f") => {
                let mut f = [0usize; 3];
                for slot in f.iter_mut() {
                    let field = parts.next().ok_or_else(|| bad("expected three indices"))?;
                    let index: usize = field
                        .split('/')
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad("bad face index"))?;
                    *slot = index - 1;
                }
                faces.push(f);
            }
            _ => {}
        }
    }
    Ok((vertices, faces))
}
