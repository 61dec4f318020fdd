//! Command line driver: validate corpora, enumerate automorphisms, run
//! realization searches, verify results files, export OBJ meshes.
//!
//! Progress and summaries stream to standard error; result data goes to
//! files. The exit code is 0 whenever the requested run completed,
//! independent of per-triangulation realization outcomes.

mod realize;

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use trisurf::automorphisms::{enumerate_automorphisms, generating_set};
use trisurf::complex::{classify, heawood_minimum, parse_triangulation};
use trisurf::io::{export_obj, read_corpus, read_results, CorpusEntry, ResultRecord};
use trisurf::obstruction::triple_point_feasible;
use trisurf::search::SearchStatus;
use trisurf::LatticePoint;

#[derive(Parser)]
#[command(name = "trisurf", version, about = "Lattice realization of triangulated surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate and classify a corpus; report the triple-point obstruction.
    Check {
        corpus: PathBuf,
        /// Restrict to file lines A:B (1-based, inclusive).
        #[arg(long)]
        line_range: Option<String>,
    },
    /// Enumerate automorphism groups.
    Aut {
        corpus: PathBuf,
        #[arg(long)]
        line_range: Option<String>,
    },
    /// Run the realization search over a corpus.
    Realize(realize::RealizeArgs),
    /// Re-check a results file, re-verifying realized coordinates.
    Verify { results: PathBuf },
    /// Export one results record as a Wavefront OBJ file.
    Export {
        results: PathBuf,
        /// Record index in the results file (default: first realized).
        #[arg(long)]
        index: Option<usize>,
        #[arg(long, short)]
        out: PathBuf,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Check { corpus, line_range } => check(corpus, line_range),
        Command::Aut { corpus, line_range } => aut(corpus, line_range),
        Command::Realize(args) => realize::run(args),
        Command::Verify { results } => verify(results),
        Command::Export { results, index, out } => export(results, index, out),
    }
}

/// Parse "A:B" or "N" into an inclusive 1-based line filter.
pub fn parse_line_range(spec: &str) -> Result<(usize, usize)> {
    if let Some((a, b)) = spec.split_once(':') {
        let lo: usize = a.parse().context("bad line range start")?;
        let hi: usize = b.parse().context("bad line range end")?;
        if lo == 0 || hi < lo {
            bail!("line range must be 1-based and non-empty");
        }
        Ok((lo, hi))
    } else {
        let n: usize = spec.parse().context("bad line number")?;
        Ok((n, n))
    }
}

pub fn load_entries(
    corpus: &PathBuf,
    line_range: Option<&str>,
) -> Result<Vec<CorpusEntry>> {
    let (entries, diagnostics) =
        read_corpus(corpus).with_context(|| format!("reading {}", corpus.display()))?;
    for d in &diagnostics {
        eprintln!("{}:{}: {}", corpus.display(), d.line, d.message);
    }
    let range = line_range.map(parse_line_range).transpose()?;
    let filtered: Vec<CorpusEntry> = entries
        .into_iter()
        .filter(|e| range.map_or(true, |(lo, hi)| e.line >= lo && e.line <= hi))
        .collect();
    if filtered.is_empty() {
        bail!("no triangulations selected");
    }
    Ok(filtered)
}

fn check(corpus: PathBuf, line_range: Option<String>) -> Result<()> {
    let entries = load_entries(&corpus, line_range.as_deref())?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut infeasible = 0usize;
    for e in &entries {
        let c = &e.complex;
        let (orientable, genus) = classify(c);
        let (f0, f1, f2) = c.f_vector();
        let name = if orientable {
            format!("M_{genus}")
        } else {
            format!("N_{genus}")
        };
        let verdict = triple_point_feasible(c);
        let obstruction = if !verdict.applicable {
            "n/a".to_string()
        } else if verdict.feasible_triples_exist {
            let w = verdict.witness.unwrap();
            format!("feasible (witness triangles {},{},{})", w[0], w[1], w[2])
        } else {
            infeasible += 1;
            "infeasible: not realizable".to_string()
        };
        writeln!(
            out,
            "line {}: {} f=({},{},{}) chi={} heawood_min={} triple-point={}",
            e.line,
            name,
            f0,
            f1,
            f2,
            c.euler_characteristic(),
            heawood_minimum(c.euler_characteristic()),
            obstruction
        )?;
    }
    eprintln!(
        "checked {} triangulations, {} proven non-realizable",
        entries.len(),
        infeasible
    );
    Ok(())
}

fn aut(corpus: PathBuf, line_range: Option<String>) -> Result<()> {
    let entries = load_entries(&corpus, line_range.as_deref())?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut trivial = 0usize;
    for e in &entries {
        let auts = enumerate_automorphisms(&e.complex);
        if auts.len() == 1 {
            trivial += 1;
        }
        let mut orders: Vec<usize> = auts.iter().map(|a| a.order()).collect();
        orders.sort_unstable();
        orders.dedup();
        let gens = generating_set(&auts, &e.complex);
        let gen_text: Vec<String> = gens.iter().map(|g| g.cycle_notation()).collect();
        writeln!(
            out,
            "line {}: |Aut| = {}, element orders {:?}, generators: {}",
            e.line,
            auts.len(),
            orders,
            if gen_text.is_empty() {
                "id".to_string()
            } else {
                gen_text.join(", ")
            }
        )?;
    }
    eprintln!(
        "{} triangulations, {} with trivial automorphism group",
        entries.len(),
        trivial
    );
    Ok(())
}

fn verify(results: PathBuf) -> Result<()> {
    // lenient pass: report every record instead of stopping at the first
    // corrupt one
    let text = std::fs::read_to_string(&results)
        .with_context(|| format!("reading {}", results.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == trisurf::io::RESULTS_HEADER => {}
        _ => bail!("{}: not a results file", results.display()),
    }
    let mut ok = 0usize;
    let mut failed = 0usize;
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ResultRecord>(line) {
            Ok(record) => match record.verify() {
                Ok(()) => {
                    ok += 1;
                    println!(
                        "line {}: {} {} {} ok",
                        i + 2,
                        record.status.name(),
                        record.symmetry,
                        record.triangulation_id()
                    );
                }
                Err(msg) => {
                    failed += 1;
                    println!("line {}: VERIFICATION FAILED: {msg}", i + 2);
                }
            },
            Err(e) => {
                failed += 1;
                println!("line {}: malformed record: {e}", i + 2);
            }
        }
    }
    eprintln!("{ok} records verified, {failed} failed");
    Ok(())
}

fn export(results: PathBuf, index: Option<usize>, out: PathBuf) -> Result<()> {
    let records = read_results(&results)
        .with_context(|| format!("reading {}", results.display()))?;
    let record = match index {
        Some(i) => records
            .get(i)
            .with_context(|| format!("no record at index {i} ({} records)", records.len()))?,
        None => records
            .iter()
            .find(|r| r.status == SearchStatus::Realized)
            .context("no realized record in the results file")?,
    };
    let coords = record
        .coordinates
        .as_ref()
        .context("selected record has no coordinates")?;
    let complex = parse_triangulation(&record.triangulation)?;
    let points: Vec<LatticePoint> = coords.iter().map(|&v| v.into()).collect();
    export_obj(&complex, &points, &out)?;
    eprintln!(
        "exported {} ({} vertices, {} faces) to {}",
        record.triangulation_id(),
        complex.vertex_count(),
        complex.triangles().len(),
        out.display()
    );
    Ok(())
}
