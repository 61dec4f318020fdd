//! The `realize` subcommand: plan one search instance per (triangulation,
//! symmetry binding), run them on a worker pool, merge records in plan order
//! and write the results file atomically.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{bail, Context, Result};
use clap::Args;

use trisurf::automorphisms::enumerate_automorphisms;
use trisurf::complex::SurfaceComplex;
use trisurf::io::{write_results, ResultRecord};
use trisurf::objective::Mode;
use trisurf::obstruction::triple_point_feasible;
use trisurf::search::{instance_rng, run_search, SearchConfig, SearchStatus};
use trisurf::symmetry::{
    catalog_entry, compatible_isometries, d2_candidate_pairs, IsometryKind, SymmetryBinding,
};

#[derive(Args)]
pub struct RealizeArgs {
    pub corpus: PathBuf,
    /// auto | embed | immerse (auto picks by orientability).
    #[arg(long, default_value = "auto")]
    pub mode: String,
    /// none | auto | mirror | rot2 | rot3 | rot4 | inversion | rotref4 |
    /// rotref6 | d2 (auto tries every compatible binding).
    #[arg(long, default_value = "none")]
    pub symmetry: String,
    /// Side length of the initialization box (default from the surface type).
    #[arg(long)]
    pub inner_box: Option<i64>,
    /// Side length of the outer box (default from the surface type).
    #[arg(long)]
    pub outer_box: Option<i64>,
    #[arg(long)]
    pub max_steps: Option<u64>,
    #[arg(long, default_value_t = 0.01)]
    pub restart_ratio: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Restrict to file lines A:B (1-based, inclusive).
    #[arg(long)]
    pub line_range: Option<String>,
    #[arg(long, default_value = "results.txt")]
    pub results: PathBuf,
    /// Skip even-order rotation bindings on projective planes (odd triple
    /// point count argument); off by default.
    #[arg(long)]
    pub even_rotation_prefilter: bool,
}

struct Instance {
    entry_index: usize,
    line: usize,
    instance_index: u64,
    binding: Option<SymmetryBinding>,
    symmetry: String,
    config: SearchConfig,
    aut_group_order: usize,
}

pub fn run(args: RealizeArgs) -> Result<()> {
    let entries = crate::load_entries(&args.corpus, args.line_range.as_deref())?;
    if !(0.0..=1.0).contains(&args.restart_ratio) {
        bail!("restart ratio must be within [0, 1]");
    }
    let symmetric = args.symmetry != "none";
    let mut instances: Vec<Instance> = Vec::new();
    let mut obstructed: Vec<ResultRecord> = Vec::new();
    for (entry_index, e) in entries.iter().enumerate() {
        let mode = match args.mode.as_str() {
            "auto" => {
                if e.complex.orientable() {
                    Mode::Embed
                } else {
                    Mode::Immerse
                }
            }
            "embed" => Mode::Embed,
            "immerse" => Mode::Immerse,
            other => bail!("unknown mode '{other}'"),
        };
        let mut config = SearchConfig::recommended_for(&e.complex, symmetric);
        config.mode = mode;
        if let Some(v) = args.inner_box {
            config.inner_box = v;
        }
        if let Some(v) = args.outer_box {
            config.outer_box = v;
        }
        if let Some(v) = args.max_steps {
            config.max_steps = v;
        }
        if config.inner_box > config.outer_box {
            bail!("inner box exceeds outer box");
        }
        config.restart_ratio = args.restart_ratio;
        config.seed = args.seed;

        let auts = enumerate_automorphisms(&e.complex);
        let aut_group_order = auts.len();

        // proven non-realizable: skip the whole triangulation
        if mode == Mode::Immerse && triple_point_feasible(&e.complex).proves_non_realizable() {
            obstructed.push(ResultRecord {
                file: e.file.clone(),
                line: e.line,
                triangulation: e.complex.to_text(),
                mode,
                symmetry: "none".into(),
                status: SearchStatus::Obstructed,
                steps: 0,
                restarts: 0,
                seed: args.seed,
                aut_group_order,
                coordinates: None,
            });
            continue;
        }

        let bindings = plan_bindings(&e.complex, &auts, &args)?;
        for (k, (binding, descriptor)) in bindings.into_iter().enumerate() {
            instances.push(Instance {
                entry_index,
                line: e.line,
                instance_index: k as u64,
                binding,
                symmetry: descriptor,
                config: config.clone(),
                aut_group_order,
            });
        }
    }

    let total = instances.len();
    eprintln!(
        "{} instances over {} triangulations ({} obstructed)",
        total,
        entries.len(),
        obstructed.len()
    );
    let slots: Mutex<Vec<Option<ResultRecord>>> = Mutex::new(vec![None; total]);
    let next = AtomicUsize::new(0);
    let done = AtomicUsize::new(0);
    let jobs = args.jobs.max(1);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= total {
                    break;
                }
                let inst = &instances[i];
                let e = &entries[inst.entry_index];
                let rng = instance_rng(args.seed, inst.line as u64, inst.instance_index);
                let outcome = run_search(&e.complex, &inst.config, inst.binding.clone(), rng);
                let record = ResultRecord {
                    file: e.file.clone(),
                    line: inst.line,
                    triangulation: e.complex.to_text(),
                    mode: inst.config.mode,
                    symmetry: inst.symmetry.clone(),
                    status: outcome.status,
                    steps: outcome.steps_used,
                    restarts: outcome.restarts,
                    seed: args.seed,
                    aut_group_order: inst.aut_group_order,
                    coordinates: if outcome.status == SearchStatus::Realized {
                        outcome
                            .assignment
                            .map(|a| a.coords.iter().map(|p| p.coords()).collect())
                    } else {
                        None
                    },
                };
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                eprintln!(
                    "[{}/{}] line {} {} -> {} ({} steps)",
                    finished,
                    total,
                    inst.line,
                    inst.symmetry,
                    record.status.name(),
                    record.steps
                );
                slots.lock().unwrap()[i] = Some(record);
            });
        }
    });

    let mut records: Vec<ResultRecord> = slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("all instances completed"))
        .collect();
    records.extend(obstructed);
    records.sort_by(|a, b| (a.line, &a.symmetry).cmp(&(b.line, &b.symmetry)));
    write_results(&records, &args.results)
        .with_context(|| format!("writing {}", args.results.display()))?;

    let realized = records
        .iter()
        .filter(|r| r.status == SearchStatus::Realized)
        .count();
    let obstructed_count = records
        .iter()
        .filter(|r| r.status == SearchStatus::Obstructed)
        .count();
    let exhausted = records
        .iter()
        .filter(|r| r.status == SearchStatus::StepBudgetExhausted)
        .count();
    eprintln!(
        "done: {} realized, {} obstructed, {} exhausted, {} other; results in {}",
        realized,
        obstructed_count,
        exhausted,
        records.len() - realized - obstructed_count - exhausted,
        args.results.display()
    );
    Ok(())
}

type PlannedBinding = (Option<SymmetryBinding>, String);

/// Expand the symmetry flag into concrete bindings for one triangulation.
fn plan_bindings(
    c: &SurfaceComplex,
    auts: &[trisurf::Automorphism],
    args: &RealizeArgs,
) -> Result<Vec<PlannedBinding>> {
    let mut out: Vec<PlannedBinding> = Vec::new();
    let drop_even_rotations =
        args.even_rotation_prefilter && !c.orientable() && c.genus() == 1;
    let rotation_blocked = |kind: IsometryKind| {
        drop_even_rotations
            && matches!(kind, IsometryKind::Rot2 | IsometryKind::Rot4 | IsometryKind::D2)
    };
    match args.symmetry.as_str() {
        "none" => out.push((None, "none".into())),
        "auto" => {
            for a in auts.iter().filter(|a| !a.is_identity()) {
                for iso in compatible_isometries(a, c) {
                    if rotation_blocked(iso.kind) {
                        continue;
                    }
                    let b = SymmetryBinding::cyclic(a, &iso, c)
                        .expect("compatible isometry binds");
                    let d = b.descriptor();
                    out.push((Some(b), d));
                }
            }
            if !rotation_blocked(IsometryKind::D2) {
                for (a, b) in d2_candidate_pairs(auts, c) {
                    let binding = SymmetryBinding::d2(a, b, c).expect("candidate pair binds");
                    let d = binding.descriptor();
                    out.push((Some(binding), d));
                }
            }
        }
        name => {
            let kind = IsometryKind::from_name(name)
                .with_context(|| format!("unknown symmetry '{name}'"))?;
            if rotation_blocked(kind) {
                return Ok(out);
            }
            if kind == IsometryKind::D2 {
                for (a, b) in d2_candidate_pairs(auts, c) {
                    let binding = SymmetryBinding::d2(a, b, c).expect("candidate pair binds");
                    let d = binding.descriptor();
                    out.push((Some(binding), d));
                }
            } else {
                let iso = catalog_entry(kind);
                for a in auts.iter().filter(|a| !a.is_identity()) {
                    if compatible_isometries(a, c).iter().any(|i| i.kind == kind) {
                        let b = SymmetryBinding::cyclic(a, &iso, c)
                            .expect("compatible isometry binds");
                        let d = b.descriptor();
                        out.push((Some(b), d));
                    }
                }
            }
        }
    }
    Ok(out)
}
