//! The descent-step heuristic over integer lattice coordinates.
//!
//! A search instance owns mutable coordinates, the pair-objective cache and a
//! seeded RNG. Each descent step cycles through the unit moves in a fresh
//! random order, takes the first admissible move that strictly decreases the
//! objective, and saves the first admissible move it saw; at a local minimum
//! the instance either restarts with new coordinates (with the configured
//! probability) or takes the saved move to walk the plateau. The global step
//! counter is never reset, so every search terminates.
//!
//! Admissibility means: all moved vertices stay in the outer bounding box and
//! the position requirement still holds. Without a symmetry binding the
//! requirement is ordinary general position; any binding switches to relaxed
//! general position, which symmetric configurations need.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::SurfaceComplex;
use crate::exactgeom::{self, LatticePoint};
use crate::objective::{self, build_pair_schedule, Evaluator, Mode, PairHit};
use crate::obstruction;
use crate::symmetry::{Mat3, SymmetryBinding, IDENTITY};

/// The map psi from vertices to lattice points, with its box metadata
/// (half-side lengths; boxes are centered at the origin).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateAssignment {
    pub coords: Vec<LatticePoint>,
    pub inner_half: i64,
    pub outer_half: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PositionRequirement {
    General,
    Relaxed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub mode: Mode,
    /// Side length of the initialization box.
    pub inner_box: i64,
    /// Side length of the box all subsequent steps must stay in.
    pub outer_box: i64,
    pub max_steps: u64,
    /// Probability of re-initializing instead of taking the saved move at a
    /// local minimum.
    pub restart_ratio: f64,
    pub seed: u64,
    /// Overrides the requirement derived from the symmetry binding.
    pub position_override: Option<PositionRequirement>,
    /// Record one trace event per step.
    pub trace: bool,
    /// Re-verify the position requirement and the symmetry invariant after
    /// every committed step.
    pub paranoid_checks: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: Mode::Embed,
            inner_box: 40,
            outer_box: 80,
            max_steps: 2_000_000,
            restart_ratio: 0.01,
            seed: 1,
            position_override: None,
            trace: false,
            paranoid_checks: false,
        }
    }
}

impl SearchConfig {
    /// Box sizes and step budgets used for the published runs, keyed on the
    /// surface type and vertex count.
    pub fn recommended_for(c: &SurfaceComplex, symmetric: bool) -> SearchConfig {
        let f0 = c.vertex_count();
        let orientable = c.orientable();
        let genus = c.genus();
        let mode = if orientable { Mode::Embed } else { Mode::Immerse };
        let (inner, outer, steps) = match (orientable, genus, f0) {
            (false, 1, 9) | (false, 2, 9) => (40, 80, 2_000_000),
            (false, 3, 9) => (60, 120, 8_000_000),
            (false, 4, 9) => (60, 120, if symmetric { 2_000_000 } else { 10_000_000 }),
            (true, 2, 10) | (true, 3, 10) => (40, 80, 2_000_000),
            (true, 4, 11) => (60, 120, 4_000_000),
            _ if (10..=12).contains(&f0) => (60, 120, 2_000_000),
            _ => (40, 80, 2_000_000),
        };
        SearchConfig {
            mode,
            inner_box: inner,
            outer_box: outer,
            max_steps: steps,
            ..SearchConfig::default()
        }
    }
}

/// Deterministic per-instance RNG stream: ChaCha8 seeded by the run seed,
/// with the stream derived from the triangulation and instance indices.
pub fn instance_rng(seed: u64, triangulation_index: u64, instance_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((triangulation_index << 20) ^ instance_index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStatus {
    Realized,
    StepBudgetExhausted,
    InitFailed,
    Obstructed,
}

impl SearchStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SearchStatus::Realized => "realized",
            SearchStatus::StepBudgetExhausted => "exhausted",
            SearchStatus::InitFailed => "init-failed",
            SearchStatus::Obstructed => "obstructed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Decrease,
    Plateau,
    Restart,
}

#[derive(Debug, Clone, Copy)]
pub struct TraceEvent {
    pub step: u64,
    pub total: f64,
    pub kind: StepKind,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub assignment: Option<CoordinateAssignment>,
    pub steps_used: u64,
    pub restarts: u64,
    pub plateau_steps: u64,
    pub verified: bool,
    pub trace: Vec<TraceEvent>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("initialization failed after {0} rejection-sampling attempts")]
    InitFailed(u32),
}

const INIT_ATTEMPTS: u32 = 10_000;

/// Draw an assignment uniformly in the inner box (adapted for a binding;
/// constrained representatives are drawn inside their fixed sets), rejection
/// sampling until the position requirement holds.
pub fn initialize(
    c: &SurfaceComplex,
    config: &SearchConfig,
    binding: Option<&SymmetryBinding>,
    rng: &mut ChaCha8Rng,
) -> Result<CoordinateAssignment, SearchError> {
    let inner_half = config.inner_box / 2;
    let outer_half = config.outer_box / 2;
    let requirement = config
        .position_override
        .unwrap_or(if binding.is_some() {
            PositionRequirement::Relaxed
        } else {
            PositionRequirement::General
        });
    let n = c.vertex_count();
    for _ in 0..INIT_ATTEMPTS {
        let mut coords = vec![LatticePoint::ORIGIN; n];
        match binding {
            None => {
                for p in coords.iter_mut() {
                    *p = LatticePoint::new(
                        rng.gen_range(-inner_half..=inner_half),
                        rng.gen_range(-inner_half..=inner_half),
                        rng.gen_range(-inner_half..=inner_half),
                    );
                }
            }
            Some(b) => {
                for &rep in b.orbit_representatives() {
                    let pos = draw_in_fixed_set(b, rep, inner_half, rng);
                    b.adapt(&mut coords, rep, pos)
                        .expect("drawn position satisfies the constraint");
                }
            }
        }
        if position_ok_full(c, &coords, requirement) {
            return Ok(CoordinateAssignment {
                coords,
                inner_half,
                outer_half,
            });
        }
    }
    Err(SearchError::InitFailed(INIT_ATTEMPTS))
}

fn draw_in_fixed_set(
    b: &SymmetryBinding,
    rep: usize,
    half: i64,
    rng: &mut ChaCha8Rng,
) -> LatticePoint {
    use crate::symmetry::FixedSet;
    match b.constraint_of(rep) {
        FixedSet::Everything => LatticePoint::new(
            rng.gen_range(-half..=half),
            rng.gen_range(-half..=half),
            rng.gen_range(-half..=half),
        ),
        FixedSet::Plane { normal_axis } => {
            let mut v = [
                rng.gen_range(-half..=half),
                rng.gen_range(-half..=half),
                rng.gen_range(-half..=half),
            ];
            v[normal_axis] = 0;
            LatticePoint::new(v[0], v[1], v[2])
        }
        FixedSet::Axis { dir } => {
            let t = rng.gen_range(-half..=half);
            LatticePoint::new(t * dir[0], t * dir[1], t * dir[2])
        }
        FixedSet::Origin => LatticePoint::ORIGIN,
    }
}

fn position_ok_full(
    c: &SurfaceComplex,
    coords: &[LatticePoint],
    requirement: PositionRequirement,
) -> bool {
    match requirement {
        PositionRequirement::General => exactgeom::in_general_position(coords),
        PositionRequirement::Relaxed => exactgeom::in_relaxed_general_position(c, coords),
    }
}

/// One live search instance.
pub struct SearchState<'a> {
    complex: &'a SurfaceComplex,
    config: SearchConfig,
    binding: Option<SymmetryBinding>,
    requirement: PositionRequirement,
    evaluator: Evaluator,
    coords: Vec<LatticePoint>,
    inner_half: i64,
    outer_half: i64,
    rng: ChaCha8Rng,
    steps: u64,
    restarts: u64,
    plateau_steps: u64,
    /// (representative vertex, unit delta) generator moves.
    moves: Vec<(usize, (i64, i64, i64))>,
    /// Per move: the orbit members with matrices mapping the representative's
    /// new position to theirs.
    orbit_of: Vec<Vec<(usize, Mat3)>>,
    order: Vec<u32>,
    moved: Vec<usize>,
    undo: Vec<(usize, LatticePoint)>,
    probe_buf: Vec<(usize, Option<PairHit>)>,
    stamp: Vec<bool>,
    moved_flag: Vec<bool>,
    disjoint_edge_pairs: Vec<(usize, usize)>,
    trace: Vec<TraceEvent>,
}

enum StepResult {
    Stepped,
    DeadEnd,
}

impl<'a> SearchState<'a> {
    pub fn new(
        c: &'a SurfaceComplex,
        config: SearchConfig,
        binding: Option<SymmetryBinding>,
        rng: ChaCha8Rng,
    ) -> Self {
        let requirement = config
            .position_override
            .unwrap_or(if binding.is_some() {
                PositionRequirement::Relaxed
            } else {
                PositionRequirement::General
            });
        let schedule = build_pair_schedule(c, config.mode);
        let evaluator = Evaluator::new(schedule);
        let n = c.vertex_count();
        let mut moves = Vec::new();
        let mut orbit_of = Vec::new();
        match &binding {
            None => {
                for v in 0..n {
                    for d in [
                        (1, 0, 0),
                        (-1, 0, 0),
                        (0, 1, 0),
                        (0, -1, 0),
                        (0, 0, 1),
                        (0, 0, -1),
                    ] {
                        moves.push((v, d));
                        orbit_of.push(vec![(v, IDENTITY)]);
                    }
                }
            }
            Some(b) => {
                for (rep, d) in b.symmetric_move_set() {
                    moves.push((rep, d));
                    let members: Vec<(usize, Mat3)> = (0..n)
                        .filter(|&v| b.representative_of(v) == rep)
                        .map(|v| (v, b.word_of(v).1))
                        .collect();
                    orbit_of.push(members);
                }
            }
        }
        let edges = c.edges();
        let mut disjoint_edge_pairs = Vec::new();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                if !edges[i].iter().any(|v| edges[j].contains(v)) {
                    disjoint_edge_pairs.push((i, j));
                }
            }
        }
        let order = (0..moves.len() as u32).collect();
        let inner_half = config.inner_box / 2;
        let outer_half = config.outer_box / 2;
        SearchState {
            complex: c,
            config,
            binding,
            requirement,
            evaluator,
            coords: vec![LatticePoint::ORIGIN; n],
            inner_half,
            outer_half,
            rng,
            steps: 0,
            restarts: 0,
            plateau_steps: 0,
            moves,
            orbit_of,
            order,
            moved: Vec::new(),
            undo: Vec::new(),
            probe_buf: Vec::new(),
            stamp: Vec::new(),
            moved_flag: vec![false; n],
            disjoint_edge_pairs,
            trace: Vec::new(),
        }
    }

    pub fn coords(&self) -> &[LatticePoint] {
        &self.coords
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    fn init_coords(&mut self) -> Result<(), SearchError> {
        let assignment = initialize(
            self.complex,
            &self.config,
            self.binding.as_ref(),
            &mut self.rng,
        )?;
        self.coords = assignment.coords;
        self.evaluator
            .evaluate(self.complex, &self.coords)
            .expect("position requirement excludes degenerate intersections");
        Ok(())
    }

    /// Apply move `idx`; returns false (state unchanged) when it leaves the
    /// outer box. On success `self.moved` lists the repositioned vertices.
    fn apply_move(&mut self, idx: usize) -> bool {
        let (rep, delta) = self.moves[idx];
        let new_pos = self.coords[rep].offset(delta);
        for (_, m) in &self.orbit_of[idx] {
            if m.apply(&new_pos).max_abs() > self.outer_half {
                return false;
            }
        }
        self.undo.clear();
        self.moved.clear();
        for (v, m) in &self.orbit_of[idx] {
            self.undo.push((*v, self.coords[*v]));
            self.moved.push(*v);
            self.coords[*v] = m.apply(&new_pos);
        }
        true
    }

    fn revert_move(&mut self) {
        for (v, old) in self.undo.drain(..) {
            self.coords[v] = old;
        }
        self.moved.clear();
    }

    /// Position requirement restricted to conditions involving a moved vertex.
    fn position_ok_touched(&mut self) -> bool {
        for f in self.moved_flag.iter_mut() {
            *f = false;
        }
        for &v in &self.moved {
            self.moved_flag[v] = true;
        }
        let coords = &self.coords;
        let n = coords.len();
        // injectivity
        for &v in &self.moved {
            for u in 0..n {
                if u != v && coords[u] == coords[v] {
                    return false;
                }
            }
        }
        match self.requirement {
            PositionRequirement::General => {
                for i in 0..n {
                    for j in i + 1..n {
                        for k in j + 1..n {
                            for l in k + 1..n {
                                if !(self.moved_flag[i]
                                    || self.moved_flag[j]
                                    || self.moved_flag[k]
                                    || self.moved_flag[l])
                                {
                                    continue;
                                }
                                if exactgeom::orientation(
                                    &coords[i], &coords[j], &coords[k], &coords[l],
                                ) == 0
                                {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
            PositionRequirement::Relaxed => {
                let triangles = self.complex.triangles();
                // moved vertices against all triangles not containing them,
                // and all vertices against triangles touching a moved vertex
                for (ti, t) in triangles.iter().enumerate() {
                    let _ = ti;
                    let touched = t.iter().any(|&w| self.moved_flag[w]);
                    for v in 0..n {
                        if t.contains(&v) {
                            continue;
                        }
                        if !(touched || self.moved_flag[v]) {
                            continue;
                        }
                        if exactgeom::point_on_triangle(
                            &coords[v],
                            &coords[t[0]],
                            &coords[t[1]],
                            &coords[t[2]],
                        ) {
                            return false;
                        }
                    }
                }
                let edges = self.complex.edges();
                for &(i, j) in &self.disjoint_edge_pairs {
                    let (e1, e2) = (edges[i], edges[j]);
                    let touched = e1.iter().chain(e2.iter()).any(|&w| self.moved_flag[w]);
                    if !touched {
                        continue;
                    }
                    if exactgeom::segments_intersect(
                        &coords[e1[0]],
                        &coords[e1[1]],
                        &coords[e2[0]],
                        &coords[e2[1]],
                    ) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Admissibility of a unit move from the current state: outer box plus
    /// the active position requirement on the post-adaptation assignment.
    /// Leaves the state unchanged.
    pub fn is_admissible(&mut self, vertex: usize, delta: (i64, i64, i64)) -> bool {
        let Some(idx) = self
            .moves
            .iter()
            .position(|&(v, d)| v == vertex && d == delta)
        else {
            return false; // not a generator move under the binding
        };
        if !self.apply_move(idx) {
            return false;
        }
        let ok = self.position_ok_touched();
        self.revert_move();
        ok
    }

    fn record(&mut self, kind: StepKind) {
        if self.config.trace {
            self.trace.push(TraceEvent {
                step: self.steps,
                total: self.evaluator.total(),
                kind,
            });
        }
    }

    fn paranoid_check(&self) {
        let ok = position_ok_full(self.complex, &self.coords, self.requirement);
        assert!(ok, "position requirement violated after a committed step");
        if let Some(b) = &self.binding {
            assert!(b.holds(&self.coords), "symmetry invariant violated");
        }
    }

    /// One descent step. Cycles through the moves in a fresh random order,
    /// commits the first strictly decreasing admissible move; otherwise takes
    /// the saved first admissible move or restarts, based on the ratio. The
    /// step counter advances exactly once either way.
    fn descent_step(&mut self) -> StepResult {
        self.order.shuffle(&mut self.rng);
        let current_total = self.evaluator.total();
        let mut saved: Option<usize> = None;
        for oi in 0..self.order.len() {
            let idx = self.order[oi] as usize;
            if !self.apply_move(idx) {
                continue;
            }
            if !self.position_ok_touched() {
                self.revert_move();
                continue;
            }
            let probe = {
                let SearchState {
                    evaluator,
                    complex,
                    coords,
                    moved,
                    probe_buf,
                    stamp,
                    ..
                } = self;
                evaluator.probe(complex, coords, moved, probe_buf, stamp)
            };
            if probe.is_err() {
                // the position requirement excludes degenerate intersections
                debug_assert!(false, "degenerate intersection on admissible move");
                self.revert_move();
                continue;
            }
            if saved.is_none() {
                saved = Some(idx);
            }
            let cand_total = self.evaluator.total_with(&self.probe_buf);
            let cmp = objective::objective_cmp(
                cand_total,
                current_total,
                || self.evaluator.sqlens_with(&self.probe_buf),
                || self.evaluator.sqlens_with(&[]),
            );
            if cmp == std::cmp::Ordering::Less {
                let probe_buf = std::mem::take(&mut self.probe_buf);
                self.evaluator.commit(&probe_buf);
                self.probe_buf = probe_buf;
                self.undo.clear();
                self.moved.clear();
                self.steps += 1;
                self.record(StepKind::Decrease);
                if self.config.paranoid_checks {
                    self.paranoid_check();
                }
                return StepResult::Stepped;
            }
            self.revert_move();
        }
        // local minimum: restart with the configured probability, or when no
        // admissible move exists at all
        let restart = saved.is_none() || self.rng.gen_bool(self.config.restart_ratio);
        if restart {
            if self.init_coords().is_err() {
                return StepResult::DeadEnd;
            }
            self.restarts += 1;
            self.steps += 1;
            self.record(StepKind::Restart);
            if self.config.paranoid_checks {
                self.paranoid_check();
            }
            return StepResult::Stepped;
        }
        let idx = saved.expect("saved move exists on the non-restart path");
        let applied = self.apply_move(idx);
        debug_assert!(applied, "saved move stays admissible in an unchanged state");
        let ok = self.position_ok_touched();
        debug_assert!(ok);
        {
            let SearchState {
                evaluator,
                complex,
                coords,
                moved,
                probe_buf,
                stamp,
                ..
            } = self;
            evaluator
                .probe(complex, coords, moved, probe_buf, stamp)
                .expect("saved move was probed successfully before");
        }
        let probe_buf = std::mem::take(&mut self.probe_buf);
        self.evaluator.commit(&probe_buf);
        self.probe_buf = probe_buf;
        self.undo.clear();
        self.moved.clear();
        self.steps += 1;
        self.plateau_steps += 1;
        self.record(StepKind::Plateau);
        if self.config.paranoid_checks {
            self.paranoid_check();
        }
        StepResult::Stepped
    }

    fn outcome(&mut self, status: SearchStatus, verified: bool) -> SearchOutcome {
        SearchOutcome {
            status,
            assignment: Some(CoordinateAssignment {
                coords: self.coords.clone(),
                inner_half: self.inner_half,
                outer_half: self.outer_half,
            }),
            steps_used: self.steps,
            restarts: self.restarts,
            plateau_steps: self.plateau_steps,
            verified,
            trace: std::mem::take(&mut self.trace),
        }
    }

    /// Run until the objective reaches zero (exact verification, REALIZED) or
    /// the step budget is exhausted.
    pub fn run(&mut self) -> SearchOutcome {
        if self.init_coords().is_err() {
            return SearchOutcome {
                status: SearchStatus::InitFailed,
                assignment: None,
                steps_used: self.steps,
                restarts: self.restarts,
                plateau_steps: self.plateau_steps,
                verified: false,
                trace: std::mem::take(&mut self.trace),
            };
        }
        loop {
            if self.evaluator.is_zero() {
                let verified = match self.config.mode {
                    Mode::Embed => objective::verify_embedding(self.complex, &self.coords),
                    Mode::Immerse => objective::verify_immersion(self.complex, &self.coords),
                };
                assert!(
                    verified,
                    "zero objective must pass the independent exact verification"
                );
                return self.outcome(SearchStatus::Realized, verified);
            }
            if self.steps >= self.config.max_steps {
                return self.outcome(SearchStatus::StepBudgetExhausted, false);
            }
            match self.descent_step() {
                StepResult::Stepped => {}
                StepResult::DeadEnd => {
                    return self.outcome(SearchStatus::InitFailed, false);
                }
            }
        }
    }
}

/// Full pipeline for one instance: the obstruction short-circuit for
/// immersions, then the descent loop.
pub fn run_search(
    c: &SurfaceComplex,
    config: &SearchConfig,
    binding: Option<SymmetryBinding>,
    rng: ChaCha8Rng,
) -> SearchOutcome {
    if config.mode == Mode::Immerse {
        let verdict = obstruction::triple_point_feasible(c);
        if verdict.proves_non_realizable() {
            return SearchOutcome {
                status: SearchStatus::Obstructed,
                assignment: None,
                steps_used: 0,
                restarts: 0,
                plateau_steps: 0,
                verified: false,
                trace: Vec::new(),
            };
        }
    }
    SearchState::new(c, config.clone(), binding, rng).run()
}
