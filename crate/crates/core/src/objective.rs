//! The intersection-length objective and its incremental evaluation.
//!
//! For embeddings the objective sums the intersection segment lengths over
//! all non-adjacent triangle pairs; for immersions only pairs with a common
//! vertex count, since those are the intersections contradicting local
//! injectivity. Adjacent triangles are never tested: under the position
//! requirement they cannot meet outside their shared edge.
//!
//! The evaluator caches per-pair results so that a unit move only recomputes
//! pairs touching the moved vertices. Totals are always re-summed over the
//! cache in pair order, so a delta evaluation reproduces the full evaluation
//! bit for bit.

use std::cmp::Ordering;

use num::BigRational;
use thiserror::Error;

use crate::complex::SurfaceComplex;
use crate::exactgeom::{
    self, triangle_pair_intersection, DegenerateIntersection, LatticePoint,
};

/// What counts as a conflict: embedding (all non-adjacent pairs) or immersion
/// (non-adjacent pairs sharing a vertex).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Mode {
    Embed,
    Immerse,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Embed => "embed",
            Mode::Immerse => "immerse",
        }
    }
}

/// Precomputed list of triangle pairs to test.
#[derive(Debug, Clone)]
pub struct PairSchedule {
    mode: Mode,
    pairs: Vec<(usize, usize)>,
    /// vertex -> indices into `pairs` of pairs with a triangle incident to it
    vertex_pairs: Vec<Vec<usize>>,
}

impl PairSchedule {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pairs_of_vertex(&self, v: usize) -> &[usize] {
        &self.vertex_pairs[v]
    }
}

/// Deterministic pair list: all unordered non-adjacent pairs (embed), or the
/// subset sharing at least one vertex (immerse).
pub fn build_pair_schedule(c: &SurfaceComplex, mode: Mode) -> PairSchedule {
    let f2 = c.triangles().len();
    let mut pairs = Vec::new();
    for i in 0..f2 {
        for j in i + 1..f2 {
            let shared = c.shared_vertices(i, j);
            if shared >= 2 {
                continue; // adjacent
            }
            if mode == Mode::Immerse && shared == 0 {
                continue;
            }
            pairs.push((i, j));
        }
    }
    let mut vertex_pairs = vec![Vec::new(); c.vertex_count()];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let mut verts: Vec<usize> = c.triangles()[i]
            .iter()
            .chain(c.triangles()[j].iter())
            .copied()
            .collect();
        verts.sort_unstable();
        verts.dedup();
        for v in verts {
            vertex_pairs[v].push(k);
        }
    }
    PairSchedule {
        mode,
        pairs,
        vertex_pairs,
    }
}

/// One intersecting pair in the cache.
#[derive(Debug, Clone)]
pub struct PairHit {
    pub squared_length: BigRational,
    pub length: f64,
}

/// Objective value with the list of contributing pairs.
#[derive(Debug, Clone)]
pub struct ObjectiveValue {
    pub total: f64,
    pub contributing_pairs: Vec<((usize, usize), f64)>,
}

impl ObjectiveValue {
    pub fn is_zero(&self) -> bool {
        self.contributing_pairs.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum DeltaError {
    #[error("no cached baseline evaluation")]
    NoBaseline,
    #[error("vertex {0} is not a vertex of the complex")]
    UnknownVertex(usize),
    #[error(transparent)]
    Degenerate(#[from] DegenerateIntersection),
}

/// Pair-indexed objective cache supporting full and incremental evaluation.
#[derive(Debug, Clone)]
pub struct Evaluator {
    schedule: PairSchedule,
    cache: Vec<Option<PairHit>>,
    baseline: bool,
}

impl Evaluator {
    pub fn new(schedule: PairSchedule) -> Self {
        let cache = vec![None; schedule.pairs.len()];
        Evaluator {
            schedule,
            cache,
            baseline: false,
        }
    }

    pub fn schedule(&self) -> &PairSchedule {
        &self.schedule
    }

    fn pair_triangles(
        &self,
        c: &SurfaceComplex,
        coords: &[LatticePoint],
        k: usize,
    ) -> ([LatticePoint; 3], [LatticePoint; 3]) {
        let (i, j) = self.schedule.pairs[k];
        let ti = c.triangles()[i];
        let tj = c.triangles()[j];
        (
            [coords[ti[0]], coords[ti[1]], coords[ti[2]]],
            [coords[tj[0]], coords[tj[1]], coords[tj[2]]],
        )
    }

    fn compute_pair(
        &self,
        c: &SurfaceComplex,
        coords: &[LatticePoint],
        k: usize,
    ) -> Result<Option<PairHit>, DegenerateIntersection> {
        let (t1, t2) = self.pair_triangles(c, coords, k);
        Ok(triangle_pair_intersection(&t1, &t2)?.map(|seg| PairHit {
            squared_length: seg.squared_length().clone(),
            length: seg.length(),
        }))
    }

    /// Full evaluation: recomputes every scheduled pair and refreshes the cache.
    pub fn evaluate(
        &mut self,
        c: &SurfaceComplex,
        coords: &[LatticePoint],
    ) -> Result<ObjectiveValue, DegenerateIntersection> {
        for k in 0..self.schedule.pairs.len() {
            self.cache[k] = self.compute_pair(c, coords, k)?;
        }
        self.baseline = true;
        Ok(self.current())
    }

    /// Incremental evaluation after a single vertex moved; recomputes only
    /// pairs incident to it.
    pub fn evaluate_delta(
        &mut self,
        c: &SurfaceComplex,
        coords: &[LatticePoint],
        moved_vertex: usize,
    ) -> Result<ObjectiveValue, DeltaError> {
        if !self.baseline {
            return Err(DeltaError::NoBaseline);
        }
        if moved_vertex >= c.vertex_count() {
            return Err(DeltaError::UnknownVertex(moved_vertex));
        }
        for &k in self.schedule.pairs_of_vertex(moved_vertex) {
            self.cache[k] = self.compute_pair(c, coords, k)?;
        }
        Ok(self.current())
    }

    /// The cached objective, summed in pair order.
    pub fn current(&self) -> ObjectiveValue {
        let mut total = 0.0f64;
        let mut contributing_pairs = Vec::new();
        for (k, hit) in self.cache.iter().enumerate() {
            if let Some(h) = hit {
                total += h.length;
                contributing_pairs.push((self.schedule.pairs[k], h.length));
            }
        }
        ObjectiveValue {
            total,
            contributing_pairs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cache.iter().all(|h| h.is_none())
    }

    /// Recompute the pairs touching any of `moved` into `out` without
    /// committing; entries are (pair index, new value).
    pub fn probe(
        &self,
        c: &SurfaceComplex,
        coords: &[LatticePoint],
        moved: &[usize],
        out: &mut Vec<(usize, Option<PairHit>)>,
        stamp: &mut Vec<bool>,
    ) -> Result<(), DegenerateIntersection> {
        out.clear();
        stamp.clear();
        stamp.resize(self.schedule.pairs.len(), false);
        for &v in moved {
            for &k in self.schedule.pairs_of_vertex(v) {
                if !stamp[k] {
                    stamp[k] = true;
                    out.push((k, self.compute_pair(c, coords, k)?));
                }
            }
        }
        Ok(())
    }

    /// Total as if `overrides` replaced the cache entries, bit-identical to a
    /// commit followed by `current()`.
    pub fn total_with(&self, overrides: &[(usize, Option<PairHit>)]) -> f64 {
        let mut total = 0.0f64;
        // overrides arrive in probe order; the sum must go in pair order
        let mut sorted: Vec<&(usize, Option<PairHit>)> = overrides.iter().collect();
        sorted.sort_unstable_by_key(|(k, _)| *k);
        let mut si = sorted.iter().peekable();
        for (k, hit) in self.cache.iter().enumerate() {
            let val = match si.peek() {
                Some((ok, ov)) if *ok == k => {
                    si.next();
                    ov.as_ref()
                }
                _ => hit.as_ref(),
            };
            if let Some(h) = val {
                total += h.length;
            }
        }
        total
    }

    /// Exact squared lengths (descending) as if `overrides` were applied.
    pub fn sqlens_with(&self, overrides: &[(usize, Option<PairHit>)]) -> Vec<BigRational> {
        let mut sorted: Vec<&(usize, Option<PairHit>)> = overrides.iter().collect();
        sorted.sort_unstable_by_key(|(k, _)| *k);
        let mut si = sorted.iter().peekable();
        let mut out = Vec::new();
        for (k, hit) in self.cache.iter().enumerate() {
            let val = match si.peek() {
                Some((ok, ov)) if *ok == k => {
                    si.next();
                    ov.as_ref()
                }
                _ => hit.as_ref(),
            };
            if let Some(h) = val {
                out.push(h.squared_length.clone());
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn commit(&mut self, overrides: &[(usize, Option<PairHit>)]) {
        for (k, v) in overrides {
            self.cache[*k] = v.clone();
        }
        self.baseline = true;
    }

    pub fn total(&self) -> f64 {
        self.total_with(&[])
    }
}

/// Convenience wrapper: build a throwaway evaluator and run it once.
pub fn evaluate(
    schedule: &PairSchedule,
    c: &SurfaceComplex,
    coords: &[LatticePoint],
) -> Result<ObjectiveValue, DegenerateIntersection> {
    Evaluator::new(schedule.clone()).evaluate(c, coords)
}

/// Objective comparison: floating totals, with an exact lexicographic
/// comparison of the descending squared lengths when the floating difference
/// is below 1e-9.
pub fn objective_cmp(
    total_a: f64,
    total_b: f64,
    sqlens_a: impl FnOnce() -> Vec<BigRational>,
    sqlens_b: impl FnOnce() -> Vec<BigRational>,
) -> Ordering {
    if (total_a - total_b).abs() < 1e-9 {
        let a = sqlens_a();
        let b = sqlens_b();
        for (x, y) in a.iter().zip(b.iter()) {
            match x.cmp(y) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        a.len().cmp(&b.len())
    } else if total_a < total_b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Closed intersection test of a segment and a triangle, by sign predicates
/// only. Used by the independent verification, not by the objective.
fn segment_meets_triangle(p: &LatticePoint, q: &LatticePoint, t: &[LatticePoint; 3]) -> bool {
    let op = exactgeom::orientation(&t[0], &t[1], &t[2], p);
    let oq = exactgeom::orientation(&t[0], &t[1], &t[2], q);
    if op == 0 && oq == 0 {
        // segment in the triangle's plane
        return exactgeom::point_on_triangle(p, &t[0], &t[1], &t[2])
            || exactgeom::point_on_triangle(q, &t[0], &t[1], &t[2])
            || exactgeom::segments_intersect(p, q, &t[0], &t[1])
            || exactgeom::segments_intersect(p, q, &t[1], &t[2])
            || exactgeom::segments_intersect(p, q, &t[0], &t[2]);
    }
    if op == 0 {
        return exactgeom::point_on_triangle(p, &t[0], &t[1], &t[2]);
    }
    if oq == 0 {
        return exactgeom::point_on_triangle(q, &t[0], &t[1], &t[2]);
    }
    if op == oq {
        return false;
    }
    // strict straddle: the crossing point is in the closed triangle iff the
    // three wedge signs agree weakly
    let w0 = exactgeom::orientation(p, q, &t[0], &t[1]);
    let w1 = exactgeom::orientation(p, q, &t[1], &t[2]);
    let w2 = exactgeom::orientation(p, q, &t[2], &t[0]);
    let has_pos = w0 > 0 || w1 > 0 || w2 > 0;
    let has_neg = w0 < 0 || w1 < 0 || w2 < 0;
    !(has_pos && has_neg)
}

/// Does the edge `[v, p]` (with `v` a corner of `t`) meet `t` anywhere beyond
/// `v` itself?
fn edge_through_corner_extra_contact(
    v: &LatticePoint,
    p: &LatticePoint,
    t: &[LatticePoint; 3],
) -> bool {
    let others: Vec<&LatticePoint> = t.iter().filter(|w| *w != v).collect();
    debug_assert_eq!(others.len(), 2);
    let (a, b) = (others[0], others[1]);
    if exactgeom::orientation(v, a, b, p) != 0 {
        return false; // transversal: only the corner itself
    }
    // in-plane: does the direction from v towards p enter the closed corner
    // cone spanned by (a - v) and (b - v)?
    let n = exactgeom::cross(exactgeom::sub(a, v), exactgeom::sub(b, v));
    let d = exactgeom::sub(p, v);
    let da = exactgeom::sub(a, v);
    let db = exactgeom::sub(b, v);
    let side_a = exactgeom::sign(exactgeom::dot(exactgeom::cross(da, d), n));
    let side_b = exactgeom::sign(exactgeom::dot(exactgeom::cross(d, db), n));
    side_a >= 0 && side_b >= 0
}

/// Independent exact embedding check: relaxed general position, vertex
/// disjoint non-adjacent pairs have disjoint images, and pairs sharing one
/// vertex meet exactly in that corner.
pub fn verify_embedding(c: &SurfaceComplex, coords: &[LatticePoint]) -> bool {
    if !exactgeom::in_relaxed_general_position(c, coords) {
        return false;
    }
    let f2 = c.triangles().len();
    for i in 0..f2 {
        for j in i + 1..f2 {
            match c.shared_vertices(i, j) {
                0 => {
                    if closed_triangles_intersect(c, coords, i, j) {
                        return false;
                    }
                }
                1 => {
                    if shared_vertex_extra_contact(c, coords, i, j) {
                        return false;
                    }
                }
                _ => {}
            }
        }
    }
    true
}

/// Independent exact immersion check: relaxed general position and every
/// non-adjacent pair with a common vertex meets exactly in that corner,
/// certifying local injectivity.
pub fn verify_immersion(c: &SurfaceComplex, coords: &[LatticePoint]) -> bool {
    if !exactgeom::in_relaxed_general_position(c, coords) {
        return false;
    }
    let f2 = c.triangles().len();
    for i in 0..f2 {
        for j in i + 1..f2 {
            if c.shared_vertices(i, j) == 1 && shared_vertex_extra_contact(c, coords, i, j) {
                return false;
            }
        }
    }
    true
}

fn triangle_points(c: &SurfaceComplex, coords: &[LatticePoint], i: usize) -> [LatticePoint; 3] {
    let t = c.triangles()[i];
    [coords[t[0]], coords[t[1]], coords[t[2]]]
}

fn closed_triangles_intersect(
    c: &SurfaceComplex,
    coords: &[LatticePoint],
    i: usize,
    j: usize,
) -> bool {
    let t1 = triangle_points(c, coords, i);
    let t2 = triangle_points(c, coords, j);
    const E: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];
    E.iter().any(|&(a, b)| segment_meets_triangle(&t1[a], &t1[b], &t2))
        || E.iter().any(|&(a, b)| segment_meets_triangle(&t2[a], &t2[b], &t1))
}

/// For a pair sharing exactly one vertex: any contact besides the shared
/// corner point?
fn shared_vertex_extra_contact(
    c: &SurfaceComplex,
    coords: &[LatticePoint],
    i: usize,
    j: usize,
) -> bool {
    let ti = c.triangles()[i];
    let tj = c.triangles()[j];
    let v = *ti.iter().find(|v| tj.contains(v)).unwrap();
    let t1 = triangle_points(c, coords, i);
    let t2 = triangle_points(c, coords, j);
    let vp = coords[v];
    // opposite edges (not through the shared vertex) against the other triangle
    let opp = |t: &[usize; 3], pts: &[LatticePoint; 3]| -> (LatticePoint, LatticePoint) {
        let rest: Vec<usize> = (0..3).filter(|&k| t[k] != v).collect();
        (pts[rest[0]], pts[rest[1]])
    };
    let (p1, q1) = opp(&ti, &t1);
    let (p2, q2) = opp(&tj, &t2);
    if segment_meets_triangle(&p1, &q1, &t2) || segment_meets_triangle(&p2, &q2, &t1) {
        return true;
    }
    // edges through the shared vertex against the other triangle
    for w in [p1, q1] {
        if edge_through_corner_extra_contact(&vp, &w, &t2) {
            return true;
        }
    }
    for w in [p2, q2] {
        if edge_through_corner_extra_contact(&vp, &w, &t1) {
            return true;
        }
    }
    false
}
