//! Exact intersection segments of triangle pairs.
//!
//! Sign decisions run in i128; only pairs that actually intersect (or hit a
//! degenerate sign pattern) touch arbitrary-precision rationals. The generic
//! path resolves the intersection from edge-piercing predicates alone; any
//! zero sign beyond the ones explained by a shared corner routes the pair to
//! the exact fallback, which computes the chord of each triangle across the
//! other's plane, clips it by the other triangle's edges in rational
//! arithmetic, takes the common segment, and validates the endpoints.
//!
//! Degenerate incidences (a corner on the other closed triangle, touching
//! edges, coplanar overlap) are reported as faults: they violate the position
//! requirement that callers maintain, so the caller rejects the move that
//! produced them.

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::{cross, dot, point_on_triangle, sign, sub, LatticePoint, MAX_COORD};

type Rat = BigRational;

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoint(pub [Rat; 3]);

impl RationalPoint {
    pub fn from_lattice(p: &LatticePoint) -> Self {
        RationalPoint([rat_int(p.x as i128), rat_int(p.y as i128), rat_int(p.z as i128)])
    }

    fn from_fraction(num: [i128; 3], den: i128) -> Self {
        RationalPoint([
            rat_frac(num[0], den),
            rat_frac(num[1], den),
            rat_frac(num[2], den),
        ])
    }

    pub fn approx(&self) -> [f64; 3] {
        [
            rat_to_f64(&self.0[0]),
            rat_to_f64(&self.0[1]),
            rat_to_f64(&self.0[2]),
        ]
    }

    fn equals_lattice(&self, p: &LatticePoint) -> bool {
        self.0[0] == rat_int(p.x as i128)
            && self.0[1] == rat_int(p.y as i128)
            && self.0[2] == rat_int(p.z as i128)
    }
}

/// The exact intersection segment of two triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionSegment {
    endpoints: [RationalPoint; 2],
    squared_length: Rat,
    length: f64,
}

impl IntersectionSegment {
    fn new(e1: RationalPoint, e2: RationalPoint) -> Self {
        let squared_length = squared_distance(&e1, &e2);
        let length = rat_to_f64(&squared_length).sqrt();
        IntersectionSegment {
            endpoints: [e1, e2],
            squared_length,
            length,
        }
    }

    pub fn endpoints(&self) -> &[RationalPoint; 2] {
        &self.endpoints
    }

    pub fn squared_length(&self) -> &Rat {
        &self.squared_length
    }

    /// Floating square root of the exact squared length.
    pub fn length(&self) -> f64 {
        self.length
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum DegenerateIntersection {
    #[error("triangles share two or more corners (adjacent input)")]
    AdjacentInput,
    #[error("degenerate (collinear) triangle")]
    FlatTriangle,
    #[error("a corner of one triangle lies on the other closed triangle")]
    VertexOnTriangle,
    #[error("an edge of one triangle touches an edge of the other")]
    EdgeContact,
    #[error("coplanar triangles overlap")]
    CoplanarOverlap,
    #[error("triangles touch in a single non-corner point")]
    PointContact,
}

/// Exact intersection of two closed triangles that share at most one corner.
///
/// Returns `Ok(None)` when the triangles are disjoint or touch only in a
/// shared corner; a shared corner alone never counts as a segment. Returns a
/// fault when the configuration violates the relaxed position requirement in
/// a way local to the pair.
pub fn triangle_pair_intersection(
    t1: &[LatticePoint; 3],
    t2: &[LatticePoint; 3],
) -> Result<Option<IntersectionSegment>, DegenerateIntersection> {
    for p in t1.iter().chain(t2.iter()) {
        assert!(
            p.max_abs() <= MAX_COORD,
            "coordinate magnitude exceeds the exact-arithmetic bound"
        );
    }
    let mut shared: Option<LatticePoint> = None;
    let mut shared_count = 0;
    for p in t1 {
        for q in t2 {
            if p == q {
                shared_count += 1;
                shared = Some(*p);
            }
        }
    }
    if shared_count >= 2 {
        return Err(DegenerateIntersection::AdjacentInput);
    }

    let n1 = normal(t1)?;
    let n2 = normal(t2)?;
    // signed offsets of each triangle's corners from the other's plane
    let o2 = [
        dot(n1, sub(&t2[0], &t1[0])),
        dot(n1, sub(&t2[1], &t1[0])),
        dot(n1, sub(&t2[2], &t1[0])),
    ];
    let o1 = [
        dot(n2, sub(&t1[0], &t2[0])),
        dot(n2, sub(&t1[1], &t2[0])),
        dot(n2, sub(&t1[2], &t2[0])),
    ];
    if o2.iter().all(|&o| o > 0) || o2.iter().all(|&o| o < 0) {
        return Ok(None);
    }
    if o1.iter().all(|&o| o > 0) || o1.iter().all(|&o| o < 0) {
        return Ok(None);
    }

    // A zero offset is expected only at a shared corner.
    let zeros_ok = |t: &[LatticePoint; 3], o: &[i128; 3]| {
        (0..3).all(|i| o[i] != 0 || shared == Some(t[i]))
    };
    if zeros_ok(t2, &o2) && zeros_ok(t1, &o1) {
        if let Some(result) = try_generic(t1, t2, &n1, &n2, &o1, &o2, shared) {
            return Ok(result);
        }
    }
    exact_path(t1, t2, &n1, &n2, &o1, &o2, shared)
}

/// Oriented plane normal of a triangle; fault when collinear.
fn normal(t: &[LatticePoint; 3]) -> Result<[i128; 3], DegenerateIntersection> {
    let n = cross(sub(&t[1], &t[0]), sub(&t[2], &t[0]));
    if n == [0, 0, 0] {
        Err(DegenerateIntersection::FlatTriangle)
    } else {
        Ok(n)
    }
}

/// Piercing-predicate path: valid only when every sign involved is strict.
/// Returns `None` when an ambiguous (zero) sign demands the exact fallback.
fn try_generic(
    t1: &[LatticePoint; 3],
    t2: &[LatticePoint; 3],
    n1: &[i128; 3],
    n2: &[i128; 3],
    o1: &[i128; 3],
    o2: &[i128; 3],
    shared: Option<LatticePoint>,
) -> Option<Option<IntersectionSegment>> {
    let mut pierces: Vec<RationalPoint> = Vec::with_capacity(2);
    const EDGES: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
    for &(i, j) in &EDGES {
        match edge_pierce(&t1[i], &t1[j], o1[i], o1[j], t2)? {
            Some(p) => pierces.push(p),
            None => {}
        }
        match edge_pierce(&t2[i], &t2[j], o2[i], o2[j], t1)? {
            Some(p) => pierces.push(p),
            None => {}
        }
    }
    let _ = (n1, n2);
    match (shared, pierces.len()) {
        (_, 0) => Some(None),
        (Some(v), 1) => {
            let seg =
                IntersectionSegment::new(RationalPoint::from_lattice(&v), pierces.pop().unwrap());
            Some(Some(seg))
        }
        (None, 2) => {
            let e2 = pierces.pop().unwrap();
            let e1 = pierces.pop().unwrap();
            Some(Some(IntersectionSegment::new(e1, e2)))
        }
        // A pierce count that contradicts the configuration means the strict
        // sign assumptions were not enough; let the exact path sort it out.
        _ => None,
    }
}

/// Does the open segment `p q` cross the open interior of `tri`?
/// `op`, `oq` are the signed plane offsets of `p`, `q` from `tri`'s plane.
/// Outer `None` = ambiguous sign, fall back; inner option = pierce point.
fn edge_pierce(
    p: &LatticePoint,
    q: &LatticePoint,
    op: i128,
    oq: i128,
    tri: &[LatticePoint; 3],
) -> Option<Option<RationalPoint>> {
    if sign(op) as i16 * (sign(oq) as i16) >= 0 {
        return Some(None); // no strict straddle (covers shared-corner edges)
    }
    let w0 = sign(dot(cross(sub(q, p), sub(&tri[0], p)), sub(&tri[1], p)));
    let w1 = sign(dot(cross(sub(q, p), sub(&tri[1], p)), sub(&tri[2], p)));
    let w2 = sign(dot(cross(sub(q, p), sub(&tri[2], p)), sub(&tri[0], p)));
    if w0 == 0 || w1 == 0 || w2 == 0 {
        return None; // crossing point may touch the boundary: exact path
    }
    if w0 != w1 || w1 != w2 {
        return Some(None); // crossing point lies outside the triangle
    }
    // pierce point: p + t (q - p) with t = op / (op - oq)
    let den = op - oq;
    let d = [
        q.x as i128 - p.x as i128,
        q.y as i128 - p.y as i128,
        q.z as i128 - p.z as i128,
    ];
    let num = [
        p.x as i128 * den + op * d[0],
        p.y as i128 * den + op * d[1],
        p.z as i128 * den + op * d[2],
    ];
    Some(Some(RationalPoint::from_fraction(num, den)))
}

/// Chord-clipping fallback handling all zero-sign configurations exactly.
fn exact_path(
    t1: &[LatticePoint; 3],
    t2: &[LatticePoint; 3],
    n1: &[i128; 3],
    n2: &[i128; 3],
    o1: &[i128; 3],
    o2: &[i128; 3],
    shared: Option<LatticePoint>,
) -> Result<Option<IntersectionSegment>, DegenerateIntersection> {
    // Corner incidences are position-requirement violations.
    for i in 0..3 {
        if shared != Some(t2[i]) && point_on_triangle(&t2[i], &t1[0], &t1[1], &t1[2]) {
            return Err(DegenerateIntersection::VertexOnTriangle);
        }
        if shared != Some(t1[i]) && point_on_triangle(&t1[i], &t2[0], &t2[1], &t2[2]) {
            return Err(DegenerateIntersection::VertexOnTriangle);
        }
    }
    if o2 == &[0, 0, 0] {
        return coplanar_case(t1, t2, shared);
    }

    let chord2 = chord_on_plane(t2, o2);
    let chord1 = chord_on_plane(t1, o1);
    let seg_a = clip_to_triangle(&chord2, t1, n1);
    let seg_b = clip_to_triangle(&chord1, t2, n2);
    let common = match (seg_a, seg_b) {
        (Some(a), Some(b)) => common_segment(&a, &b),
        _ => None,
    };
    let Some((e1, e2)) = common else {
        return Ok(None);
    };
    if e1 == e2 {
        return if shared.map_or(false, |v| e1.equals_lattice(&v)) {
            Ok(None) // contact in the shared corner only
        } else {
            Err(DegenerateIntersection::PointContact)
        };
    }
    validate_endpoint(&e1, t1, t2, n1, n2, shared)?;
    validate_endpoint(&e2, t1, t2, n1, n2, shared)?;
    Ok(Some(IntersectionSegment::new(e1, e2)))
}

/// Both triangles in one plane: under the position requirement the only legal
/// contact is a shared corner; anything else is a violation.
fn coplanar_case(
    t1: &[LatticePoint; 3],
    t2: &[LatticePoint; 3],
    shared: Option<LatticePoint>,
) -> Result<Option<IntersectionSegment>, DegenerateIntersection> {
    const EDGES: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
    for &(i, j) in &EDGES {
        for &(k, l) in &EDGES {
            let (a, b) = (&t1[i], &t1[j]);
            let (c, d) = (&t2[k], &t2[l]);
            let edge1_shared = shared.map_or(false, |v| *a == v || *b == v);
            let edge2_shared = shared.map_or(false, |v| *c == v || *d == v);
            if edge1_shared && edge2_shared {
                // Edges meeting in the shared corner: any further contact
                // means collinear overlap.
                let v = shared.unwrap();
                let p = if *a == v { b } else { a };
                let q = if *c == v { d } else { c };
                let vp = sub(p, &v);
                let vq = sub(q, &v);
                if cross(vp, vq) == [0, 0, 0] && dot(vp, vq) > 0 {
                    return Err(DegenerateIntersection::EdgeContact);
                }
            } else if super::segments_intersect(a, b, c, d) {
                return Err(if shared.is_some() {
                    DegenerateIntersection::EdgeContact
                } else {
                    DegenerateIntersection::CoplanarOverlap
                });
            }
        }
    }
    Ok(None)
}

/// The set of boundary points of `t` lying on the other triangle's plane,
/// given the signed offsets `o`: one or two points (three would be coplanar,
/// handled separately). Point chords are returned with equal endpoints.
fn chord_on_plane(t: &[LatticePoint; 3], o: &[i128; 3]) -> (RationalPoint, RationalPoint) {
    let mut pts: Vec<RationalPoint> = Vec::with_capacity(2);
    for i in 0..3 {
        if o[i] == 0 {
            pts.push(RationalPoint::from_lattice(&t[i]));
        }
    }
    const EDGES: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
    for &(i, j) in &EDGES {
        if sign(o[i]) as i16 * (sign(o[j]) as i16) < 0 {
            let den = o[i] - o[j];
            let d = [
                t[j].x as i128 - t[i].x as i128,
                t[j].y as i128 - t[i].y as i128,
                t[j].z as i128 - t[i].z as i128,
            ];
            let num = [
                t[i].x as i128 * den + o[i] * d[0],
                t[i].y as i128 * den + o[i] * d[1],
                t[i].z as i128 * den + o[i] * d[2],
            ];
            pts.push(RationalPoint::from_fraction(num, den));
        }
    }
    debug_assert!(!pts.is_empty() && pts.len() <= 2);
    let first = pts[0].clone();
    let second = pts.pop().unwrap();
    (first, second)
}

/// Clip the chord `[a, b]` (possibly a point) by the three inward edge
/// half-planes of `tri` within `tri`'s plane.
fn clip_to_triangle(
    chord: &(RationalPoint, RationalPoint),
    tri: &[LatticePoint; 3],
    n: &[i128; 3],
) -> Option<(RationalPoint, RationalPoint)> {
    let (a, b) = chord;
    const EDGES: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];
    if a == b {
        for &(i, j, k) in &EDGES {
            let f = edge_functional(&tri[i], &tri[j], &tri[k], n, a);
            if f.is_negative() {
                return None;
            }
        }
        return Some((a.clone(), b.clone()));
    }
    let mut lo = Rat::zero();
    let mut hi = rat_int(1);
    for &(i, j, k) in &EDGES {
        let fa = edge_functional(&tri[i], &tri[j], &tri[k], n, a);
        let fb = edge_functional(&tri[i], &tri[j], &tri[k], n, b);
        let a_in = !fa.is_negative();
        let b_in = !fb.is_negative();
        match (a_in, b_in) {
            (true, true) => {}
            (false, false) => return None,
            (true, false) | (false, true) => {
                let t = &fa / (&fa - &fb);
                if a_in {
                    if t < hi {
                        hi = t;
                    }
                } else if t > lo {
                    lo = t;
                }
            }
        }
        if lo > hi {
            return None;
        }
    }
    Some((lerp(a, b, &lo), lerp(a, b, &hi)))
}

/// Inward-normalized affine functional of the edge `e1 e2` of a triangle with
/// plane normal `n` and opposite corner `opp`, evaluated at the rational `x`.
fn edge_functional(
    e1: &LatticePoint,
    e2: &LatticePoint,
    opp: &LatticePoint,
    n: &[i128; 3],
    x: &RationalPoint,
) -> Rat {
    let sigma = sign(dot(cross(sub(e2, e1), sub(opp, e1)), *n));
    debug_assert!(sigma != 0, "flat triangle reached edge_functional");
    let de = [
        rat_int(e2.x as i128 - e1.x as i128),
        rat_int(e2.y as i128 - e1.y as i128),
        rat_int(e2.z as i128 - e1.z as i128),
    ];
    let w = [
        &x.0[0] - rat_int(e1.x as i128),
        &x.0[1] - rat_int(e1.y as i128),
        &x.0[2] - rat_int(e1.z as i128),
    ];
    let c = [
        &de[1] * &w[2] - &de[2] * &w[1],
        &de[2] * &w[0] - &de[0] * &w[2],
        &de[0] * &w[1] - &de[1] * &w[0],
    ];
    let f = &c[0] * rat_int(n[0]) + &c[1] * rat_int(n[1]) + &c[2] * rat_int(n[2]);
    if sigma < 0 {
        -f
    } else {
        f
    }
}

fn lerp(a: &RationalPoint, b: &RationalPoint, t: &Rat) -> RationalPoint {
    if t.is_zero() {
        return a.clone();
    }
    RationalPoint([
        &a.0[0] + t * (&b.0[0] - &a.0[0]),
        &a.0[1] + t * (&b.0[1] - &a.0[1]),
        &a.0[2] + t * (&b.0[2] - &a.0[2]),
    ])
}

/// Common sub-segment of two collinear segments (the two clipped chords both
/// equal the triangle intersection; intersecting them tolerates the point
/// cases uniformly).
fn common_segment(
    a: &(RationalPoint, RationalPoint),
    b: &(RationalPoint, RationalPoint),
) -> Option<(RationalPoint, RationalPoint)> {
    if a.0 == a.1 {
        return if point_in_collinear_segment(&a.0, b) {
            Some(a.clone())
        } else {
            None
        };
    }
    if b.0 == b.1 {
        return if point_in_collinear_segment(&b.0, a) {
            Some(b.clone())
        } else {
            None
        };
    }
    // Parametrize along a: t(x) = (x - a0) . d / d . d
    let d = rp_sub(&a.1, &a.0);
    let dd = rv_dot(&d, &d);
    let tb0 = rv_dot(&rp_sub(&b.0, &a.0), &d) / &dd;
    let tb1 = rv_dot(&rp_sub(&b.1, &a.0), &d) / &dd;
    let (blo, bhi) = if tb0 <= tb1 { (tb0, tb1) } else { (tb1, tb0) };
    let lo = if blo > Rat::zero() { blo } else { Rat::zero() };
    let hi = if bhi < rat_int(1) { bhi } else { rat_int(1) };
    if lo > hi {
        return None;
    }
    Some((lerp(&a.0, &a.1, &lo), lerp(&a.0, &a.1, &hi)))
}

fn point_in_collinear_segment(p: &RationalPoint, seg: &(RationalPoint, RationalPoint)) -> bool {
    if seg.0 == seg.1 {
        return p == &seg.0;
    }
    let d = rp_sub(&seg.1, &seg.0);
    let w = rp_sub(p, &seg.0);
    // on the line?
    let c = [
        &d[1] * &w[2] - &d[2] * &w[1],
        &d[2] * &w[0] - &d[0] * &w[2],
        &d[0] * &w[1] - &d[1] * &w[0],
    ];
    if !(c[0].is_zero() && c[1].is_zero() && c[2].is_zero()) {
        return false;
    }
    let t = rv_dot(&w, &d);
    !t.is_negative() && t <= rv_dot(&d, &d)
}

/// A segment endpoint must be the shared corner or a proper pierce: in the
/// relative interior of exactly one edge of one triangle and strictly inside
/// the other. Everything else is a degenerate incidence.
fn validate_endpoint(
    e: &RationalPoint,
    t1: &[LatticePoint; 3],
    t2: &[LatticePoint; 3],
    n1: &[i128; 3],
    n2: &[i128; 3],
    shared: Option<LatticePoint>,
) -> Result<(), DegenerateIntersection> {
    if shared.map_or(false, |v| e.equals_lattice(&v)) {
        return Ok(());
    }
    let z1 = boundary_zeros(e, t1, n1);
    let z2 = boundary_zeros(e, t2, n2);
    match (z1, z2) {
        (1, 0) | (0, 1) => Ok(()),
        (1, 1) => Err(DegenerateIntersection::EdgeContact),
        (z1, z2) if z1 >= 2 || z2 >= 2 => Err(DegenerateIntersection::VertexOnTriangle),
        _ => Err(DegenerateIntersection::PointContact),
    }
}

fn boundary_zeros(e: &RationalPoint, tri: &[LatticePoint; 3], n: &[i128; 3]) -> usize {
    const EDGES: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];
    EDGES
        .iter()
        .filter(|&&(i, j, k)| edge_functional(&tri[i], &tri[j], &tri[k], n, e).is_zero())
        .count()
}

fn squared_distance(a: &RationalPoint, b: &RationalPoint) -> Rat {
    let d = rp_sub(a, b);
    rv_dot(&d, &d)
}

fn rp_sub(a: &RationalPoint, b: &RationalPoint) -> [Rat; 3] {
    [&a.0[0] - &b.0[0], &a.0[1] - &b.0[1], &a.0[2] - &b.0[2]]
}

fn rv_dot(u: &[Rat; 3], v: &[Rat; 3]) -> Rat {
    &u[0] * &v[0] + &u[1] * &v[1] + &u[2] * &v[2]
}

fn rat_int(v: i128) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

fn rat_frac(n: i128, d: i128) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    let v = r.to_f64().expect("rational magnitude out of f64 range");
    debug_assert!(v.is_finite());
    v
}
