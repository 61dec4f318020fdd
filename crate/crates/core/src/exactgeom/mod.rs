//! Exact integer and rational geometric primitives.
//!
//! All sign decisions are made in `i128` arithmetic, which is exact for
//! coordinates up to `MAX_COORD` (`2^20`): a 3x3 orientation determinant of
//! differences of such coordinates is bounded by `6 * 2^63 < 2^127`. Inputs
//! are asserted against this bound so overflow is impossible rather than
//! silent. Intersection segments carry arbitrary-precision rational
//! coordinates because products of clipping parameters can exceed 128 bits.

mod intersect;

pub use intersect::{
    triangle_pair_intersection, DegenerateIntersection, IntersectionSegment, RationalPoint,
};

use crate::complex::SurfaceComplex;
use serde::{Deserialize, Serialize};

/// Largest coordinate magnitude for which the i128 predicates are overflow-free.
pub const MAX_COORD: i64 = 1 << 20;

/// A point of the integer lattice Z^3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0, z: 0 };

    pub fn new(x: i64, y: i64, z: i64) -> Self {
        LatticePoint { x, y, z }
    }

    pub fn coords(&self) -> [i64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn offset(&self, d: (i64, i64, i64)) -> LatticePoint {
        LatticePoint::new(self.x + d.0, self.y + d.1, self.z + d.2)
    }

    /// Chebyshev norm, used for bounding-box membership.
    pub fn max_abs(&self) -> i64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

impl From<[i64; 3]> for LatticePoint {
    fn from(c: [i64; 3]) -> Self {
        LatticePoint::new(c[0], c[1], c[2])
    }
}

#[inline]
fn check_range(p: &LatticePoint) {
    assert!(
        p.max_abs() <= MAX_COORD,
        "coordinate magnitude {} exceeds the exact-arithmetic bound {}",
        p.max_abs(),
        MAX_COORD
    );
}

#[inline]
pub(crate) fn sub(a: &LatticePoint, b: &LatticePoint) -> [i128; 3] {
    [
        a.x as i128 - b.x as i128,
        a.y as i128 - b.y as i128,
        a.z as i128 - b.z as i128,
    ]
}

#[inline]
pub(crate) fn cross(u: [i128; 3], v: [i128; 3]) -> [i128; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

#[inline]
pub(crate) fn dot(u: [i128; 3], v: [i128; 3]) -> i128 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

#[inline]
pub(crate) fn sign(v: i128) -> i8 {
    match v.cmp(&0) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

/// Sign of the determinant of (b-a, c-a, d-a): +1 if d lies on the positive
/// side of the oriented plane through a, b, c; 0 iff the four points are
/// coplanar.
pub fn orientation(a: &LatticePoint, b: &LatticePoint, c: &LatticePoint, d: &LatticePoint) -> i8 {
    check_range(a);
    check_range(b);
    check_range(c);
    check_range(d);
    sign(dot(cross(sub(b, a), sub(c, a)), sub(d, a)))
}

/// True iff the points are pairwise distinct and every 4-subset is affinely
/// independent.
pub fn in_general_position(points: &[LatticePoint]) -> bool {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                return false;
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    if orientation(&points[i], &points[j], &points[k], &points[l]) == 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Closed containment of `p` in the triangle `a b c` (boundary included).
///
/// Degenerate (collinear) triangles are treated as their convex hull segment.
pub fn point_on_triangle(
    p: &LatticePoint,
    a: &LatticePoint,
    b: &LatticePoint,
    c: &LatticePoint,
) -> bool {
    check_range(p);
    check_range(a);
    check_range(b);
    check_range(c);
    let n = cross(sub(b, a), sub(c, a));
    if n == [0, 0, 0] {
        // collinear corners: hull is the longest of the three edges
        return point_on_segment(p, a, b)
            || point_on_segment(p, a, c)
            || point_on_segment(p, b, c);
    }
    if dot(n, sub(p, a)) != 0 {
        return false;
    }
    dot(cross(sub(b, a), sub(p, a)), n) >= 0
        && dot(cross(sub(c, b), sub(p, b)), n) >= 0
        && dot(cross(sub(a, c), sub(p, c)), n) >= 0
}

/// Closed containment of `p` in the segment `[a, b]`.
pub fn point_on_segment(p: &LatticePoint, a: &LatticePoint, b: &LatticePoint) -> bool {
    let ap = sub(p, a);
    let ab = sub(b, a);
    if cross(ap, ab) != [0, 0, 0] {
        return false;
    }
    let t = dot(ap, ab);
    t >= 0 && t <= dot(ab, ab)
}

/// Whether the closed segments `[a,b]` and `[c,d]` have a common point.
///
/// Segments are assumed non-degenerate (distinct endpoints).
pub fn segments_intersect(
    a: &LatticePoint,
    b: &LatticePoint,
    c: &LatticePoint,
    d: &LatticePoint,
) -> bool {
    check_range(a);
    check_range(b);
    check_range(c);
    check_range(d);
    debug_assert!(a != b && c != d);
    if sign(dot(cross(sub(b, a), sub(c, a)), sub(d, a))) != 0 {
        return false; // not coplanar
    }
    let ab = sub(b, a);
    let cd = sub(d, c);
    let n = cross(ab, cd);
    if n != [0, 0, 0] {
        // coplanar, lines not parallel: closed straddle test both ways
        let s1 = sign(dot(cross(ab, sub(c, a)), n));
        let s2 = sign(dot(cross(ab, sub(d, a)), n));
        let s3 = sign(dot(cross(cd, sub(a, c)), n));
        let s4 = sign(dot(cross(cd, sub(b, c)), n));
        return s1 as i16 * s2 as i16 <= 0 && s3 as i16 * s4 as i16 <= 0;
    }
    // parallel lines
    if cross(ab, sub(c, a)) != [0, 0, 0] {
        return false; // distinct parallel lines
    }
    // collinear: 1-d interval overlap in units of ab
    let len2 = dot(ab, ab);
    let tc = dot(sub(c, a), ab);
    let td = dot(sub(d, a), ab);
    let (lo, hi) = if tc <= td { (tc, td) } else { (td, tc) };
    hi >= 0 && lo <= len2
}

/// Relaxed general position: injectivity, no vertex image on the closed image
/// of a triangle not containing it, and disjoint images for every pair of
/// vertex-disjoint edges.
pub fn in_relaxed_general_position(c: &SurfaceComplex, coords: &[LatticePoint]) -> bool {
    assert_eq!(coords.len(), c.vertex_count());
    let n = coords.len();
    for i in 0..n {
        for j in i + 1..n {
            if coords[i] == coords[j] {
                return false;
            }
        }
    }
    for v in 0..n {
        for t in c.triangles() {
            if t.contains(&v) {
                continue;
            }
            if point_on_triangle(&coords[v], &coords[t[0]], &coords[t[1]], &coords[t[2]]) {
                return false;
            }
        }
    }
    let edges = c.edges();
    for (i, e1) in edges.iter().enumerate() {
        for e2 in edges.iter().skip(i + 1) {
            if e1.iter().any(|v| e2.contains(v)) {
                continue;
            }
            if segments_intersect(
                &coords[e1[0]],
                &coords[e1[1]],
                &coords[e2[0]],
                &coords[e2[1]],
            ) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64, z: i64) -> LatticePoint {
        LatticePoint::new(x, y, z)
    }

    #[test]
    fn orientation_unit_simplex() {
        assert_eq!(
            orientation(&p(0, 0, 0), &p(1, 0, 0), &p(0, 1, 0), &p(0, 0, 1)),
            1
        );
        assert_eq!(
            orientation(&p(0, 0, 0), &p(1, 0, 0), &p(0, 1, 0), &p(1, 1, 0)),
            0
        );
    }

    #[test]
    fn orientation_antisymmetry() {
        let pts = [p(3, 1, -2), p(-5, 2, 8), p(0, 7, 1), p(2, -4, -9)];
        let base = orientation(&pts[0], &pts[1], &pts[2], &pts[3]);
        assert_eq!(orientation(&pts[1], &pts[0], &pts[2], &pts[3]), -base);
        assert_eq!(orientation(&pts[0], &pts[2], &pts[1], &pts[3]), -base);
        assert_eq!(orientation(&pts[0], &pts[1], &pts[3], &pts[2]), -base);
    }

    #[test]
    #[should_panic(expected = "exceeds the exact-arithmetic bound")]
    fn orientation_rejects_out_of_range() {
        let big = MAX_COORD + 1;
        orientation(&p(big, 0, 0), &p(0, 0, 0), &p(0, 1, 0), &p(0, 0, 1));
    }

    #[test]
    fn orientation_extreme_range_exact() {
        // At the documented bound the determinant must still be exact.
        let m = MAX_COORD;
        assert_eq!(
            orientation(&p(-m, -m, -m), &p(m, -m, -m), &p(-m, m, -m), &p(-m, -m, m)),
            1
        );
        assert_eq!(
            orientation(&p(-m, -m, 0), &p(m, -m, 0), &p(-m, m, 0), &p(m, m, 0)),
            0
        );
    }

    #[test]
    fn general_position_unit_simplex() {
        let pts = [p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(0, 0, 1)];
        assert!(in_general_position(&pts));
        let with_coplanar = [p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(0, 0, 1), p(2, 3, 0)];
        assert!(!in_general_position(&with_coplanar));
        let with_dup = [p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(0, 0, 0)];
        assert!(!in_general_position(&with_dup));
    }

    #[test]
    fn point_in_triangle_cases() {
        let (a, b, c) = (p(1, 0, 0), p(0, 1, 0), p(-1, -1, 0));
        assert!(point_on_triangle(&p(0, 0, 0), &a, &b, &c)); // interior
        assert!(point_on_triangle(&a, &a, &b, &c)); // corner
        assert!(!point_on_triangle(&p(0, 0, 1), &a, &b, &c)); // off-plane
        assert!(!point_on_triangle(&p(5, 5, 0), &a, &b, &c)); // in-plane outside
        // boundary point on edge [a,b]
        assert!(point_on_triangle(&p(1, 0, 0), &a, &b, &c));
    }

    #[test]
    fn segment_intersection_cases() {
        // crossing at (1,1,0)
        assert!(segments_intersect(
            &p(0, 0, 0),
            &p(2, 2, 0),
            &p(0, 2, 0),
            &p(2, 0, 0)
        ));
        // endpoint touch counts (closed)
        assert!(segments_intersect(
            &p(0, 0, 0),
            &p(2, 2, 0),
            &p(2, 2, 0),
            &p(3, 0, 0)
        ));
        // skew
        assert!(!segments_intersect(
            &p(0, 0, 0),
            &p(2, 0, 0),
            &p(1, 1, 1),
            &p(1, -1, 1)
        ));
        // coplanar, no crossing
        assert!(!segments_intersect(
            &p(0, 0, 0),
            &p(2, 0, 0),
            &p(0, 1, 0),
            &p(2, 1, 0)
        ));
        // collinear overlapping
        assert!(segments_intersect(
            &p(0, 0, 0),
            &p(4, 0, 0),
            &p(2, 0, 0),
            &p(6, 0, 0)
        ));
        // collinear disjoint
        assert!(!segments_intersect(
            &p(0, 0, 0),
            &p(1, 0, 0),
            &p(3, 0, 0),
            &p(6, 0, 0)
        ));
    }

    #[test]
    fn relaxed_position_examples() {
        use crate::complex::parse_triangulation;
        let tet = parse_triangulation("[[1,2,3],[1,2,4],[1,3,4],[2,3,4]]").unwrap();
        let simplex = [p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(0, 0, 1)];
        assert!(in_relaxed_general_position(&tet, &simplex));
        // vertex on a triangle is rejected
        let on_face = [p(1, 1, 0), p(4, 0, 0), p(0, 4, 0), p(0, 0, 0)];
        assert!(!in_relaxed_general_position(&tet, &on_face));
        // duplicate coordinates are rejected
        let dup = [p(0, 0, 0), p(0, 0, 0), p(0, 4, 0), p(0, 0, 4)];
        assert!(!in_relaxed_general_position(&tet, &dup));
    }
}
