//! Arbitrary-precision rational oracles, implemented along different
//! algebraic routes than the library so the two sides can check each other.

use num::{BigInt, BigRational, Signed, Zero};
use trisurf::exactgeom::LatticePoint;

type Rat = BigRational;

fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

fn rv(p: &LatticePoint) -> [Rat; 3] {
    [rat(p.x), rat(p.y), rat(p.z)]
}

fn sub(a: &[Rat; 3], b: &[Rat; 3]) -> [Rat; 3] {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn cross(u: &[Rat; 3], v: &[Rat; 3]) -> [Rat; 3] {
    [
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

fn dot(u: &[Rat; 3], v: &[Rat; 3]) -> Rat {
    &u[0] * &v[0] + &u[1] * &v[1] + &u[2] * &v[2]
}

fn is_zero_vec(u: &[Rat; 3]) -> bool {
    u.iter().all(|x| x.is_zero())
}

/// Sign of the 4-point determinant by explicit big-integer cofactor
/// expansion (the library uses an i128 triple product).
pub fn orientation_oracle(
    a: &LatticePoint,
    b: &LatticePoint,
    c: &LatticePoint,
    d: &LatticePoint,
) -> i8 {
    let m = [
        [
            BigInt::from(b.x - a.x),
            BigInt::from(b.y - a.y),
            BigInt::from(b.z - a.z),
        ],
        [
            BigInt::from(c.x - a.x),
            BigInt::from(c.y - a.y),
            BigInt::from(c.z - a.z),
        ],
        [
            BigInt::from(d.x - a.x),
            BigInt::from(d.y - a.y),
            BigInt::from(d.z - a.z),
        ],
    ];
    let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    }
}

/// Closed point-in-triangle via rational barycentric coordinates projected on
/// the triangle normal.
pub fn point_on_triangle_oracle(
    p: &LatticePoint,
    a: &LatticePoint,
    b: &LatticePoint,
    c: &LatticePoint,
) -> bool {
    let (p, a, b, c) = (rv(p), rv(a), rv(b), rv(c));
    let n = cross(&sub(&b, &a), &sub(&c, &a));
    if is_zero_vec(&n) {
        // degenerate triangle: convex hull is the longest edge
        return on_segment_rat(&p, &a, &b) || on_segment_rat(&p, &a, &c) || on_segment_rat(&p, &b, &c);
    }
    if !dot(&n, &sub(&p, &a)).is_zero() {
        return false;
    }
    let nn = dot(&n, &n);
    let l1 = dot(&cross(&sub(&b, &p), &sub(&c, &p)), &n) / &nn;
    let l2 = dot(&cross(&sub(&c, &p), &sub(&a, &p)), &n) / &nn;
    let l3 = dot(&cross(&sub(&a, &p), &sub(&b, &p)), &n) / &nn;
    !l1.is_negative() && !l2.is_negative() && !l3.is_negative()
}

fn on_segment_rat(p: &[Rat; 3], a: &[Rat; 3], b: &[Rat; 3]) -> bool {
    let ab = sub(b, a);
    let ap = sub(p, a);
    if !is_zero_vec(&cross(&ap, &ab)) {
        return false;
    }
    let t = dot(&ap, &ab);
    !t.is_negative() && t <= dot(&ab, &ab)
}

/// Closed segment-segment intersection by solving the parametric system in
/// rationals (the library uses straddle sign tests).
pub fn segments_intersect_oracle(
    a: &LatticePoint,
    b: &LatticePoint,
    c: &LatticePoint,
    d: &LatticePoint,
) -> bool {
    let (a, b, c, d) = (rv(a), rv(b), rv(c), rv(d));
    let u = sub(&b, &a); // point(s) = a + s u
    let v = sub(&d, &c); // point(t) = c + t v
    let w = sub(&c, &a);
    let n = cross(&u, &v);
    if is_zero_vec(&n) {
        // parallel: intersect only if collinear with overlapping ranges
        if !is_zero_vec(&cross(&w, &u)) {
            return false;
        }
        let uu = dot(&u, &u);
        let t0 = dot(&w, &u);
        let t1 = &t0 + dot(&v, &u);
        let (lo, hi) = if t0 <= t1 {
            (t0, t1)
        } else {
            (t1.clone(), t0)
        };
        return !hi.is_negative() && lo <= uu;
    }
    // skew or crossing: the connecting vector must lie in the span of u, v
    if !dot(&w, &n).is_zero() {
        return false;
    }
    // solve s u - t v = w via projections onto (v x n) and (u x n)
    let vn = cross(&v, &n);
    let un = cross(&u, &n);
    let s = dot(&w, &vn) / dot(&u, &vn);
    let t = -(dot(&w, &un) / dot(&v, &un));
    let one = rat(1);
    !s.is_negative() && s <= one && !t.is_negative() && t <= one
}

/// Oracle verdict for a triangle pair.
#[derive(Debug, Clone, PartialEq)]
pub enum PairVerdict {
    /// The configuration violates the pair-local position requirement.
    Invalid,
    Empty,
    /// Closed triangles touch in exactly one point.
    Point,
    /// Intersection segment with this exact squared length.
    Segment(Rat),
}

/// Independent rational clipping oracle: parametrize the intersection line of
/// the two planes and clip the parameter by all six inward edge half-planes.
pub fn triangle_pair_oracle(t1: &[LatticePoint; 3], t2: &[LatticePoint; 3]) -> PairVerdict {
    if validity_violation(t1, t2).is_some() {
        return PairVerdict::Invalid;
    }
    let r1: Vec<[Rat; 3]> = t1.iter().map(rv).collect();
    let r2: Vec<[Rat; 3]> = t2.iter().map(rv).collect();
    let n1 = cross(&sub(&r1[1], &r1[0]), &sub(&r1[2], &r1[0]));
    let n2 = cross(&sub(&r2[1], &r2[0]), &sub(&r2[2], &r2[0]));
    let shared = shared_corner(t1, t2);
    let w = cross(&n1, &n2);
    if is_zero_vec(&w) {
        // parallel planes; coplanar iff t2's corners satisfy t1's plane
        let coplanar = dot(&n1, &sub(&r2[0], &r1[0])).is_zero();
        if !coplanar {
            return PairVerdict::Empty;
        }
        // a valid coplanar pair touches at most in a shared corner
        return if shared.is_some() {
            PairVerdict::Point
        } else {
            PairVerdict::Empty
        };
    }
    // a point on the line: p0 = (d1 (n2 x w) + d2 (w x n1)) / (w . w)
    let d1 = dot(&n1, &r1[0]);
    let d2 = dot(&n2, &r2[0]);
    let ww = dot(&w, &w);
    let n2w = cross(&n2, &w);
    let wn1 = cross(&w, &n1);
    let p0 = [
        (&d1 * &n2w[0] + &d2 * &wn1[0]) / &ww,
        (&d1 * &n2w[1] + &d2 * &wn1[1]) / &ww,
        (&d1 * &n2w[2] + &d2 * &wn1[2]) / &ww,
    ];
    // clip s over both triangles: f(p0 + s w) >= 0 for inward functionals
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for (tri, n) in [(&r1, &n1), (&r2, &n2)] {
        for (i, j, k) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
            let e = sub(&tri[j], &tri[i]);
            let sigma = dot(&cross(&e, &sub(&tri[k], &tri[i])), n);
            debug_assert!(!sigma.is_zero());
            let f0 = dot(&cross(&e, &sub(&p0, &tri[i])), n);
            let slope = dot(&cross(&e, &w), n);
            // normalize to sigma > 0
            let (f0, slope) = if sigma.is_negative() {
                (-f0, -slope)
            } else {
                (f0, slope)
            };
            if slope.is_zero() {
                if f0.is_negative() {
                    return PairVerdict::Empty;
                }
                continue;
            }
            let s = -&f0 / &slope;
            if slope.is_positive() {
                // f >= 0 for s >= s*
                if lo.as_ref().map_or(true, |l| s > *l) {
                    lo = Some(s);
                }
            } else if hi.as_ref().map_or(true, |h| s < *h) {
                hi = Some(s);
            }
        }
    }
    let (lo, hi) = (lo.expect("bounded"), hi.expect("bounded"));
    if lo > hi {
        PairVerdict::Empty
    } else if lo == hi {
        PairVerdict::Point
    } else {
        let len = &hi - &lo;
        PairVerdict::Segment(&ww * &len * &len)
    }
}

fn shared_corner(t1: &[LatticePoint; 3], t2: &[LatticePoint; 3]) -> Option<LatticePoint> {
    for p in t1 {
        for q in t2 {
            if p == q {
                return Some(*p);
            }
        }
    }
    None
}

/// Pair-local position violations, decided with the oracle predicates only.
fn validity_violation(t1: &[LatticePoint; 3], t2: &[LatticePoint; 3]) -> Option<&'static str> {
    for t in [t1, t2] {
        let n = cross(
            &sub(&rv(&t[1]), &rv(&t[0])),
            &sub(&rv(&t[2]), &rv(&t[0])),
        );
        if is_zero_vec(&n) {
            return Some("flat triangle");
        }
    }
    let mut shared_count = 0;
    let mut shared = None;
    for p in t1 {
        for q in t2 {
            if p == q {
                shared_count += 1;
                shared = Some(*p);
            }
        }
    }
    if shared_count >= 2 {
        return Some("adjacent input");
    }
    for p in t2 {
        if Some(*p) != shared && point_on_triangle_oracle(p, &t1[0], &t1[1], &t1[2]) {
            return Some("corner on other triangle");
        }
    }
    for p in t1 {
        if Some(*p) != shared && point_on_triangle_oracle(p, &t2[0], &t2[1], &t2[2]) {
            return Some("corner on other triangle");
        }
    }
    const E: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
    for &(i, j) in &E {
        for &(k, l) in &E {
            let (a, b) = (&t1[i], &t1[j]);
            let (c, d) = (&t2[k], &t2[l]);
            let e1_shared = shared.map_or(false, |v| *a == v || *b == v);
            let e2_shared = shared.map_or(false, |v| *c == v || *d == v);
            if e1_shared && e2_shared {
                // edges meeting in the shared corner may not overlap beyond it
                let v = shared.unwrap();
                let p = if *a == v { b } else { a };
                let q = if *c == v { d } else { c };
                let vp = sub(&rv(p), &rv(&v));
                let vq = sub(&rv(q), &rv(&v));
                if is_zero_vec(&cross(&vp, &vq)) && dot(&vp, &vq).is_positive() {
                    return Some("collinear edges through the shared corner");
                }
            } else if !e1_shared && !e2_shared {
                if segments_intersect_oracle(a, b, c, d) {
                    return Some("edge touches edge");
                }
            } else {
                // one edge ends in the shared corner: a crossing with the
                // other triangle's opposite edge is a violation unless it is
                // exactly the corner (impossible here: the corner is not on
                // that edge for valid inputs, checked above)
                if segments_intersect_oracle(a, b, c, d) {
                    return Some("edge through shared-corner edge");
                }
            }
        }
    }
    None
}
