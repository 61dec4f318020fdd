//! Lattice-compatible isometries and symmetry bindings.
//!
//! The catalog holds the isometries of R^3 that preserve Z^3 and can be
//! induced by an automorphism at this scale: a plane reflection, rotations of
//! order 2, 3, 4, the central inversion, rotatory reflections of orders 4 and
//! 6, and the dihedral rotation group D2. A binding ties an automorphism (or
//! a D2 generator pair) to the catalog matrices and maintains the constraint
//! psi(a(v)) = M psi(v) through an adaptation function: moving one orbit
//! representative repositions its whole orbit.

use thiserror::Error;

use crate::automorphisms::{orbits_of_group, Automorphism};
use crate::complex::SurfaceComplex;
use crate::exactgeom::LatticePoint;

/// 3x3 integer matrix with entries in {-1, 0, 1}, acting on lattice points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mat3(pub [[i64; 3]; 3]);

pub const IDENTITY: Mat3 = Mat3([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);

impl Mat3 {
    pub fn apply(&self, p: &LatticePoint) -> LatticePoint {
        let c = p.coords();
        let m = &self.0;
        LatticePoint::new(
            m[0][0] * c[0] + m[0][1] * c[1] + m[0][2] * c[2],
            m[1][0] * c[0] + m[1][1] * c[1] + m[1][2] * c[2],
            m[2][0] * c[0] + m[2][1] * c[1] + m[2][2] * c[2],
        )
    }

    pub fn mul(&self, other: &Mat3) -> Mat3 {
        let mut out = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        Mat3(out)
    }

    pub fn det(&self) -> i64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn is_orthogonal(&self) -> bool {
        self.mul(&self.transpose()) == IDENTITY
    }

    pub fn pow(&self, k: usize) -> Mat3 {
        let mut acc = IDENTITY;
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

/// The symmetry types the search can impose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum IsometryKind {
    Mirror,
    Rot2,
    Rot3,
    Rot4,
    Inversion,
    Rotref4,
    Rotref6,
    D2,
}

impl IsometryKind {
    pub fn name(&self) -> &'static str {
        match self {
            IsometryKind::Mirror => "mirror",
            IsometryKind::Rot2 => "rot2",
            IsometryKind::Rot3 => "rot3",
            IsometryKind::Rot4 => "rot4",
            IsometryKind::Inversion => "inversion",
            IsometryKind::Rotref4 => "rotref4",
            IsometryKind::Rotref6 => "rotref6",
            IsometryKind::D2 => "d2",
        }
    }

    pub fn from_name(s: &str) -> Option<IsometryKind> {
        Some(match s {
            "mirror" => IsometryKind::Mirror,
            "rot2" => IsometryKind::Rot2,
            "rot3" => IsometryKind::Rot3,
            "rot4" => IsometryKind::Rot4,
            "inversion" => IsometryKind::Inversion,
            "rotref4" => IsometryKind::Rotref4,
            "rotref6" => IsometryKind::Rotref6,
            "d2" => IsometryKind::D2,
            _ => return None,
        })
    }
}

/// The subset of R^3 pointwise fixed by a set of catalog matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedSet {
    Everything,
    /// An axis-aligned plane through the origin (z = 0 for the catalog mirror).
    Plane { normal_axis: usize },
    /// A lattice line through the origin with the given primitive direction.
    Axis { dir: [i64; 3] },
    Origin,
}

impl FixedSet {
    pub fn contains(&self, p: &LatticePoint) -> bool {
        match self {
            FixedSet::Everything => true,
            FixedSet::Plane { normal_axis } => p.coords()[*normal_axis] == 0,
            FixedSet::Axis { dir } => {
                let c = p.coords();
                let t = (0..3)
                    .find(|&i| dir[i] != 0)
                    .map(|i| c[i] / dir[i])
                    .unwrap_or(0);
                (0..3).all(|i| c[i] == t * dir[i])
            }
            FixedSet::Origin => *p == LatticePoint::ORIGIN,
        }
    }

    /// Unit moves that keep a point inside this set. Axis moves use the
    /// primitive lattice vector of the axis.
    pub fn unit_moves(&self) -> Vec<(i64, i64, i64)> {
        match self {
            FixedSet::Everything => vec![
                (1, 0, 0),
                (-1, 0, 0),
                (0, 1, 0),
                (0, -1, 0),
                (0, 0, 1),
                (0, 0, -1),
            ],
            FixedSet::Plane { normal_axis } => {
                let mut moves = Vec::with_capacity(4);
                for axis in 0..3 {
                    if axis != *normal_axis {
                        let mut d = [0i64; 3];
                        d[axis] = 1;
                        moves.push((d[0], d[1], d[2]));
                        d[axis] = -1;
                        moves.push((d[0], d[1], d[2]));
                    }
                }
                moves
            }
            FixedSet::Axis { dir } => {
                vec![(dir[0], dir[1], dir[2]), (-dir[0], -dir[1], -dir[2])]
            }
            FixedSet::Origin => Vec::new(),
        }
    }

    fn intersect(&self, other: &FixedSet) -> FixedSet {
        use FixedSet::*;
        match (*self, *other) {
            (Everything, s) | (s, Everything) => s,
            (Origin, _) | (_, Origin) => Origin,
            (Axis { dir: a }, Axis { dir: b }) => {
                if parallel(a, b) {
                    Axis { dir: a }
                } else {
                    Origin
                }
            }
            (Plane { normal_axis }, Axis { dir }) | (Axis { dir }, Plane { normal_axis }) => {
                if dir[normal_axis] == 0 {
                    Axis { dir }
                } else {
                    Origin
                }
            }
            (Plane { normal_axis: a }, Plane { normal_axis: b }) => {
                if a == b {
                    Plane { normal_axis: a }
                } else {
                    let mut dir = [0i64; 3];
                    dir[3 - a - b] = 1;
                    Axis { dir }
                }
            }
        }
    }
}

fn parallel(a: [i64; 3], b: [i64; 3]) -> bool {
    a[1] * b[2] == a[2] * b[1] && a[2] * b[0] == a[0] * b[2] && a[0] * b[1] == a[1] * b[0]
}

/// Fixed sublattice of a single matrix: the solution set of (M - I) x = 0.
pub fn fixed_set_of(m: &Mat3) -> FixedSet {
    if *m == IDENTITY {
        return FixedSet::Everything;
    }
    let a = [
        [m.0[0][0] - 1, m.0[0][1], m.0[0][2]],
        [m.0[1][0], m.0[1][1] - 1, m.0[1][2]],
        [m.0[2][0], m.0[2][1], m.0[2][2] - 1],
    ];
    let rows = [a[0], a[1], a[2]];
    let mut axis: Option<[i64; 3]> = None;
    'outer: for i in 0..3 {
        for j in i + 1..3 {
            let c = cross3(rows[i], rows[j]);
            if c != [0, 0, 0] {
                axis = Some(c);
                break 'outer;
            }
        }
    }
    match axis {
        Some(dir) => {
            if matvec(&a, dir) == [0, 0, 0] {
                FixedSet::Axis {
                    dir: primitive(dir),
                }
            } else {
                FixedSet::Origin
            }
        }
        None => {
            // rank 1: a fixed plane with normal along any nonzero row
            let n = rows.iter().find(|r| **r != [0, 0, 0]).unwrap();
            let normal_axis = (0..3)
                .find(|&i| n[i] != 0 && (0..3).all(|j| j == i || n[j] == 0))
                .expect("catalog mirror planes are axis-aligned");
            FixedSet::Plane { normal_axis }
        }
    }
}

fn cross3(u: [i64; 3], v: [i64; 3]) -> [i64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn matvec(a: &[[i64; 3]; 3], v: [i64; 3]) -> [i64; 3] {
    [
        a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
        a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
        a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
    ]
}

fn primitive(v: [i64; 3]) -> [i64; 3] {
    let g = gcd(gcd(v[0].abs(), v[1].abs()), v[2].abs());
    let mut out = [v[0] / g, v[1] / g, v[2] / g];
    if let Some(i) = (0..3).find(|&i| out[i] != 0) {
        if out[i] < 0 {
            for o in &mut out {
                *o = -*o;
            }
        }
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A catalog isometry: one matrix, or two generators for D2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeIsometry {
    pub kind: IsometryKind,
    pub matrices: Vec<Mat3>,
    pub order: usize,
}

impl LatticeIsometry {
    pub fn matrix(&self) -> &Mat3 {
        &self.matrices[0]
    }

    /// Fixed set of the full generated group.
    pub fn group_fixed_set(&self) -> FixedSet {
        self.matrices
            .iter()
            .fold(FixedSet::Everything, |acc, m| acc.intersect(&fixed_set_of(m)))
    }
}

/// The canonical matrices for each symmetry type.
pub fn catalog() -> Vec<LatticeIsometry> {
    let mirror = Mat3([[1, 0, 0], [0, 1, 0], [0, 0, -1]]); // (x,y,z) -> (x,y,-z)
    let rot2 = Mat3([[-1, 0, 0], [0, -1, 0], [0, 0, 1]]); // (x,y,z) -> (-x,-y,z)
    let rot3 = Mat3([[0, 0, 1], [1, 0, 0], [0, 1, 0]]); // (x,y,z) -> (z,x,y)
    let rot4 = Mat3([[0, -1, 0], [1, 0, 0], [0, 0, 1]]); // (x,y,z) -> (-y,x,z)
    let inversion = Mat3([[-1, 0, 0], [0, -1, 0], [0, 0, -1]]);
    let rotref4 = Mat3([[0, 1, 0], [-1, 0, 0], [0, 0, -1]]); // (x,y,z) -> (y,-x,-z)
    let rotref6 = Mat3([[0, 0, -1], [-1, 0, 0], [0, -1, 0]]); // (x,y,z) -> (-z,-x,-y)
    let d2a = Mat3([[1, 0, 0], [0, -1, 0], [0, 0, -1]]); // (x,y,z) -> (x,-y,-z)
    let d2b = Mat3([[-1, 0, 0], [0, 1, 0], [0, 0, -1]]); // (x,y,z) -> (-x,y,-z)
    vec![
        LatticeIsometry { kind: IsometryKind::Mirror, matrices: vec![mirror], order: 2 },
        LatticeIsometry { kind: IsometryKind::Rot2, matrices: vec![rot2], order: 2 },
        LatticeIsometry { kind: IsometryKind::Rot3, matrices: vec![rot3], order: 3 },
        LatticeIsometry { kind: IsometryKind::Rot4, matrices: vec![rot4], order: 4 },
        LatticeIsometry { kind: IsometryKind::Inversion, matrices: vec![inversion], order: 2 },
        LatticeIsometry { kind: IsometryKind::Rotref4, matrices: vec![rotref4], order: 4 },
        LatticeIsometry { kind: IsometryKind::Rotref6, matrices: vec![rotref6], order: 6 },
        LatticeIsometry { kind: IsometryKind::D2, matrices: vec![d2a, d2b], order: 2 },
    ]
}

pub fn catalog_entry(kind: IsometryKind) -> LatticeIsometry {
    catalog().into_iter().find(|i| i.kind == kind).unwrap()
}

/// Necessary conditions for an automorphism to be realizable as a given
/// catalog isometry; an empty result means no candidate.
///
/// Conditions: matching order; no triangle fixed pointwise (a flat triangle
/// cannot be pointwise fixed by any nontrivial catalog isometry); at most one
/// fixed vertex for the central inversion; on orientable complexes the matrix
/// determinant must match the orientation behavior of the automorphism.
pub fn compatible_isometries(a: &Automorphism, c: &SurfaceComplex) -> Vec<LatticeIsometry> {
    if a.is_identity() {
        return Vec::new();
    }
    if a.fixes_triangle_pointwise(c) {
        return Vec::new();
    }
    catalog()
        .into_iter()
        .filter(|iso| iso.kind != IsometryKind::D2)
        .filter(|iso| iso.order == a.order())
        .filter(|iso| iso.kind != IsometryKind::Inversion || a.fixed_vertices().len() <= 1)
        .filter(|iso| match a.orientation_preserving() {
            Some(preserving) => (iso.matrix().det() == 1) == preserving,
            None => true,
        })
        .collect()
}

/// Candidate D2 generator pairs: commuting, distinct, non-identity
/// involutions (orientation-preserving where defined, since D2 consists of
/// rotations), neither fixing a triangle pointwise, product included.
pub fn d2_candidate_pairs<'a>(
    auts: &'a [Automorphism],
    c: &SurfaceComplex,
) -> Vec<(&'a Automorphism, &'a Automorphism)> {
    let mut out = Vec::new();
    for (i, a) in auts.iter().enumerate() {
        if a.order() != 2
            || a.fixes_triangle_pointwise(c)
            || a.orientation_preserving() == Some(false)
        {
            continue;
        }
        for b in auts.iter().skip(i + 1) {
            if b.order() != 2
                || b.fixes_triangle_pointwise(c)
                || b.orientation_preserving() == Some(false)
            {
                continue;
            }
            let ab: Vec<usize> = (0..c.vertex_count()).map(|v| a.apply(b.apply(v))).collect();
            let ba: Vec<usize> = (0..c.vertex_count()).map(|v| b.apply(a.apply(v))).collect();
            if ab != ba || ab.iter().enumerate().all(|(v, &w)| v == w) {
                continue;
            }
            // the product is the third involution of the group
            if c.triangles().iter().any(|t| t.iter().all(|&v| ab[v] == v)) {
                continue;
            }
            out.push((a, b));
        }
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BindingError {
    #[error("automorphism order {aut} does not match isometry order {iso}")]
    OrderMismatch { aut: usize, iso: usize },
    #[error("generators must commute for D2")]
    NonCommuting,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("vertex {vertex} must stay in its fixed set")]
pub struct ConstraintViolation {
    pub vertex: usize,
}

/// A symmetry constraint: vertex permutation generators tied to lattice
/// matrices, with orbit structure for the adaptation function.
#[derive(Debug, Clone)]
pub struct SymmetryBinding {
    kind: IsometryKind,
    generators: Vec<(Vec<usize>, Mat3)>,
    orbit_representatives: Vec<usize>,
    /// Per vertex: its orbit representative and the matrix carrying the
    /// representative's position to this vertex.
    word: Vec<(usize, Mat3)>,
    /// Per representative: the fixed set of its stabilizer, which its
    /// position must stay in.
    constraints: Vec<(usize, FixedSet)>,
}

impl SymmetryBinding {
    /// Bind a single automorphism to a single-matrix catalog isometry.
    pub fn cyclic(
        a: &Automorphism,
        iso: &LatticeIsometry,
        c: &SurfaceComplex,
    ) -> Result<SymmetryBinding, BindingError> {
        if a.order() != iso.order {
            return Err(BindingError::OrderMismatch {
                aut: a.order(),
                iso: iso.order,
            });
        }
        Ok(Self::build(
            iso.kind,
            vec![(a.image().to_vec(), *iso.matrix())],
            c.vertex_count(),
        ))
    }

    /// Bind two commuting involutions to the D2 rotation pair.
    pub fn d2(
        a: &Automorphism,
        b: &Automorphism,
        c: &SurfaceComplex,
    ) -> Result<SymmetryBinding, BindingError> {
        let iso = catalog_entry(IsometryKind::D2);
        for g in [a, b] {
            if g.order() != 2 {
                return Err(BindingError::OrderMismatch { aut: g.order(), iso: 2 });
            }
        }
        let n = c.vertex_count();
        let ab: Vec<usize> = (0..n).map(|v| a.apply(b.apply(v))).collect();
        let ba: Vec<usize> = (0..n).map(|v| b.apply(a.apply(v))).collect();
        if ab != ba {
            return Err(BindingError::NonCommuting);
        }
        Ok(Self::build(
            IsometryKind::D2,
            vec![
                (a.image().to_vec(), iso.matrices[0]),
                (b.image().to_vec(), iso.matrices[1]),
            ],
            n,
        ))
    }

    fn build(kind: IsometryKind, generators: Vec<(Vec<usize>, Mat3)>, n: usize) -> SymmetryBinding {
        let perms: Vec<Vec<usize>> = generators.iter().map(|(p, _)| p.clone()).collect();
        let orbits = orbits_of_group(&perms, n);
        let mut word: Vec<(usize, Mat3)> = vec![(usize::MAX, IDENTITY); n];
        let mut orbit_representatives = Vec::with_capacity(orbits.len());
        let mut constraints = Vec::with_capacity(orbits.len());
        let elements = group_elements(&generators, n);
        for orbit in &orbits {
            let rep = orbit[0]; // lowest label
            orbit_representatives.push(rep);
            word[rep] = (rep, IDENTITY);
            let mut queue = vec![rep];
            while let Some(v) = queue.pop() {
                let (_, mv) = word[v];
                for (perm, mat) in &generators {
                    let w = perm[v];
                    if word[w].0 == usize::MAX {
                        word[w] = (rep, mat.mul(&mv));
                        queue.push(w);
                    }
                }
            }
            // Stabilizer elements of the representative pin its position to
            // their common fixed set; the generated group is small (cyclic of
            // order <= 6 or Klein four), so enumerate it.
            let mut fix = FixedSet::Everything;
            for (perm, mat) in &elements {
                if perm[rep] == rep && *mat != IDENTITY {
                    fix = fix.intersect(&fixed_set_of(mat));
                }
            }
            constraints.push((rep, fix));
        }
        SymmetryBinding {
            kind,
            generators,
            orbit_representatives,
            word,
            constraints,
        }
    }

    pub fn kind(&self) -> IsometryKind {
        self.kind
    }

    pub fn generators(&self) -> &[(Vec<usize>, Mat3)] {
        &self.generators
    }

    pub fn orbit_representatives(&self) -> &[usize] {
        &self.orbit_representatives
    }

    /// The fixed-set constraint on a representative's position.
    pub fn constraint_of(&self, rep: usize) -> FixedSet {
        self.constraints
            .iter()
            .find(|(r, _)| *r == rep)
            .map(|(_, f)| *f)
            .expect("not an orbit representative")
    }

    pub fn is_representative(&self, v: usize) -> bool {
        self.word[v].0 == v
    }

    pub fn representative_of(&self, v: usize) -> usize {
        self.word[v].0
    }

    /// The representative of `v`'s orbit and the matrix carrying the
    /// representative's position to `v`'s.
    pub fn word_of(&self, v: usize) -> (usize, Mat3) {
        self.word[v]
    }

    /// Orbit members with their positions for a given representative position.
    pub fn orbit_positions(&self, rep: usize, pos: &LatticePoint) -> Vec<(usize, LatticePoint)> {
        self.word
            .iter()
            .enumerate()
            .filter(|(_, (r, _))| *r == rep)
            .map(|(v, (_, m))| (v, m.apply(pos)))
            .collect()
    }

    /// Reposition the whole orbit of `rep` so that psi . a = M . psi holds;
    /// the representative must stay inside its fixed-set constraint.
    pub fn adapt(
        &self,
        coords: &mut [LatticePoint],
        rep: usize,
        pos: LatticePoint,
    ) -> Result<(), ConstraintViolation> {
        assert!(self.is_representative(rep), "adapt targets a representative");
        if !self.constraint_of(rep).contains(&pos) {
            return Err(ConstraintViolation { vertex: rep });
        }
        for (v, p) in self.orbit_positions(rep, &pos) {
            coords[v] = p;
        }
        Ok(())
    }

    /// Check psi . a = M . psi for all generators, bit-exactly.
    pub fn holds(&self, coords: &[LatticePoint]) -> bool {
        self.generators.iter().all(|(perm, mat)| {
            (0..coords.len()).all(|v| coords[perm[v]] == mat.apply(&coords[v]))
        })
    }

    /// Admissible generator moves: each representative paired with the unit
    /// moves of its constraint set.
    pub fn symmetric_move_set(&self) -> Vec<(usize, (i64, i64, i64))> {
        let mut moves = Vec::new();
        for &(rep, fix) in &self.constraints {
            for d in fix.unit_moves() {
                moves.push((rep, d));
            }
        }
        moves
    }

    /// Descriptor for results files: kind plus generator cycles.
    pub fn descriptor(&self) -> String {
        let cycles: Vec<String> = self
            .generators
            .iter()
            .map(|(perm, _)| cycle_string(perm))
            .collect();
        format!("{}:{}", self.kind.name(), cycles.join("|"))
    }
}

fn cycle_string(perm: &[usize]) -> String {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut v = start;
        let mut first = true;
        while !seen[v] {
            seen[v] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(v + 1).to_string());
            first = false;
            v = perm[v];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("id");
    }
    out
}

/// All elements of the group generated by (permutation, matrix) pairs.
fn group_elements(generators: &[(Vec<usize>, Mat3)], n: usize) -> Vec<(Vec<usize>, Mat3)> {
    let identity: Vec<usize> = (0..n).collect();
    let mut elements: Vec<(Vec<usize>, Mat3)> = vec![(identity, IDENTITY)];
    loop {
        let mut added = false;
        let snapshot = elements.clone();
        for (p, m) in &snapshot {
            for (gp, gm) in generators {
                let np: Vec<usize> = (0..n).map(|v| gp[p[v]]).collect();
                let nm = gm.mul(m);
                if !elements.iter().any(|(ep, _)| *ep == np) {
                    elements.push((np, nm));
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    elements
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphisms::enumerate_automorphisms;
    use crate::complex::parse_triangulation;

    const RP2_6: &str =
        "[[1,2,3],[1,2,4],[1,3,5],[1,4,6],[1,5,6],[2,3,6],[2,4,5],[2,5,6],[3,4,5],[3,4,6]]";

    #[test]
    fn catalog_matrices_are_lattice_isometries() {
        for iso in catalog() {
            for m in &iso.matrices {
                assert!(m.is_orthogonal(), "{:?}", iso.kind);
                assert!(m.det() == 1 || m.det() == -1);
                assert_eq!(m.pow(iso.order), IDENTITY, "{:?}", iso.kind);
                for k in 1..iso.order {
                    assert_ne!(m.pow(k), IDENTITY, "{:?}^{}", iso.kind, k);
                }
            }
        }
    }

    #[test]
    fn rotref6_cubed_is_inversion() {
        let m = catalog_entry(IsometryKind::Rotref6).matrices[0];
        let inv = catalog_entry(IsometryKind::Inversion).matrices[0];
        assert_eq!(m.pow(3), inv);
        assert_eq!(m.pow(6), IDENTITY);
        assert_eq!(catalog_entry(IsometryKind::Rot3).matrices[0].pow(3), IDENTITY);
        assert_eq!(catalog_entry(IsometryKind::Rot4).matrices[0].pow(4), IDENTITY);
    }

    #[test]
    fn fixed_sets_match_geometry() {
        assert_eq!(
            fixed_set_of(&catalog_entry(IsometryKind::Mirror).matrices[0]),
            FixedSet::Plane { normal_axis: 2 }
        );
        assert_eq!(
            fixed_set_of(&catalog_entry(IsometryKind::Rot2).matrices[0]),
            FixedSet::Axis { dir: [0, 0, 1] }
        );
        assert_eq!(
            fixed_set_of(&catalog_entry(IsometryKind::Rot3).matrices[0]),
            FixedSet::Axis { dir: [1, 1, 1] }
        );
        assert_eq!(
            fixed_set_of(&catalog_entry(IsometryKind::Rot4).matrices[0]),
            FixedSet::Axis { dir: [0, 0, 1] }
        );
        assert_eq!(
            fixed_set_of(&catalog_entry(IsometryKind::Inversion).matrices[0]),
            FixedSet::Origin
        );
        assert_eq!(
            fixed_set_of(&catalog_entry(IsometryKind::Rotref4).matrices[0]),
            FixedSet::Origin
        );
        assert_eq!(
            fixed_set_of(&catalog_entry(IsometryKind::Rotref6).matrices[0]),
            FixedSet::Origin
        );
        // D2 generators fix the x- and y-axes; the group fixes only the origin
        let d2 = catalog_entry(IsometryKind::D2);
        assert_eq!(fixed_set_of(&d2.matrices[0]), FixedSet::Axis { dir: [1, 0, 0] });
        assert_eq!(fixed_set_of(&d2.matrices[1]), FixedSet::Axis { dir: [0, 1, 0] });
        assert_eq!(d2.group_fixed_set(), FixedSet::Origin);
    }

    #[test]
    fn move_sets_match_fixed_sets() {
        assert_eq!(FixedSet::Everything.unit_moves().len(), 6);
        assert_eq!(FixedSet::Plane { normal_axis: 2 }.unit_moves().len(), 4);
        assert_eq!(FixedSet::Axis { dir: [0, 0, 1] }.unit_moves().len(), 2);
        assert_eq!(
            FixedSet::Axis { dir: [1, 1, 1] }.unit_moves(),
            vec![(1, 1, 1), (-1, -1, -1)]
        );
        assert_eq!(FixedSet::Origin.unit_moves().len(), 0);
    }

    #[test]
    fn no_order_five_in_catalog() {
        let c = parse_triangulation(RP2_6).unwrap();
        let auts = enumerate_automorphisms(&c);
        let a5 = auts.iter().find(|a| a.order() == 5).unwrap();
        assert!(compatible_isometries(a5, &c).is_empty());
    }

    #[test]
    fn rot3_adaptation_cycles_coordinates() {
        let c = parse_triangulation(RP2_6).unwrap();
        let auts = enumerate_automorphisms(&c);
        let a3 = auts.iter().find(|a| a.order() == 3).unwrap();
        let iso = catalog_entry(IsometryKind::Rot3);
        let binding = SymmetryBinding::cyclic(a3, &iso, &c).unwrap();
        let rep = binding
            .orbit_representatives()
            .iter()
            .copied()
            .find(|&r| binding.constraint_of(r) == FixedSet::Everything)
            .unwrap();
        let orbit = binding.orbit_positions(rep, &LatticePoint::new(2, 0, 1));
        assert_eq!(orbit.len(), 3);
        let mut pts: Vec<[i64; 3]> = orbit.iter().map(|(_, p)| p.coords()).collect();
        pts.sort_unstable();
        assert_eq!(pts, vec![[0, 1, 2], [1, 2, 0], [2, 0, 1]]);
    }

    #[test]
    fn fixed_vertex_constraint_enforced() {
        // 7-vertex torus: v -> 2v (mod 7) has order 3 and one fixed vertex.
        let mut tris = Vec::new();
        for i in 0..7usize {
            tris.push(vec![i % 7 + 1, (i + 1) % 7 + 1, (i + 3) % 7 + 1]);
            tris.push(vec![i % 7 + 1, (i + 2) % 7 + 1, (i + 3) % 7 + 1]);
        }
        let c = parse_triangulation(&serde_json::to_string(&tris).unwrap()).unwrap();
        let auts = enumerate_automorphisms(&c);
        let a3 = auts
            .iter()
            .find(|a| a.order() == 3 && !a.fixed_vertices().is_empty())
            .unwrap();
        let iso = catalog_entry(IsometryKind::Rot3);
        let binding = SymmetryBinding::cyclic(a3, &iso, &c).unwrap();
        let fixed = a3.fixed_vertices()[0];
        assert!(binding.is_representative(fixed));
        assert_eq!(binding.constraint_of(fixed), FixedSet::Axis { dir: [1, 1, 1] });
        let mut coords = vec![LatticePoint::ORIGIN; c.vertex_count()];
        assert!(binding
            .adapt(&mut coords, fixed, LatticePoint::new(3, 3, 3))
            .is_ok());
        assert_eq!(
            binding.adapt(&mut coords, fixed, LatticePoint::new(3, 3, 2)),
            Err(ConstraintViolation { vertex: fixed })
        );
    }

    #[test]
    fn adaptation_restores_invariant_and_is_idempotent() {
        let c = parse_triangulation(RP2_6).unwrap();
        let auts = enumerate_automorphisms(&c);
        let a2 = auts.iter().find(|a| a.order() == 2).unwrap();
        let iso = catalog_entry(IsometryKind::Rot2);
        let binding = SymmetryBinding::cyclic(a2, &iso, &c).unwrap();
        let mut coords: Vec<LatticePoint> = (0..6)
            .map(|i| LatticePoint::new(i as i64 + 1, 2 * i as i64 - 3, 7 - i as i64))
            .collect();
        for &rep in binding.orbit_representatives() {
            let fix = binding.constraint_of(rep);
            let pos = if fix == FixedSet::Everything {
                coords[rep]
            } else {
                // project onto the rot2 axis
                LatticePoint::new(0, 0, coords[rep].z)
            };
            binding.adapt(&mut coords, rep, pos).unwrap();
        }
        assert!(binding.holds(&coords));
        let before = coords.clone();
        for &rep in binding.orbit_representatives() {
            let pos = coords[rep];
            binding.adapt(&mut coords, rep, pos).unwrap();
        }
        assert_eq!(before, coords);
    }

    #[test]
    fn orientation_parity_filter() {
        let tet = parse_triangulation("[[1,2,3],[1,2,4],[1,3,4],[2,3,4]]").unwrap();
        let auts = enumerate_automorphisms(&tet);
        let reversing = auts
            .iter()
            .find(|a| a.order() == 2 && a.orientation_preserving() == Some(false))
            .unwrap();
        let kinds: Vec<IsometryKind> = compatible_isometries(reversing, &tet)
            .iter()
            .map(|i| i.kind)
            .collect();
        assert!(!kinds.contains(&IsometryKind::Rot2));
        let preserving = auts
            .iter()
            .find(|a| a.order() == 2 && a.orientation_preserving() == Some(true))
            .unwrap();
        let kinds: Vec<IsometryKind> = compatible_isometries(preserving, &tet)
            .iter()
            .map(|i| i.kind)
            .collect();
        assert!(kinds.contains(&IsometryKind::Rot2));
        assert!(!kinds.contains(&IsometryKind::Mirror));
    }

    #[test]
    fn identity_gets_no_isometries() {
        let c = parse_triangulation(RP2_6).unwrap();
        let auts = enumerate_automorphisms(&c);
        let id = auts.iter().find(|a| a.is_identity()).unwrap();
        assert!(compatible_isometries(id, &c).is_empty());
    }

    #[test]
    fn d2_pairs_on_projective_plane() {
        // RP2_6 has Aut = A5 with Klein four-subgroups; pairs must commute.
        let c = parse_triangulation(RP2_6).unwrap();
        let auts = enumerate_automorphisms(&c);
        let pairs = d2_candidate_pairs(&auts, &c);
        for (a, b) in &pairs {
            let binding = SymmetryBinding::d2(a, b, &c).unwrap();
            assert_eq!(binding.generators().len(), 2);
            // orbits have size dividing 4
            for &rep in binding.orbit_representatives() {
                let orbit = binding.orbit_positions(rep, &LatticePoint::new(7, 11, 13));
                assert!(4 % orbit.len() == 0);
            }
        }
    }
}
