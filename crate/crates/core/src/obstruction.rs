//! Combinatorial non-immersibility test for odd Euler characteristic.
//!
//! A non-orientable surface immersed in general position has a number of
//! triple points with the parity of its Euler characteristic, so an odd-chi
//! surface needs at least one. A triple point requires three pairwise
//! vertex-disjoint triangles whose pairs can pierce each other; the pair
//! condition implemented here is the edge-cut count: at most 4 of the 6
//! triangles edge-adjacent to the pair may have all their vertices inside the
//! pair's six-vertex union. No feasible triple means no realization.

use crate::complex::SurfaceComplex;

/// Outcome of the triple-point feasibility scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionVerdict {
    /// The test applies only to non-orientable complexes with odd chi.
    pub applicable: bool,
    pub feasible_triples_exist: bool,
    /// First triple of pairwise vertex-disjoint, pairwise pierceable
    /// triangles, when one exists.
    pub witness: Option<[usize; 3]>,
}

impl ObstructionVerdict {
    /// Applicable and infeasible: the triangulation has no realization.
    pub fn proves_non_realizable(&self) -> bool {
        self.applicable && !self.feasible_triples_exist
    }
}

/// Pair condition: vertex-disjoint, and at most 4 of the 6 edge-adjacent
/// triangles have all three vertices inside the union of the pair's vertices.
pub fn pair_pierceable(t1: usize, t2: usize, c: &SurfaceComplex) -> bool {
    if c.shared_vertices(t1, t2) > 0 {
        return false;
    }
    let a = c.triangles()[t1];
    let b = c.triangles()[t2];
    let union: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    let mut confined = 0usize;
    for &t in &[t1, t2] {
        let tri = c.triangles()[t];
        for (u, v) in [(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])] {
            let [x, y] = c.edge_triangles(u, v).expect("closed surface edge");
            let neighbor = if x == t { y } else { x };
            if c.triangles()[neighbor].iter().all(|w| union.contains(w)) {
                confined += 1;
            }
        }
    }
    confined <= 4
}

/// Scan all triples of pairwise vertex-disjoint triangles for one whose three
/// pairs all satisfy the pierce condition.
pub fn triple_point_feasible(c: &SurfaceComplex) -> ObstructionVerdict {
    let applicable = !c.orientable() && c.euler_characteristic() % 2 != 0;
    let f2 = c.triangles().len();
    // vertex-disjoint pierceable pair graph
    let mut good = vec![vec![false; f2]; f2];
    for i in 0..f2 {
        for j in i + 1..f2 {
            if pair_pierceable(i, j, c) {
                good[i][j] = true;
                good[j][i] = true;
            }
        }
    }
    let mut witness = None;
    'scan: for i in 0..f2 {
        for j in i + 1..f2 {
            if !good[i][j] {
                continue;
            }
            for k in j + 1..f2 {
                if good[i][k] && good[j][k] {
                    witness = Some([i, j, k]);
                    break 'scan;
                }
            }
        }
    }
    ObstructionVerdict {
        applicable,
        feasible_triples_exist: witness.is_some(),
        witness,
    }
}
