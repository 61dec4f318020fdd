//! Enumeration of the automorphism group of a triangulation.
//!
//! An automorphism is determined by where it sends a single flag, so the
//! enumeration fixes a base triangle and tries to map it to every triangle in
//! each of the six vertex orderings, propagating the induced vertex map across
//! edge adjacencies. Cost is O(f2 * 6 * f2) instead of the factorial filter,
//! which survives only as a test oracle.

use std::collections::HashMap;

use crate::complex::SurfaceComplex;

/// A vertex permutation preserving the triangulation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    image: Vec<usize>,
    order: usize,
    fixed_vertices: Vec<usize>,
    fixed_edges_setwise: Vec<[usize; 2]>,
    fixed_triangles_setwise: Vec<usize>,
    /// `None` when the complex is non-orientable (the flag is undefined there).
    orientation_preserving: Option<bool>,
}

impl Automorphism {
    fn from_permutation(image: Vec<usize>, c: &SurfaceComplex) -> Self {
        let order = permutation_order(&image);
        let fixed_vertices: Vec<usize> = (0..image.len()).filter(|&v| image[v] == v).collect();
        let fixed_edges_setwise: Vec<[usize; 2]> = c
            .edges()
            .iter()
            .copied()
            .filter(|e| {
                let mut m = [image[e[0]], image[e[1]]];
                m.sort_unstable();
                m == *e
            })
            .collect();
        let fixed_triangles_setwise: Vec<usize> = c
            .triangles()
            .iter()
            .enumerate()
            .filter(|(_, t)| {
                let mut m = [image[t[0]], image[t[1]], image[t[2]]];
                m.sort_unstable();
                m == **t
            })
            .map(|(i, _)| i)
            .collect();
        let orientation_preserving = orientation_parity(&image, c);
        Automorphism {
            image,
            order,
            fixed_vertices,
            fixed_edges_setwise,
            fixed_triangles_setwise,
            orientation_preserving,
        }
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn fixed_vertices(&self) -> &[usize] {
        &self.fixed_vertices
    }

    pub fn fixed_edges_setwise(&self) -> &[[usize; 2]] {
        &self.fixed_edges_setwise
    }

    pub fn fixed_triangles_setwise(&self) -> &[usize] {
        &self.fixed_triangles_setwise
    }

    pub fn orientation_preserving(&self) -> Option<bool> {
        self.orientation_preserving
    }

    /// Fixes a whole triangle pointwise (all three of its vertices fixed).
    pub fn fixes_triangle_pointwise(&self, c: &SurfaceComplex) -> bool {
        c.triangles()
            .iter()
            .any(|t| t.iter().all(|&v| self.image[v] == v))
    }

    pub fn compose(&self, other: &Automorphism, c: &SurfaceComplex) -> Automorphism {
        let image: Vec<usize> = (0..self.image.len())
            .map(|v| self.image[other.image[v]])
            .collect();
        Automorphism::from_permutation(image, c)
    }

    /// Cycle notation with 1-based labels, fixed points omitted.
    pub fn cycle_notation(&self) -> String {
        let n = self.image.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.image[start] == start {
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
                v = self.image[v];
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("id");
        }
        out
    }
}

/// Full automorphism group including the identity, by flag propagation.
pub fn enumerate_automorphisms(c: &SurfaceComplex) -> Vec<Automorphism> {
    let tri_lookup: HashMap<[usize; 3], usize> = c
        .triangles()
        .iter()
        .enumerate()
        .map(|(i, t)| (*t, i))
        .collect();
    let base = c.triangles()[0];
    let mut found: Vec<Vec<usize>> = Vec::new();
    for target in c.triangles() {
        for perm in orderings(target) {
            if let Some(image) = propagate(c, &tri_lookup, &base, &perm) {
                found.push(image);
            }
        }
    }
    found.sort_unstable();
    found.dedup();
    found
        .into_iter()
        .map(|image| Automorphism::from_permutation(image, c))
        .collect()
}

fn orderings(t: &[usize; 3]) -> [[usize; 3]; 6] {
    let [a, b, c] = *t;
    [
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ]
}

/// Extend the partial map base -> target across edge adjacencies; `None` on
/// any inconsistency.
fn propagate(
    c: &SurfaceComplex,
    tri_lookup: &HashMap<[usize; 3], usize>,
    base: &[usize; 3],
    target: &[usize; 3],
) -> Option<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let n = c.vertex_count();
    let mut image = vec![UNSET; n];
    for i in 0..3 {
        image[base[i]] = target[i];
    }
    let f2 = c.triangles().len();
    let mut tri_image = vec![UNSET; f2];
    let mut sorted_target = *target;
    sorted_target.sort_unstable();
    tri_image[0] = *tri_lookup.get(&sorted_target)?;
    let mut stack = vec![0usize];
    let mut visited = vec![false; f2];
    visited[0] = true;
    while let Some(s) = stack.pop() {
        let t = c.triangles()[s];
        let img = tri_image[s];
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            let [x, y] = c.edge_triangles(a, b)?;
            let neighbor = if x == s { y } else { x };
            let img_edge_tris = c.edge_triangles(image[a], image[b])?;
            let neighbor_img = if img_edge_tris[0] == img {
                img_edge_tris[1]
            } else if img_edge_tris[1] == img {
                img_edge_tris[0]
            } else {
                return None; // image edge not on the image triangle
            };
            let third = *c.triangles()[neighbor]
                .iter()
                .find(|&&v| v != a && v != b)
                .unwrap();
            let third_img = *c.triangles()[neighbor_img]
                .iter()
                .find(|&&v| v != image[a] && v != image[b])
                .unwrap();
            if image[third] == UNSET {
                image[third] = third_img;
            } else if image[third] != third_img {
                return None;
            }
            if !visited[neighbor] {
                visited[neighbor] = true;
                tri_image[neighbor] = neighbor_img;
                stack.push(neighbor);
            }
        }
    }
    // connected complex: everything is mapped; verify bijectivity and
    // triangle preservation
    let mut hit = vec![false; n];
    for &w in &image {
        if w == UNSET || hit[w] {
            return None;
        }
        hit[w] = true;
    }
    for t in c.triangles() {
        let mut m = [image[t[0]], image[t[1]], image[t[2]]];
        m.sort_unstable();
        if !tri_lookup.contains_key(&m) {
            return None;
        }
    }
    Some(image)
}

fn permutation_order(image: &[usize]) -> usize {
    let mut order = 1usize;
    let n = image.len();
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            len += 1;
            v = image[v];
        }
        order = lcm(order, len);
    }
    order
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Whether the permutation preserves the global orientation; `None` for
/// non-orientable complexes.
fn orientation_parity(image: &[usize], c: &SurfaceComplex) -> Option<bool> {
    let signs = c.orientation_signs()?;
    let t = c.triangles()[0];
    let mut m = [image[t[0]], image[t[1]], image[t[2]]];
    m.sort_unstable();
    let ti = c
        .triangles()
        .iter()
        .position(|u| *u == m)
        .expect("image of a triangle must be a triangle");
    // cycle of the image of t, adjusted by t's orientation sign
    let img_cycle = if signs[0] > 0 {
        [image[t[0]], image[t[1]], image[t[2]]]
    } else {
        [image[t[0]], image[t[2]], image[t[1]]]
    };
    // oriented cycle of the target triangle
    let u = c.triangles()[ti];
    let tgt_cycle = if signs[ti] > 0 {
        [u[0], u[1], u[2]]
    } else {
        [u[0], u[2], u[1]]
    };
    Some(is_rotation(&img_cycle, &tgt_cycle))
}

fn is_rotation(a: &[usize; 3], b: &[usize; 3]) -> bool {
    (0..3).any(|r| (0..3).all(|i| a[i] == b[(i + r) % 3]))
}

/// Orbits of the cyclic group generated by one automorphism.
pub fn vertex_orbits(a: &Automorphism, c: &SurfaceComplex) -> Vec<Vec<usize>> {
    orbits_of_group(&[a.image().to_vec()], c.vertex_count())
}

/// Orbits of the group generated by a set of vertex permutations.
pub fn orbits_of_group(generators: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = vec![start];
        orbit_of[start] = id;
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for g in generators {
                let w = g[v];
                if orbit_of[w] == usize::MAX {
                    orbit_of[w] = id;
                    members.push(w);
                    queue.push(w);
                }
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    orbits
}

/// The fixed-element report of an automorphism.
pub fn fixed_element_report<'a>(
    a: &'a Automorphism,
    _c: &SurfaceComplex,
) -> (&'a [usize], &'a [[usize; 2]], &'a [usize], Option<bool>) {
    (
        a.fixed_vertices(),
        a.fixed_edges_setwise(),
        a.fixed_triangles_setwise(),
        a.orientation_preserving(),
    )
}

/// A small generating set, greedily extracted from the full group.
pub fn generating_set<'a>(group: &'a [Automorphism], c: &SurfaceComplex) -> Vec<&'a Automorphism> {
    let n = c.vertex_count();
    let identity: Vec<usize> = (0..n).collect();
    let mut generated: Vec<Vec<usize>> = vec![identity];
    let mut generators: Vec<&Automorphism> = Vec::new();
    for a in group {
        if generated.contains(&a.image().to_vec()) {
            continue;
        }
        generators.push(a);
        // closure of the current generating set
        loop {
            let mut added = false;
            let snapshot = generated.clone();
            for g in &snapshot {
                for h in generators.iter() {
                    let prod: Vec<usize> = (0..n).map(|v| h.image()[g[v]]).collect();
                    if !generated.contains(&prod) {
                        generated.push(prod);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        if generated.len() == group.len() {
            break;
        }
    }
    generators
}
