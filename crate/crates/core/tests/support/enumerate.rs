//! Exhaustive, isomorphism-free enumeration of triangulated closed surfaces
//! with a given number of vertices.
//!
//! Strategy: root the search at a minimum-degree vertex. For each degree d,
//! seed vertex 0 with the closed link cycle (1, 2, ..., d) and complete the
//! complex by always closing the lexicographically smallest open edge, so
//! each labeled complex is reached along exactly one path. New vertices must
//! appear in label order, which removes the relabeling freedom of the
//! remaining vertices. Surviving labeled complexes are reduced to canonical
//! form (minimum relabeling over all starting flags) and deduplicated.

use std::collections::HashSet;

use trisurf::complex::SurfaceComplex;

/// All isomorphism classes of triangulations of closed surfaces with exactly
/// `n` vertices, as validated complexes in canonical labeling.
pub fn enumerate_closed_surfaces(n: usize) -> Vec<SurfaceComplex> {
    assert!((4..=10).contains(&n), "desk-scale enumeration only");
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut out = Vec::new();
    for d in 3..n {
        let mut gen = Generator::new(n, d);
        gen.run(&mut |triangles| {
            let canon = canonical_form(triangles, n);
            let key: Vec<u8> = canon
                .iter()
                .flat_map(|t| t.iter().map(|&v| v as u8))
                .collect();
            if seen.insert(key) {
                let complex = SurfaceComplex::from_triangles(n, canon)
                    .expect("generator output is a closed surface");
                out.push(complex);
            }
        });
    }
    // stable order independent of generation order
    out.sort_by(|a, b| a.triangles().cmp(b.triangles()));
    out
}

struct Generator {
    n: usize,
    min_degree: usize,
    usage: Vec<Vec<u8>>,
    degree: Vec<usize>,
    open_degree: Vec<usize>,
    incident: Vec<Vec<[usize; 3]>>,
    triangles: Vec<[usize; 3]>,
    tri_set: HashSet<[usize; 3]>,
    used: Vec<bool>,
}

impl Generator {
    fn new(n: usize, min_degree: usize) -> Self {
        let mut g = Generator {
            n,
            min_degree,
            usage: vec![vec![0; n]; n],
            degree: vec![0; n],
            open_degree: vec![0; n],
            incident: vec![Vec::new(); n],
            triangles: Vec::new(),
            tri_set: HashSet::new(),
            used: vec![false; n],
        };
        // seed: closed star of vertex 0 with link cycle (1, ..., d)
        for i in 0..min_degree {
            let a = 1 + i;
            let b = 1 + (i + 1) % min_degree;
            let mut t = [0, a, b];
            t.sort_unstable();
            g.add(t);
        }
        g
    }

    fn add(&mut self, t: [usize; 3]) {
        for (u, v) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            self.usage[u][v] += 1;
            self.usage[v][u] += 1;
            if self.usage[u][v] == 1 {
                self.degree[u] += 1;
                self.degree[v] += 1;
                self.open_degree[u] += 1;
                self.open_degree[v] += 1;
            } else {
                self.open_degree[u] -= 1;
                self.open_degree[v] -= 1;
            }
        }
        for &v in &t {
            self.used[v] = true;
            self.incident[v].push(t);
        }
        self.triangles.push(t);
        self.tri_set.insert(t);
    }

    fn remove(&mut self, t: [usize; 3]) {
        for (u, v) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            if self.usage[u][v] == 1 {
                self.degree[u] -= 1;
                self.degree[v] -= 1;
                self.open_degree[u] -= 1;
                self.open_degree[v] -= 1;
            } else {
                self.open_degree[u] += 1;
                self.open_degree[v] += 1;
            }
            self.usage[u][v] -= 1;
            self.usage[v][u] -= 1;
        }
        for &v in &t {
            self.incident[v].pop();
            if self.degree[v] == 0 {
                self.used[v] = false;
            }
        }
        self.triangles.pop();
        self.tri_set.remove(&t);
    }

    fn smallest_open_edge(&self) -> Option<(usize, usize)> {
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.usage[u][v] == 1 {
                    return Some((u, v));
                }
            }
        }
        None
    }

    /// Star of `v` closed: all incident edges used twice. Valid only if the
    /// incident triangles form a single cycle of length >= min_degree.
    fn closed_star_ok(&self, v: usize) -> bool {
        let star = &self.incident[v];
        if star.len() < self.min_degree {
            return false;
        }
        // walk the cycle across shared edges through v
        let start = star[0];
        let others: Vec<usize> = start.iter().copied().filter(|&u| u != v).collect();
        let mut prev = others[0];
        let mut current = start;
        let mut visited = 1usize;
        loop {
            let next_other = match current.iter().find(|&&u| u != v && u != prev) {
                Some(&u) => u,
                None => return false,
            };
            let next = star
                .iter()
                .find(|t| **t != current && t.contains(&v) && t.contains(&next_other));
            match next {
                Some(&t) => {
                    if t == start {
                        break;
                    }
                    visited += 1;
                    if visited > star.len() {
                        return false;
                    }
                    prev = next_other;
                    current = t;
                }
                None => return false,
            }
        }
        visited == star.len()
    }

    fn run(&mut self, emit: &mut impl FnMut(&[[usize; 3]])) {
        let Some((u, v)) = self.smallest_open_edge() else {
            // complete: all labels used makes it an n-vertex complex
            if self.used.iter().all(|&b| b) && self.degree.iter().all(|&d| d >= self.min_degree)
            {
                emit(&self.triangles);
            }
            return;
        };
        let next_new = (0..self.n).find(|&w| !self.used[w]);
        for w in 1..self.n {
            if w == u || w == v {
                continue;
            }
            if !self.used[w] {
                if Some(w) != next_new {
                    continue; // new vertices appear in label order
                }
            } else if self.open_degree[w] == 0 {
                continue; // star already closed
            }
            if self.usage[u][w] >= 2 || self.usage[v][w] >= 2 {
                continue;
            }
            let mut t = [u, v, w];
            t.sort_unstable();
            if self.tri_set.contains(&t) {
                continue;
            }
            self.add(t);
            // early rejection of freshly closed stars that are not single
            // cycles of sufficient length
            let closed_bad = t.iter().any(|&x| {
                x != 0 && self.open_degree[x] == 0 && !self.closed_star_ok(x)
            });
            if !closed_bad {
                self.run(emit);
            }
            self.remove(t);
        }
    }
}

/// Canonical labeling: breadth-first relabeling from every starting flag
/// (directed edge plus incident triangle); the lexicographically smallest
/// sorted triangle list wins.
pub fn canonical_form(triangles: &[[usize; 3]], n: usize) -> Vec<[usize; 3]> {
    let mut edge_tris: std::collections::HashMap<[usize; 2], Vec<usize>> =
        std::collections::HashMap::new();
    for (i, t) in triangles.iter().enumerate() {
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            edge_tris.entry([a.min(b), a.max(b)]).or_default().push(i);
        }
    }
    let other_tri = |a: usize, b: usize, not: usize| -> usize {
        let ts = &edge_tris[&[a.min(b), a.max(b)]];
        if ts[0] == not {
            ts[1]
        } else {
            ts[0]
        }
    };
    let mut best: Option<Vec<[usize; 3]>> = None;
    for (ti, t) in triangles.iter().enumerate() {
        for (a, b) in [
            (t[0], t[1]),
            (t[1], t[0]),
            (t[0], t[2]),
            (t[2], t[0]),
            (t[1], t[2]),
            (t[2], t[1]),
        ] {
            let mut label = vec![usize::MAX; n];
            let mut next = 0usize;
            let assign = |v: usize, label: &mut Vec<usize>, next: &mut usize| {
                if label[v] == usize::MAX {
                    label[v] = *next;
                    *next += 1;
                }
            };
            assign(a, &mut label, &mut next);
            assign(b, &mut label, &mut next);
            let mut visited = vec![false; triangles.len()];
            visited[ti] = true;
            // queue entries: (directed edge, triangle to expand)
            let mut queue = std::collections::VecDeque::new();
            queue.push_back((a, b, ti));
            while let Some((u, v, s)) = queue.pop_front() {
                let w = *triangles[s].iter().find(|&&x| x != u && x != v).unwrap();
                assign(w, &mut label, &mut next);
                for (x, y) in [(u, w), (w, v)] {
                    let o = other_tri(x, y, s);
                    if !visited[o] {
                        visited[o] = true;
                        queue.push_back((x, y, o));
                    }
                }
            }
            let mut relabeled: Vec<[usize; 3]> = triangles
                .iter()
                .map(|t| {
                    let mut m = [label[t[0]], label[t[1]], label[t[2]]];
                    m.sort_unstable();
                    m
                })
                .collect();
            relabeled.sort_unstable();
            match &best {
                Some(b) if *b <= relabeled => {}
                _ => best = Some(relabeled),
            }
        }
    }
    best.unwrap()
}
