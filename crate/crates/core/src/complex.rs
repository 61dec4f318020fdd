//! Abstract triangulations of closed surfaces.
//!
//! Parses the Manifold-Page style triangle list format, validates the
//! closed-surface conditions (every edge in exactly two triangles, every
//! vertex link a single cycle, connected), and derives the f-vector, Euler
//! characteristic, orientability and genus.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// A validated triangulation of a closed connected surface.
///
/// Vertices are 0-based contiguous indices internally; external I/O uses the
/// 1-based labels of the corpus convention. Triangles are stored sorted
/// ascending within each triple and lexicographically across the list, so two
/// complexes built from the same triangle set compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceComplex {
    vertex_count: usize,
    triangles: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    edge_index: HashMap<[usize; 2], usize>,
    /// The two triangles incident to each edge, parallel to `edges`.
    edge_triangles: Vec<[usize; 2]>,
    /// Cyclically ordered incident triangles per vertex.
    vertex_stars: Vec<Vec<usize>>,
    orientable: bool,
    genus: u32,
    /// Per-triangle orientation sign relative to the sorted triple, when the
    /// surface is orientable.
    orientation: Option<Vec<i8>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("empty triangle list")]
    Empty,
    #[error("triangle {0:?} does not have three distinct vertices")]
    DegenerateTriple([i64; 3]),
    #[error("vertex labels are not contiguous 1..{expected}: missing {missing}")]
    NonContiguousLabels { expected: usize, missing: usize },
    #[error("vertex label {0} out of range (labels must be positive)")]
    BadLabel(i64),
    #[error("duplicate triangle {0:?}")]
    DuplicateTriangle([usize; 3]),
    #[error("edge {0:?} lies in {1} triangles, expected exactly 2")]
    EdgeDegree([usize; 2], usize),
    #[error("link of vertex {0} is not a single cycle")]
    BadVertexLink(usize),
    #[error("complex is not connected")]
    Disconnected,
}

/// Parse a bracketed triangle-list expression into a validated complex.
///
/// The format is a nested list of integer triples with 1-based contiguous
/// vertex labels, e.g. `[[1,2,3],[1,2,4],[1,3,4],[2,3,4]]`.
pub fn parse_triangulation(text: &str) -> Result<SurfaceComplex, ComplexError> {
    let raw: Vec<Vec<i64>> = serde_json::from_str(text.trim())
        .map_err(|e| ComplexError::Syntax(e.to_string()))?;
    if raw.is_empty() {
        return Err(ComplexError::Empty);
    }
    let mut labeled = Vec::with_capacity(raw.len());
    for entry in &raw {
        if entry.len() != 3 {
            return Err(ComplexError::Syntax(format!(
                "expected a triple, got {} entries",
                entry.len()
            )));
        }
        let t = [entry[0], entry[1], entry[2]];
        for &v in &t {
            if v < 1 {
                return Err(ComplexError::BadLabel(v));
            }
        }
        if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
            return Err(ComplexError::DegenerateTriple(t));
        }
        labeled.push(t);
    }
    let max_label = labeled.iter().flatten().copied().max().unwrap() as usize;
    let mut seen = vec![false; max_label];
    for t in &labeled {
        for &v in t {
            seen[v as usize - 1] = true;
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(ComplexError::NonContiguousLabels {
            expected: max_label,
            missing: missing + 1,
        });
    }
    let triangles: Vec<[usize; 3]> = labeled
        .iter()
        .map(|t| {
            let mut s = [t[0] as usize - 1, t[1] as usize - 1, t[2] as usize - 1];
            s.sort_unstable();
            s
        })
        .collect();
    SurfaceComplex::from_triangles(max_label, triangles)
}

impl SurfaceComplex {
    /// Build and validate a complex from 0-based sorted triples.
    pub fn from_triangles(
        vertex_count: usize,
        mut triangles: Vec<[usize; 3]>,
    ) -> Result<Self, ComplexError> {
        triangles.sort_unstable();
        for w in triangles.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::DuplicateTriangle([
                    w[0][0] + 1,
                    w[0][1] + 1,
                    w[0][2] + 1,
                ]));
            }
        }

        // Edge -> incident triangles.
        let mut edge_index: HashMap<[usize; 2], usize> = HashMap::new();
        let mut edges: Vec<[usize; 2]> = Vec::new();
        let mut edge_triangles: Vec<Vec<usize>> = Vec::new();
        for (ti, t) in triangles.iter().enumerate() {
            for e in triangle_edges(t) {
                let ei = *edge_index.entry(e).or_insert_with(|| {
                    edges.push(e);
                    edge_triangles.push(Vec::new());
                    edges.len() - 1
                });
                edge_triangles[ei].push(ti);
            }
        }
        for (ei, ts) in edge_triangles.iter().enumerate() {
            if ts.len() != 2 {
                return Err(ComplexError::EdgeDegree(
                    [edges[ei][0] + 1, edges[ei][1] + 1],
                    ts.len(),
                ));
            }
        }
        let edge_triangles: Vec<[usize; 2]> =
            edge_triangles.into_iter().map(|ts| [ts[0], ts[1]]).collect();

        // Vertex stars: walk around each vertex across shared edges; the walk
        // must close up into a single cycle covering all incident triangles.
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
        for (ti, t) in triangles.iter().enumerate() {
            for &v in t {
                incident[v].push(ti);
            }
        }
        let mut vertex_stars = Vec::with_capacity(vertex_count);
        for v in 0..vertex_count {
            let star = walk_star(v, &incident[v], &triangles, &edge_index, &edge_triangles)
                .ok_or(ComplexError::BadVertexLink(v + 1))?;
            vertex_stars.push(star);
        }

        // Connectivity over the triangle adjacency graph.
        let mut visited = vec![false; triangles.len()];
        let mut stack = vec![0usize];
        visited[0] = true;
        while let Some(ti) = stack.pop() {
            for e in triangle_edges(&triangles[ti]) {
                let ei = edge_index[&e];
                for &other in &edge_triangles[ei] {
                    if !visited[other] {
                        visited[other] = true;
                        stack.push(other);
                    }
                }
            }
        }
        if visited.iter().any(|&v| !v) {
            return Err(ComplexError::Disconnected);
        }

        let orientation = orient(&triangles, &edge_index, &edge_triangles);
        let f0 = vertex_count as i64;
        let f1 = edges.len() as i64;
        let f2 = triangles.len() as i64;
        let chi = f0 - f1 + f2;
        let (orientable, genus) = match &orientation {
            Some(_) => (true, ((2 - chi) / 2) as u32),
            None => (false, (2 - chi) as u32),
        };

        Ok(SurfaceComplex {
            vertex_count,
            triangles,
            edges,
            edge_index,
            edge_triangles,
            vertex_stars,
            orientable,
            genus,
            orientation,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// The two triangles incident to edge `{u, v}`, if it is an edge.
    pub fn edge_triangles(&self, u: usize, v: usize) -> Option<[usize; 2]> {
        let key = if u < v { [u, v] } else { [v, u] };
        self.edge_index.get(&key).map(|&ei| self.edge_triangles[ei])
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        let key = if u < v { [u, v] } else { [v, u] };
        self.edge_index.contains_key(&key)
    }

    /// Cyclically ordered triangles around `v`.
    pub fn vertex_star(&self, v: usize) -> &[usize] {
        &self.vertex_stars[v]
    }

    pub fn vertex_degree(&self, v: usize) -> usize {
        self.vertex_stars[v].len()
    }

    pub fn f_vector(&self) -> (usize, usize, usize) {
        (self.vertex_count, self.edges.len(), self.triangles.len())
    }

    pub fn euler_characteristic(&self) -> i64 {
        let (f0, f1, f2) = self.f_vector();
        f0 as i64 - f1 as i64 + f2 as i64
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    /// Genus: `g` for the orientable surface M_g, `h` for non-orientable N_h.
    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Orientation sign of each triangle relative to its sorted triple, when
    /// orientable.
    pub fn orientation_signs(&self) -> Option<&[i8]> {
        self.orientation.as_deref()
    }

    /// Number of shared vertices of two triangles.
    pub fn shared_vertices(&self, t1: usize, t2: usize) -> usize {
        let a = self.triangles[t1];
        let b = self.triangles[t2];
        a.iter().filter(|v| b.contains(v)).count()
    }

    /// Whether two distinct triangles share an edge (equivalently, two vertices).
    pub fn adjacent(&self, t1: usize, t2: usize) -> bool {
        t1 != t2 && self.shared_vertices(t1, t2) >= 2
    }

    /// Serialize to the canonical 1-based list format.
    pub fn to_text(&self) -> String {
        let mut out = String::from("[");
        for (i, t) in self.triangles.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("[{},{},{}]", t[0] + 1, t[1] + 1, t[2] + 1));
        }
        out.push(']');
        out
    }
}

impl fmt::Display for SurfaceComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (f0, f1, f2) = self.f_vector();
        let name = if self.orientable {
            format!("M_{}", self.genus)
        } else {
            format!("N_{}", self.genus)
        };
        write!(
            f,
            "{name}: f=({f0},{f1},{f2}), chi={}, {}",
            self.euler_characteristic(),
            if self.orientable { "orientable" } else { "non-orientable" }
        )
    }
}

/// Classification of a validated complex: orientability and genus.
pub fn classify(c: &SurfaceComplex) -> (bool, u32) {
    (c.orientable(), c.genus())
}

/// Minimal vertex count for a triangulation of a surface with Euler
/// characteristic `chi`: the ceiling of `(7 + sqrt(49 - 24*chi)) / 2`.
///
/// Exact integer arithmetic: returns the least `m` with `2m - 7 >= 0` and
/// `(2m - 7)^2 >= 49 - 24*chi`.
pub fn heawood_minimum(chi: i64) -> u64 {
    assert!(chi <= 2, "Euler characteristic of a closed surface is at most 2");
    let s = 49 - 24 * chi;
    let mut m = ((7.0 + (s as f64).sqrt()) / 2.0).floor() as i64 - 1;
    if m < 4 {
        m = 4;
    }
    while 2 * m - 7 < 0 || (2 * m - 7) * (2 * m - 7) < s {
        m += 1;
    }
    m as u64
}

fn triangle_edges(t: &[usize; 3]) -> [[usize; 2]; 3] {
    [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]]
}

/// Walk the triangles around `v` across shared edges; `Some(cycle)` iff they
/// form a single closed cycle.
fn walk_star(
    v: usize,
    incident: &[usize],
    triangles: &[[usize; 3]],
    edge_index: &HashMap<[usize; 2], usize>,
    edge_triangles: &[[usize; 2]],
) -> Option<Vec<usize>> {
    if incident.len() < 3 {
        return None;
    }
    let start = incident[0];
    let mut cycle = vec![start];
    // Pick one of the two edges of `start` through `v` to leave across.
    let others: Vec<usize> = triangles[start].iter().copied().filter(|&u| u != v).collect();
    let mut prev_other = others[0];
    let mut current = start;
    loop {
        // Cross the edge {v, next_other} where next_other is the vertex of
        // `current` that is neither v nor the one we arrived through.
        let next_other = *triangles[current]
            .iter()
            .find(|&&u| u != v && u != prev_other)?;
        let key = if v < next_other { [v, next_other] } else { [next_other, v] };
        let ei = edge_index.get(&key)?;
        let [a, b] = edge_triangles[*ei];
        let next = if a == current { b } else { a };
        if next == start {
            break;
        }
        if cycle.contains(&next) {
            return None; // revisits without closing: not a simple cycle
        }
        cycle.push(next);
        prev_other = next_other;
        current = next;
    }
    if cycle.len() == incident.len() {
        Some(cycle)
    } else {
        None
    }
}

/// Attempt a consistent orientation of all triangles by propagation across
/// shared edges; `None` means non-orientable.
fn orient(
    triangles: &[[usize; 3]],
    edge_index: &HashMap<[usize; 2], usize>,
    edge_triangles: &[[usize; 2]],
) -> Option<Vec<i8>> {
    let mut signs: Vec<i8> = vec![0; triangles.len()];
    signs[0] = 1;
    let mut stack = vec![0usize];
    while let Some(ti) = stack.pop() {
        let t = &triangles[ti];
        for e in triangle_edges(t) {
            let ei = edge_index[&e];
            let [a, b] = edge_triangles[ei];
            let other = if a == ti { b } else { a };
            // Consistent orientation: the shared edge must be traversed in
            // opposite directions by the two oriented triangles.
            let required = if edge_direction(t, &e) == edge_direction(&triangles[other], &e) {
                -signs[ti]
            } else {
                signs[ti]
            };
            if signs[other] == 0 {
                signs[other] = required;
                stack.push(other);
            } else if signs[other] != required {
                return None;
            }
        }
    }
    Some(signs)
}

/// Direction (+1/-1) in which the sorted triple `t`, read as the cycle
/// (t0, t1, t2), traverses the edge `e`.
fn edge_direction(t: &[usize; 3], e: &[usize; 2]) -> i8 {
    let cycle = [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])];
    for (a, b) in cycle {
        if (a, b) == (e[0], e[1]) {
            return 1;
        }
        if (a, b) == (e[1], e[0]) {
            return -1;
        }
    }
    unreachable!("edge {:?} not in triangle {:?}", e, t);
}
