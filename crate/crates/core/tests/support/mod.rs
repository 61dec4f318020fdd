//! Test fixtures: exhaustive generation of small closed-surface
//! triangulations, used to build the input corpora the integration tests run
//! against, plus shared oracles.

// Each integration test binary compiles this module but uses its own subset.
#![allow(dead_code)]

pub mod enumerate;
pub mod oracles;

use trisurf::complex::{parse_triangulation, SurfaceComplex};

pub const TETRAHEDRON: &str = "[[1,2,3],[1,2,4],[1,3,4],[2,3,4]]";
pub const RP2_6: &str =
    "[[1,2,3],[1,2,4],[1,3,5],[1,4,6],[1,5,6],[2,3,6],[2,4,5],[2,5,6],[3,4,5],[3,4,6]]";

pub fn tetrahedron() -> SurfaceComplex {
    parse_triangulation(TETRAHEDRON).unwrap()
}

pub fn rp2_6() -> SurfaceComplex {
    parse_triangulation(RP2_6).unwrap()
}

/// The unique 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
pub fn torus_7() -> SurfaceComplex {
    let mut tris = Vec::new();
    for i in 0..7usize {
        tris.push(vec![i % 7 + 1, (i + 1) % 7 + 1, (i + 3) % 7 + 1]);
        tris.push(vec![i % 7 + 1, (i + 2) % 7 + 1, (i + 3) % 7 + 1]);
    }
    parse_triangulation(&serde_json::to_string(&tris).unwrap()).unwrap()
}

/// Path of a data file shipped with the workspace.
pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}
