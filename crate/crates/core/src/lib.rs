//! Geometric realization of triangulated closed surfaces on the integer lattice.
//!
//! Given an abstract triangulation of a closed surface, this crate searches for
//! vertex coordinates in `Z^3` such that the induced simplex-wise linear map is
//! an embedding (orientable surfaces) or an immersion (non-orientable surfaces).
//! The search descends an objective function that sums the lengths of
//! triangle-triangle intersection segments, moving one vertex by one lattice
//! unit at a time, optionally under a geometric symmetry constraint tied to an
//! automorphism of the triangulation.
//!
//! The crate is organized around the pipeline stages:
//!
//! * [`complex`] — parsing and validation of triangulations, surface
//!   classification.
//! * [`exactgeom`] — exact integer/rational predicates and triangle pair
//!   intersection segments.
//! * [`automorphisms`] — enumeration of the automorphism group.
//! * [`symmetry`] — lattice-compatible isometries and symmetry bindings.
//! * [`obstruction`] — the combinatorial triple-point infeasibility test for
//!   odd Euler characteristic.
//! * [`objective`] — the embedding/immersion objective and its incremental
//!   evaluation.
//! * [`search`] — the descent-step heuristic with restarts.
//! * [`io`] — corpus ingestion, results persistence, OBJ export.

pub mod automorphisms;
pub mod complex;
pub mod exactgeom;
pub mod io;
pub mod objective;
pub mod obstruction;
pub mod search;
pub mod symmetry;

pub use automorphisms::Automorphism;
pub use complex::SurfaceComplex;
pub use exactgeom::{IntersectionSegment, LatticePoint};
pub use io::ResultRecord;
pub use objective::{Mode, ObjectiveValue, PairSchedule};
pub use obstruction::ObstructionVerdict;
pub use search::{CoordinateAssignment, SearchConfig, SearchOutcome, SearchStatus};
pub use symmetry::{IsometryKind, LatticeIsometry, SymmetryBinding};
