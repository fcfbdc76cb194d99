//! Multicolored Sperner colorings on partition subdivisions of a simplex.
//!
//! * [`complex`]: finite simplicial complexes, simplicial and face maps,
//!   barycentric points, the specialization order.
//! * [`partition`]: the partition complex `K_{n,r}` and its subdivision map.
//! * [`coloring`]: rating schemes and the Sperner colorings they induce.
//! * [`solver`] and [`hypergraph`]: faces with enough colors per coloring and
//!   their color hypergraphs.
//! * [`maps`] and [`winding`]: the grid spaces `X`, `Y`, the maps `J`, `H`,
//!   `ρ`, `C`, and the boundary degree check for triangles.
//! * [`verify`]: a seeded property suite for the grid maps.
//! * [`sweep`]: seeded parameter sweeps with an append-only log.

pub mod coloring;
pub mod complex;
pub mod hypergraph;
pub mod maps;
pub mod partition;
pub mod rng;
pub mod solver;
pub mod sweep;
pub mod verify;
pub mod winding;

/// Absolute tolerance for normalization checks.
pub const TOLERANCE: f64 = 1e-12;

pub use coloring::{ColoringSpec, RatingScheme, VertexColoring};
pub use complex::{Complex, Face, FaceMap, RealizationPoint, VertexMap};
pub use hypergraph::{ColorHypergraph, TreeShape};
pub use maps::NonnegGrid;
pub use partition::{Partition, PartitionComplex};
pub use solver::{SizeVector, SolutionReport, SolutionSearch};
