//! Precoloring extension to odd cycles for graphs embedded in orientable
//! surfaces, via nowhere-zero flows with prescribed homology on the dual.

pub mod chains;
pub mod circulation;
pub mod flows;
pub mod generators;
pub mod hollow2d;
pub mod homology;
pub mod lattice;
pub mod map;
pub mod paths;
pub mod solver;
pub mod surfmap;

pub use chains::{Chain0, Chain1, Chain2, ChainError};
pub use homology::{cohomology_basis, CohomologyBasis, Copath, HomologyError};
pub use map::{CombinatorialMap, Face, FaceProfile, HalfEdge, MapError, ModulusError, Vertex};
