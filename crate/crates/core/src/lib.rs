//! Minimal filling pairs on the closed genus-two surface.
//!
//! The crate enumerates the combinatorial types of minimally intersecting
//! filling pairs as fat graphs, and computes hyperbolic lower bounds on their
//! length by reducing to small optimization problems over polygon areas.

pub mod bounds;
pub mod cli;
pub mod enumeration;
pub mod fatgraph;
pub mod hypgeom;
pub mod numeric;
pub mod perm;
pub mod precision;
pub mod quadopt;

pub use enumeration::{FaceType, FillingConfiguration, SymmetryGroup};
pub use fatgraph::{DartLabel, FatGraph, FatGraphError};
pub use perm::Permutation;
