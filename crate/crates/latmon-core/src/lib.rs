//! Exact lattice computations around `Λ = U(2)^3 ⊕ E8 ⊕ A1^2`.

pub mod cyclo;
pub mod discform;
pub mod error;
pub mod fixture;
pub mod genus;
pub mod group;
pub mod isometry;
pub mod lattice;
pub mod matrix;
pub mod model;
pub mod named;
pub mod verify;
pub mod walls;

pub use error::{Error, Result};
pub use isometry::LatticeIsometry;
pub use lattice::{Lattice, LatticeVector, Sublattice};
pub use model::StandardLambdaModel;
