//! Bilinear, frozen-argument and linear forms of the fully discrete scheme.

mod assembly;
mod data;
mod params;
pub mod sparse;

pub use assembly::AssemblyContext;
pub use data::{BoundaryData, BoundaryScalarField, BoundaryVectorField, ScalarField, Sources, VectorField};
pub use params::ModelParams;
pub use sparse::{CsrMatrix, SparseSystem, TripletBuilder};
