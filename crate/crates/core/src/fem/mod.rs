//! Discrete spaces: quadrature, lowest-order Raviart–Thomas basis functions,
//! degree-of-freedom layouts and the boundary multiplier space.

mod dofs;
mod geometry;
mod multiplier;
mod quadrature;
mod rt0;
pub mod tensor;

pub use dofs::DofLayout;
pub use geometry::TriangleGeometry;
pub use multiplier::{eval_multiplier, multiplier_on_edge};
pub use quadrature::{gauss_legendre, EdgeQuadratureRule, QuadratureRule};
pub use rt0::{rt0_basis, rt0_interpolate, Rt0Function};
