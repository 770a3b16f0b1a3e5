//! Mixed finite elements for the unsteady p-type convective Brinkman–Forchheimer
//! equations coupled with solute transport through a semi-permeable membrane.
//!
//! The flow is written in pseudostress–velocity form and the transport in
//! flux–concentration form with a boundary Lagrange multiplier. Fluxes are
//! discretized with lowest-order Raviart–Thomas elements, primal unknowns with
//! piecewise constants and the multiplier with continuous piecewise-linear
//! functions on a coarsened boundary partition. Time is advanced with backward
//! Euler; at every step the nonlinear coupling is resolved by a decoupled
//! fixed-point (Picard) iteration.
//!
//! The crate is organised bottom-up:
//!
//! * [`mesh`]: triangulations with tagged inlet/wall/outlet boundaries and the
//!   multiplier partition.
//! * [`fem`]: quadrature, RT0 basis functions, degree-of-freedom layouts and the
//!   boundary multiplier space.
//! * [`forms`]: assembly of every bilinear, frozen-argument and linear form.
//! * [`solver`]: sparse linear solves, the flow and transport sub-steps, the
//!   Picard loop and the time march.
//! * [`post`]: pressure recovery, error norms, rates and VTK/CSV export.
//! * [`scenario`]: the manufactured-solution problem and the reverse-osmosis
//!   channel.
//! * [`config`]: JSON run configuration and the two CLI drivers.

pub mod config;
pub mod error;
pub mod fem;
pub mod forms;
pub mod mesh;
pub mod post;
pub mod scenario;
pub mod solver;

pub use error::{Error, Result};

/// A point or vector in the plane.
pub type Point = [f64; 2];

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::fem::{DofLayout, EdgeQuadratureRule, QuadratureRule};
    pub use crate::forms::{AssemblyContext, BoundaryData, ModelParams, Sources};
    pub use crate::mesh::{BoundaryTag, Mesh, MultiplierPartition, SideTags};
    pub use crate::post::{ErrorReport, RateTable};
    pub use crate::solver::{DiscreteState, PicardReport, Problem, SolverConfig};
    pub use crate::Point;
}
