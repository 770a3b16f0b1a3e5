//! Linear solves, the flow and transport sub-steps, the fixed-point
//! iteration and the backward Euler march.

pub mod linear;
mod problem;
mod state;

pub use linear::{LinearSolver, LinearSolverKind};
pub use problem::{update_norm, Problem};
pub use state::{DiscreteState, InitialGuess, NonConvergencePolicy, PicardReport, SolverConfig};
