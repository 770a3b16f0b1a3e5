use serde::{Deserialize, Serialize};

use super::linear::LinearSolverKind;
use crate::error::{Error, Result};
use crate::fem::DofLayout;

/// Coefficient vectors of all five fields at one time level.
///
/// `sigma` uses the full pseudostress numbering (row-major over edges),
/// including the constrained outlet dofs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteState {
    pub sigma: Vec<f64>,
    pub u: Vec<f64>,
    pub rho: Vec<f64>,
    pub phi: Vec<f64>,
    pub lambda: Vec<f64>,
    pub t: f64,
}

impl DiscreteState {
    pub fn zeros(layout: &DofLayout, t: f64) -> Self {
        DiscreteState {
            sigma: vec![0.0; layout.n_sigma()],
            u: vec![0.0; layout.n_velocity()],
            rho: vec![0.0; layout.n_flux()],
            phi: vec![0.0; layout.n_concentration()],
            lambda: vec![0.0; layout.n_multiplier],
            t,
        }
    }

    pub fn is_finite(&self) -> bool {
        [&self.sigma, &self.u, &self.rho, &self.phi, &self.lambda]
            .iter()
            .all(|v| v.iter().all(|x| x.is_finite()))
    }

    /// Largest absolute coefficient over all fields.
    pub fn max_abs(&self) -> f64 {
        [&self.sigma, &self.u, &self.rho, &self.phi, &self.lambda]
            .iter()
            .flat_map(|v| v.iter())
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn check_layout(&self, layout: &DofLayout) -> Result<()> {
        let ok = self.sigma.len() == layout.n_sigma()
            && self.u.len() == layout.n_velocity()
            && self.rho.len() == layout.n_flux()
            && self.phi.len() == layout.n_concentration()
            && self.lambda.len() == layout.n_multiplier;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument("state sizes do not match the dof layout".into()))
        }
    }
}

/// History of one fixed-point solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardReport {
    pub iterations: usize,
    /// Euclidean norm of the coefficient update `(u* - z, lambda* - chi)` per
    /// sweep.
    pub update_norms: Vec<f64>,
    pub converged: bool,
    /// Relative residual of the coupled equations at the returned state.
    pub final_residual: f64,
}

/// Starting point of the fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialGuess {
    #[default]
    Previous,
    Zero,
}

/// What to do when the fixed-point iteration exhausts its budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonConvergencePolicy {
    #[default]
    Abort,
    /// Log a warning and accept the last iterate.
    Warn,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    pub linear: LinearSolverKind,
    pub initial_guess: InitialGuess,
    pub on_nonconvergence: NonConvergencePolicy,
    /// Evaluate the coupled residual after every converged step.
    pub check_residual: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            picard_tol: 1e-8,
            picard_max_iter: 50,
            linear: LinearSolverKind::Direct,
            initial_guess: InitialGuess::Previous,
            on_nonconvergence: NonConvergencePolicy::Abort,
            check_residual: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.picard_tol > 0.0) || !self.picard_tol.is_finite() {
            return Err(Error::InvalidArgument(format!("picard_tol must be positive, got {}", self.picard_tol)));
        }
        if self.picard_max_iter == 0 {
            return Err(Error::InvalidArgument("picard_max_iter must be at least 1".into()));
        }
        if let LinearSolverKind::Gmres { tol, max_iter, restart } = self.linear {
            if !(tol > 0.0) || max_iter == 0 || restart == 0 {
                return Err(Error::InvalidArgument("GMRES needs tol > 0, max_iter >= 1 and restart >= 1".into()));
            }
        }
        Ok(())
    }
}
