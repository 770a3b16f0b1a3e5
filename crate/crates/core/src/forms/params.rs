use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical and discretization constants.
///
/// The membrane law on the wall is written through `a0`, `a1` (velocity
/// condition `u = (a0 - a1 phi) n`) and `a2`, `atilde0` (flux condition
/// `rho . n = atilde0 + (a2 - a1 phi) phi`), where `phi` is the concentration
/// shifted by the inlet value `phi_in`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub nu: f64,
    pub kappa: f64,
    /// Forchheimer coefficient `F`.
    pub forch: f64,
    /// Forchheimer exponent `p` in `[3, 4]`.
    pub power: f64,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub atilde0: f64,
    pub phi_in: f64,
    pub dt: f64,
    pub t_final: f64,
}

impl ModelParams {
    /// Builds parameters with `a2 = a0 - a1 phi_in` and `atilde0 = a0 phi_in`.
    #[allow(clippy::too_many_arguments)]
    pub fn membrane(
        nu: f64,
        kappa: f64,
        forch: f64,
        power: f64,
        a0: f64,
        a1: f64,
        phi_in: f64,
        dt: f64,
        t_final: f64,
    ) -> Result<Self> {
        let p = ModelParams {
            nu,
            kappa,
            forch,
            power,
            a0,
            a1,
            a2: a0 - a1 * phi_in,
            atilde0: a0 * phi_in,
            phi_in,
            dt,
            t_final,
        };
        p.validate()?;
        Ok(p)
    }

    /// Folds the raw membrane constants (permeability `A`, pressure drop
    /// `dP`, van 't Hoff factor `i`, gas constant `R`, temperature `T`) into
    /// `a0 = A dP - A i R T phi_in` and `a1 = A i R T`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_physical(
        nu: f64,
        kappa: f64,
        forch: f64,
        power: f64,
        permeability: f64,
        pressure_drop: f64,
        vant_hoff: f64,
        gas_constant: f64,
        temperature: f64,
        phi_in: f64,
        dt: f64,
        t_final: f64,
    ) -> Result<Self> {
        let a1 = permeability * vant_hoff * gas_constant * temperature;
        let a0 = permeability * pressure_drop - a1 * phi_in;
        Self::membrane(nu, kappa, forch, power, a0, a1, phi_in, dt, t_final)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.nu,
            self.kappa,
            self.forch,
            self.power,
            self.a0,
            self.a1,
            self.a2,
            self.atilde0,
            self.phi_in,
            self.dt,
            self.t_final,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("model parameters must be finite".into()));
        }
        for (name, v) in [("nu", self.nu), ("kappa", self.kappa), ("dt", self.dt), ("t_final", self.t_final)] {
            if v <= 0.0 {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if self.forch < 0.0 {
            return Err(Error::InvalidArgument(format!("forch must be nonnegative, got {}", self.forch)));
        }
        if !(3.0..=4.0).contains(&self.power) {
            return Err(Error::InvalidArgument(format!("power must lie in [3, 4], got {}", self.power)));
        }
        Ok(())
    }

    /// Number of backward Euler steps to reach `t_final`; a trailing partial
    /// step counts as one.
    pub fn n_steps(&self) -> usize {
        let r = self.t_final / self.dt;
        let n = r.round();
        if (r - n).abs() <= 1e-9 * r.max(1.0) {
            n.max(1.0) as usize
        } else {
            r.ceil() as usize
        }
    }

    /// `true` when `t_final` is an integer multiple of `dt`.
    pub fn uniform_grid(&self) -> bool {
        let r = self.t_final / self.dt;
        (r - r.round()).abs() <= 1e-9 * r.max(1.0)
    }

    /// Time level `k` of the grid, `t_k = k dt` with the last level clamped to
    /// `t_final`.
    pub fn time(&self, k: usize) -> f64 {
        if k >= self.n_steps() {
            self.t_final
        } else {
            k as f64 * self.dt
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ModelParams {
        ModelParams::membrane(0.1, 0.1, 1.0, 3.0, 0.5, 2.0, 0.0, 0.125, 0.5).unwrap()
    }

    #[test]
    fn derived_membrane_constants() {
        let p = ModelParams::membrane(0.8, 1e-3, 3.0, 3.0, 2e-2, 1.8e4, 6e-10, 1e-2, 0.2).unwrap();
        assert!((p.a2 - (2e-2 - 1.8e4 * 6e-10)).abs() < 1e-18);
        assert!((p.atilde0 - 1.2e-11).abs() < 1e-24);
    }

    #[test]
    fn physical_constants_fold() {
        let p = ModelParams::from_physical(1.0, 1.0, 0.0, 3.0, 2.0, 5.0, 2.0, 1.5, 3.0, 0.1, 0.1, 1.0).unwrap();
        assert!((p.a1 - 18.0).abs() < 1e-14);
        assert!((p.a0 - (10.0 - 1.8)).abs() < 1e-14);
    }

    #[test]
    fn validation() {
        let mut p = base();
        p.power = 2.5;
        assert!(p.validate().is_err());
        let mut p = base();
        p.dt = 0.0;
        assert!(p.validate().is_err());
        let mut p = base();
        p.nu = f64::NAN;
        assert!(p.validate().is_err());
    }

    #[test]
    fn time_grid() {
        let p = base();
        assert_eq!(p.n_steps(), 4);
        assert!(p.uniform_grid());
        assert_eq!(p.time(4), 0.5);
        let mut q = p;
        q.dt = 0.15;
        assert_eq!(q.n_steps(), 4);
        assert!(!q.uniform_grid());
        assert_eq!(q.time(4), 0.5);
        assert!((q.time(3) - 0.45).abs() < 1e-15);
    }
}
