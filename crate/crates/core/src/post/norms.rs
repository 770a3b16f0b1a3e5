use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::fields::{div_rt0, div_sigma, eval_rt0, eval_sigma, recover_pressure};
use crate::error::{Error, Result};
use crate::fem::tensor::Tensor;
use crate::fem::{multiplier_on_edge, EdgeQuadratureRule, QuadratureRule};
use crate::forms::AssemblyContext;
use crate::solver::DiscreteState;
use crate::Point;

type Field<T> = Arc<dyn Fn(Point, f64) -> T + Send + Sync>;

/// Closed-form exact solution and the divergences of its flux variables.
#[derive(Clone)]
pub struct ExactSolution {
    pub sigma: Field<Tensor>,
    pub div_sigma: Field<Point>,
    pub u: Field<Point>,
    pub p: Field<f64>,
    pub rho: Field<Point>,
    pub div_rho: Field<f64>,
    pub phi: Field<f64>,
    /// Multiplier on the non-inlet boundary.
    pub lambda: Field<f64>,
}

impl std::fmt::Debug for ExactSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("ExactSolution { .. }")
    }
}

/// Errors of one discrete solution against an exact one.
///
/// `e_sigma`, `e_rho`: `L2 + L^{4/3}` of the divergence; `e_u`, `e_phi`: `L4`;
/// `e_p`: `L2`; `e_lambda`: `L2` on the non-inlet boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub h: f64,
    pub dt: f64,
    pub e_sigma: f64,
    pub e_u: f64,
    pub e_p: f64,
    pub e_rho: f64,
    pub e_phi: f64,
    pub e_lambda: f64,
}

impl ErrorReport {
    /// Errors in table order: sigma, u, p, rho, phi, lambda.
    pub fn errors(&self) -> [f64; 6] {
        [self.e_sigma, self.e_u, self.e_p, self.e_rho, self.e_phi, self.e_lambda]
    }
}

pub const FIELD_NAMES: [&str; 6] = ["sigma", "u", "p", "rho", "phi", "lambda"];

/// Error norms at time `t` with the degree-7 volume rule and a 5-point edge
/// rule.
pub fn error_norms(ctx: &AssemblyContext, state: &DiscreteState, exact: &ExactSolution, t: f64) -> Result<ErrorReport> {
    error_norms_with(ctx, state, exact, t, &QuadratureRule::collapsed(7), &EdgeQuadratureRule::gauss(5))
}

pub fn error_norms_with(
    ctx: &AssemblyContext,
    state: &DiscreteState,
    exact: &ExactSolution,
    t: f64,
    rule: &QuadratureRule,
    edge_rule: &EdgeQuadratureRule,
) -> Result<ErrorReport> {
    state.check_layout(ctx.layout())?;
    let mesh = ctx.mesh();
    let pressure = recover_pressure(ctx, &state.sigma);
    let mut s = [0.0f64; 8];
    let [sig2, dsig43, u4, p2, rho2, drho43, phi4, _] = &mut s;
    for tri in 0..mesh.n_triangles() {
        let g = ctx.geometry(tri);
        let dsh = div_sigma(ctx, &state.sigma, tri);
        let drh = div_rt0(ctx, &state.rho, tri);
        let uh = [state.u[2 * tri], state.u[2 * tri + 1]];
        let phih = state.phi[tri];
        for (x, w) in rule.mapped(&g.vertices, g.area) {
            let se = (exact.sigma)(x, t);
            let sh = eval_sigma(ctx, &state.sigma, tri, x);
            let ds = (exact.div_sigma)(x, t);
            let ue = (exact.u)(x, t);
            let pe = (exact.p)(x, t);
            let re = (exact.rho)(x, t);
            let rh = eval_rt0(ctx, &state.rho, tri, x);
            let dr = (exact.div_rho)(x, t);
            let fe = (exact.phi)(x, t);
            let all = [
                se[0][0], se[0][1], se[1][0], se[1][1], ds[0], ds[1], ue[0], ue[1], pe, re[0], re[1], dr, fe,
            ];
            if all.iter().any(|v| !v.is_finite()) {
                return Err(Error::Data {
                    what: "the exact solution",
                    point: x,
                    time: t,
                });
            }
            let mut d2 = 0.0;
            for r in 0..2 {
                for c in 0..2 {
                    d2 += (se[r][c] - sh[r][c]).powi(2);
                }
            }
            *sig2 += w * d2;
            *dsig43 += w * ((ds[0] - dsh[0]).powi(2) + (ds[1] - dsh[1]).powi(2)).powf(2.0 / 3.0);
            *u4 += w * ((ue[0] - uh[0]).powi(2) + (ue[1] - uh[1]).powi(2)).powi(2);
            *p2 += w * (pe - pressure.eval(tri, x)).powi(2);
            *rho2 += w * ((re[0] - rh[0]).powi(2) + (re[1] - rh[1]).powi(2));
            *drho43 += w * (dr - drh).abs().powf(4.0 / 3.0);
            *phi4 += w * (fe - phih).powi(4);
        }
    }
    let mut lam2 = 0.0;
    for &e in ctx.partition().chain_edges() {
        for (x, sp, w) in ctx.edge_points(e, edge_rule) {
            let le = (exact.lambda)(x, t);
            if !le.is_finite() {
                return Err(Error::Data {
                    what: "the exact multiplier",
                    point: x,
                    time: t,
                });
            }
            let lh = multiplier_on_edge(ctx.partition(), &state.lambda, e, sp).expect("chain edge");
            lam2 += w * (le - lh).powi(2);
        }
    }
    Ok(ErrorReport {
        h: mesh.max_diameter(),
        dt: ctx.params().dt,
        e_sigma: s[0].sqrt() + s[1].powf(0.75),
        e_u: s[2].powf(0.25),
        e_p: s[3].sqrt(),
        e_rho: s[4].sqrt() + s[5].powf(0.75),
        e_phi: s[6].powf(0.25),
        e_lambda: lam2.sqrt(),
    })
}

/// `L^q` norm of a scalar function over the mesh with the given rule.
pub fn lq_norm(ctx: &AssemblyContext, q: f64, rule: &QuadratureRule, f: impl Fn(Point) -> f64) -> f64 {
    let mut acc = 0.0;
    for t in 0..ctx.mesh().n_triangles() {
        let g = ctx.geometry(t);
        for (x, w) in rule.mapped(&g.vertices, g.area) {
            acc += w * f(x).abs().powf(q);
        }
    }
    acc.powf(1.0 / q)
}
