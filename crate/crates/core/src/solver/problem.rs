use log::{debug, warn};

use super::linear::LinearSolver;
use super::state::{DiscreteState, InitialGuess, NonConvergencePolicy, PicardReport, SolverConfig};
use crate::error::{Error, Result};
use crate::forms::sparse::{BlockRange, CsrMatrix, SparseSystem, TripletBuilder};
use crate::forms::{AssemblyContext, BoundaryData, Sources};

/// A fully specified discrete problem: assembly context, data, solver
/// settings and the frozen-argument-independent blocks.
pub struct Problem {
    ctx: AssemblyContext,
    data: BoundaryData,
    sources: Sources,
    config: SolverConfig,
    af: CsrMatrix,
    bf: CsrMatrix,
    ac: CsrMatrix,
    bc_vol: CsrMatrix,
    bc_bd: CsrMatrix,
    cc: CsrMatrix,
    fc: Vec<f64>,
    mass_u: Vec<f64>,
    mass_c: Vec<f64>,
    flow_solver: LinearSolver,
    transport_solver: LinearSolver,
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("triangles", &self.ctx.mesh().n_triangles())
            .field("params", self.ctx.params())
            .field("config", &self.config)
            .finish_non_exhaustive()
    }
}

impl Problem {
    pub fn new(ctx: AssemblyContext, data: BoundaryData, sources: Sources, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        if ctx.layout().constrained_sigma().is_empty() {
            return Err(Error::InvalidArgument(
                "the flow problem needs at least one outlet edge; without it the pseudostress is determined only up to a multiple of the identity".into(),
            ));
        }
        let (mu, mc) = ctx.assemble_mass();
        let (bc_vol, bc_bd) = ctx.assemble_bc();
        Ok(Problem {
            af: ctx.assemble_af(),
            bf: ctx.assemble_bf(),
            ac: ctx.assemble_ac(),
            cc: ctx.assemble_cc(),
            fc: ctx.assemble_fc(),
            mass_u: mu.diagonal(),
            mass_c: mc.diagonal(),
            bc_vol,
            bc_bd,
            flow_solver: LinearSolver::new(config.linear, "flow step"),
            transport_solver: LinearSolver::new(config.linear, "transport step"),
            ctx,
            data,
            sources,
            config,
        })
    }

    pub fn context(&self) -> &AssemblyContext {
        &self.ctx
    }

    pub fn data(&self) -> &BoundaryData {
        &self.data
    }

    pub fn sources(&self) -> &Sources {
        &self.sources
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn set_config(&mut self, config: SolverConfig) -> Result<()> {
        config.validate()?;
        if config.linear != self.config.linear {
            self.flow_solver = LinearSolver::new(config.linear, "flow step");
            self.transport_solver = LinearSolver::new(config.linear, "transport step");
        }
        self.config = config;
        Ok(())
    }

    /// P0 projections of the initial fields; fluxes and multiplier are zero.
    pub fn project_initial(&self) -> Result<DiscreteState> {
        let mut s = DiscreteState::zeros(self.ctx.layout(), 0.0);
        s.u = self.ctx.project_vector(&*self.data.u0, "the initial velocity")?;
        s.phi = self.ctx.project_scalar(&*self.data.phi0, "the initial concentration")?;
        Ok(s)
    }

    /// Flow system for frozen `(z, chi)`, unknowns `[free sigma | u]`:
    ///
    /// ```text
    /// A sigma + B^T u                          = F(chi)
    /// -B sigma + O1(z) sigma + (M/dt + O2(z)) u = M u_prev/dt + f
    /// ```
    ///
    /// The convective block enters with a plus sign, i.e. the momentum
    /// equation reads `u_t - div sigma + (grad u) u + ... = f`.
    ///
    /// Returns the system and the pinned outlet values.
    pub fn flow_system(&self, z: &[f64], chi: &[f64], prev_u: &[f64], t: f64, dt: f64) -> Result<(SparseSystem, Vec<f64>)> {
        let layout = self.ctx.layout();
        let off = layout.flow_velocity_offset();
        let n = layout.flow_size();
        let pinned = self.ctx.outlet_values(&self.data, t)?;
        let mut pinned_full = vec![0.0; layout.n_sigma()];
        for (&c, &v) in layout.constrained_sigma().iter().zip(&pinned) {
            pinned_full[c] = v;
        }
        let o1 = self.ctx.assemble_o1f(z);
        let o2 = self.ctx.assemble_o2f(z);
        let ff = self.ctx.assemble_ff(&self.data, Some(chi), t)?;
        let (fu, _) = self.ctx.assemble_sources(&self.sources, t)?;

        let mut rhs = vec![0.0; n];
        let mut b = TripletBuilder::with_capacity(n, n, self.af.nnz() + 2 * self.bf.nnz() + o1.nnz() + o2.nnz());
        for (i, j, v) in self.af.iter() {
            let Some(fi) = layout.sigma_free_index(i) else { continue };
            match layout.sigma_free_index(j) {
                Some(fj) => b.push(fi, fj, v),
                None => rhs[fi] -= v * pinned_full[j],
            }
        }
        for (i, j, v) in self.bf.iter() {
            match layout.sigma_free_index(j) {
                Some(fj) => {
                    b.push(fj, off + i, v);
                    b.push(off + i, fj, -v);
                }
                None => rhs[off + i] += v * pinned_full[j],
            }
        }
        for (i, j, v) in o1.iter() {
            match layout.sigma_free_index(j) {
                Some(fj) => b.push(off + i, fj, v),
                None => rhs[off + i] -= v * pinned_full[j],
            }
        }
        for (i, &m) in self.mass_u.iter().enumerate() {
            b.push(off + i, off + i, m / dt);
            rhs[off + i] += m * prev_u[i] / dt + fu[i];
        }
        for (i, j, v) in o2.iter() {
            b.push(off + i, off + j, v);
        }
        for (full, &v) in ff.iter().enumerate() {
            if let Some(fi) = layout.sigma_free_index(full) {
                rhs[fi] += v;
            }
        }
        Ok((
            SparseSystem {
                matrix: b.build(),
                rhs,
                blocks: vec![
                    BlockRange { name: "sigma", range: 0..off },
                    BlockRange { name: "u", range: off..n },
                ],
            },
            pinned,
        ))
    }

    /// Transport system for frozen `(z, chi)`, unknowns `[rho | phi | lambda]`:
    ///
    /// ```text
    /// Ac rho + Bv^T phi + Bb^T lambda       = 0
    /// -Bv rho + O1(z) rho + M/dt phi        = M phi_prev/dt + g
    /// -Bb rho + (Cc + O2(chi)) lambda       = Fc + s
    /// ```
    ///
    /// so that `phi_t - div rho + u . grad phi = g` (solute carried
    /// downstream).
    pub fn transport_system(&self, z: &[f64], chi: &[f64], prev_phi: &[f64], t: f64, dt: f64) -> Result<SparseSystem> {
        let layout = self.ctx.layout();
        let op = layout.transport_concentration_offset();
        let ol = layout.transport_multiplier_offset();
        let n = layout.transport_size();
        let o1 = self.ctx.assemble_o1c(z);
        let o2 = self.ctx.assemble_o2c(chi);
        let (_, gc) = self.ctx.assemble_sources(&self.sources, t)?;
        let sb = self.ctx.assemble_multiplier_source(&self.sources, t)?;

        let mut rhs = vec![0.0; n];
        let mut b = TripletBuilder::with_capacity(
            n,
            n,
            self.ac.nnz() + 2 * (self.bc_vol.nnz() + self.bc_bd.nnz()) + o1.nnz() + self.cc.nnz() + o2.nnz() + layout.n_concentration(),
        );
        for (i, j, v) in self.ac.iter() {
            b.push(i, j, v);
        }
        for (i, j, v) in self.bc_vol.iter() {
            b.push(j, op + i, v);
            b.push(op + i, j, -v);
        }
        for (i, j, v) in self.bc_bd.iter() {
            b.push(j, ol + i, v);
            b.push(ol + i, j, -v);
        }
        for (i, j, v) in o1.iter() {
            b.push(op + i, j, v);
        }
        for (i, &m) in self.mass_c.iter().enumerate() {
            b.push(op + i, op + i, m / dt);
            rhs[op + i] = m * prev_phi[i] / dt + gc[i];
        }
        for (i, j, v) in self.cc.iter() {
            b.push(ol + i, ol + j, v);
        }
        for (i, j, v) in o2.iter() {
            b.push(ol + i, ol + j, v);
        }
        for i in 0..layout.n_multiplier {
            rhs[ol + i] = self.fc[i] + sb[i];
        }
        Ok(SparseSystem {
            matrix: b.build(),
            rhs,
            blocks: vec![
                BlockRange { name: "rho", range: 0..op },
                BlockRange { name: "phi", range: op..ol },
                BlockRange { name: "lambda", range: ol..n },
            ],
        })
    }

    /// Solves the flow system; returns `(sigma in full numbering, u)`.
    pub fn flow_step(&mut self, z: &[f64], chi: &[f64], prev_u: &[f64], t: f64, dt: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let (sys, pinned) = self.flow_system(z, chi, prev_u, t, dt)?;
        let x = self.flow_solver.solve(&sys.matrix, &sys.rhs)?;
        let layout = self.ctx.layout();
        let off = layout.flow_velocity_offset();
        let mut sigma = vec![0.0; layout.n_sigma()];
        for (full, s) in sigma.iter_mut().enumerate() {
            if let Some(fi) = layout.sigma_free_index(full) {
                *s = x[fi];
            }
        }
        for (&c, &v) in layout.constrained_sigma().iter().zip(&pinned) {
            sigma[c] = v;
        }
        Ok((sigma, x[off..].to_vec()))
    }

    /// Solves the transport system; returns `(rho, phi, lambda)`.
    pub fn transport_step(
        &mut self,
        z: &[f64],
        chi: &[f64],
        prev_phi: &[f64],
        t: f64,
        dt: f64,
    ) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let sys = self.transport_system(z, chi, prev_phi, t, dt)?;
        let x = self.transport_solver.solve(&sys.matrix, &sys.rhs)?;
        let layout = self.ctx.layout();
        let op = layout.transport_concentration_offset();
        let ol = layout.transport_multiplier_offset();
        Ok((x[..op].to_vec(), x[op..ol].to_vec(), x[ol..].to_vec()))
    }

    /// One fixed-point sweep from `(z, chi)`: transport first, then flow with
    /// the new multiplier.
    pub fn sweep(&mut self, z: &[f64], chi: &[f64], prev: &DiscreteState, t: f64, dt: f64) -> Result<DiscreteState> {
        let (rho, phi, lambda) = self.transport_step(z, chi, &prev.phi, t, dt)?;
        let (sigma, u) = self.flow_step(z, &lambda, &prev.u, t, dt)?;
        Ok(DiscreteState {
            sigma,
            u,
            rho,
            phi,
            lambda,
            t,
        })
    }

    /// Advances `prev` to time `t` with the fixed-point iteration.
    pub fn picard_solve(&mut self, prev: &DiscreteState, t: f64) -> Result<(DiscreteState, PicardReport)> {
        prev.check_layout(self.ctx.layout())?;
        let dt = t - prev.t;
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!("time {t} does not advance past {}", prev.t)));
        }
        let (mut z, mut chi) = match self.config.initial_guess {
            InitialGuess::Previous => (prev.u.clone(), prev.lambda.clone()),
            InitialGuess::Zero => (vec![0.0; prev.u.len()], vec![0.0; prev.lambda.len()]),
        };
        let mut report = PicardReport {
            iterations: 0,
            update_norms: Vec::new(),
            converged: false,
            final_residual: f64::NAN,
        };
        let mut state = None;
        for it in 1..=self.config.picard_max_iter {
            let s = self.sweep(&z, &chi, prev, t, dt)?;
            let du: f64 = s.u.iter().zip(&z).map(|(a, b)| (a - b) * (a - b)).sum();
            let dl: f64 = s.lambda.iter().zip(&chi).map(|(a, b)| (a - b) * (a - b)).sum();
            let update = (du + dl).sqrt();
            report.iterations = it;
            report.update_norms.push(update);
            debug!("t = {t:.6}: sweep {it}, update {update:.3e}");
            if !s.is_finite() {
                return Err(Error::Solver {
                    context: "fixed-point iteration",
                    message: format!("non-finite iterate at sweep {it}"),
                });
            }
            z.clone_from(&s.u);
            chi.clone_from(&s.lambda);
            state = Some(s);
            if update < self.config.picard_tol {
                report.converged = true;
                break;
            }
        }
        let state = state.expect("at least one sweep");
        if self.config.check_residual || !report.converged {
            report.final_residual = self.coupled_residual(&state, prev)?;
        }
        if !report.converged {
            match self.config.on_nonconvergence {
                NonConvergencePolicy::Abort => return Err(Error::NotConverged { report }),
                NonConvergencePolicy::Warn => warn!(
                    "t = {t}: fixed-point iteration stopped after {} sweeps (update {:e}); accepting the last iterate",
                    report.iterations,
                    report.update_norms.last().copied().unwrap_or(f64::NAN)
                ),
            }
        }
        Ok((state, report))
    }

    /// Relative residual of the four discrete equations at `state`, with the
    /// frozen arguments set to the state's own velocity and multiplier.
    ///
    /// Each subsystem contributes `|A x - b|_inf / |b|_inf` (absolute when
    /// `b = 0`); the larger value is returned.
    pub fn coupled_residual(&self, state: &DiscreteState, prev: &DiscreteState) -> Result<f64> {
        let dt = state.t - prev.t;
        let layout = self.ctx.layout();
        let (flow, _) = self.flow_system(&state.u, &state.lambda, &prev.u, state.t, dt)?;
        let mut xf = Vec::with_capacity(layout.flow_size());
        for (full, &s) in state.sigma.iter().enumerate() {
            if layout.sigma_free_index(full).is_some() {
                xf.push(s);
            }
        }
        xf.extend_from_slice(&state.u);
        let tr = self.transport_system(&state.u, &state.lambda, &prev.phi, state.t, dt)?;
        let mut xt = state.rho.clone();
        xt.extend_from_slice(&state.phi);
        xt.extend_from_slice(&state.lambda);
        Ok(flow.relative_residual(&xf).max(tr.relative_residual(&xt)))
    }

    /// Marches from the projected initial data to `t_final`, calling
    /// `on_step(k, state, report)` after every accepted step.
    pub fn march<F>(&mut self, mut on_step: F) -> Result<DiscreteState>
    where
        F: FnMut(usize, &DiscreteState, &PicardReport) -> Result<()>,
    {
        let params = *self.ctx.params();
        if !params.uniform_grid() {
            warn!(
                "t_final = {} is not a multiple of dt = {}; the last step is shortened",
                params.t_final, params.dt
            );
        }
        let mut state = self.project_initial()?;
        for k in 1..=params.n_steps() {
            let t = params.time(k);
            let (next, report) = self.picard_solve(&state, t).map_err(|e| Error::TimeStep {
                step: k,
                time: t,
                source: Box::new(e),
            })?;
            on_step(k, &next, &report)?;
            state = next;
        }
        Ok(state)
    }

    /// Largest relative residual of the last direct solves.
    pub fn last_linear_residuals(&self) -> (f64, f64) {
        (self.flow_solver.last_relative_residual, self.transport_solver.last_relative_residual)
    }
}

/// Euclidean distance between the `(u, lambda)` parts of two states.
pub fn update_norm(a: &DiscreteState, b: &DiscreteState) -> f64 {
    let du: f64 = a.u.iter().zip(&b.u).map(|(x, y)| (x - y) * (x - y)).sum();
    let dl: f64 = a.lambda.iter().zip(&b.lambda).map(|(x, y)| (x - y) * (x - y)).sum();
    (du + dl).sqrt()
}

