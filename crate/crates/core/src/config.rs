//! JSON run configuration and the two drivers behind the command line:
//! a spatial convergence study on the manufactured solution and a time
//! march of the reverse-osmosis channel.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{AssemblyContext, ModelParams};
use crate::mesh::{build_rectangle, build_unit_square, load_mesh, Mesh, SideTags};
use crate::post::{error_norms, export_multiplier_vtk, export_vtk, ErrorReport, RateTable};
use crate::scenario::{
    channel_problem, exact_solution, manufactured_data, manufactured_params, polarization, ro_params, Polarization,
    CHANNEL_HEIGHT, CHANNEL_LENGTH, INLET_PEAK,
};
use crate::solver::{DiscreteState, PicardReport, Problem, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Convergence,
    Simulate,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Convergence => "convergence",
            Scenario::Simulate => "simulate",
        }
    }
}

/// Model constants as written in a config file. `a2` and `atilde0` default to
/// `a0 - a1 phi_in` and `a0 phi_in`; `dt` is ignored by convergence runs,
/// which use `dt = 1/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub nu: f64,
    pub kappa: f64,
    pub forch: f64,
    pub power: f64,
    pub a0: f64,
    pub a1: f64,
    #[serde(default)]
    pub phi_in: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atilde0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub t_final: f64,
}

impl ModelConfig {
    pub fn from_params(p: &ModelParams) -> Self {
        ModelConfig {
            nu: p.nu,
            kappa: p.kappa,
            forch: p.forch,
            power: p.power,
            a0: p.a0,
            a1: p.a1,
            phi_in: p.phi_in,
            a2: Some(p.a2),
            atilde0: Some(p.atilde0),
            dt: Some(p.dt),
            t_final: p.t_final,
        }
    }

    /// Resolves to full parameters with time step `dt` (or the configured one).
    pub fn params(&self, dt: Option<f64>) -> Result<ModelParams> {
        let dt = dt
            .or(self.dt)
            .ok_or_else(|| Error::Config("model.dt is required for simulate runs".into()))?;
        let mut p = ModelParams::membrane(
            self.nu,
            self.kappa,
            self.forch,
            self.power,
            self.a0,
            self.a1,
            self.phi_in,
            dt,
            self.t_final,
        )
        .map_err(config_error)?;
        if let Some(a2) = self.a2 {
            p.a2 = a2;
        }
        if let Some(a) = self.atilde0 {
            p.atilde0 = a;
        }
        p.validate().map_err(config_error)?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinMesh {
    /// `(0,1)^2` with `n` cells per side; inlet left, outlet right.
    UnitSquare,
    /// Axis-aligned rectangle with `nx x ny` cells; inlet left, outlet right.
    Rectangle,
}

/// One value or a refinement list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sizes {
    One(usize),
    Many(Vec<usize>),
}

impl Sizes {
    pub fn to_vec(&self) -> Vec<usize> {
        match self {
            Sizes::One(n) => vec![*n],
            Sizes::Many(v) => v.clone(),
        }
    }
}

/// Either a built-in mesh or a mesh file, never both.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<BuiltinMesh>,
    /// Cells per side of the unit square.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Sizes>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nx: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ny: Option<usize>,
    /// Rectangle size `[length, height]`; defaults to the channel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extent: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

impl MeshConfig {
    pub fn unit_square(sizes: Vec<usize>) -> Self {
        MeshConfig {
            builtin: Some(BuiltinMesh::UnitSquare),
            n: Some(Sizes::Many(sizes)),
            ..Default::default()
        }
    }

    pub fn rectangle(nx: usize, ny: usize) -> Self {
        MeshConfig {
            builtin: Some(BuiltinMesh::Rectangle),
            nx: Some(nx),
            ny: Some(ny),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (&self.builtin, &self.file) {
            (Some(_), Some(_)) => Err(Error::Config("mesh: give either \"builtin\" or \"file\", not both".into())),
            (None, None) => Err(Error::Config("mesh: one of \"builtin\" or \"file\" is required".into())),
            (None, Some(_)) => {
                if self.n.is_some() || self.nx.is_some() || self.ny.is_some() || self.extent.is_some() {
                    return Err(Error::Config("mesh: size fields only apply to builtin meshes".into()));
                }
                Ok(())
            }
            (Some(BuiltinMesh::UnitSquare), None) => {
                let sizes = self.sizes()?;
                if sizes.is_empty() || sizes.contains(&0) {
                    return Err(Error::Config("mesh.n must list positive sizes".into()));
                }
                if self.nx.is_some() || self.ny.is_some() || self.extent.is_some() {
                    return Err(Error::Config("mesh: nx, ny and extent belong to the rectangle".into()));
                }
                Ok(())
            }
            (Some(BuiltinMesh::Rectangle), None) => {
                if self.n.is_some() {
                    return Err(Error::Config("mesh: the rectangle takes nx and ny, not n".into()));
                }
                match (self.nx, self.ny) {
                    (Some(nx), Some(ny)) if nx > 0 && ny > 0 => Ok(()),
                    _ => Err(Error::Config("mesh: the rectangle needs positive nx and ny".into())),
                }
            }
        }
    }

    /// Unit-square sizes; defaults to `[8, 16, 32, 64]`.
    pub fn sizes(&self) -> Result<Vec<usize>> {
        Ok(self.n.as_ref().map(Sizes::to_vec).unwrap_or_else(|| vec![8, 16, 32, 64]))
    }

    /// Builds the single mesh of a simulate run.
    pub fn build(&self, base: &Path) -> Result<Mesh> {
        self.validate()?;
        if let Some(file) = &self.file {
            let path = if file.is_absolute() { file.clone() } else { base.join(file) };
            return load_mesh(path);
        }
        match self.builtin.unwrap() {
            BuiltinMesh::UnitSquare => {
                let sizes = self.sizes()?;
                if sizes.len() != 1 {
                    return Err(Error::Config("simulate needs a single mesh.n".into()));
                }
                build_unit_square(sizes[0], SideTags::channel())
            }
            BuiltinMesh::Rectangle => build_rectangle(
                [0.0, 0.0],
                self.extent.unwrap_or([CHANNEL_LENGTH, CHANNEL_HEIGHT]),
                self.nx.unwrap(),
                self.ny.unwrap(),
                SideTags::channel(),
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VtkMode {
    None,
    #[default]
    Final,
    /// Every `vtk_interval`-th step and the final one.
    EveryStep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub vtk: VtkMode,
    pub vtk_interval: usize,
    pub csv: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("out"),
            vtk: VtkMode::Final,
            vtk_interval: 1,
            csv: true,
        }
    }
}

/// Channel inflow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InflowConfig {
    pub peak: f64,
}

impl Default for InflowConfig {
    fn default() -> Self {
        InflowConfig { peak: INLET_PEAK }
    }
}

/// A complete run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Scenario>,
    /// Defaults to the manufactured constants for convergence runs and the
    /// reverse-osmosis constants for simulate runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    pub mesh: MeshConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Use the built-in manufactured data and sources.
    #[serde(default)]
    pub manufactured: bool,
    #[serde(default)]
    pub inflow: InflowConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let c: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.mesh.validate()?;
        self.solver.validate().map_err(config_error)?;
        if self.output.vtk_interval == 0 {
            return Err(Error::Config("output.vtk_interval must be at least 1".into()));
        }
        if !self.inflow.peak.is_finite() {
            return Err(Error::Config("inflow.peak must be finite".into()));
        }
        if self.scenario == Some(Scenario::Convergence) {
            self.check_convergence()?;
        }
        if let Some(m) = &self.model {
            m.params(Some(m.dt.unwrap_or(1.0)))?;
        }
        Ok(())
    }

    fn check_convergence(&self) -> Result<()> {
        if !self.manufactured {
            return Err(Error::Config("convergence runs need \"manufactured\": true".into()));
        }
        if self.mesh.builtin != Some(BuiltinMesh::UnitSquare) {
            return Err(Error::Config("convergence runs use the builtin unit_square mesh".into()));
        }
        let sizes = self.mesh.sizes()?;
        if sizes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("mesh.n must be strictly increasing".into()));
        }
        Ok(())
    }

    /// Checks that the configured scenario (if any) is `expected`.
    pub fn expect_scenario(&self, expected: Scenario) -> Result<()> {
        match self.scenario {
            Some(s) if s != expected => Err(Error::Config(format!(
                "config is for \"{}\" but \"{}\" was requested",
                s.as_str(),
                expected.as_str()
            ))),
            _ => Ok(()),
        }
    }

    fn model_params(&self, dt: Option<f64>) -> Result<ModelParams> {
        match &self.model {
            Some(m) => m.params(dt),
            None if self.manufactured => manufactured_params(dt.unwrap_or(1.0 / 16.0)).map_err(config_error),
            None => ro_params(dt.unwrap_or(1e-2), 0.2).map_err(config_error),
        }
    }
}

fn config_error(e: Error) -> Error {
    match e {
        Error::InvalidArgument(m) => Error::Config(m),
        other => other,
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Outcome of a convergence study.
#[derive(Debug, Clone)]
pub struct ConvergenceOutcome {
    /// Rows that completed, labelled with `h = 1/n`.
    pub reports: Vec<ErrorReport>,
    pub table: RateTable,
    /// Sizes whose march failed, with the error message.
    pub failures: Vec<(usize, String)>,
    pub csv_path: Option<PathBuf>,
}

/// Manufactured-solution study: for every `n`, march to `t_final` with
/// `dt = h = 1/n` and measure the errors at the final time.
pub fn run_convergence(config: &RunConfig) -> Result<ConvergenceOutcome> {
    config.validate()?;
    config.expect_scenario(Scenario::Convergence)?;
    config.check_convergence()?;
    let out = &config.output;
    if out.csv || out.vtk != VtkMode::None {
        create_dir(&out.dir)?;
    }
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for n in config.mesh.sizes()? {
        let h = 1.0 / n as f64;
        match convergence_row(config, n) {
            Ok((mut report, ctx, state)) => {
                report.h = h;
                info!(
                    "n = {n}: e_sigma {:.4e}, e_u {:.4e}, e_p {:.4e}, e_rho {:.4e}, e_phi {:.4e}, e_lambda {:.4e}",
                    report.e_sigma, report.e_u, report.e_p, report.e_rho, report.e_phi, report.e_lambda
                );
                if out.vtk != VtkMode::None {
                    export_vtk(&ctx, &state, &out.dir.join(format!("convergence_n{n}.vtk")))?;
                }
                reports.push(report);
            }
            Err(e @ Error::Io { .. }) => return Err(e),
            Err(e) => {
                warn!("n = {n}: row aborted: {e}");
                failures.push((n, e.to_string()));
            }
        }
    }
    let table = RateTable::from_reports(&reports)?;
    let csv_path = if out.csv {
        let p = out.dir.join("convergence.csv");
        table.write_csv(&p)?;
        Some(p)
    } else {
        None
    };
    Ok(ConvergenceOutcome {
        reports,
        table,
        failures,
        csv_path,
    })
}

fn convergence_row(config: &RunConfig, n: usize) -> Result<(ErrorReport, AssemblyContext, DiscreteState)> {
    let params = config.model_params(Some(1.0 / n as f64))?;
    let mesh = build_unit_square(n, SideTags::channel())?;
    let ctx = AssemblyContext::from_mesh(mesh, params)?;
    let (data, sources) = manufactured_data(&params);
    let mut problem = Problem::new(ctx, data, sources, config.solver)?;
    let state = problem.march(|k, s, r| {
        log_step(k, s, r);
        Ok(())
    })?;
    let report = error_norms(problem.context(), &state, &exact_solution(&params), state.t)?;
    Ok((report, problem.context().clone(), state))
}

fn log_step(k: usize, state: &DiscreteState, report: &PicardReport) {
    info!(
        "step {k:4}  t = {:.6}  picard {:3}  update {:.3e}{}",
        state.t,
        report.iterations,
        report.update_norms.last().copied().unwrap_or(f64::NAN),
        if report.converged { "" } else { "  (not converged)" }
    );
}

/// One accepted time step of a simulate run.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub report: PicardReport,
    pub polarization: Polarization,
}

#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    pub steps: Vec<StepRecord>,
    pub final_state: DiscreteState,
    pub context: AssemblyContext,
    /// Files written, in order.
    pub files: Vec<PathBuf>,
}

/// Header of the per-step diagnostic CSV.
pub const STEPS_CSV_HEADER: &str =
    "step,t,picard_iterations,update_norm,converged,wall_max,wall_min,wall_mean,interior_mean";

/// Time march of the configured problem with per-step polarization
/// diagnostics. `base` resolves relative mesh paths.
pub fn run_simulate(config: &RunConfig, base: &Path) -> Result<SimulationOutcome> {
    config.validate()?;
    config.expect_scenario(Scenario::Simulate)?;
    let mesh = config.mesh.build(base)?;
    let params = config.model_params(None)?;
    let mut problem = if config.manufactured {
        let ctx = AssemblyContext::from_mesh(mesh, params)?;
        let (data, sources) = manufactured_data(&params);
        Problem::new(ctx, data, sources, config.solver)?
    } else {
        channel_problem(mesh, params, config.inflow.peak, config.solver)?
    };
    let ctx = problem.context().clone();
    for t in [params.dt, params.t_final] {
        let bad = problem.data().junction_mismatches(ctx.mesh(), t, 1e-8);
        if let Some(&(v, jump)) = bad.iter().max_by(|a, b| a.1.total_cmp(&b.1)) {
            warn!(
                "boundary datum jumps by up to {jump:.3e} at {} inlet/wall junction(s) (vertex {v}, t = {t}); the multiplier vanishes there",
                bad.len()
            );
        }
    }

    let out = &config.output;
    if out.csv || out.vtk != VtkMode::None {
        create_dir(&out.dir)?;
    }
    let n_steps = params.n_steps();
    let mut steps = Vec::with_capacity(n_steps);
    let mut files = Vec::new();
    let final_state = problem.march(|k, state, report| {
        log_step(k, state, report);
        let pol = polarization(&ctx, state);
        let write = match out.vtk {
            VtkMode::None => false,
            VtkMode::Final => k == n_steps,
            VtkMode::EveryStep => k % out.vtk_interval == 0 || k == n_steps,
        };
        if write {
            let stem = if out.vtk == VtkMode::Final { "final".to_string() } else { format!("step_{k:05}") };
            let fields = out.dir.join(format!("{stem}.vtk"));
            let lambda = out.dir.join(format!("{stem}_multiplier.vtk"));
            export_vtk(&ctx, state, &fields)?;
            export_multiplier_vtk(&ctx, state, &lambda)?;
            files.push(fields);
            files.push(lambda);
        }
        steps.push(StepRecord {
            step: k,
            report: report.clone(),
            polarization: pol,
        });
        Ok(())
    })?;
    if out.csv {
        let path = out.dir.join("steps.csv");
        std::fs::write(&path, steps_csv(&steps)).map_err(|e| Error::io(&path, e))?;
        files.push(path);
    }
    Ok(SimulationOutcome {
        steps,
        final_state,
        context: ctx,
        files,
    })
}

/// Per-step log as CSV (see [`STEPS_CSV_HEADER`]).
pub fn steps_csv(steps: &[StepRecord]) -> String {
    let mut s = String::new();
    s.push_str(STEPS_CSV_HEADER);
    s.push('\n');
    for r in steps {
        let p = &r.polarization;
        writeln!(
            s,
            "{},{},{},{:e},{},{:e},{:e},{:e},{:e}",
            r.step,
            p.t,
            r.report.iterations,
            r.report.update_norms.last().copied().unwrap_or(f64::NAN),
            r.report.converged,
            p.wall_max,
            p.wall_min,
            p.wall_mean,
            p.interior_mean
        )
        .unwrap();
    }
    s
}
