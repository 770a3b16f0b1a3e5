//! Rectangular reverse-osmosis channel: parabolic inflow on the left,
//! membranes on the top and bottom walls, free outflow on the right.

use std::sync::Arc;

use crate::error::Result;
use crate::forms::{AssemblyContext, BoundaryData, ModelParams, Sources, VectorField};
use crate::mesh::{build_rectangle, BoundaryTag, Mesh, SideTags};
use crate::solver::{DiscreteState, Problem, SolverConfig};

pub const CHANNEL_HEIGHT: f64 = 0.7221;
pub const CHANNEL_LENGTH: f64 = 8.6652;
/// Peak axial inflow speed.
pub const INLET_PEAK: f64 = 10.0;

/// `nu = 0.8`, `F = 3`, `kappa = 1e-3`, `a0 = 2e-2`, `a1 = 1.8e4`,
/// `phi_in = 6e-10`, `p = 3`.
pub fn ro_params(dt: f64, t_final: f64) -> Result<ModelParams> {
    ModelParams::membrane(0.8, 1e-3, 3.0, 3.0, 2e-2, 1.8e4, 6e-10, dt, t_final)
}

/// Inflow `(peak (4 y/H - 4 (y/H)^2), (a0 - a1 phi_in) (2 y/H - 1))` with
/// `y` measured from the bottom wall at `y0`.
pub fn inlet_profile(params: &ModelParams, peak: f64, height: f64, y0: f64) -> VectorField {
    let a2 = params.a0 - params.a1 * params.phi_in;
    Arc::new(move |x, _| {
        let s = (x[1] - y0) / height;
        [peak * (4.0 * s - 4.0 * s * s), a2 * (2.0 * s - 1.0)]
    })
}

/// `nx x ny` right-diagonal mesh of the channel; `ny` must be even so the
/// membrane/outlet chain pairs up.
pub fn channel_mesh(nx: usize, ny: usize) -> Result<Mesh> {
    build_rectangle(
        [0.0, 0.0],
        [CHANNEL_LENGTH, CHANNEL_HEIGHT],
        nx,
        ny,
        SideTags::channel(),
    )
}

/// Membrane boundary data with zero initial fields for a channel of the given
/// height whose bottom wall sits at `y0`.
pub fn channel_data(params: &ModelParams, peak: f64, height: f64, y0: f64) -> BoundaryData {
    BoundaryData::membrane(inlet_profile(params, peak, height, y0), params.a0)
}

/// Channel problem on any mesh with inlet, walls and outlet; the inflow is
/// scaled to the mesh's vertical extent.
pub fn channel_problem(mesh: Mesh, params: ModelParams, peak: f64, config: SolverConfig) -> Result<Problem> {
    let (y0, height) = vertical_extent(&mesh);
    let data = channel_data(&params, peak, height, y0);
    let ctx = AssemblyContext::from_mesh(mesh, params)?;
    Problem::new(ctx, data, Sources::none(), config)
}

fn vertical_extent(mesh: &Mesh) -> (f64, f64) {
    let (lo, hi) = mesh
        .vertices()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v[1]), hi.max(v[1])));
    (lo, hi - lo)
}

/// Concentration near the membranes against the bulk.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Polarization {
    pub t: f64,
    /// Extremes over triangles with an edge on a wall.
    pub wall_max: f64,
    pub wall_min: f64,
    pub wall_mean: f64,
    /// Area-weighted mean over all other triangles.
    pub interior_mean: f64,
}

impl Polarization {
    /// `true` when the wall-adjacent maximum exceeds the interior mean.
    pub fn polarized(&self) -> bool {
        self.wall_max > self.interior_mean
    }
}

/// Wall-adjacent versus interior concentration of a state.
pub fn polarization(ctx: &AssemblyContext, state: &DiscreteState) -> Polarization {
    let mesh = ctx.mesh();
    let mut at_wall = vec![false; mesh.n_triangles()];
    for e in mesh.edges_with_tag(BoundaryTag::Wall) {
        at_wall[mesh.edge_triangles()[e].0] = true;
    }
    let (mut wmax, mut wmin, mut wsum, mut warea) = (f64::NEG_INFINITY, f64::INFINITY, 0.0, 0.0);
    let (mut isum, mut iarea) = (0.0, 0.0);
    for t in 0..mesh.n_triangles() {
        let a = mesh.area(t);
        let v = state.phi[t];
        if at_wall[t] {
            wmax = wmax.max(v);
            wmin = wmin.min(v);
            wsum += a * v;
            warea += a;
        } else {
            isum += a * v;
            iarea += a;
        }
    }
    Polarization {
        t: state.t,
        wall_max: wmax,
        wall_min: wmin,
        wall_mean: if warea > 0.0 { wsum / warea } else { f64::NAN },
        interior_mean: if iarea > 0.0 { isum / iarea } else { f64::NAN },
    }
}
