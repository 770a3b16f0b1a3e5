//! Runs a few channel steps and writes the fields and the multiplier as
//! legacy VTK files for ParaView.
//!
//! `cargo run --release --example vtk_export -- [dir]`

use std::path::PathBuf;

use bf_transport_fem::post::{export_multiplier_vtk, export_vtk};
use bf_transport_fem::scenario::{channel_mesh, channel_problem, ro_params, INLET_PEAK};
use bf_transport_fem::solver::SolverConfig;

fn main() -> bf_transport_fem::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("bf-vtk"));
    std::fs::create_dir_all(&dir).expect("create output directory");
    let params = ro_params(1e-2, 5e-2)?;
    let mut problem = channel_problem(channel_mesh(24, 4)?, params, INLET_PEAK, SolverConfig::default())?;
    let ctx = problem.context().clone();
    problem.march(|k, s, _| {
        let fields = dir.join(format!("channel_{k:03}.vtk"));
        export_vtk(&ctx, s, &fields)?;
        export_multiplier_vtk(&ctx, s, &dir.join(format!("channel_{k:03}_multiplier.vtk")))?;
        println!("wrote {}", fields.display());
        Ok(())
    })?;
    Ok(())
}
