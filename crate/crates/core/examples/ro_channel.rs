//! Reverse-osmosis channel: parabolic inflow between two membranes. Prints
//! wall and bulk concentration after every step.
//!
//! `cargo run --release --example ro_channel -- [nx ny steps]`

use bf_transport_fem::scenario::{channel_mesh, channel_problem, polarization, ro_params, INLET_PEAK};
use bf_transport_fem::solver::SolverConfig;

fn main() -> bf_transport_fem::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (nx, ny, steps) = match args[..] {
        [nx, ny, steps] => (nx, ny, steps),
        _ => (48, 8, 20),
    };
    let dt = 1e-2;
    let params = ro_params(dt, steps as f64 * dt)?;
    let mut problem = channel_problem(channel_mesh(nx, ny)?, params, INLET_PEAK, SolverConfig::default())?;
    let ctx = problem.context().clone();
    println!("step      t  sweeps     wall max    wall mean  interior mean");
    let state = problem.march(|k, s, r| {
        let p = polarization(&ctx, s);
        println!(
            "{k:4} {:6.3} {:7} {:12.4e} {:12.4e} {:14.4e}",
            s.t, r.iterations, p.wall_max, p.wall_mean, p.interior_mean
        );
        Ok(())
    })?;
    let umax = state.u.chunks(2).map(|v| v[0].hypot(v[1])).fold(0.0, f64::max);
    println!("max cell speed {umax:.4}");
    Ok(())
}
