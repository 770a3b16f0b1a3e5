//! One backward-Euler step of the manufactured problem, showing the
//! fixed-point history and the coupled residual.
//!
//! `cargo run --release --example picard_step -- [n]`

use bf_transport_fem::scenario::{exact_solution, manufactured_problem};
use bf_transport_fem::post::error_norms;
use bf_transport_fem::solver::SolverConfig;

fn main() -> bf_transport_fem::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(16);
    let dt = 1.0 / n as f64;
    let mut problem = manufactured_problem(n, dt, SolverConfig::default())?;
    let prev = problem.project_initial()?;
    let (state, report) = problem.picard_solve(&prev, dt)?;
    for (k, u) in report.update_norms.iter().enumerate() {
        println!("sweep {:2}: update {u:.3e}", k + 1);
    }
    println!(
        "converged: {}, coupled residual {:.3e}, linear residuals {:?}",
        report.converged,
        report.final_residual,
        problem.last_linear_residuals()
    );
    let errors = error_norms(problem.context(), &state, &exact_solution(problem.context().params()), dt)?;
    println!("errors after one step: {errors:?}");
    Ok(())
}
