//! Spatial convergence on the manufactured solution with `dt = h`.
//!
//! `cargo run --release --example convergence_study -- 8 16 32`

use bf_transport_fem::post::{error_norms, RateTable};
use bf_transport_fem::scenario::{exact_solution, manufactured_problem};
use bf_transport_fem::solver::SolverConfig;

fn main() -> bf_transport_fem::Result<()> {
    let mut sizes: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if sizes.is_empty() {
        sizes = vec![4, 8, 16];
    }
    let mut table = RateTable::default();
    for n in sizes {
        let h = 1.0 / n as f64;
        let mut problem = manufactured_problem(n, h, SolverConfig::default())?;
        let mut sweeps = 0;
        let state = problem.march(|_, _, r| {
            sweeps = sweeps.max(r.iterations);
            Ok(())
        })?;
        let exact = exact_solution(problem.context().params());
        let report = error_norms(problem.context(), &state, &exact, state.t)?;
        eprintln!("n = {n}: at most {sweeps} sweeps per step");
        table.push(h, report.errors())?;
    }
    print!("{}", table.to_text());
    println!();
    print!("{}", table.to_csv());
    Ok(())
}
