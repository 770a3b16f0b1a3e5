//! Lowest-order Raviart-Thomas functions on one triangle: normal traces,
//! divergence and the canonical interpolant of an affine field.
//!
//! `cargo run --example rt0_basis`

use bf_transport_fem::fem::{rt0_basis, rt0_interpolate, EdgeQuadratureRule};
use bf_transport_fem::forms::{AssemblyContext, ModelParams};
use bf_transport_fem::mesh::{build_unit_square, SideTags};
use bf_transport_fem::post::{div_rt0, eval_rt0};

fn main() -> bf_transport_fem::Result<()> {
    let tri = [[0.0, 0.0], [2.0, 0.0], [0.5, 1.0]];
    for i in 0..3 {
        let f = rt0_basis(&tri, i, 1.0)?;
        let (p, q) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
        let mid = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
        // outward normal of edge p-q for a counterclockwise triangle
        let len = (q[0] - p[0]).hypot(q[1] - p[1]);
        let n = [(q[1] - p[1]) / len, -(q[0] - p[0]) / len];
        let v = f.value(mid);
        println!(
            "edge {i}: normal trace {:.3}, divergence {:.4}",
            v[0] * n[0] + v[1] * n[1],
            f.divergence()
        );
    }

    let mesh = build_unit_square(4, SideTags::channel())?;
    let ctx = AssemblyContext::from_mesh(mesh, ModelParams::membrane(1.0, 1.0, 1.0, 3.0, 1.0, 1.0, 0.0, 0.1, 1.0)?)?;
    let field = |x: [f64; 2]| [1.0 + 2.0 * x[0] - x[1], 3.0 * x[1]];
    let coeffs = rt0_interpolate(ctx.mesh(), &EdgeQuadratureRule::gauss(2), field);
    println!("\ninterpolant of (1 + 2x - y, 3y), exact divergence 5:");
    for t in [0, 7, 19] {
        let c = ctx.mesh().centroid(t);
        println!(
            "  triangle {t:2}: div {:.12}, value at centroid {:?} vs {:?}",
            div_rt0(&ctx, &coeffs, t),
            eval_rt0(&ctx, &coeffs, t, c),
            field(c)
        );
    }
    Ok(())
}
