//! Assembles every block of the flow and transport systems on a small mesh
//! and prints sizes, fill and a few structural properties.
//!
//! `cargo run --example assembly`

use bf_transport_fem::forms::{AssemblyContext, BoundaryData, CsrMatrix};
use bf_transport_fem::mesh::{build_unit_square, SideTags};
use bf_transport_fem::scenario::{inlet_profile, manufactured_params};

fn describe(name: &str, m: &CsrMatrix) {
    let d = m.to_dense();
    let n = m.nrows();
    let sym = n == m.ncols() && (0..n).all(|i| (0..n).all(|j| d[i][j] == d[j][i]));
    println!(
        "{name:>10}: {:4} x {:4}, nnz {:5}, max |a| {:.3e}{}",
        m.nrows(),
        m.ncols(),
        m.nnz(),
        m.max_abs(),
        if sym { ", symmetric" } else { "" }
    );
}

fn main() -> bf_transport_fem::Result<()> {
    let params = manufactured_params(0.1)?;
    let ctx = AssemblyContext::from_mesh(build_unit_square(4, SideTags::channel())?, params)?;
    let l = ctx.layout();
    println!(
        "dofs: sigma {}, u {}, rho {}, phi {}, lambda {}\n",
        l.n_sigma(),
        l.n_velocity(),
        l.n_flux(),
        l.n_concentration(),
        l.n_multiplier
    );
    let z: Vec<f64> = (0..l.n_velocity()).map(|i| (i as f64 * 0.37).sin()).collect();
    let chi: Vec<f64> = (0..l.n_multiplier).map(|i| 0.1 * i as f64).collect();
    describe("A^F", &ctx.assemble_af());
    describe("B^F", &ctx.assemble_bf());
    describe("O1^F(z)", &ctx.assemble_o1f(&z));
    describe("O2^F(z)", &ctx.assemble_o2f(&z));
    describe("A^C", &ctx.assemble_ac());
    let (bv, bb) = ctx.assemble_bc();
    describe("B^C vol", &bv);
    describe("B^C bnd", &bb);
    describe("C^C", &ctx.assemble_cc());
    describe("O1^C(z)", &ctx.assemble_o1c(&z));
    describe("O2^C(chi)", &ctx.assemble_o2c(&chi));
    let (mu, mc) = ctx.assemble_mass();
    describe("M_u", &mu);
    describe("M_phi", &mc);

    let data = BoundaryData::membrane(inlet_profile(&params, 1.0, 1.0, 0.0), params.a0);
    let ff = ctx.assemble_ff(&data, Some(&chi), 0.0)?;
    let fc = ctx.assemble_fc();
    println!("\n|F^F|_inf = {:.4e}, |F^C|_inf = {:.4e}", inf(&ff), inf(&fc));
    Ok(())
}

fn inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
