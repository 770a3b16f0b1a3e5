use std::fmt::Write as _;
use std::path::Path;

use super::fields::pressure_at_centroids;
use crate::error::{Error, Result};
use crate::fem::multiplier_on_edge;
use crate::forms::AssemblyContext;
use crate::solver::DiscreteState;

/// Legacy ASCII VTK unstructured grid with per-cell velocity, pressure (at
/// centroids) and concentration.
pub fn format_vtk(ctx: &AssemblyContext, state: &DiscreteState) -> String {
    let mesh = ctx.mesh();
    let nt = mesh.n_triangles();
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\n");
    writeln!(s, "bf-transport-fem t={}", state.t).unwrap();
    s.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    writeln!(s, "POINTS {} double", mesh.n_vertices()).unwrap();
    for v in mesh.vertices() {
        writeln!(s, "{} {} 0", v[0], v[1]).unwrap();
    }
    writeln!(s, "CELLS {nt} {}", 4 * nt).unwrap();
    for t in mesh.triangles() {
        writeln!(s, "3 {} {} {}", t[0], t[1], t[2]).unwrap();
    }
    writeln!(s, "CELL_TYPES {nt}").unwrap();
    for _ in 0..nt {
        s.push_str("5\n");
    }
    writeln!(s, "CELL_DATA {nt}").unwrap();
    let p = pressure_at_centroids(ctx, &state.sigma);
    let ux: Vec<f64> = (0..nt).map(|t| state.u[2 * t]).collect();
    let uy: Vec<f64> = (0..nt).map(|t| state.u[2 * t + 1]).collect();
    for (name, data) in [("velocity_x", &ux), ("velocity_y", &uy), ("pressure", &p), ("concentration", &state.phi)] {
        writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default").unwrap();
        for v in data.iter() {
            writeln!(s, "{v}").unwrap();
        }
    }
    s
}

pub fn export_vtk(ctx: &AssemblyContext, state: &DiscreteState, path: &Path) -> Result<()> {
    std::fs::write(path, format_vtk(ctx, state)).map_err(|e| Error::io(path, e))
}

/// Legacy ASCII VTK polydata sampling the multiplier at the vertices of the
/// non-inlet boundary, one polyline per fine edge.
pub fn format_multiplier_vtk(ctx: &AssemblyContext, state: &DiscreteState) -> String {
    let mesh = ctx.mesh();
    let part = ctx.partition();
    let edges = part.chain_edges();
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\n");
    writeln!(s, "bf-transport-fem multiplier t={}", state.t).unwrap();
    s.push_str("ASCII\nDATASET POLYDATA\n");
    writeln!(s, "POINTS {} double", 2 * edges.len()).unwrap();
    let mut vals = Vec::with_capacity(2 * edges.len());
    for &e in edges {
        let f = part.fine_edge(e).expect("chain edge");
        for (v, sp) in [(f.start, 0.0), (f.end, 1.0)] {
            let x = mesh.vertices()[v];
            writeln!(s, "{} {} 0", x[0], x[1]).unwrap();
            vals.push(multiplier_on_edge(part, &state.lambda, e, sp).unwrap());
        }
    }
    writeln!(s, "LINES {} {}", edges.len(), 3 * edges.len()).unwrap();
    for k in 0..edges.len() {
        writeln!(s, "2 {} {}", 2 * k, 2 * k + 1).unwrap();
    }
    writeln!(s, "POINT_DATA {}", vals.len()).unwrap();
    s.push_str("SCALARS multiplier double 1\nLOOKUP_TABLE default\n");
    for v in vals {
        writeln!(s, "{v}").unwrap();
    }
    s
}

pub fn export_multiplier_vtk(ctx: &AssemblyContext, state: &DiscreteState, path: &Path) -> Result<()> {
    std::fs::write(path, format_multiplier_vtk(ctx, state)).map_err(|e| Error::io(path, e))
}

pub fn export_csv(table: &super::RateTable, path: &Path) -> Result<()> {
    table.write_csv(path)
}
