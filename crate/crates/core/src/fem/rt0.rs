use super::quadrature::EdgeQuadratureRule;
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::Point;

/// Lowest-order Raviart–Thomas function on one triangle:
/// `x -> coeff * (x - origin)` with `origin` the vertex opposite its edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rt0Function {
    pub coeff: f64,
    pub origin: Point,
}

impl Rt0Function {
    pub fn value(&self, x: Point) -> Point {
        [self.coeff * (x[0] - self.origin[0]), self.coeff * (x[1] - self.origin[1])]
    }

    pub fn divergence(&self) -> f64 {
        2.0 * self.coeff
    }
}

/// Basis function of local edge `local_edge` (opposite vertex `local_edge`)
/// with orientation `sign`.
///
/// Its normal component is `sign` on its own edge (outward normal) and zero on
/// the other two, so the degree of freedom is the mean normal component.
pub fn rt0_basis(vertices: &[Point; 3], local_edge: usize, sign: f64) -> Result<Rt0Function> {
    let [a, b, c] = *vertices;
    let area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
    let h2 = [(a, b), (b, c), (c, a)]
        .iter()
        .map(|(p, q)| (q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2))
        .fold(0.0, f64::max);
    if !(area.abs() > 1e-14 * h2) {
        return Err(Error::Geometry { triangle: 0, area });
    }
    let p = vertices[(local_edge + 1) % 3];
    let q = vertices[(local_edge + 2) % 3];
    let len = (q[0] - p[0]).hypot(q[1] - p[1]);
    Ok(Rt0Function {
        coeff: sign * len / (2.0 * area),
        origin: vertices[local_edge],
    })
}

/// Canonical RT0 interpolant: the mean normal component of `field` on every
/// edge with respect to the global edge normal.
pub fn rt0_interpolate(mesh: &Mesh, rule: &EdgeQuadratureRule, field: impl Fn(Point) -> Point) -> Vec<f64> {
    (0..mesh.n_edges())
        .map(|e| {
            let [a, b] = mesh.edges()[e];
            let n = mesh.edge_normal(e);
            let flux: f64 = rule
                .mapped(mesh.vertices()[a], mesh.vertices()[b])
                .map(|(x, _, w)| {
                    let f = field(x);
                    w * (f[0] * n[0] + f[1] * n[1])
                })
                .sum();
            flux / mesh.edge_length(e)
        })
        .collect()
}
