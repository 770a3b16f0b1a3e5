use super::rt0::{rt0_basis, Rt0Function};
use crate::error::Result;
use crate::mesh::Mesh;
use crate::Point;

/// Per-triangle data needed by assembly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleGeometry {
    pub vertices: [Point; 3],
    pub area: f64,
    /// Global edge index opposite each local vertex.
    pub edges: [usize; 3],
    pub edge_lengths: [f64; 3],
    /// `+1` when the global edge normal is this triangle's outward normal.
    pub signs: [f64; 3],
}

impl TriangleGeometry {
    pub fn new(mesh: &Mesh, t: usize) -> Self {
        let vertices = mesh.triangle_vertices(t);
        let te = mesh.triangle_edges()[t];
        TriangleGeometry {
            vertices,
            area: mesh.area(t),
            edges: [te[0].0, te[1].0, te[2].0],
            edge_lengths: [0, 1, 2].map(|i| mesh.edge_length(te[i].0)),
            signs: [te[0].1, te[1].1, te[2].1],
        }
    }

    pub fn centroid(&self) -> Point {
        let v = &self.vertices;
        [(v[0][0] + v[1][0] + v[2][0]) / 3.0, (v[0][1] + v[1][1] + v[2][1]) / 3.0]
    }

    /// Global RT0 basis function of local edge `i` restricted to this triangle.
    pub fn basis(&self, i: usize) -> Result<Rt0Function> {
        rt0_basis(&self.vertices, i, self.signs[i])
    }

    /// All three basis functions; panics on degenerate triangles, which a
    /// validated [`Mesh`] never contains.
    pub fn bases(&self) -> [Rt0Function; 3] {
        [0, 1, 2].map(|i| self.basis(i).expect("mesh triangles are nondegenerate"))
    }
}
