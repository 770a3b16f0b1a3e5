use crate::mesh::{BoundaryTag, Mesh, MultiplierPartition};

/// Global numbering of the five discrete fields.
///
/// * pseudostress: two scalar RT0 rows, full index `row * n_edges + edge`;
///   rows on outlet edges are constrained and excluded from the flow unknowns;
/// * velocity: P0, index `2 * triangle + component`;
/// * concentration flux: RT0, index `edge`;
/// * concentration: P0, index `triangle`;
/// * multiplier: one unknown per macro vertex away from the inlet, in macro
///   vertex order.
///
/// Flow unknowns are `[free pseudostress | velocity]`; transport unknowns are
/// `[flux | concentration | multiplier]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofLayout {
    pub n_edges: usize,
    pub n_triangles: usize,
    pub n_macro_vertices: usize,
    pub n_multiplier: usize,
    sigma_free: Vec<Option<usize>>,
    constrained: Vec<usize>,
    n_sigma_free: usize,
}

impl DofLayout {
    pub fn new(mesh: &Mesh, partition: &MultiplierPartition) -> Self {
        let ne = mesh.n_edges();
        let mut constrained = Vec::new();
        for row in 0..2 {
            for e in mesh.edges_with_tag(BoundaryTag::Outlet) {
                constrained.push(row * ne + e);
            }
        }
        constrained.sort_unstable();
        let mut sigma_free = vec![None; 2 * ne];
        let mut next = 0;
        let mut c = constrained.iter().peekable();
        for (i, slot) in sigma_free.iter_mut().enumerate() {
            if c.peek() == Some(&&i) {
                c.next();
            } else {
                *slot = Some(next);
                next += 1;
            }
        }
        DofLayout {
            n_edges: ne,
            n_triangles: mesh.n_triangles(),
            n_macro_vertices: partition.n_macro_vertices(),
            n_multiplier: partition.n_free(),
            sigma_free,
            constrained,
            n_sigma_free: next,
        }
    }

    pub fn n_sigma(&self) -> usize {
        2 * self.n_edges
    }

    pub fn n_sigma_free(&self) -> usize {
        self.n_sigma_free
    }

    pub fn n_velocity(&self) -> usize {
        2 * self.n_triangles
    }

    pub fn n_flux(&self) -> usize {
        self.n_edges
    }

    pub fn n_concentration(&self) -> usize {
        self.n_triangles
    }

    pub fn sigma_dof(&self, row: usize, edge: usize) -> usize {
        row * self.n_edges + edge
    }

    pub fn velocity_dof(&self, triangle: usize, component: usize) -> usize {
        2 * triangle + component
    }

    /// Flow-system index of a full pseudostress index, `None` when constrained.
    pub fn sigma_free_index(&self, sigma: usize) -> Option<usize> {
        self.sigma_free[sigma]
    }

    /// Full pseudostress indices pinned by the outlet condition.
    pub fn constrained_sigma(&self) -> &[usize] {
        &self.constrained
    }

    pub fn flow_size(&self) -> usize {
        self.n_sigma_free + self.n_velocity()
    }

    pub fn flow_velocity_offset(&self) -> usize {
        self.n_sigma_free
    }

    pub fn transport_size(&self) -> usize {
        self.n_edges + self.n_triangles + self.n_multiplier
    }

    pub fn transport_concentration_offset(&self) -> usize {
        self.n_edges
    }

    pub fn transport_multiplier_offset(&self) -> usize {
        self.n_edges + self.n_triangles
    }
}
