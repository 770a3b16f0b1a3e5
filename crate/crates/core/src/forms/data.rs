use std::fmt;
use std::sync::Arc;

use crate::mesh::{BoundaryTag, Mesh};
use crate::Point;

/// Time-dependent vector field `(x, t) -> v`.
pub type VectorField = Arc<dyn Fn(Point, f64) -> Point + Send + Sync>;
/// Time-dependent scalar field `(x, t) -> s`.
pub type ScalarField = Arc<dyn Fn(Point, f64) -> f64 + Send + Sync>;
/// Boundary vector datum `(x, t, tag, outward normal) -> v`.
pub type BoundaryVectorField = Arc<dyn Fn(Point, f64, BoundaryTag, Point) -> Point + Send + Sync>;
/// Boundary scalar datum `(x, t, tag, outward normal) -> s`.
pub type BoundaryScalarField = Arc<dyn Fn(Point, f64, BoundaryTag, Point) -> f64 + Send + Sync>;

/// Velocity boundary datum and initial fields.
#[derive(Clone)]
pub struct BoundaryData {
    /// Velocity datum on inlet and wall edges. The multiplier contribution
    /// `a1 lambda n` on the wall is added by the assembly.
    pub g: BoundaryVectorField,
    /// Prescribed pseudostress traction `sigma n` on outlet edges; `None`
    /// means the homogeneous outlet condition.
    pub outlet_traction: Option<BoundaryVectorField>,
    pub u0: Arc<dyn Fn(Point) -> Point + Send + Sync>,
    pub phi0: Arc<dyn Fn(Point) -> f64 + Send + Sync>,
}

impl BoundaryData {
    /// Inlet profile `u_in` and wall datum `a0 n`, zero initial fields.
    pub fn membrane(u_in: VectorField, a0: f64) -> Self {
        BoundaryData {
            g: Arc::new(move |x, t, tag, n| match tag {
                BoundaryTag::Inlet => u_in(x, t),
                BoundaryTag::Wall => [a0 * n[0], a0 * n[1]],
                BoundaryTag::Outlet => [0.0, 0.0],
            }),
            outlet_traction: None,
            u0: Arc::new(|_| [0.0, 0.0]),
            phi0: Arc::new(|_| 0.0),
        }
    }

    pub fn zero() -> Self {
        BoundaryData {
            g: Arc::new(|_, _, _, _| [0.0, 0.0]),
            outlet_traction: None,
            u0: Arc::new(|_| [0.0, 0.0]),
            phi0: Arc::new(|_| 0.0),
        }
    }

    /// Compares the inlet and wall values of `g` at every vertex where the
    /// two parts meet. Returns the junctions whose jump exceeds
    /// `tol * max(1, |g|)`, with the jump size.
    pub fn junction_mismatches(&self, mesh: &Mesh, t: f64, tol: f64) -> Vec<(usize, f64)> {
        let mut inlet_normal: Vec<Option<Point>> = vec![None; mesh.n_vertices()];
        let mut wall_normal: Vec<Option<Point>> = vec![None; mesh.n_vertices()];
        for &(e, tag) in mesh.boundary_edges() {
            let slot = match tag {
                BoundaryTag::Inlet => &mut inlet_normal,
                BoundaryTag::Wall => &mut wall_normal,
                BoundaryTag::Outlet => continue,
            };
            let (n, _) = mesh.boundary_normal(e);
            for v in mesh.edges()[e] {
                slot[v].get_or_insert(n);
            }
        }
        let mut out = Vec::new();
        for v in 0..mesh.n_vertices() {
            if let (Some(ni), Some(nw)) = (inlet_normal[v], wall_normal[v]) {
                let x = mesh.vertices()[v];
                let a = (self.g)(x, t, BoundaryTag::Inlet, ni);
                let b = (self.g)(x, t, BoundaryTag::Wall, nw);
                let jump = (a[0] - b[0]).hypot(a[1] - b[1]);
                let scale = 1f64.max(a[0].hypot(a[1])).max(b[0].hypot(b[1]));
                if !(jump <= tol * scale) {
                    out.push((v, jump));
                }
            }
        }
        out
    }
}

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryData")
            .field("outlet_traction", &self.outlet_traction.is_some())
            .finish_non_exhaustive()
    }
}

/// Optional right-hand sides. All are absent for the physical model; the
/// manufactured problem uses them.
#[derive(Clone, Default)]
pub struct Sources {
    pub momentum: Option<VectorField>,
    pub transport: Option<ScalarField>,
    /// Load tested against the multiplier on the non-inlet boundary.
    pub multiplier: Option<BoundaryScalarField>,
}

impl Sources {
    pub fn none() -> Self {
        Self::default()
    }
}

impl fmt::Debug for Sources {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sources")
            .field("momentum", &self.momentum.is_some())
            .field("transport", &self.transport.is_some())
            .field("multiplier", &self.multiplier.is_some())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_unit_square, SideTags};

    #[test]
    fn junction_check_flags_discontinuity() {
        let mesh = build_unit_square(2, SideTags::channel()).unwrap();
        let ok = BoundaryData::zero();
        assert!(ok.junction_mismatches(&mesh, 0.0, 1e-8).is_empty());
        let bad = BoundaryData::membrane(Arc::new(|_, _| [1.0, 0.0]), 0.0);
        let m = bad.junction_mismatches(&mesh, 0.0, 1e-8);
        assert_eq!(m.len(), 2);
        assert!(m.iter().all(|&(_, j)| (j - 1.0).abs() < 1e-14));
    }
}
