use super::data::{BoundaryData, Sources};
use super::params::ModelParams;
use super::sparse::{CsrMatrix, TripletBuilder};
use crate::error::{Error, Result};
use crate::fem::{multiplier_on_edge, DofLayout, EdgeQuadratureRule, QuadratureRule, Rt0Function, TriangleGeometry};
use crate::mesh::{build_multiplier_partition, BoundaryTag, Mesh, MultiplierPartition};
use crate::Point;

/// Everything the element loops need: mesh, multiplier partition, numbering,
/// parameters and quadrature rules.
///
/// Polynomial forms use `rule` and `edge_rule`; transcendental data (sources,
/// boundary datum, initial fields) use the higher-order `data_rule` and
/// `data_edge_rule`.
#[derive(Debug, Clone)]
pub struct AssemblyContext {
    mesh: Mesh,
    partition: MultiplierPartition,
    layout: DofLayout,
    params: ModelParams,
    rule: QuadratureRule,
    edge_rule: EdgeQuadratureRule,
    data_rule: QuadratureRule,
    data_edge_rule: EdgeQuadratureRule,
    geometry: Vec<TriangleGeometry>,
    bases: Vec<[Rt0Function; 3]>,
}

impl AssemblyContext {
    pub fn new(mesh: Mesh, partition: MultiplierPartition, params: ModelParams) -> Result<Self> {
        params.validate()?;
        let layout = DofLayout::new(&mesh, &partition);
        let mut geometry = Vec::with_capacity(mesh.n_triangles());
        let mut bases = Vec::with_capacity(mesh.n_triangles());
        for t in 0..mesh.n_triangles() {
            let g = TriangleGeometry::new(&mesh, t);
            let mut b = [g.basis(0), g.basis(1), g.basis(2)].into_iter();
            let mut f = || b.next().unwrap().map_err(|_| Error::Geometry { triangle: t, area: g.area });
            bases.push([f()?, f()?, f()?]);
            geometry.push(g);
        }
        Ok(AssemblyContext {
            mesh,
            partition,
            layout,
            params,
            rule: QuadratureRule::default(),
            edge_rule: EdgeQuadratureRule::default(),
            data_rule: QuadratureRule::collapsed(7),
            data_edge_rule: EdgeQuadratureRule::gauss(3),
            geometry,
            bases,
        })
    }

    /// Builds the multiplier partition from the mesh tags.
    pub fn from_mesh(mesh: Mesh, params: ModelParams) -> Result<Self> {
        let partition = build_multiplier_partition(&mesh)?;
        Self::new(mesh, partition, params)
    }

    pub fn with_rules(mut self, rule: QuadratureRule, edge_rule: EdgeQuadratureRule) -> Self {
        self.rule = rule;
        self.edge_rule = edge_rule;
        self
    }

    pub fn with_data_rules(mut self, rule: QuadratureRule, edge_rule: EdgeQuadratureRule) -> Self {
        self.data_rule = rule;
        self.data_edge_rule = edge_rule;
        self
    }

    pub fn with_params(mut self, params: ModelParams) -> Result<Self> {
        params.validate()?;
        self.params = params;
        Ok(self)
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn partition(&self) -> &MultiplierPartition {
        &self.partition
    }

    pub fn layout(&self) -> &DofLayout {
        &self.layout
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn edge_rule(&self) -> &EdgeQuadratureRule {
        &self.edge_rule
    }

    pub fn data_rule(&self) -> &QuadratureRule {
        &self.data_rule
    }

    pub fn data_edge_rule(&self) -> &EdgeQuadratureRule {
        &self.data_edge_rule
    }

    pub fn geometry(&self, t: usize) -> &TriangleGeometry {
        &self.geometry[t]
    }

    pub fn bases(&self, t: usize) -> &[Rt0Function; 3] {
        &self.bases[t]
    }

    fn n_sigma(&self) -> usize {
        self.layout.n_sigma()
    }

    /// `(1/nu) (dev zeta, dev tau)` over full pseudostress indices.
    pub fn assemble_af(&self) -> CsrMatrix {
        let n = self.n_sigma();
        let mut b = TripletBuilder::with_capacity(n, n, 36 * self.geometry.len());
        let inv_nu = 1.0 / self.params.nu;
        for (g, psi) in self.geometry.iter().zip(&self.bases) {
            let mut local = [[[[0.0; 2]; 2]; 3]; 3];
            for (x, w) in self.rule.mapped(&g.vertices, g.area) {
                let v = psi.map(|f| f.value(x));
                for i in 0..3 {
                    for j in 0..3 {
                        let dot = v[i][0] * v[j][0] + v[i][1] * v[j][1];
                        for r in 0..2 {
                            for s in 0..2 {
                                let delta = if r == s { dot } else { 0.0 };
                                local[i][j][r][s] += w * (delta - 0.5 * v[i][r] * v[j][s]);
                            }
                        }
                    }
                }
            }
            for i in 0..3 {
                for j in 0..3 {
                    for r in 0..2 {
                        for s in 0..2 {
                            b.push(
                                self.layout.sigma_dof(r, g.edges[i]),
                                self.layout.sigma_dof(s, g.edges[j]),
                                inv_nu * local[i][j][r][s],
                            );
                        }
                    }
                }
            }
        }
        b.build()
    }

    /// `(v, div tau)`: rows are velocity dofs, columns full pseudostress.
    pub fn assemble_bf(&self) -> CsrMatrix {
        let mut b = TripletBuilder::with_capacity(self.layout.n_velocity(), self.n_sigma(), 6 * self.geometry.len());
        for (t, (g, psi)) in self.geometry.iter().zip(&self.bases).enumerate() {
            for i in 0..3 {
                let d = psi[i].divergence() * g.area;
                for r in 0..2 {
                    b.push(self.layout.velocity_dof(t, r), self.layout.sigma_dof(r, g.edges[i]), d);
                }
            }
        }
        b.build()
    }

    /// `(1/nu) (dev(tau) z, v)` with `z` frozen elementwise.
    pub fn assemble_o1f(&self, z: &[f64]) -> CsrMatrix {
        assert_eq!(z.len(), self.layout.n_velocity());
        let mut b = TripletBuilder::with_capacity(self.layout.n_velocity(), self.n_sigma(), 12 * self.geometry.len());
        let inv_nu = 1.0 / self.params.nu;
        for (t, (g, psi)) in self.geometry.iter().zip(&self.bases).enumerate() {
            let zt = [z[2 * t], z[2 * t + 1]];
            let mut local = [[[0.0; 2]; 2]; 3];
            for (x, w) in self.rule.mapped(&g.vertices, g.area) {
                for i in 0..3 {
                    let v = psi[i].value(x);
                    let vz = v[0] * zt[0] + v[1] * zt[1];
                    for r in 0..2 {
                        for k in 0..2 {
                            let delta = if k == r { vz } else { 0.0 };
                            local[i][r][k] += w * (delta - 0.5 * v[r] * zt[k]);
                        }
                    }
                }
            }
            for i in 0..3 {
                for r in 0..2 {
                    for k in 0..2 {
                        b.push(
                            self.layout.velocity_dof(t, k),
                            self.layout.sigma_dof(r, g.edges[i]),
                            inv_nu * local[i][r][k],
                        );
                    }
                }
            }
        }
        b.build()
    }

    /// `F (|z|^(p-2) w, v)`, diagonal over velocity dofs.
    pub fn assemble_o2f(&self, z: &[f64]) -> CsrMatrix {
        assert_eq!(z.len(), self.layout.n_velocity());
        let n = self.layout.n_velocity();
        let mut b = TripletBuilder::with_capacity(n, n, n);
        let p = self.params.power;
        for (t, g) in self.geometry.iter().enumerate() {
            let mag = z[2 * t].hypot(z[2 * t + 1]);
            let val = self.params.forch * mag.powf(p - 2.0) * g.area;
            for k in 0..2 {
                let d = self.layout.velocity_dof(t, k);
                b.push(d, d, val);
            }
        }
        b.build()
    }

    /// `(1/kappa) (xi, eta)` over flux dofs.
    pub fn assemble_ac(&self) -> CsrMatrix {
        let n = self.layout.n_flux();
        let mut b = TripletBuilder::with_capacity(n, n, 9 * self.geometry.len());
        let inv_kappa = 1.0 / self.params.kappa;
        for (g, psi) in self.geometry.iter().zip(&self.bases) {
            let mut local = [[0.0; 3]; 3];
            for (x, w) in self.rule.mapped(&g.vertices, g.area) {
                let v = psi.map(|f| f.value(x));
                for i in 0..3 {
                    for j in 0..3 {
                        local[i][j] += w * (v[i][0] * v[j][0] + v[i][1] * v[j][1]);
                    }
                }
            }
            for i in 0..3 {
                for j in 0..3 {
                    b.push(g.edges[i], g.edges[j], inv_kappa * local[i][j]);
                }
            }
        }
        b.build()
    }

    /// `(1/kappa) (eta . z, psi)`: rows concentration dofs, columns flux dofs.
    pub fn assemble_o1c(&self, z: &[f64]) -> CsrMatrix {
        assert_eq!(z.len(), self.layout.n_velocity());
        let mut b = TripletBuilder::with_capacity(self.layout.n_concentration(), self.layout.n_flux(), 3 * self.geometry.len());
        let inv_kappa = 1.0 / self.params.kappa;
        for (t, (g, psi)) in self.geometry.iter().zip(&self.bases).enumerate() {
            let zt = [z[2 * t], z[2 * t + 1]];
            let mut local = [0.0; 3];
            for (x, w) in self.rule.mapped(&g.vertices, g.area) {
                for i in 0..3 {
                    let v = psi[i].value(x);
                    local[i] += w * (v[0] * zt[0] + v[1] * zt[1]);
                }
            }
            for i in 0..3 {
                b.push(t, g.edges[i], inv_kappa * local[i]);
            }
        }
        b.build()
    }

    /// Volume part `(psi, div eta)` (rows concentration) and boundary part
    /// `<eta . n, xi>` on the non-inlet boundary (rows multiplier).
    pub fn assemble_bc(&self) -> (CsrMatrix, CsrMatrix) {
        let nf = self.layout.n_flux();
        let mut vol = TripletBuilder::with_capacity(self.layout.n_concentration(), nf, 3 * self.geometry.len());
        for (t, (g, psi)) in self.geometry.iter().zip(&self.bases).enumerate() {
            for i in 0..3 {
                vol.push(t, g.edges[i], psi[i].divergence() * g.area);
            }
        }
        let mut bd = TripletBuilder::new(self.layout.n_multiplier, nf);
        for &e in self.partition.chain_edges() {
            let (_, sign) = self.mesh.boundary_normal(e);
            let mut acc = [0.0; 2];
            let mut dofs = [None; 2];
            for (_, s, w) in self.edge_points(e, &self.edge_rule) {
                let hats = self.partition.hats_at(e, s).expect("chain edge");
                for k in 0..2 {
                    dofs[k] = hats[k].0;
                    acc[k] += w * hats[k].1;
                }
            }
            for k in 0..2 {
                if let Some(d) = dofs[k] {
                    bd.push(d, e, sign * acc[k]);
                }
            }
        }
        (vol.build(), bd.build())
    }

    /// `a2 int_wall chi xi`.
    pub fn assemble_cc(&self) -> CsrMatrix {
        self.wall_mass(|_, _| self.params.a2)
    }

    /// `a1 int_wall chi lambda xi` with `chi` frozen.
    pub fn assemble_o2c(&self, chi: &[f64]) -> CsrMatrix {
        assert_eq!(chi.len(), self.layout.n_multiplier);
        let a1 = self.params.a1;
        self.wall_mass(|e, s| a1 * multiplier_on_edge(&self.partition, chi, e, s).unwrap())
    }

    fn wall_mass(&self, weight: impl Fn(usize, f64) -> f64) -> CsrMatrix {
        let n = self.layout.n_multiplier;
        let mut b = TripletBuilder::new(n, n);
        for e in self.wall_chain_edges() {
            let mut local = [[0.0; 2]; 2];
            let mut dofs = [None; 2];
            for (_, s, w) in self.edge_points(e, &self.edge_rule) {
                let hats = self.partition.hats_at(e, s).expect("chain edge");
                let c = weight(e, s);
                for i in 0..2 {
                    dofs[i] = hats[i].0;
                    for j in 0..2 {
                        local[i][j] += w * c * hats[i].1 * hats[j].1;
                    }
                }
            }
            for i in 0..2 {
                for j in 0..2 {
                    if let (Some(di), Some(dj)) = (dofs[i], dofs[j]) {
                        b.push(di, dj, local[i][j]);
                    }
                }
            }
        }
        b.build()
    }

    /// `<tau n, g + a1 chi n>` on inlet and wall edges, over full pseudostress
    /// indices. `chi = None` drops the multiplier term.
    pub fn assemble_ff(&self, data: &BoundaryData, chi: Option<&[f64]>, t: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n_sigma()];
        let a1 = self.params.a1;
        for &(e, tag) in self.mesh.boundary_edges() {
            if tag == BoundaryTag::Outlet {
                continue;
            }
            let (n, sign) = self.mesh.boundary_normal(e);
            let mut acc = [0.0; 2];
            for (x, s, w) in self.edge_points(e, &self.data_edge_rule) {
                let mut v = (data.g)(x, t, tag, n);
                if !(v[0].is_finite() && v[1].is_finite()) {
                    return Err(Error::Data {
                        what: "the velocity boundary datum",
                        point: x,
                        time: t,
                    });
                }
                if let (BoundaryTag::Wall, Some(chi)) = (tag, chi) {
                    let c = multiplier_on_edge(&self.partition, chi, e, s).expect("wall edge on chain");
                    v[0] += a1 * c * n[0];
                    v[1] += a1 * c * n[1];
                }
                acc[0] += w * v[0];
                acc[1] += w * v[1];
            }
            for r in 0..2 {
                out[self.layout.sigma_dof(r, e)] += sign * acc[r];
            }
        }
        Ok(out)
    }

    /// `-atilde0 int_wall xi`.
    pub fn assemble_fc(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.layout.n_multiplier];
        let a = self.params.atilde0;
        for e in self.wall_chain_edges() {
            for (_, s, w) in self.edge_points(e, &self.edge_rule) {
                for (d, h) in self.partition.hats_at(e, s).expect("chain edge") {
                    if let Some(d) = d {
                        out[d] -= a * w * h;
                    }
                }
            }
        }
        out
    }

    /// Diagonal P0 mass matrices `(velocity, concentration)`.
    pub fn assemble_mass(&self) -> (CsrMatrix, CsrMatrix) {
        let nv = self.layout.n_velocity();
        let nc = self.layout.n_concentration();
        let mut mu = TripletBuilder::with_capacity(nv, nv, nv);
        let mut mc = TripletBuilder::with_capacity(nc, nc, nc);
        for (t, g) in self.geometry.iter().enumerate() {
            for k in 0..2 {
                let d = self.layout.velocity_dof(t, k);
                mu.push(d, d, g.area);
            }
            mc.push(t, t, g.area);
        }
        (mu.build(), mc.build())
    }

    /// P0 loads of the momentum and transport sources at time `t`.
    pub fn assemble_sources(&self, sources: &Sources, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut fu = vec![0.0; self.layout.n_velocity()];
        let mut fc = vec![0.0; self.layout.n_concentration()];
        if let Some(f) = &sources.momentum {
            for (tri, g) in self.geometry.iter().enumerate() {
                for (x, w) in self.data_rule.mapped(&g.vertices, g.area) {
                    let v = f(x, t);
                    check_finite(&v, "the momentum source", x, t)?;
                    fu[2 * tri] += w * v[0];
                    fu[2 * tri + 1] += w * v[1];
                }
            }
        }
        if let Some(f) = &sources.transport {
            for (tri, g) in self.geometry.iter().enumerate() {
                for (x, w) in self.data_rule.mapped(&g.vertices, g.area) {
                    let v = f(x, t);
                    check_finite(&[v], "the transport source", x, t)?;
                    fc[tri] += w * v;
                }
            }
        }
        Ok((fu, fc))
    }

    /// Multiplier load `int s xi` over the non-inlet boundary.
    pub fn assemble_multiplier_source(&self, sources: &Sources, t: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.layout.n_multiplier];
        let Some(f) = &sources.multiplier else {
            return Ok(out);
        };
        for &e in self.partition.chain_edges() {
            let tag = self.mesh.edge_tag(e).expect("boundary edge");
            let (n, _) = self.mesh.boundary_normal(e);
            for (x, s, w) in self.edge_points(e, &self.data_edge_rule) {
                let v = f(x, t, tag, n);
                check_finite(&[v], "the multiplier source", x, t)?;
                for (d, h) in self.partition.hats_at(e, s).expect("chain edge") {
                    if let Some(d) = d {
                        out[d] += w * v * h;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Values of the constrained outlet pseudostress dofs, in the order of
    /// [`DofLayout::constrained_sigma`].
    pub fn outlet_values(&self, data: &BoundaryData, t: f64) -> Result<Vec<f64>> {
        let ne = self.layout.n_edges;
        let Some(traction) = &data.outlet_traction else {
            return Ok(vec![0.0; self.layout.constrained_sigma().len()]);
        };
        let mut out = Vec::with_capacity(self.layout.constrained_sigma().len());
        for &c in self.layout.constrained_sigma() {
            let (r, e) = (c / ne, c % ne);
            let (n, sign) = self.mesh.boundary_normal(e);
            let mut acc = 0.0;
            for (x, _, w) in self.edge_points(e, &self.data_edge_rule) {
                let v = traction(x, t, BoundaryTag::Outlet, n);
                check_finite(&v, "the outlet traction", x, t)?;
                acc += w * v[r];
            }
            out.push(sign * acc / self.mesh.edge_length(e));
        }
        Ok(out)
    }

    /// P0 projection of a vector field (elementwise means).
    pub fn project_vector(&self, f: &dyn Fn(Point) -> Point, what: &'static str) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.layout.n_velocity()];
        for (t, g) in self.geometry.iter().enumerate() {
            for (x, w) in self.data_rule.mapped(&g.vertices, g.area) {
                let v = f(x);
                check_finite(&v, what, x, 0.0)?;
                out[2 * t] += w * v[0] / g.area;
                out[2 * t + 1] += w * v[1] / g.area;
            }
        }
        Ok(out)
    }

    /// P0 projection of a scalar field.
    pub fn project_scalar(&self, f: &dyn Fn(Point) -> f64, what: &'static str) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.layout.n_concentration()];
        for (t, g) in self.geometry.iter().enumerate() {
            for (x, w) in self.data_rule.mapped(&g.vertices, g.area) {
                let v = f(x);
                check_finite(&[v], what, x, 0.0)?;
                out[t] += w * v / g.area;
            }
        }
        Ok(out)
    }

    fn wall_chain_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.partition
            .chain_edges()
            .iter()
            .copied()
            .filter(|&e| self.mesh.edge_tag(e) == Some(BoundaryTag::Wall))
    }

    /// Quadrature points of a boundary edge as `(x, s, weight)`. On chain
    /// edges `s` runs in the chain walking direction so it can be fed to
    /// [`MultiplierPartition::hats_at`].
    pub fn edge_points<'a>(
        &'a self,
        e: usize,
        rule: &'a EdgeQuadratureRule,
    ) -> impl Iterator<Item = (Point, f64, f64)> + 'a {
        let [a, b] = match self.partition.fine_edge(e) {
            Some(f) => [f.start, f.end],
            None => self.mesh.edges()[e],
        };
        rule.mapped(self.mesh.vertices()[a], self.mesh.vertices()[b])
    }
}

fn check_finite(v: &[f64], what: &'static str, point: Point, time: f64) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Data { what, point, time })
    }
}
