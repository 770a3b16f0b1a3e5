//! Brute-force dense reference for every assembled form.
//!
//! Shares nothing with the library except the mesh and partition it is handed:
//! basis functions, edge signs, multiplier hats and quadrature are rebuilt
//! from vertex coordinates, and every entry is accumulated one basis pair at a
//! time with a high-order rule.

use std::collections::HashMap;

use bf_transport_fem::forms::ModelParams;
use bf_transport_fem::mesh::{BoundaryTag, Mesh, MultiplierPartition};

type P = [f64; 2];
pub type Dense = Vec<Vec<f64>>;

fn zeros(r: usize, c: usize) -> Dense {
    vec![vec![0.0; c]; r]
}

/// Gauss-Legendre nodes and weights on `[0, 1]` by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre_01(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 + x), 0.5 * w));
    }
    out
}

/// Collapsed (Duffy) rule on a triangle: points and weights summing to the
/// area.
fn triangle_points(v: &[P; 3], n: usize) -> Vec<(P, f64)> {
    let g = gauss_legendre_01(n);
    let jac = ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1])).abs();
    let mut out = Vec::new();
    for &(a, wa) in &g {
        for &(b, wb) in &g {
            let (xi, eta) = (a, (1.0 - a) * b);
            let w = wa * wb * (1.0 - a) * jac;
            let x = [
                v[0][0] + xi * (v[1][0] - v[0][0]) + eta * (v[2][0] - v[0][0]),
                v[0][1] + xi * (v[1][1] - v[0][1]) + eta * (v[2][1] - v[0][1]),
            ];
            out.push((x, w));
        }
    }
    out
}

fn dist(a: P, b: P) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

/// RT0 function of one edge restricted to one triangle.
#[derive(Clone, Copy)]
struct Basis {
    coeff: f64,
    opposite: P,
}

impl Basis {
    fn value(&self, x: P) -> P {
        [self.coeff * (x[0] - self.opposite[0]), self.coeff * (x[1] - self.opposite[1])]
    }

    fn div(&self) -> f64 {
        2.0 * self.coeff
    }
}

type Tensor = [[f64; 2]; 2];

fn dev(t: Tensor) -> Tensor {
    let h = 0.5 * (t[0][0] + t[1][1]);
    [[t[0][0] - h, t[0][1]], [t[1][0], t[1][1] - h]]
}

fn row_tensor(r: usize, v: P) -> Tensor {
    let mut t = [[0.0; 2]; 2];
    t[r] = v;
    t
}

pub struct Oracle<'a> {
    pub mesh: &'a Mesh,
    pub partition: &'a MultiplierPartition,
    pub params: ModelParams,
    pub n_points: usize,
    edge_of: HashMap<[usize; 2], usize>,
}

/// Boundary edge of the non-inlet boundary with its multiplier hats
/// expressed as functions of the point.
struct ChainEdge {
    a: P,
    b: P,
    tag: BoundaryTag,
    /// `(unknown, value at a, value at b)` per macro end.
    hats: Vec<(Option<usize>, f64, f64)>,
}

impl<'a> Oracle<'a> {
    pub fn new(mesh: &'a Mesh, partition: &'a MultiplierPartition, params: ModelParams) -> Self {
        let edge_of = mesh
            .edges()
            .iter()
            .enumerate()
            .map(|(i, &[a, b])| ([a.min(b), a.max(b)], i))
            .collect();
        Oracle {
            mesh,
            partition,
            params,
            n_points: 8,
            edge_of,
        }
    }

    fn ne(&self) -> usize {
        self.mesh.n_edges()
    }

    fn nt(&self) -> usize {
        self.mesh.n_triangles()
    }

    fn nm(&self) -> usize {
        self.partition.n_free()
    }

    fn vert(&self, v: usize) -> P {
        self.mesh.vertices()[v]
    }

    fn area(&self, v: &[P; 3]) -> f64 {
        0.5 * ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1])).abs()
    }

    /// Global normal of the edge `{a, b}`: the lower vertex index comes first
    /// and the tangent is rotated clockwise.
    fn global_normal(&self, a: usize, b: usize) -> P {
        let (p, q) = (self.vert(a.min(b)), self.vert(a.max(b)));
        let l = dist(p, q);
        [(q[1] - p[1]) / l, -(q[0] - p[0]) / l]
    }

    /// `(global edge, basis on t)` for the three edges of triangle `t`.
    fn element(&self, t: usize) -> ([P; 3], Vec<(usize, Basis)>) {
        let tri = self.mesh.triangles()[t];
        let v = tri.map(|i| self.vert(i));
        let area = self.area(&v);
        let mut out = Vec::new();
        for k in 0..3 {
            let (a, b) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
            let e = self.edge_of[&[a.min(b), a.max(b)]];
            let n = self.global_normal(a, b);
            let mid = [0.5 * (self.vert(a)[0] + self.vert(b)[0]), 0.5 * (self.vert(a)[1] + self.vert(b)[1])];
            let outward = (mid[0] - v[k][0]) * n[0] + (mid[1] - v[k][1]) * n[1] > 0.0;
            let s = if outward { 1.0 } else { -1.0 };
            let len = dist(self.vert(a), self.vert(b));
            out.push((
                e,
                Basis {
                    coeff: s * len / (2.0 * area),
                    opposite: v[k],
                },
            ));
        }
        (v, out)
    }

    /// Triangle owning boundary edge `e` and the outward unit normal.
    fn boundary_side(&self, e: usize) -> (usize, P) {
        let [a, b] = self.mesh.edges()[e];
        for (t, tri) in self.mesh.triangles().iter().enumerate() {
            if tri.contains(&a) && tri.contains(&b) {
                let c = tri.iter().copied().find(|&v| v != a && v != b).unwrap();
                let n = self.global_normal(a, b);
                let d = [self.vert(a)[0] - self.vert(c)[0], self.vert(a)[1] - self.vert(c)[1]];
                let s = if d[0] * n[0] + d[1] * n[1] > 0.0 { 1.0 } else { -1.0 };
                return (t, [s * n[0], s * n[1]]);
            }
        }
        unreachable!("edge {e} has no triangle")
    }

    fn sigma_dof(&self, r: usize, e: usize) -> usize {
        r * self.ne() + e
    }

    /// Non-inlet boundary edges with hat values at both endpoints: the hat of
    /// a macro end is 1 there, 1/2 at the macro edge's middle vertex and 0 at
    /// the other end.
    fn chain(&self) -> HashMap<usize, ChainEdge> {
        let p = self.partition;
        let mut out = HashMap::new();
        for (m, pair) in p.macro_edges.iter().enumerate() {
            let ends = p.macro_edge_ends[m];
            let end_vertex = ends.map(|mv| p.macro_vertices[mv]);
            let dofs = ends.map(|mv| p.free_index(mv));
            for &e in pair {
                let [a, b] = self.mesh.edges()[e];
                let value = |v: usize, k: usize| -> f64 {
                    if v == end_vertex[k] {
                        1.0
                    } else if v == end_vertex[1 - k] {
                        0.0
                    } else {
                        0.5
                    }
                };
                out.insert(
                    e,
                    ChainEdge {
                        a: self.vert(a),
                        b: self.vert(b),
                        tag: self.mesh.edge_tag(e).unwrap(),
                        hats: (0..2).map(|k| (dofs[k], value(a, k), value(b, k))).collect(),
                    },
                );
            }
        }
        out
    }

    /// Points `(x, weight, hats)` along a chain edge, hats as `(dof, value)`.
    fn chain_points(&self, c: &ChainEdge) -> Vec<(P, f64, Vec<(Option<usize>, f64)>)> {
        let len = dist(c.a, c.b);
        gauss_legendre_01(self.n_points)
            .into_iter()
            .map(|(s, w)| {
                let x = [c.a[0] + s * (c.b[0] - c.a[0]), c.a[1] + s * (c.b[1] - c.a[1])];
                let hats = c.hats.iter().map(|&(d, va, vb)| (d, (1.0 - s) * va + s * vb)).collect();
                (x, w * len, hats)
            })
            .collect()
    }

    fn chi_at(chi: &[f64], hats: &[(Option<usize>, f64)]) -> f64 {
        hats.iter().map(|&(d, h)| d.map_or(0.0, |d| chi[d] * h)).sum()
    }

    pub fn af(&self) -> Dense {
        let n = 2 * self.ne();
        let mut m = zeros(n, n);
        for t in 0..self.nt() {
            let (v, basis) = self.element(t);
            for &(ei, bi) in &basis {
                for &(ej, bj) in &basis {
                    for r in 0..2 {
                        for s in 0..2 {
                            let mut acc = 0.0;
                            for (x, w) in triangle_points(&v, self.n_points) {
                                let a = dev(row_tensor(r, bi.value(x)));
                                let b = dev(row_tensor(s, bj.value(x)));
                                let dd = a[0][0] * b[0][0] + a[0][1] * b[0][1] + a[1][0] * b[1][0] + a[1][1] * b[1][1];
                                acc += w * dd;
                            }
                            m[self.sigma_dof(r, ei)][self.sigma_dof(s, ej)] += acc / self.params.nu;
                        }
                    }
                }
            }
        }
        m
    }

    pub fn bf(&self) -> Dense {
        let mut m = zeros(2 * self.nt(), 2 * self.ne());
        for t in 0..self.nt() {
            let (v, basis) = self.element(t);
            for &(e, b) in &basis {
                for k in 0..2 {
                    let acc: f64 = triangle_points(&v, self.n_points).iter().map(|&(_, w)| w * b.div()).sum();
                    m[2 * t + k][self.sigma_dof(k, e)] += acc;
                }
            }
        }
        m
    }

    pub fn o1f(&self, z: &[f64]) -> Dense {
        let mut m = zeros(2 * self.nt(), 2 * self.ne());
        for t in 0..self.nt() {
            let (v, basis) = self.element(t);
            let zt = [z[2 * t], z[2 * t + 1]];
            for &(e, b) in &basis {
                for r in 0..2 {
                    for k in 0..2 {
                        let mut acc = 0.0;
                        for (x, w) in triangle_points(&v, self.n_points) {
                            let d = dev(row_tensor(r, b.value(x)));
                            acc += w * (d[k][0] * zt[0] + d[k][1] * zt[1]);
                        }
                        m[2 * t + k][self.sigma_dof(r, e)] += acc / self.params.nu;
                    }
                }
            }
        }
        m
    }

    pub fn o2f(&self, z: &[f64]) -> Dense {
        let n = 2 * self.nt();
        let mut m = zeros(n, n);
        for t in 0..self.nt() {
            let (v, _) = self.element(t);
            let mag = z[2 * t].hypot(z[2 * t + 1]);
            for k in 0..2 {
                let mut acc = 0.0;
                for (_, w) in triangle_points(&v, self.n_points) {
                    acc += w * self.params.forch * mag.powf(self.params.power - 2.0);
                }
                m[2 * t + k][2 * t + k] += acc;
            }
        }
        m
    }

    pub fn ac(&self) -> Dense {
        let n = self.ne();
        let mut m = zeros(n, n);
        for t in 0..self.nt() {
            let (v, basis) = self.element(t);
            for &(ei, bi) in &basis {
                for &(ej, bj) in &basis {
                    let mut acc = 0.0;
                    for (x, w) in triangle_points(&v, self.n_points) {
                        let (a, b) = (bi.value(x), bj.value(x));
                        acc += w * (a[0] * b[0] + a[1] * b[1]);
                    }
                    m[ei][ej] += acc / self.params.kappa;
                }
            }
        }
        m
    }

    pub fn o1c(&self, z: &[f64]) -> Dense {
        let mut m = zeros(self.nt(), self.ne());
        for t in 0..self.nt() {
            let (v, basis) = self.element(t);
            for &(e, b) in &basis {
                let mut acc = 0.0;
                for (x, w) in triangle_points(&v, self.n_points) {
                    let a = b.value(x);
                    acc += w * (a[0] * z[2 * t] + a[1] * z[2 * t + 1]);
                }
                m[t][e] += acc / self.params.kappa;
            }
        }
        m
    }

    pub fn bc(&self) -> (Dense, Dense) {
        let mut vol = zeros(self.nt(), self.ne());
        for t in 0..self.nt() {
            let (v, basis) = self.element(t);
            for &(e, b) in &basis {
                vol[t][e] += triangle_points(&v, self.n_points).iter().map(|&(_, w)| w * b.div()).sum::<f64>();
            }
        }
        let mut bd = zeros(self.nm(), self.ne());
        for (e, c) in self.chain() {
            let (t, n) = self.boundary_side(e);
            let (_, basis) = self.element(t);
            let b = basis.iter().find(|(g, _)| *g == e).unwrap().1;
            for (x, w, hats) in self.chain_points(&c) {
                let flux = b.value(x);
                let fn_ = flux[0] * n[0] + flux[1] * n[1];
                for (d, h) in hats {
                    if let Some(d) = d {
                        bd[d][e] += w * fn_ * h;
                    }
                }
            }
        }
        (vol, bd)
    }

    fn wall_mass(&self, weight: impl Fn(&[(Option<usize>, f64)]) -> f64) -> Dense {
        let n = self.nm();
        let mut m = zeros(n, n);
        for (_, c) in self.chain() {
            if c.tag != BoundaryTag::Wall {
                continue;
            }
            for (_, w, hats) in self.chain_points(&c) {
                let c = weight(&hats);
                for &(di, hi) in &hats {
                    for &(dj, hj) in &hats {
                        if let (Some(di), Some(dj)) = (di, dj) {
                            m[di][dj] += w * c * hi * hj;
                        }
                    }
                }
            }
        }
        m
    }

    pub fn cc(&self) -> Dense {
        self.wall_mass(|_| self.params.a2)
    }

    pub fn o2c(&self, chi: &[f64]) -> Dense {
        self.wall_mass(|hats| self.params.a1 * Self::chi_at(chi, hats))
    }

    pub fn fc(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.nm()];
        for (_, c) in self.chain() {
            if c.tag != BoundaryTag::Wall {
                continue;
            }
            for (_, w, hats) in self.chain_points(&c) {
                for (d, h) in hats {
                    if let Some(d) = d {
                        out[d] -= self.params.atilde0 * w * h;
                    }
                }
            }
        }
        out
    }

    /// `<tau n, g + a1 chi n>` over inlet and wall edges.
    pub fn ff(&self, g: &dyn Fn(P, BoundaryTag, P) -> P, chi: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; 2 * self.ne()];
        let chain = self.chain();
        for &(e, tag) in self.mesh.boundary_edges() {
            if tag == BoundaryTag::Outlet {
                continue;
            }
            let (t, n) = self.boundary_side(e);
            let (_, basis) = self.element(t);
            let b = basis.iter().find(|(g, _)| *g == e).unwrap().1;
            let [va, vb] = self.mesh.edges()[e];
            let (pa, pb) = (self.vert(va), self.vert(vb));
            let len = dist(pa, pb);
            for (s, w) in gauss_legendre_01(self.n_points) {
                let x = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
                let mut val = g(x, tag, n);
                if tag == BoundaryTag::Wall {
                    let c = &chain[&e];
                    let hats: Vec<_> = c
                        .hats
                        .iter()
                        .map(|&(d, ha, hb)| (d, (1.0 - s) * ha + s * hb))
                        .collect();
                    let chi_x = Self::chi_at(chi, &hats);
                    val[0] += self.params.a1 * chi_x * n[0];
                    val[1] += self.params.a1 * chi_x * n[1];
                }
                let flux = b.value(x);
                let fn_ = flux[0] * n[0] + flux[1] * n[1];
                for r in 0..2 {
                    out[self.sigma_dof(r, e)] += w * len * fn_ * val[r];
                }
            }
        }
        out
    }

    /// Diagonal masses `(velocity, concentration)`.
    pub fn masses(&self) -> (Dense, Dense) {
        let (nt, n2) = (self.nt(), 2 * self.nt());
        let (mut mu, mut mc) = (zeros(n2, n2), zeros(nt, nt));
        for t in 0..nt {
            let (v, _) = self.element(t);
            let a: f64 = triangle_points(&v, self.n_points).iter().map(|&(_, w)| w).sum();
            mu[2 * t][2 * t] = a;
            mu[2 * t + 1][2 * t + 1] = a;
            mc[t][t] = a;
        }
        (mu, mc)
    }
}
