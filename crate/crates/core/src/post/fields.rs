use crate::fem::tensor::Tensor;
use crate::forms::AssemblyContext;
use crate::Point;

/// Value of a scalar RT0 field (one coefficient per edge) at `x` in triangle `t`.
pub fn eval_rt0(ctx: &AssemblyContext, coeffs: &[f64], t: usize, x: Point) -> Point {
    let g = ctx.geometry(t);
    let mut v = [0.0; 2];
    for (i, f) in ctx.bases(t).iter().enumerate() {
        let c = coeffs[g.edges[i]];
        let fx = f.value(x);
        v[0] += c * fx[0];
        v[1] += c * fx[1];
    }
    v
}

/// Elementwise-constant divergence of a scalar RT0 field.
pub fn div_rt0(ctx: &AssemblyContext, coeffs: &[f64], t: usize) -> f64 {
    let g = ctx.geometry(t);
    ctx.bases(t)
        .iter()
        .enumerate()
        .map(|(i, f)| coeffs[g.edges[i]] * f.divergence())
        .sum()
}

/// Pseudostress at `x` in triangle `t`; `sigma` uses the full numbering.
pub fn eval_sigma(ctx: &AssemblyContext, sigma: &[f64], t: usize, x: Point) -> Tensor {
    let ne = ctx.layout().n_edges;
    [eval_rt0(ctx, &sigma[..ne], t, x), eval_rt0(ctx, &sigma[ne..], t, x)]
}

/// Row-wise divergence of the pseudostress on triangle `t`.
pub fn div_sigma(ctx: &AssemblyContext, sigma: &[f64], t: usize) -> Point {
    let ne = ctx.layout().n_edges;
    [div_rt0(ctx, &sigma[..ne], t), div_rt0(ctx, &sigma[ne..], t)]
}

/// Pressure recovered from the pseudostress, `p = -tr(sigma)/2`, stored as
/// an affine function `a + b x + c y` on every triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureField {
    pub coeffs: Vec<[f64; 3]>,
}

impl PressureField {
    pub fn eval(&self, t: usize, x: Point) -> f64 {
        let [a, b, c] = self.coeffs[t];
        a + b * x[0] + c * x[1]
    }
}

pub fn recover_pressure(ctx: &AssemblyContext, sigma: &[f64]) -> PressureField {
    let ne = ctx.layout().n_edges;
    let coeffs = (0..ctx.mesh().n_triangles())
        .map(|t| {
            let g = ctx.geometry(t);
            // tr sigma = sum_i c_i [d0_i (x - o_x) + d1_i (y - o_y)]
            let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
            for (i, f) in ctx.bases(t).iter().enumerate() {
                let d0 = sigma[g.edges[i]] * f.coeff;
                let d1 = sigma[ne + g.edges[i]] * f.coeff;
                a -= d0 * f.origin[0] + d1 * f.origin[1];
                b += d0;
                c += d1;
            }
            [-0.5 * a, -0.5 * b, -0.5 * c]
        })
        .collect();
    PressureField { coeffs }
}

/// Pressure at every triangle centroid.
pub fn pressure_at_centroids(ctx: &AssemblyContext, sigma: &[f64]) -> Vec<f64> {
    let p = recover_pressure(ctx, sigma);
    (0..ctx.mesh().n_triangles())
        .map(|t| p.eval(t, ctx.mesh().centroid(t)))
        .collect()
}
