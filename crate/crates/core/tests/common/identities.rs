//! Structural identity checks shared by the regular tests and the
//! acceptance suite. Each returns the largest deviation found.

use bf_transport_fem::fem::tensor::{dev, trace, Tensor};
use bf_transport_fem::fem::{rt0_interpolate, EdgeQuadratureRule};
use bf_transport_fem::forms::AssemblyContext;
use bf_transport_fem::post::{div_sigma, eval_sigma, pressure_at_centroids, recover_pressure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{random_mesh, random_params, random_vec};

fn context(rng: &mut ChaCha8Rng) -> AssemblyContext {
    let (nx, ny) = (rng.gen_range(1..4), rng.gen_range(1..4));
    let mesh = random_mesh(rng, nx, ny);
    AssemblyContext::from_mesh(mesh, random_params(rng)).unwrap()
}

/// Interpolates `sigma(x) = c + g x` row by row (`g[r]` is the gradient of
/// row `r`, a 2x2 matrix).
fn interpolate_affine(ctx: &AssemblyContext, c: Tensor, g: [Tensor; 2]) -> Vec<f64> {
    let rule = EdgeQuadratureRule::gauss(2);
    let mut out = Vec::new();
    for r in 0..2 {
        let row = move |x: [f64; 2]| {
            let m = g[r];
            [c[r][0] + m[0][0] * x[0] + m[0][1] * x[1], c[r][1] + m[1][0] * x[0] + m[1][1] * x[1]]
        };
        out.extend(rt0_interpolate(ctx.mesh(), &rule, row));
    }
    out
}

fn random_tensor(rng: &mut ChaCha8Rng) -> Tensor {
    [[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)], [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]]
}

/// `div(Pi_h sigma)` against the (constant) divergence of a random affine
/// tensor field, over every triangle.
pub fn commuting_gap(seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = context(&mut rng);
    let c = random_tensor(&mut rng);
    let g = [random_tensor(&mut rng), random_tensor(&mut rng)];
    let sigma = interpolate_affine(&ctx, c, g);
    let exact = [trace(&g[0]), trace(&g[1])];
    (0..ctx.mesh().n_triangles())
        .map(|t| {
            let d = div_sigma(&ctx, &sigma, t);
            (d[0] - exact[0]).abs().max((d[1] - exact[1]).abs())
        })
        .fold(0.0, f64::max)
}

/// Largest `|dev(dev t) - dev t|` and `|tr dev t|` over random tensors.
pub fn dev_gap(seed: u64, samples: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let scale = 10f64.powi(rng.gen_range(-3..1));
        let t = random_tensor(&mut rng).map(|r| r.map(|v| v * scale));
        let d = dev(&t);
        let dd = dev(&d);
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((dd[i][j] - d[i][j]).abs());
            }
        }
        worst = worst.max(trace(&d).abs());
    }
    worst
}

/// Pressure recovery checks on one random mesh:
/// `sigma = -c I` gives `p = c`, a traceless constant gives `p = 0`,
/// random coefficients match `-tr(sigma)/2` evaluated directly at the
/// centroids, and adding `c I` shifts `p` by `-c`.
pub fn pressure_gaps(seed: u64) -> [f64; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = context(&mut rng);
    let mesh = ctx.mesh();
    let zero = [[0.0; 2]; 2];
    let points: Vec<(usize, [f64; 2])> = (0..mesh.n_triangles())
        .map(|t| {
            let v = mesh.triangle_vertices(t);
            let (a, b) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            let (a, b) = if a + b > 1.0 { (1.0 - a, 1.0 - b) } else { (a, b) };
            (t, [
                v[0][0] + a * (v[1][0] - v[0][0]) + b * (v[2][0] - v[0][0]),
                v[0][1] + a * (v[1][1] - v[0][1]) + b * (v[2][1] - v[0][1]),
            ])
        })
        .collect();

    let c: f64 = rng.gen_range(-2.0..2.0);
    let p = recover_pressure(&ctx, &interpolate_affine(&ctx, [[-c, 0.0], [0.0, -c]], [zero, zero]));
    let identity = points.iter().map(|&(t, x)| (p.eval(t, x) - c).abs()).fold(0.0, f64::max);

    let d: f64 = rng.gen_range(-2.0..2.0);
    let traceless = [[d, rng.gen_range(-2.0..2.0)], [rng.gen_range(-2.0..2.0), -d]];
    let p = recover_pressure(&ctx, &interpolate_affine(&ctx, traceless, [zero, zero]));
    let trace_free = points.iter().map(|&(t, x)| p.eval(t, x).abs()).fold(0.0, f64::max);

    let sigma = random_vec(&mut rng, ctx.layout().n_sigma());
    let centroids = pressure_at_centroids(&ctx, &sigma);
    let direct = (0..mesh.n_triangles())
        .map(|t| {
            let s = eval_sigma(&ctx, &sigma, t, mesh.centroid(t));
            (centroids[t] + 0.5 * (s[0][0] + s[1][1])).abs()
        })
        .fold(0.0, f64::max);

    let shift: f64 = rng.gen_range(-2.0..2.0);
    let id = interpolate_affine(&ctx, [[shift, 0.0], [0.0, shift]], [zero, zero]);
    let shifted: Vec<f64> = sigma.iter().zip(&id).map(|(a, b)| a + b).collect();
    let (p0, p1) = (recover_pressure(&ctx, &sigma), recover_pressure(&ctx, &shifted));
    let equivariance = points
        .iter()
        .map(|&(t, x)| (p1.eval(t, x) - p0.eval(t, x) + shift).abs())
        .fold(0.0, f64::max);

    [identity, trace_free, direct, equivariance]
}
