#![allow(dead_code)]

pub mod identities;
pub mod oracle;

use bf_transport_fem::forms::ModelParams;
use bf_transport_fem::mesh::{build_multiplier_partition, BoundaryTag, Mesh};
use rand::Rng;

pub const TAGS: [BoundaryTag; 3] = [BoundaryTag::Inlet, BoundaryTag::Wall, BoundaryTag::Outlet];

/// Jittered `nx x ny` grid on a random rectangle with random diagonals and
/// random per-edge tags. Retries the tags until the multiplier partition
/// exists (even chains) and wall and outlet edges are present.
pub fn random_mesh<R: Rng>(rng: &mut R, nx: usize, ny: usize) -> Mesh {
    let lx = rng.gen_range(0.5..2.0);
    let ly = rng.gen_range(0.5..2.0);
    let (hx, hy) = (lx / nx as f64, ly / ny as f64);
    let jitter = 0.2 * hx.min(hy);
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut vertices = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push([
                i as f64 * hx + rng.gen_range(-jitter..jitter),
                j as f64 * hy + rng.gen_range(-jitter..jitter),
            ]);
        }
    }
    let mut triangles = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if rng.gen_bool(0.5) {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }
    let mut sides = Vec::new();
    for i in 0..nx {
        sides.push([id(i, 0), id(i + 1, 0)]);
        sides.push([id(i, ny), id(i + 1, ny)]);
    }
    for j in 0..ny {
        sides.push([id(0, j), id(0, j + 1)]);
        sides.push([id(nx, j), id(nx, j + 1)]);
    }
    for _ in 0..10_000 {
        let boundary: Vec<_> = sides.iter().map(|&s| (s, TAGS[rng.gen_range(0..3)])).collect();
        let has = |tag| boundary.iter().any(|b| b.1 == tag);
        if !has(BoundaryTag::Wall) || !has(BoundaryTag::Outlet) {
            continue;
        }
        let mesh = Mesh::new(vertices.clone(), triangles.clone(), &boundary).expect("valid jittered grid");
        if build_multiplier_partition(&mesh).is_ok() {
            return mesh;
        }
    }
    panic!("no admissible tagging found");
}

/// Random admissible model constants.
pub fn random_params<R: Rng>(rng: &mut R) -> ModelParams {
    ModelParams::membrane(
        rng.gen_range(0.2..2.0),
        rng.gen_range(0.2..2.0),
        rng.gen_range(0.0..3.0),
        rng.gen_range(3.0..4.0),
        rng.gen_range(0.1..2.0),
        rng.gen_range(0.1..2.0),
        rng.gen_range(-1.0..1.0),
        0.1,
        1.0,
    )
    .unwrap()
}

pub fn random_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Largest entrywise difference between two dense matrices and the largest
/// entry of the reference.
pub fn dense_gap(a: &[Vec<f64>], b: &[Vec<f64>]) -> (f64, f64) {
    assert_eq!(a.len(), b.len(), "row count");
    let mut gap: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (ra, rb) in a.iter().zip(b) {
        assert_eq!(ra.len(), rb.len(), "column count");
        for (x, y) in ra.iter().zip(rb) {
            gap = gap.max((x - y).abs());
            scale = scale.max(y.abs());
        }
    }
    (gap, scale)
}

pub fn vec_gap(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len());
    let gap = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let scale = b.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    (gap, scale)
}

/// Assembles every block on a random mesh with random frozen iterates and
/// returns `(block, max gap, max reference entry)` against the oracle.
pub fn assembly_gaps(seed: u64) -> Vec<(&'static str, f64, f64)> {
    use bf_transport_fem::forms::{AssemblyContext, BoundaryData};
    use rand::SeedableRng;
    use std::sync::Arc;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (nx, ny) = [(1, 1), (2, 1), (1, 2), (2, 2), (1, 3), (3, 1), (1, 4), (4, 1)][rng.gen_range(0..8)];
    let mesh = random_mesh(&mut rng, nx, ny);
    let params = random_params(&mut rng);
    let ctx = AssemblyContext::from_mesh(mesh, params).unwrap();
    let o = oracle::Oracle::new(ctx.mesh(), ctx.partition(), params);
    let layout = ctx.layout();
    let z = random_vec(&mut rng, layout.n_velocity());
    let chi = random_vec(&mut rng, layout.n_multiplier);
    let c: [[f64; 6]; 2] = [
        std::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
        std::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
    ];
    let quad = move |x: [f64; 2], k: usize| {
        let c = &c[k];
        c[0] + c[1] * x[0] + c[2] * x[1] + c[3] * x[0] * x[0] + c[4] * x[0] * x[1] + c[5] * x[1] * x[1]
    };
    let data = BoundaryData {
        g: Arc::new(move |x, _, _, _| [quad(x, 0), quad(x, 1)]),
        ..BoundaryData::zero()
    };
    let g_ref = move |x: [f64; 2], _: bf_transport_fem::mesh::BoundaryTag, _: [f64; 2]| [quad(x, 0), quad(x, 1)];

    let (bc_vol, bc_bd) = ctx.assemble_bc();
    let (ovol, obd) = o.bc();
    let (mu, mc) = ctx.assemble_mass();
    let (omu, omc) = o.masses();
    let out = vec![
        ("A^F", dense_gap(&ctx.assemble_af().to_dense(), &o.af())),
        ("B^F", dense_gap(&ctx.assemble_bf().to_dense(), &o.bf())),
        ("O1^F", dense_gap(&ctx.assemble_o1f(&z).to_dense(), &o.o1f(&z))),
        ("O2^F", dense_gap(&ctx.assemble_o2f(&z).to_dense(), &o.o2f(&z))),
        ("A^C", dense_gap(&ctx.assemble_ac().to_dense(), &o.ac())),
        ("B^C volume", dense_gap(&bc_vol.to_dense(), &ovol)),
        ("B^C boundary", dense_gap(&bc_bd.to_dense(), &obd)),
        ("C^C", dense_gap(&ctx.assemble_cc().to_dense(), &o.cc())),
        ("O1^C", dense_gap(&ctx.assemble_o1c(&z).to_dense(), &o.o1c(&z))),
        ("O2^C", dense_gap(&ctx.assemble_o2c(&chi).to_dense(), &o.o2c(&chi))),
        ("F^F", vec_gap(&ctx.assemble_ff(&data, Some(&chi), 0.0).unwrap(), &o.ff(&g_ref, &chi))),
        ("F^C", vec_gap(&ctx.assemble_fc(), &o.fc())),
        ("mass u", dense_gap(&mu.to_dense(), &omu)),
        ("mass phi", dense_gap(&mc.to_dense(), &omc)),
    ];
    out.into_iter().map(|(n, (g, s))| (n, g, s)).collect()
}

/// Marches a random mesh with homogeneous data (`phi_in = 0`, so `atilde0 = 0`,
/// zero boundary datum, zero initial fields, no sources) for a few steps and
/// returns the largest coefficient seen.
pub fn zero_data_max(seed: u64) -> f64 {
    use bf_transport_fem::forms::{AssemblyContext, BoundaryData, Sources};
    use bf_transport_fem::solver::{Problem, SolverConfig};
    use rand::SeedableRng;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mesh = random_mesh(&mut rng, 3, 3);
    let params = ModelParams::membrane(
        rng.gen_range(0.2..2.0),
        rng.gen_range(0.2..2.0),
        rng.gen_range(0.0..3.0),
        rng.gen_range(3.0..4.0),
        rng.gen_range(0.1..2.0),
        rng.gen_range(0.1..2.0),
        0.0,
        0.1,
        0.3,
    )
    .unwrap();
    let ctx = AssemblyContext::from_mesh(mesh, params).unwrap();
    let mut problem = Problem::new(ctx, BoundaryData::zero(), Sources::none(), SolverConfig::default()).unwrap();
    let mut worst: f64 = 0.0;
    let last = problem
        .march(|_, s, _| {
            worst = worst.max(s.max_abs());
            Ok(())
        })
        .unwrap();
    worst.max(last.max_abs())
}
