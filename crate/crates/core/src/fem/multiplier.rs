use crate::error::{Error, Result};
use crate::mesh::{Mesh, MultiplierPartition};
use crate::Point;

/// Value of the discrete multiplier at parameter `s` along a fine boundary
/// edge (0 at the edge's walking-direction start).
pub fn multiplier_on_edge(partition: &MultiplierPartition, coeffs: &[f64], edge: usize, s: f64) -> Option<f64> {
    let hats = partition.hats_at(edge, s)?;
    Some(
        hats.iter()
            .map(|(dof, w)| dof.map_or(0.0, |d| coeffs[d] * w))
            .sum(),
    )
}

/// Evaluates the continuous piecewise-linear multiplier at a point of the
/// non-inlet boundary. Values at inlet junctions are zero.
pub fn eval_multiplier(
    mesh: &Mesh,
    partition: &MultiplierPartition,
    coeffs: &[f64],
    point: Point,
) -> Result<f64> {
    for &e in partition.chain_edges() {
        let f = partition.fine_edge(e).expect("chain edges are placed");
        let a = mesh.vertices()[f.start];
        let b = mesh.vertices()[f.end];
        let d = [b[0] - a[0], b[1] - a[1]];
        let len2 = d[0] * d[0] + d[1] * d[1];
        let r = [point[0] - a[0], point[1] - a[1]];
        let s = (r[0] * d[0] + r[1] * d[1]) / len2;
        let cross = (r[0] * d[1] - r[1] * d[0]).abs() / len2.sqrt();
        let tol = 1e-10 * len2.sqrt();
        if (-1e-12..=1.0 + 1e-12).contains(&s) && cross <= tol {
            return Ok(multiplier_on_edge(partition, coeffs, e, s.clamp(0.0, 1.0)).unwrap());
        }
    }
    Err(Error::Domain {
        what: "the multiplier (non-inlet boundary)",
        point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::EdgeQuadratureRule;
    use crate::mesh::{build_multiplier_partition, build_unit_square, BoundaryTag, SideTags};

    fn setup() -> (Mesh, MultiplierPartition) {
        let tags = SideTags {
            left: BoundaryTag::Inlet,
            ..SideTags::uniform(BoundaryTag::Wall)
        };
        let m = build_unit_square(4, tags).unwrap();
        let p = build_multiplier_partition(&m).unwrap();
        (m, p)
    }

    #[test]
    fn zero_coefficients_give_zero() {
        let (m, p) = setup();
        let c = vec![0.0; p.n_free()];
        for x in [[0.3, 0.0], [1.0, 0.6], [0.9, 1.0]] {
            assert_eq!(eval_multiplier(&m, &p, &c, x).unwrap(), 0.0);
        }
    }

    #[test]
    fn single_hat_is_nodal() {
        let (m, p) = setup();
        // the macro vertex at (1, 0) (bottom-right corner)
        let mv = p
            .macro_vertices
            .iter()
            .position(|&v| m.vertices()[v] == [1.0, 0.0])
            .unwrap();
        let dof = p.free_index(mv).unwrap();
        let mut c = vec![0.0; p.n_free()];
        c[dof] = 1.0;
        assert!((eval_multiplier(&m, &p, &c, [1.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        // neighbouring macro vertices sit half a side away
        assert!(eval_multiplier(&m, &p, &c, [0.5, 0.0]).unwrap().abs() < 1e-15);
        assert!(eval_multiplier(&m, &p, &c, [1.0, 0.5]).unwrap().abs() < 1e-15);
        assert!((eval_multiplier(&m, &p, &c, [0.75, 0.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!((eval_multiplier(&m, &p, &c, [1.0, 0.125]).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn hat_integral_is_half_support() {
        let (m, p) = setup();
        let rule = EdgeQuadratureRule::gauss(2);
        for dof in 0..p.n_free() {
            let mut c = vec![0.0; p.n_free()];
            c[dof] = 1.0;
            let mut integral = 0.0;
            let mut support = 0.0;
            for &e in p.chain_edges() {
                let f = p.fine_edge(e).unwrap();
                let (a, b) = (m.vertices()[f.start], m.vertices()[f.end]);
                let part: f64 = rule
                    .mapped(a, b)
                    .map(|(_, s, w)| w * multiplier_on_edge(&p, &c, e, s).unwrap())
                    .sum();
                if part > 0.0 {
                    support += m.edge_length(e);
                }
                integral += part;
            }
            assert!((integral - 0.5 * support).abs() < 1e-14);
        }
    }

    #[test]
    fn inlet_point_is_a_domain_error() {
        let (m, p) = setup();
        let c = vec![0.0; p.n_free()];
        assert!(matches!(
            eval_multiplier(&m, &p, &c, [0.0, 0.5]),
            Err(Error::Domain { .. })
        ));
    }
}
