//! 2x2 tensor helpers, stored row-major.

pub type Tensor = [[f64; 2]; 2];

pub fn trace(t: &Tensor) -> f64 {
    t[0][0] + t[1][1]
}

/// Deviatoric part `t - tr(t)/2 I`.
pub fn dev(t: &Tensor) -> Tensor {
    let h = 0.5 * trace(t);
    [[t[0][0] - h, t[0][1]], [t[1][0], t[1][1] - h]]
}

pub fn ddot(a: &Tensor, b: &Tensor) -> f64 {
    a[0][0] * b[0][0] + a[0][1] * b[0][1] + a[1][0] * b[1][0] + a[1][1] * b[1][1]
}

pub fn matvec(t: &Tensor, v: [f64; 2]) -> [f64; 2] {
    [t[0][0] * v[0] + t[0][1] * v[1], t[1][0] * v[0] + t[1][1] * v[1]]
}

/// Tensor whose row `row` is `v` and whose other row vanishes.
pub fn row_tensor(row: usize, v: [f64; 2]) -> Tensor {
    let mut t = [[0.0; 2]; 2];
    t[row] = v;
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn dev_is_idempotent_and_traceless(a in -1e3..1e3f64, b in -1e3..1e3f64, c in -1e3..1e3f64, d in -1e3..1e3f64) {
            let t = [[a, b], [c, d]];
            let dt = dev(&t);
            let ddt = dev(&dt);
            let scale = 1.0 + a.abs().max(d.abs());
            prop_assert!(trace(&dt).abs() <= 1e-15 * scale);
            for i in 0..2 { for j in 0..2 {
                prop_assert!((ddt[i][j] - dt[i][j]).abs() <= 1e-15 * scale);
            }}
        }
    }

    #[test]
    fn dev_of_identity_vanishes() {
        assert_eq!(dev(&[[3.0, 0.0], [0.0, 3.0]]), [[0.0; 2]; 2]);
    }
}
