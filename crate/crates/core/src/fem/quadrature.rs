use crate::Point;

/// Quadrature on the reference triangle in barycentric coordinates.
///
/// Weights sum to the reference area 1/2; scale by `2|T|` on a physical
/// triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

/// Gauss–Legendre quadrature on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeQuadratureRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadratureRule {
    pub fn centroid() -> Self {
        let third = 1.0 / 3.0;
        QuadratureRule {
            points: vec![[third, third, third]],
            weights: vec![0.5],
            degree: 1,
        }
    }

    /// Six-point rule exact for degree 4.
    pub fn six_point() -> Self {
        let a1 = 0.445_948_490_915_964_9;
        let w1 = 0.223_381_589_678_011_5;
        let a2 = 0.091_576_213_509_770_74;
        let w2 = 0.109_951_743_655_321_9;
        let mut points = Vec::with_capacity(6);
        let mut weights = Vec::with_capacity(6);
        for (a, w) in [(a1, w1), (a2, w2)] {
            let b = 1.0 - 2.0 * a;
            for p in [[b, a, a], [a, b, a], [a, a, b]] {
                points.push(p);
                weights.push(0.5 * w);
            }
        }
        QuadratureRule {
            points,
            weights,
            degree: 4,
        }
    }

    /// Collapsed (Duffy) Gauss–Legendre product rule exact to `degree`.
    pub fn collapsed(degree: usize) -> Self {
        let n = (degree + 2).div_ceil(2).max(1);
        let (x, w) = gauss_legendre(n);
        let mut points = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let u = x[i];
                let v = x[j] * (1.0 - u);
                points.push([1.0 - u - v, u, v]);
                weights.push(w[i] * w[j] * (1.0 - u));
            }
        }
        QuadratureRule {
            points,
            weights,
            degree,
        }
    }

    /// The cheapest shipped rule exact to at least `degree`.
    pub fn for_degree(degree: usize) -> Self {
        match degree {
            0 | 1 => Self::centroid(),
            2..=4 => Self::six_point(),
            d => Self::collapsed(d),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Physical points and weights on the triangle with vertices `v`.
    pub fn mapped<'a>(&'a self, v: &'a [Point; 3], area: f64) -> impl Iterator<Item = (Point, f64)> + 'a {
        self.points.iter().zip(&self.weights).map(move |(b, w)| {
            (
                [
                    b[0] * v[0][0] + b[1] * v[1][0] + b[2] * v[2][0],
                    b[0] * v[0][1] + b[1] * v[1][1] + b[2] * v[2][1],
                ],
                2.0 * area * w,
            )
        })
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::six_point()
    }
}

impl EdgeQuadratureRule {
    pub fn gauss(n: usize) -> Self {
        let (points, weights) = gauss_legendre(n.max(1));
        EdgeQuadratureRule {
            points,
            weights,
            degree: 2 * n.max(1) - 1,
        }
    }

    pub fn for_degree(degree: usize) -> Self {
        Self::gauss(degree.div_ceil(2).max(1))
    }

    /// Points and weights on the segment `a -> b`, with the edge parameter.
    pub fn mapped(&self, a: Point, b: Point) -> impl Iterator<Item = (Point, f64, f64)> + '_ {
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        self.points.iter().zip(&self.weights).map(move |(&s, &w)| {
            (
                [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])],
                s,
                w * len,
            )
        })
    }
}

impl Default for EdgeQuadratureRule {
    fn default() -> Self {
        Self::gauss(2)
    }
}

/// Gauss–Legendre nodes and weights on `[0, 1]` (Newton on the three-term
/// recurrence).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[n - 1 - i] = 0.5 * (1.0 + z);
        w[n - 1 - i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}
