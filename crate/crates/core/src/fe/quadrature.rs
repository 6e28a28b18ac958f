//! Gauss–Legendre rules on `[0, 1]` and collapsed (Duffy) rules on the
//! reference triangle `{(xi, eta) : xi, eta >= 0, xi + eta <= 1}`.

use std::f64::consts::PI;

/// A one-dimensional rule on `[0, 1]`; weights sum to one.
#[derive(Debug, Clone)]
pub struct LineRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl LineRule {
    /// `n`-point Gauss–Legendre rule, exact for degree `2n - 1`.
    pub fn gauss(n: usize) -> Self {
        assert!(n >= 1);
        let mut points = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Chebyshev-like initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_and_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // map [-1,1] -> [0,1]
            points[i] = 0.5 * (1.0 - x);
            points[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        Self { points, weights }
    }

    /// Smallest Gauss rule exact for polynomials of the given degree.
    pub fn with_exactness(degree: usize) -> Self {
        Self::gauss(degree / 2 + 1)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Rule on the reference triangle; weights sum to the reference area `1/2`.
#[derive(Debug, Clone)]
pub struct TriangleRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    pub exactness: usize,
}

impl TriangleRule {
    /// Collapsed tensor rule exact for total degree `degree`.
    pub fn with_exactness(degree: usize) -> Self {
        // x-direction carries the extra Jacobian factor (1 - xi).
        let gx = LineRule::with_exactness(degree + 1);
        let gy = LineRule::with_exactness(degree);
        let mut points = Vec::with_capacity(gx.len() * gy.len());
        let mut weights = Vec::with_capacity(gx.len() * gy.len());
        for (&a, &wa) in gx.points.iter().zip(&gx.weights) {
            for (&b, &wb) in gy.points.iter().zip(&gy.weights) {
                points.push([a, (1.0 - a) * b]);
                weights.push(wa * wb * (1.0 - a));
            }
        }
        Self {
            points,
            weights,
            exactness: degree,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The rules used throughout a solve at polynomial degree `k`.
#[derive(Debug, Clone)]
pub struct QuadratureSet {
    pub degree: usize,
    pub triangle: TriangleRule,
    pub edge: LineRule,
    /// Rule along transfer segments (`k + 1` points).
    pub segment: LineRule,
}

impl QuadratureSet {
    pub fn new(k: usize) -> Self {
        Self {
            degree: k,
            triangle: TriangleRule::with_exactness(2 * k + 2),
            edge: LineRule::with_exactness(2 * k + 2),
            segment: LineRule::gauss(k + 1),
        }
    }

    /// Richer rules for evaluating errors against smooth exact fields.
    pub fn for_errors(k: usize) -> Self {
        Self {
            degree: k,
            triangle: TriangleRule::with_exactness(2 * k + 8),
            edge: LineRule::with_exactness(2 * k + 8),
            segment: LineRule::gauss(k + 6),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|i| i as f64).product()
    }

    #[test]
    fn gauss_integrates_monomials() {
        for n in 1..12 {
            let r = LineRule::gauss(n);
            for p in 0..(2 * n) {
                let s: f64 = r
                    .points
                    .iter()
                    .zip(&r.weights)
                    .map(|(x, w)| w * x.powi(p as i32))
                    .sum();
                let exact = 1.0 / (p as f64 + 1.0);
                assert!((s - exact).abs() <= 1e-13 * exact, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn triangle_rule_exactness() {
        // int_T xi^a eta^b = a! b! / (a+b+2)!
        for deg in 0..14 {
            let r = TriangleRule::with_exactness(deg);
            for a in 0..=deg {
                for b in 0..=(deg - a) {
                    let s: f64 = r
                        .points
                        .iter()
                        .zip(&r.weights)
                        .map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32))
                        .sum();
                    let exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                    assert!(
                        (s - exact).abs() <= 1e-13 * exact,
                        "deg={deg} a={a} b={b} {s} {exact}"
                    );
                }
            }
        }
    }
}
