//! Orthonormal modal bases.
//!
//! The triangle basis is the Dubiner (Koornwinder) family, ordered by total
//! degree so that the first `dim(k)` functions span `P_k` for every `k` up
//! to the tabulated degree. The collapsed-coordinate form is rewritten with
//! homogenized Legendre recurrences, so evaluation is a plain polynomial in
//! the reference coordinates and is valid outside the triangle as well
//! (needed for extrapolation along transfer paths).

use super::quadrature::TriangleRule;

/// Dimension of `P_k` in two variables.
pub fn dim_pk(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

#[derive(Clone, Copy, Debug)]
struct Dual {
    v: f64,
    dx: f64,
    dy: f64,
}

impl Dual {
    const fn c(v: f64) -> Self {
        Self { v, dx: 0.0, dy: 0.0 }
    }
    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            dx: self.dx + o.dx,
            dy: self.dy + o.dy,
        }
    }
    fn sub(self, o: Self) -> Self {
        Self {
            v: self.v - o.v,
            dx: self.dx - o.dx,
            dy: self.dy - o.dy,
        }
    }
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            dx: self.dx * o.v + self.v * o.dx,
            dy: self.dy * o.v + self.v * o.dy,
        }
    }
    fn scale(self, a: f64) -> Self {
        Self {
            v: self.v * a,
            dx: self.dx * a,
            dy: self.dy * a,
        }
    }
}

/// Orthonormal basis of `P_degree` on the reference triangle, with
/// `int_ref phi_i phi_j = delta_ij`.
#[derive(Debug, Clone)]
pub struct RefBasis {
    degree: usize,
    /// `(p, q)` pairs in evaluation order.
    modes: Vec<(usize, usize)>,
    norm: Vec<f64>,
}

impl RefBasis {
    pub fn new(degree: usize) -> Self {
        let mut modes = Vec::with_capacity(dim_pk(degree));
        for d in 0..=degree {
            for q in 0..=d {
                modes.push((d - q, q));
            }
        }
        let mut basis = Self {
            degree,
            modes,
            norm: vec![1.0; dim_pk(degree)],
        };
        let rule = TriangleRule::with_exactness(2 * degree);
        let mut sq = vec![0.0; basis.len()];
        let mut vals = vec![0.0; basis.len()];
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            basis.eval_into(p[0], p[1], &mut vals);
            for (s, v) in sq.iter_mut().zip(&vals) {
                *s += w * v * v;
            }
        }
        basis.norm = sq.iter().map(|s| 1.0 / s.sqrt()).collect();
        basis
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    fn eval_dual(&self, xi: f64, eta: f64, out: &mut [Dual]) {
        let k = self.degree;
        // homogenized collapsed coordinates
        let x = Dual {
            v: 2.0 * xi + eta - 1.0,
            dx: 2.0,
            dy: 1.0,
        };
        let y = Dual {
            v: 1.0 - eta,
            dx: 0.0,
            dy: -1.0,
        };
        let s = Dual {
            v: 2.0 * eta - 1.0,
            dx: 0.0,
            dy: 2.0,
        };
        let y2 = y.mul(y);
        let mut leg = Vec::with_capacity(k + 1);
        leg.push(Dual::c(1.0));
        if k >= 1 {
            leg.push(x);
        }
        for n in 1..k {
            let nf = n as f64;
            let t = x
                .mul(leg[n])
                .scale(2.0 * nf + 1.0)
                .sub(y2.mul(leg[n - 1]).scale(nf));
            leg.push(t.scale(1.0 / (nf + 1.0)));
        }
        let mut jac = vec![Dual::c(0.0); k + 1];
        for (idx, &(p, q)) in self.modes.iter().enumerate() {
            jacobi_alpha0(2 * p + 1, q, s, &mut jac);
            out[idx] = leg[p].mul(jac[q]).scale(self.norm[idx]);
        }
    }

    /// Basis values at reference point `(xi, eta)`.
    pub fn eval_into(&self, xi: f64, eta: f64, out: &mut [f64]) {
        let mut d = vec![Dual::c(0.0); self.len()];
        self.eval_dual(xi, eta, &mut d);
        for (o, v) in out.iter_mut().zip(&d) {
            *o = v.v;
        }
    }

    /// Values and reference gradients `(d/dxi, d/deta)`.
    pub fn eval_with_grad(&self, xi: f64, eta: f64, vals: &mut [f64], grads: &mut [[f64; 2]]) {
        let mut d = vec![Dual::c(0.0); self.len()];
        self.eval_dual(xi, eta, &mut d);
        for ((v, g), dd) in vals.iter_mut().zip(grads.iter_mut()).zip(&d) {
            *v = dd.v;
            *g = [dd.dx, dd.dy];
        }
    }
}

/// Jacobi polynomials `P_n^{(alpha, 0)}(s)` for `n = 0..=nmax`.
fn jacobi_alpha0(alpha: usize, nmax: usize, s: Dual, out: &mut [Dual]) {
    let a = alpha as f64;
    out[0] = Dual::c(1.0);
    if nmax == 0 {
        return;
    }
    out[1] = s.scale((a + 2.0) / 2.0).add(Dual::c(a / 2.0));
    for n in 2..=nmax {
        let nf = n as f64;
        let c0 = 2.0 * nf * (nf + a) * (2.0 * nf + a - 2.0);
        let c1 = (2.0 * nf + a - 1.0) * (2.0 * nf + a) * (2.0 * nf + a - 2.0);
        let c2 = (2.0 * nf + a - 1.0) * a * a;
        let c3 = 2.0 * (nf + a - 1.0) * (nf - 1.0) * (2.0 * nf + a);
        let t = s
            .scale(c1)
            .add(Dual::c(c2))
            .mul(out[n - 1])
            .sub(out[n - 2].scale(c3));
        out[n] = t.scale(1.0 / c0);
    }
}

/// Orthonormal Legendre values on `[0, 1]`, `int_0^1 L_i L_j = delta_ij`.
pub fn legendre01(n: usize, t: f64, out: &mut [f64]) {
    let x = 2.0 * t - 1.0;
    let mut p0 = 1.0;
    let mut p1 = x;
    for (i, o) in out.iter_mut().enumerate().take(n + 1) {
        let p = match i {
            0 => 1.0,
            1 => x,
            _ => {
                let k = (i - 1) as f64;
                let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
                p0 = p1;
                p1 = p2;
                p2
            }
        };
        *o = p * (2.0 * i as f64 + 1.0).sqrt();
    }
}
