//! Element-wise HDG projection `(Pi_V q, Pi_W u)`.
//!
//! The projection matches the moments of `q` and `u` against `P_{k-1}` and
//! the traces `q.n + tau u` against `P_k(F)` on each face. With the
//! hierarchical orthonormal basis the first two groups of conditions simply
//! fix the leading `dim P_{k-1}` coefficients.

use nalgebra::{DMatrix, DVector};

use super::basis::{dim_pk, RefBasis};
use super::element::{EdgeGeometry, ElementBasis, ElementGeometry, Point};
use super::quadrature::{LineRule, TriangleRule};
use crate::error::{HdgError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// `[x | y]` blocks of length `dim P_k`.
    pub q: Vec<f64>,
    pub u: Vec<f64>,
}

/// Projects `(q, u)` onto `[P_k]^2 x P_k` of the counterclockwise triangle
/// `vertices`, with `tau[i]` the stabilization on local face
/// `i = (v_i, v_{i+1})`.
pub fn hdg_project(
    vertices: [Point; 3],
    k: usize,
    tau: [f64; 3],
    q: impl Fn(Point) -> [f64; 2],
    u: impl Fn(Point) -> f64,
    element: usize,
) -> Result<Projection> {
    let reference = RefBasis::new(k);
    let basis = ElementBasis::new(ElementGeometry::new(vertices), &reference);
    let n = basis.len();
    let m = if k == 0 { 0 } else { dim_pk(k - 1) };
    let nf = k + 1;
    let size = 3 * n;
    let mut mat = DMatrix::zeros(size, size);
    let mut rhs = DVector::zeros(size);

    let vol = TriangleRule::with_exactness(2 * k + 14);
    let mut v = vec![0.0; n];
    let mut row = 0;
    // volume moments against P_{k-1}
    for (x, w) in basis.quadrature(&vol) {
        basis.eval(x, &mut v);
        let (qx, ux) = (q(x), u(x));
        for c in 0..m {
            rhs[c] += w * qx[0] * v[c];
            rhs[m + c] += w * qx[1] * v[c];
            rhs[2 * m + c] += w * ux * v[c];
        }
    }
    for c in 0..m {
        mat[(c, c)] = 1.0;
        mat[(m + c, n + c)] = 1.0;
        mat[(2 * m + c, 2 * n + c)] = 1.0;
    }
    row += 3 * m;

    let line = LineRule::with_exactness(2 * k + 14);
    let mut mu = vec![0.0; nf];
    for (i, &t_face) in tau.iter().enumerate() {
        let edge = EdgeGeometry::new(vertices[i], vertices[(i + 1) % 3]);
        let nrm = edge.normal;
        for (&t, &wt) in line.points.iter().zip(&line.weights) {
            let x = edge.point(t);
            let w = wt * edge.length;
            edge.basis(k, t, &mut mu);
            basis.eval(x, &mut v);
            let qx = q(x);
            let target = qx[0] * nrm[0] + qx[1] * nrm[1] + t_face * u(x);
            for a in 0..nf {
                let r = row + a;
                rhs[r] += w * target * mu[a];
                for c in 0..n {
                    mat[(r, c)] += w * v[c] * nrm[0] * mu[a];
                    mat[(r, n + c)] += w * v[c] * nrm[1] * mu[a];
                    mat[(r, 2 * n + c)] += w * t_face * v[c] * mu[a];
                }
            }
        }
        row += nf;
    }
    debug_assert_eq!(row, size);

    let scale = mat.amax();
    let lu = mat.lu();
    let singular = lu.u().diagonal().iter().any(|d| d.abs() <= 1e-12 * scale);
    if singular {
        return Err(HdgError::SingularProjection { element });
    }
    let sol = lu.solve(&rhs).ok_or(HdgError::SingularProjection { element })?;
    Ok(Projection {
        q: sol.rows(0, 2 * n).iter().copied().collect(),
        u: sol.rows(2 * n, n).iter().copied().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const REF: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

    fn eval(basis: &ElementBasis<'_>, coef: &[f64], x: Point) -> f64 {
        basis.evaluate(coef, x)
    }

    #[test]
    fn reproduces_polynomials() {
        let verts = [[0.2, 0.1], [1.1, 0.3], [0.4, 0.9]];
        for k in 1..=3 {
            let ki = k as i32;
            let u = move |x: Point| 1.0 + x[0].powi(ki) - 2.0 * x[0] * x[1].powi(ki - 1);
            let q = move |x: Point| [x[1].powi(ki) + 0.5, 3.0 * x[0] - x[0].powi(ki)];
            let p = hdg_project(verts, k, [1.0, 2.0, 0.5], q, u, 0).unwrap();
            let r = RefBasis::new(k);
            let b = ElementBasis::new(ElementGeometry::new(verts), &r);
            let n = b.len();
            for x in [[0.5, 0.4], [0.3, 0.3], [0.8, 0.35]] {
                assert!((eval(&b, &p.u, x) - u(x)).abs() < 1e-12);
                assert!((eval(&b, &p.q[..n], x) - q(x)[0]).abs() < 1e-12);
                assert!((eval(&b, &p.q[n..], x) - q(x)[1]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn moment_conditions_hold_for_smooth_data() {
        let u = |x: Point| x[0].sin() * x[1].cos();
        let q = |x: Point| [-x[0].cos() * x[1].cos(), x[0].sin() * x[1].sin()];
        let k = 1;
        let tau = [1.0; 3];
        let p = hdg_project(REF, k, tau, q, u, 0).unwrap();
        let r = RefBasis::new(k);
        let b = ElementBasis::new(ElementGeometry::new(REF), &r);
        let n = b.len();
        // P_0 moments with an independent rule
        let rule = TriangleRule::with_exactness(14);
        let (mut rq, mut ru) = ([0.0; 2], 0.0);
        for (x, w) in b.quadrature(&rule) {
            rq[0] += w * (eval(&b, &p.q[..n], x) - q(x)[0]);
            rq[1] += w * (eval(&b, &p.q[n..], x) - q(x)[1]);
            ru += w * (eval(&b, &p.u, x) - u(x));
        }
        assert!(rq[0].abs() < 1e-11 && rq[1].abs() < 1e-11 && ru.abs() < 1e-11, "{rq:?} {ru}");
        // face conditions against monomials 1, t
        let line = LineRule::gauss(12);
        for i in 0..3 {
            let e = EdgeGeometry::new(REF[i], REF[(i + 1) % 3]);
            for deg in 0..=k {
                let mut res = 0.0;
                for (&t, &wt) in line.points.iter().zip(&line.weights) {
                    let x = e.point(t);
                    let ph = [eval(&b, &p.q[..n], x), eval(&b, &p.q[n..], x)];
                    let diff = (ph[0] - q(x)[0]) * e.normal[0]
                        + (ph[1] - q(x)[1]) * e.normal[1]
                        + tau[i] * (eval(&b, &p.u, x) - u(x));
                    res += wt * e.length * diff * t.powi(deg as i32);
                }
                assert!(res.abs() < 1e-11, "face {i} degree {deg}: {res}");
            }
        }
    }

    #[test]
    fn zero_stabilization_is_singular() {
        let r = hdg_project(REF, 1, [0.0; 3], |_| [0.0, 0.0], |_| 0.0, 7);
        assert!(matches!(r, Err(HdgError::SingularProjection { element: 7 })));
    }

    #[test]
    fn projection_error_converges() {
        let u = |x: Point| (2.0 * x[0]).sin() * (x[1] + 0.3).exp();
        let q = |x: Point| {
            [
                -2.0 * (2.0 * x[0]).cos() * (x[1] + 0.3).exp(),
                -(2.0 * x[0]).sin() * (x[1] + 0.3).exp(),
            ]
        };
        for k in 1..=2 {
            let mut errs = Vec::new();
            for s in [0.4, 0.2, 0.1] {
                let v: [Point; 3] = [[0.1, 0.1], [0.1 + s, 0.1], [0.1 + 0.3 * s, 0.1 + s]];
                let p = hdg_project(v, k, [1.0; 3], q, u, 0).unwrap();
                let r = RefBasis::new(k);
                let b = ElementBasis::new(ElementGeometry::new(v), &r);
                let rule = TriangleRule::with_exactness(2 * k + 8);
                let e: f64 = b
                    .quadrature(&rule)
                    .into_iter()
                    .map(|(x, w)| w * (b.evaluate(&p.u, x) - u(x)).powi(2))
                    .sum();
                errs.push(e.sqrt());
            }
            for w in errs.windows(2) {
                // ||.||_T carries an extra h from the area
                let rate = (w[0] / w[1]).log2() - 1.0;
                assert!(rate > k as f64 + 0.9, "k={k} rate {rate}");
            }
        }
    }
}
