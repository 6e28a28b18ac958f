//! Element-local HDG solver and static condensation.
//!
//! Local unknowns are ordered `X = [q_x | q_y | u]`, each block of size
//! `n = dim P_k`. Given the traces `uhat` on the three faces and the source
//! moments `b_c = (F, phi_c)`, the local equations read `K X = C uhat + S b`
//! with
//!
//! ```text
//! K = [ A   0  -Bx^T ]      A_cd  = (kappa^-1 phi_c, phi_d)
//!     [ 0   A  -By^T ]      Bx_cd = (d_x phi_d, phi_c)
//!     [ Bx  By  T    ]      T_cd  = sum_e tau <phi_c, phi_d>_e
//! ```
//!
//! The normal flux `<q.n + tau (u - uhat), mu>_e = E X - tau uhat` then
//! yields the condensed element contribution to the transmission rows.

use nalgebra::{DMatrix, DVector};

use crate::error::{HdgError, Result};
use crate::fe::basis::RefBasis;
use crate::fe::element::{EdgeGeometry, ElementBasis, ElementGeometry};
use crate::fe::quadrature::QuadratureSet;

/// A face of an element as seen by the local solver: its geometry in the
/// global orientation (which fixes the trace basis) and the sign turning
/// the face normal into the outward one.
#[derive(Debug, Clone, Copy)]
pub struct LocalFace {
    pub edge: EdgeGeometry,
    pub sign: f64,
}

#[derive(Debug, Clone)]
pub struct LocalOperator {
    pub n: usize,
    pub nf: usize,
    /// `K^{-1} C`, `3n x 3nf`.
    pub rhat: DMatrix<f64>,
    /// `K^{-1} S`, `3n x n`: response to the source moments.
    pub rsrc: DMatrix<f64>,
    /// `E K^{-1} C - tau I`, `3nf x 3nf`.
    pub ahat: DMatrix<f64>,
    /// `E K^{-1} S`, `3nf x n`.
    pub esrc: DMatrix<f64>,
    /// The uncondensed blocks, kept for residual checks.
    pub k_mat: DMatrix<f64>,
    pub c_mat: DMatrix<f64>,
    pub e_mat: DMatrix<f64>,
}

impl LocalOperator {
    /// Local `(q, u)` from face traces (`3nf`) and source moments (`n`).
    pub fn recover(&self, uhat: &[f64], source: &[f64]) -> DVector<f64> {
        &self.rhat * DVector::from_column_slice(uhat) + &self.rsrc * DVector::from_column_slice(source)
    }
}

/// Builds and factors the local system of one element.
pub fn local_solver(
    geom: ElementGeometry,
    faces: &[LocalFace; 3],
    kappa: &dyn Fn([f64; 2]) -> f64,
    tau: f64,
    reference: &RefBasis,
    quad: &QuadratureSet,
    element: usize,
) -> Result<LocalOperator> {
    let basis = ElementBasis::new(geom, reference);
    let n = basis.len();
    let k = reference.degree();
    let nf = k + 1;

    let mut a = DMatrix::zeros(n, n);
    let mut bx = DMatrix::zeros(n, n);
    let mut by = DMatrix::zeros(n, n);
    let (mut v, mut g) = (vec![0.0; n], vec![[0.0; 2]; n]);
    for (x, w) in basis.quadrature(&quad.triangle) {
        basis.eval_with_grad(x, &mut v, &mut g);
        let kinv = 1.0 / kappa(x);
        for c in 0..n {
            for d in 0..n {
                a[(c, d)] += w * kinv * v[c] * v[d];
                bx[(c, d)] += w * g[d][0] * v[c];
                by[(c, d)] += w * g[d][1] * v[c];
            }
        }
    }

    let mut s = DMatrix::zeros(n, n);
    let mut c_mat = DMatrix::zeros(3 * n, 3 * nf);
    let mut e_mat = DMatrix::zeros(3 * nf, 3 * n);
    let mut mu = vec![0.0; nf];
    for (i, face) in faces.iter().enumerate() {
        let nrm = [face.sign * face.edge.normal[0], face.sign * face.edge.normal[1]];
        for (&t, &wt) in quad.edge.points.iter().zip(&quad.edge.weights) {
            let x = face.edge.point(t);
            let w = wt * face.edge.length;
            basis.eval(x, &mut v);
            face.edge.basis(k, t, &mut mu);
            for c in 0..n {
                for d in 0..n {
                    s[(c, d)] += w * tau * v[c] * v[d];
                }
                for j in 0..nf {
                    let col = i * nf + j;
                    let pm = w * v[c] * mu[j];
                    c_mat[(c, col)] -= pm * nrm[0];
                    c_mat[(n + c, col)] -= pm * nrm[1];
                    c_mat[(2 * n + c, col)] += tau * pm;
                    e_mat[(col, c)] += pm * nrm[0];
                    e_mat[(col, n + c)] += pm * nrm[1];
                    e_mat[(col, 2 * n + c)] += tau * pm;
                }
            }
        }
    }

    let mut k_mat = DMatrix::zeros(3 * n, 3 * n);
    k_mat.view_mut((0, 0), (n, n)).copy_from(&a);
    k_mat.view_mut((n, n), (n, n)).copy_from(&a);
    k_mat.view_mut((0, 2 * n), (n, n)).copy_from(&(-bx.transpose()));
    k_mat.view_mut((n, 2 * n), (n, n)).copy_from(&(-by.transpose()));
    k_mat.view_mut((2 * n, 0), (n, n)).copy_from(&bx);
    k_mat.view_mut((2 * n, n), (n, n)).copy_from(&by);
    k_mat.view_mut((2 * n, 2 * n), (n, n)).copy_from(&s);

    if !(tau > 0.0) || geom.det() <= 0.0 {
        return Err(HdgError::SingularLocalSystem { element });
    }
    let scale: f64 = k_mat.amax();
    let lu = k_mat.clone().lu();
    if lu.u().diagonal().iter().any(|d| d.abs() <= 1e-13 * scale) {
        return Err(HdgError::SingularLocalSystem { element });
    }
    let rhat = lu.solve(&c_mat).ok_or(HdgError::SingularLocalSystem { element })?;
    let mut src = DMatrix::zeros(3 * n, n);
    src.view_mut((2 * n, 0), (n, n)).fill_with_identity();
    let rsrc = lu.solve(&src).ok_or(HdgError::SingularLocalSystem { element })?;

    let mut ahat = &e_mat * &rhat;
    for i in 0..3 * nf {
        ahat[(i, i)] -= tau;
    }
    let esrc = &e_mat * &rsrc;
    Ok(LocalOperator {
        n,
        nf,
        rhat,
        rsrc,
        ahat,
        esrc,
        k_mat,
        c_mat,
        e_mat,
    })
}
