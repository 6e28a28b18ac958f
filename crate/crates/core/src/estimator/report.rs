//! Residual a posteriori estimator.

use crate::fe::basis::RefBasis;
use crate::fe::element::{ElementBasis, Point};
use crate::fe::extension::segment_flux_integral;
use crate::fe::norms::{error_norms, ErrorNorms};
use crate::fe::quadrature::{QuadratureSet, TriangleRule};
use crate::geometry::mesh::Triangulation;
use crate::geometry::problem::CurvedProblem;
use crate::geometry::transfer::TransferMap;
use crate::hdg::state::HdgState;

pub const TERM_NAMES: [&str; 5] = ["volume", "gradient", "flux_jump", "scalar_jump", "boundary"];

/// Squared contributions to `eta_T^2`, in the order of [`TERM_NAMES`].
pub type Terms = [f64; 5];

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorReport {
    pub terms: Vec<Terms>,
    /// `eta_T^2`.
    pub eta_sq: Vec<f64>,
    /// `osc_T^2 = h_T^2 ||F(u*) - P_W F(u*)||_T^2`.
    pub osc_sq: Vec<f64>,
    pub eta: f64,
    pub osc: f64,
    pub errors: Option<ErrorNorms>,
}

impl EstimatorReport {
    pub fn eta_t(&self, e: usize) -> f64 {
        self.eta_sq[e].sqrt()
    }

    pub fn len(&self) -> usize {
        self.eta_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta_sq.is_empty()
    }

    /// `eta / e_h`.
    pub fn effectivity(&self) -> Option<f64> {
        self.errors.map(|e| self.eta / e.e_h())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Evaluates the estimator. Requires `state.ustar`. When the problem has an
/// exact solution the error norms are attached.
pub fn estimate(tri: &Triangulation, tmap: &TransferMap, state: &HdgState, problem: &CurvedProblem) -> EstimatorReport {
    let k = state.k;
    let low = RefBasis::new(k);
    let star = RefBasis::new(k + 1);
    let n = low.len();
    let m = star.len();
    let rule = TriangleRule::with_exactness(2 * k + 6);
    let edge_rule = QuadratureSet::new(k + 1).edge;
    let scheme = QuadratureSet::new(k);
    let ustar = state.ustar.as_ref().expect("estimate requires the post-processed field");
    let ne = tri.num_elements();
    let mut terms = vec![[0.0; 5]; ne];
    let mut osc_sq = vec![0.0; ne];

    let (mut vl, mut gl) = (vec![0.0; n], vec![[0.0; 2]; n]);
    let (mut vs, mut gs) = (vec![0.0; m], vec![[0.0; 2]; m]);
    for e in 0..ne {
        let geom = tri.element_geometry(e);
        let bl = ElementBasis::new(geom, &low);
        let bs = ElementBasis::new(geom, &star);
        let qc = state.q_elem(e);
        let us = &ustar[m * e..m * (e + 1)];
        let h = geom.diameter();
        let pts = bl.quadrature(&rule);

        // P_W F(u*)
        let mut fvals = Vec::with_capacity(pts.len());
        let mut pf = vec![0.0; n];
        for &(x, w) in &pts {
            bs.eval(x, &mut vs);
            let f = problem.source(dot(us, &vs), x);
            bl.eval(x, &mut vl);
            for c in 0..n {
                pf[c] += w * f * vl[c];
            }
            fvals.push(f);
        }
        let (mut vol, mut grad, mut osc) = (0.0, 0.0, 0.0);
        for (&(x, w), &f) in pts.iter().zip(&fvals) {
            bl.eval_with_grad(x, &mut vl, &mut gl);
            bs.eval_with_grad(x, &mut vs, &mut gs);
            let pfx = dot(&pf, &vl);
            let div_q: f64 = (0..n).map(|c| qc[c] * gl[c][0] + qc[n + c] * gl[c][1]).sum();
            vol += w * (pfx - div_q).powi(2);
            osc += w * (f - pfx).powi(2);
            let q = [dot(&qc[..n], &vl), dot(&qc[n..], &vl)];
            let gu = (0..m).fold([0.0; 2], |acc, c| [acc[0] + us[c] * gs[c][0], acc[1] + us[c] * gs[c][1]]);
            let kap = problem.kappa(x);
            let (sk, isk) = (kap.sqrt(), 1.0 / kap.sqrt());
            grad += w * ((sk * gu[0] + isk * q[0]).powi(2) + (sk * gu[1] + isk * q[1]).powi(2));
        }
        terms[e][0] = h * h * vol;
        terms[e][1] = grad;
        osc_sq[e] = h * h * osc;
    }

    for (f, face) in tri.faces.iter().enumerate() {
        let Some((right, _)) = face.right else { continue };
        let left = face.left;
        let edge = tri.face_geometry(f);
        let bl_l = ElementBasis::new(tri.element_geometry(left), &low);
        let bl_r = ElementBasis::new(tri.element_geometry(right), &low);
        let bs_l = ElementBasis::new(tri.element_geometry(left), &star);
        let bs_r = ElementBasis::new(tri.element_geometry(right), &star);
        let (ql, qr) = (state.q_elem(left), state.q_elem(right));
        let (ul, ur) = (&ustar[m * left..m * (left + 1)], &ustar[m * right..m * (right + 1)]);
        let (mut jq, mut ju) = (0.0, 0.0);
        for (&t, &wt) in edge_rule.points.iter().zip(&edge_rule.weights) {
            let x: Point = edge.point(t);
            let w = wt * edge.length;
            let qn = |b: &ElementBasis<'_>, c: &[f64]| {
                let mut v = vec![0.0; n];
                b.eval(x, &mut v);
                dot(&c[..n], &v) * edge.normal[0] + dot(&c[n..], &v) * edge.normal[1]
            };
            // left normal is +normal, right is -normal
            jq += w * (qn(&bl_l, ql) - qn(&bl_r, qr)).powi(2);
            ju += w * (bs_l.evaluate(ul, x) - bs_r.evaluate(ur, x)).powi(2);
        }
        let (tq, tu) = (edge.length * jq, ju / edge.length);
        for e in [left, right] {
            terms[e][2] += tq;
            terms[e][3] += tu;
        }
    }

    for ft in &tmap.faces {
        let e = ft.element;
        let edge = tri.face_geometry(ft.face);
        let bl = ElementBasis::new(tri.element_geometry(e), &low);
        let bs = ElementBasis::new(tri.element_geometry(e), &star);
        let us = &ustar[m * e..m * (e + 1)];
        let mut acc = 0.0;
        for (node, &wt) in ft.nodes.iter().zip(&tmap.rule.weights) {
            let phi_h = problem.g(node.anchor)
                + segment_flux_integral(
                    &bl,
                    state.q_elem(e),
                    node.x,
                    ft.normal,
                    node.length,
                    |y| problem.kappa(y),
                    &scheme.segment,
                );
            acc += wt * edge.length * (phi_h - bs.evaluate(us, node.x)).powi(2);
        }
        terms[e][4] += acc / edge.length;
    }

    let eta_sq: Vec<f64> = terms.iter().map(|t| t.iter().sum()).collect();
    let eta = eta_sq.iter().sum::<f64>().sqrt();
    let osc = osc_sq.iter().sum::<f64>().sqrt();
    let errors = problem.exact.as_ref().map(|ex| error_norms(tri, tmap, problem, state, ex));
    EstimatorReport {
        terms,
        eta_sq,
        osc_sq,
        eta,
        osc,
        errors,
    }
}
