//! Error norms against an exact solution.

use super::basis::{dim_pk, RefBasis};
use super::element::ElementBasis;
use super::extension::segment_flux_integral;
use super::quadrature::{LineRule, QuadratureSet};
use crate::geometry::mesh::Triangulation;
use crate::geometry::problem::{CurvedProblem, ExactSolution};
use crate::geometry::transfer::TransferMap;
use crate::hdg::state::HdgState;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ErrorNorms {
    /// `||u - u_h||`.
    pub u: f64,
    /// `||kappa^{-1/2} (q - q_h)||`.
    pub q: f64,
    /// `||u - u*_h||` (0 when no post-processing is stored).
    pub ustar: f64,
    /// `||h_e^{-1/2} (phi - phi_h)||` over the mesh boundary.
    pub boundary: f64,
}

impl ErrorNorms {
    /// `e_h = (||kappa^{-1/2}(q - q_h)||^2 + ||u - u*_h||^2 + ||h^{-1/2}(phi - phi_h)||^2)^{1/2}`.
    pub fn e_h(&self) -> f64 {
        (self.q * self.q + self.ustar * self.ustar + self.boundary * self.boundary).sqrt()
    }
}

/// Per-element squared errors `||kappa^{-1/2}(q - q_h)||_T^2 + ||u - u*_h||_T^2`.
pub fn local_errors_squared(
    tri: &Triangulation,
    problem: &CurvedProblem,
    state: &HdgState,
    exact: &ExactSolution,
) -> Vec<f64> {
    let k = state.k;
    let quad = QuadratureSet::for_errors(k);
    let low = RefBasis::new(k);
    let star = RefBasis::new(k + 1);
    let n = low.len();
    (0..tri.num_elements())
        .map(|e| {
            let geom = tri.element_geometry(e);
            let bl = ElementBasis::new(geom, &low);
            let bs = ElementBasis::new(geom, &star);
            let qc = state.q_elem(e);
            let us = state.ustar_elem(e);
            bl.quadrature(&quad.triangle)
                .into_iter()
                .map(|(x, w)| {
                    let q = (exact.q)(x);
                    let dq = [q[0] - bl.evaluate(&qc[..n], x), q[1] - bl.evaluate(&qc[n..], x)];
                    let du = us.map_or(0.0, |c| (exact.u)(x) - bs.evaluate(c, x));
                    w * ((dq[0] * dq[0] + dq[1] * dq[1]) / problem.kappa(x) + du * du)
                })
                .sum()
        })
        .collect()
}

/// Squared boundary errors `h_e^{-1} ||phi - phi_h||_e^2` per mesh face
/// (zero on interior faces), with `phi` from the exact flux.
pub fn boundary_errors_squared(
    tri: &Triangulation,
    tmap: &TransferMap,
    problem: &CurvedProblem,
    state: &HdgState,
    exact: &ExactSolution,
) -> Vec<f64> {
    let k = state.k;
    let low = RefBasis::new(k);
    let scheme = QuadratureSet::new(k);
    let fine = LineRule::gauss(k + 8);
    let mut out = vec![0.0; tri.num_faces()];
    for ft in &tmap.faces {
        let basis = ElementBasis::new(tri.element_geometry(ft.element), &low);
        let len = tri.face_geometry(ft.face).length;
        let mut acc = 0.0;
        for (node, &wt) in ft.nodes.iter().zip(&tmap.rule.weights) {
            let g = problem.g(node.anchor);
            let phi_h = g + segment_flux_integral(
                &basis,
                state.q_elem(ft.element),
                node.x,
                ft.normal,
                node.length,
                |y| problem.kappa(y),
                &scheme.segment,
            );
            let phi = g + exact_flux_integral(problem, exact, node.x, ft.normal, node.length, &fine);
            acc += wt * len * (phi - phi_h).powi(2);
        }
        out[ft.face] = acc / len;
    }
    out
}

fn exact_flux_integral(
    problem: &CurvedProblem,
    exact: &ExactSolution,
    x: [f64; 2],
    normal: [f64; 2],
    length: f64,
    rule: &LineRule,
) -> f64 {
    rule.points
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &w)| {
            let y = [x[0] + s * length * normal[0], x[1] + s * length * normal[1]];
            let q = (exact.q)(y);
            w * length * (q[0] * normal[0] + q[1] * normal[1]) / problem.kappa(y)
        })
        .sum()
}

pub fn error_norms(
    tri: &Triangulation,
    tmap: &TransferMap,
    problem: &CurvedProblem,
    state: &HdgState,
    exact: &ExactSolution,
) -> ErrorNorms {
    let k = state.k;
    let quad = QuadratureSet::for_errors(k);
    let low = RefBasis::new(k);
    let n = dim_pk(k);
    let mut eu = 0.0;
    for e in 0..tri.num_elements() {
        let b = ElementBasis::new(tri.element_geometry(e), &low);
        let uc = state.u_elem(e);
        for (x, w) in b.quadrature(&quad.triangle) {
            eu += w * ((exact.u)(x) - b.evaluate(&uc[..n], x)).powi(2);
        }
    }
    // q and u* errors per element, recombined
    let (mut eq, mut es) = (0.0, 0.0);
    let star = RefBasis::new(k + 1);
    for e in 0..tri.num_elements() {
        let geom = tri.element_geometry(e);
        let bl = ElementBasis::new(geom, &low);
        let bs = ElementBasis::new(geom, &star);
        let qc = state.q_elem(e);
        let us = state.ustar_elem(e);
        for (x, w) in bl.quadrature(&quad.triangle) {
            let q = (exact.q)(x);
            let dq = [q[0] - bl.evaluate(&qc[..n], x), q[1] - bl.evaluate(&qc[n..], x)];
            eq += w * (dq[0] * dq[0] + dq[1] * dq[1]) / problem.kappa(x);
            if let Some(c) = us {
                es += w * ((exact.u)(x) - bs.evaluate(c, x)).powi(2);
            }
        }
    }
    let eb: f64 = boundary_errors_squared(tri, tmap, problem, state, exact).iter().sum();
    ErrorNorms {
        u: eu.sqrt(),
        q: eq.sqrt(),
        ustar: es.sqrt(),
        boundary: eb.sqrt(),
    }
}
