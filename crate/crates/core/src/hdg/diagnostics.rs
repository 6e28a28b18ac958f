//! Residuals of the discrete equations. Face and segment integrals use
//! richer rules than the ones that built the system; the source moment uses
//! the scheme's volume rule.

use crate::fe::basis::RefBasis;
use crate::fe::element::ElementBasis;
use crate::fe::extension::segment_flux_integral;
use crate::fe::quadrature::QuadratureSet;
use crate::geometry::mesh::Triangulation;
use crate::geometry::problem::CurvedProblem;
use crate::geometry::transfer::TransferMap;
use crate::hdg::state::HdgState;

#[derive(Debug, Clone, PartialEq)]
pub struct Residuals {
    /// `<qhat.n, 1>_{dT} - (F(u_h), 1)_T` per element.
    pub conservation: Vec<f64>,
    /// Largest `|sum_T <qhat.n, mu_a>_e|` per interior face (0 on the boundary).
    pub transmission: Vec<f64>,
    /// Largest `|<uhat - phi_h, mu_a>_e|` per boundary face (0 inside).
    pub boundary: Vec<f64>,
}

impl Residuals {
    pub fn max_conservation(&self) -> f64 {
        self.conservation.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn max_transmission(&self) -> f64 {
        self.transmission.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_boundary(&self) -> f64 {
        self.boundary.iter().copied().fold(0.0, f64::max)
    }
}

pub fn residuals(tri: &Triangulation, tmap: &TransferMap, problem: &CurvedProblem, state: &HdgState) -> Residuals {
    let k = state.k;
    let nf = k + 1;
    let tau = state.tau;
    let quad = QuadratureSet::for_errors(k);
    let scheme = QuadratureSet::new(k);
    let reference = RefBasis::new(k);
    let n = reference.len();
    let mut conservation = vec![0.0; tri.num_elements()];
    let mut face_flux = vec![0.0; tri.num_faces() * nf];
    let mut mu = vec![0.0; nf];

    for e in 0..tri.num_elements() {
        let basis = ElementBasis::new(tri.element_geometry(e), &reference);
        let (qc, uc) = (state.q_elem(e), state.u_elem(e));
        let mut cons = 0.0;
        for (x, w) in basis.quadrature(&scheme.triangle) {
            cons -= w * problem.source(basis.evaluate(uc, x), x);
        }
        for &f in &tri.element_faces[e] {
            let edge = tri.face_geometry(f);
            let sign = tri.normal_sign(f, e);
            let nrm = [sign * edge.normal[0], sign * edge.normal[1]];
            let uh = state.uhat_face(f);
            for (&t, &wt) in quad.edge.points.iter().zip(&quad.edge.weights) {
                let x = edge.point(t);
                let w = wt * edge.length;
                edge.basis(k, t, &mut mu);
                let qx = [basis.evaluate(&qc[..n], x), basis.evaluate(&qc[n..], x)];
                let ux = basis.evaluate(uc, x);
                let uhx: f64 = uh.iter().zip(&mu).map(|(a, b)| a * b).sum();
                let flux = qx[0] * nrm[0] + qx[1] * nrm[1] + tau * (ux - uhx);
                cons += w * flux;
                for a in 0..nf {
                    face_flux[f * nf + a] += w * flux * mu[a];
                }
            }
        }
        conservation[e] = cons;
    }

    let mut transmission = vec![0.0; tri.num_faces()];
    for (f, face) in tri.faces.iter().enumerate() {
        if !face.is_boundary() {
            transmission[f] = face_flux[f * nf..(f + 1) * nf].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        }
    }

    let mut boundary = vec![0.0; tri.num_faces()];
    for ft in &tmap.faces {
        let basis = ElementBasis::new(tri.element_geometry(ft.element), &reference);
        let edge = tri.face_geometry(ft.face);
        let uh = state.uhat_face(ft.face);
        let mut res = vec![0.0; nf];
        for (node, &wt) in ft.nodes.iter().zip(&tmap.rule.weights) {
            edge.basis(k, node.t, &mut mu);
            let phi = problem.g(node.anchor)
                + segment_flux_integral(
                    &basis,
                    state.q_elem(ft.element),
                    node.x,
                    ft.normal,
                    node.length,
                    |y| problem.kappa(y),
                    &quad.segment,
                );
            let uhx: f64 = uh.iter().zip(&mu).map(|(a, b)| a * b).sum();
            for a in 0..nf {
                res[a] += wt * edge.length * (uhx - phi) * mu[a];
            }
        }
        boundary[ft.face] = res.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    }

    Residuals {
        conservation,
        transmission,
        boundary,
    }
}
