//! Runtime audit of the geometric assumptions on boundary faces.
//!
//! For every boundary face the audit reports `r_e = H_e / h_e`, the
//! S3 quantity `tau_max H_e / kappa_min` and the S4 quantity
//! `kappa_max / kappa_min r_e^3 (C_ext C_inv)^2`. The constants `C_ext` and
//! `C_inv` are the square roots of the largest generalized eigenvalues of
//! small mass/stiffness pencils built from an orthonormal `P_k(T^e)` basis.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::Result;
use crate::fe::basis::RefBasis;
use crate::fe::element::ElementBasis;
use crate::fe::quadrature::{LineRule, TriangleRule};
use crate::geometry::mesh::Triangulation;
use crate::geometry::problem::CurvedProblem;
use crate::geometry::transfer::{path_length, TransferMap};

/// Default bound for `r_e`.
pub const DEFAULT_RATIO_BOUND: f64 = 1.0;

/// Gauss points across the face when integrating over the extension patch.
const PATCH_FACE_POINTS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct FaceAudit {
    pub face: usize,
    pub ratio: f64,
    pub h_perp: f64,
    pub big_h_perp: f64,
    pub c_ext: f64,
    pub c_inv: f64,
    /// `tau_max H_e / kappa_min`, required `<= 1/3`.
    pub s3_value: f64,
    /// `kappa_max / kappa_min r_e^3 (C_ext C_inv)^2`, required `<= 1`.
    pub s4_value: f64,
    pub pass_s2: bool,
    pub pass_s3: bool,
    pub pass_s4: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    pub faces: Vec<FaceAudit>,
    pub max_ratio: f64,
    pub ratio_bound: f64,
    pub all_pass: bool,
}

impl AssumptionReport {
    /// Recomputes every pass flag from the reported numbers.
    pub fn recheck(&self) -> bool {
        self.faces.iter().all(|f| {
            f.pass_s2 == (f.ratio <= self.ratio_bound)
                && f.pass_s3 == (f.s3_value <= 1.0 / 3.0)
                && f.pass_s4 == (f.s4_value <= 1.0)
        }) && self.all_pass == self.faces.iter().all(|f| f.pass_s2 && f.pass_s3 && f.pass_s4)
    }

    /// Smallest margin `1/3 - s3` over faces (positive when S3 holds).
    pub fn s3_margin(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| 1.0 / 3.0 - f.s3_value)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn s4_margin(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| 1.0 - f.s4_value)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_gap(&self) -> f64 {
        self.faces.iter().map(|f| f.big_h_perp).fold(0.0, f64::max)
    }
}

fn largest_eigenvalue(m: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m).eigenvalues.iter().copied().fold(0.0, f64::max)
}

/// `(C_ext, C_inv)` for one boundary face.
pub fn extension_constants(
    tri: &Triangulation,
    tmap: &TransferMap,
    problem: &CurvedProblem,
    face: usize,
    degree_k: usize,
) -> Result<(f64, f64)> {
    let ft = tmap.for_face(face).expect("boundary face");
    let reference = RefBasis::new(degree_k);
    let basis = ElementBasis::new(tri.element_geometry(ft.element), &reference);
    let n = basis.len();
    let normal = ft.normal;

    // inverse constant: sup ||d_n p||_T / ||p||_T with M_T = I
    let rule = TriangleRule::with_exactness(2 * degree_k);
    let mut stiff = DMatrix::zeros(n, n);
    let (mut v, mut g) = (vec![0.0; n], vec![[0.0; 2]; n]);
    for (x, w) in basis.quadrature(&rule) {
        basis.eval_with_grad(x, &mut v, &mut g);
        let dn: Vec<f64> = g.iter().map(|d| d[0] * normal[0] + d[1] * normal[1]).collect();
        for i in 0..n {
            for j in 0..n {
                stiff[(i, j)] += w * dn[i] * dn[j];
            }
        }
    }
    let c_inv = ft.h_perp * largest_eigenvalue(stiff).sqrt();

    if ft.big_h_perp == 0.0 {
        return Ok((0.0, c_inv));
    }
    let geom = tri.face_geometry(face);
    let across = LineRule::gauss(PATCH_FACE_POINTS);
    let along = LineRule::gauss(degree_k + 1);
    let mut mass = DMatrix::zeros(n, n);
    for (&t, &wt) in across.points.iter().zip(&across.weights) {
        let x = geom.point(t);
        let l = path_length(problem, x, normal, 2.0 * geom.length)?;
        if l == 0.0 {
            continue;
        }
        for (&s, &ws) in along.points.iter().zip(&along.weights) {
            let y = [x[0] + s * l * normal[0], x[1] + s * l * normal[1]];
            basis.eval(y, &mut v);
            let w = geom.length * wt * l * ws;
            for i in 0..n {
                for j in 0..n {
                    mass[(i, j)] += w * v[i] * v[j];
                }
            }
        }
    }
    let c_ext = (largest_eigenvalue(mass) / ft.ratio).sqrt();
    Ok((c_ext, c_inv))
}

pub fn audit_assumptions(
    tri: &Triangulation,
    tmap: &TransferMap,
    problem: &CurvedProblem,
    tau_max: f64,
    degree_k: usize,
) -> Result<AssumptionReport> {
    audit_with_bound(tri, tmap, problem, tau_max, degree_k, DEFAULT_RATIO_BOUND)
}

pub fn audit_with_bound(
    tri: &Triangulation,
    tmap: &TransferMap,
    problem: &CurvedProblem,
    tau_max: f64,
    degree_k: usize,
    ratio_bound: f64,
) -> Result<AssumptionReport> {
    let (kmin, kmax) = problem.kappa_bounds;
    let mut faces = Vec::with_capacity(tmap.faces.len());
    for ft in &tmap.faces {
        let (c_ext, c_inv) = extension_constants(tri, tmap, problem, ft.face, degree_k)?;
        let s3_value = tau_max * ft.big_h_perp / kmin;
        let s4_value = kmax / kmin * ft.ratio.powi(3) * (c_ext * c_inv).powi(2);
        faces.push(FaceAudit {
            face: ft.face,
            ratio: ft.ratio,
            h_perp: ft.h_perp,
            big_h_perp: ft.big_h_perp,
            c_ext,
            c_inv,
            s3_value,
            s4_value,
            pass_s2: ft.ratio <= ratio_bound,
            pass_s3: s3_value <= 1.0 / 3.0,
            pass_s4: s4_value <= 1.0,
        });
    }
    let all_pass = faces.iter().all(|f| f.pass_s2 && f.pass_s3 && f.pass_s4);
    Ok(AssumptionReport {
        faces,
        max_ratio: tmap.max_ratio,
        ratio_bound,
        all_pass,
    })
}
