//! Element-local post-processing `u*_h in P_{k+1}(T)`:
//!
//! ```text
//! (kappa grad u*, grad w)_T + (F(u*), w)_T = -(q_h, grad w)_T + (F(u_h), w)_T
//! (u*, 1)_T = (u_h, 1)_T
//! ```
//!
//! solved by the fixed point `zeta -> z` that freezes `F(zeta)`. In the
//! orthonormal hierarchical basis the mean condition fixes the constant
//! coefficient, and the gradient equation is imposed for the non-constant
//! test functions.

use nalgebra::{DMatrix, DVector};

use crate::error::{HdgError, Result};
use crate::fe::basis::RefBasis;
use crate::fe::element::{ElementBasis, ElementGeometry};
use crate::fe::quadrature::TriangleRule;
use crate::geometry::mesh::Triangulation;
use crate::geometry::problem::CurvedProblem;
use crate::hdg::state::HdgState;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITERS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct LocalPostprocess {
    pub coef: Vec<f64>,
    /// Inner increments `||z^{m+1} - z^m||_T`.
    pub increments: Vec<f64>,
}

impl LocalPostprocess {
    pub fn iterations(&self) -> usize {
        self.increments.len()
    }

    pub fn contraction_factor(&self) -> f64 {
        self.increments
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .fold(0.0, f64::max)
    }
}

/// Summary over all elements.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PostprocessStats {
    pub max_iterations: usize,
    pub max_factor: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn local_postprocess(
    geom: ElementGeometry,
    q: &[f64],
    u: &[f64],
    k: usize,
    problem: &CurvedProblem,
    tol: f64,
    max_iters: usize,
    element: usize,
) -> Result<LocalPostprocess> {
    let star = RefBasis::new(k + 1);
    let low = RefBasis::new(k);
    let bs = ElementBasis::new(geom, &star);
    let bl = ElementBasis::new(geom, &low);
    let m = bs.len();
    let n = bl.len();
    let rule = TriangleRule::with_exactness(2 * k + 4);

    struct Node {
        x: [f64; 2],
        w: f64,
        v: Vec<f64>,
    }
    let mut stiff = DMatrix::zeros(m - 1, m - 1);
    let mut fixed = DVector::zeros(m - 1);
    let mut nodes = Vec::new();
    let (mut v, mut g) = (vec![0.0; m], vec![[0.0; 2]; m]);
    let mut vl = vec![0.0; n];
    for (x, w) in bs.quadrature(&rule) {
        bs.eval_with_grad(x, &mut v, &mut g);
        bl.eval(x, &mut vl);
        let dot = |c: &[f64]| c.iter().zip(&vl).map(|(a, b)| a * b).sum::<f64>();
        let qh = [dot(&q[..n]), dot(&q[n..])];
        let uh = dot(u);
        let kap = problem.kappa(x);
        let fu = problem.source(uh, x);
        for i in 1..m {
            fixed[i - 1] += w * (-(qh[0] * g[i][0] + qh[1] * g[i][1]) + fu * v[i]);
            for j in 1..m {
                stiff[(i - 1, j - 1)] += w * kap * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
            }
        }
        nodes.push(Node { x, w, v: v.clone() });
    }
    let chol = stiff.cholesky().ok_or(HdgError::SingularLocalSystem { element })?;

    // injection of u_h as the starting guess
    let mut z: Vec<f64> = (0..m).map(|i| if i < n { u[i] } else { 0.0 }).collect();
    let mut increments = Vec::new();
    for _ in 0..max_iters {
        let mut rhs = fixed.clone();
        for node in &nodes {
            let zeta: f64 = z.iter().zip(&node.v).map(|(a, b)| a * b).sum();
            let f = node.w * problem.source(zeta, node.x);
            for i in 1..m {
                rhs[i - 1] -= f * node.v[i];
            }
        }
        let sol = chol.solve(&rhs);
        let mut next = vec![u[0]; 1];
        next.extend(sol.iter());
        let inc = next.iter().zip(&z).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let norm = next.iter().map(|a| a * a).sum::<f64>().sqrt();
        increments.push(inc);
        z = next;
        if inc <= tol * norm.max(1e-300) || (norm < 1e-14 && inc <= tol) {
            return Ok(LocalPostprocess { coef: z, increments });
        }
    }
    Err(HdgError::LocalNoConvergence {
        element,
        increment: increments.last().copied().unwrap_or(f64::NAN),
    })
}

/// Post-processes every element and stores `u*_h` in the state.
pub fn postprocess_all(tri: &Triangulation, problem: &CurvedProblem, state: &mut HdgState) -> Result<PostprocessStats> {
    postprocess_with(tri, problem, state, DEFAULT_TOL, DEFAULT_MAX_ITERS)
}

pub fn postprocess_with(
    tri: &Triangulation,
    problem: &CurvedProblem,
    state: &mut HdgState,
    tol: f64,
    max_iters: usize,
) -> Result<PostprocessStats> {
    let mut out = Vec::with_capacity(tri.num_elements() * crate::fe::basis::dim_pk(state.k + 1));
    let mut stats = PostprocessStats::default();
    for e in 0..tri.num_elements() {
        let r = local_postprocess(
            tri.element_geometry(e),
            state.q_elem(e),
            state.u_elem(e),
            state.k,
            problem,
            tol,
            max_iters,
            e,
        )?;
        stats.max_iterations = stats.max_iterations.max(r.iterations());
        stats.max_factor = stats.max_factor.max(r.contraction_factor());
        out.extend(r.coef);
    }
    state.ustar = Some(out);
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fe::element::Point;
    use crate::presets;

    const VERTS: [Point; 3] = [[0.1, 0.1], [0.4, 0.15], [0.2, 0.35]];

    fn project(k: usize, f: impl Fn(Point) -> f64) -> Vec<f64> {
        let r = RefBasis::new(k);
        let b = ElementBasis::new(ElementGeometry::new(VERTS), &r);
        b.project(b.len(), &TriangleRule::with_exactness(2 * k + 4), f)
    }

    #[test]
    fn linear_field_is_reproduced() {
        let p = presets::square_linear();
        for k in 1..=3 {
            let u = project(k, |x| 1.0 + 2.0 * x[0] - x[1]);
            let q: Vec<f64> = project(k, |_| -2.0).into_iter().chain(project(k, |_| 1.0)).collect();
            let r = local_postprocess(ElementGeometry::new(VERTS), &q, &u, k, &p, 1e-12, 50, 0).unwrap();
            let star = RefBasis::new(k + 1);
            let b = ElementBasis::new(ElementGeometry::new(VERTS), &star);
            for x in [[0.2, 0.2], [0.3, 0.18]] {
                assert!((b.evaluate(&r.coef, x) - (1.0 + 2.0 * x[0] - x[1])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn u_independent_source_needs_one_correction() {
        let p = presets::square_poly(2);
        let k = 2;
        let u = project(k, |x| x[0] * x[1]);
        // flux of x^2 y, so that u* differs from the injected u_h
        let q: Vec<f64> = project(k, |x| -2.0 * x[0] * x[1])
            .into_iter()
            .chain(project(k, |x| -x[0] * x[0]))
            .collect();
        let r = local_postprocess(ElementGeometry::new(VERTS), &q, &u, k, &p, 1e-12, 50, 0).unwrap();
        assert_eq!(r.iterations(), 2);
        assert!(r.increments[0] > 1e-3);
        assert_eq!(r.increments[1], 0.0);
    }

    #[test]
    fn mean_is_preserved_and_contraction_is_small() {
        let p = presets::disk_sine(1.0);
        let k = 1;
        let u = project(k, |x| (3.0 * x[0]).sin() + x[1]);
        let q: Vec<f64> = project(k, |x| -3.0 * (3.0 * x[0]).cos()).into_iter().chain(project(k, |_| -1.0)).collect();
        let r = local_postprocess(ElementGeometry::new(VERTS), &q, &u, k, &p, 1e-12, 50, 0).unwrap();
        assert_eq!(r.coef[0], u[0]);
        let h = ElementGeometry::new(VERTS).diameter();
        assert!(r.contraction_factor() <= p.lipschitz * h * h, "{}", r.contraction_factor());
    }

    #[test]
    fn too_few_iterations_is_reported() {
        let p = presets::disk_sine(1.0);
        let u = project(1, |x| x[0]);
        let q = vec![0.0; 6];
        let r = local_postprocess(ElementGeometry::new(VERTS), &q, &u, 1, &p, 1e-30, 2, 4);
        assert!(matches!(r, Err(HdgError::LocalNoConvergence { element: 4, .. })));
    }
}
