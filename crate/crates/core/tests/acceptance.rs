//! Acceptance criteria 1 to 10. Every criterion prints one PASS/FAIL line to
//! stdout (bypassing the test harness capture) and then asserts.

use std::io::Write as _;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use hdgcurve::estimator::{adapt_loop, solve_and_estimate, AdaptConfig, Solution};
use hdgcurve::fe::basis::RefBasis;
use hdgcurve::fe::element::{EdgeGeometry, ElementBasis, ElementGeometry, Point};
use hdgcurve::fe::extension::segment_flux_integral;
use hdgcurve::fe::norms::{boundary_errors_squared, local_errors_squared};
use hdgcurve::fe::projection::hdg_project;
use hdgcurve::fe::quadrature::{QuadratureSet, TriangleRule};
use hdgcurve::geometry::audit::audit_assumptions;
use hdgcurve::geometry::mesh::{build_interior_mesh, Triangulation};
use hdgcurve::geometry::problem::{CurvedProblem, Domain};
use hdgcurve::geometry::refine::refine_uniform;
use hdgcurve::geometry::transfer::{construct_transfer_map, TransferMap};
use hdgcurve::hdg::{linearized_contraction, picard_solve, residuals, Discretization, PicardOptions};
use hdgcurve::presets;
use nalgebra::{DMatrix, DVector};

// Tolerances and thresholds of the criteria.
const EXACT_TOL: f64 = 1e-9;
const ESTIMATOR_ZERO_TOL: f64 = 1e-10;
const C1_RUNTIME: Duration = Duration::from_secs(10);
const C2_RUNTIME: Duration = Duration::from_secs(180);
const C2_RATE_SLACK: (f64, f64) = (0.8, 1.3);
const C3_RATE_SLACK: f64 = 1.4;
const C4_ITER_SPREAD: usize = 2;
const C4_RATIO_BAND: (f64, f64) = (1.5, 2.5);
const C5_TOL: f64 = 1e-9;
const C6_TOL: f64 = 1e-10;
const C7_EFFECTIVITY_SPREAD: f64 = 3.0;
const C7_PERCENTILE_SPREAD: f64 = 2.0;
const C8_MIN_CYCLES: usize = 5;
const C8_DOF_RATIO: f64 = 0.7;
const C9_RATE_SLACK: f64 = 0.9;
const C9_REPRODUCTION_TOL: f64 = 1e-12;
const C10_GAP_ORDER: f64 = 1.8;

const CONTRACTION_STEPS: usize = 30;
const STUDY_LEVELS: usize = 4;
const STUDY_H0: f64 = 0.2;

fn verdict(criterion: usize, title: &str, pass: bool, detail: &str) {
    let line = format!(
        "{} criterion {criterion}: {title}: {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn eoc(e: &[f64], h: &[f64]) -> Vec<f64> {
    (1..e.len())
        .map(|i| (e[i - 1] / e[i]).ln() / (h[i - 1] / h[i]).ln())
        .collect()
}

fn fmt(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3}")).collect();
    format!("[{}]", parts.join(", "))
}

fn percentile_95(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let idx = ((v.len() as f64) * 0.95).ceil() as usize;
    v[idx.clamp(1, v.len()) - 1]
}

/// `eta_T^2 / (error^2 + osc^2)` on the patch of `T` and its face neighbors.
fn local_efficiency(tri: &Triangulation, problem: &CurvedProblem, sol: &Solution) -> Vec<f64> {
    let exact = problem.exact.as_ref().unwrap();
    let mut err = local_errors_squared(tri, problem, &sol.state, exact);
    let bnd = boundary_errors_squared(tri, &sol.tmap, problem, &sol.state, exact);
    for ft in &sol.tmap.faces {
        err[ft.element] += bnd[ft.face];
    }
    (0..tri.num_elements())
        .map(|e| {
            let patch: f64 = std::iter::once(e)
                .chain(tri.neighbors(e))
                .map(|t| err[t] + sol.report.osc_sq[t])
                .sum();
            sol.report.eta_sq[e] / patch
        })
        .collect()
}

struct Level {
    h: f64,
    e_u: f64,
    e_q: f64,
    e_ustar: f64,
    iterations: usize,
    factor: f64,
    /// Power-iteration estimate of the contraction factor of `J`.
    rho: f64,
    effectivity: f64,
    efficiency_p95: f64,
    conservation: f64,
    transmission: f64,
}

struct Study {
    levels: Vec<Level>,
    elapsed: Duration,
}

fn run_study(k: usize, scale: f64) -> Study {
    let start = Instant::now();
    let problem = presets::disk_sine(scale);
    let mut tri = build_interior_mesh(&problem, STUDY_H0).unwrap();
    let mut levels = Vec::new();
    for level in 0..STUDY_LEVELS {
        if level > 0 {
            tri = refine_uniform(&tri, &problem).unwrap();
        }
        let sol = solve_and_estimate(&tri, &problem, k, 1.0, &PicardOptions::default()).unwrap();
        let errors = sol.report.errors.unwrap();
        let res = residuals(&tri, &sol.tmap, &problem, &sol.state);
        let disc = Discretization::new(&tri, &sol.tmap, &problem, k, 1.0).unwrap();
        let rho = linearized_contraction(&disc, &sol.state.u, CONTRACTION_STEPS).unwrap();
        drop(disc);
        levels.push(Level {
            h: tri.h_max(),
            e_u: errors.u,
            e_q: errors.q,
            e_ustar: errors.ustar,
            iterations: sol.trace.iterations(),
            factor: sol.trace.contraction_factor(),
            rho,
            effectivity: sol.report.effectivity().unwrap(),
            efficiency_p95: percentile_95(local_efficiency(&tri, &problem, &sol)),
            conservation: res.max_conservation(),
            transmission: res.max_transmission(),
        });
    }
    Study {
        levels,
        elapsed: start.elapsed(),
    }
}

fn study(k: usize) -> &'static Study {
    static K1: OnceLock<Study> = OnceLock::new();
    static K2: OnceLock<Study> = OnceLock::new();
    match k {
        1 => K1.get_or_init(|| run_study(1, 1.0)),
        2 => K2.get_or_init(|| run_study(2, 1.0)),
        _ => unreachable!(),
    }
}

fn half_scale_study() -> &'static Study {
    static HALF: OnceLock<Study> = OnceLock::new();
    HALF.get_or_init(|| run_study(1, 0.5))
}

fn column(s: &Study, f: impl Fn(&Level) -> f64) -> Vec<f64> {
    s.levels.iter().map(f).collect()
}

#[test]
fn criterion_01_polynomial_exactness() {
    let start = Instant::now();
    let mut worst_err: f64 = 0.0;
    let mut worst_eta: f64 = 0.0;
    for k in 1..=3 {
        for problem in [presets::square_linear(), presets::square_poly(k)] {
            let tri = build_interior_mesh(&problem, 0.25).unwrap();
            let sol = solve_and_estimate(&tri, &problem, k, 1.0, &PicardOptions::default()).unwrap();
            let e = sol.report.errors.unwrap();
            worst_err = worst_err.max(e.u).max(e.q).max(e.ustar);
            worst_eta = worst_eta.max(sol.report.eta).max(sol.report.osc);
        }
    }
    let elapsed = start.elapsed();
    let pass = worst_err <= EXACT_TOL && worst_eta <= ESTIMATOR_ZERO_TOL && elapsed < C1_RUNTIME;
    verdict(
        1,
        "polynomial exactness",
        pass,
        &format!(
            "max error {worst_err:.2e} (<= {EXACT_TOL:e}), max eta/osc {worst_eta:.2e} (<= {ESTIMATOR_ZERO_TOL:e}), {:.2} s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_02_a_priori_rates() {
    let mut pass = true;
    let mut detail = String::new();
    let mut elapsed = Duration::ZERO;
    for k in 1..=2 {
        let s = study(k);
        elapsed += s.elapsed;
        let h = column(s, |l| l.h);
        let ru = eoc(&column(s, |l| l.e_u), &h);
        let rq = eoc(&column(s, |l| l.e_q), &h);
        let (lo, hi) = (k as f64 + C2_RATE_SLACK.0, k as f64 + C2_RATE_SLACK.1);
        pass &= ru.iter().chain(&rq).all(|r| (lo..=hi).contains(r));
        detail += &format!("k={k}: EOC u {} q {} in [{lo}, {hi}]; ", fmt(&ru), fmt(&rq));
    }
    pass &= elapsed < C2_RUNTIME;
    detail += &format!("{:.1} s", elapsed.as_secs_f64());
    verdict(2, "a priori rates", pass, &detail);
}

#[test]
fn criterion_03_superconvergence() {
    let mut pass = true;
    let mut detail = String::new();
    for k in 1..=2 {
        let s = study(k);
        let r = eoc(&column(s, |l| l.e_ustar), &column(s, |l| l.h));
        let floor = k as f64 + C3_RATE_SLACK;
        pass &= r.iter().all(|&x| x >= floor);
        detail += &format!("k={k}: EOC u* {} (>= {floor}); ", fmt(&r));
    }
    verdict(3, "post-processing superconvergence", pass, detail.trim_end_matches("; "));
}

#[test]
fn criterion_04_picard_robustness() {
    let mut pass = true;
    let mut detail = String::new();
    for k in 1..=2 {
        let s = study(k);
        let its: Vec<usize> = s.levels.iter().map(|l| l.iterations).collect();
        let spread = its.iter().max().unwrap() - its.iter().min().unwrap();
        let factors = column(s, |l| l.factor);
        let rho = column(s, |l| l.rho);
        pass &= spread <= C4_ITER_SPREAD && factors.iter().chain(&rho).all(|&f| f > 0.0 && f < 1.0);
        detail += &format!(
            "k={k}: iterations {its:?}, increment ratios {}, operator factors {}; ",
            fmt(&factors),
            fmt(&rho)
        );
    }
    let full = column(study(1), |l| l.rho);
    let half = column(half_scale_study(), |l| l.rho);
    let ratios: Vec<f64> = full.iter().zip(&half).map(|(a, b)| a / b).collect();
    pass &= ratios.iter().all(|r| (C4_RATIO_BAND.0..=C4_RATIO_BAND.1).contains(r));
    detail += &format!("operator factor(L)/factor(L/2) {} in {C4_RATIO_BAND:?}", fmt(&ratios));
    verdict(4, "Picard robustness", pass, &detail);
}

/// Dense residual of the full coupled system in the unknowns
/// `[q_T, u_T]` per element followed by `uhat_F` per face.
struct Monolithic<'a> {
    tri: &'a Triangulation,
    tmap: &'a TransferMap,
    problem: &'a CurvedProblem,
    k: usize,
    tau: f64,
    basis: RefBasis,
    quad: QuadratureSet,
}

impl Monolithic<'_> {
    fn n(&self) -> usize {
        self.basis.len()
    }

    fn size(&self) -> usize {
        3 * self.n() * self.tri.num_elements() + (self.k + 1) * self.tri.num_faces()
    }

    fn face_offset(&self, f: usize) -> usize {
        3 * self.n() * self.tri.num_elements() + (self.k + 1) * f
    }

    fn residual(&self, x: &DVector<f64>) -> DVector<f64> {
        let (n, nf) = (self.n(), self.k + 1);
        let mut r = DVector::zeros(self.size());
        let mut v = vec![0.0; n];
        let mut g = vec![[0.0; 2]; n];
        let mut mu = vec![0.0; nf];
        for e in 0..self.tri.num_elements() {
            let b = ElementBasis::new(self.tri.element_geometry(e), &self.basis);
            let off = 3 * n * e;
            let qx: Vec<f64> = x.rows(off, n).iter().copied().collect();
            let qy: Vec<f64> = x.rows(off + n, n).iter().copied().collect();
            let uc: Vec<f64> = x.rows(off + 2 * n, n).iter().copied().collect();
            for (p, w) in b.quadrature(&self.quad.triangle) {
                b.eval_with_grad(p, &mut v, &mut g);
                let dot = |c: &[f64]| c.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
                let (qxv, qyv, uv) = (dot(&qx), dot(&qy), dot(&uc));
                let ik = 1.0 / self.problem.kappa(p);
                let f = self.problem.source(uv, p);
                for c in 0..n {
                    r[off + c] += w * (ik * qxv * v[c] - uv * g[c][0]);
                    r[off + n + c] += w * (ik * qyv * v[c] - uv * g[c][1]);
                    r[off + 2 * n + c] += w * (-(qxv * g[c][0] + qyv * g[c][1]) - f * v[c]);
                }
            }
            for &f in &self.tri.element_faces[e] {
                let edge = self.tri.face_geometry(f);
                let s = self.tri.normal_sign(f, e);
                let nrm = [s * edge.normal[0], s * edge.normal[1]];
                let fo = self.face_offset(f);
                for (&t, &wt) in self.quad.edge.points.iter().zip(&self.quad.edge.weights) {
                    let p = edge.point(t);
                    let w = wt * edge.length;
                    b.eval(p, &mut v);
                    edge.basis(self.k, t, &mut mu);
                    let dot = |c: &[f64]| c.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
                    let uh: f64 = (0..nf).map(|a| x[fo + a] * mu[a]).sum();
                    let flux = dot(&qx) * nrm[0] + dot(&qy) * nrm[1] + self.tau * (dot(&uc) - uh);
                    for c in 0..n {
                        r[off + c] += w * uh * v[c] * nrm[0];
                        r[off + n + c] += w * uh * v[c] * nrm[1];
                        r[off + 2 * n + c] += w * flux * v[c];
                    }
                    if !self.tri.faces[f].is_boundary() {
                        for a in 0..nf {
                            r[fo + a] += w * flux * mu[a];
                        }
                    }
                }
            }
        }
        for ft in &self.tmap.faces {
            let edge: EdgeGeometry = self.tri.face_geometry(ft.face);
            let b = ElementBasis::new(self.tri.element_geometry(ft.element), &self.basis);
            let off = 3 * n * ft.element;
            let q: Vec<f64> = x.rows(off, 2 * n).iter().copied().collect();
            let fo = self.face_offset(ft.face);
            for (node, &wt) in ft.nodes.iter().zip(&self.tmap.rule.weights) {
                let w = wt * edge.length;
                edge.basis(self.k, node.t, &mut mu);
                let uh: f64 = (0..nf).map(|a| x[fo + a] * mu[a]).sum();
                let phi = self.problem.g(node.anchor)
                    + segment_flux_integral(&b, &q, node.x, ft.normal, node.length, |y| self.problem.kappa(y), &self.quad.segment);
                for a in 0..nf {
                    r[fo + a] += w * (uh - phi) * mu[a];
                }
            }
        }
        r
    }

    /// Newton with a central-difference Jacobian.
    fn newton(&self) -> DVector<f64> {
        let m = self.size();
        let mut x = DVector::zeros(m);
        for _ in 0..20 {
            let r = self.residual(&x);
            let mut jac = DMatrix::zeros(m, m);
            for j in 0..m {
                let d = 1e-6 * (1.0 + x[j].abs());
                let (mut xp, mut xm) = (x.clone(), x.clone());
                xp[j] += d;
                xm[j] -= d;
                jac.set_column(j, &((self.residual(&xp) - self.residual(&xm)) / (2.0 * d)));
            }
            let dx = jac.full_piv_lu().solve(&(-r)).unwrap();
            x += &dx;
            if dx.amax() <= 1e-15 * (1.0 + x.amax()) {
                break;
            }
        }
        x
    }
}

fn square_2x2() -> Triangulation {
    let vertices: Vec<Point> = (0..9).map(|i| [(i % 3) as f64 * 0.5, (i / 3) as f64 * 0.5]).collect();
    let mut triangles = Vec::new();
    for j in 0..2 {
        for i in 0..2 {
            let v = 3 * j + i;
            triangles.push([v, v + 1, v + 4]);
            triangles.push([v, v + 4, v + 3]);
        }
    }
    Triangulation::new(vertices, triangles).unwrap()
}

fn hexagon_in_disk() -> Triangulation {
    let mut vertices: Vec<Point> = vec![[0.0, 0.0]];
    for i in 0..6 {
        let a = std::f64::consts::PI * i as f64 / 3.0;
        vertices.push([a.cos(), a.sin()]);
    }
    let triangles = (0..6).map(|i| [0, 1 + i, 1 + (i + 1) % 6]).collect();
    Triangulation::new(vertices, triangles).unwrap()
}

#[test]
fn criterion_05_monolithic_newton_oracle() {
    let square = presets::square_reaction(0.1);
    let mut disk = presets::square_reaction(0.1);
    disk.domain = Domain::unit_disk();
    let cases = [
        ("square", square, square_2x2()),
        ("disk", disk, hexagon_in_disk()),
    ];
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for (name, problem, tri) in &cases {
        assert!(tri.num_elements() <= 8);
        for k in 1..=2 {
            let tmap = construct_transfer_map(tri, problem, 2 * k + 2).unwrap();
            let disc = Discretization::new(tri, &tmap, problem, k, 1.0).unwrap();
            let opts = PicardOptions {
                rtol: 1e-14,
                max_iters: 200,
            };
            let (state, _) = picard_solve(&disc, None, &opts).unwrap();
            let mono = Monolithic {
                tri,
                tmap: &tmap,
                problem,
                k,
                tau: 1.0,
                basis: RefBasis::new(k),
                quad: QuadratureSet::new(k),
            };
            let x = mono.newton();
            let n = mono.n();
            let mut diff: f64 = 0.0;
            for e in 0..tri.num_elements() {
                let off = 3 * n * e;
                for i in 0..2 * n {
                    diff = diff.max((x[off + i] - state.q_elem(e)[i]).abs());
                }
                for i in 0..n {
                    diff = diff.max((x[off + 2 * n + i] - state.u_elem(e)[i]).abs());
                }
            }
            for f in 0..tri.num_faces() {
                let fo = mono.face_offset(f);
                for a in 0..=k {
                    diff = diff.max((x[fo + a] - state.uhat_face(f)[a]).abs());
                }
            }
            worst = worst.max(diff);
            detail += &format!("{name} ({} elements) k={k}: {diff:.2e}; ", tri.num_elements());
        }
    }
    detail += &format!("max coefficient difference {worst:.2e} (<= {C5_TOL:e})");
    verdict(5, "Picard limit equals monolithic Newton solve", worst <= C5_TOL, &detail);
}

#[test]
fn criterion_06_conservation_and_transmission() {
    let mut cons: f64 = 0.0;
    let mut trans: f64 = 0.0;
    for s in [study(1), study(2), half_scale_study()] {
        for l in &s.levels {
            cons = cons.max(l.conservation);
            trans = trans.max(l.transmission);
        }
    }
    for k in 1..=3 {
        for problem in [presets::square_linear(), presets::square_poly(k)] {
            let tri = build_interior_mesh(&problem, 0.25).unwrap();
            let sol = solve_and_estimate(&tri, &problem, k, 1.0, &PicardOptions::default()).unwrap();
            let r = residuals(&tri, &sol.tmap, &problem, &sol.state);
            cons = cons.max(r.max_conservation());
            trans = trans.max(r.max_transmission());
        }
    }
    verdict(
        6,
        "conservation and transmission",
        cons <= C6_TOL && trans <= C6_TOL,
        &format!("max conservation {cons:.2e}, max transmission {trans:.2e} (<= {C6_TOL:e})"),
    );
}

#[test]
fn criterion_07_estimator_effectivity() {
    let mut pass = true;
    let mut detail = String::new();
    for k in 1..=2 {
        let s = study(k);
        let eff = column(s, |l| l.effectivity);
        let p95 = column(s, |l| l.efficiency_p95);
        let spread = |v: &[f64]| v.iter().copied().fold(0.0, f64::max) / v.iter().copied().fold(f64::INFINITY, f64::min);
        let ok_eff = eff.iter().all(|e| e.is_finite() && *e > 0.0) && spread(&eff) <= C7_EFFECTIVITY_SPREAD;
        let ok_p95 = p95.iter().all(|e| e.is_finite() && *e > 0.0) && spread(&p95) <= C7_PERCENTILE_SPREAD;
        pass &= ok_eff && ok_p95;
        detail += &format!(
            "k={k}: effectivity {} (spread {:.2} <= {C7_EFFECTIVITY_SPREAD}), local 95th percentile {} (spread {:.2} <= {C7_PERCENTILE_SPREAD}); ",
            fmt(&eff),
            spread(&eff),
            fmt(&p95),
            spread(&p95)
        );
    }
    verdict(7, "estimator effectivity", pass, detail.trim_end_matches("; "));
}

#[test]
fn criterion_08_adaptivity() {
    let problem = presets::disk_peak();
    let (k, h0) = (1, 0.25);
    let mut tri = build_interior_mesh(&problem, h0).unwrap();
    let mut uniform = Vec::new();
    for level in 0..3 {
        if level > 0 {
            tri = refine_uniform(&tri, &problem).unwrap();
        }
        let sol = solve_and_estimate(&tri, &problem, k, 1.0, &PicardOptions::default()).unwrap();
        uniform.push((tri.num_faces() * (k + 1), sol.report.eta));
    }
    let (uniform_dofs, target) = *uniform.last().unwrap();
    let config = AdaptConfig {
        k,
        theta: 0.5,
        tol: target,
        initial_h: h0,
        max_dofs: 10 * uniform_dofs,
        max_cycles: 60,
        ..AdaptConfig::default()
    };
    let out = adapt_loop(&problem, &config).unwrap();
    let eta: Vec<f64> = out.cycles.iter().map(|c| c.eta).collect();
    let decreasing = eta.windows(2).all(|w| w[1] < w[0]);
    let last = out.cycles.last().unwrap();
    let reached = last.eta <= target;
    let ratio = last.dofs as f64 / uniform_dofs as f64;
    let pass = decreasing && eta.len() >= C8_MIN_CYCLES && reached && ratio <= C8_DOF_RATIO;
    verdict(
        8,
        "adaptivity",
        pass,
        &format!(
            "{} cycles, eta strictly decreasing: {decreasing}; eta {:.3e} reached with {} dofs vs {uniform_dofs} uniform (ratio {ratio:.3} <= {C8_DOF_RATIO})",
            eta.len(),
            last.eta,
            last.dofs
        ),
    );
}

#[test]
fn criterion_09_hdg_projection() {
    let u = |x: Point| (2.0 * x[0]).sin() * (1.5 * x[1]).cos() + x[0] * x[1];
    let q = |x: Point| {
        [
            -(2.0 * (2.0 * x[0]).cos() * (1.5 * x[1]).cos() + x[1]),
            -(-1.5 * (2.0 * x[0]).sin() * (1.5 * x[1]).sin() + x[0]),
        ]
    };
    let problem = presets::square_linear();
    // diagonal grids with halved spacing are nested and share one pattern
    let meshes: Vec<Triangulation> = [4.0, 8.0, 16.0, 32.0]
        .iter()
        .map(|&cells: &f64| build_interior_mesh(&problem, 2f64.sqrt() / cells * (1.0 + 1e-9)).unwrap())
        .collect();
    for pair in meshes.windows(2) {
        assert_eq!(pair[1].num_elements(), 4 * pair[0].num_elements());
    }
    let mut pass = true;
    let mut detail = String::new();
    for k in 1..=3 {
        let reference = RefBasis::new(k);
        let rule = TriangleRule::with_exactness(2 * k + 8);
        let (mut eu, mut eq, mut hs) = (Vec::new(), Vec::new(), Vec::new());
        for tri in &meshes {
            let (mut su, mut sq) = (0.0, 0.0);
            for e in 0..tri.num_elements() {
                let geom = tri.element_geometry(e);
                let p = hdg_project(geom.vertices, k, [1.0; 3], q, u, e).unwrap();
                let b = ElementBasis::new(geom, &reference);
                let n = b.len();
                for (x, w) in b.quadrature(&rule) {
                    su += w * (b.evaluate(&p.u, x) - u(x)).powi(2);
                    let qx = q(x);
                    sq += w * ((b.evaluate(&p.q[..n], x) - qx[0]).powi(2) + (b.evaluate(&p.q[n..], x) - qx[1]).powi(2));
                }
            }
            eu.push(su.sqrt());
            eq.push(sq.sqrt());
            hs.push(tri.h_max());
        }
        let (ru, rq) = (eoc(&eu, &hs), eoc(&eq, &hs));
        let floor = k as f64 + C9_RATE_SLACK;
        pass &= ru.iter().chain(&rq).all(|&r| r >= floor);
        detail += &format!("k={k}: EOC u {} q {} (>= {floor}); ", fmt(&ru), fmt(&rq));
    }
    // reproduction of P_k data with distinct stabilizations
    let verts = [[0.13, -0.2], [0.9, 0.05], [0.35, 0.7]];
    let mut repro: f64 = 0.0;
    for k in 1..=3 {
        let ki = k as i32;
        let pu = move |x: Point| 0.5 - x[0] + 2.0 * x[0].powi(ki) * x[1].powi(0) - x[1].powi(ki);
        let pq = move |x: Point| [x[0].powi(ki - 1) * x[1] + 1.0, x[1].powi(ki) - 3.0 * x[0]];
        let p = hdg_project(verts, k, [0.5, 1.0, 3.0], pq, pu, 0).unwrap();
        let reference = RefBasis::new(k);
        let b = ElementBasis::new(ElementGeometry::new(verts), &reference);
        let n = b.len();
        for x in [[0.4, 0.1], [0.45, 0.4], [0.3, 0.0]] {
            repro = repro
                .max((b.evaluate(&p.u, x) - pu(x)).abs())
                .max((b.evaluate(&p.q[..n], x) - pq(x)[0]).abs())
                .max((b.evaluate(&p.q[n..], x) - pq(x)[1]).abs());
        }
    }
    pass &= repro <= C9_REPRODUCTION_TOL;
    detail += &format!("P_k reproduction error {repro:.2e} (<= {C9_REPRODUCTION_TOL:e})");
    verdict(9, "HDG projection", pass, &detail);
}

#[test]
fn criterion_10_geometry_audit() {
    let problem = presets::disk_sine(1.0);
    let k = 1;
    let mut tri = build_interior_mesh(&problem, STUDY_H0).unwrap();
    let (mut ratios, mut gaps, mut hs, mut margins) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut bound = 0.0;
    for level in 0..STUDY_LEVELS {
        if level > 0 {
            tri = refine_uniform(&tri, &problem).unwrap();
        }
        let tmap = construct_transfer_map(&tri, &problem, 2 * k + 2).unwrap();
        let report = audit_assumptions(&tri, &tmap, &problem, 1.0, k).unwrap();
        let h_bdry = tri
            .boundary_faces
            .iter()
            .map(|&f| tri.face_geometry(f).length)
            .fold(0.0, f64::max);
        bound = report.ratio_bound;
        ratios.push(report.max_ratio);
        gaps.push(report.max_gap());
        hs.push(h_bdry);
        margins.push(report.s3_margin());
    }
    let orders = eoc(&gaps, &hs);
    let bounded = ratios.iter().all(|&r| r > 0.0 && r <= bound) && ratios.windows(2).all(|w| w[1] <= w[0] * 1.05);
    let improving = margins.windows(2).all(|w| w[1] > w[0]);
    let pass = bounded && orders.iter().all(|&o| o >= C10_GAP_ORDER) && improving;
    verdict(
        10,
        "geometry audit",
        pass,
        &format!(
            "R {} (bounded by {bound}, non-increasing), H order {} (>= {C10_GAP_ORDER}), S3 margin {}",
            fmt(&ratios),
            fmt(&orders),
            fmt(&margins)
        ),
    );
}
