//! Adaptive loop: solve, post-process, estimate, mark, refine.

use log::info;

use crate::error::Result;
use crate::estimator::marking::mark_dorfler;
use crate::estimator::report::{estimate, EstimatorReport};
use crate::fe::norms::ErrorNorms;
use crate::geometry::audit::audit_assumptions;
use crate::geometry::mesh::{build_interior_mesh, Triangulation};
use crate::geometry::problem::CurvedProblem;
use crate::geometry::refine::refine;
use crate::geometry::transfer::{construct_transfer_map, TransferMap};
use crate::hdg::{picard_solve, Discretization, HdgState, PicardOptions, PicardTrace};
use crate::postprocess::postprocess_all;

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptConfig {
    pub k: usize,
    pub tau: f64,
    pub theta: f64,
    pub max_dofs: usize,
    pub tol: f64,
    pub initial_h: f64,
    pub max_cycles: usize,
    pub picard: PicardOptions,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        Self {
            k: 1,
            tau: 1.0,
            theta: 0.5,
            max_dofs: 20_000,
            tol: 0.0,
            initial_h: 0.25,
            max_cycles: 30,
            picard: PicardOptions::default(),
        }
    }
}

/// A converged solve on one mesh with its estimator.
#[derive(Debug, Clone)]
pub struct Solution {
    pub tmap: TransferMap,
    pub state: HdgState,
    pub trace: PicardTrace,
    pub report: EstimatorReport,
}

/// Transfer map, Picard solve, post-processing and estimator on `tri`.
pub fn solve_and_estimate(
    tri: &Triangulation,
    problem: &CurvedProblem,
    k: usize,
    tau: f64,
    picard: &PicardOptions,
) -> Result<Solution> {
    let tmap = construct_transfer_map(tri, problem, 2 * k + 2)?;
    let disc = Discretization::new(tri, &tmap, problem, k, tau)?;
    let (mut state, trace) = picard_solve(&disc, None, picard)?;
    postprocess_all(tri, problem, &mut state)?;
    let report = estimate(tri, &tmap, &state, problem);
    drop(disc);
    Ok(Solution {
        tmap,
        state,
        trace,
        report,
    })
}

/// One row of the cycle log.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleLog {
    pub cycle: usize,
    pub elements: usize,
    pub dofs: usize,
    pub eta: f64,
    pub osc: f64,
    pub picard_iters: usize,
    pub errors: Option<ErrorNorms>,
    pub effectivity: Option<f64>,
    pub audit_pass: bool,
    pub max_ratio: f64,
    pub marked: usize,
}

#[derive(Debug, Clone)]
pub struct AdaptOutcome {
    pub cycles: Vec<CycleLog>,
    pub tri: Triangulation,
    pub solution: Solution,
}

pub fn adapt_loop(problem: &CurvedProblem, config: &AdaptConfig) -> Result<AdaptOutcome> {
    let tri = build_interior_mesh(problem, config.initial_h)?;
    adapt_from(tri, problem, config)
}

/// Runs the loop starting from a given mesh.
pub fn adapt_from(mut tri: Triangulation, problem: &CurvedProblem, config: &AdaptConfig) -> Result<AdaptOutcome> {
    let mut cycles = Vec::new();
    for cycle in 0.. {
        let sol = solve_and_estimate(&tri, problem, config.k, config.tau, &config.picard)?;
        let audit = audit_assumptions(&tri, &sol.tmap, problem, config.tau, config.k)?;
        let dofs = tri.num_faces() * (config.k + 1);
        let report = &sol.report;
        let done = report.eta <= config.tol || dofs >= config.max_dofs || cycle + 1 >= config.max_cycles;
        let marked = if done { Vec::new() } else { mark_dorfler(&report.eta_sq, config.theta) };
        let log = CycleLog {
            cycle,
            elements: tri.num_elements(),
            dofs,
            eta: report.eta,
            osc: report.osc,
            picard_iters: sol.trace.iterations(),
            errors: report.errors,
            effectivity: report.effectivity(),
            audit_pass: audit.all_pass,
            max_ratio: sol.tmap.max_ratio,
            marked: marked.len(),
        };
        info!(
            "cycle {cycle}: {} elements, {dofs} dofs, eta {:.4e}, osc {:.4e}, {} Picard iterations",
            log.elements, log.eta, log.osc, log.picard_iters
        );
        cycles.push(log);
        if done || marked.is_empty() {
            return Ok(AdaptOutcome {
                cycles,
                tri,
                solution: sol,
            });
        }
        tri = refine(&tri, &marked, problem)?;
    }
    unreachable!()
}
