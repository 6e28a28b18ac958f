//! Study drivers behind the command-line subcommands.

use std::fmt::Write as _;
use std::path::PathBuf;

use log::info;

use crate::error::{HdgError, Result};
use crate::estimator::adapt::{adapt_from, solve_and_estimate, AdaptConfig, AdaptOutcome, CycleLog, Solution};
use crate::fe::norms::ErrorNorms;
use crate::geometry::audit::{audit_assumptions, AssumptionReport};
use crate::geometry::mesh::{build_interior_mesh, Triangulation};
use crate::geometry::meshio::{load_mesh, save_mesh};
use crate::geometry::problem::CurvedProblem;
use crate::geometry::refine::refine_uniform_with;
use crate::geometry::transfer::construct_transfer_map;

use super::config::RunConfig;
use super::vtk::write_vtk;

/// Errors below this are reported as exact in the EOC columns.
pub const EXACT_FLOOR: f64 = 1e-12;

fn output_path(config: &RunConfig, suffix: &str) -> Option<PathBuf> {
    config.out.as_ref().map(|p| PathBuf::from(format!("{p}{suffix}")))
}

fn write_output(config: &RunConfig, suffix: &str, contents: &str) -> Result<()> {
    if let Some(path) = output_path(config, suffix) {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(&path, contents)?;
        info!("wrote {}", path.display());
    }
    Ok(())
}

fn error_row(columns: usize, err: &HdgError) -> String {
    let msg = err.to_string().replace([',', '\n'], ";");
    let mut row = format!("error,{msg}");
    for _ in 2..columns {
        row.push(',');
    }
    row
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:e}"))
}

/// Meshes for the study: either independent meshes for every listed size or
/// uniform refinements of the first one.
pub fn mesh_levels(config: &RunConfig, problem: &CurvedProblem) -> Result<Vec<Triangulation>> {
    if config.target_h.len() > 1 {
        return config.target_h.iter().map(|&h| build_interior_mesh(problem, h)).collect();
    }
    let first = match &config.mesh_file {
        Some(path) => load_mesh(path)?,
        None => build_interior_mesh(problem, config.target_h[0])?,
    };
    let mut levels = vec![first];
    for _ in 1..config.levels {
        let next = refine_uniform_with(levels.last().unwrap(), problem, config.placement)?;
        levels.push(next);
    }
    Ok(levels)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub level: usize,
    pub h: f64,
    pub elements: usize,
    pub dofs: usize,
    pub errors: ErrorNorms,
    pub picard_iters: usize,
    pub eta: f64,
    pub effectivity: Option<f64>,
}

/// Orders `[u, q, u*, boundary]` between consecutive levels; `None` when both
/// errors are below [`EXACT_FLOOR`].
pub type Eoc = [Option<f64>; 4];

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// `eoc[i]` compares rows `i` and `i + 1`.
    pub eoc: Vec<Eoc>,
}

const CONVERGENCE_HEADER: &str =
    "level,h,elements,dofs,e_u,e_q,e_ustar,e_bdry,picard_iters,eta,effectivity,eoc_u,eoc_q,eoc_ustar,eoc_bdry";

fn error_list(e: &ErrorNorms) -> [f64; 4] {
    [e.u, e.q, e.ustar, e.boundary]
}

/// `log(e_i / e_{i+1}) / log(h_i / h_{i+1})` with measured mesh sizes.
pub fn eoc(a: &ConvergenceRow, b: &ConvergenceRow) -> Eoc {
    let (ea, eb) = (error_list(&a.errors), error_list(&b.errors));
    let mut out = [None; 4];
    for i in 0..4 {
        if ea[i].max(eb[i]) > EXACT_FLOOR {
            out[i] = Some((ea[i] / eb[i]).ln() / (a.h / b.h).ln());
        }
    }
    out
}

impl ConvergenceTable {
    pub fn to_csv(&self) -> String {
        let mut s = format!("{CONVERGENCE_HEADER}\n");
        for (i, r) in self.rows.iter().enumerate() {
            let e = &r.errors;
            let _ = write!(
                s,
                "{},{:e},{},{},{:e},{:e},{:e},{:e},{},{:e},{}",
                r.level,
                r.h,
                r.elements,
                r.dofs,
                e.u,
                e.q,
                e.ustar,
                e.boundary,
                r.picard_iters,
                r.eta,
                opt(r.effectivity)
            );
            match i.checked_sub(1).map(|j| self.eoc[j]) {
                None => s.push_str(",,,,\n"),
                Some(o) => {
                    for v in o {
                        let _ = write!(s, ",{}", v.map_or_else(|| "exact".to_string(), |x| format!("{x:.4}")));
                    }
                    s.push('\n');
                }
            }
        }
        s
    }

    pub fn to_console(&self) -> String {
        let mut s = format!(
            "{:>3} {:>9} {:>7} {:>10} {:>10} {:>10} {:>10} {:>5}  {:>6} {:>6} {:>6} {:>6}\n",
            "lvl", "h", "dofs", "e_u", "e_q", "e_u*", "e_bdry", "iters", "r_u", "r_q", "r_u*", "r_bd"
        );
        for (i, r) in self.rows.iter().enumerate() {
            let e = &r.errors;
            let _ = write!(
                s,
                "{:>3} {:>9.3e} {:>7} {:>10.3e} {:>10.3e} {:>10.3e} {:>10.3e} {:>5} ",
                r.level, r.h, r.dofs, e.u, e.q, e.ustar, e.boundary, r.picard_iters
            );
            if i > 0 {
                for v in self.eoc[i - 1] {
                    let _ = write!(s, " {:>6}", v.map_or_else(|| "exact".to_string(), |x| format!("{x:.2}")));
                }
            }
            s.push('\n');
        }
        s
    }
}

fn convergence_row(level: usize, tri: &Triangulation, sol: &Solution, k: usize) -> Result<ConvergenceRow> {
    let errors = sol
        .report
        .errors
        .ok_or_else(|| HdgError::Config("convergence study needs a preset with an exact solution".into()))?;
    Ok(ConvergenceRow {
        level,
        h: tri.h_max(),
        elements: tri.num_elements(),
        dofs: tri.num_faces() * (k + 1),
        errors,
        picard_iters: sol.trace.iterations(),
        eta: sol.report.eta,
        effectivity: sol.report.effectivity(),
    })
}

/// Solves on every mesh level and tabulates errors and observed orders.
/// A failing level is written as an error row before the error is returned.
pub fn run_convergence(config: &RunConfig) -> Result<ConvergenceTable> {
    let problem = config.problem()?;
    if problem.exact.is_none() {
        return Err(HdgError::Config(format!("preset '{}' has no exact solution", config.preset)));
    }
    let mut table = ConvergenceTable {
        rows: Vec::new(),
        eoc: Vec::new(),
    };
    let outcome = (|| -> Result<()> {
        for (level, tri) in mesh_levels(config, &problem)?.iter().enumerate() {
            let sol = solve_and_estimate(tri, &problem, config.k, config.tau, &config.picard())?;
            let row = convergence_row(level, tri, &sol, config.k)?;
            info!("level {level}: h {:.3e}, e_u {:.3e}, e_q {:.3e}", row.h, row.errors.u, row.errors.q);
            if let Some(prev) = table.rows.last() {
                table.eoc.push(eoc(prev, &row));
            }
            table.rows.push(row);
        }
        Ok(())
    })();
    let mut csv = table.to_csv();
    if let Err(err) = &outcome {
        csv.push_str(&error_row(15, err));
        csv.push('\n');
    }
    write_output(config, "_convergence.csv", &csv)?;
    outcome.map(|_| table)
}

pub fn adapt_config(config: &RunConfig) -> AdaptConfig {
    AdaptConfig {
        k: config.k,
        tau: config.tau,
        theta: config.theta,
        max_dofs: config.max_dofs,
        tol: config.tol,
        initial_h: config.target_h[0],
        max_cycles: config.max_cycles,
        picard: config.picard(),
    }
}

const ADAPT_HEADER: &str = "cycle,dofs,eta,osc,picard_iters,e_u,e_q,e_ustar,effectivity";

pub fn cycle_csv(cycles: &[CycleLog]) -> String {
    let mut s = format!("{ADAPT_HEADER}\n");
    for c in cycles {
        let _ = writeln!(
            s,
            "{},{},{:e},{:e},{},{},{},{},{}",
            c.cycle,
            c.dofs,
            c.eta,
            c.osc,
            c.picard_iters,
            opt(c.errors.map(|e| e.u)),
            opt(c.errors.map(|e| e.q)),
            opt(c.errors.map(|e| e.ustar)),
            opt(c.effectivity)
        );
    }
    s
}

/// Adaptive loop with the cycle log as CSV and the final fields as VTK.
pub fn run_adaptive(config: &RunConfig) -> Result<AdaptOutcome> {
    let problem = config.problem()?;
    let outcome = mesh_levels(&RunConfig { levels: 1, ..config.clone() }, &problem)
        .and_then(|mut m| adapt_from(m.remove(0), &problem, &adapt_config(config)));
    match outcome {
        Ok(out) => {
            write_output(config, "_adapt.csv", &cycle_csv(&out.cycles))?;
            let eta: Vec<f64> = out.solution.report.eta_sq.iter().map(|v| v.sqrt()).collect();
            write_output(config, "_final.vtk", &write_vtk(&out.tri, &out.solution.state, &[("eta", &eta)]))?;
            Ok(out)
        }
        Err(err) => {
            write_output(config, "_adapt.csv", &format!("{ADAPT_HEADER}\n{}\n", error_row(9, &err)))?;
            Err(err)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditLevel {
    pub level: usize,
    pub h: f64,
    pub report: AssumptionReport,
}

const AUDIT_HEADER: &str = "level,h,boundary_faces,worst_r_e,R,max_H_perp,s3_margin,s4_margin,all_pass";
const AUDIT_FACE_HEADER: &str = "level,face,r_e,h_perp,H_perp,c_ext,c_inv,s3,s4,pass_s2,pass_s3,pass_s4";

pub fn audit_csv(levels: &[AuditLevel]) -> String {
    let mut s = format!("{AUDIT_HEADER}\n");
    for l in levels {
        let r = &l.report;
        let worst = r.faces.iter().map(|f| f.ratio).fold(0.0, f64::max);
        let _ = writeln!(
            s,
            "{},{:e},{},{:e},{:e},{:e},{:e},{:e},{}",
            l.level,
            l.h,
            r.faces.len(),
            worst,
            r.max_ratio,
            r.max_gap(),
            r.s3_margin(),
            r.s4_margin(),
            r.all_pass
        );
    }
    s
}

pub fn audit_face_csv(levels: &[AuditLevel]) -> String {
    let mut s = format!("{AUDIT_FACE_HEADER}\n");
    for l in levels {
        for f in &l.report.faces {
            let _ = writeln!(
                s,
                "{},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{},{}",
                l.level,
                f.face,
                f.ratio,
                f.h_perp,
                f.big_h_perp,
                f.c_ext,
                f.c_inv,
                f.s3_value,
                f.s4_value,
                f.pass_s2,
                f.pass_s3,
                f.pass_s4
            );
        }
    }
    s
}

/// Builds the mesh levels and audits the geometric assumptions on each.
pub fn run_audit(config: &RunConfig) -> Result<Vec<AuditLevel>> {
    let problem = config.problem()?;
    let mut out = Vec::new();
    for (level, tri) in mesh_levels(config, &problem)?.iter().enumerate() {
        let tmap = construct_transfer_map(tri, &problem, 2 * config.k + 2)?;
        let report = audit_assumptions(tri, &tmap, &problem, config.tau, config.k)?;
        info!(
            "level {level}: R {:.3e}, max H_perp {:.3e}, S3 margin {:.3e}, all pass {}",
            report.max_ratio,
            report.max_gap(),
            report.s3_margin(),
            report.all_pass
        );
        out.push(AuditLevel {
            level,
            h: tri.h_max(),
            report,
        });
    }
    write_output(config, "_audit.csv", &audit_csv(&out))?;
    write_output(config, "_audit_faces.csv", &audit_face_csv(&out))?;
    Ok(out)
}

/// Single solve on the finest configured mesh; writes fields, summary,
/// state and mesh.
pub fn run_solve(config: &RunConfig) -> Result<(Triangulation, Solution)> {
    let problem = config.problem()?;
    let tri = mesh_levels(config, &problem)?.pop().expect("at least one level");
    let sol = solve_and_estimate(&tri, &problem, config.k, config.tau, &config.picard())?;
    let eta: Vec<f64> = sol.report.eta_sq.iter().map(|v| v.sqrt()).collect();
    write_output(config, ".vtk", &write_vtk(&tri, &sol.state, &[("eta", &eta)]))?;
    let e = sol.report.errors;
    let summary = format!(
        "h,elements,dofs,picard_iters,contraction,eta,osc,e_u,e_q,e_ustar,e_bdry,effectivity\n\
         {:e},{},{},{},{:e},{:e},{:e},{},{},{},{},{}\n",
        tri.h_max(),
        tri.num_elements(),
        tri.num_faces() * (config.k + 1),
        sol.trace.iterations(),
        sol.trace.contraction_factor(),
        sol.report.eta,
        sol.report.osc,
        opt(e.map(|e| e.u)),
        opt(e.map(|e| e.q)),
        opt(e.map(|e| e.ustar)),
        opt(e.map(|e| e.boundary)),
        opt(sol.report.effectivity())
    );
    write_output(config, "_summary.csv", &summary)?;
    write_output(config, "_state.txt", &sol.state.to_text())?;
    if let Some(path) = output_path(config, "_mesh.txt") {
        save_mesh(&tri, &path)?;
    }
    Ok((tri, sol))
}
