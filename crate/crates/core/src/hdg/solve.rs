//! Picard iteration `u^{m+1} = J(u^m)`: each step solves the linearized HDG
//! system with the source frozen at the previous scalar iterate.

use log::debug;

use crate::error::{HdgError, Result};
use crate::hdg::assembly::{solve_linearized, Discretization};
use crate::hdg::state::HdgState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardOptions {
    pub rtol: f64,
    pub max_iters: usize,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            max_iters: 100,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PicardTrace {
    /// `||u^{m+1} - u^m||` for every step.
    pub increments: Vec<f64>,
    pub norms: Vec<f64>,
    /// Ratios of consecutive increments.
    pub factors: Vec<f64>,
}

impl PicardTrace {
    pub fn iterations(&self) -> usize {
        self.increments.len()
    }

    /// Contraction factor estimate: the last ratio of consecutive
    /// increments that is not polluted by round-off.
    pub fn contraction_factor(&self) -> f64 {
        let floor = self.norms.last().copied().unwrap_or(0.0) * 1e-12;
        self.increments
            .windows(2)
            .rev()
            .find(|w| w[1] > floor)
            .map(|w| w[1] / w[0])
            .unwrap_or(0.0)
    }
}

/// L2 norm of a `P_k` field from its coefficients (the basis is orthonormal).
pub fn coef_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn picard_solve(
    disc: &Discretization<'_>,
    u0: Option<&[f64]>,
    opts: &PicardOptions,
) -> Result<(HdgState, PicardTrace)> {
    let mut trace = PicardTrace::default();
    let mut zeta: Vec<f64> = match u0 {
        Some(u) => u.to_vec(),
        None => vec![0.0; disc.n_local() * disc.tri.num_elements()],
    };
    for it in 0..opts.max_iters {
        let system = disc.assemble(Some(&zeta));
        let state = solve_linearized(&system)?;
        let inc = coef_norm(&state.u.iter().zip(&zeta).map(|(a, b)| a - b).collect::<Vec<_>>());
        let norm = coef_norm(&state.u);
        if let Some(&prev) = trace.increments.last() {
            trace.factors.push(if prev > 0.0 { inc / prev } else { 0.0 });
        }
        trace.increments.push(inc);
        trace.norms.push(norm);
        debug!("picard {it}: increment {inc:.3e}, norm {norm:.3e}");
        let converged = if norm < 1e-14 { inc <= opts.rtol } else { inc <= opts.rtol * norm };
        if converged {
            return Ok((state, trace));
        }
        if !inc.is_finite() {
            break;
        }
        zeta = state.u;
    }
    Err(HdgError::NoConvergence {
        iterations: trace.iterations(),
        factor: trace.contraction_factor(),
    })
}

/// Relative size of the perturbation used by [`linearized_contraction`].
const PERTURBATION: f64 = 1e-6;

/// Power-iteration estimate of the local contraction factor of `J` at `u`,
/// i.e. the dominant ratio `||J(u + v) - J(u)|| / ||v||` for small `v`.
/// The start vector is deterministic.
pub fn linearized_contraction(disc: &Discretization<'_>, u: &[f64], steps: usize) -> Result<f64> {
    let base = solve_linearized(&disc.assemble(Some(u)))?.u;
    let eps = PERTURBATION * coef_norm(u).max(1.0);
    let mut v: Vec<f64> = (0..u.len()).map(|i| 1.0 + 0.5 * (0.37 * i as f64).sin()).collect();
    let mut ratio = 0.0;
    for _ in 0..steps.max(1) {
        let s = eps / coef_norm(&v);
        v.iter_mut().for_each(|x| *x *= s);
        let shifted: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let image = solve_linearized(&disc.assemble(Some(&shifted)))?.u;
        let w: Vec<f64> = image.iter().zip(&base).map(|(a, b)| a - b).collect();
        ratio = coef_norm(&w) / eps;
        if ratio == 0.0 {
            break;
        }
        v = w;
    }
    Ok(ratio)
}
