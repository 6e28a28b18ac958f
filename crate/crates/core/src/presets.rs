//! Manufactured problems with closed-form solutions.
//!
//! Each preset fixes `u_ex`, its gradient and `div(kappa grad u_ex)`, and a
//! nonlinearity `c s(u)`; the forcing is then chosen so that `u_ex` solves
//! `-div(kappa grad u) = c s(u) + f(x)`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{HdgError, Result};
use crate::fe::element::Point;
use crate::geometry::problem::{CurvedProblem, Domain, ExactSolution};

/// Building blocks of a manufactured problem.
pub struct Manufactured<U, G, D, K, S>
where
    U: Fn(Point) -> f64,
    G: Fn(Point) -> [f64; 2],
    D: Fn(Point) -> f64,
    K: Fn(Point) -> f64,
    S: Fn(f64) -> f64,
{
    pub u: U,
    pub grad: G,
    /// `div(kappa grad u)`.
    pub flux_div: D,
    pub kappa: K,
    pub kappa_bounds: (f64, f64),
    /// Nonlinearity `s`; the source is `scale * s(u) + f(x)`.
    pub reaction: S,
    /// Lipschitz constant of `s`.
    pub reaction_lipschitz: f64,
    pub scale: f64,
}

pub fn manufactured<U, G, D, K, S>(name: &str, domain: Domain, m: Manufactured<U, G, D, K, S>) -> CurvedProblem
where
    U: Fn(Point) -> f64 + Send + Sync + 'static,
    G: Fn(Point) -> [f64; 2] + Send + Sync + 'static,
    D: Fn(Point) -> f64 + Send + Sync + 'static,
    K: Fn(Point) -> f64 + Send + Sync + 'static,
    S: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let u = Arc::new(m.u);
    let grad = Arc::new(m.grad);
    let kappa = Arc::new(m.kappa);
    let reaction = Arc::new(m.reaction);
    let flux_div = Arc::new(m.flux_div);
    let scale = m.scale;

    let source = {
        let (u, reaction) = (u.clone(), reaction.clone());
        Arc::new(move |v: f64, x: Point| scale * (reaction(v) - reaction(u(x))) - flux_div(x))
    };
    let q = {
        let (grad, kappa) = (grad.clone(), kappa.clone());
        Arc::new(move |x: Point| {
            let g = grad(x);
            let k = kappa(x);
            [-k * g[0], -k * g[1]]
        })
    };
    let exact_u = {
        let u = u.clone();
        Arc::new(move |x: Point| u(x))
    };
    CurvedProblem {
        name: name.to_string(),
        domain,
        kappa: Arc::new(move |x| kappa(x)),
        kappa_bounds: m.kappa_bounds,
        source,
        lipschitz: scale.abs() * m.reaction_lipschitz,
        dirichlet: Arc::new(move |x| u(x)),
        exact: Some(ExactSolution { u: exact_u, q }),
    }
}

fn no_reaction(_: f64) -> f64 {
    0.0
}

/// `u = 1 + 2x - y` on the unit square, `kappa = 1`, `F = 0`.
pub fn square_linear() -> CurvedProblem {
    manufactured(
        "square_linear",
        Domain::unit_square(),
        Manufactured {
            u: |x: Point| 1.0 + 2.0 * x[0] - x[1],
            grad: |_| [2.0, -1.0],
            flux_div: |_| 0.0,
            kappa: |_| 1.0,
            kappa_bounds: (1.0, 1.0),
            reaction: no_reaction,
            reaction_lipschitz: 0.0,
            scale: 0.0,
        },
    )
}

/// `u = (x - y/2)^k + 0.3 x y^(k-1) + 1` on the unit square: a polynomial of
/// degree `k` with `F = -lap u` independent of `u`.
pub fn square_poly(k: usize) -> CurvedProblem {
    let kf = k as f64;
    // w^p with the convention 0 * w^(negative) = 0
    let pw = |w: f64, p: i32, c: f64| if c == 0.0 { 0.0 } else { c * w.powi(p) };
    let ki = k as i32;
    manufactured(
        "square_poly",
        Domain::unit_square(),
        Manufactured {
            u: move |x: Point| (x[0] - 0.5 * x[1]).powi(ki) + 0.3 * x[0] * x[1].powi(ki - 1) + 1.0,
            grad: move |x: Point| {
                let w = x[0] - 0.5 * x[1];
                [
                    kf * w.powi(ki - 1) + 0.3 * x[1].powi(ki - 1),
                    -0.5 * kf * w.powi(ki - 1) + pw(x[1], ki - 2, 0.3 * x[0] * (kf - 1.0)),
                ]
            },
            flux_div: move |x: Point| {
                let w = x[0] - 0.5 * x[1];
                pw(w, ki - 2, 1.25 * kf * (kf - 1.0)) + pw(x[1], ki - 3, 0.3 * x[0] * (kf - 1.0) * (kf - 2.0))
            },
            kappa: |_| 1.0,
            kappa_bounds: (1.0, 1.0),
            reaction: no_reaction,
            reaction_lipschitz: 0.0,
            scale: 0.0,
        },
    )
}

/// `u = x(1-x)y(1-y)` on the unit square with `F = -lap u` (linear problem).
pub fn square_bubble() -> CurvedProblem {
    manufactured(
        "square_bubble",
        Domain::unit_square(),
        Manufactured {
            u: |x: Point| x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]),
            grad: |x: Point| {
                [
                    (1.0 - 2.0 * x[0]) * x[1] * (1.0 - x[1]),
                    x[0] * (1.0 - x[0]) * (1.0 - 2.0 * x[1]),
                ]
            },
            flux_div: |x: Point| -2.0 * x[1] * (1.0 - x[1]) - 2.0 * x[0] * (1.0 - x[0]),
            kappa: |_| 1.0,
            kappa_bounds: (1.0, 1.0),
            reaction: no_reaction,
            reaction_lipschitz: 0.0,
            scale: 0.0,
        },
    )
}

/// `u = exp(x/2) sin(y) + xy` on the unit square with `F = c u + f`.
pub fn square_reaction(c: f64) -> CurvedProblem {
    manufactured(
        "square_reaction",
        Domain::unit_square(),
        Manufactured {
            u: |x: Point| (0.5 * x[0]).exp() * x[1].sin() + x[0] * x[1],
            grad: |x: Point| {
                let e = (0.5 * x[0]).exp();
                [0.5 * e * x[1].sin() + x[1], e * x[1].cos() + x[0]]
            },
            flux_div: |x: Point| -0.75 * (0.5 * x[0]).exp() * x[1].sin(),
            kappa: |_| 1.0,
            kappa_bounds: (1.0, 1.0),
            reaction: |v| v,
            reaction_lipschitz: 1.0,
            scale: c,
        },
    )
}

/// `u = 1 + 2x - y` on the unit disk with `F = 0`. Transfer is exact for
/// this solution.
pub fn disk_linear() -> CurvedProblem {
    let mut p = square_linear();
    p.name = "disk_linear".into();
    p.domain = Domain::unit_disk();
    p
}

/// `u = sin(pi x) sin(pi y)` on the unit disk with `F(u) = c sin(u) + f`.
pub fn disk_sine(c: f64) -> CurvedProblem {
    manufactured(
        "disk_sine",
        Domain::unit_disk(),
        Manufactured {
            u: |x: Point| (PI * x[0]).sin() * (PI * x[1]).sin(),
            grad: |x: Point| {
                [
                    PI * (PI * x[0]).cos() * (PI * x[1]).sin(),
                    PI * (PI * x[0]).sin() * (PI * x[1]).cos(),
                ]
            },
            flux_div: |x: Point| -2.0 * PI * PI * (PI * x[0]).sin() * (PI * x[1]).sin(),
            kappa: |_| 1.0,
            kappa_bounds: (1.0, 1.0),
            reaction: f64::sin,
            reaction_lipschitz: 1.0,
            scale: c,
        },
    )
}

pub const PEAK_CENTER: Point = [0.3, 0.2];
pub const PEAK_SHARPNESS: f64 = 150.0;

/// Gaussian peak `u = exp(-a |x - x0|^2)` on the unit disk with
/// `F(u) = sin(u) + f`.
pub fn disk_peak() -> CurvedProblem {
    let a = PEAK_SHARPNESS;
    let [cx, cy] = PEAK_CENTER;
    let r2 = move |x: Point| (x[0] - cx).powi(2) + (x[1] - cy).powi(2);
    manufactured(
        "disk_peak",
        Domain::unit_disk(),
        Manufactured {
            u: move |x: Point| (-a * r2(x)).exp(),
            grad: move |x: Point| {
                let e = (-a * r2(x)).exp();
                [-2.0 * a * (x[0] - cx) * e, -2.0 * a * (x[1] - cy) * e]
            },
            flux_div: move |x: Point| {
                let r = r2(x);
                (4.0 * a * a * r - 4.0 * a) * (-a * r).exp()
            },
            kappa: |_| 1.0,
            kappa_bounds: (1.0, 1.0),
            reaction: f64::sin,
            reaction_lipschitz: 1.0,
            scale: 1.0,
        },
    )
}

/// Elliptic cross-section centred at `(1, 0)` with semi-axes `0.5, 0.7`,
/// `kappa = 1/x`, `u = 1 - ((x-1)/0.5)^2 - (y/0.7)^2` (so `g = 0`) and
/// `F(u) = c sin(u) + f`.
pub fn shafranov(c: f64) -> CurvedProblem {
    let (ax, ay) = (0.5, 0.7);
    let (bx, by) = (1.0 / (ax * ax), 1.0 / (ay * ay));
    manufactured(
        "shafranov",
        Domain::default_shafranov(),
        Manufactured {
            u: move |x: Point| 1.0 - bx * (x[0] - 1.0).powi(2) - by * x[1] * x[1],
            grad: move |x: Point| [-2.0 * bx * (x[0] - 1.0), -2.0 * by * x[1]],
            // d/dx(-2 bx (x-1)/x) + d/dy(-2 by y / x)
            flux_div: move |x: Point| -2.0 * bx / (x[0] * x[0]) - 2.0 * by / x[0],
            kappa: |x: Point| 1.0 / x[0],
            kappa_bounds: (1.0 / 1.5, 1.0 / 0.5),
            reaction: f64::sin,
            reaction_lipschitz: 1.0,
            scale: c,
        },
    )
}

/// Looks a preset up by name. `k` is used by `square_poly`, `scale` by the
/// presets with a scalable nonlinearity.
pub fn by_name(name: &str, k: usize, scale: f64) -> Result<CurvedProblem> {
    Ok(match name {
        "square_linear" => square_linear(),
        "square_poly" => square_poly(k),
        "square_bubble" => square_bubble(),
        "square_reaction" => square_reaction(scale),
        "disk_linear" => disk_linear(),
        "disk_sine" => disk_sine(scale),
        "disk_peak" => disk_peak(),
        "shafranov" => shafranov(scale),
        other => return Err(HdgError::Config(format!("unknown preset '{other}'"))),
    })
}

pub const NAMES: [&str; 8] = [
    "square_linear",
    "square_poly",
    "square_bubble",
    "square_reaction",
    "disk_linear",
    "disk_sine",
    "disk_peak",
    "shafranov",
];
