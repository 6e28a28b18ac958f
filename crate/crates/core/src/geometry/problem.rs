//! Continuous problem data: `-div(kappa grad u) = F(u; x)` in the curved
//! domain `{levelset < 0}` with `u = g` on its boundary.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::fe::element::Point;

pub type ScalarField = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
pub type VectorField = Arc<dyn Fn(Point) -> [f64; 2] + Send + Sync>;
/// Source `F(u; x)`.
pub type SourceFn = Arc<dyn Fn(f64, Point) -> f64 + Send + Sync>;

/// Built-in domains. All of them are described by a level set `phi` with
/// `Omega = {phi < 0}`; the shape parameters also drive the initial mesher.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Disk {
        center: Point,
        radius: f64,
    },
    Square {
        min: Point,
        max: Point,
    },
    /// `r_in < |x - center| < r_out`, `theta0 < arg(x - center) < theta1`,
    /// with an opening angle below `pi`.
    AnnulusSector {
        center: Point,
        r_in: f64,
        r_out: f64,
        theta0: f64,
        theta1: f64,
    },
    /// Elliptic cross-section kept away from the symmetry axis, `x >= x_min > 0`.
    Shafranov {
        center: Point,
        semi_x: f64,
        semi_y: f64,
    },
}

impl Domain {
    pub fn unit_disk() -> Self {
        Domain::Disk {
            center: [0.0, 0.0],
            radius: 1.0,
        }
    }

    pub fn unit_square() -> Self {
        Domain::Square {
            min: [0.0, 0.0],
            max: [1.0, 1.0],
        }
    }

    pub fn default_annulus_sector() -> Self {
        Domain::AnnulusSector {
            center: [0.0, 0.0],
            r_in: 0.5,
            r_out: 1.0,
            theta0: 0.0,
            theta1: 0.5 * PI,
        }
    }

    pub fn default_shafranov() -> Self {
        Domain::Shafranov {
            center: [1.0, 0.0],
            semi_x: 0.5,
            semi_y: 0.7,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Domain::Disk { .. } => "disk",
            Domain::Square { .. } => "square",
            Domain::AnnulusSector { .. } => "annulus_sector",
            Domain::Shafranov { .. } => "shafranov",
        }
    }

    pub fn levelset(&self, x: Point) -> f64 {
        match *self {
            Domain::Disk { center, radius } => {
                ((x[0] - center[0]).powi(2) + (x[1] - center[1]).powi(2)).sqrt() - radius
            }
            Domain::Square { min, max } => {
                let cx = 0.5 * (min[0] + max[0]);
                let cy = 0.5 * (min[1] + max[1]);
                let hx = 0.5 * (max[0] - min[0]);
                let hy = 0.5 * (max[1] - min[1]);
                ((x[0] - cx).abs() - hx).max((x[1] - cy).abs() - hy)
            }
            Domain::AnnulusSector {
                center,
                r_in,
                r_out,
                theta0,
                theta1,
            } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                let r = (d[0] * d[0] + d[1] * d[1]).sqrt();
                let n0 = [-theta0.sin(), theta0.cos()];
                let n1 = [theta1.sin(), -theta1.cos()];
                (r_in - r)
                    .max(r - r_out)
                    .max(-(d[0] * n0[0] + d[1] * n0[1]))
                    .max(-(d[0] * n1[0] + d[1] * n1[1]))
            }
            Domain::Shafranov {
                center,
                semi_x,
                semi_y,
            } => {
                let a = (x[0] - center[0]) / semi_x;
                let b = (x[1] - center[1]) / semi_y;
                ((a * a + b * b).sqrt() - 1.0) * semi_x.min(semi_y)
            }
        }
    }

    /// Diameter of a bounding box of the domain.
    pub fn diameter(&self) -> f64 {
        match *self {
            Domain::Disk { radius, .. } => 2.0 * radius,
            Domain::Square { min, max } => ((max[0] - min[0]).powi(2) + (max[1] - min[1]).powi(2)).sqrt(),
            Domain::AnnulusSector { r_out, .. } => 2.0 * r_out,
            Domain::Shafranov { semi_x, semi_y, .. } => 2.0 * semi_x.max(semi_y),
        }
    }

    /// Absolute tolerance for boundary root finding.
    pub fn root_tolerance(&self) -> f64 {
        1e-12 * self.diameter()
    }
}

#[derive(Clone)]
pub struct ExactSolution {
    pub u: ScalarField,
    /// `q = -kappa grad u`.
    pub q: VectorField,
}

/// The continuous semi-linear problem.
#[derive(Clone)]
pub struct CurvedProblem {
    pub name: String,
    pub domain: Domain,
    pub kappa: ScalarField,
    /// `(kappa_min, kappa_max)` over the domain.
    pub kappa_bounds: (f64, f64),
    pub source: SourceFn,
    /// Lipschitz constant of `F` in `u`.
    pub lipschitz: f64,
    pub dirichlet: ScalarField,
    pub exact: Option<ExactSolution>,
}

impl fmt::Debug for CurvedProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurvedProblem")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("kappa_bounds", &self.kappa_bounds)
            .field("lipschitz", &self.lipschitz)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl CurvedProblem {
    pub fn levelset(&self, x: Point) -> f64 {
        self.domain.levelset(x)
    }

    pub fn kappa(&self, x: Point) -> f64 {
        (self.kappa)(x)
    }

    pub fn source(&self, u: f64, x: Point) -> f64 {
        (self.source)(u, x)
    }

    pub fn g(&self, x: Point) -> f64 {
        (self.dirichlet)(x)
    }

    /// Checks the kappa bounds and the Lipschitz bound of `F` on sampled
    /// points of the bounding box that lie inside the domain. Returns the
    /// number of violations found.
    pub fn check_data(&self, samples_per_axis: usize) -> usize {
        let (lo, hi) = self.bounding_box();
        let mut bad = 0;
        let n = samples_per_axis.max(2);
        for i in 0..n {
            for j in 0..n {
                let x = [
                    lo[0] + (hi[0] - lo[0]) * (i as f64 + 0.5) / n as f64,
                    lo[1] + (hi[1] - lo[1]) * (j as f64 + 0.5) / n as f64,
                ];
                if self.levelset(x) >= 0.0 {
                    continue;
                }
                let k = self.kappa(x);
                if k < self.kappa_bounds.0 * (1.0 - 1e-12) || k > self.kappa_bounds.1 * (1.0 + 1e-12) {
                    bad += 1;
                }
                for (u1, u2) in [(-1.0, 0.5), (0.0, 2.0), (1.5, -0.25)] {
                    let df = (self.source(u1, x) - self.source(u2, x)).abs();
                    if df > self.lipschitz * (u1 - u2).abs() * (1.0 + 1e-12) + 1e-14 {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        match self.domain {
            Domain::Disk { center, radius } => (
                [center[0] - radius, center[1] - radius],
                [center[0] + radius, center[1] + radius],
            ),
            Domain::Square { min, max } => (min, max),
            Domain::AnnulusSector { center, r_out, .. } => (
                [center[0] - r_out, center[1] - r_out],
                [center[0] + r_out, center[1] + r_out],
            ),
            Domain::Shafranov {
                center,
                semi_x,
                semi_y,
            } => (
                [center[0] - semi_x, center[1] - semi_y],
                [center[0] + semi_x, center[1] + semi_y],
            ),
        }
    }
}
