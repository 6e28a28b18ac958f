//! Hybridizable discontinuous Galerkin solver for semi-linear elliptic
//! problems `-div(kappa grad u) = F(u)` on curved domains.
//!
//! The domain is described by a level set. The mesh only covers a polygonal
//! subdomain; Dirichlet data is carried from the curved boundary to the mesh
//! boundary along straight transfer paths by integrating the extrapolated
//! discrete flux. On top of the solver sit a Picard fixed-point iteration,
//! an element-local post-processing, a residual error estimator and an
//! adaptive refinement loop.
//!
//! ```no_run
//! use hdgcurve::prelude::*;
//!
//! let problem = presets::disk_sine(1.0);
//! let tri = build_interior_mesh(&problem, 0.2).unwrap();
//! let tmap = construct_transfer_map(&tri, &problem, 2 * 2 + 2).unwrap();
//! let disc = Discretization::new(&tri, &tmap, &problem, 2, 1.0).unwrap();
//! let (state, trace) = picard_solve(&disc, None, &PicardOptions::default()).unwrap();
//! println!("{} iterations, {} unknowns", trace.iterations(), state.uhat.len());
//! ```

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimator;
pub mod fe;
pub mod geometry;
pub mod harness;
pub mod hdg;
pub mod postprocess;
pub mod presets;

pub use error::{HdgError, Result};

pub mod prelude {
    pub use crate::error::{HdgError, Result};
    pub use crate::estimator::{adapt_loop, estimate, mark_dorfler, AdaptConfig, EstimatorReport};
    pub use crate::fe::element::Point;
    pub use crate::fe::norms::{error_norms, ErrorNorms};
    pub use crate::geometry::audit::{audit_assumptions, AssumptionReport};
    pub use crate::geometry::mesh::{build_interior_mesh, Triangulation};
    pub use crate::geometry::problem::{CurvedProblem, Domain};
    pub use crate::geometry::refine::{refine, refine_uniform, BoundaryPlacement};
    pub use crate::geometry::transfer::{construct_transfer_map, TransferMap};
    pub use crate::hdg::{picard_solve, Discretization, HdgState, PicardOptions, PicardTrace};
    pub use crate::postprocess::postprocess_all;
    pub use crate::presets;
}
