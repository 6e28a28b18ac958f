//! The HDG discretization: local solvers, the condensed skeleton system with
//! transferred boundary data, and the Picard iteration.

pub mod assembly;
pub mod diagnostics;
pub mod local;
pub mod solve;
pub mod state;

pub use assembly::{solve_linearized, Discretization, SkeletonSystem};
pub use diagnostics::{residuals, Residuals};
pub use local::{local_solver, LocalOperator};
pub use solve::{linearized_contraction, picard_solve, PicardOptions, PicardTrace};
pub use state::HdgState;
