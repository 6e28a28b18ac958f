//! Configuration, study drivers and field export used by the `hdgcurve`
//! binary.

pub mod config;
pub mod runs;
pub mod vtk;

pub use config::RunConfig;
pub use runs::{
    mesh_levels, run_adaptive, run_audit, run_convergence, run_solve, AuditLevel, ConvergenceRow, ConvergenceTable,
};
pub use vtk::write_vtk;
