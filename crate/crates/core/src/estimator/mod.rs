//! A posteriori error estimation, marking and adaptivity.

pub mod adapt;
pub mod marking;
pub mod report;

pub use adapt::{adapt_from, adapt_loop, solve_and_estimate, AdaptConfig, AdaptOutcome, CycleLog, Solution};
pub use marking::mark_dorfler;
pub use report::{estimate, EstimatorReport, Terms, TERM_NAMES};
