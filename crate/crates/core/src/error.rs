use thiserror::Error;

/// Errors raised by mesh construction, discretization and the solvers.
#[derive(Debug, Error)]
pub enum HdgError {
    #[error("level-set boundary cannot be resolved: {0}")]
    NonResolvableBoundary(String),

    #[error("no transfer path from boundary node ({x:.6}, {y:.6}): {reason}")]
    PathNotFound { x: f64, y: f64, reason: String },

    #[error("transfer path from face {face} re-enters the computational domain")]
    PathCrossesInterior { face: usize },

    #[error("refinement produced an inverted or degenerate element near vertex {vertex}")]
    InvertedElement { vertex: usize },

    #[error("HDG projection is singular on element {element}")]
    SingularProjection { element: usize },

    #[error("local HDG system is singular on element {element}")]
    SingularLocalSystem { element: usize },

    #[error("skeleton solve failed: {0}")]
    SolveFailure(String),

    #[error("Picard iteration did not converge in {iterations} iterations (last contraction factor {factor:.3e})")]
    NoConvergence { iterations: usize, factor: f64 },

    #[error("local post-processing did not converge on element {element} (last increment {increment:.3e})")]
    LocalNoConvergence { element: usize, increment: f64 },

    #[error("mesh file: {0}")]
    MeshFormat(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HdgError {
    pub fn is_geometry(&self) -> bool {
        matches!(
            self,
            HdgError::NonResolvableBoundary(_)
                | HdgError::PathNotFound { .. }
                | HdgError::PathCrossesInterior { .. }
                | HdgError::InvertedElement { .. }
                | HdgError::MeshFormat(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, HdgError>;
