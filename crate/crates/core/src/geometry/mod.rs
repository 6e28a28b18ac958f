//! Problem description, meshes of the polygonal subdomain, refinement,
//! transfer paths and the geometric audit.

pub mod audit;
pub mod mesh;
pub mod meshio;
pub mod problem;
pub mod refine;
pub mod transfer;
