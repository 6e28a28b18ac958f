//! Bases, quadrature, extrapolation, the HDG projection and error norms.

pub mod basis;
pub mod element;
pub mod extension;
pub mod norms;
pub mod projection;
pub mod quadrature;
