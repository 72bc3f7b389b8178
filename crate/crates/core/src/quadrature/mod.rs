//! Quadrature rules: adaptive Gauss-Kronrod with endpoint refinement and
//! Gauss-Jacobi rules for radial Bergman integrals.

mod jacobi;
mod kronrod;

pub use jacobi::{gauss_jacobi, jacobi_unit, GaussRule};
pub use kronrod::{geometric_breakpoints, geometric_breakpoints_left, integrate, integrate_vec, QuadOptions, QuadResult, VecQuadResult};
