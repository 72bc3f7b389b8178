//! Generalized Hilbert operators on Hardy, Bergman and Dirichlet-type spaces
//! of the unit disc, computed in coefficient space.
//!
//! Functions are truncated Taylor series ([`PowerSeries`]). The operator
//! `H_g(f)(z) = ∫_0^1 f(t) g'(tz) dt` acts coefficientwise as
//! `(k+1) b_{k+1} μ_k(f)` with moments `μ_k(f) = ∫_0^1 t^k f(t) dt`.

pub mod error;
pub mod fourier;
pub mod norms;
pub mod operators;
pub mod probes;
pub mod quadrature;
pub mod sampling;
pub mod series;
pub mod stats;

pub use error::{HgError, Result};
pub use norms::{SpaceKind, SpaceParams};
pub use series::{materialize, FunctionSpec, PowerSeries};
