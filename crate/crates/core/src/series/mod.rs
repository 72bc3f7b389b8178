//! Coefficient-space representation of analytic functions on the unit disc.

mod function;
mod jet;
mod power;
mod window;

pub use function::{materialize, Atom, CoeffRule, FunctionSpec};
pub use jet::Jet;
pub use power::{dyadic_block, dyadic_block_shifted, hadamard, DyadicBlockIndex, PowerSeries, SeriesJson};
pub use window::{window_poly, SmoothWindow, AMPLITUDE_GRID};
