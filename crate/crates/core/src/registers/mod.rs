//! Register simulation, filter functions and linear bookkeeping.

mod filter;
mod generator;
mod linear;
pub mod primitive;
mod shift;

pub use filter::{preimage_table, FilterSpec, PreimageSpace};
pub use generator::{keystream, GeneratorSpec, Register, Taps};
pub use linear::{linear_tap_expressions, LabelExpressions, LinearExpr};
pub use shift::{lfsr_step, nfsr_step, HybridSpec, LfsrSpec, NfsrSpec};
