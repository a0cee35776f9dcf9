//! Guess-and-determine cryptanalysis of LFSR/NFSR filter generators.
//!
//! The crate is organised around the integer-label timeline: cell `j` of a
//! register at clock `t` holds the label `j + t`, so a tap set sampled after a
//! cumulative shift `s` reads the labels `{l_1 + s, .., l_n + s}`. Repeated
//! input bits between samples are literal set intersections on that line.

pub mod attack;
pub mod bits;
pub mod complexity;
pub mod error;
pub mod fixtures;
pub mod optimizer;
pub mod registers;
pub mod sampling;

pub use bits::BitVec;
pub use complexity::{ComplexityEstimate, NfsrCostParams, Provenance};
pub use error::{Error, Result};
pub use registers::{
    FilterSpec, GeneratorSpec, HybridSpec, LfsrSpec, LinearExpr, NfsrSpec, PreimageSpace, Register,
    Taps,
};
pub use sampling::{
    CountingModel, DifferenceScheme, RepetitionProfile, SamplingMode, SamplingSchedule, StopRule,
    TapSet,
};
