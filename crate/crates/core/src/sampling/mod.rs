//! Tap-set calculus on the integer-label timeline: difference schemes,
//! repeated-bit counting for arbitrary sampling schedules, and schedule
//! construction.

mod counting;
mod differences;
mod hybrid;
mod profile;
mod taps;

pub use counting::{
    constant_first_repeats, repeated_count_constant, repeated_count_variable, VariableCount,
};
pub use differences::{
    consecutive_differences, difference_scheme, is_fpds, lambda_order, DifferenceScheme,
};
pub use hybrid::{tagged_profile, CountingModel};
pub use profile::{
    constant_profile, cyclic_schedule, greedy_schedule, repetition_profile, RepetitionProfile,
    SamplingMode, SamplingSchedule, StopRule,
};
pub use taps::TapSet;

/// Samples allowed before declaring that no overdefined system exists.
pub fn sample_cap(register_length: usize) -> usize {
    4 * register_length
}
