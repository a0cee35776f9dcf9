//! Tap placement search: candidate difference sets, exhaustive ordering
//! search, the staged search for large n, and per-tap-set scorecards.

mod scorecard;
mod staged;
mod step_a;
mod step_b;

pub use scorecard::{scorecard, Scorecard};
pub use staged::{staged_search, StageTrace, StagedParams, StagedResult};
pub use step_a::{gcd, step_a_candidates, CandidateDifferenceSet};
pub use step_b::{
    best_constant_key, distinct_permutations, next_permutation, step_b_best_ordering, MAX_STEP_B,
};
