use serde::{Deserialize, Serialize};

use crate::complexity::{mode_costs, ComplexityEstimate, CUBIC_SOLVER};
use crate::error::{invalid, Result};
use crate::sampling::{consecutive_differences, is_fpds, lambda_order, TapSet};

/// One row of a mode-comparison table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scorecard {
    pub taps: TapSet,
    pub differences: Vec<usize>,
    pub n: usize,
    pub m: usize,
    pub lambda: usize,
    pub is_fpds: bool,
    pub optimal_sigma: usize,
    pub constant: ComplexityEstimate,
    pub greedy: Option<ComplexityEstimate>,
    pub cyclic: Option<ComplexityEstimate>,
}

impl Scorecard {
    pub fn costs(&self) -> [Option<f64>; 3] {
        [
            Some(self.constant.log2_total),
            self.greedy.as_ref().map(|e| e.log2_total),
            self.cyclic.as_ref().map(|e| e.log2_total),
        ]
    }
}

pub fn scorecard(taps: &TapSet, n: usize, m: usize, len: usize) -> Result<Scorecard> {
    if taps.len() != n || taps.register_length() != len {
        return invalid("tap set does not match (n, L)");
    }
    let costs = mode_costs(taps, m, CUBIC_SOLVER)?;
    Ok(Scorecard {
        taps: taps.clone(),
        differences: consecutive_differences(taps),
        n,
        m,
        lambda: lambda_order(taps),
        is_fpds: is_fpds(taps),
        optimal_sigma: costs.sigma,
        constant: costs.constant,
        greedy: costs.greedy,
        cyclic: costs.cyclic,
    })
}
