use serde::{Deserialize, Serialize};

use crate::sampling::TapSet;

/// Consecutive differences D and the triangular table of all differences:
/// row k (1-based) holds l_{j+k} - l_j for j = 1..n-k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceScheme {
    pub consecutive: Vec<usize>,
    pub table: Vec<Vec<usize>>,
}

impl DifferenceScheme {
    /// Entry (k, j), both 1-based.
    pub fn entry(&self, k: usize, j: usize) -> usize {
        self.table[k - 1][j - 1]
    }
}

pub fn consecutive_differences(taps: &TapSet) -> Vec<usize> {
    taps.positions().windows(2).map(|w| w[1] - w[0]).collect()
}

pub fn difference_scheme(taps: &TapSet) -> DifferenceScheme {
    let p = taps.positions();
    let n = p.len();
    let table = (1..n)
        .map(|k| (0..n - k).map(|j| p[j + k] - p[j]).collect())
        .collect();
    DifferenceScheme {
        consecutive: consecutive_differences(taps),
        table,
    }
}

/// max over 1 <= s <= l_n - l_1 of |I_0 ∩ (I_0 + s)|; zero for a single tap.
pub fn lambda_order(taps: &TapSet) -> usize {
    let p = taps.positions();
    let span = taps.span();
    if span == 0 {
        return 0;
    }
    let mut counts = vec![0usize; span + 1];
    for (i, &a) in p.iter().enumerate() {
        for &b in &p[i + 1..] {
            counts[b - a] += 1;
        }
    }
    counts.into_iter().max().unwrap_or(0)
}

/// All positive pairwise differences distinct.
pub fn is_fpds(taps: &TapSet) -> bool {
    let mut seen = vec![false; taps.span() + 1];
    let p = taps.positions();
    for (i, &a) in p.iter().enumerate() {
        for &b in &p[i + 1..] {
            if std::mem::replace(&mut seen[b - a], true) {
                return false;
            }
        }
    }
    true
}
