use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::error::{invalid, Result};
use crate::registers::LfsrSpec;
use crate::sampling::TapSet;

/// GF(2) linear form in the initial state bits; coefficient `j` multiplies
/// the initial content of cell `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearExpr {
    pub coeffs: BitVec,
}

impl LinearExpr {
    pub fn eval(&self, initial: &BitVec) -> bool {
        self.coeffs.and_parity(initial)
    }
}

/// Expressions of the bits at `taps` after `t` clocks, obtained by pushing
/// the identity through the companion map `t` times.
pub fn linear_tap_expressions(spec: &LfsrSpec, taps: &TapSet, t: usize) -> Result<Vec<LinearExpr>> {
    let len = spec.length();
    if taps.register_length() != len || taps.last() > len {
        return invalid("tap set does not fit the register");
    }
    let mut cells: VecDeque<BitVec> = (0..len).map(|j| BitVec::unit(len, j)).collect();
    for _ in 0..t {
        let mut fresh = BitVec::zeros(len);
        for &p in spec.feedback_positions() {
            fresh.xor_assign(&cells[p - 1]);
        }
        cells.pop_front();
        cells.push_back(fresh);
    }
    Ok(taps
        .positions()
        .iter()
        .map(|&l| LinearExpr {
            coeffs: cells[l - 1].clone(),
        })
        .collect())
}

/// Expressions of timeline labels `1..=max_label`. Label `j + t` is the bit
/// in cell `j` at clock `t`; labels beyond L follow the feedback recurrence
/// `x_{L+1+t} = sum_{p in F} x_{p+t}`.
#[derive(Clone, Debug)]
pub struct LabelExpressions {
    len: usize,
    exprs: Vec<BitVec>,
}

impl LabelExpressions {
    pub fn new(spec: &LfsrSpec, max_label: usize) -> Self {
        let len = spec.length();
        let mut exprs: Vec<BitVec> = Vec::with_capacity(max_label.max(len));
        for j in 0..len {
            exprs.push(BitVec::unit(len, j));
        }
        for label in len + 1..=max_label {
            let t = label - len - 1;
            let mut e = BitVec::zeros(len);
            for &p in spec.feedback_positions() {
                e.xor_assign(&exprs[p + t - 1]);
            }
            exprs.push(e);
        }
        LabelExpressions { len, exprs }
    }

    pub fn register_length(&self) -> usize {
        self.len
    }

    pub fn max_label(&self) -> usize {
        self.exprs.len()
    }

    pub fn get(&self, label: usize) -> &BitVec {
        &self.exprs[label - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_at_time_zero() {
        let spec = LfsrSpec::new(12, vec![1, 4, 7]).unwrap();
        let taps = TapSet::new(vec![2, 5, 12], 12).unwrap();
        let e = linear_tap_expressions(&spec, &taps, 0).unwrap();
        for (expr, &l) in e.iter().zip(taps.positions()) {
            assert_eq!(expr.coeffs, BitVec::unit(12, l - 1));
        }
    }

    #[test]
    fn one_step_shift() {
        let spec = LfsrSpec::new(12, vec![1, 4, 7]).unwrap();
        let taps = TapSet::new(vec![2, 5, 11], 12).unwrap();
        let e = linear_tap_expressions(&spec, &taps, 1).unwrap();
        for (expr, &l) in e.iter().zip(taps.positions()) {
            assert_eq!(expr.coeffs, BitVec::unit(12, l));
        }
    }

    #[test]
    fn label_table_matches_companion_iteration() {
        let spec = LfsrSpec::new(10, vec![1, 3, 8]).unwrap();
        let taps = TapSet::new(vec![1, 4, 9, 10], 10).unwrap();
        let table = LabelExpressions::new(&spec, 80);
        for t in 0..60 {
            let e = linear_tap_expressions(&spec, &taps, t).unwrap();
            for (expr, &l) in e.iter().zip(taps.positions()) {
                assert_eq!(&expr.coeffs, table.get(l + t));
            }
        }
    }
}
