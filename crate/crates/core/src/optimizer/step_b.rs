use rayon::prelude::*;

use crate::complexity::constant_summary;
use crate::error::{invalid, Error, Result};
use crate::optimizer::{scorecard, Scorecard};
use crate::sampling::TapSet;

pub const MAX_STEP_B: usize = 10;

/// Advances `v` to the next lexicographic permutation; false after the last.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every distinct ordering of a multiset, in lexicographic order.
pub fn distinct_permutations(d: &[usize]) -> Vec<Vec<usize>> {
    let mut v = d.to_vec();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

/// (candidate exponent, optimal step) of the best constant-step attack on
/// the taps 1, 1+d_1, ..; the smallest step wins ties.
pub fn best_constant_key(d: &[usize], m: usize, len: usize) -> Option<(usize, usize)> {
    (1..=len)
        .filter_map(|s| constant_summary(d, m, len, s))
        .map(|s| (s.candidate_exponent, s.sigma))
        .min()
}

type Key = (usize, usize, std::cmp::Reverse<Vec<usize>>);

fn better(a: Option<Key>, b: Option<Key>) -> Option<Key> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y > x { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Exhaustive search over the orderings of `d`: maximise the constant-step
/// cost at the optimal step, then prefer the larger optimal step, then the
/// lexicographically smallest ordering.
pub fn step_b_best_ordering(
    d: &[usize],
    n: usize,
    m: usize,
    len: usize,
) -> Result<(Vec<usize>, Scorecard)> {
    if d.len() > MAX_STEP_B {
        return Err(Error::Feasibility(format!(
            "{} differences exceed the exhaustive limit of {MAX_STEP_B}; use the staged search",
            d.len()
        )));
    }
    if d.len() + 1 != n {
        return invalid(format!("{} differences do not give n = {n} taps", d.len()));
    }
    if d.contains(&0) || d.iter().sum::<usize>() + 1 > len {
        return invalid("differences must be positive with sum at most L-1");
    }
    if m == 0 || m > n {
        return invalid(format!("need 1 <= m <= n, got m={m}"));
    }
    let mut v = d.to_vec();
    v.sort_unstable();
    let mut best: Option<Key> = None;
    let mut more = true;
    while more {
        let mut batch = Vec::with_capacity(4096);
        while more && batch.len() < 4096 {
            batch.push(v.clone());
            more = next_permutation(&mut v);
        }
        let local = batch
            .into_par_iter()
            .filter_map(|p| {
                best_constant_key(&p, m, len).map(|(e, s)| (e, s, std::cmp::Reverse(p)))
            })
            .reduce_with(|a, b| better(Some(a), Some(b)).unwrap());
        best = better(best, local);
    }
    let (_, _, std::cmp::Reverse(order)) = best.ok_or(Error::NotOverdefined {
        samples: crate::sampling::sample_cap(len),
    })?;
    let taps = TapSet::from_differences(1, &order, len)?;
    let card = scorecard(&taps, n, m, len)?;
    Ok((order, card))
}
