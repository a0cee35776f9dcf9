use serde::{Deserialize, Serialize};

/// Per-sample and total repeat counts from the scheme of differences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableCount {
    pub q: Vec<usize>,
    pub total: usize,
}

fn partial_sums(d: &[usize]) -> Vec<usize> {
    let mut p = Vec::with_capacity(d.len() + 1);
    p.push(0);
    let mut acc = 0;
    for &x in d {
        acc += x;
        p.push(acc);
    }
    p
}

/// For each tap i, the smallest t with t*sigma = l_j - l_i for some j > i.
pub fn constant_first_repeats(d: &[usize], sigma: usize) -> Vec<Option<usize>> {
    let p = partial_sums(d);
    (0..p.len())
        .map(|i| {
            p[i + 1..]
                .iter()
                .map(|&pj| pj - p[i])
                .filter(|diff| diff % sigma == 0)
                .map(|diff| diff / sigma)
                .min()
        })
        .collect()
}

/// R over c samples at constant step sigma: every tap i with a first repeat
/// t_i <= c-1 contributes c - t_i.
pub fn repeated_count_constant(d: &[usize], sigma: usize, c: usize) -> usize {
    assert!(sigma >= 1 && c >= 1);
    constant_first_repeats(d, sigma)
        .into_iter()
        .flatten()
        .filter(|&t| t < c)
        .map(|t| c - t)
        .sum()
}

/// R* for an arbitrary step sequence: tap column r of sample j is repeated
/// iff some earlier sample i has S_j - S_i = l_m - l_r with m > r. A column
/// matched by several (i, m) pairs counts once.
pub fn repeated_count_variable(d: &[usize], steps: &[usize]) -> VariableCount {
    let p = partial_sums(d);
    let span = *p.last().unwrap();
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); span + 1];
    for r in 0..p.len() {
        for m in r + 1..p.len() {
            columns[p[m] - p[r]].push(r);
        }
    }
    let shifts = partial_sums(steps);
    let mut q = Vec::with_capacity(steps.len());
    let mut mark = vec![false; p.len()];
    for j in 1..shifts.len() {
        mark.iter_mut().for_each(|x| *x = false);
        for i in 0..j {
            let delta = shifts[j] - shifts[i];
            if delta <= span {
                for &r in &columns[delta] {
                    mark[r] = true;
                }
            }
        }
        q.push(mark.iter().filter(|&&x| x).count());
    }
    let total = q.iter().sum();
    VariableCount { q, total }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_constant_count() {
        assert_eq!(repeated_count_constant(&[2, 5, 4, 2], 7, 3), 2);
        assert_eq!(repeated_count_constant(&[2, 5, 4, 2], 14, 9), 0);
    }

    #[test]
    fn worked_variable_count_dedups_columns() {
        let v = repeated_count_variable(&[2, 5, 4, 2], &[5, 2]);
        assert_eq!(v.q, vec![1, 2]);
        assert_eq!(v.total, 3);
        assert_eq!(repeated_count_variable(&[2, 5, 4, 2], &[]).total, 0);
    }
}
