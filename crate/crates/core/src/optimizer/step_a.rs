use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Unordered multiset of consecutive differences, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CandidateDifferenceSet {
    pub differences: Vec<usize>,
    pub sum: usize,
    pub pairwise_coprime: bool,
}

impl CandidateDifferenceSet {
    pub fn new(mut differences: Vec<usize>) -> Self {
        differences.sort_unstable();
        let sum = differences.iter().sum();
        let pairwise_coprime = differences
            .iter()
            .enumerate()
            .all(|(i, &a)| differences[i + 1..].iter().all(|&b| gcd(a, b) == 1));
        CandidateDifferenceSet {
            differences,
            sum,
            pairwise_coprime,
        }
    }
}

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn is_prime(v: usize) -> bool {
    v >= 2 && (2..).take_while(|d| d * d <= v).all(|d| v % d != 0)
}

/// Lexicographic k-subsets of `pool`, lazily.
struct Subsets<'a> {
    pool: &'a [usize],
    idx: Vec<usize>,
    done: bool,
}

impl<'a> Subsets<'a> {
    fn new(pool: &'a [usize], k: usize) -> Self {
        Subsets {
            pool,
            idx: (0..k).collect(),
            done: k > pool.len(),
        }
    }
}

impl Iterator for Subsets<'_> {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.iter().map(|&i| self.pool[i]).collect();
        let k = self.idx.len();
        let n = self.pool.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// `k` differences with sum in [ceil(0.9 * max_sum), max_sum]. Small-prime
/// subsets completed by a remainder come first, then seeded random
/// compositions favouring coprime neighbours.
pub(crate) fn step_a_sized<R: Rng>(
    k: usize,
    max_sum: usize,
    budget: usize,
    rng: &mut R,
) -> Vec<CandidateDifferenceSet> {
    let lo = (9 * max_sum).div_ceil(10).max(k);
    let mut out: Vec<CandidateDifferenceSet> = Vec::new();
    let push = |out: &mut Vec<CandidateDifferenceSet>, d: Vec<usize>| {
        let c = CandidateDifferenceSet::new(d);
        if !out.contains(&c) {
            out.push(c);
        }
    };
    if k == 1 {
        push(&mut out, vec![max_sum]);
        return out;
    }
    let mean = max_sum as f64 / k as f64;
    let top = ((2.0 * mean) as usize).max(7);
    let primes: Vec<usize> = (5..=top).filter(|&p| is_prime(p)).collect();
    let enumerated = budget.div_ceil(2);
    for sub in Subsets::new(&primes, k - 1) {
        if out.len() >= enumerated {
            break;
        }
        let s: usize = sub.iter().sum();
        if s < max_sum {
            let mut d = sub;
            d.push(max_sum - s);
            push(&mut out, d);
        }
    }
    let mut attempts = 0;
    while out.len() < budget && attempts < budget * 64 {
        attempts += 1;
        let target = rng.gen_range(lo..=max_sum);
        let mut d: Vec<usize> = Vec::with_capacity(k);
        let mut sum = 0;
        for i in 0..k - 1 {
            let room = target - sum - (k - 1 - i);
            let hi = top.min(room).max(1);
            let mut v = rng.gen_range(1..=hi);
            for _ in 0..4 {
                if d.last().is_none_or(|&p| gcd(p, v) == 1) {
                    break;
                }
                v = rng.gen_range(1..=hi);
            }
            d.push(v);
            sum += v;
        }
        d.push(target - sum);
        push(&mut out, d);
    }
    out
}

pub fn step_a_candidates(
    len: usize,
    n: usize,
    budget: usize,
    seed: u64,
) -> Result<Vec<CandidateDifferenceSet>> {
    if n < 2 {
        return invalid("need n >= 2");
    }
    if budget == 0 {
        return invalid("budget must be at least 1");
    }
    if n > len {
        return invalid(format!(
            "{} differences cannot fit in L-1 = {}",
            n - 1,
            len.saturating_sub(1)
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(step_a_sized(n - 1, len - 1, budget, &mut rng))
}
