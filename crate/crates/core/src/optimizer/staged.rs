use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::optimizer::step_a::step_a_sized;
use crate::optimizer::step_b::{best_constant_key, distinct_permutations};
use crate::optimizer::{scorecard, Scorecard};
use crate::sampling::TapSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StagedParams {
    pub seed: u64,
    /// Differences adjoined per stage (at most 10).
    pub chunk: usize,
    /// Step-A candidates per attempt.
    pub candidates: usize,
    /// Fresh attempts per stage before giving up.
    pub retries: usize,
    /// Largest optimal step accepted for an intermediate join.
    pub sigma_limit: usize,
}

impl Default for StagedParams {
    fn default() -> Self {
        StagedParams {
            seed: 0,
            chunk: 5,
            candidates: 8,
            retries: 4,
            sigma_limit: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTrace {
    pub stage: usize,
    pub attempt: usize,
    pub candidates_tried: usize,
    pub orderings_evaluated: usize,
    pub rejected: usize,
    pub join: Vec<usize>,
    pub join_length: usize,
    pub join_m: usize,
    pub exponent: usize,
    pub sigma: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StagedResult {
    pub differences: Vec<usize>,
    pub scorecard: Scorecard,
    pub trace: Vec<StageTrace>,
}

type Key = (usize, usize, std::cmp::Reverse<Vec<usize>>);

/// Grows an ordered difference set by prepending the best ordering of fresh
/// Step-A sets. Each intermediate join Y_p X is scored on its own register
/// of length 1 + sum(Y_p X) with m scaled as floor(#join * m / (n-1)).
pub fn staged_search(
    len: usize,
    n: usize,
    m: usize,
    params: &StagedParams,
) -> Result<StagedResult> {
    if n < 3 {
        return invalid("staged search needs n >= 3");
    }
    if m == 0 || m >= n {
        return invalid(format!("need 1 <= m < n, got m={m}"));
    }
    if n > len {
        return invalid(format!(
            "{} differences cannot fit in L-1 = {}",
            n - 1,
            len.saturating_sub(1)
        ));
    }
    if params.chunk == 0 || params.chunk > 10 || params.candidates == 0 {
        return invalid("chunk must be in 1..=10 and candidates positive");
    }
    let total = n - 1;
    let mut x: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    let mut attempts = 0usize;
    let mut stage = 0usize;
    while x.len() < total {
        stage += 1;
        let s = params.chunk.min(total - x.len());
        let after = x.len() + s;
        let used: usize = x.iter().sum();
        let rem = len - 1 - used;
        let last = after == total;
        let max_sum = if last {
            rem
        } else {
            (((len - 1) * s) / total).min(rem - (total - after)).max(s)
        };
        let join_m = ((after * m) / total).max(1).min(after);
        let mut chosen: Option<(Key, usize)> = None;
        let mut best_any: Option<Key> = None;
        for attempt in 0..=params.retries {
            attempts += 1;
            let mut rng = ChaCha8Rng::seed_from_u64(
                params.seed
                    ^ ((stage as u64) << 32)
                    ^ (attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
            );
            let cands = step_a_sized(s, max_sum, params.candidates, &mut rng);
            let joins: Vec<Vec<usize>> = cands
                .iter()
                .flat_map(|c| distinct_permutations(&c.differences))
                .map(|y| y.into_iter().chain(x.iter().copied()).collect())
                .collect();
            let evaluated = joins.len();
            let scored: Vec<Key> = joins
                .into_par_iter()
                .filter_map(|j: Vec<usize>| {
                    let jl = if last {
                        len
                    } else {
                        1 + j.iter().sum::<usize>()
                    };
                    best_constant_key(&j, join_m, jl).map(|(e, sg)| (e, sg, std::cmp::Reverse(j)))
                })
                .collect();
            let rejected = scored.iter().filter(|k| k.1 > params.sigma_limit).count();
            let pick = |keys: &mut dyn Iterator<Item = &Key>| keys.max().cloned();
            let accepted = pick(&mut scored.iter().filter(|k| k.1 <= params.sigma_limit || last));
            let any = pick(&mut scored.iter());
            if let Some(a) = any {
                if best_any.as_ref().is_none_or(|b| a > *b) {
                    best_any = Some(a);
                }
            }
            if let Some(a) = accepted {
                let std::cmp::Reverse(j) = &a.2;
                trace.push(StageTrace {
                    stage,
                    attempt,
                    candidates_tried: cands.len(),
                    orderings_evaluated: evaluated,
                    rejected,
                    join: j.clone(),
                    join_length: if last {
                        len
                    } else {
                        1 + j.iter().sum::<usize>()
                    },
                    join_m,
                    exponent: a.0,
                    sigma: a.1,
                });
                chosen = Some((a, attempt));
                break;
            }
        }
        match chosen {
            Some(((_, _, std::cmp::Reverse(j)), _)) => x = j,
            None => {
                let (exp, best) =
                    best_any.map_or((0, x.clone()), |(e, _, std::cmp::Reverse(j))| (e, j));
                return Err(Error::SearchExhausted {
                    attempts,
                    best,
                    best_cost: exp as f64,
                });
            }
        }
    }
    let taps = TapSet::from_differences(1, &x, len)?;
    let card = scorecard(&taps, n, m, len)?;
    Ok(StagedResult {
        differences: x,
        scorecard: card,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_search_is_valid_and_deterministic() {
        let p = StagedParams {
            seed: 11,
            ..StagedParams::default()
        };
        let a = staged_search(60, 8, 2, &p).unwrap();
        let b = staged_search(60, 8, 2, &p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.differences.len(), 7);
        assert!(a.differences.iter().sum::<usize>() <= 59);
        for t in &a.trace {
            assert!(t.join_length <= 60);
        }
    }

    #[test]
    fn three_taps_single_stage() {
        let r = staged_search(40, 3, 1, &StagedParams::default()).unwrap();
        assert_eq!(r.differences.len(), 2);
        assert_eq!(r.trace.len(), 1);
    }
}
