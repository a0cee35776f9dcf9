use std::collections::HashSet;

use gfsga_core::optimizer::{
    best_constant_key, distinct_permutations, gcd, next_permutation, staged_search,
    step_a_candidates, step_b_best_ordering, StagedParams,
};
use proptest::prelude::*;

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

fn multiset() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(1usize..=9, 1..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn distinct_permutations_are_complete(d in multiset()) {
        let perms = distinct_permutations(&d);
        let mut sorted = d.clone();
        sorted.sort_unstable();
        let mut counts = std::collections::BTreeMap::new();
        for &x in &d {
            *counts.entry(x).or_insert(0usize) += 1;
        }
        let expected = counts.values().fold(factorial(d.len()), |acc, &c| acc / factorial(c));
        prop_assert_eq!(perms.len(), expected);
        let set: HashSet<&Vec<usize>> = perms.iter().collect();
        prop_assert_eq!(set.len(), perms.len());
        for p in &perms {
            let mut s = p.clone();
            s.sort_unstable();
            prop_assert_eq!(&s, &sorted);
        }
        prop_assert!(perms.windows(2).all(|w| w[0] < w[1]));
        let mut last = perms.last().unwrap().clone();
        prop_assert!(!next_permutation(&mut last));
    }

    #[test]
    fn step_b_is_exhaustive(d in multiset(), extra in 0usize..20, mfrac in 0.0f64..1.0) {
        let n = d.len() + 1;
        let m = 1 + (mfrac * (n - 1) as f64) as usize;
        let len = d.iter().sum::<usize>() + 1 + extra;
        let brute = distinct_permutations(&d)
            .into_iter()
            .filter_map(|p| best_constant_key(&p, m, len).map(|(e, s)| (e, s, p)))
            .max_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(b.2.cmp(&a.2)));
        match step_b_best_ordering(&d, n, m, len) {
            Ok((order, card)) => {
                let (e, s, p) = brute.unwrap();
                prop_assert_eq!(&order, &p);
                prop_assert_eq!(card.optimal_sigma, s);
                prop_assert_eq!(card.constant.candidate_log2(), e as f64);
            }
            Err(_) => prop_assert!(brute.is_none()),
        }
    }

    #[test]
    fn step_a_is_deterministic_and_sized(len in 20usize..200, n in 2usize..12, budget in 1usize..40, seed in any::<u64>()) {
        prop_assume!(n <= len);
        let a = step_a_candidates(len, n, budget, seed);
        let b = step_a_candidates(len, n, budget, seed);
        prop_assert_eq!(&a, &b);
        if let Ok(cands) = a {
            prop_assert!(!cands.is_empty() && cands.len() <= budget);
            for c in cands {
                prop_assert_eq!(c.differences.len(), n - 1);
                prop_assert!(c.differences.iter().all(|&x| x >= 1));
                prop_assert_eq!(c.sum, c.differences.iter().sum::<usize>());
                prop_assert!(c.sum < len);
                prop_assert!(c.differences.windows(2).all(|w| w[0] <= w[1]));
                let coprime = c.differences.iter().enumerate().all(|(i, &x)| {
                    c.differences[i + 1..].iter().all(|&y| gcd(x, y) == 1)
                });
                prop_assert_eq!(c.pairwise_coprime, coprime);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn staged_search_is_deterministic(len in 40usize..90, n in 4usize..10, seed in any::<u64>()) {
        let params = StagedParams { seed, candidates: 3, ..StagedParams::default() };
        let m = 2.min(n - 1);
        let a = staged_search(len, n, m, &params);
        let b = staged_search(len, n, m, &params);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(&a.differences, &b.differences);
                prop_assert_eq!(a.trace.len(), b.trace.len());
                prop_assert_eq!(a.differences.len(), n - 1);
                prop_assert!(a.differences.iter().sum::<usize>() < len);
                prop_assert_eq!(a.scorecard.taps.len(), n);
            }
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            _ => prop_assert!(false, "runs disagree"),
        }
    }
}
