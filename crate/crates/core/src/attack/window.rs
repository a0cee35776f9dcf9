use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::attack::gfsga::{AttackOptions, AttackResult};
use crate::attack::search::{
    build_plan, check_blocks, reproduces, run_branches, SamplePlan, Stats,
};
use crate::bits::BitVec;
use crate::complexity::{internal_state_recovery_cost, ComplexityEstimate};
use crate::error::{invalid, Result};
use crate::registers::{preimage_table, GeneratorSpec, Taps};
use crate::sampling::{tagged_profile, CountingModel, StopRule, TapSet};

/// Shift-by-one sampling over the first p-1 clocks, during which every
/// filter input still reads an initial state bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowRecovery {
    pub p: usize,
    pub window_samples: usize,
    pub model: CountingModel,
    pub q: Vec<usize>,
    pub recovered_bits: usize,
    pub guessed_bits: usize,
    /// log2 of the number of preimages kept for each sample.
    pub per_sample_log2: Vec<usize>,
    pub estimate: Option<ComplexityEstimate>,
}

/// Tap sets in filter input order.
pub fn window_groups(gen: &GeneratorSpec) -> Vec<&TapSet> {
    match &gen.taps {
        Taps::Single(t) => vec![t],
        Taps::Hybrid { nfsr, lfsr } => vec![nfsr, lfsr],
    }
}

pub fn window_analysis(
    groups: &[&TapSet],
    n: usize,
    m: usize,
    model: CountingModel,
) -> Result<WindowRecovery> {
    if groups.is_empty() {
        return invalid("no tap sets");
    }
    let p = groups
        .iter()
        .map(|t| t.register_length() - t.last())
        .min()
        .unwrap();
    if p < 2 {
        return invalid("last tap sits in the final cell; the window is empty");
    }
    if m == 0 || m > n {
        return invalid(format!("need 1 <= m <= n, got n={n} m={m}"));
    }
    let window = p - 1;
    let len: usize = groups.iter().map(|t| t.register_length()).sum();
    let prof = tagged_profile(
        groups,
        &vec![1; window - 1],
        StopRule::Samples(window),
        model,
    )?;
    let recovered = prof.n * window - prof.total;
    let guessed = len.saturating_sub(recovered);
    let per_sample_log2 = std::iter::once(n - m)
        .chain(prof.q.iter().map(|&q| (n - m).saturating_sub(q)))
        .collect();
    Ok(WindowRecovery {
        p,
        window_samples: window,
        model,
        estimate: internal_state_recovery_cost(&prof.q, n, m, len, recovered.min(len)).ok(),
        q: prof.q,
        recovered_bits: recovered,
        guessed_bits: guessed,
        per_sample_log2,
    })
}

struct WindowSearch<'a> {
    plan: &'a [SamplePlan],
    classes: &'a [Vec<u32>],
    gen: &'a GeneratorSpec,
    idx: &'a [usize],
    keystream: &'a [u32],
    unknown: &'a [usize],
    exhaustive: bool,
    known: Vec<bool>,
    stats: Stats,
    found: Vec<BitVec>,
}

impl WindowSearch<'_> {
    fn descend(&mut self, j: usize) -> bool {
        let plan = self.plan;
        let classes = self.classes;
        let want = plan[j].want(&self.known);
        for &x in &classes[plan[j].z as usize] {
            if x & plan[j].mask != want {
                self.stats.candidates_pruned += 1;
                continue;
            }
            if self.try_candidate(j, x) {
                return true;
            }
        }
        false
    }

    fn try_candidate(&mut self, j: usize, x: u32) -> bool {
        self.stats.nodes += 1;
        for &(i, v) in &self.plan[j].fresh {
            self.known[v] = (x >> i) & 1 == 1;
        }
        if j + 1 == self.plan.len() {
            self.leaf()
        } else {
            self.descend(j + 1)
        }
    }

    fn leaf(&mut self) -> bool {
        let mut state = BitVec::from_bits(&self.known);
        for a in 0..1u64 << self.unknown.len() {
            for (k, &c) in self.unknown.iter().enumerate() {
                state.set(c, (a >> k) & 1 == 1);
            }
            self.stats.systems_solved += 1;
            if reproduces(self.gen, self.idx, &state, self.keystream) {
                self.stats.verified_solutions += 1;
                self.found.push(state.clone());
                if !self.exhaustive {
                    return true;
                }
            }
        }
        false
    }
}

/// Largest number of unrecovered state bits enumerated per leaf.
const MAX_GUESSED: usize = 30;

/// Recovers the initial state of an NFSR or hybrid filter generator from the
/// sampling window: guesses consistent preimages for the p-1 window samples,
/// which fix R_p state bits, then enumerates the rest and keeps states that
/// reproduce the whole keystream.
pub fn nfsr_window_recover(
    gen: &GeneratorSpec,
    keystream: &[u32],
    model: CountingModel,
    options: &AttackOptions,
) -> Result<(WindowRecovery, AttackResult)> {
    let start = Instant::now();
    if model == CountingModel::Merged {
        return invalid("the merged counting model does not describe state bits; use per-register");
    }
    let groups = window_groups(gen);
    let analysis = window_analysis(&groups, gen.n(), gen.m(), model)?;
    if analysis.guessed_bits > MAX_GUESSED {
        return invalid(format!(
            "{} unrecovered bits exceed the enumeration limit of {MAX_GUESSED}",
            analysis.guessed_bits
        ));
    }
    let len = gen.state_len();
    let window = analysis.window_samples;
    check_blocks(keystream, gen.m(), window + len.div_ceil(gen.m()))?;

    let idx = gen.tap_indices();
    let vars: Vec<Vec<usize>> = (0..window)
        .map(|j| idx.iter().map(|&c| c + j).collect())
        .collect();
    let plan = build_plan(&vars, &keystream[..window], len);
    let mut covered = vec![false; len];
    for v in vars.iter().flatten() {
        covered[*v] = true;
    }
    let unknown: Vec<usize> = (0..len).filter(|&c| !covered[c]).collect();
    debug_assert_eq!(len - unknown.len(), analysis.recovered_bits);
    let classes: Vec<Vec<u32>> = preimage_table(&gen.filter)
        .into_iter()
        .map(|p| p.members)
        .collect();

    let first = classes[plan[0].z as usize].clone();
    let branch = |x: u32| {
        let mut s = WindowSearch {
            plan: &plan,
            classes: &classes,
            gen,
            idx: &idx,
            keystream,
            unknown: &unknown,
            exhaustive: options.exhaustive,
            known: vec![false; len],
            stats: Stats::default(),
            found: Vec::new(),
        };
        s.try_candidate(0, x);
        (s.stats, s.found)
    };
    let (stats, found) = run_branches(&first, options.workers, options.exhaustive, branch)?;
    let q = analysis.q.clone();
    Ok((
        analysis,
        AttackResult::from_search(stats, found, window, q, start),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registers::{FilterSpec, HybridSpec, LfsrSpec, NfsrSpec, Register};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nfsr_toy_recovery() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let nfsr = NfsrSpec::new(16, false, vec![vec![1], vec![4], vec![6, 9], vec![12]]).unwrap();
        let gen = GeneratorSpec::new(
            Register::Nfsr(nfsr),
            Taps::Single(TapSet::new(vec![1, 2, 4, 7, 9, 10], 16).unwrap()),
            FilterSpec::random_uniform(6, 2, &mut rng).unwrap(),
        )
        .unwrap();
        let state = BitVec::from_u64(rng.gen::<u64>() & 0xffff, 16);
        let ks = gen.keystream(&state, 64).unwrap();
        let opts = AttackOptions {
            workers: Some(2),
            ..AttackOptions::default()
        };
        let (w, r) = nfsr_window_recover(&gen, &ks, CountingModel::PerRegister, &opts).unwrap();
        assert_eq!(w.p, 6);
        assert_eq!(w.recovered_bits, 14);
        let got = r.recovered_state.unwrap();
        assert_eq!(gen.keystream(&got, 64).unwrap(), ks);
    }

    #[test]
    fn hybrid_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = HybridSpec::new(
            LfsrSpec::primitive(10).unwrap(),
            NfsrSpec::new(10, false, vec![vec![1], vec![3, 5]]).unwrap(),
            true,
        )
        .unwrap();
        let gen = GeneratorSpec::new(
            Register::Hybrid(h),
            Taps::Hybrid {
                nfsr: TapSet::new(vec![1, 3, 6], 10).unwrap(),
                lfsr: TapSet::new(vec![2, 5], 10).unwrap(),
            },
            FilterSpec::random_uniform(5, 1, &mut rng).unwrap(),
        )
        .unwrap();
        let state = BitVec::from_u64(rng.gen::<u64>() & 0xfffff, 20);
        let ks = gen.keystream(&state, 80).unwrap();
        assert!(
            nfsr_window_recover(&gen, &ks, CountingModel::Merged, &AttackOptions::default())
                .is_err()
        );
        let (w, r) = nfsr_window_recover(
            &gen,
            &ks,
            CountingModel::PerRegister,
            &AttackOptions::default(),
        )
        .unwrap();
        assert_eq!(w.p, 4);
        let got = r.recovered_state.unwrap();
        assert_eq!(gen.keystream(&got, 80).unwrap(), ks);
    }
}
