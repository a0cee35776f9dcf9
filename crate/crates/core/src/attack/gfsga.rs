use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::attack::gf2::{Echelon, Insert};
use crate::attack::search::{
    build_plan, check_blocks, reproduces, run_branches, SamplePlan, Stats,
};
use crate::bits::BitVec;
use crate::error::{invalid, Error, Result};
use crate::registers::{preimage_table, GeneratorSpec, LabelExpressions, LfsrSpec, Register, Taps};
use crate::sampling::{repetition_profile, SamplingSchedule, StopRule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AttackOptions {
    pub workers: Option<usize>,
    pub exhaustive: bool,
    /// Cut a branch as soon as its linear equations contradict.
    pub linear_pruning: bool,
    /// Solve as soon as the system reaches full rank instead of guessing
    /// the remaining samples.
    pub early_solve: bool,
    /// Largest nullity whose solutions are enumerated at a leaf.
    pub max_free: usize,
}

impl Default for AttackOptions {
    fn default() -> Self {
        AttackOptions {
            workers: None,
            exhaustive: false,
            linear_pruning: false,
            early_solve: true,
            max_free: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackResult {
    pub recovered_state: Option<BitVec>,
    pub systems_solved: u64,
    pub candidates_pruned: u64,
    pub verified_solutions: u64,
    pub nodes: u64,
    pub skipped_underdetermined: u64,
    pub samples_used: usize,
    pub q: Vec<usize>,
    pub wall_clock_ms: f64,
}

impl AttackResult {
    pub(crate) fn from_search(
        stats: Stats,
        found: Vec<BitVec>,
        samples: usize,
        q: Vec<usize>,
        start: Instant,
    ) -> Self {
        AttackResult {
            recovered_state: found.into_iter().next(),
            systems_solved: stats.systems_solved,
            candidates_pruned: stats.candidates_pruned,
            verified_solutions: stats.verified_solutions,
            nodes: stats.nodes,
            skipped_underdetermined: stats.skipped,
            samples_used: samples,
            q,
            wall_clock_ms: start.elapsed().as_secs_f64() * 1e3,
        }
    }
}

struct LinearSearch<'a> {
    plan: &'a [SamplePlan],
    classes: &'a [Vec<u32>],
    exprs: &'a LabelExpressions,
    gen: &'a GeneratorSpec,
    idx: &'a [usize],
    keystream: &'a [u32],
    opts: &'a AttackOptions,
    known: Vec<bool>,
    echelon: Echelon,
    inconsistent: bool,
    stats: Stats,
    found: Vec<BitVec>,
}

impl LinearSearch<'_> {
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
        let rank0 = self.echelon.rank();
        let bad0 = self.inconsistent;
        let mut cut = false;
        for &(i, label) in &self.plan[j].fresh {
            let b = (x >> i) & 1 == 1;
            self.known[label] = b;
            if self.echelon.insert(self.exprs.get(label), b) == Insert::Contradiction {
                if self.opts.linear_pruning {
                    cut = true;
                    break;
                }
                self.inconsistent = true;
            }
        }
        let stop = if cut {
            self.stats.candidates_pruned += 1;
            false
        } else if (self.opts.early_solve && self.echelon.rank() == self.echelon.vars())
            || j + 1 == self.plan.len()
        {
            self.leaf()
        } else {
            self.descend(j + 1)
        };
        self.echelon.truncate(rank0);
        self.inconsistent = bad0;
        stop
    }

    fn leaf(&mut self) -> bool {
        self.stats.systems_solved += 1;
        if self.inconsistent {
            return false;
        }
        let sols = match self.echelon.solve_unique() {
            Some(x) => vec![x],
            None => match self.echelon.solutions(self.opts.max_free) {
                Some(v) => v,
                None => {
                    self.stats.skipped += 1;
                    return false;
                }
            },
        };
        for s in sols {
            if reproduces(self.gen, self.idx, &s, self.keystream) {
                self.stats.verified_solutions += 1;
                self.found.push(s);
                if !self.opts.exhaustive {
                    return true;
                }
            }
        }
        false
    }
}

struct Prepared<'a> {
    spec: &'a LfsrSpec,
    samples: usize,
    q: Vec<usize>,
    max_label: usize,
    plan: Vec<SamplePlan>,
    classes: Vec<Vec<u32>>,
}

fn prepare<'a>(
    gen: &'a GeneratorSpec,
    keystream: &[u32],
    schedule: &SamplingSchedule,
) -> Result<Prepared<'a>> {
    let (spec, taps) = match (&gen.register, &gen.taps) {
        (Register::Lfsr(s), Taps::Single(t)) => (s, t),
        _ => return invalid("linear recovery needs an LFSR filter generator"),
    };
    let profile = match repetition_profile(taps, schedule, StopRule::Rank) {
        Ok(p) => p,
        Err(Error::NotOverdefined { samples }) => {
            return invalid(format!(
                "schedule never becomes overdefined ({samples} samples)"
            ))
        }
        Err(e) => return Err(e),
    };
    let shifts = profile.shifts();
    let last = *shifts.last().unwrap();
    check_blocks(keystream, gen.m(), last + 1)?;
    let max_label = taps.last() + last;
    let vars: Vec<Vec<usize>> = shifts
        .iter()
        .map(|&s| taps.positions().iter().map(|&l| l + s).collect())
        .collect();
    let z: Vec<u32> = shifts.iter().map(|&s| keystream[s]).collect();
    Ok(Prepared {
        spec,
        samples: profile.samples,
        q: profile.q,
        max_label,
        plan: build_plan(&vars, &z, max_label + 1),
        classes: preimage_table(&gen.filter)
            .into_iter()
            .map(|p| p.members)
            .collect(),
    })
}

/// Recovers the initial state of an LFSR filter generator by guessing
/// filtered preimages sample by sample in schedule order and solving the
/// accumulated linear system. Sampling stops at the first overdefined count.
pub fn gfsga_recover(
    gen: &GeneratorSpec,
    keystream: &[u32],
    schedule: &SamplingSchedule,
    options: &AttackOptions,
) -> Result<AttackResult> {
    let start = Instant::now();
    let prep = prepare(gen, keystream, schedule)?;
    let len = prep.spec.length();
    let exprs = LabelExpressions::new(prep.spec, prep.max_label);
    let idx = gen.tap_indices();
    let first = prep.classes[prep.plan[0].z as usize].clone();
    let branch = |x: u32| {
        let mut s = LinearSearch {
            plan: &prep.plan,
            classes: &prep.classes,
            exprs: &exprs,
            gen,
            idx: &idx,
            keystream,
            opts: options,
            known: vec![false; prep.max_label + 1],
            echelon: Echelon::new(len),
            inconsistent: false,
            stats: Stats::default(),
            found: Vec::new(),
        };
        s.try_candidate(0, x);
        (s.stats, s.found)
    };
    let (stats, found) = run_branches(&first, options.workers, options.exhaustive, branch)?;
    if options.exhaustive && !options.early_solve && !options.linear_pruning {
        debug_assert_eq!(
            Some(stats.systems_solved),
            candidate_tree_size(gen, keystream, schedule).ok()
        );
    }
    Ok(AttackResult::from_search(
        stats,
        found,
        prep.samples,
        prep.q,
        start,
    ))
}

/// Number of complete assignments in the guess tree: the sum over all full
/// paths of consistent filtered preimages, without any linear algebra.
pub fn candidate_tree_size(
    gen: &GeneratorSpec,
    keystream: &[u32],
    schedule: &SamplingSchedule,
) -> Result<u64> {
    fn walk(plan: &[SamplePlan], classes: &[Vec<u32>], known: &mut [bool], j: usize) -> u64 {
        if j == plan.len() {
            return 1;
        }
        let want = plan[j].want(known);
        let mut total = 0;
        for &x in &classes[plan[j].z as usize] {
            if x & plan[j].mask == want {
                for &(i, v) in &plan[j].fresh {
                    known[v] = (x >> i) & 1 == 1;
                }
                total += walk(plan, classes, known, j + 1);
            }
        }
        total
    }
    let prep = prepare(gen, keystream, schedule)?;
    let mut known = vec![false; prep.max_label + 1];
    Ok(walk(&prep.plan, &prep.classes, &mut known, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registers::{FilterSpec, LfsrSpec};
    use crate::sampling::TapSet;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy(seed: u64) -> (GeneratorSpec, BitVec) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gen = GeneratorSpec::new(
            Register::Lfsr(LfsrSpec::primitive(12).unwrap()),
            Taps::Single(TapSet::new(vec![1, 3, 6, 10], 12).unwrap()),
            FilterSpec::random_uniform(4, 2, &mut rng).unwrap(),
        )
        .unwrap();
        let state = BitVec::from_u64(rng.gen::<u64>() & 0xfff, 12);
        (gen, state)
    }

    #[test]
    fn recovers_toy_state() {
        for seed in 0..5 {
            let (gen, state) = toy(seed);
            let ks = gen.keystream(&state, 120).unwrap();
            let opts = AttackOptions {
                workers: Some(1),
                ..AttackOptions::default()
            };
            let r = gfsga_recover(&gen, &ks, &SamplingSchedule::constant(2, 40), &opts).unwrap();
            let got = r.recovered_state.unwrap();
            assert_eq!(gen.keystream(&got, 120).unwrap(), ks);
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let (gen, state) = toy(9);
        let ks = gen.keystream(&state, 120).unwrap();
        let sched = SamplingSchedule::constant(3, 40);
        let mut opts = AttackOptions {
            workers: Some(1),
            exhaustive: true,
            ..AttackOptions::default()
        };
        let a = gfsga_recover(&gen, &ks, &sched, &opts).unwrap();
        opts.workers = Some(4);
        let b = gfsga_recover(&gen, &ks, &sched, &opts).unwrap();
        assert_eq!(a.recovered_state, b.recovered_state);
        assert_eq!(a.systems_solved, b.systems_solved);
        assert!(a.verified_solutions >= 1);
    }

    #[test]
    fn full_tree_matches_path_count() {
        let (gen, state) = toy(4);
        let ks = gen.keystream(&state, 120).unwrap();
        let sched = SamplingSchedule::constant(2, 40);
        let opts = AttackOptions {
            workers: Some(2),
            exhaustive: true,
            early_solve: false,
            ..AttackOptions::default()
        };
        let r = gfsga_recover(&gen, &ks, &sched, &opts).unwrap();
        assert_eq!(
            r.systems_solved,
            candidate_tree_size(&gen, &ks, &sched).unwrap()
        );
        assert_eq!(r.recovered_state, Some(state));
    }

    #[test]
    fn bijective_filter_needs_one_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let gen = GeneratorSpec::new(
            Register::Lfsr(LfsrSpec::primitive(16).unwrap()),
            Taps::Single(TapSet::new(vec![1, 4, 9, 16], 16).unwrap()),
            FilterSpec::random_uniform(4, 4, &mut rng).unwrap(),
        )
        .unwrap();
        let state = BitVec::from_u64(0xbeef, 16);
        let ks = gen.keystream(&state, 64).unwrap();
        let r = gfsga_recover(
            &gen,
            &ks,
            &SamplingSchedule::constant(1, 20),
            &AttackOptions::default(),
        )
        .unwrap();
        assert_eq!(r.systems_solved, 1);
        assert_eq!(r.recovered_state, Some(state));
    }

    #[test]
    fn short_keystream_rejected() {
        let (gen, state) = toy(1);
        let ks = gen.keystream(&state, 3).unwrap();
        let r = gfsga_recover(
            &gen,
            &ks,
            &SamplingSchedule::constant(2, 40),
            &AttackOptions::default(),
        );
        assert!(matches!(r, Err(Error::Keystream(_))));
    }
}
