use rayon::prelude::*;

use crate::bits::BitVec;
use crate::error::{invalid, Result};
use crate::registers::GeneratorSpec;

/// One sample of a guess tree: output block, the variables read by each
/// filter input, and which inputs were already read by an earlier sample.
#[derive(Clone, Debug)]
pub(crate) struct SamplePlan {
    pub z: u32,
    pub mask: u32,
    pub repeated: Vec<(usize, usize)>,
    pub fresh: Vec<(usize, usize)>,
}

impl SamplePlan {
    pub fn want(&self, known: &[bool]) -> u32 {
        self.repeated
            .iter()
            .fold(0, |acc, &(i, v)| acc | (known[v] as u32) << i)
    }
}

/// `vars[j][i]` is the variable behind input x_{i+1} of sample j.
pub(crate) fn build_plan(vars: &[Vec<usize>], z: &[u32], num_vars: usize) -> Vec<SamplePlan> {
    let mut seen = vec![false; num_vars];
    vars.iter()
        .zip(z)
        .map(|(vs, &z)| {
            let mut p = SamplePlan {
                z,
                mask: 0,
                repeated: Vec::new(),
                fresh: Vec::new(),
            };
            for (i, &v) in vs.iter().enumerate() {
                if seen[v] {
                    p.mask |= 1 << i;
                    p.repeated.push((i, v));
                } else {
                    p.fresh.push((i, v));
                }
            }
            for &v in vs {
                seen[v] = true;
            }
            p
        })
        .collect()
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Stats {
    pub systems_solved: u64,
    pub candidates_pruned: u64,
    pub verified_solutions: u64,
    pub nodes: u64,
    pub skipped: u64,
}

impl Stats {
    fn add(&mut self, o: &Stats) {
        self.systems_solved += o.systems_solved;
        self.candidates_pruned += o.candidates_pruned;
        self.verified_solutions += o.verified_solutions;
        self.nodes += o.nodes;
        self.skipped += o.skipped;
    }
}

/// Runs one branch per first-sample candidate. Without `exhaustive`,
/// branches run in waves of `workers` and the search stops after the first
/// wave with a success; the lowest branch index wins either way.
pub(crate) fn run_branches<F>(
    first: &[u32],
    workers: Option<usize>,
    exhaustive: bool,
    branch: F,
) -> Result<(Stats, Vec<BitVec>)>
where
    F: Fn(u32) -> (Stats, Vec<BitVec>) + Sync,
{
    let w = workers.unwrap_or_else(rayon::current_num_threads).max(1);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
        Ok(p) => p,
        Err(e) => return invalid(format!("cannot start {w} workers: {e}")),
    };
    let wave = if exhaustive { first.len().max(1) } else { w };
    let mut stats = Stats::default();
    let mut found = Vec::new();
    for chunk in first.chunks(wave) {
        let out: Vec<(Stats, Vec<BitVec>)> = if w == 1 {
            chunk.iter().map(|&x| branch(x)).collect()
        } else {
            pool.install(|| chunk.par_iter().map(|&x| branch(x)).collect())
        };
        for (s, f) in out {
            stats.add(&s);
            found.extend(f);
        }
        if !exhaustive && !found.is_empty() {
            break;
        }
    }
    Ok((stats, found))
}

/// Clocks `state` forward and compares every block against `keystream`.
pub(crate) fn reproduces(
    gen: &GeneratorSpec,
    idx: &[usize],
    state: &BitVec,
    keystream: &[u32],
) -> bool {
    let mut s = state.clone();
    for (k, &z) in keystream.iter().enumerate() {
        if gen.filter.eval(gen.filter_input(&s, idx)) != z {
            return false;
        }
        if k + 1 < keystream.len() {
            match gen.register.step(&s) {
                Ok(next) => s = next,
                Err(_) => return false,
            }
        }
    }
    true
}

pub(crate) fn check_blocks(keystream: &[u32], m: usize, needed: usize) -> Result<()> {
    if keystream.len() < needed {
        return Err(crate::error::Error::Keystream(format!(
            "{} blocks given, {needed} needed",
            keystream.len()
        )));
    }
    if let Some(z) = keystream.iter().find(|&&z| z >> m != 0) {
        return Err(crate::error::Error::Keystream(format!(
            "block {z:#x} wider than {m} bits"
        )));
    }
    Ok(())
}
