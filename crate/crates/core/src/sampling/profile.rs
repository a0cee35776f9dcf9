use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sampling::{consecutive_differences, sample_cap, TapSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    Constant,
    Greedy,
    Cyclic,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingSchedule {
    pub mode: SamplingMode,
    pub steps: Vec<usize>,
}

impl SamplingSchedule {
    pub fn constant(sigma: usize, count: usize) -> Self {
        SamplingSchedule {
            mode: SamplingMode::Constant,
            steps: vec![sigma; count],
        }
    }

    pub fn custom(steps: Vec<usize>) -> Self {
        SamplingSchedule {
            mode: SamplingMode::Custom,
            steps,
        }
    }

    /// Cumulative shifts of every sample, starting with 0.
    pub fn shifts(&self) -> Vec<usize> {
        shifts_of(&self.steps)
    }
}

pub(crate) fn shifts_of(steps: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(steps.len() + 1);
    let mut s = 0;
    out.push(0);
    for &d in steps {
        s += d;
        out.push(s);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopRule {
    /// Smallest c with n*c - R > L.
    Rank,
    /// Exactly this many samples.
    Samples(usize),
    /// Smallest c with n*(c-1) - R > L - 1: the samples before the last one
    /// already give L independent equations. This is the count behind the
    /// published greedy figures.
    #[serde(rename = "sample-margin")]
    SampleMargin,
}

/// Repeated input bits per sample. `q[j]` counts the taps of sample j+2 whose
/// labels already appeared in samples 1..=j+1; `repeated_sets[j]` lists them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepetitionProfile {
    pub mode: SamplingMode,
    pub steps: Vec<usize>,
    pub q: Vec<usize>,
    pub repeated_sets: Vec<Vec<usize>>,
    pub total: usize,
    pub samples: usize,
    pub k: Option<usize>,
    pub n: usize,
    pub register_length: usize,
}

impl RepetitionProfile {
    /// Independent equations available: n*c - R.
    pub fn equations(&self) -> usize {
        self.n * self.samples - self.total
    }

    pub fn is_overdefined(&self) -> bool {
        self.equations() > self.register_length
    }

    pub fn shifts(&self) -> Vec<usize> {
        shifts_of(&self.steps)
    }
}

/// Growable bitset over timeline labels.
#[derive(Clone, Debug, Default)]
pub(crate) struct LabelLine {
    words: Vec<u64>,
}

impl LabelLine {
    #[inline]
    pub(crate) fn contains(&self, l: usize) -> bool {
        self.words
            .get(l >> 6)
            .is_some_and(|w| (w >> (l & 63)) & 1 == 1)
    }

    #[inline]
    pub(crate) fn insert(&mut self, l: usize) {
        let k = l >> 6;
        if k >= self.words.len() {
            self.words.resize(k + 1, 0);
        }
        self.words[k] |= 1 << (l & 63);
    }
}

/// Incremental direct computation over encoded labels. A sample at shift s
/// reads `base[i] + s * stride`.
#[derive(Clone, Debug)]
pub(crate) struct Builder {
    base: Vec<usize>,
    stride: usize,
    line: LabelLine,
    shift: usize,
    pub(crate) steps: Vec<usize>,
    pub(crate) q: Vec<usize>,
    pub(crate) sets: Vec<Vec<usize>>,
    pub(crate) total: usize,
}

impl Builder {
    pub(crate) fn new(base: Vec<usize>, stride: usize) -> Self {
        let mut line = LabelLine::default();
        for &b in &base {
            line.insert(b);
        }
        Builder {
            base,
            stride,
            line,
            shift: 0,
            steps: Vec::new(),
            q: Vec::new(),
            sets: Vec::new(),
            total: 0,
        }
    }

    pub(crate) fn samples(&self) -> usize {
        self.q.len() + 1
    }

    pub(crate) fn last_shift(&self) -> usize {
        self.shift
    }

    /// Overlap of the sample at `shift` with everything read so far.
    pub(crate) fn overlap(&self, shift: usize) -> usize {
        let off = shift * self.stride;
        self.base
            .iter()
            .filter(|&&b| self.line.contains(b + off))
            .count()
    }

    pub(crate) fn push(&mut self, step: usize) {
        self.shift += step;
        let off = self.shift * self.stride;
        let mut set = Vec::new();
        for &b in &self.base {
            if self.line.contains(b + off) {
                set.push((b + off) / self.stride);
            }
        }
        for &b in &self.base {
            self.line.insert(b + off);
        }
        self.total += set.len();
        self.q.push(set.len());
        self.sets.push(set);
        self.steps.push(step);
    }

    fn satisfied(&self, stop: StopRule, n: usize, len: usize) -> bool {
        match stop {
            StopRule::Rank => n * self.samples() > len + self.total,
            StopRule::Samples(c) => self.samples() >= c,
            StopRule::SampleMargin => n * self.samples().saturating_sub(1) >= len + self.total,
        }
    }

    /// Extends the profile with `next_step` until `stop` holds.
    pub(crate) fn run(
        &mut self,
        stop: StopRule,
        n: usize,
        len: usize,
        mut next_step: impl FnMut(&Builder) -> Option<usize>,
    ) -> Result<()> {
        if let StopRule::Samples(0) = stop {
            return invalid("sample count must be at least 1");
        }
        let cap = match stop {
            StopRule::Rank | StopRule::SampleMargin => sample_cap(len),
            StopRule::Samples(c) => c,
        };
        while !self.satisfied(stop, n, len) {
            if self.samples() >= cap {
                return Err(Error::NotOverdefined {
                    samples: self.samples(),
                });
            }
            match next_step(self) {
                Some(s) => self.push(s),
                None => {
                    return match stop {
                        StopRule::Rank | StopRule::SampleMargin => Err(Error::NotOverdefined {
                            samples: self.samples(),
                        }),
                        StopRule::Samples(c) => invalid(format!(
                            "schedule provides {} samples, {c} requested",
                            self.samples()
                        )),
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn finish(
        self,
        mode: SamplingMode,
        k: Option<usize>,
        n: usize,
        len: usize,
    ) -> RepetitionProfile {
        let samples = self.samples();
        RepetitionProfile {
            mode,
            steps: self.steps,
            q: self.q,
            repeated_sets: self.sets,
            total: self.total,
            samples,
            k,
            n,
            register_length: len,
        }
    }
}

fn check_steps(steps: &[usize], len: usize) -> Result<()> {
    if let Some(&s) = steps.iter().find(|&&s| s == 0 || s > len) {
        return invalid(format!("sampling step {s} outside 1..={len}"));
    }
    Ok(())
}

/// Direct set computation of the repeated bits for `schedule`.
pub fn repetition_profile(
    taps: &TapSet,
    schedule: &SamplingSchedule,
    stop: StopRule,
) -> Result<RepetitionProfile> {
    let len = taps.register_length();
    check_steps(&schedule.steps, len)?;
    let mut b = Builder::new(taps.positions().to_vec(), 1);
    let mut it = schedule.steps.iter().copied();
    b.run(stop, taps.len(), len, |_| it.next())?;
    let k = (schedule.mode == SamplingMode::Constant)
        .then(|| schedule.steps.first().map(|&s| taps.span() / s))
        .flatten();
    Ok(b.finish(schedule.mode, k, taps.len(), len))
}

/// Constant step via the recursion I_1 = I_0 ∩ (I_0 + s),
/// I_i = I_{i-1} ∪ (I_0 ∩ (I_0 + i s)) with r_i = |I_i| and r_i = r_k beyond
/// k = floor((l_n - l_1)/s). Repeated label sets come from the timeline.
pub fn constant_profile(taps: &TapSet, sigma: usize, stop: StopRule) -> Result<RepetitionProfile> {
    let len = taps.register_length();
    check_steps(&[sigma], len)?;
    let n = taps.len();
    let k = taps.span() / sigma;
    let i0: BTreeSet<usize> = taps.positions().iter().copied().collect();
    let mut r = Vec::with_capacity(k);
    let mut acc: BTreeSet<usize> = BTreeSet::new();
    for i in 1..=k {
        for &l in taps.positions() {
            if i0.contains(&(l + i * sigma)) {
                acc.insert(l + i * sigma);
            }
        }
        r.push(acc.len());
    }
    let r_at = |i: usize| -> usize {
        if k == 0 {
            0
        } else {
            r[i.min(k) - 1]
        }
    };
    let mut b = Builder::new(taps.positions().to_vec(), 1);
    b.run(stop, n, len, |_| Some(sigma))?;
    let mut prof = b.finish(SamplingMode::Constant, Some(k), n, len);
    prof.q = (1..prof.samples).map(r_at).collect();
    prof.total = prof.q.iter().sum();
    Ok(prof)
}

/// Each step maximises the overlap of the next sample with all labels read
/// so far; ties go to the smallest step.
pub fn greedy_schedule(
    taps: &TapSet,
    stop: StopRule,
) -> Result<(SamplingSchedule, RepetitionProfile)> {
    let len = taps.register_length();
    let mut b = Builder::new(taps.positions().to_vec(), 1);
    b.run(stop, taps.len(), len, |b| {
        let last = b.last_shift();
        let mut best = (0usize, 1usize);
        for s in 1..=len {
            let o = b.overlap(last + s);
            if o > best.0 {
                best = (o, s);
            }
        }
        Some(best.1)
    })?;
    let prof = b.finish(SamplingMode::Greedy, None, taps.len(), len);
    let sched = SamplingSchedule {
        mode: SamplingMode::Greedy,
        steps: prof.steps.clone(),
    };
    Ok((sched, prof))
}

/// Steps cycle through the consecutive differences d_1..d_{n-1}.
pub fn cyclic_schedule(
    taps: &TapSet,
    stop: StopRule,
) -> Result<(SamplingSchedule, RepetitionProfile)> {
    if taps.len() < 2 {
        return invalid("cyclic sampling needs at least two taps");
    }
    let d = consecutive_differences(taps);
    let len = taps.register_length();
    let mut b = Builder::new(taps.positions().to_vec(), 1);
    let mut j = 0;
    b.run(stop, taps.len(), len, |_| {
        let s = d[j % d.len()];
        j += 1;
        Some(s)
    })?;
    let prof = b.finish(SamplingMode::Cyclic, None, taps.len(), len);
    let sched = SamplingSchedule {
        mode: SamplingMode::Cyclic,
        steps: prof.steps.clone(),
    };
    Ok((sched, prof))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1() -> TapSet {
        TapSet::new(vec![1, 6, 19, 26, 52, 63, 80], 80).unwrap()
    }

    #[test]
    fn worked_variable_example() {
        let t = TapSet::new(vec![3, 5, 10, 14, 16], 20).unwrap();
        let p = repetition_profile(
            &t,
            &SamplingSchedule::custom(vec![5, 2]),
            StopRule::Samples(3),
        )
        .unwrap();
        assert_eq!(p.q, vec![1, 2]);
        assert_eq!(p.repeated_sets[0], vec![10]);
        assert!(p.repeated_sets[1].contains(&10) && p.repeated_sets[1].contains(&21));
    }

    #[test]
    fn disjoint_shift() {
        let t = TapSet::new(vec![2, 4, 9], 20).unwrap();
        let p = repetition_profile(&t, &SamplingSchedule::custom(vec![8]), StopRule::Samples(2))
            .unwrap();
        assert_eq!(p.q, vec![0]);
    }

    #[test]
    fn greedy_example_one_prefix() {
        let (s, p) = greedy_schedule(&ex1(), StopRule::Samples(22)).unwrap();
        assert_eq!(&s.steps[..11], &[5, 13, 7, 26, 11, 17, 5, 11, 17, 5, 2]);
        assert_eq!(&p.q[..11], &[1, 2, 3, 4, 5, 6, 2, 2, 3, 2, 2]);
        assert_eq!(p.total, 67);
    }

    #[test]
    fn sample_margin_stops_one_sample_later_on_example_one() {
        let (_, rank) = greedy_schedule(&ex1(), StopRule::Rank).unwrap();
        let (_, margin) = greedy_schedule(&ex1(), StopRule::SampleMargin).unwrap();
        assert_eq!((rank.samples, rank.total), (21, 63));
        assert_eq!((margin.samples, margin.total), (22, 67));
        assert!(7 * 21 - 67 >= 80 && 7 * 20 - 63 < 80);
    }

    #[test]
    fn cyclic_example_two() {
        let (_, p) = cyclic_schedule(&ex1(), StopRule::Rank).unwrap();
        assert_eq!(
            p.q,
            vec![1, 2, 3, 4, 5, 6, 2, 2, 3, 4, 5, 6, 2, 2, 3, 4, 5, 6, 2, 2, 3]
        );
        assert_eq!((p.total, p.samples), (72, 22));
    }

    #[test]
    fn constant_example_one_sigma_one() {
        let p = constant_profile(&ex1(), 1, StopRule::Samples(16)).unwrap();
        assert_eq!(p.q, vec![0, 0, 0, 0, 1, 1, 2, 2, 2, 2, 3, 3, 4, 4, 4]);
        assert_eq!(p.total, 28);
        let direct = repetition_profile(
            &ex1(),
            &SamplingSchedule::constant(1, 15),
            StopRule::Samples(16),
        )
        .unwrap();
        assert_eq!(direct.q, p.q);
    }

    #[test]
    fn full_length_step_has_no_repeats() {
        let t = ex1();
        let p = constant_profile(&t, 80, StopRule::Rank).unwrap();
        assert!(p.q.iter().all(|&q| q == 0));
        assert_eq!(p.samples, 81usize.div_ceil(7));
    }

    #[test]
    fn cap_reports_not_overdefined() {
        let short = repetition_profile(
            &ex1(),
            &SamplingSchedule::custom(vec![1, 2]),
            StopRule::Rank,
        );
        assert!(matches!(short, Err(Error::NotOverdefined { .. })));
    }
}
