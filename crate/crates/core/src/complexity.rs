//! Attack-cost formulas in log2 space.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sampling::{
    consecutive_differences, constant_first_repeats, constant_profile, cyclic_schedule,
    greedy_schedule, RepetitionProfile, SamplingMode, StopRule, TapSet,
};

pub const CUBIC_SOLVER: f64 = 3.0;
pub const STRASSEN_OMEGA: f64 = 2.807;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Fsga {
        samples: usize,
    },
    Constant {
        sigma: usize,
    },
    Schedule {
        mode: SamplingMode,
        steps: Vec<usize>,
    },
    Window {
        window_samples: usize,
    },
    Annihilator,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowCosts {
    pub recovered_bits: usize,
    pub guessed_bits: usize,
    pub memory_bits: u64,
    pub data_bits: u64,
}

/// log2 cost = first-sample exponent + per-sample exponents + solver term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityEstimate {
    pub log2_total: f64,
    pub first_sample_exponent: f64,
    pub per_sample_exponents: Vec<f64>,
    pub solver_log2: f64,
    pub samples_used: usize,
    pub repeats_used: usize,
    pub provenance: Provenance,
    pub window: Option<WindowCosts>,
}

impl ComplexityEstimate {
    fn assemble(
        first: f64,
        per: Vec<f64>,
        solver: f64,
        samples: usize,
        repeats: usize,
        provenance: Provenance,
    ) -> Self {
        let log2_total = first + per.iter().sum::<f64>() + solver;
        ComplexityEstimate {
            log2_total,
            first_sample_exponent: first,
            per_sample_exponents: per,
            solver_log2: solver,
            samples_used: samples,
            repeats_used: repeats,
            provenance,
            window: None,
        }
    }

    /// log2 of the number of candidate systems, without the solver term.
    pub fn candidate_log2(&self) -> f64 {
        self.first_sample_exponent + self.per_sample_exponents.iter().sum::<f64>()
    }

    /// Two-decimal rendering used in tables.
    pub fn rounded(&self) -> f64 {
        round2(self.log2_total)
    }
}

pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NfsrCostParams {
    pub r: usize,
    pub e: usize,
    pub omega: f64,
}

impl Default for NfsrCostParams {
    fn default() -> Self {
        NfsrCostParams {
            r: 2,
            e: 1,
            omega: STRASSEN_OMEGA,
        }
    }
}

impl NfsrCostParams {
    pub fn validate(&self) -> Result<()> {
        if self.r < 1 || self.e < 1 {
            return invalid("r and e must be at least 1");
        }
        if !(self.omega > 2.0 && self.omega <= 3.0) {
            return invalid(format!("omega {} outside (2, 3]", self.omega));
        }
        Ok(())
    }
}

fn check_nm(n: usize, m: usize) -> Result<()> {
    if m == 0 || m > n {
        return invalid(format!("need 1 <= m <= n, got n={n} m={m}"));
    }
    Ok(())
}

fn clamped(n: usize, m: usize, q: &[usize]) -> Vec<f64> {
    q.iter()
        .map(|&qj| (n - m).saturating_sub(qj) as f64)
        .collect()
}

/// Integer count of candidate systems, 2^(n-m) * prod 2^max(0, n-m-q_j), as
/// its exponent.
pub fn candidate_exponent(q: &[usize], n: usize, m: usize) -> usize {
    (n - m)
        + q.iter()
            .map(|&qj| (n - m).saturating_sub(qj))
            .sum::<usize>()
}

/// 2^((n-m) * ceil(L/n)) * L^3.
pub fn fsga_cost(n: usize, m: usize, len: usize) -> Result<ComplexityEstimate> {
    if m == 0 || m >= n {
        return invalid(format!("FSGA needs 1 <= m < n, got n={n} m={m}"));
    }
    if len < n {
        return invalid(format!("L={len} smaller than n={n}"));
    }
    let c = len.div_ceil(n);
    let e = (n - m) as f64;
    Ok(ComplexityEstimate::assemble(
        e,
        vec![e; c - 1],
        CUBIC_SOLVER * (len as f64).log2(),
        c,
        0,
        Provenance::Fsga { samples: c },
    ))
}

fn profile_checks(profile: &RepetitionProfile, n: usize, m: usize, len: usize) -> Result<()> {
    check_nm(n, m)?;
    if profile.n != n || profile.register_length != len {
        return invalid("profile was computed for different (n, L)");
    }
    if !profile.is_overdefined() {
        return invalid(format!(
            "profile not overdefined: n*c - R = {} <= L = {len}",
            profile.equations()
        ));
    }
    Ok(())
}

pub fn gfsga_constant_cost(
    profile: &RepetitionProfile,
    n: usize,
    m: usize,
    len: usize,
) -> Result<ComplexityEstimate> {
    gfsga_constant_cost_with(profile, n, m, len, CUBIC_SOLVER)
}

pub fn gfsga_constant_cost_with(
    profile: &RepetitionProfile,
    n: usize,
    m: usize,
    len: usize,
    solver_exponent: f64,
) -> Result<ComplexityEstimate> {
    profile_checks(profile, n, m, len)?;
    let sigma = match profile.steps.first() {
        Some(&s) if profile.steps.iter().all(|&x| x == s) => s,
        Some(_) => return invalid("profile steps are not constant"),
        None => len,
    };
    Ok(ComplexityEstimate::assemble(
        (n - m) as f64,
        clamped(n, m, &profile.q),
        solver_exponent * (len as f64).log2(),
        profile.samples,
        profile.total,
        Provenance::Constant { sigma },
    ))
}

pub fn gfsga_variable_cost(
    profile: &RepetitionProfile,
    n: usize,
    m: usize,
    len: usize,
) -> Result<ComplexityEstimate> {
    gfsga_variable_cost_with(profile, n, m, len, CUBIC_SOLVER)
}

pub fn gfsga_variable_cost_with(
    profile: &RepetitionProfile,
    n: usize,
    m: usize,
    len: usize,
    solver_exponent: f64,
) -> Result<ComplexityEstimate> {
    profile_checks(profile, n, m, len)?;
    Ok(ComplexityEstimate::assemble(
        (n - m) as f64,
        clamped(n, m, &profile.q),
        solver_exponent * (len as f64).log2(),
        profile.samples,
        profile.total,
        Provenance::Schedule {
            mode: profile.mode,
            steps: profile.steps.clone(),
        },
    ))
}

/// Minimal-c constant-step cost summary computed from first-repeat indices
/// without building label sets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantSummary {
    pub sigma: usize,
    pub samples: usize,
    pub repeats: usize,
    pub candidate_exponent: usize,
}

pub fn constant_summary(
    d: &[usize],
    m: usize,
    len: usize,
    sigma: usize,
) -> Option<ConstantSummary> {
    let n = d.len() + 1;
    let mut first: Vec<usize> = constant_first_repeats(d, sigma)
        .into_iter()
        .flatten()
        .collect();
    first.sort_unstable();
    let cap = crate::sampling::sample_cap(len);
    let mut repeats = 0usize;
    let mut exponent = n - m;
    let mut active = 0usize;
    for c in 1..=cap {
        if n * c > len + repeats {
            return Some(ConstantSummary {
                sigma,
                samples: c,
                repeats,
                candidate_exponent: exponent,
            });
        }
        while active < first.len() && first[active] <= c {
            active += 1;
        }
        repeats += active;
        exponent += (n - m).saturating_sub(active);
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaCost {
    pub sigma: usize,
    pub log2_total: Option<f64>,
    pub samples: Option<usize>,
    pub repeats: Option<usize>,
}

/// Rank-minimal constant-step cost for every step 1..=L.
pub fn constant_sigma_sweep(taps: &TapSet, m: usize, solver_exponent: f64) -> Vec<SigmaCost> {
    let len = taps.register_length();
    let n = taps.len();
    (1..=len)
        .into_par_iter()
        .map(
            |sigma| match constant_profile(taps, sigma, StopRule::Rank) {
                Ok(p) => {
                    let est = gfsga_constant_cost_with(&p, n, m, len, solver_exponent).ok();
                    SigmaCost {
                        sigma,
                        log2_total: est.map(|e| e.log2_total),
                        samples: Some(p.samples),
                        repeats: Some(p.total),
                    }
                }
                Err(_) => SigmaCost {
                    sigma,
                    log2_total: None,
                    samples: None,
                    repeats: None,
                },
            },
        )
        .collect()
}

/// Smallest rank-minimal constant-step cost over all steps; ties go to the
/// smallest step.
pub fn optimal_constant_sigma(
    taps: &TapSet,
    n: usize,
    m: usize,
    len: usize,
) -> Result<(usize, ComplexityEstimate)> {
    optimal_constant_sigma_with(taps, n, m, len, CUBIC_SOLVER)
}

pub fn optimal_constant_sigma_with(
    taps: &TapSet,
    n: usize,
    m: usize,
    len: usize,
    solver_exponent: f64,
) -> Result<(usize, ComplexityEstimate)> {
    check_nm(n, m)?;
    if taps.len() != n || taps.register_length() != len {
        return invalid("tap set does not match (n, L)");
    }
    let d = consecutive_differences(taps);
    let best = (1..=len)
        .into_par_iter()
        .filter_map(|s| constant_summary(&d, m, len, s))
        .min_by_key(|s| (s.candidate_exponent, s.sigma))
        .ok_or(Error::NotOverdefined {
            samples: crate::sampling::sample_cap(len),
        })?;
    let profile = constant_profile(taps, best.sigma, StopRule::Rank)?;
    let est = gfsga_constant_cost_with(&profile, n, m, len, solver_exponent)?;
    Ok((best.sigma, est))
}

/// log2 of sum_{i=0}^{k} C(L, i).
pub fn log2_binomial_prefix(len: usize, k: usize) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for i in 1..=k.min(len) {
        term *= (len - i + 1) as f64 / i as f64;
        sum += term;
    }
    sum.log2()
}

/// Candidate count times D^omega with D = sum_{i <= e*r} C(L, i).
pub fn nfsr_gfsga_cost(
    profile: &RepetitionProfile,
    n: usize,
    m: usize,
    len: usize,
    params: NfsrCostParams,
) -> Result<ComplexityEstimate> {
    params.validate()?;
    if params.e * params.r > len {
        return invalid(format!("e*r = {} exceeds L = {len}", params.e * params.r));
    }
    profile_checks(profile, n, m, len)?;
    Ok(ComplexityEstimate::assemble(
        (n - m) as f64,
        clamped(n, m, &profile.q),
        params.omega * log2_binomial_prefix(len, params.e * params.r),
        profile.samples,
        profile.total,
        Provenance::Schedule {
            mode: profile.mode,
            steps: profile.steps.clone(),
        },
    ))
}

/// Window attack: candidates over the p-1 window samples (q has p-2
/// entries) times 2^(L - R_p) guesses. Memory (p-1)*n*2^(n-1) + L bits,
/// data (p-1) + L bits.
pub fn internal_state_recovery_cost(
    q: &[usize],
    n: usize,
    m: usize,
    len: usize,
    recovered_bits: usize,
) -> Result<ComplexityEstimate> {
    check_nm(n, m)?;
    let window = q.len() + 1;
    if window * n <= len {
        return invalid(format!(
            "window of {window} samples too short: {window}*{n} <= {len}"
        ));
    }
    if recovered_bits > len {
        return invalid(format!("R_p = {recovered_bits} exceeds L = {len}"));
    }
    let guessed = len - recovered_bits;
    let mut est = ComplexityEstimate::assemble(
        (n - m) as f64,
        clamped(n, m, q),
        guessed as f64,
        window,
        q.iter().sum(),
        Provenance::Window {
            window_samples: window,
        },
    );
    est.window = Some(WindowCosts {
        recovered_bits,
        guessed_bits: guessed,
        memory_bits: (window as u64) * (n as u64) * (1u64 << (n - 1)) + len as u64,
        data_bits: (window + len) as u64,
    });
    Ok(est)
}

/// Sum of counts_i * log2(sizes_i) plus omega * log2 L.
pub fn restricted_annihilator_cost(
    sizes: &[f64],
    counts: &[usize],
    len: usize,
    omega: f64,
) -> Result<ComplexityEstimate> {
    if sizes.is_empty() || sizes.len() != counts.len() {
        return invalid("sizes and counts must be non-empty and of equal length");
    }
    if sizes.iter().any(|&s| !(s > 0.0)) || counts.contains(&0) {
        return invalid("sizes must be positive reals and counts positive integers");
    }
    let mut flat: Vec<f64> = Vec::new();
    for (&s, &c) in sizes.iter().zip(counts) {
        flat.extend(std::iter::repeat(s.log2()).take(c));
    }
    let first = flat.remove(0);
    let samples = flat.len() + 1;
    Ok(ComplexityEstimate::assemble(
        first,
        flat,
        omega * (len as f64).log2(),
        samples,
        0,
        Provenance::Annihilator,
    ))
}

/// Costs of the three sampling modes for one tap set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeCosts {
    pub sigma: usize,
    pub constant: ComplexityEstimate,
    pub greedy: Option<ComplexityEstimate>,
    pub cyclic: Option<ComplexityEstimate>,
}

pub fn mode_costs(taps: &TapSet, m: usize, solver_exponent: f64) -> Result<ModeCosts> {
    let n = taps.len();
    let len = taps.register_length();
    let (sigma, constant) = optimal_constant_sigma_with(taps, n, m, len, solver_exponent)?;
    let greedy = greedy_schedule(taps, StopRule::Rank)
        .ok()
        .and_then(|(_, p)| gfsga_variable_cost_with(&p, n, m, len, solver_exponent).ok());
    let cyclic = cyclic_schedule(taps, StopRule::Rank)
        .ok()
        .and_then(|(_, p)| gfsga_variable_cost_with(&p, n, m, len, solver_exponent).ok());
    Ok(ModeCosts {
        sigma,
        constant,
        greedy,
        cyclic,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub m: usize,
    pub computed: [Option<f64>; 3],
    pub deltas: [Option<f64>; 3],
    pub total_abs_delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCalibration {
    pub taps: TapSet,
    pub targets: [f64; 3],
    pub rows: Vec<CalibrationRow>,
    pub best_m: usize,
}

/// Sweeps the filter width m and reports which one best reproduces a
/// (constant, greedy, cyclic) cost triple. A missing mode counts as a
/// 1000-bit miss.
pub fn calibrate_m(
    taps: &TapSet,
    targets: [f64; 3],
    ms: &[usize],
    solver_exponent: f64,
) -> Result<MCalibration> {
    if ms.is_empty() {
        return invalid("empty m range");
    }
    let mut rows = Vec::new();
    for &m in ms {
        let costs = mode_costs(taps, m, solver_exponent)?;
        let computed = [
            Some(costs.constant.log2_total),
            costs.greedy.map(|e| e.log2_total),
            costs.cyclic.map(|e| e.log2_total),
        ];
        let mut deltas = [None; 3];
        let mut total = 0.0;
        for i in 0..3 {
            deltas[i] = computed[i].map(|c| c - targets[i]);
            total += deltas[i].map_or(1000.0, f64::abs);
        }
        rows.push(CalibrationRow {
            m,
            computed,
            deltas,
            total_abs_delta: total,
        });
    }
    let best_m = rows
        .iter()
        .min_by(|a, b| {
            a.total_abs_delta
                .total_cmp(&b.total_abs_delta)
                .then(a.m.cmp(&b.m))
        })
        .unwrap()
        .m;
    Ok(MCalibration {
        taps: taps.clone(),
        targets,
        rows,
        best_m,
    })
}
