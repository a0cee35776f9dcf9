use std::path::PathBuf;

use gfsga_core::attack::AttackOptions;
use gfsga_core::complexity::{NfsrCostParams, CUBIC_SOLVER};
use gfsga_core::{
    CountingModel, FilterSpec, GeneratorSpec, HybridSpec, LfsrSpec, NfsrSpec, Register,
    SamplingMode, StopRule, TapSet, Taps,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Scenario document. Every section is optional; commands report which
/// ones they need.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: Option<u64>,
    pub generator: Option<GeneratorConfig>,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub attack: AttackConfig,
    pub optimize: Option<OptimizeConfig>,
    #[serde(default)]
    pub report: ReportConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RegisterConfig {
    /// Feedback positions default to the built-in primitive polynomial.
    Lfsr {
        length: usize,
        feedback: Option<Vec<usize>>,
    },
    Nfsr {
        length: usize,
        #[serde(default)]
        constant_term: bool,
        monomials: Vec<Vec<usize>>,
    },
    /// Two registers of `length` cells each; the LFSR comes first in the
    /// state vector.
    Hybrid {
        length: usize,
        lfsr_feedback: Option<Vec<usize>>,
        #[serde(default)]
        constant_term: bool,
        monomials: Vec<Vec<usize>>,
        #[serde(default = "yes")]
        coupling: bool,
    },
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TapsConfig {
    Single(Vec<usize>),
    Hybrid { nfsr: Vec<usize>, lfsr: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FilterConfig {
    /// Truth table, ceil(m/4) hex digits per entry, entry 0 first.
    Hex {
        table: String,
    },
    /// Balanced random table; the seed defaults to the scenario seed.
    UniformRandom {
        seed: Option<u64>,
    },
    Random {
        seed: Option<u64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub register: RegisterConfig,
    pub taps: TapsConfig,
    pub m: usize,
    pub filter: Option<FilterConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub mode: SamplingMode,
    /// Constant step; the optimal step is used when absent.
    pub sigma: Option<usize>,
    /// Steps of a custom schedule.
    pub steps: Option<Vec<usize>>,
    /// "rank", "sample-margin" or {"samples": c}; custom schedules take
    /// every listed step by default.
    pub stop: Option<StopRule>,
    pub solver_exponent: f64,
    pub calibrate_m: bool,
    pub calibration_ms: Vec<usize>,
    pub calibration_targets: Option<[f64; 3]>,
    /// Counting model for hybrid tap sets.
    pub model: CountingModel,
    /// Cost of solving the NFSR equation systems by linearisation.
    pub nfsr_cost: Option<NfsrCostParams>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            mode: SamplingMode::Constant,
            sigma: None,
            steps: None,
            stop: None,
            solver_exponent: CUBIC_SOLVER,
            calibrate_m: false,
            calibration_ms: vec![1, 2, 3, 4],
            calibration_targets: None,
            model: CountingModel::PerRegister,
            nfsr_cost: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackKind {
    /// Linear recovery for LFSRs, window recovery otherwise.
    #[default]
    Auto,
    Gfsga,
    Window,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AttackConfig {
    pub keystream: Option<PathBuf>,
    pub kind: AttackKind,
    pub window_model: Option<CountingModel>,
    pub workers: Option<usize>,
    pub exhaustive: bool,
    pub linear_pruning: bool,
    pub early_solve: Option<bool>,
    pub max_free: Option<usize>,
}

impl AttackConfig {
    pub fn options(&self, workers: Option<usize>) -> AttackOptions {
        let d = AttackOptions::default();
        AttackOptions {
            workers: workers.or(self.workers),
            exhaustive: self.exhaustive,
            linear_pruning: self.linear_pruning,
            early_solve: self.early_solve.unwrap_or(d.early_solve),
            max_free: self.max_free.unwrap_or(d.max_free),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Table,
    Structured,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizeMethod {
    /// Exhaustive ordering of a given difference multiset.
    StepB,
    /// Candidate multisets, each ordered exhaustively.
    #[default]
    StepA,
    Staged,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    #[serde(default)]
    pub method: OptimizeMethod,
    pub length: Option<usize>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub differences: Option<Vec<usize>>,
    #[serde(default = "default_budget")]
    pub budget: usize,
    pub chunk: Option<usize>,
    pub candidates: Option<usize>,
    pub retries: Option<usize>,
    pub sigma_limit: Option<usize>,
}

fn default_budget() -> usize {
    16
}

pub fn config_error(msg: impl std::fmt::Display) -> CliError {
    CliError::config(msg.to_string())
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| config_error(format!("config: {e}")))
    }

    pub fn generator(&self) -> Result<&GeneratorConfig, CliError> {
        self.generator
            .as_ref()
            .ok_or_else(|| config_error("config has no generator section"))
    }
}

impl GeneratorConfig {
    /// Register length of a single-register generator, or of each register
    /// of a hybrid.
    pub fn length(&self) -> usize {
        match &self.register {
            RegisterConfig::Lfsr { length, .. }
            | RegisterConfig::Nfsr { length, .. }
            | RegisterConfig::Hybrid { length, .. } => *length,
        }
    }

    pub fn n(&self) -> usize {
        match &self.taps {
            TapsConfig::Single(t) => t.len(),
            TapsConfig::Hybrid { nfsr, lfsr } => nfsr.len() + lfsr.len(),
        }
    }

    pub fn is_lfsr(&self) -> bool {
        matches!(self.register, RegisterConfig::Lfsr { .. })
    }

    pub fn tap_sets(&self) -> Result<Vec<TapSet>, CliError> {
        let len = self.length();
        let r = match &self.taps {
            TapsConfig::Single(t) => vec![TapSet::new(t.clone(), len)],
            TapsConfig::Hybrid { nfsr, lfsr } => {
                vec![
                    TapSet::new(nfsr.clone(), len),
                    TapSet::new(lfsr.clone(), len),
                ]
            }
        };
        r.into_iter().map(|t| t.map_err(config_error)).collect()
    }

    /// The single tap set of a non-hybrid generator.
    pub fn single_taps(&self) -> Result<TapSet, CliError> {
        match &self.taps {
            TapsConfig::Single(t) => TapSet::new(t.clone(), self.length()).map_err(config_error),
            TapsConfig::Hybrid { .. } => Err(config_error("this analysis needs a single tap set")),
        }
    }

    pub fn register(&self) -> Result<Register, CliError> {
        let lfsr = |length: usize, fb: &Option<Vec<usize>>| match fb {
            Some(f) => LfsrSpec::new(length, f.clone()),
            None => LfsrSpec::primitive(length),
        };
        let r = match &self.register {
            RegisterConfig::Lfsr { length, feedback } => {
                lfsr(*length, feedback).map(Register::Lfsr)
            }
            RegisterConfig::Nfsr {
                length,
                constant_term,
                monomials,
            } => NfsrSpec::new(*length, *constant_term, monomials.clone()).map(Register::Nfsr),
            RegisterConfig::Hybrid {
                length,
                lfsr_feedback,
                constant_term,
                monomials,
                coupling,
            } => lfsr(*length, lfsr_feedback).and_then(|l| {
                NfsrSpec::new(*length, *constant_term, monomials.clone())
                    .and_then(|n| HybridSpec::new(l, n, *coupling))
                    .map(Register::Hybrid)
            }),
        };
        r.map_err(config_error)
    }

    pub fn filter(&self, scenario_seed: u64) -> Result<FilterSpec, CliError> {
        let (n, m) = (self.n(), self.m);
        let r = match self.filter.as_ref() {
            None => return Err(config_error("generator needs a filter")),
            Some(FilterConfig::Hex { table }) => FilterSpec::from_hex(n, m, table),
            Some(FilterConfig::UniformRandom { seed }) => FilterSpec::random_uniform(
                n,
                m,
                &mut ChaCha8Rng::seed_from_u64(seed.unwrap_or(scenario_seed)),
            ),
            Some(FilterConfig::Random { seed }) => FilterSpec::random(
                n,
                m,
                &mut ChaCha8Rng::seed_from_u64(seed.unwrap_or(scenario_seed)),
            ),
        };
        r.map_err(config_error)
    }

    pub fn build(&self, scenario_seed: u64) -> Result<GeneratorSpec, CliError> {
        let register = self.register()?;
        let sets = self.tap_sets()?;
        let taps = match (&self.taps, sets.as_slice()) {
            (TapsConfig::Single(_), [t]) => Taps::Single(t.clone()),
            (TapsConfig::Hybrid { .. }, [a, b]) => Taps::Hybrid {
                nfsr: a.clone(),
                lfsr: b.clone(),
            },
            _ => unreachable!(),
        };
        GeneratorSpec::new(register, taps, self.filter(scenario_seed)?).map_err(config_error)
    }
}
