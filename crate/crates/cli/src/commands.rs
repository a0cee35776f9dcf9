use std::path::{Path, PathBuf};

use gfsga_core::attack::{
    gfsga_recover, nfsr_window_recover, read_keystream, window_analysis, window_groups,
    write_keystream, KeystreamFile,
};
use gfsga_core::complexity::{
    calibrate_m, constant_sigma_sweep, gfsga_constant_cost_with, gfsga_variable_cost_with,
    nfsr_gfsga_cost, optimal_constant_sigma_with, ComplexityEstimate,
};
use gfsga_core::optimizer::{staged_search, step_a_candidates, step_b_best_ordering, StagedParams};
use gfsga_core::sampling::{
    consecutive_differences, constant_profile, cyclic_schedule, greedy_schedule,
    repetition_profile, sample_cap, tagged_profile,
};
use gfsga_core::{
    BitVec, CountingModel, Error, RepetitionProfile, SamplingMode, SamplingSchedule, StopRule,
    TapSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{
    config_error, AttackKind, GeneratorConfig, OptimizeConfig, OptimizeMethod, OutputFormat,
    RegisterConfig, ScenarioConfig,
};
use crate::report::{
    AttackRecord, CalibrationRecord, NamedEstimate, NamedProfile, OptimizationRecord, Report,
    ReportProvenance,
};
use crate::tables::{fixture_table, FIXTURE_IDS};
use crate::{Cli, CliError, Command, EXIT_ATTACK, EXIT_OK};

/// A finished command: the report, the exit code and, for a nonzero code
/// that still produced a report, the reason.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub code: u8,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome {
            report,
            code: EXIT_OK,
            failure: None,
        }
    }
}

struct Context {
    config: ScenarioConfig,
    config_dir: Option<PathBuf>,
    seed: u64,
    workers: Option<usize>,
    provenance: ReportProvenance,
}

impl Context {
    fn load(cli: &Cli) -> Result<Self, CliError> {
        let (config, bytes, dir) = match &cli.config {
            Some(path) => {
                let bytes = std::fs::read(path).map_err(|e| {
                    CliError::config(format!("cannot read config {}: {e}", path.display()))
                })?;
                let text = std::str::from_utf8(&bytes)
                    .map_err(|_| CliError::config("config is not UTF-8"))?;
                let config = ScenarioConfig::parse(text)?;
                (config, Some(bytes), path.parent().map(Path::to_path_buf))
            }
            None => (ScenarioConfig::default(), None, None),
        };
        let seed = cli.seed.or(config.seed).unwrap_or(0);
        Ok(Context {
            workers: cli.workers,
            provenance: ReportProvenance::new(bytes.as_deref(), seed),
            config,
            config_dir: dir,
            seed,
        })
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        match &self.config_dir {
            Some(d) if p.is_relative() => d.join(p),
            _ => p.to_path_buf(),
        }
    }
}

/// Runs the command and writes its report; returns the exit status.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let outcome = execute(cli)?;
    let format = cli
        .format
        .or(Context::load(cli).ok().and_then(|c| c.config.report.format))
        .unwrap_or_default();
    let text = match format {
        OutputFormat::Table => outcome.report.render_table(),
        OutputFormat::Structured => outcome.report.to_json() + "\n",
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(outcome)
}

/// Runs the command without printing.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let ctx = Context::load(cli)?;
    match &cli.command {
        Command::Analyze => analyze(&ctx).map(Outcome::ok),
        Command::Optimize => optimize(&ctx).map(Outcome::ok),
        Command::Attack => attack(&ctx),
        Command::Report { fixture } => report_tables(&ctx, fixture).map(Outcome::ok),
        Command::Simulate {
            keystream,
            state,
            blocks,
        } => simulate(&ctx, keystream, state.as_deref(), *blocks).map(Outcome::ok),
    }
}

fn is_nfsr(g: &GeneratorConfig) -> bool {
    matches!(g.register, RegisterConfig::Nfsr { .. })
}

fn analyze(ctx: &Context) -> Result<Report, CliError> {
    let cfg = &ctx.config;
    let g = cfg.generator()?;
    let a = &cfg.analysis;
    let mut report = Report::new("analyze", ctx.provenance.clone());
    let sets = g.tap_sets()?;
    let (n, m) = (g.n(), g.m);
    if m == 0 || m > n {
        return Err(config_error(format!("need 1 <= m <= n, got n={n} m={m}")));
    }
    if let Some(steps) = &a.steps {
        let max = sets.iter().map(|t| t.register_length()).max().unwrap_or(0);
        if let Some(s) = steps.iter().find(|&&s| s == 0 || s > max) {
            return Err(config_error(format!("schedule step {s} outside 1..={max}")));
        }
    }
    let stop = a.stop.unwrap_or(StopRule::Rank);

    let profile = if sets.len() == 1 {
        single_profile(&sets[0], a, stop, m, &mut report)?
    } else {
        let groups: Vec<&TapSet> = sets.iter().collect();
        let len: usize = sets.iter().map(|t| t.register_length()).sum();
        let steps = match (a.mode, &a.steps, a.sigma) {
            (SamplingMode::Custom, Some(s), _) => s.clone(),
            (SamplingMode::Custom, None, _) => {
                return Err(config_error("custom mode needs analysis.steps"))
            }
            (SamplingMode::Constant, _, s) => vec![s.unwrap_or(1); sample_cap(len)],
            (mode, _, _) => {
                return Err(config_error(format!(
                    "{mode:?} sampling is not defined for hybrid tap sets; use constant or custom"
                )))
            }
        };
        let stop = match (a.mode, a.stop) {
            (SamplingMode::Custom, None) => StopRule::Samples(steps.len() + 1),
            _ => stop,
        };
        tagged_profile(&groups, &steps, stop, a.model)?
    };

    let label = format!("{:?}", profile.mode).to_lowercase();
    if profile.is_overdefined() {
        let est = estimate(g, &profile, n, m, a.solver_exponent, a.nfsr_cost)?;
        report.estimates.push(NamedEstimate {
            label: label.clone(),
            estimate: est,
        });
    } else {
        report.notes.push(format!(
            "{} samples give n*c - R = {} <= L = {}; no cost estimate",
            profile.samples,
            profile.equations(),
            profile.register_length
        ));
    }
    report.profiles.push(NamedProfile { label, profile });

    if !g.is_lfsr() {
        let groups: Vec<&TapSet> = sets.iter().collect();
        match window_analysis(&groups, n, m, CountingModel::PerRegister) {
            Ok(w) => report.windows.push(w),
            Err(e) => report.notes.push(format!("window analysis: {e}")),
        }
    }

    if a.calibrate_m {
        let targets = a
            .calibration_targets
            .ok_or_else(|| config_error("calibrate_m needs analysis.calibration_targets"))?;
        for (k, t) in sets.iter().enumerate() {
            let cal = calibrate_m(t, targets, &a.calibration_ms, a.solver_exponent)?;
            report.calibrations.push(CalibrationRecord {
                label: format!("tap set {}", k + 1),
                calibration: cal,
            });
        }
    }
    Ok(report)
}

fn single_profile(
    taps: &TapSet,
    a: &crate::config::AnalysisConfig,
    stop: StopRule,
    m: usize,
    report: &mut Report,
) -> Result<RepetitionProfile, CliError> {
    let (n, len) = (taps.len(), taps.register_length());
    Ok(match a.mode {
        SamplingMode::Constant => {
            let sigma = match a.sigma {
                Some(s) => s,
                None => {
                    report.sigma_sweep = constant_sigma_sweep(taps, m, a.solver_exponent);
                    optimal_constant_sigma_with(taps, n, m, len, a.solver_exponent)?.0
                }
            };
            constant_profile(taps, sigma, stop)?
        }
        SamplingMode::Greedy => greedy_schedule(taps, stop)?.1,
        SamplingMode::Cyclic => cyclic_schedule(taps, stop)?.1,
        SamplingMode::Custom => {
            let steps = a
                .steps
                .clone()
                .ok_or_else(|| config_error("custom mode needs analysis.steps"))?;
            let stop = a.stop.unwrap_or(StopRule::Samples(steps.len() + 1));
            repetition_profile(taps, &SamplingSchedule::custom(steps), stop)?
        }
    })
}

fn estimate(
    g: &GeneratorConfig,
    p: &RepetitionProfile,
    n: usize,
    m: usize,
    solver: f64,
    nfsr: Option<gfsga_core::NfsrCostParams>,
) -> Result<ComplexityEstimate, CliError> {
    let len = p.register_length;
    let constant = p.mode == SamplingMode::Constant && p.steps.windows(2).all(|w| w[0] == w[1]);
    let est = match nfsr {
        Some(params) if is_nfsr(g) => nfsr_gfsga_cost(p, n, m, len, params)?,
        _ if constant && p.n == n => gfsga_constant_cost_with(p, n, m, len, solver)?,
        _ => {
            let mut q = p.clone();
            q.n = n;
            gfsga_variable_cost_with(&q, n, m, len, solver)?
        }
    };
    Ok(est)
}

fn optimize(ctx: &Context) -> Result<Report, CliError> {
    let cfg = &ctx.config;
    let o: OptimizeConfig = cfg
        .optimize
        .clone()
        .ok_or_else(|| config_error("config has no optimize section"))?;
    let g = cfg.generator.as_ref();
    let len = o
        .length
        .or(g.map(|g| g.length()))
        .ok_or_else(|| config_error("optimize needs length"))?;
    let m =
        o.m.or(g.map(|g| g.m))
            .ok_or_else(|| config_error("optimize needs m"))?;
    let mut report = Report::new("optimize", ctx.provenance.clone());
    let record = match o.method {
        OptimizeMethod::StepB => {
            let d = match (&o.differences, g) {
                (Some(d), _) => d.clone(),
                (None, Some(g)) => consecutive_differences(&g.single_taps()?),
                (None, None) => return Err(config_error("step-b needs differences")),
            };
            let n = o.n.unwrap_or(d.len() + 1);
            let (order, card) = step_b_best_ordering(&d, n, m, len)?;
            OptimizationRecord {
                method: "step-b".into(),
                differences: order,
                scorecard: card,
                candidates: Vec::new(),
                trace: Vec::new(),
            }
        }
        OptimizeMethod::StepA => {
            let n =
                o.n.or(g.map(|g| g.n()))
                    .ok_or_else(|| config_error("optimize needs n"))?;
            let cands = step_a_candidates(len, n, o.budget, ctx.seed)?;
            let mut cards = Vec::new();
            for c in &cands {
                match step_b_best_ordering(&c.differences, n, m, len) {
                    Ok((_, card)) => cards.push(card),
                    Err(Error::NotOverdefined { .. }) => report
                        .notes
                        .push(format!("{:?}: no overdefined system", c.differences)),
                    Err(e) => return Err(e.into()),
                }
            }
            let best = cards
                .iter()
                .max_by(|a, b| a.constant.log2_total.total_cmp(&b.constant.log2_total))
                .cloned()
                .ok_or(Error::NotOverdefined {
                    samples: sample_cap(len),
                })?;
            OptimizationRecord {
                method: "step-a".into(),
                differences: best.differences.clone(),
                scorecard: best,
                candidates: cards,
                trace: Vec::new(),
            }
        }
        OptimizeMethod::Staged => {
            let n =
                o.n.or(g.map(|g| g.n()))
                    .ok_or_else(|| config_error("optimize needs n"))?;
            let d = StagedParams::default();
            let params = StagedParams {
                seed: ctx.seed,
                chunk: o.chunk.unwrap_or(d.chunk),
                candidates: o.candidates.unwrap_or(d.candidates),
                retries: o.retries.unwrap_or(d.retries),
                sigma_limit: o.sigma_limit.unwrap_or(d.sigma_limit),
            };
            let r = staged_search(len, n, m, &params)?;
            OptimizationRecord {
                method: "staged".into(),
                differences: r.differences,
                scorecard: r.scorecard,
                candidates: Vec::new(),
                trace: r.trace,
            }
        }
    };
    report.optimization = Some(record);
    Ok(report)
}

fn attack_schedule(taps: &TapSet, ctx: &Context, m: usize) -> Result<SamplingSchedule, CliError> {
    let a = &ctx.config.analysis;
    let (n, len) = (taps.len(), taps.register_length());
    Ok(match a.mode {
        SamplingMode::Constant => {
            let sigma = match a.sigma {
                Some(s) => s,
                None => optimal_constant_sigma_with(taps, n, m, len, a.solver_exponent)?.0,
            };
            SamplingSchedule::constant(sigma, sample_cap(len))
        }
        SamplingMode::Greedy => greedy_schedule(taps, StopRule::Rank)?.0,
        SamplingMode::Cyclic => cyclic_schedule(taps, StopRule::Rank)?.0,
        SamplingMode::Custom => SamplingSchedule::custom(
            a.steps
                .clone()
                .ok_or_else(|| config_error("custom mode needs analysis.steps"))?,
        ),
    })
}

fn attack(ctx: &Context) -> Result<Outcome, CliError> {
    let cfg = &ctx.config;
    let g = cfg.generator()?;
    let gen = g.build(ctx.seed)?;
    let path = cfg
        .attack
        .keystream
        .as_ref()
        .map(|p| ctx.resolve(p))
        .ok_or_else(|| config_error("attack needs attack.keystream"))?;
    let file =
        read_keystream(&path).map_err(|e| CliError::attack(format!("{}: {e}", path.display())))?;
    let expect = (gen.n() as u32, gen.m() as u32, gen.state_len() as u32);
    if (file.n, file.m, file.register_length) != expect {
        return Err(CliError::attack(format!(
            "keystream header (n, m, L) = ({}, {}, {}) does not match the generator ({}, {}, {})",
            file.n, file.m, file.register_length, expect.0, expect.1, expect.2
        )));
    }
    let opts = cfg.attack.options(ctx.workers);
    let kind = match cfg.attack.kind {
        AttackKind::Auto if g.is_lfsr() => AttackKind::Gfsga,
        AttackKind::Auto => AttackKind::Window,
        k => k,
    };
    let mut report = Report::new("attack", ctx.provenance.clone());
    let result = match kind {
        AttackKind::Gfsga => {
            if !g.is_lfsr() {
                return Err(config_error(
                    "linear recovery needs an LFSR generator; use the window attack",
                ));
            }
            let schedule = attack_schedule(&g.single_taps()?, ctx, gen.m())?;
            gfsga_recover(&gen, &file.blocks, &schedule, &opts)
        }
        _ => {
            let model = cfg
                .attack
                .window_model
                .unwrap_or(CountingModel::PerRegister);
            nfsr_window_recover(&gen, &file.blocks, model, &opts).map(|(w, r)| {
                report.windows.push(w);
                r
            })
        }
    };
    let result = result.map_err(|e| match e {
        Error::Keystream(_) => CliError::attack(e.to_string()),
        other => other.into(),
    })?;
    let found = result.recovered_state.as_ref().map(BitVec::to_hex);
    let failed = found.is_none();
    report.attacks.push(AttackRecord {
        kind: format!("{kind:?}").to_lowercase(),
        recovered_state: found,
        result,
    });
    Ok(Outcome {
        report,
        code: if failed { EXIT_ATTACK } else { EXIT_OK },
        failure: failed.then(|| "no consistent state reproduces the keystream".to_string()),
    })
}

fn report_tables(ctx: &Context, fixture: &str) -> Result<Report, CliError> {
    let mut report = Report::new("report", ctx.provenance.clone());
    if fixture == "all" {
        for id in FIXTURE_IDS {
            report.tables.push(fixture_table(id)?);
        }
    } else {
        report.tables.push(fixture_table(fixture)?);
    }
    Ok(report)
}

fn simulate(
    ctx: &Context,
    out: &Path,
    state: Option<&str>,
    blocks: Option<usize>,
) -> Result<Report, CliError> {
    let g = ctx.config.generator()?;
    let gen = g.build(ctx.seed)?;
    let len = gen.state_len();
    let initial = match state {
        Some(h) => BitVec::from_hex(h, len).ok_or_else(|| {
            config_error(format!(
                "state is not {} hex digits for {len} bits",
                len.div_ceil(8) * 2
            ))
        })?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            BitVec::from_bits(&(0..len).map(|_| rng.gen()).collect::<Vec<bool>>())
        }
    };
    let count = blocks.unwrap_or(2 * len);
    let ks = gen.keystream(&initial, count)?;
    let file = KeystreamFile {
        n: gen.n() as u32,
        m: gen.m() as u32,
        register_length: len as u32,
        blocks: ks,
    };
    write_keystream(out, &file).map_err(|e| CliError::config(format!("{}: {e}", out.display())))?;
    let mut report = Report::new("simulate", ctx.provenance.clone());
    report
        .notes
        .push(format!("planted state {}", initial.to_hex()));
    report
        .notes
        .push(format!("{count} blocks written to {}", out.display()));
    if !g.is_lfsr() {
        match window_analysis(
            &window_groups(&gen),
            gen.n(),
            gen.m(),
            CountingModel::PerRegister,
        ) {
            Ok(w) => report.windows.push(w),
            Err(e) => report.notes.push(format!("window analysis: {e}")),
        }
    }
    Ok(report)
}
