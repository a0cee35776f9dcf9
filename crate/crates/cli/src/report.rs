use std::fmt::Write as _;

use gfsga_core::attack::{AttackResult, WindowRecovery};
use gfsga_core::complexity::{MCalibration, SigmaCost};
use gfsga_core::optimizer::{Scorecard, StageTrace};
use gfsga_core::{ComplexityEstimate, RepetitionProfile};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Where a report came from: the exact config bytes, the seed and the tool
/// version.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportProvenance {
    pub config_sha256: Option<String>,
    pub seed: u64,
    pub version: String,
}

impl ReportProvenance {
    pub fn new(config: Option<&[u8]>, seed: u64) -> Self {
        ReportProvenance {
            config_sha256: config.map(|b| hex::encode(Sha256::digest(b))),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedProfile {
    pub label: String,
    pub profile: RepetitionProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedEstimate {
    pub label: String,
    pub estimate: ComplexityEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackRecord {
    pub kind: String,
    /// Recovered initial state as hex, cell 1 in the lowest bit.
    pub recovered_state: Option<String>,
    pub result: AttackResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRecord {
    pub label: String,
    pub calibration: MCalibration,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationRecord {
    pub method: String,
    pub differences: Vec<usize>,
    pub scorecard: Scorecard,
    pub candidates: Vec<Scorecard>,
    pub trace: Vec<StageTrace>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub published: Option<f64>,
    pub computed: Option<f64>,
    pub delta: Option<f64>,
}

impl TableCell {
    pub fn new(published: Option<f64>, computed: Option<f64>) -> Self {
        let delta = match (published, computed) {
            (Some(p), Some(c)) => Some(c - p),
            _ => None,
        };
        TableCell {
            published,
            computed,
            delta,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub cells: Vec<TableCell>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub id: String,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub provenance: ReportProvenance,
    #[serde(default)]
    pub scorecards: Vec<Scorecard>,
    #[serde(default)]
    pub profiles: Vec<NamedProfile>,
    #[serde(default)]
    pub estimates: Vec<NamedEstimate>,
    #[serde(default)]
    pub sigma_sweep: Vec<SigmaCost>,
    #[serde(default)]
    pub attacks: Vec<AttackRecord>,
    #[serde(default)]
    pub windows: Vec<WindowRecovery>,
    #[serde(default)]
    pub calibrations: Vec<CalibrationRecord>,
    #[serde(default)]
    pub optimization: Option<OptimizationRecord>,
    #[serde(default)]
    pub tables: Vec<TableReport>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, provenance: ReportProvenance) -> Self {
        Report {
            command: command.to_string(),
            provenance,
            scorecards: Vec::new(),
            profiles: Vec::new(),
            estimates: Vec::new(),
            sigma_sweep: Vec::new(),
            attacks: Vec::new(),
            windows: Vec::new(),
            calibrations: Vec::new(),
            optimization: None,
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Human-readable rendering; log2 values with two decimals.
    pub fn render_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# {} (gfsga {}, seed {})",
            self.command, self.provenance.version, self.provenance.seed
        );
        if let Some(h) = &self.provenance.config_sha256 {
            let _ = writeln!(s, "config sha256 {h}");
        }
        for card in &self.scorecards {
            render_scorecard(&mut s, card);
        }
        for p in &self.profiles {
            render_profile(&mut s, p);
        }
        for e in &self.estimates {
            let _ = writeln!(
                s,
                "\nestimate {}: 2^{} = 2^{} candidates * 2^{} solver, {} samples, {} repeats",
                e.label,
                log2(Some(e.estimate.log2_total)),
                log2(Some(e.estimate.candidate_log2())),
                log2(Some(e.estimate.solver_log2)),
                e.estimate.samples_used,
                e.estimate.repeats_used
            );
            if let Some(w) = &e.estimate.window {
                let _ = writeln!(
                    s,
                    "  recovered {} bits, guessed {}, memory {} bits, data {} bits",
                    w.recovered_bits, w.guessed_bits, w.memory_bits, w.data_bits
                );
            }
        }
        if !self.sigma_sweep.is_empty() {
            let best = self
                .sigma_sweep
                .iter()
                .filter_map(|c| c.log2_total)
                .fold(f64::INFINITY, f64::min);
            let argmin: Vec<usize> = self
                .sigma_sweep
                .iter()
                .filter(|c| c.log2_total.is_some_and(|v| (v - best).abs() < 1e-9))
                .map(|c| c.sigma)
                .collect();
            let _ = writeln!(s, "\nstep sweep: minimum 2^{best:.2} at steps {argmin:?}");
        }
        for w in &self.windows {
            let _ = writeln!(
                s,
                "\nwindow ({:?}): p = {}, {} samples, R_p = {}, guessed {}, q = {:?}",
                w.model, w.p, w.window_samples, w.recovered_bits, w.guessed_bits, w.q
            );
            if let Some(e) = &w.estimate {
                let _ = writeln!(s, "  cost 2^{}", log2(Some(e.log2_total)));
            }
        }
        for a in &self.attacks {
            let r = &a.result;
            let _ = writeln!(
                s,
                "\nattack {}: {}",
                a.kind,
                match &a.recovered_state {
                    Some(h) => format!("recovered state {h}"),
                    None => "no state recovered".to_string(),
                }
            );
            let _ = writeln!(
                s,
                "  systems {}, pruned {}, verified {}, nodes {}, skipped {}, samples {}, {:.1} ms",
                r.systems_solved,
                r.candidates_pruned,
                r.verified_solutions,
                r.nodes,
                r.skipped_underdetermined,
                r.samples_used,
                r.wall_clock_ms
            );
        }
        for c in &self.calibrations {
            let _ = writeln!(
                s,
                "\ncalibration {} (best m = {})",
                c.label, c.calibration.best_m
            );
            let _ = writeln!(
                s,
                "  {:>3} {:>22} {:>22} {:>22}",
                "m", "constant", "greedy", "cyclic"
            );
            for row in &c.calibration.rows {
                let cells: Vec<String> = (0..3)
                    .map(|k| format!("{} ({})", log2(row.computed[k]), signed(row.deltas[k])))
                    .collect();
                let _ = writeln!(
                    s,
                    "  {:>3} {:>22} {:>22} {:>22}",
                    row.m, cells[0], cells[1], cells[2]
                );
            }
        }
        if let Some(o) = &self.optimization {
            let _ = writeln!(
                s,
                "\noptimisation ({}): differences {:?}",
                o.method, o.differences
            );
            render_scorecard(&mut s, &o.scorecard);
            if !o.candidates.is_empty() {
                let _ = writeln!(s, "  {} candidate multisets evaluated", o.candidates.len());
            }
            for t in &o.trace {
                let _ = writeln!(
                    s,
                    "  stage {} attempt {}: tried {}, orderings {}, rejected {}, join {:?} (L {}, m {}), exponent {}, step {}",
                    t.stage,
                    t.attempt,
                    t.candidates_tried,
                    t.orderings_evaluated,
                    t.rejected,
                    t.join,
                    t.join_length,
                    t.join_m,
                    t.exponent,
                    t.sigma
                );
            }
        }
        for t in &self.tables {
            render_fixture(&mut s, t);
        }
        if !self.notes.is_empty() {
            let _ = writeln!(s);
            for n in &self.notes {
                let _ = writeln!(s, "note: {n}");
            }
        }
        s
    }
}

fn log2(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into())
}

fn signed(v: Option<f64>) -> String {
    v.map(|x| format!("{x:+.2}")).unwrap_or_else(|| "-".into())
}

fn render_scorecard(s: &mut String, c: &Scorecard) {
    let _ = writeln!(
        s,
        "\ntaps {:?} (L = {}, n = {}, m = {})",
        c.taps.positions(),
        c.taps.register_length(),
        c.n,
        c.m
    );
    let _ = writeln!(
        s,
        "  differences {:?}, lambda {}, {}",
        c.differences,
        c.lambda,
        if c.is_fpds {
            "full positive difference set"
        } else {
            "not a full positive difference set"
        }
    );
    let [k, g, y] = c.costs();
    let _ = writeln!(
        s,
        "  constant 2^{} (step {}), greedy 2^{}, cyclic 2^{}",
        log2(k),
        c.optimal_sigma,
        log2(g),
        log2(y)
    );
}

fn render_profile(s: &mut String, p: &NamedProfile) {
    let r = &p.profile;
    let _ = writeln!(
        s,
        "\nprofile {} ({:?}): c = {}, R = {}, equations {} vs L = {}",
        p.label,
        r.mode,
        r.samples,
        r.total,
        r.equations(),
        r.register_length
    );
    let _ = writeln!(s, "  {:>4} {:>6} {:>4}  repeated labels", "i", "step", "q");
    for (j, q) in r.q.iter().enumerate() {
        let _ = writeln!(
            s,
            "  {:>4} {:>6} {:>4}  {:?}",
            j + 2,
            r.steps.get(j).copied().unwrap_or(0),
            q,
            r.repeated_sets.get(j).cloned().unwrap_or_default()
        );
    }
}

fn render_fixture(s: &mut String, t: &TableReport) {
    let _ = writeln!(s, "\n[{}] {}", t.id, t.title);
    let mut head = format!("  {:<42}", "row");
    for c in &t.columns {
        let _ = write!(head, " {:>26}", c);
    }
    let _ = writeln!(s, "{head}");
    for r in &t.rows {
        let mut line = format!("  {:<42}", r.label);
        for c in &r.cells {
            let cell = format!(
                "{} / {} ({})",
                log2(c.published),
                log2(c.computed),
                signed(c.delta)
            );
            let _ = write!(line, " {:>26}", cell);
        }
        let _ = writeln!(s, "{line}");
    }
    for n in &t.notes {
        let _ = writeln!(s, "  * {n}");
    }
}
