use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gfsga_cli::Report;
use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gfsga"))
}

fn write_config(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn structured(args: &[&str]) -> (Report, String) {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    let out = run(&all);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    (Report::from_json(&text).unwrap(), text)
}

fn example1(mode: &str, extra: Value) -> Value {
    let mut analysis = json!({ "mode": mode });
    for (k, v) in extra.as_object().unwrap() {
        analysis[k] = v.clone();
    }
    json!({
        "generator": {
            "register": { "kind": "lfsr", "length": 80 },
            "taps": [1, 6, 19, 26, 52, 63, 80],
            "m": 2
        },
        "analysis": analysis
    })
}

#[test]
fn greedy_analysis_of_the_running_example() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "ex1.json", &example1("greedy", json!({})));
    let (r, _) = structured(&["--config", cfg.to_str().unwrap(), "analyze"]);
    let p = &r.profiles[0].profile;
    assert_eq!(&p.steps[..6], &[5, 13, 7, 26, 11, 17]);
    assert_eq!((p.samples, p.total), (21, 63));
    assert!((r.estimates[0].estimate.log2_total - 62.97).abs() < 0.01);

    let cfg = write_config(
        dir.path(),
        "ex1m.json",
        &example1("greedy", json!({ "stop": "sample-margin" })),
    );
    let (r, _) = structured(&["--config", cfg.to_str().unwrap(), "analyze"]);
    let p = &r.profiles[0].profile;
    assert_eq!((p.samples, p.total), (22, 67));
    assert!((r.estimates[0].estimate.log2_total - 63.97).abs() < 0.01);
}

#[test]
fn structured_report_round_trips() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", &example1("constant", json!({})));
    let (r, text) = structured(&["--config", cfg.to_str().unwrap(), "analyze"]);
    assert_eq!(r.to_json() + "\n", text);
    assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    assert_eq!(
        r.provenance.config_sha256.as_ref().map(String::len),
        Some(64)
    );
    assert!((r.estimates[0].estimate.log2_total - 69.97).abs() < 0.01);
    assert_eq!(r.sigma_sweep.len(), 80);
}

#[test]
fn custom_steps_on_the_worked_example() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        &json!({
            "generator": { "register": { "kind": "lfsr", "length": 16 }, "taps": [3, 5, 10, 14, 16], "m": 1 },
            "analysis": { "mode": "custom", "steps": [5, 2] }
        }),
    );
    let (r, _) = structured(&["--config", cfg.to_str().unwrap(), "analyze"]);
    assert_eq!(r.profiles[0].profile.q, vec![1, 2]);
    assert_eq!(r.profiles[0].profile.repeated_sets[0], vec![10]);
    assert!(r.estimates.is_empty());
    assert!(r.notes.iter().any(|n| n.contains("no cost estimate")));
}

#[test]
fn step_equal_to_length_repeats_nothing() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        &example1("constant", json!({ "sigma": 80 })),
    );
    let (r, _) = structured(&["--config", cfg.to_str().unwrap(), "analyze"]);
    let p = &r.profiles[0].profile;
    assert!(p.q.iter().all(|&q| q == 0));
    assert!(p.n * p.samples > 80);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"generator": {"register": {"kind": "lfsr", "length": 80}}, "bogus": 1}"#,
    )
    .unwrap();
    assert_eq!(
        run(&["--config", bad.to_str().unwrap(), "analyze"])
            .status
            .code(),
        Some(2)
    );

    let taps = write_config(
        dir.path(),
        "taps.json",
        &json!({ "generator": { "register": { "kind": "lfsr", "length": 10 }, "taps": [3, 12], "m": 1 } }),
    );
    assert_eq!(
        run(&["--config", taps.to_str().unwrap(), "analyze"])
            .status
            .code(),
        Some(2)
    );

    let short = write_config(
        dir.path(),
        "short.json",
        &example1("custom", json!({ "steps": [1, 1], "stop": "rank" })),
    );
    let out = run(&["--config", short.to_str().unwrap(), "analyze"]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    assert_eq!(run(&["report", "table99"]).status.code(), Some(2));
    assert_eq!(
        run(&["--config", "/nonexistent/c.json", "analyze"])
            .status
            .code(),
        Some(2)
    );
}

fn toy_lfsr(keystream: &str) -> Value {
    json!({
        "seed": 11,
        "generator": {
            "register": { "kind": "lfsr", "length": 20 },
            "taps": [1, 4, 9, 15, 20],
            "m": 2,
            "filter": { "source": "uniform-random" }
        },
        "analysis": { "mode": "constant" },
        "attack": { "keystream": keystream, "workers": 2 }
    })
}

fn planted(report: &Report) -> String {
    report
        .notes
        .iter()
        .find_map(|n| n.strip_prefix("planted state "))
        .unwrap()
        .to_string()
}

#[test]
fn toy_lfsr_attack_recovers_the_planted_state() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "toy.json", &toy_lfsr("toy.ks"));
    let ks = dir.path().join("toy.ks");
    let c = cfg.to_str().unwrap();
    let (sim, _) = structured(&[
        "--config",
        c,
        "simulate",
        "--keystream",
        ks.to_str().unwrap(),
    ]);
    let (r, _) = structured(&["--config", c, "attack"]);
    let a = &r.attacks[0];
    assert_eq!(a.kind, "gfsga");
    assert_eq!(a.recovered_state.as_deref(), Some(planted(&sim).as_str()));
    assert!(a.result.systems_solved >= 1);

    let explicit = "a5f30e";
    let (sim, _) = structured(&[
        "--config",
        c,
        "simulate",
        "--keystream",
        ks.to_str().unwrap(),
        "--state",
        explicit,
    ]);
    assert_eq!(planted(&sim), explicit);
    let (r, _) = structured(&["--config", c, "--workers", "1", "attack"]);
    assert_eq!(r.attacks[0].recovered_state.as_deref(), Some(explicit));
}

fn strip_timing(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    for a in v["attacks"].as_array_mut().unwrap() {
        a["result"]["wall_clock_ms"] = Value::Null;
    }
    v
}

#[test]
fn attack_reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "toy.json", &toy_lfsr("toy.ks"));
    let c = cfg.to_str().unwrap();
    let ks = dir.path().join("toy.ks");
    structured(&[
        "--config",
        c,
        "simulate",
        "--keystream",
        ks.to_str().unwrap(),
    ]);
    let (_, a) = structured(&["--config", c, "attack"]);
    let (_, b) = structured(&["--config", c, "attack"]);
    assert_eq!(strip_timing(&a), strip_timing(&b));
}

#[test]
fn corrupt_keystreams_exit_with_attack_failure() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "toy.json", &toy_lfsr("toy.ks"));
    let c = cfg.to_str().unwrap();
    let ks = dir.path().join("toy.ks");
    structured(&[
        "--config",
        c,
        "simulate",
        "--keystream",
        ks.to_str().unwrap(),
    ]);
    let bytes = std::fs::read(&ks).unwrap();

    std::fs::write(&ks, &bytes[..bytes.len() - 3]).unwrap();
    let out = run(&["--config", c, "attack"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncated"));

    let mut wrong = bytes.clone();
    wrong[8] = 21;
    std::fs::write(&ks, &wrong).unwrap();
    assert_eq!(run(&["--config", c, "attack"]).status.code(), Some(4));

    std::fs::remove_file(&ks).unwrap();
    assert_eq!(run(&["--config", c, "attack"]).status.code(), Some(4));
}

#[test]
fn reduced_nfsr_window_attack() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "nfsr.json",
        &json!({
            "seed": 5,
            "generator": {
                "register": {
                    "kind": "nfsr",
                    "length": 24,
                    "constant_term": true,
                    "monomials": [[1], [6], [11], [3, 17], [9, 21]]
                },
                "taps": [2, 5, 9, 14, 18],
                "m": 1,
                "filter": { "source": "uniform-random" }
            },
            "attack": { "keystream": "nfsr.ks" }
        }),
    );
    let c = cfg.to_str().unwrap();
    let ks = dir.path().join("nfsr.ks");
    let (sim, _) = structured(&[
        "--config",
        c,
        "simulate",
        "--keystream",
        ks.to_str().unwrap(),
    ]);
    let (r, _) = structured(&["--config", c, "attack"]);
    let w = &r.windows[0];
    assert_eq!((w.p, w.window_samples), (6, 5));
    assert!(w.recovered_bits > 0 && w.recovered_bits + w.guessed_bits == 24);
    assert_eq!(r.attacks[0].kind, "window");
    assert_eq!(
        r.attacks[0].recovered_state.as_deref(),
        Some(planted(&sim).as_str())
    );
}

fn optimize_config(method: &str, extra: Value) -> Value {
    let mut o = json!({ "method": method });
    for (k, v) in extra.as_object().unwrap() {
        o[k] = v.clone();
    }
    json!({ "optimize": o })
}

#[test]
fn step_b_orders_the_reference_differences() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "o.json",
        &optimize_config(
            "step-b",
            json!({ "length": 80, "m": 2, "differences": [5, 13, 7, 26, 11, 17] }),
        ),
    );
    let (r, _) = structured(&["--config", cfg.to_str().unwrap(), "optimize"]);
    let o = r.optimization.unwrap();
    assert!((o.scorecard.constant.log2_total - 69.97).abs() < 0.01);
    let mut d = o.differences.clone();
    d.sort_unstable();
    assert_eq!(d, vec![5, 7, 11, 13, 17, 26]);
}

#[test]
fn two_taps_give_the_trivial_difference() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "o.json",
        &optimize_config("step-a", json!({ "length": 50, "n": 2, "m": 1 })),
    );
    let (r, _) = structured(&["--config", cfg.to_str().unwrap(), "optimize"]);
    assert_eq!(r.optimization.unwrap().differences, vec![49]);
}

#[test]
fn optimize_is_deterministic_under_a_seed() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "o.json",
        &optimize_config(
            "step-a",
            json!({ "length": 60, "n": 5, "m": 2, "budget": 6 }),
        ),
    );
    let c = cfg.to_str().unwrap();
    let (_, a) = structured(&["--config", c, "--seed", "9", "optimize"]);
    let (_, b) = structured(&["--config", c, "--seed", "9", "optimize"]);
    assert_eq!(a, b);
}

#[test]
fn fixture_reports() {
    let (r, _) = structured(&["report", "table3"]);
    let row = &r.tables[0].rows[0];
    for (cell, want) in row.cells.iter().zip([69.97, 63.97, 59.97]) {
        assert_eq!(cell.published, Some(want));
    }
    assert!((row.cells[0].computed.unwrap() - 69.97).abs() < 0.01);
    assert!((row.cells[2].computed.unwrap() - 59.97).abs() < 0.01);
    assert!((row.cells[3].computed.unwrap() - 63.97).abs() < 0.01);

    let (r, _) = structured(&["report", "example3"]);
    let t = &r.tables[0];
    assert_eq!(
        t.rows
            .iter()
            .filter(|r| r.label.starts_with("i = "))
            .count(),
        21
    );
    assert!(t
        .rows
        .iter()
        .flat_map(|r| &r.cells)
        .all(|c| c.delta.map_or(true, |d| d == 0.0)));

    let (r, _) = structured(&["report", "example4"]);
    let t = &r.tables[0];
    let fixture = t
        .rows
        .iter()
        .find(|r| r.label.starts_with("published q-table"))
        .unwrap();
    assert_eq!(fixture.cells[2].computed, Some(224.0));
    assert!(t
        .notes
        .iter()
        .any(|n| n.starts_with("Merged") && !n.contains(" 0 of")));
}

#[test]
fn table_output_uses_two_decimals_and_out_writes_a_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t.txt");
    let o = run(&["report", "annihilator", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("76.32 / 75.93 (-0.39)"), "{text}");
}

#[test]
fn staged_search_reports_its_trace() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "o.json",
        &optimize_config("staged", json!({ "length": 160, "n": 17, "m": 6 })),
    );
    let (r, _) = structured(&["--config", cfg.to_str().unwrap(), "--seed", "3", "optimize"]);
    let o = r.optimization.unwrap();
    assert_eq!(o.differences.len(), 16);
    assert_eq!(o.differences.iter().sum::<usize>() + 1, 160);
    assert!(!o.trace.is_empty());
    assert!((o.scorecard.constant.log2_total - 86.97).abs() <= 3.0);
}
