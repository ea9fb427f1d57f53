use std::process::Command;

use nfsec_cli::config::{ExperimentConfig, ExperimentId, Scheme, SweepAxis};
use nfsec_cli::experiment::{curve, run_experiment, ResultRow};
use nfsec_cli::output::CSV_HEADER;
use nfsec_cli::{bench_runtime, emit_csv, emit_json, read_csv, read_json};
use nfsec_cli::scenario::build_scenario;
use nfsec_core::beamformer::pairwise_link;
use nfsec_core::secrecy::diagnose;
use nfsec_core::SecrecyCase;

fn small_fig6() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::preset(ExperimentId::Fig6);
    cfg.seeds = vec![1];
    cfg.sweep.values = vec![20.0, 30.0, 40.0];
    cfg
}

fn strip_runtime(rows: &[ResultRow]) -> Vec<ResultRow> {
    rows.iter().cloned().map(|r| ResultRow { runtime_s: 0.0, ..r }).collect()
}

#[test]
fn csv_and_json_round_trip() {
    let mut cfg = ExperimentConfig::preset(ExperimentId::Custom);
    cfg.schemes = vec![Scheme::Conventional, Scheme::Proposed, Scheme::Baseline1, Scheme::NoAn];
    let rows = run_experiment(&cfg).unwrap().rows;
    assert!(rows.iter().any(|r| !r.objective_history.is_empty()));
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let json = dir.path().join("rows.json");
    emit_csv(&rows, &csv).unwrap();
    emit_json(&rows, &json).unwrap();
    assert_eq!(read_csv(&csv).unwrap(), rows);
    assert_eq!(read_json(&json).unwrap(), rows);
}

#[test]
fn empty_result_file_has_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    emit_csv(&[], &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), CSV_HEADER.join(",") + "\n");
    assert!(read_csv(&path).unwrap().is_empty());
}

#[test]
fn runs_are_reproducible() {
    let cfg = small_fig6();
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&cfg).unwrap();
    assert_eq!(strip_runtime(&a.rows), strip_runtime(&b.rows));
}

#[test]
fn isolated_user_gets_the_closed_form_split() {
    let cfg = ExperimentConfig::from_path(std::path::Path::new("../../configs/custom.toml")).unwrap();
    let s = build_scenario(&cfg, cfg.seeds[0]).unwrap();
    let link = pairwise_link(&s, 0, s.total_power).unwrap();
    let out = run_experiment(&cfg).unwrap();
    let conv = out.rows.iter().find(|r| r.scheme == "conventional").unwrap();
    let prop = out.rows.iter().find(|r| r.scheme == "proposed").unwrap();
    assert_eq!(prop.opt_count, 0);
    let closed = diagnose(&link).max_secrecy_rate;
    assert!((prop.rate_bps_hz - closed).abs() <= 1e-6 * closed, "{} vs {closed}", prop.rate_bps_hz);
    assert!(conv.rate_bps_hz >= prop.rate_bps_hz - 1e-6);
}

#[test]
fn fig2_panels_follow_their_diagnosis() {
    let mut cfg = ExperimentConfig::preset(ExperimentId::Fig2);
    cfg.sweep.linspace = Some((0.0, 0.999, 200));
    let out = run_experiment(&cfg).unwrap();
    assert_eq!(out.panels.len(), 3);
    for panel in &out.panels {
        let c = curve(&out.summary, &panel.label);
        let (arg, max) = c.iter().fold((0.0, f64::NEG_INFINITY), |a, p| if p.1 > a.1 { *p } else { a });
        match panel.case_label {
            SecrecyCase::Case1Regainable => assert!(c[0].1 == 0.0 && max > 0.0 && arg > 0.0),
            SecrecyCase::Case2InteriorMax => assert!(c[0].1 > 0.0 && arg > 0.0 && arg < 0.999),
            SecrecyCase::Case3Monotone => assert!(arg == 0.0 && c.windows(2).all(|w| w[1].1 <= w[0].1)),
            SecrecyCase::InsecureUnrecoverable => assert_eq!(max, 0.0),
        }
    }
    let labels: Vec<SecrecyCase> = out.panels.iter().map(|p| p.case_label).collect();
    assert_eq!(labels, [SecrecyCase::Case1Regainable, SecrecyCase::Case2InteriorMax, SecrecyCase::Case3Monotone]);
}

#[test]
fn conventional_dominates_the_baselines() {
    let cfg = small_fig6();
    let rows = run_experiment(&cfg).unwrap().rows;
    for conv in rows.iter().filter(|r| r.scheme == "conventional" && r.iterations < cfg.sca.max_iters) {
        for other in rows.iter().filter(|r| r.sweep == conv.sweep && r.seed == conv.seed && r.scheme != conv.scheme) {
            let slack = match other.scheme.as_str() {
                "baseline1" | "baseline3" => 1e-6,
                _ => 1e-3 * other.rate_bps_hz,
            };
            assert!(conv.rate_bps_hz >= other.rate_bps_hz - slack, "{} {} vs {}", other.scheme, other.rate_bps_hz, conv.rate_bps_hz);
        }
    }
}

#[test]
fn bench_counts_are_deterministic_and_proposed_is_faster() {
    let mut cfg = ExperimentConfig::preset(ExperimentId::Table1);
    cfg.bench_reps = 3;
    let a = bench_runtime(&cfg).unwrap();
    let b = bench_runtime(&cfg).unwrap();
    assert_eq!(a.len(), cfg.bench_users.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.proposed_opt_count, y.proposed_opt_count);
        assert_eq!(x.proposed_rate, y.proposed_rate);
        assert!(x.ratio < 1.0, "K={} ratio {}", x.num_users, x.ratio);
    }
    let inversions = a.windows(2).filter(|w| w[1].ratio > w[0].ratio).count();
    assert!(inversions <= 1);
}

#[test]
fn sweep_points_change_the_scenario() {
    let mut cfg = ExperimentConfig::preset(ExperimentId::Fig7);
    cfg.schemes = vec![Scheme::Baseline1];
    cfg.seeds = vec![1];
    assert_eq!(cfg.sweep.axis, SweepAxis::NumUsers);
    let out = run_experiment(&cfg).unwrap();
    assert_eq!(out.rows.len(), 5);
    assert!(out.rows.iter().all(|r| r.is_ok() && r.power_w <= r.budget_w * (1.0 + 1e-9)));
}

fn nfsec() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nfsec"))
}

#[test]
fn binary_runs_and_reports_exit_classes() {
    let dir = tempfile::tempdir().unwrap();
    let run = nfsec().args(["run", "../../configs/custom.toml", "--out"]).arg(dir.path()).output().unwrap();
    assert!(run.status.success());
    let rows = read_csv(&dir.path().join("custom.csv")).unwrap();
    assert_eq!(rows.len(), 2);

    let json = nfsec().args(["run", "../../configs/custom.toml", "--format", "json", "--seed", "5", "--out"]).arg(dir.path()).output();
    assert!(json.unwrap().status.success());
    assert!(read_json(&dir.path().join("custom.json")).unwrap().iter().all(|r| r.seed == 5));

    let sets = nfsec().args(["sets", "../../configs/custom.toml"]).output().unwrap();
    assert!(sets.status.success());
    let report: serde_json::Value = serde_json::from_slice(&sets.stdout).unwrap();
    assert!(report.get("plan").is_some());

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "schema_version = 7\nexperiment = \"fig6\"\n").unwrap();
    assert_eq!(nfsec().arg("run").arg(&bad).output().unwrap().status.code(), Some(2));
    assert_eq!(nfsec().args(["run", "/nonexistent/config.toml"]).output().unwrap().status.code(), Some(3));
}
