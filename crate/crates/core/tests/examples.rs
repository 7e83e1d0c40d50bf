//! Runs every example through its `run_example` entry point.

mod channel_models {
    #![allow(dead_code)]
    include!("../examples/channel_models.rs");
}
mod threshold_table {
    #![allow(dead_code)]
    include!("../examples/threshold_table.rs");
}
mod recommend_params {
    #![allow(dead_code)]
    include!("../examples/recommend_params.rs");
}
mod nonadaptive_recovery {
    #![allow(dead_code)]
    include!("../examples/nonadaptive_recovery.rs");
}
mod adaptive_recovery {
    #![allow(dead_code)]
    include!("../examples/adaptive_recovery.rs");
}
mod linear_recovery {
    #![allow(dead_code)]
    include!("../examples/linear_recovery.rs");
}
mod oracle_check {
    #![allow(dead_code)]
    include!("../examples/oracle_check.rs");
}
mod experiment_harness {
    #![allow(dead_code)]
    include!("../examples/experiment_harness.rs");
}

use stgt::{ItemLabel, RefLabel};

#[test]
fn channel_models_runs() {
    let rows = channel_models::run_example().unwrap();
    for (k, b, lin, custom, sampled) in rows {
        assert!((0.0..=1.0).contains(&b) && (0.0..=1.0).contains(&custom));
        assert!((lin - sampled).abs() < 0.02, "k = {k}");
    }
}

#[test]
fn threshold_table_runs() {
    let t = threshold_table::run_example().unwrap();
    assert!((t.band.0 - 0.3875).abs() < 1e-12 && (t.band.1 - 0.625).abs() < 1e-12);
    assert!((t.boundary - 0.55).abs() < 1e-12);
    assert_eq!(t.labels[0].1, RefLabel::Promising);
    assert_eq!(t.labels[4].1, RefLabel::Misleading);
    assert_eq!(t.items[1].1, ItemLabel::NonDefective);
    assert_eq!(t.items[2].1, ItemLabel::Defective);
}

#[test]
fn recommend_params_runs() {
    let reports = recommend_params::run_example().unwrap();
    assert_eq!(reports.len(), 3);
    for r in &reports {
        assert_eq!(r.predicted_tests, r.params.predicted_tests());
    }
}

#[test]
fn nonadaptive_recovery_runs() {
    let run = nonadaptive_recovery::run_example().unwrap();
    assert_eq!(run.tests, run.predicted);
    assert!(run.score.exact(), "{:?}", run.score);
    assert_eq!(run.truth, run.found);
}

#[test]
fn adaptive_recovery_runs() {
    let run = adaptive_recovery::run_example().unwrap();
    assert_eq!(run.stage_counts.len(), 2);
    assert!(run.selected.iter().all(Option::is_some));
    assert!(run.score.exact(), "{:?}", run.score);
}

#[test]
fn linear_recovery_runs() {
    let run = linear_recovery::run_example().unwrap();
    assert!(run.score.exact(), "{:?}", run.score);
    assert!(!run.levels.is_empty());
}

#[test]
fn oracle_check_runs() {
    let c = oracle_check::run_example().unwrap();
    assert_eq!(c.q1, "1/2");
    assert_eq!(c.phi, ["2/5".to_string(), "7/10".to_string()]);
    assert!(c.reports.iter().all(|r| r.abs_diff <= 1e-12));
    assert_eq!(c.block_subsets, 56);
}

#[test]
fn experiment_harness_runs() {
    let dir = tempfile::tempdir().unwrap();
    let summary = experiment_harness::run_example_in(dir.path()).unwrap();
    assert_eq!(summary.trials, 20);
    assert!(dir.path().join("trials.jsonl").exists());
    assert!(dir.path().join("summary.json").exists());
}
