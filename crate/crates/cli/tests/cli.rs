use std::process::Command;

use psproj_cli::{run_dump, run_verify, Algorithm, CliError, RunConfig, VerificationReport};
use psproj_core::models::ModelName;
use psproj_core::report::Status;

fn cfg(model: ModelName, order: usize) -> RunConfig {
    RunConfig {
        model,
        order,
        samples: 20,
        tail_uniqueness: false,
        ..RunConfig::default()
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_psproj"))
}

/// Value lines of one dump section, e.g. `("+1", 0)`.
fn section_values(dump: &str, label: &str, order: usize) -> Vec<String> {
    let head = format!("## P{label} order {order} ");
    let start = dump
        .find(&head)
        .unwrap_or_else(|| panic!("no section {head}"));
    dump[start..]
        .lines()
        .skip(1)
        .take_while(|l| !l.starts_with("##"))
        .filter(|l| l.trim_start().starts_with('g') && l.contains(": "))
        .flat_map(|l| {
            l.split(": ")
                .nth(1)
                .unwrap()
                .split_whitespace()
                .map(str::to_string)
                .collect::<Vec<_>>()
        })
        .collect()
}

fn is_zero(v: &str) -> bool {
    v.trim_end_matches('i')
        .split(['e', '+', '-', '.'])
        .all(|part| part.chars().all(|c| c == '0'))
}

#[test]
fn config_parsing() {
    let c = RunConfig::from_json(
        r#"{"model": "lame-t2", "order": 2, "tolerance": 1e-9, "algorithm": "simplified",
            "params": {"lambda": 3.0, "mu": 0.5}}"#,
    )
    .unwrap();
    assert_eq!(c.model, ModelName::LameT2);
    assert_eq!(c.order, 2);
    assert_eq!(c.algorithm, Algorithm::Simplified);
    assert_eq!(c.params.lambda, 3.0);
    assert_eq!(c.params.seed, 7);
    assert_eq!(c.samples, 50);

    for bad in [
        r#"{"model": "lame-t3"}"#,
        r#"{"modle": "lame-t2"}"#,
        r#"{"order": 0}"#,
        r#"{"tolerance": -1.0}"#,
        "not json",
    ] {
        let e = RunConfig::from_json(bad).unwrap_err();
        assert!(matches!(e, CliError::Config(_)), "{bad}");
        assert_eq!(e.exit_code(), 2);
    }
}

#[test]
fn scalar_model_passes_at_rounding_level() {
    let report = run_verify(&RunConfig {
        tail_uniqueness: true,
        ..cfg(ModelName::ScalarTrivial, 3)
    })
    .unwrap();
    assert_eq!(report.exit_code(), 0);
    assert!(report.summary.total > 0);
    assert_eq!(report.summary.failed, 0);
    // Euler identities and second-order commutators round differently on
    // each side; everything else cancels exactly
    for r in report
        .rows
        .iter()
        .filter(|r| r.status != Status::NotApplicable)
    {
        let rounding = matches!(
            r.check.as_str(),
            "model.homogeneity" | "modulus.commutes" | "modulus.square"
        );
        let bound = if rounding { 1e-14 } else { 0.0 };
        assert!(r.residual <= bound, "{r:?}");
    }
}

#[test]
fn report_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let md = dir.path().join("report.md");
    let c = RunConfig {
        report: Some(path.clone()),
        markdown: Some(md.clone()),
        ..cfg(ModelName::DiracT3, 1)
    };
    let report = run_verify(&c).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(VerificationReport::from_json(&text).unwrap(), report);
    assert_eq!(report.to_json(), text);
    let table = std::fs::read_to_string(&md).unwrap();
    assert!(table.contains("| uniqueness.variants |"));
    assert_eq!(
        table.lines().filter(|l| l.starts_with("| ")).count(),
        report.rows.len() + 1
    );
}

#[test]
fn lame_projection_sub_row_passes_at_first_order() {
    let report = run_verify(&cfg(ModelName::LameT2, 1)).unwrap();
    let rows: Vec<_> = report
        .rows
        .iter()
        .filter(|r| r.check == "lame.projection-sub")
        .collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.status == Status::Pass));
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn tolerance_only_changes_the_verdict() {
    let loose = run_verify(&cfg(ModelName::DiracS3, 1)).unwrap();
    let strict = run_verify(&RunConfig {
        tolerance: 1e-20,
        ..cfg(ModelName::DiracS3, 1)
    })
    .unwrap();
    assert_eq!(loose.exit_code(), 0);
    assert_eq!(strict.exit_code(), 1);
    assert!(strict.summary.failed > 0);
    assert_eq!(loose.rows.len(), strict.rows.len());
    for (a, b) in loose.rows.iter().zip(&strict.rows) {
        assert_eq!((&a.check, &a.index, a.order), (&b.check, &b.index, b.order));
        assert_eq!(a.residual, b.residual);
    }
}

#[test]
fn model_errors_give_a_partial_report() {
    let mut c = cfg(ModelName::LameT2, 1);
    c.params.mu = -1.0;
    let report = run_verify(&c).unwrap();
    assert!(report.error.is_some());
    assert!(report.rows.is_empty());
    assert_eq!(report.exit_code(), 3);
}

#[test]
fn dumps() {
    let scalar = run_dump(&cfg(ModelName::ScalarTrivial, 2)).unwrap();
    let top = section_values(&scalar, "+1", 0);
    assert_eq!(top.len(), 4);
    assert!(
        top.iter()
            .all(|v| v == "+1.000000000000e0+0.000000000000e0i"),
        "{top:?}"
    );
    for n in 1..=2 {
        assert!(section_values(&scalar, "+1", n).iter().all(|v| is_zero(v)));
    }

    let mut flat = cfg(ModelName::DiracT3, 1);
    flat.params.twist = 0.0;
    let text = run_dump(&flat).unwrap();
    for label in ["-1", "+1"] {
        let sub = section_values(&text, label, 1);
        assert_eq!(sub.len(), 4 * 4);
        assert!(sub.iter().all(|v| is_zero(v)), "{sub:?}");
        assert!(!section_values(&text, label, 0).iter().all(|v| is_zero(v)));
    }

    let dir = tempfile::tempdir().unwrap();
    let c = RunConfig {
        dump: Some(dir.path().join("a.txt")),
        ..cfg(ModelName::LameT2, 2)
    };
    let first = run_dump(&c).unwrap();
    let again = run_dump(&c).unwrap();
    assert_eq!(first, again);
    assert_eq!(
        std::fs::read_to_string(dir.path().join("a.txt")).unwrap(),
        first
    );
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = bin()
        .args([
            "verify",
            "--model",
            "scalar-trivial",
            "--order",
            "2",
            "--samples",
            "10",
            "--report",
        ])
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 failed"));
    let parsed = VerificationReport::from_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(parsed.config.order, 2);

    let out = bin()
        .args([
            "verify",
            "--model",
            "dirac-t3",
            "--order",
            "1",
            "--samples",
            "10",
            "--no-tails",
            "--tol",
            "1e-20",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL "));

    let out = bin().args(["verify", "--model", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"order\": \"three\"}").unwrap();
    let out = bin()
        .args(["verify", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args(["verify", "--model", "lame-t2", "--order", "1", "--mu=-1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"model": "scalar-trivial", "order": 1}"#).unwrap();
    let a = bin().args(["dump", "--config"]).arg(&cfg).output().unwrap();
    let b = bin().args(["dump", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).contains("## P+1 order 1"));
}
