use std::fs;
use std::process::Command;

use aospr::harness::{self, read_summary, CSV_FILE, SUMMARY_FILE};
use aospr::Error;

fn config(dir: &std::path::Path, horizon: u64, reps: usize, policies: &str) -> String {
    format!(
        r#"{{
        "graph": {{"generator": {{"kind": "parallel_chains", "chains": 3, "length": 2}}}},
        "regime": {{"kind": "stochastic", "means": [0.1, 0.1, 0.3, 0.3, 0.3, 0.3]}},
        "policies": {policies},
        "horizon": {horizon}, "repetitions": {reps}, "seed": 17,
        "output_dir": {dir:?}
    }}"#
    )
}

const TWO: &str = r#"[{"policy": "aospr"}, {"policy": "exp3_path"}]"#;

#[test]
fn identical_configs_give_identical_files() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let cfg = harness::parse_config(&config(dir, 10, 2, TWO)).unwrap();
        harness::run(&cfg).unwrap();
    }
    assert_eq!(fs::read(a.join(CSV_FILE)).unwrap(), fs::read(b.join(CSV_FILE)).unwrap());
    let strip = |p: &std::path::Path| {
        let mut s = read_summary(&p.join(SUMMARY_FILE)).unwrap();
        s.config.output_dir = Default::default();
        s
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn parallel_and_serial_agree() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = harness::parse_config(&config(tmp.path(), 300, 6, TWO)).unwrap();
    cfg.threads = Some(3);
    let exp = cfg.build().unwrap();
    assert_eq!(exp.simulate().unwrap(), exp.simulate_serial().unwrap());
}

#[test]
fn oracle_has_zero_pseudo_regret() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = harness::parse_config(&config(tmp.path(), 500, 3, r#"[{"policy": "oracle"}]"#)).unwrap();
    let runs = cfg.build().unwrap().simulate().unwrap();
    for r in runs {
        assert!(r[0].regret.iter().all(|&v| v == 0.0));
        assert_eq!(r[0].edge_gap_regret, Some(0.0));
    }
}

#[test]
fn oracle_in_hindsight_mode_has_nonnegative_regret() {
    let cfg = harness::parse_config(
        r#"{
        "graph": {"generator": {"kind": "diamond"}},
        "regime": {"kind": "oblivious", "schedule": {"sinusoid": {"period": 50, "amplitude": 0.4, "levels": 5}}},
        "policies": [{"policy": "oracle"}],
        "horizon": 400, "repetitions": 2
    }"#,
    )
    .unwrap();
    let runs = cfg.build().unwrap().simulate().unwrap();
    for r in runs {
        assert_eq!(*r[0].regret.last().unwrap(), 0.0);
    }
}

#[test]
fn edge_gap_form_matches_path_form() {
    // Every path has two edges and the best path is made of best edges, so
    // both forms of the pseudo-regret coincide.
    let tmp = tempfile::tempdir().unwrap();
    let policies = r#"[{"policy": "aospr"}, {"policy": "exp3_path"}, {"policy": "combucb1"}]"#;
    let cfg = harness::parse_config(&config(tmp.path(), 3000, 3, policies)).unwrap();
    for rep in cfg.build().unwrap().simulate().unwrap() {
        for p in rep {
            let path_form = *p.regret.last().unwrap();
            assert!((p.edge_gap_regret.unwrap() - path_form).abs() < 1e-9);
            assert!(p.regret.windows(2).all(|w| w[1] >= w[0]));
        }
    }
}

#[test]
fn single_round_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = harness::parse_config(&config(tmp.path(), 1, 1, TWO)).unwrap();
    harness::run(&cfg).unwrap();
    let text = fs::read_to_string(tmp.path().join(CSV_FILE)).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "round,aospr_mean_regret,aospr_std_regret,exp3_path_mean_regret,exp3_path_std_regret");
    assert!(lines[1].starts_with("1,"));
}

#[test]
fn adversarial_csv_has_bound_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let text = format!(
        r#"{{
        "graph": {{"generator": {{"kind": "parallel_chains", "chains": 3, "length": 2}}}},
        "regime": {{"kind": "oblivious", "schedule": "alternating"}},
        "policies": [{{"policy": "aospr"}}, {{"policy": "aospr", "probe_budget": 3, "label": "probing"}}],
        "horizon": 20, "repetitions": 2, "csv_stride": 10, "output_dir": {:?}
    }}"#,
        tmp.path()
    );
    harness::run(&harness::parse_config(&text).unwrap()).unwrap();
    let mut reader = csv::Reader::from_path(tmp.path().join(CSV_FILE)).unwrap();
    let header = reader.headers().unwrap().clone();
    assert!(header.iter().any(|h| h == "aospr_bound"));
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let b1: f64 = rows[1][col("aospr_bound")].parse().unwrap();
    let b3: f64 = rows[1][col("probing_bound")].parse().unwrap();
    assert!((b1 - 4.0 * 2.0 * (20.0 * 6.0 * 6f64.ln()).sqrt()).abs() < 1e-9);
    assert!((b3 / b1 - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
}

#[test]
fn summary_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = harness::parse_config(&config(tmp.path(), 50, 3, TWO)).unwrap();
    cfg.record_timing = true;
    let summary = harness::run(&cfg).unwrap();
    assert_eq!(read_summary(&tmp.path().join(SUMMARY_FILE)).unwrap(), summary);
    assert!(summary.policies.iter().all(|p| p.seconds_per_round.is_some() && p.finals.len() == 3));
}

#[test]
fn config_errors_name_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = config(tmp.path(), 10, 1, r#"[{"policy": "aospr", "probe_budget": 9}]"#);
    assert!(matches!(harness::parse_config(&bad).unwrap().build(), Err(Error::BudgetTooLarge { budget: 9, paths: 3 })));
    let bad = config(tmp.path(), 10, 1, r#"[{"policy": "aospr", "variant": "fancy"}]"#);
    match harness::parse_config(&bad).unwrap_err() {
        Error::Config { path, .. } => assert_eq!(path, "policies[0].variant"),
        e => panic!("{e}"),
    }
    let bad = config(tmp.path(), 0, 1, TWO);
    match harness::parse_config(&bad).unwrap().build().unwrap_err() {
        Error::Config { path, .. } => assert_eq!(path, "horizon"),
        e => panic!("{e}"),
    }
}

#[test]
fn sweep_writes_one_directory_per_value() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = harness::parse_config(&config(tmp.path(), 20, 1, TWO)).unwrap();
    let out = harness::sweep(&cfg, "policies.0.c", &["2".into(), "18".into()]).unwrap();
    assert_eq!(out.len(), 2);
    assert_eq!(out[0].config.policies[0].c, Some(2.0));
    for v in ["2", "18"] {
        assert!(tmp.path().join(format!("policies.0.c={v}")).join(CSV_FILE).exists());
    }
}

#[test]
fn mixed_regime_reports_both_regrets() {
    let tmp = tempfile::tempdir().unwrap();
    let text = format!(
        r#"{{
        "graph": {{"generator": {{"kind": "parallel_chains", "chains": 3, "length": 2}}}},
        "regime": {{"kind": "mixed", "means": [0.1, 0.1, 0.3, 0.3, 0.3, 0.3], "attacked": [0],
                   "adversary": {{"adaptive": {{"memory": 2}}}}}},
        "policies": [{{"policy": "aospr", "minibatch": 4}}],
        "horizon": 200, "repetitions": 2, "output_dir": {:?}
    }}"#,
        tmp.path()
    );
    let summary = harness::run(&harness::parse_config(&text).unwrap()).unwrap();
    assert_eq!(summary.regret, "hindsight");
    assert!(summary.policies[0].stochastic_regret_mean.is_some());
    let header = fs::read_to_string(tmp.path().join(CSV_FILE)).unwrap();
    assert!(header.lines().next().unwrap().contains("aospr_stochastic_regret"));
}

#[test]
fn cli_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_aospr");
    let tmp = tempfile::tempdir().unwrap();
    let good = tmp.path().join("good.json");
    fs::write(&good, config(&tmp.path().join("out"), 30, 2, TWO)).unwrap();
    let out = Command::new(bin).arg("validate").arg(&good).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok: 6 edges, 3 paths"));
    let status = Command::new(bin).arg("run").arg(&good).output().unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert!(tmp.path().join("out").join(SUMMARY_FILE).exists());

    let bad = tmp.path().join("bad.json");
    fs::write(&bad, config(tmp.path(), 30, 0, TWO)).unwrap();
    let out = Command::new(bin).arg("validate").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("repetitions"));

    let table = tmp.path().join("short.json");
    fs::write(
        &table,
        r#"{"graph": {"generator": {"kind": "diamond"}},
            "regime": {"kind": "oblivious", "schedule": {"table": [[0, 0, 1, 1]]}},
            "policies": [{"policy": "aospr"}], "horizon": 5, "repetitions": 1, "output_dir": "o"}"#,
    )
    .unwrap();
    let out = Command::new(bin).arg("run").arg(&table).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    let out = Command::new(bin)
        .args(["sweep", good.to_str().unwrap(), "--param", "horizon=5,6"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(tmp.path().join("out").join("horizon=6").join(CSV_FILE).exists());
}

#[test]
fn example_configs_validate() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().map_or(false, |e| e == "json") {
            harness::validate(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert!(seen > 0);
}
