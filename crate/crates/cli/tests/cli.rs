use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hoplab::frames::lorentz;
use hoplab_cli::{parse_config, run, Experiment};

fn hoplab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hoplab"))
        .args(args)
        .env("HOPLAB_OUT_DIR", dir)
        .output()
        .expect("binary runs")
}

fn summary(dir: &Path) -> HashMap<String, String> {
    fs::read_to_string(dir.join("summary.csv"))
        .unwrap()
        .lines()
        .skip(2)
        .map(|l| {
            let (k, v) = l.split_once(',').unwrap();
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn parses_documented_examples() {
    let c = parse_config("experiment = harmonics\nhop = 3\nseed = 42").unwrap();
    assert_eq!((c.experiment, c.seed), (Experiment::Harmonics, 42));
    let e = parse_config("experiment = harmonics\nhopp = 3").unwrap_err();
    assert_eq!(e.line, Some(2));
    assert!(e.to_string().contains("hopp"));
    let c =
        parse_config("experiment = bell\ntheta_a = 0\ntheta_b = 0.785398\nn = 1000000\nseed = 7").unwrap();
    assert_eq!(c.experiment, Experiment::Bell);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.conf");
    fs::write(&config, "experiment = harmonics\nhopp = 3\n").unwrap();
    let out = hoplab(dir.path(), &[config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("hopp") && err.contains("line 2"), "{err}");

    assert_eq!(
        hoplab(dir.path(), &["--experiment", "warp"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hoplab(dir.path(), &["--experiment", "frames", "--set", "vB=1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hoplab(dir.path(), &["--experiment", "clock", "--set", "ticks"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hoplab(dir.path(), &[dir.path().join("missing.conf").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn failed_checks_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = hoplab(
        dir.path(),
        &[
            "--experiment",
            "harmonics",
            "--set",
            "n_sites=400",
            "--set",
            "hop=2",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(summary(dir.path())["pass"], "0");
}

#[test]
fn harmonics_hop_two_runs_at_twice_the_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("h.conf");
    fs::write(
        &config,
        "# second harmonic\nexperiment = harmonics\nhop = 2\nseed = 42\n",
    )
    .unwrap();
    let out = hoplab(dir.path(), &[config.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let s = summary(dir.path());
    let speed: f64 = s["front_speed"].parse().unwrap();
    let baseline: f64 = s["baseline_speed"].parse().unwrap();
    assert!((speed / (2.0 * baseline) - 1.0).abs() < 0.05, "{speed}");
    let header = fs::read_to_string(dir.path().join("front.csv")).unwrap();
    assert!(header.starts_with("# experiment=harmonics seed=42 hop=2\nsite,crossing_time\n"));
}

#[test]
fn frames_fit_matches_the_boost() {
    let dir = tempfile::tempdir().unwrap();
    let out = hoplab(
        dir.path(),
        &["--experiment", "frames", "--set", "vB=0.6", "--set", "seed=1"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("frames.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "event_id,tA,xiA,tB,xiB");
    assert_eq!(lines[lines.len() - 2], "m00,m01,m10,m11,b0,b1");
    let fitted: Vec<f64> = lines[lines.len() - 1]
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    let expected = lorentz(0.6, 1.0).unwrap().entries();
    for (f, e) in fitted.iter().zip(&expected) {
        assert!((f - e).abs() <= 1e-6 * e.abs().max(1.0), "{f} vs {e}");
    }
}

#[test]
fn nonlinear_map_yields_violating_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let out = hoplab(
        dir.path(),
        &[
            "--experiment",
            "causal-check",
            "--set",
            "map=quadratic",
            "--set",
            "amplitude=0.1",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("violations.csv"));
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.len() == 8));
    assert_eq!(summary(dir.path())["order_preserved"], "0");
}

#[test]
fn similarity_map_preserves_order() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--experiment",
        "causal-check",
        "--set",
        "map=similarity",
        "--set",
        "v=0.7",
        "--set",
        "lambda=3",
    ];
    assert_eq!(hoplab(dir.path(), &args).status.code(), Some(0));
    assert!(csv_rows(&dir.path().join("violations.csv")).is_empty());
}

#[test]
fn remaining_experiments_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (
            "experiment = dispersion\nhops = 1:1.0,3:0.25",
            "dispersion.csv",
            "k,omega,vg",
        ),
        (
            "experiment = phased-array\nc_mult = 2",
            "schedule.csv",
            "tick,site",
        ),
        (
            "experiment = bell\ntheta_a = 0\ntheta_b = 1\nn = 10000\nmax_k = 2",
            "borel.csv",
            "k,block,freq,expected,pass",
        ),
        (
            "experiment = bell\ntheta_a = 0\ntheta_b = 1\nn = 10000",
            "correlations.csv",
            "theta_a,theta_b,n,E,stderr",
        ),
        (
            "experiment = perm-dist\np = 1,0,2\nq = 0,1,2\nmetric = kendall",
            "distances.csv",
            "metric,distance",
        ),
        (
            "experiment = ca\nwidth = 20\nsteps = 4",
            "ca.csv",
            "tick,site,bit",
        ),
        ("experiment = clock", "summary.csv", "key,value"),
    ];
    for (i, (text, file, header)) in cases.iter().enumerate() {
        let mut cfg = parse_config(text).unwrap();
        cfg.output = dir.path().join(i.to_string());
        let outcome = run(&cfg).unwrap();
        assert!(outcome.passed, "{text}");
        let body = fs::read_to_string(cfg.output.join(file)).unwrap();
        assert_eq!(body.lines().nth(1), Some(*header), "{text}");
        assert!(body.starts_with(&format!("# experiment={} seed=0", cfg.experiment)));
    }
}

#[test]
fn phased_array_reproduces_the_second_row_block() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        hoplab(dir.path(), &["--experiment", "phased-array", "--set", "c_mult=2"])
            .status
            .code(),
        Some(0)
    );
    let rows = csv_rows(&dir.path().join("pattern.csv"));
    let bits: Vec<String> = rows.iter().map(|r| r[1..].join("")).collect();
    assert_eq!(bits, ["1000000", "0010000", "0000100", "0000001"]);
}

#[test]
fn clock_reports_exact_ratios() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        hoplab(dir.path(), &["--experiment", "clock", "--set", "seconds=1/2"])
            .status
            .code(),
        Some(0)
    );
    let s = summary(dir.path());
    assert_eq!(s["ticks_in_seconds"], "1");
    assert_eq!(s["seconds_in_ticks"], "4596315885");
    assert_eq!(s["metre_in_ticks_exact"], "656616555/21413747");
    assert_eq!(s["metre_in_ticks_rounded"], "31");
}

#[test]
fn ca_runs_reverse_to_their_start() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--experiment",
        "ca",
        "--set",
        "rule=150",
        "--set",
        "random_seed_layer=true",
        "--set",
        "seed=5",
    ];
    assert_eq!(hoplab(dir.path(), &args).status.code(), Some(0));
    assert_eq!(summary(dir.path())["reversible"], "1");
    let bad = ["--experiment", "ca", "--set", "rule=151"];
    assert_eq!(hoplab(dir.path(), &bad).status.code(), Some(2));
}

#[test]
fn output_key_sets_the_directory() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("nested/out");
    let out = Command::new(env!("CARGO_BIN_EXE_hoplab"))
        .args([
            "--experiment",
            "clock",
            "--set",
            &format!("output={}", target.display()),
        ])
        .env_remove("HOPLAB_OUT_DIR")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(target.join("summary.csv").exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--experiment",
        "bell",
        "--set",
        "theta_a=0.3",
        "--set",
        "theta_b=1.1",
        "--set",
        "seed=11",
        "--set",
        "n=50000",
    ];
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(hoplab(&a, &args).status.success());
    assert!(hoplab(&b, &args).status.success());
    for f in ["correlations.csv", "summary.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
    }
}
