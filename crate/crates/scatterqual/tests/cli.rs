use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_scatterqual"));
    c.env_remove("SCATTERQUAL_SEED");
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("spawn")
}

fn points_file(dir: &Path, n: usize) -> PathBuf {
    let mut s = String::from("# random points\n");
    let mut x: u64 = 12345;
    for _ in 0..n {
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64) / (1u64 << 53) as f64
        };
        let (a, b) = (next(), next());
        s.push_str(&format!("{a},{b}\n"));
    }
    let p = dir.join("p.csv");
    fs::write(&p, s).unwrap();
    p
}

fn data_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn distnorm_reports_a_certified_bracket() {
    let dir = TempDir::new().unwrap();
    points_file(dir.path(), 100);
    let out = run(dir.path(), &["distnorm", "--points", "p.csv", "--gamma", "2", "--mesh", "0.01", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("o/distnorm.csv")).unwrap();
    assert!(text.contains("# config-sha256: "));
    assert!(text.contains("gamma,value,lower,upper,method"));
    let row = &data_rows(&dir.path().join("o/distnorm.csv"))[0];
    let v: Vec<f64> = row[1..4].iter().map(|s| s.parse().unwrap()).collect();
    assert!(v[1] <= v[0] && v[0] <= v[2]);
    assert!(dir.path().join("o/manifest.json").exists());
}

#[test]
fn identical_runs_give_identical_bytes_for_any_thread_count() {
    let dir = TempDir::new().unwrap();
    let args = ["random-rates", "--n", "16,64", "--trials", "6", "--seed", "4", "--gamma", "inf", "--alpha", "1"];
    for (name, threads) in [("a", "1"), ("b", "1"), ("c", "3")] {
        let mut a = args.to_vec();
        a.extend(["--out", name, "--threads", threads]);
        assert_eq!(run(dir.path(), &a).status.code(), Some(0));
    }
    let read = |n: &str| fs::read(dir.path().join(n).join("random-rates.csv")).unwrap();
    assert_eq!(read("a"), read("b"));
    assert_eq!(read("a"), read("c"));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["distnorm", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(1));
    // missing input file
    assert_eq!(run(dir.path(), &["distnorm", "--points", "absent.csv"]).status.code(), Some(1));
    // bad domain text
    points_file(dir.path(), 10);
    assert_eq!(run(dir.path(), &["distnorm", "--points", "p.csv", "--domain", "cube"]).status.code(), Some(1));
}

#[test]
fn numerical_failures_exit_two_and_are_recorded() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["hole-demo", "--n", "16", "--hole-exponent", "0.1", "--out", "o"]);
    assert_eq!(out.status.code(), Some(2));
    let manifest = fs::read_to_string(dir.path().join("o/manifest.json")).unwrap();
    assert!(manifest.contains("\"exit_code\": 2"));
    assert!(manifest.contains("reaches the boundary"));
}

#[test]
fn config_files_are_strict_and_flags_override_them() {
    let dir = TempDir::new().unwrap();
    points_file(dir.path(), 50);
    fs::write(dir.path().join("bad.cfg"), "domain = box(0,1)^2\ngammma = 2\n").unwrap();
    let out = run(dir.path(), &["distnorm", "--points", "p.csv", "--config", "bad.cfg"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("gammma") && err.contains("bad.cfg:2"), "{err}");

    fs::write(dir.path().join("ok.cfg"), "# minimal\ndomain = box(0,1)^2\ngamma = 1\nmesh = 0.02\n").unwrap();
    assert_eq!(run(dir.path(), &["distnorm", "--points", "p.csv", "--config", "ok.cfg", "--out", "f"]).status.code(), Some(0));
    assert_eq!(data_rows(&dir.path().join("f/distnorm.csv"))[0][0], "1");
    let args = ["distnorm", "--points", "p.csv", "--config", "ok.cfg", "--gamma", "3", "--out", "g"];
    assert_eq!(run(dir.path(), &args).status.code(), Some(0));
    assert_eq!(data_rows(&dir.path().join("g/distnorm.csv"))[0][0], "3");
}

#[test]
fn seed_falls_back_to_the_environment() {
    let dir = TempDir::new().unwrap();
    let args = ["limit-const", "--d", "1", "--gamma", "1", "--n", "50", "--trials", "3"];
    let with_env = |out: &str, extra: &[&str]| {
        let mut a = args.to_vec();
        a.extend(["--out", out]);
        a.extend(extra);
        bin().current_dir(dir.path()).env("SCATTERQUAL_SEED", "42").args(&a).output().unwrap()
    };
    assert_eq!(with_env("e", &[]).status.code(), Some(0));
    assert!(fs::read_to_string(dir.path().join("e/limit-const.csv")).unwrap().contains("# seed: 42\n"));
    assert_eq!(with_env("c", &["--seed", "7"]).status.code(), Some(0));
    assert!(fs::read_to_string(dir.path().join("c/limit-const.csv")).unwrap().contains("# seed: 7\n"));
}

#[test]
fn limit_constant_example_has_reference_one_half() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["limit-const", "--d", "1", "--gamma", "1", "--n", "1000", "--trials", "200", "--seed", "7", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = data_rows(&dir.path().join("o/limit-const.csv"));
    let mean: f64 = rows[0][1].parse().unwrap();
    let reference: f64 = rows[0][7].parse().unwrap();
    assert!((reference - 0.5).abs() < 1e-12);
    assert!((mean / 0.5 - 1.0).abs() < 0.05);
}

#[test]
fn replay_reproduces_outputs_and_inputs_are_untouched() {
    let dir = TempDir::new().unwrap();
    let p = points_file(dir.path(), 80);
    let before = fs::read(&p).unwrap();
    let out = run(dir.path(), &["cover", "--points", "p.csv", "--c", "0.5", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(dir.path(), &["replay", "--manifest", "o/manifest.json", "--out", "r"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(dir.path().join("o/cover.csv")).unwrap(), fs::read(dir.path().join("r/cover.csv")).unwrap());
    assert_eq!(fs::read(&p).unwrap(), before);
}

#[test]
fn point_commands_run() {
    let dir = TempDir::new().unwrap();
    points_file(dir.path(), 120);
    let cases: &[&[&str]] = &[
        &["subset", "--points", "p.csv", "--h", "0.1", "--out", "s"],
        &["lower", "--points", "p.csv", "--out", "l"],
        &["approx", "--points", "p.csv", "--function", "quadratic", "--q", "2", "--out", "a"],
        &["quad", "--points", "p.csv", "--samples", "4096", "--product-samples", "256", "--s", "2.5", "--out", "q"],
        &["distnorm", "--points", "p.csv", "--gamma", "inf", "--out", "d"],
    ];
    for args in cases {
        let out = run(dir.path(), args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let kept = data_rows(&dir.path().join("s/subset.csv"));
    assert!(!kept.is_empty() && kept.len() < 120);
    let lower = data_rows(&dir.path().join("l/lower.csv"));
    assert_eq!(lower.len(), 2);
    let weights = data_rows(&dir.path().join("q/quad.csv"));
    let total: f64 = weights.iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 0.1, "{total}");
}

#[test]
fn header_flag_skips_the_first_row() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("h.csv"), "x,y\n0.25,0.25\n0.75,0.75\n").unwrap();
    assert_eq!(run(dir.path(), &["distnorm", "--points", "h.csv", "--out", "o"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["distnorm", "--points", "h.csv", "--header", "--out", "o"]).status.code(), Some(0));
}
