//! End-to-end runs of the `smoothdiv` binary against frozen outputs and
//! the exit-code contract (0 success, 1 numeric or check failure, 2 usage).

use std::path::PathBuf;
use std::process::{Command, Output};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smoothdiv"))
        .current_dir(dir())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(dir().join("golden").join(name)).unwrap()
}

/// Runs twice, checks both runs are identical and the exit code matches.
fn run_stable(args: &[&str], code: i32) -> String {
    let a = run(args);
    let b = run(args);
    assert_eq!(a.status.code(), Some(code), "{args:?}: {}", stderr(&a));
    assert_eq!(a.stdout, b.stdout, "{args:?} is not deterministic");
    stdout(&a)
}

fn value(o: &str) -> f64 {
    o.trim().parse().unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// 50-digit mpmath evaluations of the defining sums.
const DPHI_ORACLE: f64 = 3.920_104_263_723_818_390_991_841_944;
const DNEW_ORACLE: f64 = 0.273_764_641_544_851_375_174_903_347_697;
const SWEEP_BETA_100_ORACLE: f64 = 2.939_876_980_407_802_823_158_551_412;
const SWEEP_M_100_ORACLE: f64 = 2.903_823_161_593_077_699_574_720_040;

#[test]
fn eval_scalar() {
    assert_eq!(run_stable(&["eval", "--t", "1"], 0), "0\n");
    let out = run_stable(&["eval", "--t", "0"], 0);
    assert_eq!(out, golden("eval_t0.txt"));
    assert!(rel(value(&out), 0.225_987_155_913_497_33) <= 1e-15);
    assert_eq!(
        run_stable(&["eval", "--t", "-1", "--divergence", "tv"], 0),
        "2\n"
    );
}

#[test]
fn eval_vectors() {
    assert_eq!(
        run_stable(&["eval", "--q", "data/p.txt", "--p", "data/p.txt"], 0),
        "0\n"
    );
    let args = [
        "eval",
        "--q",
        "data/q.txt",
        "--p",
        "data/p.txt",
        "--alpha",
        "0.5",
        "--beta",
        "2",
        "--ctilde",
        "0.7",
    ];
    let out = run_stable(&args, 0);
    assert_eq!(out, golden("eval_dphi.txt"));
    assert!(rel(value(&out), DPHI_ORACLE) <= 1e-15);
    let args = [
        "eval",
        "--q",
        "data/q.txt",
        "--p",
        "data/p.txt",
        "--qstar",
        "data/qstar.txt",
        "--sigma",
        "data/sigma.txt",
        "--shift",
    ];
    let out = run_stable(&args, 0);
    assert_eq!(out, golden("eval_dnew.txt"));
    assert!(rel(value(&out), DNEW_ORACLE) <= 1e-15);
    let tv = run_stable(
        &[
            "eval",
            "--q",
            "data/q.txt",
            "--p",
            "data/p.txt",
            "--divergence",
            "tv",
        ],
        0,
    );
    assert_eq!(tv, "4\n");
    let wl1 = run_stable(
        &[
            "eval",
            "--q",
            "data/q.txt",
            "--qstar",
            "data/qstar.txt",
            "--sigma",
            "data/sigma.txt",
            "--divergence",
            "weighted-l1",
        ],
        0,
    );
    assert_eq!(wl1, "1.25\n");
}

#[test]
fn sweep_goldens() {
    let out = run_stable(&["sweep", "--q", "data/q.txt", "--grid", "1e2,1e4,1e6"], 0);
    assert_eq!(out, golden("sweep_beta.csv"));
    let rows: Vec<Vec<&str>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert!(rel(rows[0][3].parse().unwrap(), SWEEP_BETA_100_ORACLE) <= 1e-15);
    let gaps: Vec<f64> = rows
        .iter()
        .map(|r| r[5].parse::<f64>().unwrap().abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");

    let out = run_stable(
        &[
            "sweep",
            "--q",
            "data/q.txt",
            "--mode",
            "alpha-to-zero",
            "--divergence",
            "d_new",
            "--qstar",
            "data/qstar.txt",
            "--sigma",
            "data/sigma.txt",
            "--weights",
            "data/p.txt",
            "--log-grid",
            "1:1e-8:5",
            "--family",
            "0.5,2",
            "--ctilde",
            "0.7",
        ],
        0,
    );
    assert_eq!(out, golden("sweep_alpha_shift.csv"));

    let out = run_stable(
        &[
            "sweep",
            "--q",
            "data/q.txt",
            "--mode",
            "p-to-zero",
            "--weights",
            "data/p.txt",
            "--log-grid",
            "1:1e8:5",
            "--family",
            "1",
        ],
        0,
    );
    assert_eq!(out, golden("sweep_weights.csv"));
    let second = out.lines().nth(2).unwrap().split(',').nth(3).unwrap();
    assert!(rel(second.parse().unwrap(), SWEEP_M_100_ORACLE) <= 1e-15);
}

#[test]
fn sweep_to_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("smoothdiv-sweep-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let o = run(&[
        "sweep",
        "--q",
        "data/q.txt",
        "--grid",
        "1e2,1e4,1e6",
        "--out",
        p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        golden("sweep_beta.csv")
    );
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn single_cell_sweep_reproduces_eval() {
    let eval = run_stable(
        &[
            "eval",
            "--q",
            "data/q.txt",
            "--p",
            "data/p.txt",
            "--alpha",
            "0.5",
            "--beta",
            "2",
            "--ctilde",
            "0.7",
        ],
        0,
    );
    let sweep = run_stable(
        &[
            "sweep",
            "--q",
            "data/q.txt",
            "--mode",
            "alpha-to-zero",
            "--weights",
            "data/p.txt",
            "--grid",
            "0.5",
            "--family",
            "2",
            "--ctilde",
            "0.7",
        ],
        0,
    );
    let cell = sweep.lines().nth(1).unwrap().split(',').nth(3).unwrap();
    assert_eq!(cell, eval.trim());
}

#[test]
fn csv_values_round_trip() {
    let out = golden("sweep_alpha_shift.csv");
    for line in out.lines().skip(1) {
        for field in line.split(',').skip(1) {
            let v: f64 = field.parse().unwrap();
            assert_eq!(smoothdiv::format_number(v), field);
        }
    }
}

#[test]
fn duality_golden_and_pass() {
    let args = [
        "duality-check",
        "--alpha",
        "0.5",
        "--beta",
        "2",
        "--ctilde",
        "1.5",
        "--mp",
        "3",
        "--samples",
        "20000",
        "--seed",
        "7",
    ];
    let out = run_stable(&args, 0);
    assert_eq!(out, golden("duality.json"));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["shape"], 3.0 * 1.5 * 0.5);
    assert_eq!(v["rate"], 3.0 * 1.5 * 2.0);
    assert_eq!(v["grid_size"], 201);
    assert!(v["max_rel_error"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["pass"], true);
    assert_eq!(v["monte_carlo"]["pass"], true);
    assert_eq!(v["monte_carlo"]["mgf"].as_array().unwrap().len(), 5);
}

#[test]
fn duality_defaults() {
    let v: serde_json::Value = serde_json::from_str(&run_stable(&["duality-check"], 0)).unwrap();
    for key in [
        "params",
        "m_p",
        "shape",
        "rate",
        "grid_size",
        "max_rel_error",
        "pass",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!(v.get("monte_carlo").is_none());
    assert!(v["max_rel_error"].as_f64().unwrap() <= 1e-9);
    let only_one = run_stable(
        &[
            "duality-check",
            "--t-min",
            "1",
            "--t-max",
            "1",
            "--grid-n",
            "2",
        ],
        0,
    );
    let v: serde_json::Value = serde_json::from_str(&only_one).unwrap();
    assert_eq!(v["max_rel_error"], 0.0);
}

#[test]
fn lasso_golden() {
    let args = [
        "lasso-demo",
        "--n",
        "60",
        "--k",
        "12",
        "--sparsity",
        "3",
        "--noise-sd",
        "0.1",
        "--lambda",
        "5",
        "--seed",
        "4",
        "--log-grid",
        "1e1:1e4:4",
        "--family",
        "1e3,1e4",
    ];
    let out = run_stable(&args, 0);
    assert_eq!(out, golden("lasso.txt"));
    let split = out.find("mode,").unwrap();
    let v: serde_json::Value = serde_json::from_str(&out[..split]).unwrap();
    let lambda = v["lambda"].as_f64().unwrap();
    assert!(v["kkt_residual"].as_f64().unwrap() <= 1e-6 * (1.0 + lambda));
    assert_eq!(out[split..].lines().count(), 1 + 2 * 4 * 2);
}

#[test]
fn lasso_zero_signal() {
    let out = run_stable(
        &[
            "lasso-demo",
            "--n",
            "50",
            "--k",
            "8",
            "--sparsity",
            "0",
            "--noise-sd",
            "0",
            "--lambda",
            "1",
        ],
        0,
    );
    let split = out.find("mode,").unwrap();
    let v: serde_json::Value = serde_json::from_str(&out[..split]).unwrap();
    assert_eq!(v["l1"], 0.0);
    for line in out[split..].lines().skip(1) {
        assert_eq!(line.split(',').nth(4).unwrap(), "0");
        if line.starts_with("alpha_over_beta_to_zero:d_new") {
            assert_eq!(line.split(',').nth(3).unwrap(), "0");
        }
    }
}

#[test]
fn lasso_default_run_is_certified() {
    let out = run_stable(&["lasso-demo"], 0);
    let split = out.find("mode,").unwrap();
    let v: serde_json::Value = serde_json::from_str(&out[..split]).unwrap();
    assert_eq!((v["n"].as_u64(), v["k"].as_u64()), (Some(200), Some(50)));
    assert_eq!(v["certified"], true);
}

#[test]
fn usage_errors_exit_2() {
    let cases: [(&[&str], &str); 10] = [
        (
            &["eval", "--q", "data/empty.txt", "--p", "data/p.txt"],
            "--q",
        ),
        (&["eval", "--q", "data/bad.txt", "--p", "data/p.txt"], "--q"),
        (
            &["eval", "--q", "data/missing.txt", "--p", "data/p.txt"],
            "--q",
        ),
        (&["eval", "--q", "data/q.txt", "--p", "data/q.txt"], "--p"),
        (&["eval", "--t", "1", "--alpha", "0"], "--alpha"),
        (&["sweep", "--q", "data/empty.txt", "--grid", "1"], "--q"),
        (&["sweep", "--q", "data/q.txt", "--grid", "1,-1"], "--grid"),
        (&["duality-check", "--mp", "0"], "--mp"),
        (&["duality-check", "--grid-n", "1"], "--grid-n"),
        (&["eval", "--bogus"], "--bogus"),
    ];
    for (args, flag) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
    }
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn numeric_failures_exit_1() {
    let o = run(&["eval", "--t", "inf"]);
    assert_eq!(o.status.code(), Some(1));
    // a three-draw sample cannot pass the Monte-Carlo check; the report is still printed
    let o = run(&["duality-check", "--samples", "3", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["monte_carlo"]["pass"], false);
    // an iteration cap of one sweep leaves the solver unconverged
    let o = run(&["lasso-demo", "--max-iter", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let split = out.find("mode,").unwrap();
    let v: serde_json::Value = serde_json::from_str(&out[..split]).unwrap();
    assert_eq!(v["converged"], false);
    assert_eq!(v["iterations"], 1);
}
