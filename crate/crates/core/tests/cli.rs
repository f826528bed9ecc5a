use std::path::Path;
use std::process::{Command, Output};

use quad_core::report::{read_rows, render_summary, ROWS_HEADER};
use quad_core::summarize;

fn quad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quad"))
        .args(args)
        .env("QUAD_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn default_study_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("study");
    let out = quad(&["study", "--out", out_dir.to_str().unwrap()]);
    assert!(matches!(out.status.code(), Some(0) | Some(3)), "{}", stderr(&out));

    let csv = std::fs::read_to_string(out_dir.join("rows.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(ROWS_HEADER));
    assert_eq!(lines.count(), 2 * 13 * 4 * 4);
    let failed = csv.lines().any(|l| l.ends_with(",solve-failed"));
    assert_eq!(out.status.code(), Some(if failed { 3 } else { 0 }));

    for design in ["uniform", "nonuniform"] {
        for r in 1..=4 {
            let p = out_dir.join("plotdata").join(format!("{design}_r{r}.csv"));
            assert!(p.exists(), "{}", p.display());
        }
    }

    let summary = std::fs::read_to_string(out_dir.join("summary.md")).unwrap();
    let rows = read_rows(&out_dir.join("rows.csv")).unwrap();
    assert_eq!(render_summary(&summarize(&rows)), summary);
}

#[test]
fn small_study_without_failures_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("study.cfg");
    std::fs::write(&cfg, "# small sweep\nn_grid = 16, 32, 64\ndesigns = uniform\n").unwrap();
    let out = quad(&[
        "study",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("o").to_str().unwrap(),
        "--set",
        "orders_r=1,2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("o/rows.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 2 * 4);
}

#[test]
fn config_errors_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "n_grid = 16\nbogus = 1\n").unwrap();
    let out = quad(&["study", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let out = quad(&["study", "--set", "n_grid=", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let target = blocker.join("sub");
    let out = quad(&["study", "--set", "n_grid=16,32,64", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains(&*Path::new(&target).display().to_string()));
}

#[test]
fn weights_for_two_uniform_points_are_symmetric() {
    let out = quad(&["weights", "--n", "2", "--r", "1", "--design", "uniform"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let weights: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && l.contains(", "))
        .map(|l| l.rsplit(", ").next().unwrap())
        .collect();
    assert_eq!(weights.len(), 2);
    assert_eq!(weights[0], weights[1]);
    assert!(text.contains("sum |w_i|"));
    assert!(text.contains("condition proxy"));
}

#[test]
fn weights_print_nonnegative_check() {
    let out = quad(&["weights", "--n", "5", "--r", "1", "--design", "nonuniform"]);
    assert!(stdout(&out).contains("(nonnegative: true)"));
}

#[test]
fn weights_solve_failure_reports_pivot() {
    let out = quad(&["weights", "--n", "16", "--r", "2", "--design", "uniform", "--jitter=-20"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("pivot 1"), "{}", stderr(&out));
}

#[test]
fn unsupported_order_is_usage_error() {
    let out = quad(&["weights", "--n", "5", "--r", "7", "--design", "uniform"]);
    assert_eq!(out.status.code(), Some(2));
    let out = quad(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wce_and_geometry_commands() {
    let out = quad(&["wce", "--n", "32", "--r", "4", "--s", "1", "--design", "uniform"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("wce = "));

    let out = quad(&["geometry", "--n", "5", "--design", "nonuniform"]);
    let text = stdout(&out);
    assert!(text.contains("fill distance h = 2.18750000000e-1"), "{text}");
    assert!(text.contains("separation radius q = 3.12500000000e-2"), "{text}");
}

fn rate_line(text: &str, name: &str) -> String {
    text.lines().find(|l| l.starts_with(name)).unwrap().rsplit("= ").next().unwrap().to_string()
}

#[test]
fn rates_examples() {
    let out = quad(&["rates", "--r", "4", "--s", "1", "--alpha", "1", "--delta", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(rate_line(&stdout(&out), "bq_misspecified"), "1.000000");

    let out = quad(&["rates", "--r", "2", "--s", "2", "--alpha", "0.5"]);
    assert_eq!(rate_line(&stdout(&out), "bq_wellspecified"), "1.000000");
    let text = stdout(&out);
    for name in ["weight_bound", "sep_bound", "bq_misspecified", "bq_wellspecified"] {
        assert!(text.contains(name));
    }
}

#[test]
fn rates_guarantee_void() {
    let out = quad(&["rates", "--r", "4", "--s", "1", "--delta", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("1 - s/r"), "{}", stderr(&out));
}
