use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mz")).args(args).output().expect("binary runs")
}

fn mz_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mz")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

/// Keys of every object in `v` appear in sorted order in the serialized text.
fn keys_sorted(v: &Value) -> bool {
    match v {
        Value::Object(map) => {
            let keys: Vec<&String> = map.keys().collect();
            keys.windows(2).all(|w| w[0] <= w[1]) && map.values().all(keys_sorted)
        }
        Value::Array(items) => items.iter().all(keys_sorted),
        _ => true,
    }
}

fn first_key_order(text: &str) -> Vec<String> {
    text.lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap().to_string())
        .collect()
}

#[test]
fn gamma0_prints_four_digits() {
    let o = mz(&["gamma0", "--alpha", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "1.5088\n");
}

#[test]
fn gamma0_square_alpha() {
    let alpha = (1.0 + 2f64.sqrt()).to_string();
    let o = mz(&["gamma0", "--alpha", &alpha]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "3.3541\n");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&mz(&["gamma0", "--nope"])), 2);
    assert_eq!(code(&mz(&["no-such-command"])), 2);
    assert_eq!(code(&mz(&["gamma0", "--alpha", "0.5"])), 2);
    assert_eq!(code(&mz(&["rate-experiment", "--n", "40:20:4"])), 2);
    assert_eq!(code(&mz(&["net-thin", "--in", "/nonexistent/points.csv", "--delta", "1"])), 2);
    assert_eq!(code(&mz(&["--help"])), 0);
}

#[test]
fn json_artifact_has_schema_and_sorted_keys() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let o = mz(&[
        "constants", "--delta", "0.05", "--delta1", "0.04", "--sigma", "1", "--m", "2", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&out).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["subcommand"], "constants");
    assert!(keys_sorted(&v));
    let top = first_key_order(&text);
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    assert!(v["result"]["c1"].as_f64().unwrap() > 0.0);
    assert_eq!(v["result"]["d"], 2);
}

#[test]
fn net_thin_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pts.csv");
    let mut csv = String::new();
    for i in 0..30 {
        for j in 0..30 {
            csv.push_str(&format!("{},{}\n", i as f64 * 0.1, j as f64 * 0.1));
        }
    }
    fs::write(&input, csv).unwrap();
    let out = dir.path().join("thin.csv");
    let o = mz(&["net-thin", "--in", input.to_str().unwrap(), "--delta", "0.35", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let thin = mz_core::io::read_points_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(thin.len() > 1 && thin.len() < 900);
    assert!(mz_core::nets::min_pairwise_separation(&thin).unwrap() >= 0.35);

    let side = read_json(&dir.path().join("thin.csv.json"));
    assert_eq!(side["schema_version"], 1);
    assert_eq!(side["result"]["output_points"], thin.len());
    assert_eq!(side["result"]["covers_input"], true);

    // The thinned set covers the grid's window at radius δ.
    let o = mz(&[
        "net-check", "--in", out.to_str().unwrap(), "--delta", "0.36", "--window-center", "1.45,1.45",
        "--window-half", "1.45", "--expect-covered",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn net_check_uncovered_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pts.csv");
    fs::write(&input, "0,0\n1,0\n0,1\n1,1\n").unwrap();
    let o = mz(&["net-check", "--in", input.to_str().unwrap(), "--delta", "0.2", "--expect-covered"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["coverage"]["state"], "uncovered");
}

#[test]
fn malformed_csv_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    fs::write(&input, "0,0\n1,x\n").unwrap();
    assert_eq!(code(&mz(&["net-check", "--in", input.to_str().unwrap(), "--delta", "1"])), 2);
}

#[test]
fn rate_experiment_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let o = mz_in(dir.path(), &["rate-experiment", "--sigma", "1", "--tau", "2", "--n", "20:40:4", "--out", "rate.csv"]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("rate.csv")).unwrap();
    assert!(!csv.contains('\r'));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,b,error,rate,relative_error,relative_rate,predicted_rate");
    assert_eq!(lines.len(), 7);
    let last: Vec<f64> = lines[6].split(',').map(|t| t.parse().unwrap()).collect();
    assert_eq!(last[0], 40.0);
    assert_eq!(last[1], 20.0);
    assert!((last[6] - 0.722_12).abs() < 1e-4);
    // rates climb toward the prediction from below
    let rates: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert!(rates.windows(2).all(|w| w[0] < w[1]));
    assert!(rates.iter().all(|&r| r < last[6]));

    let side = read_json(&dir.path().join("rate.csv.json"));
    assert_eq!(side["schema_version"], 1);
    assert_eq!(side["params"]["n"].as_array().unwrap().len(), 6);
}

#[test]
fn recorded_command_reproduces_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["cube-mz", "--n", "1:3:1", "--c", "2,4", "--trials", "20", "--seed", "7", "--out", "a.json"];
    assert_eq!(code(&mz_in(dir.path(), &args)), 0);
    let first = fs::read(dir.path().join("a.json")).unwrap();
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["seed"], 7);
    let recorded: Vec<String> =
        v["command"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect();
    let recorded: Vec<&str> = recorded.iter().map(String::as_str).collect();
    assert_eq!(recorded, args);
    fs::remove_file(dir.path().join("a.json")).unwrap();
    assert_eq!(code(&mz_in(dir.path(), &recorded)), 0);
    assert_eq!(fs::read(dir.path().join("a.json")).unwrap(), first);
}

#[test]
fn perturbation_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "mz-verify", "--check", "perturbation", "--model", "sinc-power", "--gamma", "2", "--spacing", "1",
        "--window-half", "10", "--seeds", "5", "--seed", "3", "--out", "p.json",
    ];
    assert_eq!(code(&mz_in(dir.path(), &args)), 0);
    let first = fs::read(dir.path().join("p.json")).unwrap();
    assert_eq!(code(&mz_in(dir.path(), &args)), 0);
    assert_eq!(fs::read(dir.path().join("p.json")).unwrap(), first);
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["result"]["passed"], true);
}

#[test]
fn sup_and_upper_checks_pass_on_lattices() {
    let o = mz(&[
        "mz-verify", "--check", "sup", "--model", "sinc-power", "--spacing", "0.05", "--delta", "0.05",
        "--window-half", "6",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = mz(&["mz-verify", "--check", "upper", "--model", "sinc-power", "--gamma", "2", "--spacing", "0.5", "--window-half", "30"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v["result"]["result"]["report"];
    assert!(r["measured_ratio_upper"].as_f64().unwrap() <= r["theoretical_c1"].as_f64().unwrap());
}

#[test]
fn cube_mz_zero_slack_exits_1() {
    // Random exponential polynomials almost never peak exactly on a knot.
    let o = mz(&["cube-mz", "--n", "6", "--c", "2", "--trials", "50", "--gamma", "0"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["all_within_slack"], false);
}

#[test]
fn witness_on_punched_lattice() {
    let o = mz(&["witness", "--delta", "3", "--sigma", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["found"], true);
    assert!(v["result"]["witness"]["net_sup"].as_f64().unwrap() <= 1.0 / 3.0);
    // δ below 1/(C3 σ) is outside the hypothesis.
    assert_eq!(code(&mz(&["witness", "--delta", "1", "--sigma", "1"])), 2);
}

#[test]
fn cheb_fit_check_within_bound() {
    let o = mz(&["cheb-fit", "--sigma", "1", "--b", "2", "--n", "12", "--check"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v["result"];
    assert!(r["sup_error"].as_f64().unwrap() <= r["error_bound"].as_f64().unwrap());
}

#[test]
fn partition_bins_disjoint() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pts.csv");
    let csv: String = (0..50).map(|i| format!("{}\n", i as f64 * 0.3)).collect();
    fs::write(&input, csv).unwrap();
    let o = mz(&["net-partition", "--in", input.to_str().unwrap(), "--h", "0.5"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["pairwise_disjoint"], true);
    let total: usize = v["result"]["bins"].as_array().unwrap().iter().map(|b| b.as_array().unwrap().len()).sum();
    assert_eq!(total, 50);
}
