use std::fs;
use std::process::{Command, Output};

fn hazsel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hazsel")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = hazsel(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = hazsel(args);
    assert!(!out.status.success(), "{args:?} should fail");
    assert!(out.stdout.is_empty());
    String::from_utf8(out.stderr).unwrap()
}

#[test]
fn risk_table_header_and_shape() {
    let s = stdout(&["risk-table", "--reps", "200"]);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(
        lines[0],
        "scale_1,scale_2,R_N1,SE_N1,R_N2,SE_N2,R_N2I,SE_N2I,R_ML,SE_ML,R_MLI,SE_MLI"
    );
    assert_eq!(lines.len(), 26);
    assert!(lines[1].starts_with("0.3,0.2,"));
    assert!(!s.contains('\r'));
    let r_n2: &str = lines[1].split(',').nth(4).unwrap();
    assert_eq!(r_n2.split('.').nth(1).unwrap().len(), 6);
}

#[test]
fn risk_table_k3_header() {
    let s = stdout(&["risk-table", "--reps", "50", "--scales", "1,2,3", "--estimators", "N2,imp:4:0.01:3"]);
    assert_eq!(s.lines().next().unwrap(), "scale_1,scale_2,scale_3,R_N2,SE_N2,R_imp:4:0.01:3,SE_imp:4:0.01:3");
}

#[test]
fn repeated_runs_are_identical() {
    let a = stdout(&["risk-table", "--reps", "300", "--seed", "7", "--workers", "1"]);
    let b = stdout(&["risk-table", "--reps", "300", "--seed", "7", "--workers", "5"]);
    assert_eq!(a, b);
    let c = stdout(&["risk-table", "--reps", "300", "--seed", "8"]);
    assert_ne!(a, c);
}

#[test]
fn bounds_n5_and_n2() {
    let s = stdout(&["bounds"]);
    assert!(s.starts_with("quantity,c,h,value\nc_lower,,,4\nc_upper,,,5.505376344086"));
    assert!(s.contains("minimax_value,,,0.119823\n"));
    assert!(s.contains("sup_risk_bound,3,,0.157505\n"));
    assert!(s.contains("alpha_bound,4,2,0.2727272727272727\n"));
    assert!(s.contains("alpha_bound,5,2,0.09090909090909091\n"));
    let s = stdout(&["bounds", "--n", "2"]);
    assert!(s.contains("c_lower,,,1\n"));
    assert!(s.contains("c_upper,,,2"));
    assert!(!s.contains("sup_risk_bound,0"));
}

#[test]
fn bounds_json() {
    let s = stdout(&["bounds", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["meta"]["command"], "bounds");
    assert_eq!(v["rows"][0]["quantity"], "c_lower");
    assert_eq!(v["rows"][0]["value"], 4.0);
}

#[test]
fn exact_at_equal_scales() {
    let s = stdout(&["exact", "--c", "4", "--reps", "1000"]);
    let row: Vec<&str> = s.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..3], ["1", "1", "1"]);
    let h: f64 = row[3].parse().unwrap();
    assert!((h - 93.0 / 512.0).abs() < 1e-12);
    let s = stdout(&["exact", "--c", "4", "--reps", "10", "--scales", "1,2", "--scales", "2,4"]);
    let rows: Vec<Vec<&str>> = s.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0][2..5], rows[1][2..5]);
}

#[test]
fn dominance_summary_and_rows() {
    let out = hazsel(&["dominance", "N1", "N2", "--reps", "2000", "--scales", "0.3,0.2", "--scales", "1,1"]);
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert_eq!(s.lines().next().unwrap(), "scale_1,scale_2,mean_diff,se_diff,z,verdict");
    assert!(s.lines().skip(1).all(|l| l.ends_with(",N2 dominates")));
    assert!(String::from_utf8_lossy(&out.stderr).contains("N2 dominates N1"));
    let s = stdout(&["dominance", "N2", "N2", "--reps", "500", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["mean_diff"] == 0.0 && r["verdict"] == "identical"));
    assert!(v["meta"]["summary"].as_str().unwrap().contains("identical"));
}

#[test]
fn plot_data_sorted_long_format() {
    let s = stdout(&["plot-data", "--reps", "100", "--estimators", "N2,ML"]);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "ratio,estimator,risk,std_error");
    assert_eq!(lines.len(), 51);
    let keys: Vec<(String, f64)> = lines[1..]
        .iter()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1].to_string(), f[0].parse().unwrap())
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    assert_eq!(keys, sorted);
    assert_eq!(keys[0].0, "ML");
    let one = stdout(&["plot-data", "--reps", "100", "--estimators", "N2", "--scales", "0.5,1"]);
    assert_eq!(one.lines().count(), 2);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.cfg");
    fs::write(&path, "# tiny run\nreps = 100\nseed = 5\nestimators = N2\nscales = 1,1\n").unwrap();
    let p = path.to_str().unwrap();
    let from_file = stdout(&["risk-table", "--config", p]);
    let from_flags = stdout(&["risk-table", "--reps", "100", "--seed", "5", "--estimators", "N2", "--scales", "1,1"]);
    assert_eq!(from_file, from_flags);
    let overridden = stdout(&["risk-table", "--config", p, "--seed", "6"]);
    assert_ne!(from_file, overridden);
    let out = dir.path().join("table.csv");
    stdout(&["risk-table", "--config", p, "--out", out.to_str().unwrap()]);
    assert_eq!(fs::read_to_string(out).unwrap(), from_file);
}

#[test]
fn errors_exit_nonzero_with_diagnostics() {
    assert!(fails(&["bounds", "--n", "1"]).contains("n"));
    assert!(fails(&["risk-table", "--scales", "0,1"]).contains("scales"));
    assert!(fails(&["risk-table", "--reps", "0"]).contains("reps"));
    assert!(fails(&["exact", "--c", "0"]).contains("c"));
    assert!(fails(&["exact", "--c", "-1"]).contains("c"));
    assert!(fails(&["dominance", "N2", "Nope"]).contains("Nope"));
    assert!(fails(&["plot-data", "--scales", "1,1,1"]).contains("k = 2"));
    assert!(fails(&["risk-table", "--format", "xml"]).contains("xml"));
    assert!(fails(&["risk-table", "--config", "/nonexistent/x.cfg"]).contains("io"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    fs::write(&path, "n = 5\nscales =\n").unwrap();
    assert!(fails(&["risk-table", "--config", path.to_str().unwrap()]).contains("scales"));
    fs::write(&path, "n = 5\nwhat = 1\n").unwrap();
    assert!(fails(&["risk-table", "--config", path.to_str().unwrap()]).contains(":2:"));
}
