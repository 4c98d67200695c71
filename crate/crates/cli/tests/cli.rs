use std::path::Path;
use std::process::{Command, Output};

fn rindler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rindler"))
        .args(args)
        .env("RINDLER_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn figure_2_bell_corner() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2.csv");
    let out = rindler(&["figure", "2", "--r-points", "5", "--p-points", "5", "--output", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["r", "p", "negativity"]);
    let corner = rows.iter().find(|r| r[0] == 0.0 && r[1] == 1.0).unwrap();
    assert_eq!(corner[2], 1.0);
}

#[test]
fn figure_5_bell_row_has_unit_discord_both_ways() {
    let out = rindler(&["figure", "5", "--r-points", "3", "--no-metadata"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    let col = |name: &str| first[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("r"), 0.0);
    assert!((col("discord_A_I") - 1.0).abs() < 1e-12);
    assert!((col("discord_I_A") - 1.0).abs() < 1e-12);
}

#[test]
fn figure_7_peaks_near_080_at_infinite_acceleration() {
    let out = rindler(&["figure", "7", "--r-points", "2", "--p-points", "101", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["metadata"]["dataset"], "figure7");
    let rows = doc["rows"].as_array().unwrap();
    let last_r = rows.last().unwrap()["r"].as_f64().unwrap();
    let best = rows
        .iter()
        .filter(|row| row["r"].as_f64().unwrap() == last_r)
        .max_by(|a, b| {
            a["negativity_gap"]
                .as_f64()
                .unwrap()
                .total_cmp(&b["negativity_gap"].as_f64().unwrap())
        })
        .unwrap();
    assert!((best["beta"].as_f64().unwrap() - 0.80).abs() <= 0.01);
}

#[test]
fn threshold_values() {
    let out = rindler(&["threshold", "--family", "AI", "--r", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let value: f64 = text.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((value - 1.0 / 3.0).abs() < 1e-9);

    let out = rindler(&["threshold", "--family", "AII", "--r", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().nth(1).unwrap().ends_with(",none"));

    let out = rindler(&["threshold", "--p", "0.4", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let r = doc["r_star"].as_f64().unwrap();
    assert!(r > 0.0 && r < std::f64::consts::FRAC_PI_4);
}

#[test]
fn convert_matches_closed_form() {
    let out = rindler(&["convert", "--acceleration", "1", "--omega", "1"]);
    assert!(out.status.success());
    let r: f64 = stdout(&out).trim().parse().unwrap();
    let expected = (1.0 / (1.0 + (-2.0 * std::f64::consts::PI).exp()).sqrt()).acos();
    assert!((r - expected).abs() < 1e-11);
}

#[test]
fn no_metadata_outputs_are_byte_identical() {
    let args = ["sweep", "--family", "AII", "--measures", "discord,eof", "--r-points", "7", "--p-points", "7", "--no-metadata"];
    let a = rindler(&args);
    let b = rindler(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains('#'));
    let with_meta = stdout(&rindler(&args[..args.len() - 1]));
    assert!(with_meta.starts_with("# {"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["figure", "8"],
        vec!["figure", "0"],
        vec!["sweep", "--family", "XY"],
        vec!["sweep", "--family", "AI", "--measures", "entropy"],
        vec!["threshold", "--family", "III", "--r", "0"],
        vec!["threshold", "--r", "2.0"],
        vec!["convert", "--acceleration", "-1", "--omega", "1"],
        vec!["figure"],
        vec!["bogus"],
    ] {
        let out = rindler(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_rindler"))
        .args(["convert", "--acceleration", "1", "--omega", "1"])
        .env("RINDLER_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_lists_figure_mapping() {
    let out = rindler(&["figure", "--help"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("7  negativity gap"));
}

#[test]
fn verify_exit_code_matches_report() {
    let out = rindler(&["verify", "--format", "json"]);
    let claims: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let claims = claims.as_array().unwrap();
    assert!(claims.len() >= 14);
    let all_pass = claims.iter().all(|c| c["pass"].as_bool().unwrap());
    assert_eq!(out.status.code(), Some(if all_pass { 0 } else { 1 }));
}
