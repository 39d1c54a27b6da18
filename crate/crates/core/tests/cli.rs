use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn vwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vwave"))
        .args(args)
        .output()
        .expect("spawn vwave")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn state_reports_level_two() {
    let out = vwave(&["state", "--z", "1", "--n", "2"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["energy"].as_f64(), Some(-0.125));
    assert_eq!(doc["r_o"].as_f64(), Some(8.0));
    assert_eq!(doc["k_o"].as_f64(), Some(0.5));
}

#[test]
fn json_uses_seventeen_digits_and_sorted_keys() {
    let text = stdout(&vwave(&["state", "--z", "1", "--n", "3"]));
    assert!(text.ends_with("}\n") && !text.contains('\r'));
    assert!(text.contains("\"energy\":-5.5555555555555552e-2"));
    let doc: serde_json::Map<String, serde_json::Value> = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = doc.keys().collect();
    let pos: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn bad_flags_exit_with_two() {
    for args in [
        &["state", "--z", "abc"][..],
        &["state", "--bogus"],
        &["wave", "--samples", "50"],
        &["wave", "--r-max", "1.2"],
        &["nodes", "--format", "xml"],
        &["teleport"],
    ] {
        let out = vwave(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn verify_passes_for_the_first_three_levels() {
    let out = vwave(&["verify", "--z", "1", "--n-max", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["passed"], serde_json::Value::Bool(true));
}

#[test]
fn wave_csv_has_documented_header() {
    let text = stdout(&vwave(&[
        "wave",
        "--z",
        "1",
        "--n",
        "2",
        "--samples",
        "300",
        "--format",
        "csv",
    ]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,r_over_ro,u_plus,u_minus,R"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(rows.len() >= 300);
    for row in &rows {
        assert_eq!(row.len(), 5);
        assert!((row[4] * row[0] - row[3]).abs() <= 1e-14 * row[3].abs().max(1e-300));
        assert!((row[1] - row[0] / 8.0).abs() <= 1e-15 * row[1]);
    }
}

#[test]
fn nodes_csv_summary_lists_each_node() {
    let text = stdout(&vwave(&["nodes", "--z", "1", "--n", "3", "--format", "csv"]));
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].contains("kind"));
    assert_eq!(lines.len(), 4);
    assert_eq!(lines.iter().filter(|l| l.contains("trajectory_surface")).count(), 1);
    assert_eq!(lines.iter().filter(|l| l.contains("plain_zero")).count(), 2);
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["wave", "--z", "2", "--n", "3", "--format", "csv"][..],
        &["nodes", "--z", "1", "--n", "2"],
        &["superpose", "--z", "1", "--time-steps", "5"],
    ] {
        let a = vwave(args);
        let b = vwave(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# level three of lithium\nz = 3\nn=3\nformat=json\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file: serde_json::Value = serde_json::from_str(&stdout(&vwave(&["state", "--config", cfg]))).unwrap();
    assert_eq!(from_file["energy"].as_f64(), Some(-0.5));

    let overridden: serde_json::Value =
        serde_json::from_str(&stdout(&vwave(&["state", "--config", cfg, "--n", "1"]))).unwrap();
    assert_eq!(overridden["energy"].as_f64(), Some(-4.5));

    fs::write(dir.path().join("bad.cfg"), "speed = 3\n").unwrap();
    let out = vwave(&["state", "--config", dir.path().join("bad.cfg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    let out = vwave(&["state", "--z", "1", "--n", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(fs::read_to_string(&path)
        .unwrap()
        .contains("\"r_o\":2.0000000000000000e0"));
}

fn figure_rows(dir: &Path, n: u32) -> Vec<(f64, f64)> {
    let text = fs::read_to_string(dir.join(format!("figure_n{n}.csv"))).unwrap();
    assert!(text.starts_with("r_over_ro,R_normalized\n"));
    text.lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

#[test]
fn figures_write_three_normalized_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = vwave(&["figures", "--z", "1", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    for n in 1..=3 {
        let rows = figure_rows(dir.path(), n);
        let peak = rows.iter().fold(0.0_f64, |m, r| m.max(r.1.abs()));
        assert!((peak - 1.0).abs() < 1e-15);
        let changes: Vec<f64> = rows
            .windows(2)
            .filter(|w| w[0].1 * w[1].1 < 0.0)
            .map(|w| 0.5 * (w[0].0 + w[1].0))
            .collect();
        assert_eq!(changes.len(), n as usize);
        assert!((changes[changes.len() - 1] - 1.0).abs() <= 1e-6);
    }

    let raw = tempfile::tempdir().unwrap();
    vwave(&["figures", "--normalize", "off", "--out", raw.path().to_str().unwrap()]);
    let peak = figure_rows(raw.path(), 1).iter().fold(0.0_f64, |m, r| m.max(r.1.abs()));
    assert!(peak > 0.0 && (peak - 1.0).abs() > 1e-3);
}
