use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sawphoton::stats::{mandel_q_from_moments, CountMoments};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sawphoton"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn config(n: u32, divider: u32, p_miss: f64, p_extra: f64, rate: f64, n_cycles: u64) -> String {
    format!(
        r#"{{
  "saw": {{"frequency": 3e9, "amplitude": 0.03}},
  "pump": {{"electrons_per_packet": {n}, "divider": {divider}, "p_miss": {p_miss}, "p_extra": {p_extra}}},
  "recombination": {{"radiative_rate": {rate}}},
  "detector": {{"efficiency": 0.5, "dark_rate": 1e5, "dead_time": 2e-9, "jitter": 1e-11}},
  "run": {{"n_cycles": {n_cycles}, "seed": 11}}
}}"#
    )
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const FILES: [&str; 6] = [
    "emissions.csv",
    "detections.csv",
    "counts.csv",
    "g2.csv",
    "phase.csv",
    "summary.json",
];

#[test]
fn simulate_is_byte_identical_across_runs_and_shards() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &config(1, 2, 1e-3, 1e-3, 1e10, 30_000));
    let cfg = cfg.to_str().unwrap();
    let outs: Vec<PathBuf> = ["a", "b", "c"].iter().map(|d| dir.path().join(d)).collect();
    for (out, shards) in outs.iter().zip(["1", "1", "8"]) {
        let o = run(&["simulate", "--config", cfg, "--out", out.to_str().unwrap(), "--shards", shards]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in FILES {
        let a = std::fs::read(outs[0].join(f)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, std::fs::read(outs[1].join(f)).unwrap(), "{f}");
        assert_eq!(a, std::fs::read(outs[2].join(f)).unwrap(), "{f}");
    }
    let other = dir.path().join("d");
    run(&["simulate", "--config", cfg, "--out", other.to_str().unwrap(), "--seed", "12"]);
    assert_ne!(
        std::fs::read(outs[0].join("emissions.csv")).unwrap(),
        std::fs::read(other.join("emissions.csv")).unwrap()
    );
}

#[test]
fn csv_files_reproduce_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &config(2, 1, 0.05, 0.05, 3e10, 20_000));
    let out = dir.path().join("out");
    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(out.join("summary.json")).unwrap();
    let summary: Value = serde_json::from_str(&text).unwrap();

    // Re-rendering the parsed summary gives the same bytes, so every number
    // survived its decimal form.
    assert_eq!(serde_json::to_string_pretty(&summary).unwrap() + "\n", text);

    let counts = std::fs::read_to_string(out.join("counts.csv")).unwrap();
    let mut lines = counts.lines();
    assert_eq!(lines.next(), Some("window_index,count"));
    let moments: CountMoments = lines
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .collect();
    assert_eq!(moments.n, summary["n_windows"].as_u64().unwrap());
    let q = mandel_q_from_moments(&moments).unwrap();
    assert_eq!(Some(q), summary["mandel_q"].as_f64());
    assert_eq!(Some(q + 1.0), summary["fano_factor"].as_f64());

    let g2 = std::fs::read_to_string(out.join("g2.csv")).unwrap();
    let pairs: u64 = g2.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(Some(pairs), summary["g2_total_pairs"].as_u64());

    let detections = std::fs::read_to_string(out.join("detections.csv")).unwrap();
    let rows: Vec<(f64, u8)> = detections
        .lines()
        .skip(1)
        .map(|l| {
            let (t, d) = l.split_once(',').unwrap();
            (t.parse().unwrap(), d.parse().unwrap())
        })
        .collect();
    assert_eq!(Some(rows.len() as u64), summary["totals"]["detections"].as_u64());
    let dark = rows.iter().filter(|r| r.1 == 1).count() as u64;
    assert_eq!(Some(dark), summary["totals"]["dark_detections"].as_u64());
    assert!(rows.windows(2).all(|w| w[0].0 <= w[1].0));
    assert_eq!(summary["config"]["run"]["seed"], 11);
    assert!(summary["config"]["run"].get("shards").is_none());
}

#[test]
fn ideal_source_summary_has_q_minus_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
      "saw": {"frequency": 3e9, "amplitude": 0.03},
      "pump": {"electrons_per_packet": 1, "divider": 1, "p_miss": 0, "p_extra": 0},
      "recombination": {"radiative_rate": 6e10},
      "run": {"n_cycles": 10000, "seed": 3}
    }"#;
    let cfg = write_config(dir.path(), "c.json", text);
    let out = dir.path().join("out");
    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let summary: Value = serde_json::from_slice(&std::fs::read(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["mandel_q"].as_f64(), Some(-1.0));
    assert_eq!(summary["fano_factor"].as_f64(), Some(0.0));
}

#[test]
fn config_errors_exit_two_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (config(1, 1, -0.1, 0.0, 1e10, 10), "pump.p_miss"),
        (config(1, 1, 0.0, 0.0, 1e10, 0), "run.n_cycles"),
        (config(1, 1, 0.0, 0.0, 1e10, 10).replace("\"seed\"", "\"sed\""), "sed"),
        ("{ not json".to_string(), "configuration error"),
    ];
    for (i, (text, needle)) in cases.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("{i}.json"), text);
        let o = run(&["analytic", "--config", cfg.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2));
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(needle), "{err}");
    }
    assert_eq!(run(&["analytic"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn io_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &config(1, 1, 0.0, 0.0, 1e10, 10));
    let blocker = write_config(dir.path(), "file", "x");
    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", blocker.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("file"));
}

#[test]
fn analytic_report() {
    let dir = tempfile::tempdir().unwrap();
    let one = write_config(dir.path(), "1.json", &config(1, 1, 0.0, 0.0, 1e10, 10));
    let three = write_config(dir.path(), "3.json", &config(3, 1, 0.0, 0.0, 1e10, 10));
    let a = json_stdout(&run(&["analytic", "--config", one.to_str().unwrap()]));
    let b = json_stdout(&run(&["analytic", "--config", three.to_str().unwrap()]));
    let f_max = a["max_injection_frequency"]["display"].as_f64().unwrap();
    assert!((f_max - 0.7238).abs() < 1e-4);
    let current = a["max_injection_current"]["display"].as_f64().unwrap();
    assert!((current - 115.97).abs() < 0.01);
    assert_eq!(a["max_injection_current"]["unit"], "A");
    let density = a["screening_hole_density"]["display"].as_f64().unwrap();
    assert!((density / 1.354e10 - 1.0).abs() < 1e-3);
    assert!((a["min_iregion_length"]["display"].as_f64().unwrap() - 31.83).abs() < 0.01);
    let i1 = a["quantized_current"]["si"].as_f64().unwrap();
    let i3 = b["quantized_current"]["si"].as_f64().unwrap();
    assert_eq!(i3, 3.0 * i1);
    assert_eq!(b["emitted_count_pmf"].as_array().unwrap().len(), 4);
}

#[test]
fn design_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &config(1, 1, 5e-5, 5e-5, 1e10, 10));
    let d = json_stdout(&run(&["design", "--config", cfg.to_str().unwrap()]));
    assert_eq!(d["min_divider"], 5);
    assert_eq!(d["budget"]["late_emission_pass"], false);

    let slow = config(1, 1, 0.0, 0.0, 1e10, 10).replace("3e9", "1e9");
    let cfg = write_config(dir.path(), "slow.json", &slow);
    let d = json_stdout(&run(&["design", "--config", cfg.to_str().unwrap(), "--epsilon", "0.5"]));
    assert_eq!(d["min_divider"], 1);
    assert_eq!(d["pass"], true);
    assert_eq!(d["budget"]["late_emission_pass"], true);
    let o = run(&["design", "--config", cfg.to_str().unwrap(), "--epsilon", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_csv_and_rejects_empty_grids() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &config(1, 1, 0.0, 0.0, 1e10, 10));
    let cfg = cfg.to_str().unwrap();
    let grid = write_config(dir.path(), "g.json", r#"{"divider": [1,2,3,4,5,6,7,8,9,10]}"#);
    let out = dir.path().join("out");
    let o = run(&["sweep", "--config", cfg, "--grid", grid.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[..2], ["saw_frequency", "radiative_rate"]);
    let m_col = header.iter().position(|h| *h == "divider").unwrap();
    let pass_col = header.iter().position(|h| *h == "late_emission_pass").unwrap();
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let m: u32 = f[m_col].parse().unwrap();
        assert_eq!(f[pass_col] == "1", m >= 5, "{line}");
    }

    let empty = write_config(dir.path(), "e.json", r#"{"divider": []}"#);
    let o = run(&["sweep", "--config", cfg, "--grid", empty.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "sweep", "--config", cfg, "--grid", grid.to_str().unwrap(), "--cap", "5", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let unknown = write_config(dir.path(), "u.json", r#"{"gamma": [1e10]}"#);
    let o = run(&["sweep", "--config", cfg, "--grid", unknown.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 6);
}
