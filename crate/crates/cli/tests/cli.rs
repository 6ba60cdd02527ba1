use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const STABLE_PARAMS: &str =
    r#"{"r_x": 0.5, "r_y": 0.475, "k_x": 0.95, "k_y": 1.0, "a_yx": -0.1, "a_xy": 0.0}"#;
const UNCOUPLED_PARAMS: &str =
    r#"{"r_x": 3.0, "r_y": 2.85, "k_x": 0.95, "k_y": 1.0, "a_yx": 0.0, "a_xy": 0.0}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn config(&self, name: &str, body: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, body).unwrap();
        path
    }

    fn out(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn chainlab(command: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainlab"))
        .arg(command)
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .expect("spawn chainlab")
}

fn ok(command: &str, config: &Path, out: &Path) {
    let o = chainlab(command, config, out, &[]);
    assert!(
        o.status.success(),
        "{command} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
}

fn read(out: &Path, file: &str) -> String {
    fs::read_to_string(out.join(file)).unwrap()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().skip(1).collect()
}

#[test]
fn simulate_is_byte_identical_across_runs() {
    let ws = Workspace::new();
    let cfg = ws.config("c.json", "{}");
    ok("simulate", &cfg, &ws.out("a"));
    ok("simulate", &cfg, &ws.out("b"));
    assert_eq!(
        read(&ws.out("a"), "trajectory.csv"),
        read(&ws.out("b"), "trajectory.csv")
    );
}

#[test]
fn fixed_point_initial_state_gives_constant_rows() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "c.json",
        &format!(
            r#"{{"params": {STABLE_PARAMS}, "initial": {{"x": 1.05, "y": 1.0}}, "steps": 50}}"#
        ),
    );
    ok("simulate", &cfg, &ws.out("o"));
    let csv = read(&ws.out("o"), "trajectory.csv");
    for (n, row) in data_rows(&csv).iter().enumerate() {
        assert_eq!(*row, format!("{n},1.05,1"));
    }
}

#[test]
fn chaotic_run_of_2000_steps_has_2001_rows() {
    let ws = Workspace::new();
    let cfg = ws.config("c.json", r#"{"steps": 2000}"#);
    ok("simulate", &cfg, &ws.out("o"));
    let csv = read(&ws.out("o"), "trajectory.csv");
    assert_eq!(csv.lines().next(), Some("n,x,y"));
    assert_eq!(data_rows(&csv).len(), 2001);
    assert!(csv.ends_with('\n') && !csv.contains('\r'));
}

#[test]
fn continuous_models_write_trajectories() {
    let ws = Workspace::new();
    for (name, body) in [
        ("ode", r#"{"model": "ode", "t_end": 1.0, "dt": 0.01}"#),
        (
            "lv",
            r#"{"model": "lotka_volterra", "t_end": 1.0, "dt": 0.01}"#,
        ),
    ] {
        let cfg = ws.config(&format!("{name}.json"), body);
        ok("simulate", &cfg, &ws.out(name));
        assert_eq!(data_rows(&read(&ws.out(name), "trajectory.csv")).len(), 101);
    }
}

#[test]
fn default_bifurcate_emits_both_chains() {
    let ws = Workspace::new();
    let cfg = ws.config("c.json", "{}");
    ok("bifurcate", &cfg, &ws.out("o"));
    let csv = read(&ws.out("o"), "bifurcation.csv");
    assert_eq!(csv.lines().next(), Some("r,chain,value"));
    let rows = data_rows(&csv);
    assert!(rows.first().unwrap().starts_with("1.5,"));
    assert!(rows.iter().any(|r| r.contains(",x,")) && rows.iter().any(|r| r.contains(",y,")));
}

#[test]
fn default_sweep_echo_lists_the_documented_parameter_rule() {
    let ws = Workspace::new();
    let cfg = ws.config("c.json", "{}");
    ok("bifurcate", &cfg, &ws.out("o"));
    let echo: Value = serde_json::from_str(&read(&ws.out("o"), "config.json")).unwrap();
    let sweep = &echo["sweep"];
    assert_eq!(sweep["r_min"], 1.5);
    assert_eq!(sweep["r_max"], 3.0);
    assert_eq!(sweep["n_r"], 1500);
    assert_eq!(sweep["epsilon"], 1e-4);
    let rule = &sweep["param_rule"];
    assert_eq!(rule["r_x_scale"], 1.0);
    assert_eq!(rule["r_y_scale"], 0.95);
    assert_eq!(rule["k_x"], 0.95);
    assert_eq!(rule["k_y"], 1.0);
    assert_eq!(rule["a_yx"], -0.1);
    assert_eq!(rule["a_xy"], 0.0);
}

#[test]
fn empty_schedule_matches_simulate() {
    let ws = Workspace::new();
    let cfg = ws.config("c.json", r#"{"steps": 500}"#);
    ok("simulate", &cfg, &ws.out("s"));
    ok("perturb", &cfg, &ws.out("p"));
    assert_eq!(
        read(&ws.out("s"), "trajectory.csv"),
        read(&ws.out("p"), "trajectory.csv")
    );
    assert_eq!(read(&ws.out("p"), "events.csv"), "iteration,target,value\n");
}

#[test]
fn perturb_is_seed_reproducible_and_logs_every_event() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "c.json",
        r#"{"steps": 3000, "perturbations": [
            {"target": "r_x", "rate": 0.01, "low": 2.5, "high": 3.0},
            {"target": "k_y", "rate": 0.005, "low": 0.9, "high": 1.1}
        ]}"#,
    );
    ok("perturb", &cfg, &ws.out("a"));
    ok("perturb", &cfg, &ws.out("b"));
    assert_eq!(
        read(&ws.out("a"), "events.csv"),
        read(&ws.out("b"), "events.csv")
    );
    assert_eq!(
        read(&ws.out("a"), "trajectory.csv"),
        read(&ws.out("b"), "trajectory.csv")
    );

    let o = chainlab("perturb", &cfg, &ws.out("a"), &[]);
    let stderr = String::from_utf8_lossy(&o.stderr);
    let reported: usize = stderr
        .lines()
        .find_map(|l| l.strip_suffix(" shock events applied"))
        .expect("event count line")
        .parse()
        .unwrap();
    let events = read(&ws.out("a"), "events.csv");
    let rows = data_rows(&events);
    assert_eq!(rows.len(), reported);
    assert!(reported > 10);
    assert!(rows
        .iter()
        .all(|r| r.contains(",r_x,") || r.contains(",k_y,")));

    ok("perturb", &cfg, &ws.out("c"));
    let o = chainlab("perturb", &cfg, &ws.out("d"), &["--seed", "99"]);
    assert!(o.status.success());
    assert_ne!(
        read(&ws.out("c"), "events.csv"),
        read(&ws.out("d"), "events.csv")
    );
}

#[test]
fn events_file_is_replayed() {
    let ws = Workspace::new();
    let events = ws.config(
        "events.csv",
        "iteration,target,value\n5,r_x,0.5\n5,r_y,0.475\n",
    );
    let cfg = ws.config(
        "c.json",
        &format!(
            r#"{{"steps": 3000, "events_file": {}}}"#,
            serde_json::to_string(&events).unwrap()
        ),
    );
    ok("perturb", &cfg, &ws.out("o"));
    assert_eq!(data_rows(&read(&ws.out("o"), "events.csv")).len(), 2);
    let csv = read(&ws.out("o"), "trajectory.csv");
    assert_eq!(*data_rows(&csv).last().unwrap(), "3000,1.05,1");
}

#[test]
fn detect_recovers_the_driven_direction() {
    let ws = Workspace::new();
    let cfg = ws.config("c.json", "{}");
    ok("detect", &cfg, &ws.out("o"));
    let report: Value = serde_json::from_str(&read(&ws.out("o"), "report.json")).unwrap();
    for key in [
        "xcorr",
        "granger",
        "ccm",
        "interventional",
        "verdict",
        "config",
    ] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    let verdict = &report["verdict"];
    assert_eq!(verdict["ccm"], "y->x");
    assert_eq!(verdict["interventional"], "y->x");
    assert_eq!(verdict["overall"], "y->x");
    assert_eq!(report["config"]["detect"]["thresholds"]["shift"], 0.05);
}

#[test]
fn detect_on_uncoupled_chains_finds_no_direction() {
    let ws = Workspace::new();
    let cfg = ws.config("c.json", &format!(r#"{{"params": {UNCOUPLED_PARAMS}}}"#));
    ok("detect", &cfg, &ws.out("o"));
    let report: Value = serde_json::from_str(&read(&ws.out("o"), "report.json")).unwrap();
    assert_eq!(report["verdict"]["overall"], "none");
    assert_eq!(report["verdict"]["interventional"], "none");
}

#[test]
fn malformed_configs_exit_2() {
    let ws = Workspace::new();
    for (i, body) in [
        "{not json",
        r#"{"unknown_key": 1}"#,
        r#"{"steps": 0}"#,
        r#"{"params": {"r_x": -1, "r_y": 1, "k_x": 1, "k_y": 1, "a_yx": 0, "a_xy": 0}}"#,
        r#"{"perturbations": [{"target": "r_x", "rate": 0.1, "low": 1.0}]}"#,
    ]
    .into_iter()
    .enumerate()
    {
        let cfg = ws.config(&format!("bad{i}.json"), body);
        let o = chainlab("detect", &cfg, &ws.out("o"), &[]);
        assert_eq!(o.status.code(), Some(2), "{body}");
    }
    let o = chainlab("simulate", &ws.out("missing.json"), &ws.out("o"), &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_map_models_are_rejected_by_map_only_commands() {
    let ws = Workspace::new();
    let cfg = ws.config("c.json", r#"{"model": "ode"}"#);
    for command in ["perturb", "detect", "intervene"] {
        assert_eq!(
            chainlab(command, &cfg, &ws.out("o"), &[]).status.code(),
            Some(2)
        );
    }
}

#[test]
fn clamping_the_upstream_free_chain_leaves_y_unshifted() {
    let ws = Workspace::new();
    let cfg = ws.config("c.json", r#"{"intervene": {"chain": "x"}}"#);
    ok("intervene", &cfg, &ws.out("o"));
    let shift: Value = serde_json::from_str(&read(&ws.out("o"), "shift.json")).unwrap();
    assert_eq!(shift["shift"], 0.0);
    assert_eq!(shift["causal_influence"], false);
}

#[test]
fn clamping_y_at_capacity_drives_x_to_its_fixed_point() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "c.json",
        &format!(r#"{{"params": {STABLE_PARAMS}, "intervene": {{"chain": "y", "value": 1.0}}}}"#),
    );
    ok("intervene", &cfg, &ws.out("o"));
    let csv = read(&ws.out("o"), "trajectory.csv");
    let last = data_rows(&csv).last().unwrap().to_string();
    let fields: Vec<f64> = last.split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields[0], 10_000.0);
    assert!((fields[1] - 1.05).abs() <= 1e-6);
    assert_eq!(fields[2], 1.0);
}

#[test]
fn divergent_clamp_exits_3_with_iteration() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "c.json",
        r#"{"intervene": {"chain": "y", "value": 10000.0}}"#,
    );
    let o = chainlab("intervene", &cfg, &ws.out("o"), &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("iteration 1"));
}

#[test]
fn normalized_echo_reproduces_outputs() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "c.json",
        r#"{"steps": 2000, "seed": 5, "perturbations": [{"target": "r_x", "rate": 0.02, "low": 2.8, "high": 3.0}]}"#,
    );
    for command in ["simulate", "perturb", "detect", "intervene"] {
        let first = ws.out(&format!("{command}-1"));
        let second = ws.out(&format!("{command}-2"));
        ok(command, &cfg, &first);
        let echo = ws.config(
            &format!("{command}-echo.json"),
            &read(&first, "config.json"),
        );
        ok(command, &echo, &second);
        let mut names: Vec<_> = fs::read_dir(&first)
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        for name in names {
            let name = name.to_string_lossy();
            if name == "config.json" {
                continue;
            }
            assert_eq!(
                read(&first, &name),
                read(&second, &name),
                "{command}: {name}"
            );
        }
    }
}

#[test]
fn thread_count_does_not_change_outputs() {
    let ws = Workspace::new();
    let cfg = ws.config("c.json", r#"{"sweep": {"n_r": 200}}"#);
    let run = |threads: &str, out: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_chainlab"))
            .env("CHAINLAB_THREADS", threads)
            .args([
                "bifurcate",
                cfg.to_str().unwrap(),
                "--out",
                ws.out(out).to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(o.status.success());
    };
    run("1", "one");
    run("4", "four");
    assert_eq!(
        read(&ws.out("one"), "bifurcation.csv"),
        read(&ws.out("four"), "bifurcation.csv")
    );
}
