use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_pite-sim"));
    c.env_remove("PITE_SIM_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stem(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_file(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn untabulated_distance_is_a_usage_error() {
    let o = run(&["run", "--model", "h2", "--R", "0.80", "--beta", "1"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("tabulated"), "{}", stderr(&o));
}

#[test]
fn malformed_arguments_exit_one() {
    assert_eq!(code(&run(&["run", "--model", "h2", "--bogus"])), 1);
    assert_eq!(code(&run(&["run", "--model", "h2", "--beta", "1", "--order", "3"])), 1);
    assert_eq!(
        code(&run(&["run", "--model", "h2", "--beta", "1", "--mode", "sample"])),
        1
    );
    assert_eq!(
        code(&run(&["run", "--model", "h2", "--beta", "1", "--noise", "0.1"])),
        1
    );
    assert_eq!(code(&run(&["run", "--model", "h2", "--beta", "1.01"])), 1);
    let o = run(&[
        "run",
        "--model",
        "ising",
        "--n",
        "12",
        "--beta",
        "0.05",
        "--noise",
        "0.01,0.01",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("trajectories"));
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    for (name, extra) in [("post", vec![]), ("samp", vec!["--mode", "sample", "--seed", "11"])] {
        let mut outs = Vec::new();
        for k in 0..2 {
            let s = stem(&dir, &format!("{name}{k}"));
            let mut args = vec!["run", "--model", "h2", "--beta", "1", "--dt", "0.1", "--out", &s];
            args.extend(extra.iter().copied());
            assert_eq!(code(&run(&args)), 0);
            outs.push(fs::read(format!("{s}.csv")).unwrap());
        }
        assert_eq!(outs[0], outs[1], "{name}");
    }
}

#[test]
fn manifest_replays_and_detects_tampering() {
    let dir = TempDir::new().unwrap();
    let s = stem(&dir, "lih");
    let o = run(&[
        "run",
        "--model",
        "lih",
        "--beta",
        "0.2",
        "--grouping",
        "lih",
        "--order",
        "2",
        "--out",
        &s,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let manifest = format!("{s}.manifest.json");
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["model"], "lih");
    assert_eq!(m["grouping"], "lih");
    assert_eq!(m["schedule"]["n_steps"], 4);
    let j: serde_json::Value = serde_json::from_str(&fs::read_to_string(format!("{s}.json")).unwrap()).unwrap();
    assert_eq!(j["status"], "completed");
    assert_eq!(j["records"].as_array().unwrap().len(), 5);

    assert_eq!(code(&run(&["replay", &manifest, "--verify"])), 0);
    let copy = stem(&dir, "copy");
    assert_eq!(code(&run(&["replay", &manifest, "--out", &copy])), 0);
    assert_eq!(
        fs::read(format!("{s}.csv")).unwrap(),
        fs::read(format!("{copy}.csv")).unwrap()
    );

    let csv = format!("{s}.csv");
    let mut text = fs::read_to_string(&csv).unwrap();
    text.push_str("junk\n");
    fs::write(&csv, text).unwrap();
    assert_eq!(code(&run(&["replay", &manifest, "--verify"])), 3);
}

#[test]
fn exhausted_budget_exits_two_with_partial_trace() {
    let dir = TempDir::new().unwrap();
    let h = write_file(dir.path(), "x.txt", "1.0 X\n");
    let mut seen = 0;
    for seed in 0..10 {
        let s = stem(&dir, &format!("e{seed}"));
        let seed = seed.to_string();
        let o = run(&[
            "run",
            "--model",
            "file",
            "--file",
            &h,
            "--init",
            "0",
            "--beta",
            "3",
            "--dt",
            "1",
            "--mode",
            "sample",
            "--seed",
            &seed,
            "--restart-budget",
            "0",
            "--out",
            &s,
        ]);
        let j: serde_json::Value = serde_json::from_str(&fs::read_to_string(format!("{s}.json")).unwrap()).unwrap();
        match code(&o) {
            2 => {
                seen += 1;
                assert_eq!(j["status"], "budget_exhausted");
                assert!(stderr(&o).contains("budget"));
            }
            0 => assert_eq!(j["status"], "completed"),
            c => panic!("exit {c}"),
        }
    }
    assert!(seen > 0);
}

#[test]
fn annihilation_exits_two() {
    let dir = TempDir::new().unwrap();
    let h = write_file(dir.path(), "z.txt", "1.0 Z\n");
    let s = stem(&dir, "a");
    let o = run(&[
        "run", "--model", "file", "--file", &h, "--init", "0", "--beta", "20", "--dt", "20", "--out", &s,
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("annihilated"));
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().to_string()).collect()
}

#[test]
fn distance_sweep_minimum_sits_at_equilibrium() {
    let o = run(&["sweep", "--model", "h2", "--axis", "R", "--beta", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = String::from_utf8(o.stdout).unwrap();
    let values = column(&csv, "value");
    assert_eq!(values.len(), 9);
    for col in ["energy", "exact_energy"] {
        let e: Vec<f64> = column(&csv, col).iter().map(|v| v.parse().unwrap()).collect();
        let argmin = (0..e.len()).min_by(|&a, &b| e[a].total_cmp(&e[b])).unwrap();
        assert_eq!(values[argmin], "0.75", "{col}");
    }
    assert!(column(&csv, "status").iter().all(|s| s == "completed"));
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let args = [
        "sweep", "--model", "h2", "--axis", "seed", "--values", "0..8", "--beta", "1", "--dt", "0.25", "--mode",
        "sample",
    ];
    let one = bin().args(args).env("PITE_SIM_THREADS", "1").output().unwrap();
    let many = bin().args(args).env("PITE_SIM_THREADS", "4").output().unwrap();
    assert_eq!(code(&one), 0, "{}", stderr(&one));
    assert_eq!(one.stdout, many.stdout);
    let bad = bin().args(args).env("PITE_SIM_THREADS", "zero").output().unwrap();
    assert_eq!(code(&bad), 1);
    let csv = String::from_utf8(one.stdout).unwrap();
    let frac: f64 = column(&csv, "success_fraction").last().unwrap().parse().unwrap();
    assert!((0.0..=1.0).contains(&frac));
}

#[test]
fn analyze_bounds_start_at_one() {
    let dir = TempDir::new().unwrap();
    let s = stem(&dir, "an");
    let o = run(&[
        "analyze",
        "--model",
        "ising",
        "--n",
        "6",
        "--grouping",
        "ising-local",
        "--points",
        "5",
        "--out",
        &s,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = fs::read_to_string(format!("{s}.csv")).unwrap();
    for col in ["rlb", "alb", "alb_generalized"] {
        let v: Vec<f64> = column(&csv, col).iter().map(|x| x.parse().unwrap()).collect();
        assert_eq!(v[0], 1.0, "{col}");
        assert!(v.windows(2).all(|w| w[1] <= w[0]), "{col}");
    }
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(format!("{s}.json")).unwrap()).unwrap();
    assert_eq!(summary["n_qubits"], 6);
    assert!(summary["block_minima"].as_f64().unwrap() > -summary["abs_coeff_sum"].as_f64().unwrap());
}

#[test]
fn circuit_dump_lists_gates() {
    let o = run(&["circuit", "--model", "h2", "--dt", "0.1"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.matches("MEASURE").count(), 4);
    assert!(text.contains("# total gates"));
    assert_eq!(code(&run(&["circuit", "--model", "h2", "--term", "9"])), 1);
}
