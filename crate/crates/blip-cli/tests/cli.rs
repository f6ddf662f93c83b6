//! End-to-end checks of the batch front-end: exit codes, file schemas,
//! config precedence, and byte-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

fn blip(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blip"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, rel: &str) -> String {
    std::fs::read_to_string(dir.join(rel)).unwrap_or_else(|e| panic!("read {rel}: {e}"))
}

#[test]
fn identities_stream_and_exit_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let out = blip(
        tmp.path(),
        &["identities", "--p", "0.5", "--size", "15", "--fields", "10", "--seed", "7"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let records = read(tmp.path(), "runs/identities/records.jsonl");
    assert_eq!(records.lines().count(), 30);
    for line in records.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["identity", "seed", "p", "dims", "points_checked", "counterexample"] {
            assert!(v.get(key).is_some(), "missing {key} in {line}");
        }
        assert!(v["counterexample"].is_null());
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "runs/identities/manifest.json")).unwrap();
    assert_eq!(manifest["subcommand"], "identities");
    assert!(manifest["finished_at"].is_string());
}

#[test]
fn invalid_parameters_exit_two_naming_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let out = blip(tmp.path(), &["shape", "--p", "1.5", "--n", "50", "--reps", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parameter p"), "stderr: {err}");

    let out = blip(tmp.path(), &["soft-edge", "--a", "1.5", "--n", "50", "--reps", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parameter a"));

    // unknown flags are a usage error
    let out = blip(tmp.path(), &["shape", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn summary_schema_is_fixed() {
    let tmp = tempfile::tempdir().unwrap();
    let out = blip(
        tmp.path(),
        &["shape", "--p", "0.5", "--n", "60,120", "--reps", "6", "--seed", "3"],
    );
    assert!(out.status.success());
    let summary = read(tmp.path(), "runs/shape/summary.csv");
    let mut lines = summary.lines();
    assert_eq!(lines.next().unwrap(), "n,replicas,mean,se,median,exceedance,ref_value");
    assert_eq!(lines.clone().count(), 2);
    for line in lines {
        assert_eq!(line.split(',').count(), 7);
    }
    let records = read(tmp.path(), "runs/shape/records.jsonl");
    assert_eq!(records.lines().count(), 12);
    let first: serde_json::Value = serde_json::from_str(records.lines().next().unwrap()).unwrap();
    for key in ["experiment", "n", "replica", "value", "seed"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn reruns_are_byte_identical_for_any_worker_count() {
    let tmp = tempfile::tempdir().unwrap();
    let args =
        ["soft-edge", "--p", "0.5", "--a", "0.75", "--n", "200,400", "--reps", "12", "--seed", "9"];
    let mut one = args.to_vec();
    one.extend(["--out", "one"]);
    let out = blip(tmp.path(), &one);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let mut two = args.to_vec();
    two.extend(["--out", "two"]);
    let out = Command::new(env!("CARGO_BIN_EXE_blip"))
        .current_dir(tmp.path())
        .env("BLIP_WORKERS", "1")
        .args(&two)
        .output()
        .unwrap();
    assert!(out.status.success());

    assert_eq!(read(tmp.path(), "one/records.jsonl"), read(tmp.path(), "two/records.jsonl"));
    assert_eq!(read(tmp.path(), "one/summary.csv"), read(tmp.path(), "two/summary.csv"));
}

#[test]
fn config_file_sits_between_defaults_and_flags() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("cfg.toml"),
        "[shape]\np = 0.3\nn = [80]\nreps = 5\nseed = \"0x10\"\n",
    )
    .unwrap();
    let out = blip(tmp.path(), &["shape", "--config", "cfg.toml", "--out", "a"]);
    assert!(out.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "a/manifest.json")).unwrap();
    assert_eq!(manifest["config"]["p"], 0.3);
    assert_eq!(manifest["config"]["seed"], 16);
    assert_eq!(manifest["config"]["reps"], 5);

    // a flag overrides the file
    let out = blip(tmp.path(), &["shape", "--config", "cfg.toml", "--p", "0.7", "--out", "b"]);
    assert!(out.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "b/manifest.json")).unwrap();
    assert_eq!(manifest["config"]["p"], 0.7);
}

#[test]
fn table_and_trajectory_dumps_have_their_headers() {
    let tmp = tempfile::tempdir().unwrap();
    let out = blip(tmp.path(), &["simulate", "--m", "5", "--n", "4", "--seed", "2"]);
    assert!(out.status.success());
    let table = read(tmp.path(), "runs/simulate/table.csv");
    assert!(table.starts_with("i,j,value\n"));
    assert_eq!(table.lines().count(), 1 + 20);

    let out = blip(tmp.path(), &["processes", "--process", "r", "--k", "4", "--t", "5"]);
    assert!(out.status.success());
    let traj = read(tmp.path(), "runs/processes/trajectory.csv");
    assert!(traj.starts_with("k,t,pos\n"));
    assert_eq!(traj.lines().count(), 1 + 4 * 6);

    let out = blip(tmp.path(), &["processes", "--process", "fragmentation", "--t", "3"]);
    assert!(out.status.success());
    let events = read(tmp.path(), "runs/processes/events.csv");
    assert!(events.starts_with("t,platoon_index,n_j,M_j\n"));
}

#[test]
fn crosscheck_reports_and_agrees() {
    let tmp = tempfile::tempdir().unwrap();
    let out = blip(
        tmp.path(),
        &["crosscheck", "--p", "0.5", "--n", "80", "--reps", "600", "--seed", "4"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let res: serde_json::Value =
        serde_json::from_str(&read(tmp.path(), "runs/crosscheck/crosscheck.json")).unwrap();
    for key in ["m", "n", "j", "replicas", "p_direct", "p_geometric", "joint_se"] {
        assert!(res.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn help_enumerates_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    for sub in ["simulate", "shape", "soft-edge", "hard-edge", "identities", "processes", "crosscheck"]
    {
        let out = blip(tmp.path(), &[sub, "--help"]);
        assert!(out.status.success());
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains("default:"), "{sub} --help lists no defaults:\n{text}");
    }
}
