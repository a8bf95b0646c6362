use std::fs;
use std::process::Command;

use ara_runner::{aggregate_csv, execute, expand_sweep, parse_scenario, parse_sweep, write_outputs, SweepError};

const LINE: &str = include_str!("../../../scenarios/line.toml");
const DIAMOND: &str = include_str!("../../../scenarios/diamond-repair.toml");

#[test]
fn lossless_line_repetitions_agree() {
    let cfg = parse_scenario(LINE).unwrap();
    let runs = expand_sweep(&cfg, &[]).unwrap();
    assert_eq!(runs.len(), 5);
    let c = execute(&runs, 2);
    assert!(c.all_succeeded());
    assert_eq!(c.aggregates.len(), 1);
    let a = &c.aggregates[0];
    assert_eq!((a.delivery_ratio.mean, a.delivery_ratio.sd), (1.0, 0.0));
    assert_eq!((a.mean_hop_count.mean, a.mean_hop_count.sd), (4.0, 0.0));
}

#[test]
fn single_repetition_has_zero_spread() {
    let mut cfg = parse_scenario(DIAMOND).unwrap();
    cfg.links.delivery_prob = 0.7;
    let c = execute(&expand_sweep(&cfg, &[]).unwrap(), 1);
    let a = &c.aggregates[0];
    assert_eq!(a.runs, 1);
    assert_eq!(a.delivery_ratio.sd, 0.0);
    assert_eq!(a.control_overhead.sd, 0.0);
    assert_eq!(a.mean_hop_count.sd, 0.0);
}

#[test]
fn thread_count_does_not_change_results() {
    let mut cfg = parse_scenario(DIAMOND).unwrap();
    cfg.links.delivery_prob = 0.8;
    cfg.repetitions = 4;
    let axes = parse_sweep("[[sweep]]\npath = \"policy.alpha\"\nvalues = [1.0, 3.0]\n").unwrap();
    let runs = expand_sweep(&cfg, &axes).unwrap();
    let serial = execute(&runs, 1);
    let parallel = execute(&runs, 4);
    assert_eq!(serial, parallel);
    assert_eq!(aggregate_csv(&serial.aggregates), aggregate_csv(&parallel.aggregates));

    let (d1, d4) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    write_outputs(d1.path(), &serial).unwrap();
    write_outputs(d4.path(), &parallel).unwrap();
    for f in [
        "summary.csv",
        "aggregate.csv",
        "runs/1/3/pheromone_trace.csv",
        "runs/0/2/flows.csv",
    ] {
        assert_eq!(
            fs::read(d1.path().join(f)).unwrap(),
            fs::read(d4.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn every_combination_gets_a_row() {
    let cfg = parse_scenario(LINE).unwrap();
    let axes = parse_sweep(
        "[[sweep]]\npath = \"policy.alpha\"\nvalues = [0.5, 1, 2]\n\
         [[sweep]]\npath = \"policy.evaporation\"\nvalues = [\"exponential\", \"linear\"]\n",
    )
    .unwrap();
    let runs = expand_sweep(&cfg, &axes).unwrap();
    assert_eq!(runs.len(), 3 * 2 * 5);
    let c = execute(&runs, 3);
    assert_eq!(c.aggregates.len(), 6);
    assert!(c.aggregates.iter().all(|a| a.runs == 5 && a.failed == 0));
    let text = String::from_utf8(aggregate_csv(&c.aggregates)).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("policy.alpha=0.5;policy.evaporation=linear"), "{text}");
}

#[test]
fn sweep_rejects_unknown_paths() {
    let cfg = parse_scenario(LINE).unwrap();
    let axes = parse_sweep("[[sweep]]\npath = \"policy.evap_Q\"\nvalues = [0.5]\n").unwrap();
    assert_eq!(
        expand_sweep(&cfg, &axes).unwrap_err(),
        SweepError::UnknownParameter("policy.evap_Q".into())
    );
}

fn ara() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ara"))
}

#[test]
fn cli_writes_the_documented_layout() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("s.toml");
    fs::write(&sweep, "[[sweep]]\npath = \"policy.alpha\"\nvalues = [0.5, 1.0, 2.0]\n").unwrap();
    let out = dir.path().join("out");
    let status = ara()
        .args(["run", concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/line.toml")])
        .arg("--sweep")
        .arg(&sweep)
        .arg("--out")
        .arg(&out)
        .args(["--parallel", "3", "--seed", "500"])
        .status()
        .unwrap();
    assert!(status.success());
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 16);
    let last = summary.lines().last().unwrap();
    assert!(last.starts_with("14,2,4,514,ok,100,100,"), "{last}");
    for c in 0..3 {
        for r in 0..5 {
            let run = out.join(format!("runs/{c}/{r}"));
            assert!(run.join("flows.csv").is_file());
            assert!(run.join("pheromone_trace.csv").is_file());
        }
    }
}

#[test]
fn cli_reports_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, LINE.replace("[[flow]]", "[policy]\nevap_Q = 0.5\n\n[[flow]]")).unwrap();
    let out = ara()
        .arg("run")
        .arg(&bad)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("evap_Q") && err.contains("line 13"), "{err}");
    assert!(!dir.path().join("summary.csv").exists());
}

#[test]
fn failed_runs_do_not_stop_the_campaign() {
    let mut cfg = parse_scenario(LINE).unwrap();
    cfg.repetitions = 3;
    let mut runs = expand_sweep(&cfg, &[]).unwrap();
    runs[1].config.policy.alpha = -1.0;
    let c = execute(&runs, 2);
    assert!(!c.all_succeeded());
    assert_eq!(c.failures(), 1);
    assert!(c.results[0].outcome.is_ok() && c.results[2].outcome.is_ok());
    assert!(c.results[1].outcome.as_ref().unwrap_err().contains("alpha"));
    let a = &c.aggregates[0];
    assert_eq!((a.runs, a.failed), (3, 1));
    assert_eq!(a.delivery_ratio.mean, 1.0);

    let dir = tempfile::tempdir().unwrap();
    write_outputs(dir.path(), &c).unwrap();
    assert!(dir.path().join("runs/0/1/error.txt").is_file());
    assert!(dir.path().join("runs/0/2/flows.csv").is_file());
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let row = summary.lines().nth(2).unwrap();
    assert!(row.starts_with("1,0,1,2,error: "), "{row}");
}
