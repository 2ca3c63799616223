//! End-to-end tests of the command-line harness: pipelines, file formats,
//! exit codes and reproducibility.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cascade-bench"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir =
        std::env::temp_dir().join(format!("cascade-bench-test-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn generate_discover_eval_round_trip() {
    let dir = scratch("roundtrip");
    let dataset = dir.join("mc.dataset");
    let graph = dir.join("mc.graph");
    let truth = dir.join("mc.truth");
    fs::write(&truth, "N 4\n3 4\n4 1\n1 2\n").unwrap();

    let out = run(&[
        "generate",
        "--model",
        "minimal_chain",
        "--rounds",
        "1",
        "--seed",
        "5",
        "--out",
        dataset.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("wrote 4 episodes"));

    let out = run(&[
        "discover",
        dataset.to_str().unwrap(),
        "--out",
        graph.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(fs::read_to_string(&graph).unwrap(), "N 4\n1 2\n3 4\n4 1\n");
    assert!(stdout(&out).contains("discovered 3 edges"));

    let out = run(&["eval", graph.to_str().unwrap(), truth.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("mc,"), "row: {row}");
    assert!(
        row.contains(",0,0,1.000000,1.000000,1.000000,1,"),
        "row: {row}"
    );
}

#[test]
fn generate_accepts_model_files_with_noise_lines() {
    let dir = scratch("modelfile");
    let model = dir.join("chain.model");
    let dataset = dir.join("chain.dataset");
    fs::write(&model, "N 3\n1 2\n2 3\nP * 0.2\nP 3 0.5\n").unwrap();
    let out = run(&[
        "generate",
        "--model",
        model.to_str().unwrap(),
        "--rounds",
        "2",
        "--obs",
        "4",
        "--out",
        dataset.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(&dataset).unwrap();
    assert_eq!(text.lines().count(), 1 + 6 + 4);
    assert_eq!(text.lines().next(), Some("N 3"));
    assert_eq!(text.lines().filter(|l| l.starts_with("- ")).count(), 4);
}

#[test]
fn discover_warns_and_survives_partially_observed_systems() {
    // worked twelve-object example: two observational episodes plus blocks
    // of objects 11, 6 and 10
    let dir = scratch("partial");
    let dataset = dir.join("pt.dataset");
    fs::write(
        &dataset,
        "N 12\n- 111111111111\n- 101111111111\n11 101111011100\n6 110010110111\n10 000000000000\n",
    )
    .unwrap();
    let out = run(&["discover", dataset.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let warnings = stderr(&out);
    assert_eq!(
        warnings
            .lines()
            .filter(|l| l.contains("never blocked"))
            .count(),
        9
    );
    let text = stdout(&out);
    assert!(text.starts_with("N 12\n"));
    assert!(text.contains("discovered"));
}

#[test]
fn discover_strict_exits_2_on_missing_rows() {
    let dir = scratch("strict");
    let dataset = dir.join("partial.dataset");
    fs::write(&dataset, "N 3\n1 011\n").unwrap();

    let out = run(&["discover", dataset.to_str().unwrap()]);
    assert!(out.status.success());

    let out = run(&["discover", dataset.to_str().unwrap(), "--strict"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("insufficient data"));
}

#[test]
fn discover_empty_dataset_writes_graph_but_exits_2() {
    let dir = scratch("empty");
    let dataset = dir.join("empty.dataset");
    let graph = dir.join("empty.graph");
    fs::write(&dataset, "N 4\n").unwrap();
    let out = run(&[
        "discover",
        dataset.to_str().unwrap(),
        "--out",
        graph.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(fs::read_to_string(&graph).unwrap(), "N 4\n");
}

#[test]
fn format_and_argument_errors_exit_1() {
    let dir = scratch("errors");
    let bad = dir.join("bad.dataset");
    fs::write(&bad, "N 4\n- 01\n").unwrap();

    assert_eq!(
        run(&["discover", bad.to_str().unwrap()]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["generate", "--model", "no_such_model", "--out", "x"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        run(&["generate", "--bogus-flag", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&[]).status.code(), Some(1));

    // node-count mismatch between estimate and truth
    let est = dir.join("est.graph");
    let truth = dir.join("truth.graph");
    fs::write(&est, "N 3\n1 2\n").unwrap();
    fs::write(&truth, "N 4\n3 4\n4 1\n1 2\n").unwrap();
    let out = run(&["eval", est.to_str().unwrap(), truth.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("node count mismatch"));
}

#[test]
fn catalog_lists_models_and_scenarios() {
    let out = run(&["catalog"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in [
        "minimal_chain",
        "sequential_chain",
        "parallel_triggers",
        "intertwined_mechanisms",
        "linear_slot_machine",
        "large_slot_machine",
        "synthetic_parallel_triggers_0.1",
        "synthetic_large_slot_machine_0.1",
        "parallel_triggers_simultaneous",
    ] {
        assert!(text.contains(name), "catalog is missing {name}");
    }
}

#[test]
fn baselines_report_the_structural_gap() {
    let out = run(&[
        "baselines",
        "--model",
        "parallel_triggers_simultaneous",
        "--obs",
        "100",
        "--seed",
        "1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    // collision heuristic: recall 9/11, never sees the two remote releases
    assert!(rows[0].starts_with("parallel_triggers_simultaneous:collision_as_influence,"));
    assert!(rows[0].contains(",0.818182,"), "row: {}", rows[0]);
    // temporal heuristic misattributes one simultaneous release
    assert!(rows[1].starts_with("parallel_triggers_simultaneous:temporal_precedence,"));
    let sshd: u32 = rows[1].split(',').nth(5).unwrap().parse().unwrap();
    assert!(sshd > 0, "row: {}", rows[1]);
}

#[test]
fn baselines_accept_scenario_files() {
    let dir = scratch("scenariofile");
    let scenario = dir.join("chain.scenario");
    fs::write(
        &scenario,
        "N 3\n1 2\n2 3\nM 1 2 contact 1.0\nM 2 3 noncontact 0.5\n",
    )
    .unwrap();
    let out = run(&[
        "baselines",
        "--model",
        scenario.to_str().unwrap(),
        "--obs",
        "10",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("chain:collision_as_influence,"));
}

#[test]
fn sweep_writes_reproducible_csv_and_summary() {
    let dir = scratch("sweep");
    let config = dir.join("sweep.cfg");
    let csv_a = dir.join("a.csv");
    let csv_b = dir.join("b.csv");
    fs::write(
        &config,
        "# tiny sweep\nmodel synthetic_parallel_triggers_0.1\nn 1 2\nseeds 10\ndelta 0.05\n",
    )
    .unwrap();

    let out_a = run(&[
        "sweep",
        config.to_str().unwrap(),
        "--out",
        csv_a.to_str().unwrap(),
    ]);
    assert!(out_a.status.success(), "{}", stderr(&out_a));
    let out_b = run(&[
        "sweep",
        config.to_str().unwrap(),
        "--out",
        csv_b.to_str().unwrap(),
    ]);
    assert!(out_b.status.success());

    let a = fs::read_to_string(&csv_a).unwrap();
    let b = fs::read_to_string(&csv_b).unwrap();
    assert_eq!(a, b, "sweep output must be byte-identical across reruns");
    assert_eq!(a.lines().count(), 1 + 2 * 10);
    assert!(a
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("synthetic_parallel_triggers_0.1,0.1,1,0,"));

    let summary = stdout(&out_a);
    assert!(summary.contains("q_min=0.478"));
    assert!(summary.contains("bound(delta=0.05)=17"));
    assert!(summary.contains("M_min="));
}

#[test]
fn sweep_flags_override_config_keys() {
    let dir = scratch("sweepflags");
    let config = dir.join("s.cfg");
    let csv = dir.join("s.csv");
    fs::write(
        &config,
        "model synthetic_parallel_triggers_0.1\nn 1\nseeds 50\ndelta 0.05\n",
    )
    .unwrap();
    let out = run(&[
        "sweep",
        config.to_str().unwrap(),
        "--seeds",
        "5",
        "--delta",
        "0.01",
        "--seed",
        "11",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 5, "5 seeds, one n value");
    // delta=0.01 lifts the reported bound from 17 to 20
    assert!(
        stdout(&out).contains("bound(delta=0.01)=20"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn sweep_config_errors_exit_1() {
    let dir = scratch("sweepbad");
    let config = dir.join("bad.cfg");
    fs::write(&config, "model minimal_chain\n").unwrap();
    let out = run(&["sweep", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("missing an 'n' line"));

    fs::write(&config, "n 1 2\n").unwrap();
    let out = run(&["sweep", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("missing a 'model' line"));
}

#[test]
fn noiseless_sweep_reports_m_min_one_for_every_environment() {
    let dir = scratch("mmin");
    let config = dir.join("mc.cfg");
    fs::write(&config, "model minimal_chain\nn 1 2\nseeds 20\n").unwrap();
    let out = run(&[
        "sweep",
        config.to_str().unwrap(),
        "--out",
        dir.join("mc.csv").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("M_min=1"), "{}", stdout(&out));
}
