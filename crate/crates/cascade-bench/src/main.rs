//! Benchmark harness for cascade causal discovery.
//!
//! Subcommands: `catalog`, `generate`, `discover`, `eval`, `sweep`,
//! `baselines`. Exit codes: 0 on success, 1 on format/argument errors,
//! 2 when strict estimation (or an empty dataset) leaves nodes without
//! evidence.

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use cascade_discovery::error::{Error, Result};
use cascade_discovery::estimator::{reconstruct, PairStats};
use cascade_discovery::graph::compare_graphs;
use cascade_discovery::scm::{CascadeModel, Intervention};
use cascade_discovery::sim::{simulate_trace, MechanizedModel};
use cascade_discovery::sweep::{run_sweep, RunRecord, SweepSpec, CSV_HEADER};
use cascade_discovery::{baselines, catalog, io, schedule, seed};

const USAGE: &str = "\
cascade-bench <command> [options]

commands:
  catalog                          list built-in models and scenarios
  generate --model <name|file> --rounds <r> [--obs <m>] [--seed <s>] --out <file>
                                   sample a round-robin interventional dataset
  discover <dataset> [--out <file>] [--strict]
                                   reconstruct the causal graph from a dataset
  eval <estimate> <truth> [--out <file>]
                                   score an estimated graph against a ground-truth tree
  sweep <config> [--out <csv>]     run a seeded sweep experiment (see README for config keys)
  baselines --model <scenario|file> [--obs <episodes>] [--seed <s>] [--out <csv>]
                                   run the observational heuristics on simulated traces
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: &[String]) -> Result<()> {
    let Some(command) = args.first() else {
        eprint!("{USAGE}");
        return Err(Error::InvalidArgument("missing command".into()));
    };
    let rest = &args[1..];
    match command.as_str() {
        "catalog" => cmd_catalog(),
        "generate" => cmd_generate(rest),
        "discover" => cmd_discover(rest),
        "eval" => cmd_eval(rest),
        "sweep" => cmd_sweep(rest),
        "baselines" => cmd_baselines(rest),
        "--help" | "-h" | "help" => {
            print!("{USAGE}");
            Ok(())
        }
        other => {
            eprint!("{USAGE}");
            Err(Error::InvalidArgument(format!("unknown command '{other}'")))
        }
    }
}

/// Minimal flag parser: `--key value` pairs plus positional arguments.
struct Parsed {
    positional: Vec<String>,
    flags: Vec<(String, String)>,
    switches: Vec<String>,
}

fn parse_args(args: &[String], value_flags: &[&str], switch_flags: &[&str]) -> Result<Parsed> {
    let mut parsed = Parsed {
        positional: Vec::new(),
        flags: Vec::new(),
        switches: Vec::new(),
    };
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        if let Some(name) = arg.strip_prefix("--") {
            if switch_flags.contains(&name) {
                parsed.switches.push(name.to_string());
            } else if value_flags.contains(&name) {
                let value = it.next().ok_or_else(|| {
                    Error::InvalidArgument(format!("flag --{name} needs a value"))
                })?;
                parsed.flags.push((name.to_string(), value.clone()));
            } else {
                return Err(Error::InvalidArgument(format!("unknown flag --{name}")));
            }
        } else {
            parsed.positional.push(arg.clone());
        }
    }
    Ok(parsed)
}

impl Parsed {
    fn flag(&self, name: &str) -> Option<&str> {
        self.flags
            .iter()
            .rev()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    fn require(&self, name: &str) -> Result<&str> {
        self.flag(name)
            .ok_or_else(|| Error::InvalidArgument(format!("missing required flag --{name}")))
    }

    fn parse_flag<T: std::str::FromStr>(&self, name: &str, default: T) -> Result<T> {
        match self.flag(name) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad value '{v}' for --{name}"))),
        }
    }

    fn has(&self, name: &str) -> bool {
        self.switches.iter().any(|s| s == name)
    }
}

fn cmd_catalog() -> Result<()> {
    println!("environments (noiseless unless a P line or synthetic variant says otherwise):");
    for e in catalog::ENVIRONMENTS {
        println!(
            "  {:<28} N={:<3} edges={:<3} {}",
            e.name,
            e.node_count,
            e.edges.len(),
            e.description
        );
    }
    println!("synthetic cascade variants:");
    for s in catalog::SYNTHETIC {
        println!(
            "  {:<34} base={} uniform failure={}",
            s.name, s.base, s.failure
        );
    }
    println!("scenarios (model + mechanisms, for the baselines command):");
    for (name, desc) in catalog::SCENARIOS {
        println!("  {name:<34} {desc}");
    }
    Ok(())
}

fn load_model(spec: &str) -> Result<CascadeModel> {
    if let Some(m) = catalog::model(spec) {
        return Ok(m);
    }
    if Path::new(spec).exists() {
        return io::parse_model(&fs::read_to_string(spec)?);
    }
    Err(Error::InvalidArgument(format!(
        "'{spec}' is neither a catalog model nor a readable file"
    )))
}

fn load_scenario(spec: &str) -> Result<MechanizedModel> {
    if let Some(mm) = catalog::scenario(spec) {
        return Ok(mm);
    }
    if Path::new(spec).exists() {
        return io::parse_scenario(&fs::read_to_string(spec)?);
    }
    Err(Error::InvalidArgument(format!(
        "'{spec}' is neither a catalog scenario nor a readable file"
    )))
}

fn cmd_generate(args: &[String]) -> Result<()> {
    let parsed = parse_args(args, &["model", "rounds", "obs", "seed", "out"], &[])?;
    let model = load_model(parsed.require("model")?)?;
    let rounds: usize = parsed.parse_flag("rounds", 1)?;
    let obs: usize = parsed.parse_flag("obs", 0)?;
    let seed: u64 = parsed.parse_flag("seed", 0)?;
    let out = parsed.require("out")?;

    let data = schedule::generate_dataset(&model, rounds, obs, seed)?;
    fs::write(out, io::write_dataset(&data))?;
    println!(
        "wrote {} episodes ({} interventional, {} observational) over {} nodes to {}",
        data.len(),
        rounds * model.node_count(),
        obs,
        model.node_count(),
        out
    );
    Ok(())
}

fn cmd_discover(args: &[String]) -> Result<()> {
    let parsed = parse_args(args, &["out"], &["strict"])?;
    let [dataset_path] = parsed.positional.as_slice() else {
        return Err(Error::InvalidArgument(
            "discover expects exactly one dataset file".into(),
        ));
    };
    let data = io::parse_dataset(&fs::read_to_string(dataset_path)?)?;
    let stats = PairStats::from_dataset(&data);
    let rec = reconstruct(&data);

    for &i in &rec.undefined_rows {
        eprintln!(
            "warning: node {} was never blocked; no ancestor claims for it",
            i + 1
        );
    }
    if parsed.has("strict") && !rec.undefined_rows.is_empty() {
        return Err(Error::InsufficientData(
            rec.undefined_rows.iter().map(|&i| i + 1).collect(),
        ));
    }

    let text = io::write_digraph(&rec.graph);
    match parsed.flag("out") {
        Some(path) => fs::write(path, &text)?,
        None => print!("{text}"),
    }
    let interventional: u64 = (0..data.node_count())
        .map(|i| stats.interventions_on(i))
        .sum();
    println!(
        "discovered {} edges over {} nodes from {} episodes ({} interventional)",
        rec.graph.edge_count(),
        data.node_count(),
        data.len(),
        interventional
    );
    if data.is_empty() {
        // nothing to estimate from: flag it in the exit code as well
        return Err(Error::InsufficientData((1..=data.node_count()).collect()));
    }
    Ok(())
}

fn eval_record(estimate_path: &str, truth_path: &str) -> Result<RunRecord> {
    let estimate = io::parse_digraph(&fs::read_to_string(estimate_path)?)?;
    let truth = io::parse_tree(&fs::read_to_string(truth_path)?)?;
    let metrics = compare_graphs(&estimate, &truth)?;
    let stem = Path::new(truth_path).file_stem().map_or_else(
        || truth_path.to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    Ok(RunRecord {
        model: stem,
        p: 0.0,
        n_per_object: 0,
        seed: 0,
        exact: metrics.shd == 0,
        metrics,
        wall_time_seconds: 0.0,
    })
}

fn cmd_eval(args: &[String]) -> Result<()> {
    let parsed = parse_args(args, &["out"], &[])?;
    let [estimate_path, truth_path] = parsed.positional.as_slice() else {
        return Err(Error::InvalidArgument(
            "eval expects an estimate file and a truth file".into(),
        ));
    };
    let record = eval_record(estimate_path, truth_path)?;
    let csv = format!("{CSV_HEADER}\n{}\n", record.csv_row());
    match parsed.flag("out") {
        Some(path) => fs::write(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

/// Sweep config file: `key value...` lines, `#` comments.
/// Keys: model (catalog name or model file), p (one or more failure probs),
/// n (one or more interventions-per-object), seeds, seed, delta, out, timing.
fn parse_sweep_config(text: &str, config_dir: &Path) -> Result<(SweepSpec, Option<String>)> {
    let mut model_spec: Option<String> = None;
    let mut failure_probs: Vec<f64> = Vec::new();
    let mut n_per_object: Vec<usize> = Vec::new();
    let mut seed_count: usize = 100;
    let mut base_seed: u64 = 0;
    let mut delta: f64 = 0.05;
    let mut out: Option<String> = None;
    let mut timing = false;

    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Format(format!("config line {}: {msg}", no + 1));
        let mut toks = line.split_whitespace();
        let key = toks.next().unwrap();
        let values: Vec<&str> = toks.collect();
        if values.is_empty() {
            return Err(bad("missing value"));
        }
        match key {
            "model" => model_spec = Some(values.join(" ")),
            "p" => {
                for v in &values {
                    failure_probs.push(v.parse().map_err(|_| bad("bad failure probability"))?);
                }
            }
            "n" => {
                for v in &values {
                    n_per_object.push(v.parse().map_err(|_| bad("bad n_per_object"))?);
                }
            }
            "seeds" => seed_count = values[0].parse().map_err(|_| bad("bad seed count"))?,
            "seed" => base_seed = values[0].parse().map_err(|_| bad("bad base seed"))?,
            "delta" => delta = values[0].parse().map_err(|_| bad("bad delta"))?,
            "out" => out = Some(values.join(" ")),
            "timing" => {
                timing = match values[0] {
                    "on" | "true" | "1" => true,
                    "off" | "false" | "0" => false,
                    _ => return Err(bad("timing must be on or off")),
                }
            }
            other => return Err(bad(&format!("unknown key '{other}'"))),
        }
    }

    let model_spec =
        model_spec.ok_or_else(|| Error::Format("config is missing a 'model' line".into()))?;
    let (model, label) = if let Some(m) = catalog::model(&model_spec) {
        (m, model_spec.clone())
    } else {
        // model paths may be written relative to the config file
        let path = if Path::new(&model_spec).exists() {
            Path::new(&model_spec).to_path_buf()
        } else {
            config_dir.join(&model_spec)
        };
        let m = io::parse_model(&fs::read_to_string(&path).map_err(|e| {
            Error::InvalidArgument(format!(
                "'{model_spec}' is neither a catalog model nor a readable file: {e}"
            ))
        })?)?;
        let label = path
            .file_stem()
            .map_or(model_spec.clone(), |s| s.to_string_lossy().into_owned());
        (m, label)
    };

    if failure_probs.is_empty() {
        // synthetic catalog names carry their own failure probability
        failure_probs.push(model.failure(0));
    }
    if n_per_object.is_empty() {
        return Err(Error::Format("config is missing an 'n' line".into()));
    }

    let spec = SweepSpec {
        model_label: label,
        tree: model.tree().clone(),
        failure_probs,
        n_per_object,
        seed_count,
        base_seed,
        delta,
        timing,
    };
    Ok((spec, out))
}

fn cmd_sweep(args: &[String]) -> Result<()> {
    let parsed = parse_args(args, &["out", "seeds", "seed", "delta"], &[])?;
    let [config_path] = parsed.positional.as_slice() else {
        return Err(Error::InvalidArgument(
            "sweep expects exactly one config file".into(),
        ));
    };
    let text = fs::read_to_string(config_path)?;
    let config_dir = Path::new(config_path)
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .to_path_buf();
    let (mut spec, config_out) = parse_sweep_config(&text, &config_dir)?;
    // flags override the corresponding config keys
    spec.seed_count = parsed.parse_flag("seeds", spec.seed_count)?;
    spec.base_seed = parsed.parse_flag("seed", spec.base_seed)?;
    spec.delta = parsed.parse_flag("delta", spec.delta)?;
    let out = parsed.flag("out").map(str::to_string).or(config_out);

    let result = run_sweep(&spec)?;
    match out {
        Some(path) => {
            fs::write(&path, &result.csv)?;
            print!("{}", result.summary_text);
            println!("wrote {} rows to {}", result.records.len(), path);
        }
        None => {
            eprint!("{}", result.summary_text);
            print!("{}", result.csv);
        }
    }
    Ok(())
}

fn cmd_baselines(args: &[String]) -> Result<()> {
    let parsed = parse_args(args, &["model", "obs", "seed", "out"], &[])?;
    let spec = parsed.require("model")?;
    let episodes: usize = parsed.parse_flag("obs", 100)?;
    let base_seed: u64 = parsed.parse_flag("seed", 0)?;
    let mm = load_scenario(spec)?;

    let traces: Vec<_> = (0..episodes)
        .map(|k| {
            simulate_trace(
                &mm,
                Intervention::Observational,
                seed::mix_seed(base_seed, k as u64),
            )
        })
        .collect::<Result<_>>()?;
    let data = baselines::TraceDataset::new(mm.node_count(), traces)?;

    let truth = mm.model().tree();
    let n = truth.node_count();
    let mean_failure: f64 = (0..n).map(|j| mm.model().failure(j)).sum::<f64>() / n as f64;
    let label = if catalog::scenario(spec).is_some() {
        spec.to_string()
    } else {
        Path::new(spec)
            .file_stem()
            .map_or(spec.to_string(), |s| s.to_string_lossy().into_owned())
    };

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for (name, graph) in [
        (
            "collision_as_influence",
            baselines::collision_as_influence(&data),
        ),
        ("temporal_precedence", baselines::temporal_precedence(&data)),
    ] {
        let metrics = compare_graphs(&graph, truth)?;
        let record = RunRecord {
            model: format!("{label}:{name}"),
            p: mean_failure,
            n_per_object: 0,
            seed: base_seed,
            exact: metrics.shd == 0,
            metrics,
            wall_time_seconds: 0.0,
        };
        csv.push_str(&record.csv_row());
        csv.push('\n');
    }
    match parsed.flag("out") {
        Some(path) => fs::write(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
