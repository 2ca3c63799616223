//! Seeded sweep experiments over interventions-per-object, emitting CSV rows
//! and aggregate recovery statistics.
//!
//! Output is byte-identical across reruns of the same spec: work is fanned
//! out per seed but rows are assembled in `(failure, n, seed)` order, and
//! the wall-time column is populated only when timing is explicitly enabled
//! (measured clocks and reproducible bytes don't mix).

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::estimator::run_once;
use crate::exec;
use crate::graph::{CausalTree, GraphMetrics};
use crate::scm::{sample_complexity_bound, CascadeModel};
use crate::seed::mix_seed;

/// What to sweep: one model, a grid of failure probabilities and
/// interventions-per-object values, a number of seeds per grid point.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Label used in the CSV's model column.
    pub model_label: String,
    pub tree: CausalTree,
    pub failure_probs: Vec<f64>,
    pub n_per_object: Vec<usize>,
    pub seed_count: usize,
    /// Base seed; per-run seeds are derived from it.
    pub base_seed: u64,
    /// Confidence parameter for the reported sample-complexity bound.
    pub delta: f64,
    /// Measure per-run wall time into the CSV. Off by default so that
    /// identical spec + seed always produce identical bytes.
    pub timing: bool,
}

impl SweepSpec {
    pub fn new(model_label: impl Into<String>, tree: CausalTree) -> Self {
        Self {
            model_label: model_label.into(),
            tree,
            failure_probs: vec![0.0],
            n_per_object: vec![1],
            seed_count: 100,
            base_seed: 0,
            delta: 0.05,
            timing: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.failure_probs.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one failure probability required".into(),
            ));
        }
        for &p in &self.failure_probs {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "failure probability {p} must lie in [0, 1)"
                )));
            }
        }
        if self.n_per_object.is_empty() || self.n_per_object.contains(&0) {
            return Err(Error::InvalidArgument(
                "interventions per object must be positive".into(),
            ));
        }
        if self.seed_count == 0 {
            return Err(Error::InvalidArgument("seed count must be >= 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "delta {} must lie in (0, 1)",
                self.delta
            )));
        }
        Ok(())
    }
}

/// One CSV row: a single generate-discover-evaluate pipeline run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub model: String,
    pub p: f64,
    pub n_per_object: usize,
    pub seed: u64,
    pub metrics: GraphMetrics,
    pub exact: bool,
    pub wall_time_seconds: f64,
}

pub const CSV_HEADER: &str =
    "model,p,n_per_object,seed,shd,skeleton_shd,precision,recall,f1,exact,wall_time_seconds";

impl RunRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{},{:.6}",
            self.model,
            self.p,
            self.n_per_object,
            self.seed,
            self.metrics.shd,
            self.metrics.skeleton_shd,
            self.metrics.precision,
            self.metrics.recall,
            self.metrics.f1,
            u8::from(self.exact),
            self.wall_time_seconds,
        )
    }
}

/// Per-grid-point aggregate over seeds.
#[derive(Debug, Clone)]
pub struct PointAggregate {
    pub p: f64,
    pub n_per_object: usize,
    pub mean_shd: f64,
    pub mean_skeleton_shd: f64,
    pub exact_fraction: f64,
    pub mean_f1: f64,
}

/// Per-failure-probability summary: the exact minimum non-descendant
/// activation, the theoretical per-object intervention bound at `delta`,
/// and the first swept n reaching 95% exact recovery.
#[derive(Debug, Clone)]
pub struct FailureSummary {
    pub p: f64,
    pub q_min: f64,
    pub bound: u64,
    pub m_min: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub records: Vec<RunRecord>,
    pub aggregates: Vec<PointAggregate>,
    pub summaries: Vec<FailureSummary>,
    /// Header plus one line per record, `\n`-terminated.
    pub csv: String,
    /// Human-readable aggregate table.
    pub summary_text: String,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_inner(spec, false)
}

/// Single-core variant used for timing envelopes and as the comparison arm
/// of the benchmark suite.
pub fn run_sweep_sequential(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_inner(spec, true)
}

fn run_sweep_inner(spec: &SweepSpec, force_sequential: bool) -> Result<SweepResult> {
    spec.validate()?;
    let mut records = Vec::new();
    let mut aggregates = Vec::new();
    let mut summaries = Vec::new();

    for (p_idx, &p) in spec.failure_probs.iter().enumerate() {
        let model = CascadeModel::with_uniform_failure(spec.tree.clone(), p)?;

        for (n_idx, &n) in spec.n_per_object.iter().enumerate() {
            let point_seed = mix_seed(
                spec.base_seed,
                (p_idx * spec.n_per_object.len() + n_idx) as u64,
            );
            let seeds: Vec<u64> = (0..spec.seed_count as u64).collect();
            let timing = spec.timing;
            let run = |&s: &u64| -> (GraphMetrics, f64) {
                let started = timing.then(Instant::now);
                let metrics = run_once(&model, n, mix_seed(point_seed, s)).expect("validated spec");
                let secs = started.map_or(0.0, |t| t.elapsed().as_secs_f64());
                (metrics, secs)
            };
            let results: Vec<(GraphMetrics, f64)> = if force_sequential {
                exec::map_sequential(&seeds, run)
            } else {
                exec::map(&seeds, run)
            };

            let count = results.len() as f64;
            let agg = PointAggregate {
                p,
                n_per_object: n,
                mean_shd: results.iter().map(|(m, _)| m.shd as f64).sum::<f64>() / count,
                mean_skeleton_shd: results
                    .iter()
                    .map(|(m, _)| m.skeleton_shd as f64)
                    .sum::<f64>()
                    / count,
                exact_fraction: results.iter().filter(|(m, _)| m.shd == 0).count() as f64 / count,
                mean_f1: results.iter().map(|(m, _)| m.f1).sum::<f64>() / count,
            };
            aggregates.push(agg);

            for (s, (metrics, secs)) in results.into_iter().enumerate() {
                records.push(RunRecord {
                    model: spec.model_label.clone(),
                    p,
                    n_per_object: n,
                    seed: s as u64,
                    exact: metrics.shd == 0,
                    metrics,
                    wall_time_seconds: secs,
                });
            }
        }

        // scan in increasing n: the smallest value reaching 95% exact recovery
        let m_min = aggregates
            .iter()
            .filter(|a| a.p == p && a.exact_fraction >= 0.95)
            .map(|a| a.n_per_object)
            .min();
        let q_min = model.min_nondescendant_activation()?;
        let bound = sample_complexity_bound(q_min, model.node_count(), spec.delta)?;
        summaries.push(FailureSummary {
            p,
            q_min,
            bound,
            m_min,
        });
    }

    let mut csv = String::with_capacity(records.len() * 64);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for r in &records {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }

    let summary_text = render_summary(spec, &aggregates, &summaries);

    Ok(SweepResult {
        records,
        aggregates,
        summaries,
        csv,
        summary_text,
    })
}

fn render_summary(
    spec: &SweepSpec,
    aggregates: &[PointAggregate],
    summaries: &[FailureSummary],
) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "sweep: model={} seeds={} delta={}",
        spec.model_label, spec.seed_count, spec.delta
    );
    for s in summaries {
        let _ = writeln!(
            out,
            "p={}: q_min={:.3} bound(delta={})={} M_min={}",
            s.p,
            s.q_min,
            spec.delta,
            s.bound,
            s.m_min
                .map_or_else(|| "not reached".to_string(), |n| n.to_string()),
        );
        let _ = writeln!(
            out,
            "{:>6} {:>12} {:>14} {:>12} {:>10}",
            "n", "mean_shd", "mean_sshd", "exact_frac", "mean_f1"
        );
        for a in aggregates.iter().filter(|a| a.p == s.p) {
            let _ = writeln!(
                out,
                "{:>6} {:>12.4} {:>14.4} {:>12.2} {:>10.4}",
                a.n_per_object, a.mean_shd, a.mean_skeleton_shd, a.exact_fraction, a.mean_f1
            );
        }
    }
    out
}
