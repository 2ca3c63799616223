//! Discovery from interventional data: empirical activation frequencies,
//! the estimated ancestor relation and cascade tree reconstruction.
//!
//! The estimator is deliberately minimal. For each ordered pair it asks one
//! question: was the second node ever seen active while the first was
//! blocked? A "no" claims an ancestor relation. Errors are one-sided — true
//! downstream nodes can never activate under blocking, so only false
//! positives occur, and those die out exponentially with more interventions
//! per object.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{
    break_cycles, compare_graphs, transitive_reduction, AncestorMatrix, Digraph, GraphMetrics,
    NodeId,
};
use crate::schedule::generate_dataset;
use crate::scm::{CascadeModel, Episode};

/// An ordered list of episodes over a fixed node count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InterventionalDataset {
    n: usize,
    episodes: Vec<Episode>,
}

impl InterventionalDataset {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("node count must be >= 1".into()));
        }
        Ok(Self {
            n,
            episodes: Vec::new(),
        })
    }

    pub fn from_episodes(n: usize, episodes: Vec<Episode>) -> Result<Self> {
        let mut data = Self::new(n)?;
        for ep in episodes {
            data.push(ep)?;
        }
        Ok(data)
    }

    pub fn push(&mut self, episode: Episode) -> Result<()> {
        if episode.node_count() != self.n {
            return Err(Error::Format(format!(
                "episode has {} activations, dataset expects {}",
                episode.node_count(),
                self.n
            )));
        }
        if let Some(t) = episode.intervention.target() {
            if t >= self.n {
                return Err(Error::Format(format!(
                    "episode targets node {} of {}",
                    t + 1,
                    self.n
                )));
            }
        }
        self.episodes.push(episode);
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn episodes(&self) -> &[Episode] {
        &self.episodes
    }

    pub fn len(&self) -> usize {
        self.episodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.episodes.is_empty()
    }
}

/// Per-pair counting statistics: how often each node was blocked, and how
/// often each other node was seen active during those episodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairStats {
    n: usize,
    intervention_counts: Vec<u64>,
    active_counts: Vec<u64>,
}

impl PairStats {
    /// Single fold over the dataset.
    pub fn from_dataset(data: &InterventionalDataset) -> Self {
        let n = data.node_count();
        let mut intervention_counts = vec![0u64; n];
        let mut active_counts = vec![0u64; n * n];
        for ep in data.episodes() {
            if let Some(i) = ep.intervention.target() {
                intervention_counts[i] += 1;
                for (j, &active) in ep.active.iter().enumerate() {
                    if active {
                        active_counts[i * n + j] += 1;
                    }
                }
            }
        }
        Self {
            n,
            intervention_counts,
            active_counts,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Times node `i` was blocked.
    pub fn interventions_on(&self, i: NodeId) -> u64 {
        self.intervention_counts[i]
    }

    /// Times `j` was active while `i` was blocked.
    pub fn active_count(&self, i: NodeId, j: NodeId) -> u64 {
        self.active_counts[i * self.n + j]
    }

    /// Empirical activation frequency of `j` under blocking of `i`;
    /// `None` when `i` was never blocked.
    pub fn p_hat(&self, i: NodeId, j: NodeId) -> Option<f64> {
        let n_i = self.intervention_counts[i];
        if n_i == 0 {
            None
        } else {
            Some(self.active_counts[i * self.n + j] as f64 / n_i as f64)
        }
    }

    /// Nodes that were never blocked (their rows carry no evidence).
    pub fn undefined_rows(&self) -> Vec<NodeId> {
        (0..self.n)
            .filter(|&i| self.intervention_counts[i] == 0)
            .collect()
    }
}

/// Estimated ancestor relation plus the nodes whose rows had no evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AncestorEstimate {
    pub matrix: AncestorMatrix,
    /// Nodes never blocked; their rows are all-zero by convention.
    pub undefined_rows: Vec<NodeId>,
}

/// Claim `j` downstream of `i` exactly when `i` was blocked at least once
/// and `j` never activated in any of those episodes.
pub fn estimate_ancestors(stats: &PairStats) -> AncestorEstimate {
    let n = stats.node_count();
    let mut matrix = AncestorMatrix::new(n);
    for i in 0..n {
        if stats.interventions_on(i) == 0 {
            continue;
        }
        for j in 0..n {
            if i != j && stats.active_count(i, j) == 0 {
                matrix.set(i, j, true);
            }
        }
    }
    AncestorEstimate {
        matrix,
        undefined_rows: stats.undefined_rows(),
    }
}

/// As [`estimate_ancestors`] but refuses datasets in which some node was
/// never blocked.
pub fn estimate_ancestors_strict(stats: &PairStats) -> Result<AncestorMatrix> {
    let undefined = stats.undefined_rows();
    if !undefined.is_empty() {
        return Err(Error::InsufficientData(
            undefined.iter().map(|&i| i + 1).collect(),
        ));
    }
    Ok(estimate_ancestors(stats).matrix)
}

/// Pairs `(i, j)` witnessed with `i` inactive and `j` active in an episode
/// whose intervention touched neither `i` nor `j`. Such a witness rules out
/// `j` being downstream of `i` while staying disjoint from the interventional
/// evidence already counted in [`PairStats`].
pub fn observational_evidence(data: &InterventionalDataset) -> BTreeSet<(NodeId, NodeId)> {
    let n = data.node_count();
    let mut pairs = BTreeSet::new();
    for ep in data.episodes() {
        let target = ep.intervention.target();
        for i in 0..n {
            if ep.active[i] || target == Some(i) {
                continue;
            }
            for j in 0..n {
                if i == j || !ep.active[j] || target == Some(j) {
                    continue;
                }
                pairs.insert((i, j));
            }
        }
    }
    pairs
}

/// Output of the full reconstruction pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub graph: Digraph,
    /// Nodes that were never blocked (1 warning each; no ancestor claims).
    pub undefined_rows: Vec<NodeId>,
}

/// Full pipeline: count, estimate the ancestor relation, prune cycles with
/// observational witnesses (remainder broken by index), then take the
/// transitive reduction.
pub fn reconstruct(data: &InterventionalDataset) -> Reconstruction {
    let stats = PairStats::from_dataset(data);
    let estimate = estimate_ancestors(&stats);
    let evidence = observational_evidence(data);
    let acyclic = break_cycles(&estimate.matrix, Some(&evidence));
    let graph = transitive_reduction(&acyclic).expect("break_cycles output is acyclic");
    Reconstruction {
        graph,
        undefined_rows: estimate.undefined_rows,
    }
}

/// As [`reconstruct`], erroring when any node was never blocked.
pub fn reconstruct_strict(data: &InterventionalDataset) -> Result<Digraph> {
    let rec = reconstruct(data);
    if !rec.undefined_rows.is_empty() {
        return Err(Error::InsufficientData(
            rec.undefined_rows.iter().map(|&i| i + 1).collect(),
        ));
    }
    Ok(rec.graph)
}

/// Aggregate recovery quality over seeded round-robin experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoverySummary {
    pub mean_shd: f64,
    pub mean_skeleton_shd: f64,
    /// Fraction of seeds with a perfect reconstruction.
    pub exact_fraction: f64,
    pub mean_f1: f64,
    pub mean_precision: f64,
    pub mean_recall: f64,
}

/// Generate, reconstruct and score one round-robin dataset.
pub fn run_once(model: &CascadeModel, n_per_object: usize, run_seed: u64) -> Result<GraphMetrics> {
    let data = generate_dataset(model, n_per_object, 0, run_seed)?;
    let rec = reconstruct(&data);
    compare_graphs(&rec.graph, model.tree())
}

/// Score `reconstruct` against the generating model over a list of seeds,
/// one independent round-robin dataset per seed.
pub fn recovery_stats(
    model: &CascadeModel,
    n_per_object: usize,
    seeds: &[u64],
) -> Result<RecoverySummary> {
    if n_per_object == 0 {
        return Err(Error::InvalidArgument(
            "need at least one intervention per object".into(),
        ));
    }
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("need at least one seed".into()));
    }
    let metrics: Vec<GraphMetrics> = exec::map(seeds, |&s| {
        run_once(model, n_per_object, s).expect("valid model and rounds")
    });
    let m = metrics.len() as f64;
    Ok(RecoverySummary {
        mean_shd: metrics.iter().map(|g| g.shd as f64).sum::<f64>() / m,
        mean_skeleton_shd: metrics.iter().map(|g| g.skeleton_shd as f64).sum::<f64>() / m,
        exact_fraction: metrics.iter().filter(|g| g.shd == 0).count() as f64 / m,
        mean_f1: metrics.iter().map(|g| g.f1).sum::<f64>() / m,
        mean_precision: metrics.iter().map(|g| g.precision).sum::<f64>() / m,
        mean_recall: metrics.iter().map(|g| g.recall).sum::<f64>() / m,
    })
}
