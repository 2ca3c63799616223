//! Causal discovery for chain-reaction systems from blocking interventions.
//!
//! Many engineered systems cascade: components activate in sequence and an
//! inactive upstream component keeps everything downstream inactive. Under
//! that monotone cascade model, holding a single component in place and
//! watching which others still activate reveals the full ancestor relation,
//! and the causal tree follows by transitive reduction. This crate provides:
//!
//! * [`graph`] — rooted trees, ancestor relations, transitive
//!   closure/reduction, cycle breaking, structural metrics, random trees
//! * [`scm`] — the cascade model: episode sampling under observation and
//!   blocking, exact interventional activation probabilities, the
//!   sample-complexity bound
//! * [`sim`] — a discrete-event layer producing activation times and
//!   collision events for the observational baselines
//! * [`estimator`] — empirical pair frequencies, the estimated ancestor
//!   relation and full tree reconstruction
//! * [`baselines`] — collision- and temporal-order heuristics over
//!   privileged traces
//! * [`catalog`] — built-in environments, synthetic cascade variants and the
//!   baseline-separation scenario
//! * [`schedule`] / [`sweep`] — round-robin experiment generation and seeded
//!   CSV sweeps
//! * [`io`] — the text file formats shared with the command-line harness
//!
//! Seed-parallel work runs on rayon when the default `parallel` feature is
//! enabled and falls back to sequential execution without it; results are
//! identical either way.

pub mod baselines;
pub mod catalog;
pub mod error;
pub mod estimator;
pub mod exec;
pub mod graph;
pub mod io;
pub mod schedule;
pub mod scm;
pub mod seed;
pub mod sim;
pub mod sweep;

pub use baselines::{collision_as_influence, temporal_precedence, TraceDataset};
pub use error::{Error, Result};
pub use estimator::{
    estimate_ancestors, estimate_ancestors_strict, observational_evidence, reconstruct,
    reconstruct_strict, recovery_stats, AncestorEstimate, InterventionalDataset, PairStats,
    Reconstruction, RecoverySummary,
};
pub use graph::{
    break_cycles, compare_graphs, random_tree, transitive_closure, transitive_reduction,
    AncestorMatrix, CausalTree, Digraph, GraphMetrics, NodeId,
};
pub use schedule::{generate_dataset, round_robin_schedule};
pub use scm::{
    sample_complexity_bound, sample_episode, sample_episode_with_noise, CascadeModel, Episode,
    Intervention,
};
pub use sim::{
    simulate_trace, trace_to_episode, Collision, EdgeMechanism, EventTrace, MechanismKind,
    MechanizedModel,
};
pub use sweep::{run_sweep, run_sweep_sequential, RunRecord, SweepResult, SweepSpec, CSV_HEADER};
