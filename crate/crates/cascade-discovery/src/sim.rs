//! Discrete-event cascade simulator.
//!
//! Binds the cascade model's binary dynamics to activation times and
//! collision events so that purely observational heuristics can be run and
//! stressed with simultaneous, delayed and non-contact effects. The binary
//! projection of a trace is bit-for-bit the episode [`crate::scm::sample_episode`]
//! would produce for the same model, intervention and seed.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::scm::{sample_episode, CascadeModel, Episode, Intervention};

/// How an edge physically realises its trigger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MechanismKind {
    /// Visible contact between parent and child (emits a collision event).
    Contact,
    /// Remote effect, e.g. a button releasing a distant object; no collision
    /// is ever observed for this edge.
    NonContact,
}

/// Mechanism attached to one tree edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeMechanism {
    pub kind: MechanismKind,
    /// Time between parent activation and child activation; must be >= 0.
    pub delay: f64,
}

impl EdgeMechanism {
    pub fn contact(delay: f64) -> Self {
        Self {
            kind: MechanismKind::Contact,
            delay,
        }
    }

    pub fn non_contact(delay: f64) -> Self {
        Self {
            kind: MechanismKind::NonContact,
            delay,
        }
    }
}

/// A cascade model plus one mechanism per tree edge.
#[derive(Debug, Clone, PartialEq)]
pub struct MechanizedModel {
    model: CascadeModel,
    mechanisms: BTreeMap<(NodeId, NodeId), EdgeMechanism>,
}

impl MechanizedModel {
    /// The mechanism map must cover exactly the tree's edges.
    pub fn new(
        model: CascadeModel,
        mechanisms: BTreeMap<(NodeId, NodeId), EdgeMechanism>,
    ) -> Result<Self> {
        let edges = model.tree().edges();
        for &(p, c) in &edges {
            match mechanisms.get(&(p, c)) {
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "edge {} -> {} has no mechanism",
                        p + 1,
                        c + 1
                    )))
                }
                Some(m) if m.delay < 0.0 => {
                    return Err(Error::InvalidArgument(format!(
                        "edge {} -> {} has negative delay {}",
                        p + 1,
                        c + 1,
                        m.delay
                    )))
                }
                Some(_) => {}
            }
        }
        if mechanisms.len() != edges.len() {
            return Err(Error::InvalidArgument(
                "mechanism map contains entries for non-edges".into(),
            ));
        }
        Ok(Self { model, mechanisms })
    }

    /// Same mechanism on every edge.
    pub fn uniform(model: CascadeModel, mechanism: EdgeMechanism) -> Result<Self> {
        let mechanisms = model
            .tree()
            .edges()
            .into_iter()
            .map(|e| (e, mechanism))
            .collect();
        Self::new(model, mechanisms)
    }

    pub fn model(&self) -> &CascadeModel {
        &self.model
    }

    pub fn node_count(&self) -> usize {
        self.model.node_count()
    }

    pub fn mechanism(&self, parent: NodeId, child: NodeId) -> Option<&EdgeMechanism> {
        self.mechanisms.get(&(parent, child))
    }

    pub fn mechanisms(&self) -> &BTreeMap<(NodeId, NodeId), EdgeMechanism> {
        &self.mechanisms
    }
}

/// A contact event: `source` struck `target` at `time` (the instant the
/// target activated).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Collision {
    pub time: f64,
    pub source: NodeId,
    pub target: NodeId,
}

/// Timed record of one episode: per-node activation instants (absent for
/// inactive nodes) and all collision events in `(time, source, target)`
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct EventTrace {
    pub episode: Episode,
    pub activation_time: Vec<Option<f64>>,
    pub collisions: Vec<Collision>,
}

impl EventTrace {
    pub fn node_count(&self) -> usize {
        self.activation_time.len()
    }
}

/// Simulate one timed episode. Activations follow the cascade model exactly
/// (same noise semantics and seed derivation as [`sample_episode`]); an
/// active node's time is its parent's time plus the edge delay, with the
/// root at time 0. Contact edges whose child activated emit one collision at
/// the child's activation time.
pub fn simulate_trace(mm: &MechanizedModel, iv: Intervention, rng_seed: u64) -> Result<EventTrace> {
    let episode = sample_episode(mm.model(), iv, rng_seed)?;
    Ok(schedule_events(mm, episode))
}

/// As [`simulate_trace`] but with the exogenous draw fixed.
pub fn simulate_trace_with_noise(
    mm: &MechanizedModel,
    iv: Intervention,
    z: &[bool],
) -> Result<EventTrace> {
    let episode = crate::scm::sample_episode_with_noise(mm.model(), iv, z)?;
    Ok(schedule_events(mm, episode))
}

fn schedule_events(mm: &MechanizedModel, episode: Episode) -> EventTrace {
    let tree = mm.model().tree();
    let n = tree.node_count();
    let mut activation_time = vec![None; n];
    let mut collisions = Vec::new();
    for &j in tree.topological_order() {
        if !episode.active[j] {
            continue;
        }
        match tree.parent(j) {
            None => activation_time[j] = Some(0.0),
            Some(p) => {
                let parent_time = activation_time[p].expect("active node implies active parent");
                let mech = mm.mechanism(p, j).expect("mechanism covers every edge");
                let t = parent_time + mech.delay;
                activation_time[j] = Some(t);
                if mech.kind == MechanismKind::Contact {
                    collisions.push(Collision {
                        time: t,
                        source: p,
                        target: j,
                    });
                }
            }
        }
    }
    collisions.sort_by(|a, b| {
        a.time
            .total_cmp(&b.time)
            .then(a.source.cmp(&b.source))
            .then(a.target.cmp(&b.target))
    });
    EventTrace {
        episode,
        activation_time,
        collisions,
    }
}

/// Binary projection of a trace: active iff an activation time is present.
pub fn trace_to_episode(trace: &EventTrace) -> Episode {
    Episode {
        intervention: trace.episode.intervention,
        active: trace.activation_time.iter().map(|t| t.is_some()).collect(),
    }
}
