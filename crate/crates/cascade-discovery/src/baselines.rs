//! Observational heuristics over privileged event traces.
//!
//! Both baselines see perfect collision detection and exact activation
//! times, yet operate without interventions. They succeed on fully-contact,
//! strictly staggered cascades and break down exactly where causal ambiguity
//! lives: simultaneous activations, delayed releases and non-contact edges.

use crate::error::{Error, Result};
use crate::graph::{Digraph, NodeId};
use crate::sim::EventTrace;

/// A set of observational traces over a shared node count.
#[derive(Debug, Clone)]
pub struct TraceDataset {
    n: usize,
    traces: Vec<EventTrace>,
}

impl TraceDataset {
    pub fn new(n: usize, traces: Vec<EventTrace>) -> Result<Self> {
        for (k, t) in traces.iter().enumerate() {
            if t.node_count() != n {
                return Err(Error::ShapeMismatch {
                    left: t.node_count(),
                    right: n,
                });
            }
            if t.episode.intervention.target().is_some() {
                return Err(Error::InvalidArgument(format!(
                    "trace {k} is interventional; baselines consume observational traces only"
                )));
            }
        }
        Ok(Self { n, traces })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn traces(&self) -> &[EventTrace] {
        &self.traces
    }
}

/// Add an edge `source -> target` for every observed collision that struck a
/// not-yet-active target. Non-contact edges can never be discovered this way.
pub fn collision_as_influence(data: &TraceDataset) -> Digraph {
    let mut g = Digraph::new(data.n);
    for trace in &data.traces {
        for c in &trace.collisions {
            let struck_inactive = match trace.activation_time[c.target] {
                Some(t) => t >= c.time,
                None => false,
            };
            if struck_inactive && c.source != c.target {
                g.add_edge(c.source, c.target);
            }
        }
    }
    g
}

/// Assign each activated node a parent from temporal order.
///
/// Nodes are processed in `(activation time, index)` order. A node whose
/// activation coincides with a collision targeting it takes that collision's
/// source as parent. A node activated without a matching collision (a
/// non-contact trigger) is attributed to the target of the most recent
/// collision strictly before its activation — ties on collision time broken
/// by lowest target then source index — falling back to the most recently
/// activated other node when no collision precedes it. The first-activated
/// node gets no parent. Edges are unioned across traces.
pub fn temporal_precedence(data: &TraceDataset) -> Digraph {
    let mut g = Digraph::new(data.n);
    for trace in &data.traces {
        let mut activated: Vec<(f64, NodeId)> = trace
            .activation_time
            .iter()
            .enumerate()
            .filter_map(|(j, t)| t.map(|t| (t, j)))
            .collect();
        activated.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        for (k, &(tj, j)) in activated.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let contact_parent = trace
                .collisions
                .iter()
                .find(|c| c.target == j && c.time == tj)
                .map(|c| c.source);
            let parent = contact_parent.or_else(|| {
                // most recent collision strictly before tj
                trace
                    .collisions
                    .iter()
                    .filter(|c| c.time < tj)
                    .max_by(|a, b| {
                        a.time
                            .total_cmp(&b.time)
                            .then(b.target.cmp(&a.target))
                            .then(b.source.cmp(&a.source))
                    })
                    .map(|c| c.target)
                    .or_else(|| {
                        // no collision yet: most recently activated other node
                        activated[..k]
                            .iter()
                            .rev()
                            .map(|&(_, v)| v)
                            .max_by(|&a, &b| {
                                trace.activation_time[a]
                                    .unwrap()
                                    .total_cmp(&trace.activation_time[b].unwrap())
                                    .then(b.cmp(&a))
                            })
                    })
            });
            if let Some(p) = parent {
                if p != j {
                    g.add_edge(p, j);
                }
            }
        }
    }
    g
}
