//! Built-in environment catalog: the six chain-reaction environments, the
//! two synthetic cascade variants used for the finite-sample experiments,
//! and the baseline-separation scenario.
//!
//! Edge lists are written 1-based, exactly as the environment solutions are
//! listed, and converted once at construction.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::CausalTree;
use crate::scm::CascadeModel;
use crate::sim::{EdgeMechanism, MechanizedModel};

/// One named ground-truth environment.
pub struct EnvEntry {
    pub name: &'static str,
    pub node_count: usize,
    /// `(parent, child)` pairs, 1-based.
    pub edges: &'static [(usize, usize)],
    pub description: &'static str,
}

pub const ENVIRONMENTS: &[EnvEntry] = &[
    EnvEntry {
        name: "minimal_chain",
        node_count: 4,
        edges: &[(3, 4), (4, 1), (1, 2)],
        description: "short linear cascade with four objects",
    },
    EnvEntry {
        name: "sequential_chain",
        node_count: 11,
        edges: &[
            (3, 9),
            (9, 6),
            (6, 8),
            (8, 4),
            (4, 7),
            (7, 2),
            (2, 1),
            (1, 5),
            (5, 10),
            (10, 11),
        ],
        description: "longer linear system with eleven objects",
    },
    EnvEntry {
        name: "parallel_triggers",
        node_count: 12,
        edges: &[
            (2, 10),
            (10, 5),
            (5, 9),
            (9, 8),
            (8, 1),
            (1, 11),
            (10, 6),
            (6, 3),
            (3, 4),
            (4, 7),
            (7, 12),
        ],
        description: "parallel activations cause simultaneous downstream effects",
    },
    EnvEntry {
        name: "intertwined_mechanisms",
        node_count: 13,
        edges: &[
            (6, 3),
            (3, 7),
            (7, 5),
            (3, 12),
            (12, 10),
            (10, 2),
            (2, 13),
            (13, 9),
            (9, 8),
            (8, 4),
            (4, 11),
            (11, 1),
        ],
        description: "concurrent interactions in different regions working jointly",
    },
    EnvEntry {
        name: "linear_slot_machine",
        node_count: 16,
        edges: &[
            (11, 9),
            (9, 13),
            (13, 1),
            (1, 4),
            (4, 2),
            (2, 7),
            (7, 6),
            (6, 3),
            (3, 15),
            (15, 16),
            (16, 10),
            (10, 12),
            (12, 14),
            (14, 5),
            (5, 8),
        ],
        description: "cascade with non-contact effects via button releases",
    },
    EnvEntry {
        name: "large_slot_machine",
        node_count: 24,
        edges: &[
            (18, 9),
            (9, 1),
            (1, 12),
            (12, 23),
            (23, 21),
            (21, 13),
            (13, 17),
            (9, 22),
            (22, 8),
            (9, 15),
            (15, 6),
            (6, 14),
            (14, 20),
            (20, 3),
            (3, 24),
            (24, 5),
            (5, 19),
            (19, 11),
            (11, 16),
            (16, 10),
            (10, 4),
            (4, 7),
            (7, 2),
        ],
        description: "larger slot-machine variant with multiple concurrent branches",
    },
];

/// Synthetic cascade variant: an environment graph with a uniform per-node
/// failure probability baked in.
pub struct SyntheticEntry {
    pub name: &'static str,
    pub base: &'static str,
    pub failure: f64,
}

pub const SYNTHETIC: &[SyntheticEntry] = &[
    SyntheticEntry {
        name: "synthetic_parallel_triggers_0.1",
        base: "parallel_triggers",
        failure: 0.1,
    },
    SyntheticEntry {
        name: "synthetic_large_slot_machine_0.1",
        base: "large_slot_machine",
        failure: 0.1,
    },
];

/// Scenario names accepted by [`scenario`].
pub const SCENARIOS: &[(&str, &str)] = &[(
    "parallel_triggers_simultaneous",
    "equal branch delays plus two non-contact releases; defeats observational heuristics",
)];

fn build_tree(entry: &EnvEntry) -> CausalTree {
    let edges0: Vec<(usize, usize)> = entry.edges.iter().map(|&(p, c)| (p - 1, c - 1)).collect();
    CausalTree::from_edges(entry.node_count, &edges0).expect("catalog edge lists are valid trees")
}

/// Ground-truth tree of a named environment.
pub fn tree(name: &str) -> Option<CausalTree> {
    ENVIRONMENTS.iter().find(|e| e.name == name).map(build_tree)
}

/// A named model: environment names give the noiseless cascade; synthetic
/// names carry their uniform failure probability.
pub fn model(name: &str) -> Option<CascadeModel> {
    if let Some(t) = tree(name) {
        return Some(CascadeModel::with_uniform_failure(t, 0.0).expect("0 is a valid failure"));
    }
    let s = SYNTHETIC.iter().find(|s| s.name == name)?;
    let t = tree(s.base)?;
    Some(CascadeModel::with_uniform_failure(t, s.failure).expect("valid catalog failure"))
}

/// Resolve a name to a tree, also accepting synthetic names.
pub fn any_tree(name: &str) -> Option<CausalTree> {
    model(name).map(|m| m.tree().clone())
}

/// The baseline-separation scenario: the parallel-triggers system with equal
/// delays on both branches (the two buttons fire simultaneously) and the two
/// final releases realised without contact. The cascade itself is noiseless,
/// so the remaining ambiguity is structural rather than statistical.
pub fn scenario(name: &str) -> Option<MechanizedModel> {
    if name != "parallel_triggers_simultaneous" {
        return None;
    }
    let t = tree("parallel_triggers").expect("catalog entry exists");
    let model = CascadeModel::with_uniform_failure(t, 0.0).expect("0 is a valid failure");
    let mut mechanisms = BTreeMap::new();
    for (p, c) in model.tree().edges() {
        // 1-based edges (1, 11) and (7, 12) are the remote button releases
        let mech = if (p + 1, c + 1) == (1, 11) || (p + 1, c + 1) == (7, 12) {
            EdgeMechanism::non_contact(2.0)
        } else {
            EdgeMechanism::contact(1.0)
        };
        mechanisms.insert((p, c), mech);
    }
    Some(MechanizedModel::new(model, mechanisms).expect("mechanisms cover all edges"))
}

/// Resolve any catalog name (environment, synthetic or scenario base model).
pub fn resolve_model(name: &str) -> Result<CascadeModel> {
    model(name).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unknown catalog model '{name}'; run the catalog command for the list"
        ))
    })
}
