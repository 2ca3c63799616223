//! The monotone cascade structural causal model.
//!
//! Each node carries a binary activation variable. A node stays inactive
//! whenever its parent is inactive; otherwise it activates according to an
//! independent Bernoulli draw. Blocking a node clamps it (and therefore its
//! whole downstream subtree) to inactive while leaving every other mechanism
//! untouched.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{CausalTree, NodeId};

/// A cascade tree plus per-node failure probabilities for the exogenous
/// activation draws. Node `j` fires with probability `1 - failure[j]` given
/// its parent fired; failure must stay strictly below 1. Failure is the
/// stored representation so file formats round-trip exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeModel {
    tree: CausalTree,
    failure: Vec<f64>,
}

impl CascadeModel {
    /// Build from per-node success probabilities in `(0, 1]`.
    pub fn new(tree: CausalTree, success: Vec<f64>) -> Result<Self> {
        if success.len() != tree.node_count() {
            return Err(Error::InvalidArgument(format!(
                "success vector has length {} for {} nodes",
                success.len(),
                tree.node_count()
            )));
        }
        for (j, &s) in success.iter().enumerate() {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "success probability of node {j} is {s}; must lie in (0, 1]"
                )));
            }
        }
        let failure = success.iter().map(|&s| 1.0 - s).collect();
        Ok(Self { tree, failure })
    }

    /// Build from per-node failure probabilities in `[0, 1)`.
    pub fn with_failures(tree: CausalTree, failure: Vec<f64>) -> Result<Self> {
        if failure.len() != tree.node_count() {
            return Err(Error::InvalidArgument(format!(
                "failure vector has length {} for {} nodes",
                failure.len(),
                tree.node_count()
            )));
        }
        for (j, &f) in failure.iter().enumerate() {
            if !(0.0..1.0).contains(&f) {
                return Err(Error::InvalidArgument(format!(
                    "failure probability of node {j} is {f}; must lie in [0, 1)"
                )));
            }
        }
        Ok(Self { tree, failure })
    }

    /// Uniform per-node failure probability `p` in `[0, 1)`.
    pub fn with_uniform_failure(tree: CausalTree, failure: f64) -> Result<Self> {
        let n = tree.node_count();
        Self::with_failures(tree, vec![failure; n])
    }

    pub fn tree(&self) -> &CausalTree {
        &self.tree
    }

    pub fn node_count(&self) -> usize {
        self.tree.node_count()
    }

    pub fn success_of(&self, j: NodeId) -> f64 {
        1.0 - self.failure[j]
    }

    pub fn failure(&self, j: NodeId) -> f64 {
        self.failure[j]
    }

    /// Exact probability that `node` activates while `blocked` is held
    /// inactive. Zero iff `node` lies downstream of `blocked`; otherwise the
    /// product of success probabilities along the root-to-`node` path, which
    /// a blocking intervention elsewhere cannot touch.
    pub fn activation_probability(&self, blocked: NodeId, node: NodeId) -> Result<f64> {
        let n = self.node_count();
        if blocked >= n {
            return Err(Error::InvalidNode { index: blocked, n });
        }
        if node >= n {
            return Err(Error::InvalidNode { index: node, n });
        }
        if blocked == node {
            return Err(Error::InvalidArgument(
                "blocked node and observed node must differ".into(),
            ));
        }
        let ancestors = self.tree.ancestors(node)?;
        if ancestors.contains(&blocked) {
            // node is a descendant of blocked
            return Ok(0.0);
        }
        let mut p = self.success_of(node);
        for &a in &ancestors {
            p *= self.success_of(a);
        }
        Ok(p)
    }

    /// Smallest activation probability over ordered pairs `(blocked, node)`
    /// where `node` is not downstream of `blocked`. This is the quantity that
    /// governs how fast spurious ancestor relations die out with more
    /// interventions.
    pub fn min_nondescendant_activation(&self) -> Result<f64> {
        let n = self.node_count();
        if n < 2 {
            return Err(Error::InvalidArgument(
                "need at least two nodes for blocked/observed pairs".into(),
            ));
        }
        let mut min = f64::INFINITY;
        for blocked in 0..n {
            let downstream = self.tree.descendants(blocked)?;
            for node in 0..n {
                if node == blocked || downstream.contains(&node) {
                    continue;
                }
                let p = self.activation_probability(blocked, node)?;
                if p < min {
                    min = p;
                }
            }
        }
        if min.is_infinite() {
            // only possible for a 1-node tree, excluded above
            return Err(Error::InvalidArgument(
                "no valid blocked/observed pair".into(),
            ));
        }
        Ok(min)
    }
}

/// What happens to the system in one execution: either it runs untouched or
/// a single node is held inactive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Intervention {
    Observational,
    Block(NodeId),
}

impl Intervention {
    pub fn target(&self) -> Option<NodeId> {
        match *self {
            Intervention::Observational => None,
            Intervention::Block(i) => Some(i),
        }
    }
}

/// One execution record: the applied intervention and the final activation
/// vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Episode {
    pub intervention: Intervention,
    pub active: Vec<bool>,
}

impl Episode {
    pub fn node_count(&self) -> usize {
        self.active.len()
    }

    pub fn is_active(&self, j: NodeId) -> bool {
        self.active[j]
    }
}

fn check_target(iv: Intervention, n: usize) -> Result<()> {
    if let Some(i) = iv.target() {
        if i >= n {
            return Err(Error::InvalidNode { index: i, n });
        }
    }
    Ok(())
}

/// Evaluate the cascade for a fixed exogenous draw `z`.
fn evaluate(model: &CascadeModel, iv: Intervention, z: &[bool]) -> Episode {
    let tree = model.tree();
    let mut active = vec![false; tree.node_count()];
    let target = iv.target();
    for &j in tree.topological_order() {
        if target == Some(j) {
            // mechanism replaced: stays inactive regardless of z and parent
            continue;
        }
        let parent_active = tree.parent(j).is_none_or(|p| active[p]);
        active[j] = parent_active && z[j];
    }
    Episode {
        intervention: iv,
        active,
    }
}

/// Sample one episode. The exogenous draw for every node is taken in node
/// order from a generator seeded with `rng_seed`, so identical
/// `(model, intervention, seed)` triples always yield identical episodes,
/// and episodes with the same seed share their noise across interventions.
pub fn sample_episode(model: &CascadeModel, iv: Intervention, rng_seed: u64) -> Result<Episode> {
    check_target(iv, model.node_count())?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let z: Vec<bool> = (0..model.node_count())
        .map(|j| rng.gen::<f64>() < model.success_of(j))
        .collect();
    Ok(evaluate(model, iv, &z))
}

/// Sample one episode with the exogenous draw fixed to `z`. Useful for
/// coupling interventional and observational runs on shared noise.
pub fn sample_episode_with_noise(
    model: &CascadeModel,
    iv: Intervention,
    z: &[bool],
) -> Result<Episode> {
    check_target(iv, model.node_count())?;
    if z.len() != model.node_count() {
        return Err(Error::InvalidArgument(format!(
            "noise vector has length {} for {} nodes",
            z.len(),
            model.node_count()
        )));
    }
    Ok(evaluate(model, iv, z))
}

/// Interventions per object sufficient for the estimated ancestor relation
/// to be exact with probability at least `1 - delta`:
/// `ceil((ln(n(n-1)) + ln(1/delta)) / q_min)`.
pub fn sample_complexity_bound(q_min: f64, n: usize, delta: f64) -> Result<u64> {
    if !(q_min > 0.0 && q_min <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "q_min {q_min} must lie in (0, 1]"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "delta {delta} must lie in (0, 1)"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "node count {n} must be at least 2"
        )));
    }
    let pairs = (n * (n - 1)) as f64;
    let value = (pairs.ln() + (1.0 / delta).ln()) / q_min;
    Ok(value.ceil() as u64)
}
