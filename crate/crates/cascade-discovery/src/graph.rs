//! Directed-graph data structures and algorithms: rooted trees, ancestor
//! relations, transitive closure/reduction, cycle breaking and structural
//! comparison metrics.
//!
//! Node indices are 0-based everywhere inside the library; the text file
//! formats and log output use 1-based indices (see [`crate::io`]).

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Index of a node in `[0, n)`.
pub type NodeId = usize;

fn check_node(index: NodeId, n: usize) -> Result<()> {
    if index < n {
        Ok(())
    } else {
        Err(Error::InvalidNode { index, n })
    }
}

/// A directed tree with a single root: every node has at most one direct
/// trigger, and every node is reachable from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalTree {
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    root: NodeId,
    /// Nodes in breadth-first order from the root; parents precede children.
    topo: Vec<NodeId>,
}

impl CausalTree {
    /// Build a tree from a parent map. Exactly one entry must be `None`.
    pub fn from_parents(parent: Vec<Option<NodeId>>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::InvalidTree("empty node set".into()));
        }
        let mut root = None;
        for (j, &p) in parent.iter().enumerate() {
            match p {
                None => {
                    if root.replace(j).is_some() {
                        return Err(Error::InvalidTree("more than one root".into()));
                    }
                }
                Some(p) => {
                    check_node(p, n)?;
                    if p == j {
                        return Err(Error::InvalidTree(format!("self-loop at node {j}")));
                    }
                }
            }
        }
        let root = root.ok_or_else(|| Error::InvalidTree("no root".into()))?;

        let mut children = vec![Vec::new(); n];
        for (j, &p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[p].push(j);
            }
        }
        for c in &mut children {
            c.sort_unstable();
        }

        // breadth-first order; also proves every node is reachable (no cycle
        // detached from the root can be visited)
        let mut topo = Vec::with_capacity(n);
        let mut queue = std::collections::VecDeque::from([root]);
        let mut seen = vec![false; n];
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            topo.push(v);
            for &c in &children[v] {
                if seen[c] {
                    return Err(Error::InvalidTree(format!("node {c} visited twice")));
                }
                seen[c] = true;
                queue.push_back(c);
            }
        }
        if topo.len() != n {
            return Err(Error::InvalidTree(
                "not all nodes reachable from the root".into(),
            ));
        }

        Ok(Self {
            parent,
            children,
            root,
            topo,
        })
    }

    /// Build a tree over `n` nodes from `(parent, child)` edges (0-based).
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTree("empty node set".into()));
        }
        let mut parent = vec![None; n];
        for &(p, c) in edges {
            check_node(p, n)?;
            check_node(c, n)?;
            if parent[c].is_some() {
                return Err(Error::InvalidTree(format!(
                    "node {c} has more than one parent"
                )));
            }
            parent[c] = Some(p);
        }
        Self::from_parents(parent)
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, j: NodeId) -> Option<NodeId> {
        self.parent[j]
    }

    pub fn children(&self, i: NodeId) -> &[NodeId] {
        &self.children[i]
    }

    /// Nodes in breadth-first order from the root (parents before children).
    pub fn topological_order(&self) -> &[NodeId] {
        &self.topo
    }

    /// Edges `(parent, child)` in ascending order.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut e: Vec<_> = self
            .parent
            .iter()
            .enumerate()
            .filter_map(|(c, &p)| p.map(|p| (p, c)))
            .collect();
        e.sort_unstable();
        e
    }

    /// All nodes reachable from `i` along child edges, excluding `i` itself.
    pub fn descendants(&self, i: NodeId) -> Result<BTreeSet<NodeId>> {
        check_node(i, self.node_count())?;
        let mut out = BTreeSet::new();
        let mut stack: Vec<NodeId> = self.children[i].to_vec();
        while let Some(v) = stack.pop() {
            if out.insert(v) {
                stack.extend_from_slice(&self.children[v]);
            }
        }
        Ok(out)
    }

    /// Nodes on the unique root-to-`j` path, excluding `j` itself.
    pub fn ancestors(&self, j: NodeId) -> Result<BTreeSet<NodeId>> {
        check_node(j, self.node_count())?;
        let mut out = BTreeSet::new();
        let mut cur = self.parent[j];
        while let Some(p) = cur {
            out.insert(p);
            cur = self.parent[p];
        }
        Ok(out)
    }

    /// Number of nodes on the root-to-`j` path including `j` (root depth is 1).
    pub fn depth(&self, j: NodeId) -> Result<usize> {
        Ok(self.ancestors(j)?.len() + 1)
    }

    /// The full ancestor relation: `a(i, j) = true` iff `j` is a descendant
    /// of `i`.
    pub fn ancestor_matrix(&self) -> AncestorMatrix {
        let n = self.node_count();
        let mut m = AncestorMatrix::new(n);
        // walk up from each node; the tree has a unique path to the root
        for j in 0..n {
            let mut cur = self.parent[j];
            while let Some(p) = cur {
                m.set(p, j, true);
                cur = self.parent[p];
            }
        }
        m
    }

    pub fn to_digraph(&self) -> Digraph {
        let mut g = Digraph::new(self.node_count());
        for (p, c) in self.edges() {
            g.add_edge(p, c);
        }
        g
    }
}

/// A directed graph over `n` nodes without self-loops. Estimated graphs and
/// baseline outputs live here; unlike [`CausalTree`] it may contain cycles
/// and multi-parent nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    edges: BTreeSet<(NodeId, NodeId)>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = Self::new(n);
        for (i, j) in edges {
            check_node(i, n)?;
            check_node(j, n)?;
            if i == j {
                return Err(Error::InvalidArgument(format!("self-loop at node {i}")));
            }
            g.edges.insert((i, j));
        }
        Ok(g)
    }

    /// Insert an edge; panics on out-of-range indices or self-loops.
    pub fn add_edge(&mut self, i: NodeId, j: NodeId) {
        assert!(i < self.n && j < self.n, "edge ({i}, {j}) out of range");
        assert_ne!(i, j, "self-loop at node {i}");
        self.edges.insert((i, j));
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, i: NodeId, j: NodeId) -> bool {
        self.edges.contains(&(i, j))
    }

    /// Edges in ascending `(source, target)` order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.edges
    }
}

/// Boolean ancestor relation with a fixed all-false diagonal:
/// `a(i, j)` states that `j` is (believed to be) a descendant of `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AncestorMatrix {
    n: usize,
    a: Vec<bool>,
}

impl AncestorMatrix {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            a: vec![false; n * n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: NodeId, j: NodeId) -> bool {
        self.a[i * self.n + j]
    }

    /// Set an off-diagonal entry. The diagonal is fixed at `false`.
    pub fn set(&mut self, i: NodeId, j: NodeId, value: bool) {
        assert!(i < self.n && j < self.n, "entry ({i}, {j}) out of range");
        assert_ne!(i, j, "diagonal entries are fixed at false");
        self.a[i * self.n + j] = value;
    }

    /// Ordered pairs `(i, j)` with `a(i, j) = true`, row-major.
    pub fn pairs(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.a[i * self.n + j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn count(&self) -> usize {
        self.a.iter().filter(|&&b| b).count()
    }

    /// True when the relation, read as a digraph, has no directed cycle.
    pub fn is_acyclic(&self) -> bool {
        closure_with_diagonal(self).1
    }
}

/// Warshall closure of the relation; returns the closure bits (diagonal
/// included) and whether the relation is acyclic.
fn closure_with_diagonal(rel: &AncestorMatrix) -> (Vec<bool>, bool) {
    let n = rel.node_count();
    let mut c = rel.a.clone();
    for k in 0..n {
        for i in 0..n {
            if c[i * n + k] {
                for j in 0..n {
                    if c[k * n + j] {
                        c[i * n + j] = true;
                    }
                }
            }
        }
    }
    let acyclic = (0..n).all(|i| !c[i * n + i]);
    (c, acyclic)
}

/// Minimal edge set whose transitive closure equals the closure of `rel`.
///
/// For a relation consistent with a tree this returns exactly the tree
/// edges. The input must be acyclic; run [`break_cycles`] first otherwise.
pub fn transitive_reduction(rel: &AncestorMatrix) -> Result<Digraph> {
    let n = rel.node_count();
    let (c, acyclic) = closure_with_diagonal(rel);
    if !acyclic {
        return Err(Error::CyclicRelation);
    }
    let mut g = Digraph::new(n);
    for i in 0..n {
        for j in 0..n {
            if i == j || !c[i * n + j] {
                continue;
            }
            let redundant = (0..n).any(|k| k != i && k != j && c[i * n + k] && c[k * n + j]);
            if !redundant {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

/// Transitive closure of the relation as a new [`AncestorMatrix`].
/// Errors on cyclic input (the closure of a cyclic relation would need
/// diagonal entries).
pub fn transitive_closure(rel: &AncestorMatrix) -> Result<AncestorMatrix> {
    let n = rel.node_count();
    let (c, acyclic) = closure_with_diagonal(rel);
    if !acyclic {
        return Err(Error::CyclicRelation);
    }
    let mut m = AncestorMatrix::new(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && c[i * n + j] {
                m.set(i, j, true);
            }
        }
    }
    Ok(m)
}

/// Remove cycles from a relation.
///
/// First deletes `a(i, j)` for every pair in `evidence` (pairs witnessed
/// active-`j`-while-inactive-`i`, which rules out `j` being downstream of
/// `i`). Any remaining cycle is then broken deterministically by deleting,
/// among the cycle's edges, the one whose source has the highest node index.
pub fn break_cycles(
    rel: &AncestorMatrix,
    evidence: Option<&BTreeSet<(NodeId, NodeId)>>,
) -> AncestorMatrix {
    let mut m = rel.clone();
    let n = m.node_count();
    if let Some(evidence) = evidence {
        for &(i, j) in evidence {
            if i < n && j < n && i != j {
                m.set(i, j, false);
            }
        }
    }
    while let Some(cycle_edges) = find_cycle(&m) {
        let &(i, j) = cycle_edges
            .iter()
            .max_by_key(|&&(src, _)| src)
            .expect("cycle has at least one edge");
        m.set(i, j, false);
    }
    m
}

/// Locate one directed cycle, returned as its edge list, or `None` if the
/// relation is acyclic. Deterministic: DFS from node 0 upward, neighbours in
/// ascending order.
fn find_cycle(m: &AncestorMatrix) -> Option<Vec<(NodeId, NodeId)>> {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let n = m.node_count();
    let mut color = vec![WHITE; n];
    // iterative DFS; next[v] is the next child index to try at v
    let mut next = vec![0usize; n];
    let mut stack: Vec<NodeId> = Vec::new();
    for start in 0..n {
        if color[start] != WHITE {
            continue;
        }
        color[start] = GRAY;
        stack.push(start);
        while let Some(&v) = stack.last() {
            let mut pushed = false;
            while next[v] < n {
                let w = next[v];
                next[v] += 1;
                if !m.get(v, w) {
                    continue;
                }
                if color[w] == GRAY {
                    // found: w is on the current stack; slice out the loop
                    let pos = stack.iter().position(|&u| u == w).unwrap();
                    let mut nodes: Vec<NodeId> = stack[pos..].to_vec();
                    nodes.push(w);
                    return Some(nodes.windows(2).map(|p| (p[0], p[1])).collect());
                }
                if color[w] == WHITE {
                    color[w] = GRAY;
                    stack.push(w);
                    pushed = true;
                    break;
                }
            }
            if !pushed && next[v] >= n {
                color[v] = BLACK;
                stack.pop();
            }
        }
    }
    None
}

/// Structural comparison of an estimated digraph against a ground-truth tree.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphMetrics {
    /// Directed-edge precision in [0, 1]; 1 when the estimate has no edges.
    pub precision: f64,
    /// Directed-edge recall in [0, 1]; 1 when the truth has no edges.
    pub recall: f64,
    /// Harmonic mean of precision and recall (0 when both are 0).
    pub f1: f64,
    /// Directed structural Hamming distance: insertions + deletions +
    /// reversals, a reversed pair counted once.
    pub shd: usize,
    /// Symmetric difference of the undirected edge sets.
    pub skeleton_shd: usize,
}

/// Score `estimate` against the ground-truth tree `truth`.
pub fn compare_graphs(estimate: &Digraph, truth: &CausalTree) -> Result<GraphMetrics> {
    let n = truth.node_count();
    if estimate.node_count() != n {
        return Err(Error::ShapeMismatch {
            left: estimate.node_count(),
            right: n,
        });
    }
    let truth_edges: BTreeSet<(NodeId, NodeId)> = truth.edges().into_iter().collect();
    let est_edges = estimate.edge_set();

    let matched = est_edges.intersection(&truth_edges).count();
    let precision = if est_edges.is_empty() {
        1.0
    } else {
        matched as f64 / est_edges.len() as f64
    };
    let recall = if truth_edges.is_empty() {
        1.0
    } else {
        matched as f64 / truth_edges.len() as f64
    };
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };

    let mut shd = 0usize;
    let mut skeleton_shd = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            let t_fwd = truth_edges.contains(&(i, j));
            let t_rev = truth_edges.contains(&(j, i));
            let e_fwd = est_edges.contains(&(i, j));
            let e_rev = est_edges.contains(&(j, i));
            if (t_fwd, t_rev) == (e_fwd, e_rev) {
                continue;
            }
            let t_cnt = t_fwd as usize + t_rev as usize;
            let e_cnt = e_fwd as usize + e_rev as usize;
            if t_cnt == 1 && e_cnt == 1 {
                // single edge present on both sides but oriented differently
                shd += 1;
            } else {
                shd += (t_fwd != e_fwd) as usize + (t_rev != e_rev) as usize;
            }
            if (t_cnt > 0) != (e_cnt > 0) {
                skeleton_shd += 1;
            }
        }
    }

    Ok(GraphMetrics {
        precision,
        recall,
        f1,
        shd,
        skeleton_shd,
    })
}

/// Uniform random rooted tree: nodes are placed in a random order and each
/// non-first node picks its parent uniformly among the already-placed ones.
/// Deterministic per seed.
pub fn random_tree(n: usize, rng_seed: u64) -> Result<CausalTree> {
    if n == 0 {
        return Err(Error::InvalidArgument("node count must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut order: Vec<NodeId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut parent = vec![None; n];
    for k in 1..n {
        let p = order[rng.gen_range(0..k)];
        parent[order[k]] = Some(p);
    }
    CausalTree::from_parents(parent)
}
