//! Text file formats. All node indices in files are 1-based; `#` starts a
//! comment and blank lines are ignored.
//!
//! * graph: `N <n>` header, then `<parent> <child>` edge lines
//!   (a tree has exactly `n - 1` of them)
//! * model: graph lines plus `P <node> <failure>` or `P * <failure>`
//! * scenario: model lines plus `M <parent> <child> <contact|noncontact> <delay>`
//! * dataset: `N <n>` header, then `<target|-> <bits>` episode lines,
//!   e.g. `2 0001` and `- 0101`
//! * trace dump: per trace `N <n>`, `I <target|->`, `A <node> <time>` and
//!   `C <time> <source> <target>` lines

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::estimator::InterventionalDataset;
use crate::graph::{CausalTree, Digraph, NodeId};
use crate::scm::{CascadeModel, Episode, Intervention};
use crate::sim::{Collision, EdgeMechanism, EventTrace, MechanismKind, MechanizedModel};

fn fmt_err(line_no: usize, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("line {line_no}: {msg}"))
}

/// Strip comments and blank lines, keeping 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((k + 1, line))
        }
    })
}

fn parse_node_1based(tok: &str, n: usize, line_no: usize) -> Result<NodeId> {
    let v: usize = tok
        .parse()
        .map_err(|_| fmt_err(line_no, format!("bad node index '{tok}'")))?;
    if v == 0 || v > n {
        return Err(fmt_err(
            line_no,
            format!("node index {v} out of range 1..={n}"),
        ));
    }
    Ok(v - 1)
}

struct RawGraphFile {
    n: usize,
    edges: Vec<(NodeId, NodeId)>,
    /// `P` lines: None key is the `*` wildcard.
    failures: Vec<(Option<NodeId>, f64)>,
    mechanisms: Vec<((NodeId, NodeId), EdgeMechanism)>,
}

fn parse_raw(text: &str) -> Result<RawGraphFile> {
    let mut n = None;
    let mut edges = Vec::new();
    let mut failures = Vec::new();
    let mut mechanisms = Vec::new();
    for (line_no, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "N" => {
                if n.is_some() {
                    return Err(fmt_err(line_no, "duplicate N header"));
                }
                if toks.len() != 2 {
                    return Err(fmt_err(line_no, "expected 'N <count>'"));
                }
                let v: usize = toks[1]
                    .parse()
                    .map_err(|_| fmt_err(line_no, "bad node count"))?;
                if v == 0 {
                    return Err(fmt_err(line_no, "node count must be >= 1"));
                }
                n = Some(v);
            }
            "P" => {
                let n = n.ok_or_else(|| fmt_err(line_no, "P line before N header"))?;
                if toks.len() != 3 {
                    return Err(fmt_err(line_no, "expected 'P <node|*> <failure>'"));
                }
                let node = if toks[1] == "*" {
                    None
                } else {
                    Some(parse_node_1based(toks[1], n, line_no)?)
                };
                let f: f64 = toks[2]
                    .parse()
                    .map_err(|_| fmt_err(line_no, "bad failure probability"))?;
                if !(0.0..1.0).contains(&f) {
                    return Err(fmt_err(
                        line_no,
                        format!("failure probability {f} must lie in [0, 1)"),
                    ));
                }
                failures.push((node, f));
            }
            "M" => {
                let n = n.ok_or_else(|| fmt_err(line_no, "M line before N header"))?;
                if toks.len() != 5 {
                    return Err(fmt_err(
                        line_no,
                        "expected 'M <parent> <child> <contact|noncontact> <delay>'",
                    ));
                }
                let p = parse_node_1based(toks[1], n, line_no)?;
                let c = parse_node_1based(toks[2], n, line_no)?;
                let kind = match toks[3] {
                    "contact" => MechanismKind::Contact,
                    "noncontact" => MechanismKind::NonContact,
                    other => {
                        return Err(fmt_err(
                            line_no,
                            format!("unknown mechanism kind '{other}'"),
                        ))
                    }
                };
                let delay: f64 = toks[4].parse().map_err(|_| fmt_err(line_no, "bad delay"))?;
                if delay < 0.0 {
                    return Err(fmt_err(line_no, "delay must be >= 0"));
                }
                mechanisms.push(((p, c), EdgeMechanism { kind, delay }));
            }
            _ => {
                let n = n.ok_or_else(|| fmt_err(line_no, "edge line before N header"))?;
                if toks.len() != 2 {
                    return Err(fmt_err(line_no, "expected '<parent> <child>'"));
                }
                let p = parse_node_1based(toks[0], n, line_no)?;
                let c = parse_node_1based(toks[1], n, line_no)?;
                edges.push((p, c));
            }
        }
    }
    let n = n.ok_or_else(|| Error::Format("missing 'N <count>' header".into()))?;
    Ok(RawGraphFile {
        n,
        edges,
        failures,
        mechanisms,
    })
}

/// Parse a graph file that must describe a rooted tree.
pub fn parse_tree(text: &str) -> Result<CausalTree> {
    let raw = parse_raw(text)?;
    CausalTree::from_edges(raw.n, &raw.edges)
}

/// Parse a graph file as a general digraph (estimates need not be trees).
pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let raw = parse_raw(text)?;
    Digraph::from_edges(raw.n, raw.edges)
}

/// Parse a model file: tree plus failure lines (absent lines mean 0).
pub fn parse_model(text: &str) -> Result<CascadeModel> {
    let raw = parse_raw(text)?;
    let tree = CausalTree::from_edges(raw.n, &raw.edges)?;
    let mut failure = vec![0.0f64; raw.n];
    for &(node, f) in &raw.failures {
        match node {
            None => failure.iter_mut().for_each(|x| *x = f),
            Some(j) => failure[j] = f,
        }
    }
    CascadeModel::with_failures(tree, failure)
}

/// Parse a scenario file: model plus one mechanism line per edge.
pub fn parse_scenario(text: &str) -> Result<MechanizedModel> {
    let raw = parse_raw(text)?;
    let model = parse_model(text)?;
    let mechanisms: BTreeMap<(NodeId, NodeId), EdgeMechanism> =
        raw.mechanisms.into_iter().collect();
    MechanizedModel::new(model, mechanisms)
}

pub fn write_digraph(g: &Digraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "N {}", g.node_count());
    for (p, c) in g.edges() {
        let _ = writeln!(out, "{} {}", p + 1, c + 1);
    }
    out
}

pub fn write_tree(tree: &CausalTree) -> String {
    write_digraph(&tree.to_digraph())
}

pub fn write_model(model: &CascadeModel) -> String {
    let mut out = write_tree(model.tree());
    let failures: Vec<f64> = (0..model.node_count()).map(|j| model.failure(j)).collect();
    let uniform = failures.windows(2).all(|w| w[0] == w[1]);
    if uniform {
        if failures[0] != 0.0 {
            let _ = writeln!(out, "P * {}", failures[0]);
        }
    } else {
        for (j, f) in failures.iter().enumerate() {
            if *f != 0.0 {
                let _ = writeln!(out, "P {} {}", j + 1, f);
            }
        }
    }
    out
}

pub fn write_scenario(mm: &MechanizedModel) -> String {
    let mut out = write_model(mm.model());
    for (&(p, c), mech) in mm.mechanisms() {
        let kind = match mech.kind {
            MechanismKind::Contact => "contact",
            MechanismKind::NonContact => "noncontact",
        };
        let _ = writeln!(out, "M {} {} {} {}", p + 1, c + 1, kind, mech.delay);
    }
    out
}

/// Parse a dataset file: `N <n>` header then one episode per line.
pub fn parse_dataset(text: &str) -> Result<InterventionalDataset> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::Format("empty dataset file".into()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 || toks[0] != "N" {
        return Err(fmt_err(line_no, "expected 'N <count>' header"));
    }
    let n: usize = toks[1]
        .parse()
        .map_err(|_| fmt_err(line_no, "bad node count"))?;
    let mut data = InterventionalDataset::new(n)?;
    for (line_no, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(fmt_err(line_no, "expected '<target|-> <bits>'"));
        }
        let intervention = if toks[0] == "-" {
            Intervention::Observational
        } else {
            Intervention::Block(parse_node_1based(toks[0], n, line_no)?)
        };
        if toks[1].len() != n {
            return Err(fmt_err(
                line_no,
                format!("expected {n} activation bits, got {}", toks[1].len()),
            ));
        }
        let mut active = Vec::with_capacity(n);
        for ch in toks[1].chars() {
            match ch {
                '0' => active.push(false),
                '1' => active.push(true),
                other => return Err(fmt_err(line_no, format!("bad activation bit '{other}'"))),
            }
        }
        data.push(Episode {
            intervention,
            active,
        })?;
    }
    Ok(data)
}

pub fn write_dataset(data: &InterventionalDataset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "N {}", data.node_count());
    for ep in data.episodes() {
        match ep.intervention.target() {
            None => out.push('-'),
            Some(i) => {
                let _ = write!(out, "{}", i + 1);
            }
        }
        out.push(' ');
        for &a in &ep.active {
            out.push(if a { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn write_trace(trace: &EventTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "N {}", trace.node_count());
    match trace.episode.intervention.target() {
        None => out.push_str("I -\n"),
        Some(i) => {
            let _ = writeln!(out, "I {}", i + 1);
        }
    }
    for (j, t) in trace.activation_time.iter().enumerate() {
        if let Some(t) = t {
            let _ = writeln!(out, "A {} {}", j + 1, t);
        }
    }
    for c in &trace.collisions {
        let _ = writeln!(out, "C {} {} {}", c.time, c.source + 1, c.target + 1);
    }
    out
}

pub fn write_traces(traces: &[EventTrace]) -> String {
    traces.iter().map(write_trace).collect()
}

/// Parse one or more trace dumps; each `N` header starts a new trace.
pub fn parse_traces(text: &str) -> Result<Vec<EventTrace>> {
    struct Partial {
        n: usize,
        intervention: Intervention,
        times: Vec<Option<f64>>,
        collisions: Vec<Collision>,
    }
    impl Partial {
        fn finish(self) -> EventTrace {
            let episode = Episode {
                intervention: self.intervention,
                active: self.times.iter().map(|t| t.is_some()).collect(),
            };
            EventTrace {
                episode,
                activation_time: self.times,
                collisions: self.collisions,
            }
        }
    }

    let mut traces = Vec::new();
    let mut cur: Option<Partial> = None;
    for (line_no, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "N" => {
                if toks.len() != 2 {
                    return Err(fmt_err(line_no, "expected 'N <count>'"));
                }
                let n: usize = toks[1]
                    .parse()
                    .map_err(|_| fmt_err(line_no, "bad node count"))?;
                if n == 0 {
                    return Err(fmt_err(line_no, "node count must be >= 1"));
                }
                if let Some(p) = cur.take() {
                    traces.push(p.finish());
                }
                cur = Some(Partial {
                    n,
                    intervention: Intervention::Observational,
                    times: vec![None; n],
                    collisions: Vec::new(),
                });
            }
            "I" => {
                let p = cur
                    .as_mut()
                    .ok_or_else(|| fmt_err(line_no, "I line before N header"))?;
                if toks.len() != 2 {
                    return Err(fmt_err(line_no, "expected 'I <target|->'"));
                }
                p.intervention = if toks[1] == "-" {
                    Intervention::Observational
                } else {
                    Intervention::Block(parse_node_1based(toks[1], p.n, line_no)?)
                };
            }
            "A" => {
                let p = cur
                    .as_mut()
                    .ok_or_else(|| fmt_err(line_no, "A line before N header"))?;
                if toks.len() != 3 {
                    return Err(fmt_err(line_no, "expected 'A <node> <time>'"));
                }
                let j = parse_node_1based(toks[1], p.n, line_no)?;
                let t: f64 = toks[2]
                    .parse()
                    .map_err(|_| fmt_err(line_no, "bad activation time"))?;
                p.times[j] = Some(t);
            }
            "C" => {
                let p = cur
                    .as_mut()
                    .ok_or_else(|| fmt_err(line_no, "C line before N header"))?;
                if toks.len() != 4 {
                    return Err(fmt_err(line_no, "expected 'C <time> <source> <target>'"));
                }
                let t: f64 = toks[1]
                    .parse()
                    .map_err(|_| fmt_err(line_no, "bad collision time"))?;
                let s = parse_node_1based(toks[2], p.n, line_no)?;
                let g = parse_node_1based(toks[3], p.n, line_no)?;
                p.collisions.push(Collision {
                    time: t,
                    source: s,
                    target: g,
                });
            }
            other => return Err(fmt_err(line_no, format!("unknown record '{other}'"))),
        }
    }
    if let Some(p) = cur.take() {
        traces.push(p.finish());
    }
    Ok(traces)
}
