//! Anonymous port-labeled graphs.
//!
//! Agents never see node identities: the only observables are whether a
//! positive integer is a port at the current node, and the entry port after
//! crossing an edge. [`PortGraph`] exposes exactly that oracle, plus a node
//! handle type used by the simulator and by tests (never by route logic to
//! make decisions).

mod families;
mod finite;
mod generators;

use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

pub use families::{complete2, cycle, path, random_connected, star};
pub use finite::{EdgeSpec, FiniteGraph, FiniteGraphBuilder, GraphSpec, NodeId, GRAPH_SCHEMA};
pub use generators::{GeneratorKind, InfiniteBinaryTree, InfiniteGrid, InfiniteLine, TreeNode};

use crate::enumeration::Port;
use crate::rational::{qi, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("{port} is not a port at node `{node}`")]
    InvalidPort { node: String, port: Port },
    #[error("port numbers must be positive (edge at node `{0}`)")]
    ZeroPort(String),
    #[error("node `{node}` has two edges under port {port}")]
    DuplicatePort { node: String, port: Port },
    #[error("edge references undeclared node `{0}`")]
    DanglingEdge(String),
    #[error("graph is disconnected: `{unreached}` is not reachable from `{root}`")]
    Disconnected { root: String, unreached: String },
    #[error("graph has no nodes")]
    Empty,
    #[error("duplicate node name `{0}`")]
    DuplicateNode(String),
    #[error("edge length must be a positive rational (got {0})")]
    InvalidLength(String),
    #[error("unsupported schema `{0}` (expected `{GRAPH_SCHEMA}`)")]
    Schema(String),
    #[error("node coordinate out of range")]
    Overflow,
}

/// Degree of a node; the interface tolerates infinite degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Finite(u64),
    Infinite,
}

/// One directed crossing of an undirected edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeTraversal<N> {
    pub from: N,
    pub out_port: Port,
    pub to: N,
    pub in_port: Port,
}

impl<N: Clone + Ord> EdgeTraversal<N> {
    /// The same edge crossed the other way.
    pub fn reversed(&self) -> Self {
        EdgeTraversal {
            from: self.to.clone(),
            out_port: self.in_port,
            to: self.from.clone(),
            in_port: self.out_port,
        }
    }

    /// Orientation-free identity of the underlying edge.
    pub fn edge_key(&self) -> EdgeKey<N> {
        let a = (self.from.clone(), self.out_port);
        let b = (self.to.clone(), self.in_port);
        if a <= b {
            EdgeKey { lo: a, hi: b }
        } else {
            EdgeKey { lo: b, hi: a }
        }
    }

    /// True when the traversal runs from the key's `lo` end to its `hi` end.
    pub fn is_forward(&self) -> bool {
        (&self.from, self.out_port) <= (&self.to, self.in_port)
    }
}

/// An undirected edge named by its two `(node, port)` ends, `lo <= hi`.
///
/// In a port-labeled graph each `(node, port)` pair names at most one edge
/// end, so this is a canonical edge identifier for any graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey<N> {
    pub lo: (N, Port),
    pub hi: (N, Port),
}

pub trait PortGraph {
    type Node: Clone + Eq + Ord + Hash + Debug;

    fn contains(&self, v: &Self::Node) -> bool;

    fn degree(&self, v: &Self::Node) -> Result<Degree, GraphError>;

    fn is_port(&self, v: &Self::Node, port: Port) -> Result<bool, GraphError>;

    /// Crosses the edge behind `port`; fails with [`GraphError::InvalidPort`]
    /// when `port` is not a port at `v`.
    fn traverse(&self, v: &Self::Node, port: Port) -> Result<EdgeTraversal<Self::Node>, GraphError>;

    fn edge_length(&self, _step: &EdgeTraversal<Self::Node>) -> Q {
        qi(1)
    }

    /// Stable text form of a node handle (route dumps, reports).
    fn node_label(&self, v: &Self::Node) -> String;

    fn parse_node(&self, text: &str) -> Result<Self::Node, GraphError>;
}

impl<G: PortGraph + ?Sized> PortGraph for &G {
    type Node = G::Node;

    fn contains(&self, v: &Self::Node) -> bool {
        (**self).contains(v)
    }
    fn degree(&self, v: &Self::Node) -> Result<Degree, GraphError> {
        (**self).degree(v)
    }
    fn is_port(&self, v: &Self::Node, port: Port) -> Result<bool, GraphError> {
        (**self).is_port(v, port)
    }
    fn traverse(&self, v: &Self::Node, port: Port) -> Result<EdgeTraversal<Self::Node>, GraphError> {
        (**self).traverse(v, port)
    }
    fn edge_length(&self, step: &EdgeTraversal<Self::Node>) -> Q {
        (**self).edge_length(step)
    }
    fn node_label(&self, v: &Self::Node) -> String {
        (**self).node_label(v)
    }
    fn parse_node(&self, text: &str) -> Result<Self::Node, GraphError> {
        (**self).parse_node(text)
    }
}

/// Follows `ports` from `v` as far as they are valid. Returns the traversals
/// made; fewer than `ports.len()` means some port was missing.
pub fn follow_ports<G: PortGraph>(
    g: &G,
    v: &G::Node,
    ports: &[Port],
) -> Result<Vec<EdgeTraversal<G::Node>>, GraphError> {
    let mut cur = v.clone();
    let mut out = Vec::with_capacity(ports.len());
    for &p in ports {
        if !g.is_port(&cur, p)? {
            break;
        }
        let step = g.traverse(&cur, p)?;
        cur = step.to.clone();
        out.push(step);
    }
    Ok(out)
}

/// Breadth-first shortest port paths from `v` to `w` in a finite graph,
/// as `(s', s'')` pairs where `s''` lists the ports of the reverse path
/// starting at `w`.
pub fn shortest_port_paths(g: &FiniteGraph, v: NodeId, w: NodeId) -> Vec<(Vec<Port>, Vec<Port>)> {
    let dist = g.distances_from(v);
    let Some(target) = dist[w.0] else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut fwd = Vec::new();
    let mut back = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn walk(
        g: &FiniteGraph,
        dist: &[Option<usize>],
        cur: NodeId,
        w: NodeId,
        target: usize,
        fwd: &mut Vec<Port>,
        back: &mut Vec<Port>,
        out: &mut Vec<(Vec<Port>, Vec<Port>)>,
    ) {
        if cur == w {
            let rev: Vec<Port> = back.iter().rev().copied().collect();
            out.push((fwd.clone(), rev));
            return;
        }
        let d = dist[cur.0].expect("on a shortest path");
        for (port, step) in g.ports_at(cur) {
            if dist[step.to.0] == Some(d + 1) && d < target {
                fwd.push(port);
                back.push(step.in_port);
                walk(g, dist, step.to, w, target, fwd, back, out);
                fwd.pop();
                back.pop();
            }
        }
    }
    walk(g, &dist, v, w, target, &mut fwd, &mut back, &mut out);
    out
}
