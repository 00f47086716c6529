use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{Degree, EdgeTraversal, GraphError, PortGraph};
use crate::enumeration::Port;
use crate::rational::{fmt_q, qi, serde_q, Q};

pub const GRAPH_SCHEMA: &str = "graph-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone)]
struct Link {
    to: NodeId,
    in_port: Port,
    edge: usize,
}

/// A validated, connected, finite port-labeled graph.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    ports: Vec<BTreeMap<Port, Link>>,
    lengths: Vec<Q>,
}

impl FiniteGraph {
    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.names.len()).map(NodeId)
    }

    pub fn node(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v.0]
    }

    /// All `(port, traversal)` pairs at `v`, ascending by port.
    pub fn ports_at(&self, v: NodeId) -> impl Iterator<Item = (Port, EdgeTraversal<NodeId>)> + '_ {
        self.ports[v.0].iter().map(move |(&p, link)| {
            (
                p,
                EdgeTraversal {
                    from: v,
                    out_port: p,
                    to: link.to,
                    in_port: link.in_port,
                },
            )
        })
    }

    /// Hop distances from `v` (`None` for unreachable nodes).
    pub fn distances_from(&self, v: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.names.len()];
        dist[v.0] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x.0].unwrap();
            for link in self.ports[x.0].values() {
                if dist[link.to.0].is_none() {
                    dist[link.to.0] = Some(d + 1);
                    queue.push_back(link.to);
                }
            }
        }
        dist
    }

    pub fn to_spec(&self) -> GraphSpec {
        let mut edges: Vec<Option<EdgeSpec>> = vec![None; self.lengths.len()];
        for (u, table) in self.ports.iter().enumerate() {
            for (&pu, link) in table {
                if edges[link.edge].is_none() {
                    edges[link.edge] = Some(EdgeSpec {
                        u: self.names[u].clone(),
                        pu,
                        v: self.names[link.to.0].clone(),
                        pv: link.in_port,
                        len: Some(self.lengths[link.edge].clone()),
                    });
                }
            }
        }
        GraphSpec {
            schema: Some(GRAPH_SCHEMA.to_string()),
            nodes: self.names.clone(),
            edges: edges.into_iter().map(|e| e.expect("every edge has two ends")).collect(),
        }
    }

    fn check(&self, v: NodeId) -> Result<(), GraphError> {
        if v.0 < self.names.len() {
            Ok(())
        } else {
            Err(GraphError::UnknownNode(v.to_string()))
        }
    }
}

impl PortGraph for FiniteGraph {
    type Node = NodeId;

    fn contains(&self, v: &NodeId) -> bool {
        v.0 < self.names.len()
    }

    fn degree(&self, v: &NodeId) -> Result<Degree, GraphError> {
        self.check(*v)?;
        Ok(Degree::Finite(self.ports[v.0].len() as u64))
    }

    fn is_port(&self, v: &NodeId, port: Port) -> Result<bool, GraphError> {
        self.check(*v)?;
        Ok(self.ports[v.0].contains_key(&port))
    }

    fn traverse(&self, v: &NodeId, port: Port) -> Result<EdgeTraversal<NodeId>, GraphError> {
        self.check(*v)?;
        let link = self.ports[v.0].get(&port).ok_or_else(|| GraphError::InvalidPort {
            node: self.names[v.0].clone(),
            port,
        })?;
        Ok(EdgeTraversal {
            from: *v,
            out_port: port,
            to: link.to,
            in_port: link.in_port,
        })
    }

    fn edge_length(&self, step: &EdgeTraversal<NodeId>) -> Q {
        match self.ports.get(step.from.0).and_then(|t| t.get(&step.out_port)) {
            Some(link) => self.lengths[link.edge].clone(),
            None => qi(1),
        }
    }

    fn node_label(&self, v: &NodeId) -> String {
        self.names.get(v.0).cloned().unwrap_or_else(|| v.to_string())
    }

    fn parse_node(&self, text: &str) -> Result<NodeId, GraphError> {
        self.node(text).ok_or_else(|| GraphError::UnknownNode(text.to_string()))
    }
}

/// Incremental construction with validation deferred to [`build`](Self::build).
#[derive(Debug, Default, Clone)]
pub struct FiniteGraphBuilder {
    nodes: Vec<String>,
    edges: Vec<EdgeSpec>,
}

impl FiniteGraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(mut self, name: impl Into<String>) -> Self {
        self.nodes.push(name.into());
        self
    }

    pub fn nodes<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.nodes.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn edge(self, u: &str, pu: Port, v: &str, pv: Port) -> Self {
        self.edge_with_length(u, pu, v, pv, qi(1))
    }

    pub fn edge_with_length(mut self, u: &str, pu: Port, v: &str, pv: Port, len: Q) -> Self {
        self.edges.push(EdgeSpec {
            u: u.to_string(),
            pu,
            v: v.to_string(),
            pv,
            len: Some(len),
        });
        self
    }

    pub fn build(self) -> Result<FiniteGraph, GraphError> {
        GraphSpec {
            schema: None,
            nodes: self.nodes,
            edges: self.edges,
        }
        .build()
    }
}

/// The `graph-v1` JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub u: String,
    pub pu: Port,
    pub v: String,
    pub pv: Port,
    #[serde(default, with = "serde_q::option", skip_serializing_if = "Option::is_none")]
    pub len: Option<Q>,
}

impl GraphSpec {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn build(&self) -> Result<FiniteGraph, GraphError> {
        if let Some(schema) = &self.schema {
            if schema != GRAPH_SCHEMA {
                return Err(GraphError::Schema(schema.clone()));
            }
        }
        if self.nodes.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut index = HashMap::new();
        for (i, name) in self.nodes.iter().enumerate() {
            if index.insert(name.clone(), NodeId(i)).is_some() {
                return Err(GraphError::DuplicateNode(name.clone()));
            }
        }
        let mut ports: Vec<BTreeMap<Port, Link>> = vec![BTreeMap::new(); self.nodes.len()];
        let mut lengths = Vec::with_capacity(self.edges.len());
        for (edge, spec) in self.edges.iter().enumerate() {
            let u = *index
                .get(&spec.u)
                .ok_or_else(|| GraphError::DanglingEdge(spec.u.clone()))?;
            let v = *index
                .get(&spec.v)
                .ok_or_else(|| GraphError::DanglingEdge(spec.v.clone()))?;
            for (node, port) in [(&spec.u, spec.pu), (&spec.v, spec.pv)] {
                if port == 0 {
                    return Err(GraphError::ZeroPort(node.clone()));
                }
            }
            let len = spec.len.clone().unwrap_or_else(|| qi(1));
            if !len.is_positive() {
                return Err(GraphError::InvalidLength(fmt_q(&len)));
            }
            let dup = |node: &str, port| GraphError::DuplicatePort {
                node: node.to_string(),
                port,
            };
            if ports[u.0].contains_key(&spec.pu) {
                return Err(dup(&spec.u, spec.pu));
            }
            ports[u.0].insert(
                spec.pu,
                Link {
                    to: v,
                    in_port: spec.pv,
                    edge,
                },
            );
            if ports[v.0].contains_key(&spec.pv) {
                return Err(dup(&spec.v, spec.pv));
            }
            ports[v.0].insert(
                spec.pv,
                Link {
                    to: u,
                    in_port: spec.pu,
                    edge,
                },
            );
            lengths.push(len);
        }
        let graph = FiniteGraph {
            names: self.nodes.clone(),
            index,
            ports,
            lengths,
        };
        let dist = graph.distances_from(NodeId(0));
        if let Some(unreached) = dist.iter().position(Option::is_none) {
            return Err(GraphError::Disconnected {
                root: graph.names[0].clone(),
                unreached: graph.names[unreached].clone(),
            });
        }
        Ok(graph)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> FiniteGraph {
        FiniteGraphBuilder::new()
            .nodes(["A", "B"])
            .edge("A", 1, "B", 1)
            .build()
            .unwrap()
    }

    #[test]
    fn k2_ports() {
        let g = k2();
        let a = g.node("A").unwrap();
        let b = g.node("B").unwrap();
        assert!(g.is_port(&a, 1).unwrap());
        assert!(!g.is_port(&a, 2).unwrap());
        let t = g.traverse(&a, 1).unwrap();
        assert_eq!((t.to, t.in_port), (b, 1));
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert!(matches!(
            g.traverse(&a, 2),
            Err(GraphError::InvalidPort { port: 2, .. })
        ));
        assert!(matches!(g.is_port(&NodeId(7), 1), Err(GraphError::UnknownNode(_))));
    }

    #[test]
    fn rejects_duplicate_port() {
        let err = FiniteGraphBuilder::new()
            .nodes(["A", "B", "C"])
            .edge("A", 1, "B", 1)
            .edge("A", 1, "C", 1)
            .build()
            .unwrap_err();
        assert_eq!(
            err,
            GraphError::DuplicatePort {
                node: "A".into(),
                port: 1
            }
        );
    }

    #[test]
    fn rejects_disconnected_and_dangling() {
        let err = FiniteGraphBuilder::new()
            .nodes(["A", "B", "C", "D"])
            .edge("A", 1, "B", 1)
            .edge("C", 1, "D", 1)
            .build()
            .unwrap_err();
        assert!(matches!(err, GraphError::Disconnected { .. }));
        let err = FiniteGraphBuilder::new()
            .nodes(["A"])
            .edge("A", 1, "Z", 1)
            .build()
            .unwrap_err();
        assert_eq!(err, GraphError::DanglingEdge("Z".into()));
        assert_eq!(FiniteGraphBuilder::new().build().unwrap_err(), GraphError::Empty);
    }

    #[test]
    fn rejects_bad_lengths_and_ports() {
        let err = FiniteGraphBuilder::new()
            .nodes(["A", "B"])
            .edge_with_length("A", 1, "B", 1, qi(0))
            .build()
            .unwrap_err();
        assert!(matches!(err, GraphError::InvalidLength(_)));
        let err = FiniteGraphBuilder::new()
            .nodes(["A", "B"])
            .edge("A", 0, "B", 1)
            .build()
            .unwrap_err();
        assert!(matches!(err, GraphError::ZeroPort(_)));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"schema":"graph-v1","nodes":["A","B"],"edges":[{"u":"A","pu":1,"v":"B","pv":1,"len":"3/2"}]}"#;
        let g = GraphSpec::from_json(text).unwrap().build().unwrap();
        let a = g.node("A").unwrap();
        let step = g.traverse(&a, 1).unwrap();
        assert_eq!(g.edge_length(&step), crate::rational::q(3, 2));
        assert_eq!(g.edge_length(&step.reversed()), crate::rational::q(3, 2));
        let again = g.to_spec().build().unwrap();
        assert_eq!(again.to_spec(), g.to_spec());
        let bad = r#"{"schema":"graph-v9","nodes":["A"],"edges":[]}"#;
        assert!(matches!(
            GraphSpec::from_json(bad).unwrap().build(),
            Err(GraphError::Schema(_))
        ));
    }
}
