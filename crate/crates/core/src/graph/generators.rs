//! Lazily generated infinite graphs. Handles are canonical coordinates and
//! every edge has the same length.
//!
//! Port conventions:
//! - line: 1 = successor, 2 = predecessor
//! - grid: 1..4 = east, north, west, south
//! - binary tree: 1 = left child, 2 = right child, 3 = parent (absent at the root)

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Degree, EdgeTraversal, GraphError, PortGraph};
use crate::enumeration::Port;
use crate::rational::{qi, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    InfiniteLine,
    InfiniteGrid,
    InfiniteBinaryTree,
}

impl FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "infinite_line" => Ok(Self::InfiniteLine),
            "infinite_grid" => Ok(Self::InfiniteGrid),
            "infinite_binary_tree" => Ok(Self::InfiniteBinaryTree),
            other => Err(format!("unknown generator `{other}`")),
        }
    }
}

fn bad_port<N: fmt::Debug>(v: &N, port: Port) -> GraphError {
    GraphError::InvalidPort {
        node: format!("{v:?}"),
        port,
    }
}

#[derive(Debug, Clone)]
pub struct InfiniteLine {
    pub unit_length: Q,
}

impl InfiniteLine {
    pub fn new(unit_length: Q) -> Self {
        InfiniteLine { unit_length }
    }
}

impl Default for InfiniteLine {
    fn default() -> Self {
        Self::new(qi(1))
    }
}

impl PortGraph for InfiniteLine {
    type Node = i64;

    fn contains(&self, _v: &i64) -> bool {
        true
    }

    fn degree(&self, _v: &i64) -> Result<Degree, GraphError> {
        Ok(Degree::Finite(2))
    }

    fn is_port(&self, _v: &i64, port: Port) -> Result<bool, GraphError> {
        Ok(matches!(port, 1 | 2))
    }

    fn traverse(&self, v: &i64, port: Port) -> Result<EdgeTraversal<i64>, GraphError> {
        let (to, in_port) = match port {
            1 => (v.checked_add(1).ok_or(GraphError::Overflow)?, 2),
            2 => (v.checked_sub(1).ok_or(GraphError::Overflow)?, 1),
            _ => return Err(bad_port(v, port)),
        };
        Ok(EdgeTraversal {
            from: *v,
            out_port: port,
            to,
            in_port,
        })
    }

    fn edge_length(&self, _step: &EdgeTraversal<i64>) -> Q {
        self.unit_length.clone()
    }

    fn node_label(&self, v: &i64) -> String {
        v.to_string()
    }

    fn parse_node(&self, text: &str) -> Result<i64, GraphError> {
        text.trim()
            .parse()
            .map_err(|_| GraphError::UnknownNode(text.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct InfiniteGrid {
    pub unit_length: Q,
}

impl InfiniteGrid {
    pub fn new(unit_length: Q) -> Self {
        InfiniteGrid { unit_length }
    }
}

impl Default for InfiniteGrid {
    fn default() -> Self {
        Self::new(qi(1))
    }
}

impl PortGraph for InfiniteGrid {
    type Node = (i64, i64);

    fn contains(&self, _v: &(i64, i64)) -> bool {
        true
    }

    fn degree(&self, _v: &(i64, i64)) -> Result<Degree, GraphError> {
        Ok(Degree::Finite(4))
    }

    fn is_port(&self, _v: &(i64, i64), port: Port) -> Result<bool, GraphError> {
        Ok((1..=4).contains(&port))
    }

    fn traverse(&self, v: &(i64, i64), port: Port) -> Result<EdgeTraversal<(i64, i64)>, GraphError> {
        let (dx, dy) = match port {
            1 => (1, 0),
            2 => (0, 1),
            3 => (-1, 0),
            4 => (0, -1),
            _ => return Err(bad_port(v, port)),
        };
        let to = (
            v.0.checked_add(dx).ok_or(GraphError::Overflow)?,
            v.1.checked_add(dy).ok_or(GraphError::Overflow)?,
        );
        Ok(EdgeTraversal {
            from: *v,
            out_port: port,
            to,
            in_port: (port + 1) % 4 + 1,
        })
    }

    fn edge_length(&self, _step: &EdgeTraversal<(i64, i64)>) -> Q {
        self.unit_length.clone()
    }

    fn node_label(&self, v: &(i64, i64)) -> String {
        format!("{},{}", v.0, v.1)
    }

    fn parse_node(&self, text: &str) -> Result<(i64, i64), GraphError> {
        let err = || GraphError::UnknownNode(text.to_string());
        let (x, y) = text.split_once(',').ok_or_else(err)?;
        Ok((
            x.trim().parse().map_err(|_| err())?,
            y.trim().parse().map_err(|_| err())?,
        ))
    }
}

/// Node `index` (`0 <= index < 2^depth`) on level `depth`; the root is `(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeNode {
    pub depth: u32,
    pub index: u128,
}

impl TreeNode {
    pub const ROOT: TreeNode = TreeNode { depth: 0, index: 0 };
    const MAX_DEPTH: u32 = 127;
}

#[derive(Debug, Clone)]
pub struct InfiniteBinaryTree {
    pub unit_length: Q,
}

impl InfiniteBinaryTree {
    pub fn new(unit_length: Q) -> Self {
        InfiniteBinaryTree { unit_length }
    }
}

impl Default for InfiniteBinaryTree {
    fn default() -> Self {
        Self::new(qi(1))
    }
}

impl PortGraph for InfiniteBinaryTree {
    type Node = TreeNode;

    fn contains(&self, v: &TreeNode) -> bool {
        v.depth <= TreeNode::MAX_DEPTH && v.index >> v.depth == 0
    }

    fn degree(&self, v: &TreeNode) -> Result<Degree, GraphError> {
        Ok(Degree::Finite(if v.depth == 0 { 2 } else { 3 }))
    }

    fn is_port(&self, v: &TreeNode, port: Port) -> Result<bool, GraphError> {
        Ok(matches!(port, 1 | 2) || (port == 3 && v.depth > 0))
    }

    fn traverse(&self, v: &TreeNode, port: Port) -> Result<EdgeTraversal<TreeNode>, GraphError> {
        let (to, in_port) = match port {
            1 | 2 => {
                if v.depth >= TreeNode::MAX_DEPTH {
                    return Err(GraphError::Overflow);
                }
                let child = TreeNode {
                    depth: v.depth + 1,
                    index: 2 * v.index + (port as u128 - 1),
                };
                (child, 3)
            }
            3 if v.depth > 0 => {
                let parent = TreeNode {
                    depth: v.depth - 1,
                    index: v.index / 2,
                };
                (parent, 1 + (v.index % 2) as Port)
            }
            _ => return Err(bad_port(v, port)),
        };
        Ok(EdgeTraversal {
            from: *v,
            out_port: port,
            to,
            in_port,
        })
    }

    fn edge_length(&self, _step: &EdgeTraversal<TreeNode>) -> Q {
        self.unit_length.clone()
    }

    fn node_label(&self, v: &TreeNode) -> String {
        format!("{}:{}", v.depth, v.index)
    }

    fn parse_node(&self, text: &str) -> Result<TreeNode, GraphError> {
        let err = || GraphError::UnknownNode(text.to_string());
        let (d, i) = text.split_once(':').ok_or_else(err)?;
        let node = TreeNode {
            depth: d.trim().parse().map_err(|_| err())?,
            index: i.trim().parse().map_err(|_| err())?,
        };
        if self.contains(&node) {
            Ok(node)
        } else {
            Err(err())
        }
    }
}
