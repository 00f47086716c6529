//! Small finite graph families used by tests, examples and scenarios.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FiniteGraph, FiniteGraphBuilder};
use crate::enumeration::Port;

fn node_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if n <= 26 {
                ((b'A' + i as u8) as char).to_string()
            } else {
                format!("v{i}")
            }
        })
        .collect()
}

/// Builds from an edge list, numbering ports at each node in order of
/// appearance starting at 1.
fn from_edges(n: usize, edges: &[(usize, usize)]) -> FiniteGraph {
    let names = node_names(n);
    let mut next = vec![1 as Port; n];
    let mut b = FiniteGraphBuilder::new().nodes(names.iter().cloned());
    for &(u, v) in edges {
        let pu = next[u];
        next[u] += 1;
        let pv = next[v];
        next[v] += 1;
        b = b.edge(&names[u], pu, &names[v], pv);
    }
    b.build().expect("family graphs are valid")
}

/// The two-node graph `A - B`, port 1 at both ends.
pub fn complete2() -> FiniteGraph {
    from_edges(2, &[(0, 1)])
}

/// Path `A - B - ...` on `n >= 1` nodes.
pub fn path(n: usize) -> FiniteGraph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    from_edges(n, &edges)
}

/// Cycle on `n >= 3` nodes; port 1 leads forward, port 2 backward.
pub fn cycle(n: usize) -> FiniteGraph {
    assert!(n >= 3, "cycle needs at least 3 nodes");
    let names = node_names(n);
    let mut b = FiniteGraphBuilder::new().nodes(names.iter().cloned());
    for i in 0..n {
        b = b.edge(&names[i], 1, &names[(i + 1) % n], 2);
    }
    b.build().expect("cycle is valid")
}

/// Star with center `A` and `leaves` leaves.
pub fn star(leaves: usize) -> FiniteGraph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    from_edges(leaves + 1, &edges)
}

/// Random connected graph: a random spanning tree plus up to `extra` chords,
/// with ports shuffled at every node. Deterministic in `seed`.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> FiniteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    let mut candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !edges.contains(&(u, v)))
        .collect();
    candidates.shuffle(&mut rng);
    let chords = rng.gen_range(0..=extra.min(candidates.len()));
    edges.extend(candidates.into_iter().take(chords));

    let mut degree = vec![0usize; n];
    for &(u, v) in &edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    let mut labels: Vec<Vec<Port>> = degree
        .iter()
        .map(|&d| {
            let mut ports: Vec<Port> = (1..=d as Port).collect();
            ports.shuffle(&mut rng);
            ports
        })
        .collect();
    let names = node_names(n);
    let mut b = FiniteGraphBuilder::new().nodes(names.iter().cloned());
    for &(u, v) in &edges {
        let pu = labels[u].pop().unwrap();
        let pv = labels[v].pop().unwrap();
        b = b.edge(&names[u], pu, &names[v], pv);
    }
    b.build().expect("spanning tree keeps the graph connected")
}
