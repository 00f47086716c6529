//! Building port-labeled graphs: a validated finite graph from JSON, a family
//! member, and a lazily generated infinite grid.

use tunnelmeet::graph::{cycle, follow_ports, GraphSpec, InfiniteGrid, PortGraph};

fn main() {
    let spec = GraphSpec::from_json(
        r#"{"nodes": ["hub", "x", "y"],
            "edges": [{"u": "hub", "pu": 1, "v": "x", "pv": 1},
                      {"u": "hub", "pu": 2, "v": "y", "pv": 1}]}"#,
    )
    .unwrap();
    let g = spec.build().unwrap();
    let hub = g.node("hub").unwrap();
    println!("hub has degree {:?}", g.degree(&hub).unwrap());
    let step = g.traverse(&hub, 2).unwrap();
    println!("hub --2--> {} (entered by port {})", g.name(step.to), step.in_port);

    let c = cycle(5);
    let a = c.node("A").unwrap();
    let walk = follow_ports(&c, &a, &[1, 1, 1]).unwrap();
    println!("three steps forward on C5 end at {}", c.name(walk.last().unwrap().to));

    let grid = InfiniteGrid::default();
    let mut at = (0i64, 0i64);
    for port in [1, 1, 2, 3] {
        at = grid.traverse(&at, port).unwrap().to;
    }
    println!("grid walk ends at {}", grid.node_label(&at));

    let bad = GraphSpec::from_json(r#"{"nodes": ["a", "b"], "edges": []}"#)
        .unwrap()
        .build();
    println!("disconnected spec: {}", bad.unwrap_err());
}
