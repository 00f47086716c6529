//! A tunnel certificate, printed edge by edge, and its absence before the
//! connecting phase.

use tunnelmeet::graph::{path, PortGraph};
use tunnelmeet::rendezvous::{connecting_quadruple, graph_rv, tunnel_check, Limits};

fn main() {
    let g = path(4);
    let (a, d) = (g.node("A").unwrap(), g.node("D").unwrap());
    let (k, _) = connecting_quadruple(&g, (a, 2), (d, 1)).unwrap();
    for cap in [k.saturating_sub(1), k] {
        let r1 = graph_rv(&g, &a, 2, &Limits::phases(cap)).unwrap();
        let r2 = graph_rv(&g, &d, 1, &Limits::phases(cap)).unwrap();
        match tunnel_check(&r1, &r2) {
            None => println!("phase cap {cap}: no tunnel"),
            Some(c) => {
                println!("phase cap {cap}: tunnel of {} edges, starting", c.n);
                for s in c.meeting_path.iter().take(6) {
                    println!("  {} -{}-> {}", g.node_label(&s.from), s.out_port, g.node_label(&s.to));
                }
            }
        }
    }
}
