//! Routes of two agents on a random graph, built up to the phase of their
//! connecting quadruple. Pairs whose tunnel phase is too far out are
//! reported by the step budget instead of being built.

use tunnelmeet::graph::random_connected;
use tunnelmeet::rendezvous::{connecting_quadruple, graph_rv_pair, tunnel_check, Limits, RouteError};

fn main() {
    let g = random_connected(5, 1, 11);
    let v = g.node("A").unwrap();
    for w in g.nodes().filter(|&w| w != v) {
        let (k, quad) = connecting_quadruple(&g, (v, 1), (w, 2)).unwrap();
        print!(
            "A -> {}: quadruple {:?}/{:?} at index {k}: ",
            g.name(w),
            quad.s_prime,
            quad.s_dprime
        );
        match graph_rv_pair(&g, (&v, 1), (&w, 2), &Limits::phases(k)) {
            Ok((r1, r2)) => {
                let closed = r1.unclosed_phases().is_empty() && r2.unclosed_phases().is_empty();
                let n = tunnel_check(&r1, &r2).map(|c| c.n);
                println!(
                    "lengths {} and {}, phases closed {closed}, tunnel {n:?}",
                    r1.len(),
                    r2.len()
                );
            }
            Err(RouteError::StepBudgetExceeded { needed, .. }) => println!("needs {needed} steps, over budget"),
            Err(e) => println!("{e}"),
        }
    }
}
