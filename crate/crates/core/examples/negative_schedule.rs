//! Two agents following the same ports from neighbouring nodes of the line
//! never meet when the adversary alternates their moves.

use tunnelmeet::adversary::{run_graph_pair, SuiteStrategy};
use tunnelmeet::graph::{follow_ports, InfiniteLine};
use tunnelmeet::rational::fmt_q;
use tunnelmeet::rendezvous::Route;

fn main() {
    let g = InfiniteLine::default();
    let ports = vec![1; 10];
    let lead = Route::from_steps(1, follow_ports(&g, &1, &ports).unwrap()).unwrap();
    let trail = Route::from_steps(0, follow_ports(&g, &0, &ports).unwrap()).unwrap();
    for seed in [0, 2, 4] {
        let e = run_graph_pair(&g, &lead, &trail, SuiteStrategy::Alternating, seed);
        println!(
            "seed {seed}: met={} over [0, {}]",
            e.verdict.met,
            fmt_q(&e.verdict.simulated_until)
        );
    }
    // odd seeds let the trailing agent move first, so it catches up
    let e = run_graph_pair(&g, &lead, &trail, SuiteStrategy::Alternating, 1);
    println!("seed 1: met={}", e.verdict.met);
}
