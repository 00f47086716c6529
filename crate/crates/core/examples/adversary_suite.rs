//! The adversary suite on a certified pair, plus a hand-written schedule.

use tunnelmeet::adversary::{detect_meeting_graph, make_schedule, verify_rendezvous_graph, Strategy, SuiteStrategy};
use tunnelmeet::graph::path;
use tunnelmeet::rational::{fmt_q, q};
use tunnelmeet::rendezvous::{connecting_quadruple, graph_rv_pair, Limits};

fn main() {
    let g = path(3);
    let (v, w) = (g.node("A").unwrap(), g.node("C").unwrap());
    let (k, _) = connecting_quadruple(&g, (v, 1), (w, 2)).unwrap();
    let (r1, r2) = graph_rv_pair(&g, (&v, 1), (&w, 2), &Limits::phases(k)).unwrap();
    let seeds: Vec<u64> = (0..10).collect();
    let report = verify_rendezvous_graph(&g, &r1, &r2, &SuiteStrategy::ALL, &seeds);
    for e in report.entries.iter().filter(|e| e.seed == 0) {
        println!(
            "{:<14} met at t = {}",
            e.strategy.name(),
            e.verdict.time.as_ref().map_or("-".into(), fmt_q)
        );
    }
    println!("all {} runs met: {}", report.entries.len(), report.all_met);

    let slow = make_schedule(Strategy::FrozenPrefix(q(7, 2)), r1.len(), |_| q(1, 1), 0);
    let fast = make_schedule(Strategy::UnitSpeed, r2.len(), |_| q(1, 1), 0);
    let v = detect_meeting_graph(&g, &r1, &r2, &slow, &fast).unwrap();
    println!("hand-written schedules: met={} location={:?}", v.met, v.location);
}
