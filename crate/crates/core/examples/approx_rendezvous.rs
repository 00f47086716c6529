//! Approximate rendezvous from a start given as a 32-bit dyadic approximation.

use tunnelmeet::adversary::SuiteStrategy;
use tunnelmeet::geometry::{approx_rendezvous, pt, Polygon, QPoint, Terrain};
use tunnelmeet::rational::{q, q_to_f64};
use tunnelmeet::rendezvous::Limits;

fn main() {
    let t = Terrain::new(Polygon::rect(&pt((0, 1), (0, 1)), &pt((1, 1), (1, 1))), vec![]).unwrap();
    let a = pt((1, 4), (1, 4));
    // sqrt(2)/2 to 32 bits
    let b = QPoint::new(q(3_037_000_500, 1 << 32), q(1, 2));
    let eps = q(1, 1024);
    let lim = Limits::phases(u64::MAX).with_budget(5_000).truncating();
    let out = approx_rendezvous(&t, (&a, &b), (1, 2), &eps, &lim, &SuiteStrategy::ALL, &[0, 1]).unwrap();
    println!("proxy {} within radius {}", out.proxy, out.radius);
    for e in &out.report.entries {
        let d = q_to_f64(e.verdict.min_distance_sq.as_ref().unwrap()).sqrt();
        println!("{:<14} seed {} min distance {d:.5}", e.strategy.name(), e.seed);
    }
    println!("all within epsilon: {:?}", out.report.all_within_epsilon);
}
