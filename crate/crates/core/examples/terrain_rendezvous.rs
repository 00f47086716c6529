//! Two agents in a square with a hole: routes, containment audit, and a few
//! adversary runs with a truncated horizon.

use tunnelmeet::adversary::{verify_rendezvous_planar, SuiteStrategy};
use tunnelmeet::geometry::{geometric_rv, pt, rational_path, terrain_quadruple, Polygon, Terrain};
use tunnelmeet::rational::q_to_f64;
use tunnelmeet::rendezvous::Limits;

fn main() {
    let t = Terrain::new(
        Polygon::rect(&pt((0, 1), (0, 1)), &pt((1, 1), (1, 1))),
        vec![Polygon::rect(&pt((1, 4), (1, 4)), &pt((3, 4), (3, 4)))],
    )
    .unwrap();
    let (a, b) = (pt((1, 8), (1, 2)), pt((7, 8), (1, 2)));
    let path = rational_path(&t, &a, &b).unwrap();
    println!(
        "path around the hole: {}",
        path.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" -> ")
    );
    let (index, quad) = terrain_quadruple(&t, (&a, 1), (&b, 2)).unwrap();
    println!("connecting quadruple has {} ports; index {:?}", quad.len(), index);

    let lim = Limits::phases(u64::MAX).with_budget(5_000).truncating();
    let r1 = geometric_rv(&t, &a, 1, &lim).unwrap();
    let r2 = geometric_rv(&t, &b, 2, &lim).unwrap();
    println!(
        "segments: {} and {}; audit violations: {}",
        r1.len(),
        r2.len(),
        r1.audit(&t).len() + r2.audit(&t).len()
    );
    let report = verify_rendezvous_planar(&r1, &r2, &SuiteStrategy::ALL, &[0, 1], None);
    for e in &report.entries {
        let d = e
            .verdict
            .min_distance_sq
            .as_ref()
            .map_or(f64::NAN, |d| q_to_f64(d).sqrt());
        println!(
            "{:<14} seed {} met={} min distance {d:.4}",
            e.strategy.name(),
            e.seed,
            e.verdict.met
        );
    }
}
