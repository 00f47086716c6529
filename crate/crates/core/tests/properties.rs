use proptest::prelude::*;

use tunnelmeet::adversary::{
    make_schedule, planar_location_at, simulate_planar, MeetingPoint, Role, Strategy as Walk, StrategyWalk,
};
use tunnelmeet::enumeration::{
    pair_decode, pair_encode, phi, phi_index, rational_pair, rational_pair_index, seq_decode, seq_encode, Quadruple,
};
use tunnelmeet::geometry::{geometric_rv, gt_port, gt_target, pt, Polygon, QPoint, Terrain};
use tunnelmeet::graph::{random_connected, FiniteGraph, NodeId, PortGraph};
use tunnelmeet::rational::{q, qi, Q};
use tunnelmeet::rendezvous::{dump_route, graph_rv, parse_route_dump, tunnel_check, Limits, Route};

fn small_graph() -> impl Strategy<Value = FiniteGraph> {
    (2usize..=6, 0usize..=3, any::<u64>()).prop_map(|(n, extra, seed)| random_connected(n, extra, seed))
}

fn strategy() -> impl Strategy<Value = Walk> {
    prop_oneof![
        Just(Walk::UnitSpeed),
        Just(Walk::Alternating(Role::First)),
        Just(Walk::Alternating(Role::Second)),
        Just(Walk::RandomSpeeds),
        Just(Walk::Jitter),
        (0i64..12).prop_map(|h| Walk::FrozenPrefix(q(h, 2))),
    ]
}

fn node(g: &FiniteGraph, pick: usize) -> NodeId {
    let nodes: Vec<NodeId> = g.nodes().collect();
    nodes[pick % nodes.len()]
}

fn unit_square() -> Terrain {
    Terrain::new(Polygon::rect(&pt((0, 1), (0, 1)), &pt((1, 1), (1, 1))), vec![]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_codec_round_trips(a in 0u64..1 << 31, b in 0u64..1 << 31) {
        prop_assert_eq!(pair_decode(pair_encode(a, b).unwrap()), (a, b));
    }

    #[test]
    fn sequence_codec_round_trips(n in 0u64..1 << 32) {
        let s = seq_decode(n);
        prop_assert!(!s.is_empty() && s.iter().all(|&x| x >= 1));
        prop_assert_eq!(seq_encode(&s).unwrap(), n);
    }

    #[test]
    fn quadruple_codec_round_trips(k in 1u64..5_000_000) {
        let q = phi(k).unwrap();
        prop_assert!(q.i < q.j && q.s_prime.len() == q.s_dprime.len() && !q.s_prime.is_empty());
        prop_assert_eq!(phi_index(&q).unwrap(), k);
    }

    #[test]
    fn quadruple_index_inverts(i in 1u64..4, dj in 1u64..4, ports in prop::collection::vec((1u64..5, 1u64..5), 1..4)) {
        let (a, b): (Vec<u64>, Vec<u64>) = ports.into_iter().unzip();
        let quad = Quadruple::new(i, i + dj, a, b).unwrap();
        if let Ok(k) = phi_index(&quad) {
            prop_assert_eq!(phi(k).unwrap(), quad);
        }
    }

    #[test]
    fn rational_pairs_round_trip(k in 1u64..200_000) {
        let z = rational_pair(k).unwrap();
        prop_assert_eq!(rational_pair_index(&z).unwrap(), k);
    }

    #[test]
    fn traversal_is_symmetric(g in small_graph(), pick in any::<usize>(), port in 1u64..6) {
        let v = node(&g, pick);
        if g.is_port(&v, port).unwrap() {
            let step = g.traverse(&v, port).unwrap();
            let back = g.traverse(&step.to, step.in_port).unwrap();
            prop_assert_eq!(back, step.reversed());
            prop_assert_eq!(step.reversed().reversed(), step);
        } else {
            prop_assert!(g.traverse(&v, port).is_err());
        }
    }

    #[test]
    fn reversal_is_an_involution(g in small_graph(), pick in any::<usize>(), label in 1u64..4, phases in 0u64..5) {
        let r = graph_rv(&g, &node(&g, pick), label, &Limits::phases(phases)).unwrap();
        let rr = r.reversed().reversed();
        prop_assert_eq!(rr.steps(), r.steps());
        prop_assert_eq!(rr.start(), r.start());
        prop_assert!(r.reversed().check_against(&g).is_ok());
    }

    #[test]
    fn routes_are_prefix_stable(g in small_graph(), pick in any::<usize>(), label in 1u64..4, p in 0u64..6) {
        let v = node(&g, pick);
        let short = graph_rv(&g, &v, label, &Limits::phases(p)).unwrap();
        let long = graph_rv(&g, &v, label, &Limits::phases(p + 1)).unwrap();
        prop_assert_eq!(short.steps(), &long.steps()[..short.len()]);
        prop_assert_eq!(short.phase_marks(), &long.phase_marks()[..short.phase_marks().len()]);
        prop_assert!(long.unclosed_phases().is_empty());
        prop_assert!(long.check_against(&g).is_ok());
    }

    #[test]
    fn tunnels_are_symmetric(g in small_graph(), a in any::<usize>(), b in any::<usize>(), p in 0u64..6) {
        let lim = Limits::phases(p);
        let r1 = graph_rv(&g, &node(&g, a), 1, &lim).unwrap();
        let r2 = graph_rv(&g, &node(&g, b), 2, &lim).unwrap();
        let n12 = tunnel_check(&r1, &r2).map(|c| c.n);
        let n21 = tunnel_check(&r2, &r1).map(|c| c.n);
        prop_assert_eq!(n12, n21);
        if let Some(c) = tunnel_check(&r1, &r2) {
            prop_assert_eq!(c.meeting_path.len(), c.n);
        }
    }

    #[test]
    fn dumps_round_trip(g in small_graph(), pick in any::<usize>(), label in 1u64..4, p in 0u64..4) {
        let r = graph_rv(&g, &node(&g, pick), label, &Limits::phases(p)).unwrap();
        let named: Route<String> = r.map_nodes(|n| g.node_label(n));
        let parsed = parse_route_dump(&dump_route(&r, |n| g.node_label(n))).unwrap();
        prop_assert_eq!(parsed, named);
    }

    #[test]
    fn schedules_are_valid(s in strategy(), segments in 0usize..20, seed in any::<u64>()) {
        let w = make_schedule(s, segments, |m| q(m as i64 % 3 + 1, 2), seed);
        prop_assert!(w.validate(segments).is_ok());
    }

    #[test]
    fn terrain_ports_invert(x in -20i64..20, y in -20i64..20, port in 1u64..5000) {
        let p = pt((x, 7), (y, 3));
        let target = gt_target(&p, port).unwrap();
        prop_assert_eq!(gt_port(&(&target - &p)).unwrap(), port);
    }

    #[test]
    fn routes_are_frame_equivariant(dx in -8i64..8, dy in -8i64..8, label in 1u64..4) {
        let t = unit_square();
        let start = pt((1, 3), (2, 5));
        let shift = pt((dx, 3), (dy, 2));
        let here = geometric_rv(&t, &start, label, &Limits::phases(3)).unwrap();
        let there = geometric_rv(&t.translated(&shift), &(&start + &shift), label, &Limits::phases(3)).unwrap();
        prop_assert_eq!(here.translated(&shift).to_points(), there.to_points());
        prop_assert!(here.audit(&t).is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn planar_meetings_are_sound(
        a in prop::collection::vec((-4i64..4, -4i64..4), 1..5),
        b in prop::collection::vec((-4i64..4, -4i64..4), 1..5),
        s1 in strategy(),
        s2 in strategy(),
        seed in any::<u64>(),
    ) {
        let to_pts = |v: &[(i64, i64)]| -> Vec<QPoint> { v.iter().map(|&(x, y)| pt((x, 2), (y, 2))).collect() };
        let (pa, pb) = (to_pts(&a), to_pts(&b));
        let walk = |s: Walk, n: usize, k: u64| StrategyWalk::new(s, n, |_| qi(1), seed ^ k);
        let v = simulate_planar(
            pa.as_slice(),
            pb.as_slice(),
            walk(s1.clone(), pa.len() - 1, 1),
            walk(s2.clone(), pb.len() - 1, 2),
        );
        let min = v.min_distance_sq.clone().unwrap();
        prop_assert!(min >= Q::from_integer(0.into()));
        if v.met {
            let t = v.time.clone().unwrap();
            let x = planar_location_at(pa.as_slice(), walk(s1, pa.len() - 1, 1), &t);
            let y = planar_location_at(pb.as_slice(), walk(s2, pb.len() - 1, 2), &t);
            prop_assert_eq!(&x, &y);
            prop_assert_eq!(v.location, Some(MeetingPoint::Point { x: x.x, y: x.y }));
            prop_assert_eq!(min, Q::from_integer(0.into()));
        }
    }
}
