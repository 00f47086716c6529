//! Frozen outputs: the enumeration tables, two route dumps and the verdicts of
//! the graph scenarios. Terrain verdicts are checked by the acceptance run.

use std::fs;
use std::path::PathBuf;

use tunnelmeet::enumeration::{phi, phi_index, rational_pair, Quadruple};
use tunnelmeet::rational::fmt_q;
use tunnelmeet::rendezvous::Limits;
use tunnelmeet::scenario::{route_dump, run_scenario_file, Overrides, World};

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

#[test]
fn enumeration_table_is_frozen() {
    let text = golden("enumeration-v1.tsv");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# tunnelmeet enumeration enum-v1"));
    let mut count = 0;
    for line in lines {
        let f: Vec<&str> = line.split('\t').collect();
        let k: u64 = f[0].parse().unwrap();
        let nums = |s: &str| s.split(',').map(|x| x.parse().unwrap()).collect::<Vec<u64>>();
        let q = Quadruple::new(f[1].parse().unwrap(), f[2].parse().unwrap(), nums(f[3]), nums(f[4])).unwrap();
        assert_eq!(phi(k).unwrap(), q, "phi({k})");
        assert_eq!(phi_index(&q).unwrap(), k);
        count += 1;
    }
    assert_eq!(count, 1000);
}

#[test]
fn rational_table_is_frozen() {
    let text = golden("rationals-v1.tsv");
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split('\t').collect();
        let z = rational_pair(f[0].parse().unwrap()).unwrap();
        assert_eq!(
            (fmt_q(&z.q1), fmt_q(&z.q2)),
            (f[1].to_string(), f[2].to_string()),
            "{line}"
        );
    }
}

#[test]
fn compactness_constants() {
    let short = Quadruple::new(1, 2, vec![1], vec![1]).unwrap();
    let longer = Quadruple::new(1, 2, vec![1, 2], vec![2, 1]).unwrap();
    assert_eq!(phi_index(&short).unwrap(), 1);
    assert_eq!(phi_index(&longer).unwrap(), 27);
}

#[test]
fn route_dumps_are_frozen() {
    let k2 = World::from_file(&scenario("k2.json")).unwrap();
    assert_eq!(
        route_dump(&k2, "A", 1, &Limits::phases(3)).unwrap(),
        golden("k2_label1_route.tsv")
    );
    let square = World::from_file(&scenario("worlds/unit_square.json")).unwrap();
    assert_eq!(
        route_dump(&square, "1/4 1/4", 1, &Limits::phases(3)).unwrap(),
        golden("square_label1_route.tsv")
    );
}

#[test]
fn graph_verdicts_are_frozen() {
    for name in ["k2", "p3", "shifted_line"] {
        let v = run_scenario_file(&scenario(&format!("{name}.json")), &Overrides::default()).unwrap();
        assert_eq!(v.to_json(false), golden(&format!("verdicts/{name}.json")), "{name}");
    }
}

#[test]
fn disconnected_scenario_is_an_input_error() {
    let err = run_scenario_file(&scenario("disconnected.json"), &Overrides::default()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(golden("verdicts/disconnected.json").is_empty());
}
