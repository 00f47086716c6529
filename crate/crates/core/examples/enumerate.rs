//! The first quadruples and rational pairs, and the index of a hand-built quadruple.

use tunnelmeet::enumeration::{phi, phi_index, rational_pair, Quadruple};
use tunnelmeet::rational::fmt_q;

fn main() {
    println!("first quadruples:");
    for k in 1..=12 {
        let q = phi(k).unwrap();
        println!("  phi({k:>2}) = ({}, {}, {:?}, {:?})", q.i, q.j, q.s_prime, q.s_dprime);
    }
    println!("first rational pairs:");
    for k in 1..=8 {
        let z = rational_pair(k).unwrap();
        println!("  z({k}) = ({}, {})", fmt_q(&z.q1), fmt_q(&z.q2));
    }
    let q = Quadruple::new(2, 5, vec![1, 3], vec![2, 1]).unwrap();
    println!("index of {q:?}: {}", phi_index(&q).unwrap());
}
