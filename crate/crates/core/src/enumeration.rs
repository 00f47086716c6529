//! Constructive bijections: Cantor pairing, finite-sequence codes, the
//! quadruple enumeration driving route phases, and the enumeration of pairs
//! of rationals used as port offsets in terrains.
//!
//! Every agent must use the same enumerations, so they are frozen under
//! [`ENUMERATION_VERSION`]. The golden file `tests/golden/enumeration-v1.tsv`
//! pins the first values; changing any order here is a breaking change.
//!
//! # Quadruple order
//!
//! Quadruples `(i, j, s', s'')` are listed by increasing *weight*
//!
//! ```text
//! weight = 2(j - 2) + (n - 1) + sum(s'_m - 1) + sum(s''_m - 1)
//! ```
//!
//! where `n = len(s') = len(s'')`. Every weight class is finite. Inside a class
//! the order is by `n`, then `j`, then `i`, then the joint tuple
//! `(s'_1..s'_n, s''_1..s''_n)` lexicographically. Both sequences are produced
//! from one joint tuple, so equal lengths hold by construction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_q, Q};

pub type Label = u64;
pub type Port = u64;

pub const ENUMERATION_VERSION: &str = "enum-v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    #[error("enumeration indices start at 1")]
    ZeroIndex,
    #[error("sequence must be non-empty")]
    EmptySequence,
    #[error("sequence term {0} is not a positive integer")]
    NonPositiveTerm(u64),
    #[error("labels must satisfy 0 < i < j (got i={i}, j={j})")]
    LabelOrder { i: Label, j: Label },
    #[error("port sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("value does not fit in a 64-bit index")]
    Overflow,
}

// ---------------------------------------------------------------------------
// Cantor pairing

/// Cantor pairing `(a+b)(a+b+1)/2 + b`.
pub fn pair_encode(a: u64, b: u64) -> Result<u64, EnumerationError> {
    let s = a as u128 + b as u128;
    let v = s
        .checked_mul(s + 1)
        .map(|t| t / 2 + b as u128)
        .ok_or(EnumerationError::Overflow)?;
    u64::try_from(v).map_err(|_| EnumerationError::Overflow)
}

pub fn pair_decode(n: u64) -> (u64, u64) {
    let n = n as u128;
    let mut w = ((8 * n + 1).sqrt() - 1) / 2;
    // isqrt is exact, but keep the triangle bracket honest.
    while w * (w + 1) / 2 > n {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= n {
        w += 1;
    }
    let b = n - w * (w + 1) / 2;
    let a = w - b;
    (a as u64, b as u64)
}

// ---------------------------------------------------------------------------
// Finite sequences of positive integers

/// Codes a non-empty sequence of positive integers as
/// `pair(len - 1, fold(pair, terms - 1))`.
pub fn seq_encode(s: &[u64]) -> Result<u64, EnumerationError> {
    let (first, rest) = s.split_first().ok_or(EnumerationError::EmptySequence)?;
    if let Some(&bad) = s.iter().find(|&&t| t == 0) {
        return Err(EnumerationError::NonPositiveTerm(bad));
    }
    let mut acc = first - 1;
    for &t in rest {
        acc = pair_encode(acc, t - 1)?;
    }
    pair_encode((s.len() - 1) as u64, acc)
}

pub fn seq_decode(n: u64) -> Vec<u64> {
    let (len_minus_one, mut acc) = pair_decode(n);
    let mut terms = Vec::with_capacity((len_minus_one as usize).saturating_add(1).min(64));
    for _ in 0..len_minus_one {
        let (rest, last) = pair_decode(acc);
        terms.push(last + 1);
        acc = rest;
    }
    terms.push(acc + 1);
    terms.reverse();
    terms
}

// ---------------------------------------------------------------------------
// Quadruples

/// One hypothesis `(i, j, s', s'')`: agent `i` reaches agent `j` by following
/// ports `s'`, and the reverse path uses ports `s''`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quadruple {
    pub i: Label,
    pub j: Label,
    pub s_prime: Vec<Port>,
    pub s_dprime: Vec<Port>,
}

impl Quadruple {
    pub fn new(i: Label, j: Label, s_prime: Vec<Port>, s_dprime: Vec<Port>) -> Result<Self, EnumerationError> {
        let q = Quadruple {
            i,
            j,
            s_prime,
            s_dprime,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<(), EnumerationError> {
        if self.i == 0 || self.i >= self.j {
            return Err(EnumerationError::LabelOrder { i: self.i, j: self.j });
        }
        if self.s_prime.len() != self.s_dprime.len() {
            return Err(EnumerationError::LengthMismatch(
                self.s_prime.len(),
                self.s_dprime.len(),
            ));
        }
        if self.s_prime.is_empty() {
            return Err(EnumerationError::EmptySequence);
        }
        if let Some(&bad) = self.s_prime.iter().chain(&self.s_dprime).find(|&&p| p == 0) {
            return Err(EnumerationError::NonPositiveTerm(bad));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.s_prime.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_prime.is_empty()
    }

    fn weight(&self) -> Option<u128> {
        let mut w = LABEL_WEIGHT * (self.j as u128 - 2) + (self.len() as u128 - 1);
        for &p in self.s_prime.iter().chain(&self.s_dprime) {
            w = w.checked_add(p as u128 - 1)?;
        }
        Some(w)
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &[Port]| s.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        write!(
            f,
            "({},{},({}),({}))",
            self.i,
            self.j,
            join(&self.s_prime),
            join(&self.s_dprime)
        )
    }
}

/// Weight of each unit of `j - 2` in the grading.
const LABEL_WEIGHT: u128 = 2;

/// `C(n, k)`, saturating at `u128::MAX`. Saturation only happens far above
/// `u64::MAX`, which is all the callers compare against.
fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for step in 1..=k {
        acc = match acc.checked_mul(n - k + step) {
            Some(v) => v / step,
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of `m`-tuples of non-negative integers summing to `total`.
fn tuples_summing_to(total: u128, m: u128) -> u128 {
    if m == 0 {
        return u128::from(total == 0);
    }
    binom(total + m - 1, m - 1)
}

/// Label-and-length header of a quadruple inside its weight class.
struct Block {
    n: u128,
    j: u128,
    rest: u128,
}

/// Blocks of weight class `w` in enumeration order.
fn blocks(w: u128) -> impl Iterator<Item = Block> {
    (1..=w + 1).flat_map(move |n| {
        (2u128..)
            .take_while(move |j| LABEL_WEIGHT * (j - 2) + (n - 1) <= w)
            .map(move |j| Block {
                n,
                j,
                rest: w - LABEL_WEIGHT * (j - 2) - (n - 1),
            })
    })
}

impl Block {
    fn per_label(&self) -> u128 {
        tuples_summing_to(self.rest, 2 * self.n)
    }

    fn size(&self) -> u128 {
        self.per_label().saturating_mul(self.j - 1)
    }
}

fn class_size(w: u128) -> u128 {
    blocks(w).fold(0u128, |acc, b| acc.saturating_add(b.size()))
}

fn unrank_tuple(total: u128, m: u128, mut r: u128) -> Vec<u128> {
    let mut out = Vec::with_capacity(m as usize);
    let mut remaining = total;
    for pos in 0..m {
        let tail = m - pos - 1;
        if tail == 0 {
            out.push(remaining);
            break;
        }
        let mut x = 0;
        loop {
            let c = tuples_summing_to(remaining - x, tail);
            if r < c {
                break;
            }
            r -= c;
            x += 1;
        }
        out.push(x);
        remaining -= x;
    }
    out
}

fn rank_tuple(tuple: &[u128]) -> Option<u128> {
    let m = tuple.len() as u128;
    let mut remaining: u128 = tuple.iter().sum();
    let mut r: u128 = 0;
    for (pos, &x) in tuple.iter().enumerate() {
        let tail = m - pos as u128 - 1;
        if tail == 0 {
            break;
        }
        for smaller in 0..x {
            r = r.checked_add(tuples_summing_to(remaining - smaller, tail))?;
            if r > u64::MAX as u128 {
                return None;
            }
        }
        remaining -= x;
    }
    Some(r)
}

/// The `k`-th quadruple (`k >= 1`).
pub fn phi(k: u64) -> Result<Quadruple, EnumerationError> {
    if k == 0 {
        return Err(EnumerationError::ZeroIndex);
    }
    let mut r = (k - 1) as u128;
    let mut w = 0u128;
    loop {
        let size = class_size(w);
        if r < size {
            break;
        }
        r -= size;
        w += 1;
    }
    for block in blocks(w) {
        let size = block.size();
        if r >= size {
            r -= size;
            continue;
        }
        let per_label = block.per_label();
        let i = 1 + r / per_label;
        let tuple = unrank_tuple(block.rest, 2 * block.n, r % per_label);
        let n = block.n as usize;
        let ports: Vec<Port> = tuple.iter().map(|&t| (t + 1) as Port).collect();
        return Ok(Quadruple {
            i: i as Label,
            j: block.j as Label,
            s_prime: ports[..n].to_vec(),
            s_dprime: ports[n..].to_vec(),
        });
    }
    unreachable!("weight class {w} exhausted before rank")
}

/// Inverse of [`phi`].
pub fn phi_index(q: &Quadruple) -> Result<u64, EnumerationError> {
    q.validate()?;
    let w = q.weight().ok_or(EnumerationError::Overflow)?;
    let limit = u64::MAX as u128;
    let mut idx: u128 = 0;
    for lower in 0..w {
        idx = idx.saturating_add(class_size(lower));
        if idx > limit {
            return Err(EnumerationError::Overflow);
        }
    }
    let (n, j) = (q.len() as u128, q.j as u128);
    for block in blocks(w) {
        if block.n == n && block.j == j {
            idx = idx.saturating_add(block.per_label().saturating_mul(q.i as u128 - 1));
            let tuple: Vec<u128> = q.s_prime.iter().chain(&q.s_dprime).map(|&p| p as u128 - 1).collect();
            let r = rank_tuple(&tuple).ok_or(EnumerationError::Overflow)?;
            idx = idx.saturating_add(r).saturating_add(1);
            return u64::try_from(idx).map_err(|_| EnumerationError::Overflow);
        }
        idx = idx.saturating_add(block.size());
        if idx > limit {
            return Err(EnumerationError::Overflow);
        }
    }
    unreachable!("quadruple block missing from its weight class")
}

/// Iterator over `phi(1), phi(2), ...`.
pub fn quadruples() -> impl Iterator<Item = Quadruple> {
    (1u64..).map(|k| phi(k).expect("k >= 1"))
}

// ---------------------------------------------------------------------------
// Rationals and pairs of rationals

/// A pair of exact rationals (lowest terms are maintained by [`Q`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPair {
    pub q1: Q,
    pub q2: Q,
}

impl fmt::Display for RationalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", fmt_q(&self.q1), fmt_q(&self.q2))
    }
}

fn euler_phi(mut h: u64) -> u64 {
    let mut result = h;
    let mut p = 2;
    while p * p <= h {
        if h % p == 0 {
            while h % p == 0 {
                h /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if h > 1 {
        result -= result / h;
    }
    result
}

/// The rationals listed as `0`, then by height `|p| + q = 2, 3, ...`; inside a
/// height by increasing denominator, `+p/q` before `-p/q`, skipping fractions
/// not in lowest terms.
pub fn rational_at(idx: u64) -> Q {
    if idx == 0 {
        return Q::zero();
    }
    let mut r = idx - 1;
    let mut h: u64 = 2;
    loop {
        let size = 2 * euler_phi(h);
        if r < size {
            break;
        }
        r -= size;
        h += 1;
    }
    let negative = r % 2 == 1;
    let mut nth = r / 2;
    let mut den = 1;
    loop {
        if den.gcd(&h) == 1 {
            if nth == 0 {
                break;
            }
            nth -= 1;
        }
        den += 1;
    }
    let num = BigInt::from(h - den);
    let v = Q::new(num, BigInt::from(den));
    if negative {
        -v
    } else {
        v
    }
}

/// Inverse of [`rational_at`].
pub fn rational_index(v: &Q) -> Result<u64, EnumerationError> {
    if v.is_zero() {
        return Ok(0);
    }
    let num = u64::try_from(v.numer().abs()).map_err(|_| EnumerationError::Overflow)?;
    let den = u64::try_from(v.denom().clone()).map_err(|_| EnumerationError::Overflow)?;
    let h = num.checked_add(den).ok_or(EnumerationError::Overflow)?;
    let mut idx: u128 = 1;
    for lower in 2..h {
        idx += 2 * euler_phi(lower) as u128;
    }
    let before = (1..den).filter(|d| d.gcd(&h) == 1).count() as u128;
    idx += 2 * before + u128::from(v.is_negative());
    u64::try_from(idx).map_err(|_| EnumerationError::Overflow)
}

/// The `k`-th pair of rationals (`k >= 1`); `rational_pair(1) = (0, 0)`.
pub fn rational_pair(k: u64) -> Result<RationalPair, EnumerationError> {
    if k == 0 {
        return Err(EnumerationError::ZeroIndex);
    }
    let (a, b) = pair_decode(k - 1);
    Ok(RationalPair {
        q1: rational_at(a),
        q2: rational_at(b),
    })
}

pub fn rational_pair_index(pair: &RationalPair) -> Result<u64, EnumerationError> {
    let a = rational_index(&pair.q1)?;
    let b = rational_index(&pair.q2)?;
    pair_encode(a, b)?.checked_add(1).ok_or(EnumerationError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn pairing_small_values() {
        assert_eq!(pair_encode(0, 0).unwrap(), 0);
        assert_eq!(pair_encode(1, 0).unwrap(), 1);
        assert_eq!(pair_encode(0, 1).unwrap(), 2);
        assert_eq!(pair_decode(2), (0, 1));
        assert!(pair_encode(u64::MAX, 1).is_err());
    }

    #[test]
    fn pairing_round_trip_sweep() {
        for n in 0..10_000 {
            let (a, b) = pair_decode(n);
            assert_eq!(pair_encode(a, b).unwrap(), n);
        }
        let (a, b) = pair_decode(u64::MAX);
        assert_eq!(pair_encode(a, b).unwrap(), u64::MAX);
    }

    #[test]
    fn sequence_codec() {
        assert_eq!(seq_decode(seq_encode(&[1]).unwrap()), vec![1]);
        assert_eq!(seq_encode(&[]), Err(EnumerationError::EmptySequence));
        assert_eq!(seq_encode(&[2, 0]), Err(EnumerationError::NonPositiveTerm(0)));
        let mut seen = std::collections::HashSet::new();
        for n in 0..10_000 {
            let s = seq_decode(n);
            assert!(s.iter().all(|&t| t >= 1));
            assert_eq!(seq_encode(&s).unwrap(), n);
            assert!(seen.insert(s));
        }
    }

    #[test]
    fn quadruple_validation() {
        assert!(Quadruple::new(2, 2, vec![1], vec![1]).is_err());
        assert!(Quadruple::new(0, 2, vec![1], vec![1]).is_err());
        assert_eq!(
            Quadruple::new(1, 2, vec![1, 2], vec![1]),
            Err(EnumerationError::LengthMismatch(2, 1))
        );
        assert!(Quadruple::new(1, 2, vec![], vec![]).is_err());
        assert!(Quadruple::new(1, 2, vec![0], vec![1]).is_err());
    }

    #[test]
    fn first_quadruples() {
        let q1 = phi(1).unwrap();
        assert_eq!(q1, Quadruple::new(1, 2, vec![1], vec![1]).unwrap());
        assert_eq!(phi(0), Err(EnumerationError::ZeroIndex));
        // weight 1: (1,2,(2),(1)), (1,2,(1),(2)); n=2 and j=3 need weight >= 1 too
        assert_eq!(phi(2).unwrap().to_string(), "(1,2,(1),(2))");
        assert_eq!(phi(3).unwrap().to_string(), "(1,2,(2),(1))");
        assert_eq!(phi(4).unwrap().to_string(), "(1,2,(1,1),(1,1))");
    }

    #[test]
    fn quadruple_round_trip_sweep() {
        for k in 1..=10_000u64 {
            let q = phi(k).unwrap();
            q.validate().unwrap();
            assert_eq!(phi_index(&q).unwrap(), k, "{q}");
        }
    }

    #[test]
    fn class_sizes_are_exact_counts() {
        // brute-force count of weight-w quadruples
        for w in 0..7u128 {
            let mut count = 0u128;
            for j in 2..=6u128 {
                for n in 1..=w + 1 {
                    let head = 2 * (j - 2) + (n - 1);
                    if head > w {
                        continue;
                    }
                    let rest = w - head;
                    let m = 2 * n as usize;
                    let mut tuples = 0u128;
                    let mut t = vec![0u128; m];
                    loop {
                        if t.iter().sum::<u128>() == rest {
                            tuples += 1;
                        }
                        let mut pos = 0;
                        while pos < m {
                            t[pos] += 1;
                            if t[pos] <= rest {
                                break;
                            }
                            t[pos] = 0;
                            pos += 1;
                        }
                        if pos == m {
                            break;
                        }
                    }
                    count += tuples * (j - 1);
                }
            }
            assert_eq!(class_size(w), count, "weight {w}");
        }
    }

    #[test]
    fn huge_quadruple_overflows() {
        let q = Quadruple::new(1, 2, vec![1 << 40, 3, 5], vec![7, 1 << 40, 2]).unwrap();
        assert_eq!(phi_index(&q), Err(EnumerationError::Overflow));
    }

    #[test]
    fn rational_order_start() {
        let firsts: Vec<String> = (0..11).map(|i| fmt_q(&rational_at(i))).collect();
        assert_eq!(
            firsts,
            ["0/1", "1/1", "-1/1", "2/1", "-2/1", "1/2", "-1/2", "3/1", "-3/1", "1/3", "-1/3"]
        );
        assert_eq!(
            rational_pair(1).unwrap(),
            RationalPair {
                q1: q(0, 1),
                q2: q(0, 1)
            }
        );
        assert_eq!(
            rational_pair(2).unwrap(),
            RationalPair {
                q1: q(1, 1),
                q2: q(0, 1)
            }
        );
    }

    #[test]
    fn rational_index_inverse() {
        for i in 0..5_000 {
            assert_eq!(rational_index(&rational_at(i)).unwrap(), i);
        }
    }
}
