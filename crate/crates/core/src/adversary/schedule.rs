//! Walk schedules: piecewise-linear maps from time to a position on a route.
//!
//! Positions use the segment-normalized coordinate `u`: route segment `m`
//! (0-based) covers `u in [m, m + 1]`. Within a segment the agent's point is
//! the affine image of `u - m`, so every schedule stays rational.

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_q, q, qi, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScheduleError {
    #[error("ScheduleMismatch: {0}")]
    Mismatch(String),
}

fn mismatch(msg: impl Into<String>) -> ScheduleError {
    ScheduleError::Mismatch(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    First,
    Second,
}

/// How the adversary moves one agent along its route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    /// Speed 1: segment `m` takes its nominal length in time.
    UnitSpeed,
    /// Unit time slots; the first role moves in even slots, the second in odd
    /// slots, so at most one of the two agents is moving at any time.
    Alternating(Role),
    /// Random pauses and random durations per segment.
    RandomSpeeds,
    /// Back-and-forth motion inside every segment before finishing it.
    Jitter,
    /// Wait at the start until time `T`, then unit speed.
    FrozenPrefix(Q),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::UnitSpeed => f.write_str("unit_speed"),
            Strategy::Alternating(Role::First) => f.write_str("alternating(first)"),
            Strategy::Alternating(Role::Second) => f.write_str("alternating(second)"),
            Strategy::RandomSpeeds => f.write_str("random_speeds"),
            Strategy::Jitter => f.write_str("jitter"),
            Strategy::FrozenPrefix(t) => write!(f, "frozen_prefix({})", fmt_q(t)),
        }
    }
}

/// One linear stretch of a walk on segment `seg`, moving the local
/// coordinate from `l0` at `t0` to `l1` at `t1` (`t0 < t1`, both in `[0, 1]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub t0: Q,
    pub t1: Q,
    pub seg: usize,
    pub l0: Q,
    pub l1: Q,
}

/// Lazily generated pieces of a strategy's walk over a route with
/// `segments` segments. `nominal(m)` is the unit-speed duration of segment `m`.
pub struct StrategyWalk<'a> {
    strategy: Strategy,
    segments: usize,
    nominal: Box<dyn Fn(usize) -> Q + 'a>,
    rng: ChaCha8Rng,
    next_seg: usize,
    now: Q,
    queue: VecDeque<Piece>,
}

impl<'a> StrategyWalk<'a> {
    pub fn new(strategy: Strategy, segments: usize, nominal: impl Fn(usize) -> Q + 'a, seed: u64) -> Self {
        StrategyWalk {
            strategy,
            segments,
            nominal: Box::new(nominal),
            rng: ChaCha8Rng::seed_from_u64(seed),
            next_seg: 0,
            now: qi(0),
            queue: VecDeque::new(),
        }
    }

    fn push(&mut self, seg: usize, dt: Q, l0: Q, l1: Q) {
        let t0 = self.now.clone();
        self.now += dt;
        self.queue.push_back(Piece {
            t0,
            t1: self.now.clone(),
            seg,
            l0,
            l1,
        });
    }

    fn quarter(&mut self, lo: i64, hi: i64) -> Q {
        q(self.rng.gen_range(lo..=hi), 4)
    }

    fn plan_segment(&mut self, m: usize) {
        let (zero, one) = (qi(0), qi(1));
        match self.strategy.clone() {
            Strategy::UnitSpeed => {
                let d = (self.nominal)(m);
                self.push(m, d, zero, one);
            }
            Strategy::Alternating(role) => {
                if role == Role::Second {
                    self.push(m, qi(1), zero.clone(), zero.clone());
                }
                self.push(m, qi(1), zero, one.clone());
                if role == Role::First && m + 1 < self.segments {
                    self.push(m, qi(1), one.clone(), one);
                }
            }
            Strategy::RandomSpeeds => {
                if self.rng.gen_ratio(1, 3) {
                    let pause = self.quarter(1, 8);
                    self.push(m, pause, zero.clone(), zero.clone());
                }
                let d = self.quarter(1, 12);
                self.push(m, d, zero, one);
            }
            Strategy::Jitter => {
                let f1 = q(self.rng.gen_range(1..=7), 8);
                let back: i64 = self.rng.gen_range(0..8);
                let f2 = &f1 * q(back, 8);
                let d1 = self.quarter(1, 4);
                let d2 = self.quarter(1, 4);
                let d3 = self.quarter(1, 4);
                self.push(m, d1, zero, f1.clone());
                self.push(m, d2, f1, f2.clone());
                self.push(m, d3, f2, one);
            }
            Strategy::FrozenPrefix(t) => {
                if m == 0 && t > zero {
                    self.push(0, t, zero.clone(), zero.clone());
                }
                let d = (self.nominal)(m);
                self.push(m, d, zero, one);
            }
        }
    }
}

impl Iterator for StrategyWalk<'_> {
    type Item = Piece;

    fn next(&mut self) -> Option<Piece> {
        while self.queue.is_empty() {
            if self.next_seg >= self.segments {
                return None;
            }
            let m = self.next_seg;
            self.next_seg += 1;
            self.plan_segment(m);
        }
        self.queue.pop_front()
    }
}

/// A materialized walk: breakpoints `(time, u)` plus, for each segment `m`,
/// the time at which it is fully covered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkSchedule {
    pub breakpoints: Vec<(Q, Q)>,
    pub segment_completion: Vec<Q>,
}

impl WalkSchedule {
    /// Collects pieces into a schedule.
    pub fn from_pieces(pieces: impl IntoIterator<Item = Piece>) -> Self {
        let mut breakpoints = vec![(qi(0), qi(0))];
        let mut segment_completion = Vec::new();
        for p in pieces {
            let base = Q::from_integer((p.seg as u64).into());
            if p.l1 == qi(1) {
                // a later piece on the same segment overrides this completion
                segment_completion.truncate(p.seg);
                segment_completion.push(p.t1.clone());
            }
            breakpoints.push((p.t1, base + p.l1));
        }
        WalkSchedule {
            breakpoints,
            segment_completion,
        }
    }

    /// Final time of the walk; the agent is parked afterwards.
    pub fn end_time(&self) -> &Q {
        &self.breakpoints.last().expect("at least the origin").0
    }

    /// Checks every schedule invariant against a route with `segments`
    /// segments.
    pub fn validate(&self, segments: usize) -> Result<(), ScheduleError> {
        let zero = qi(0);
        let first = self.breakpoints.first().ok_or_else(|| mismatch("no breakpoints"))?;
        if first.0 != zero || first.1 != zero {
            return Err(mismatch("walk must start at time 0 at the route start"));
        }
        if self.segment_completion.len() != segments {
            return Err(mismatch(format!(
                "{} completion times for {segments} segments",
                self.segment_completion.len()
            )));
        }
        for w in self.breakpoints.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(mismatch(format!("times not increasing at {}", fmt_q(&w[1].0))));
            }
        }
        let mut m = 0usize;
        for (idx, w) in self.breakpoints.windows(2).enumerate() {
            let (t0, u0) = &w[0];
            let (t1, u1) = &w[1];
            if m >= segments {
                if u0 != u1 {
                    return Err(mismatch("movement after the last segment"));
                }
                continue;
            }
            let lo = Q::from_integer((m as u64).into());
            let hi = &lo + qi(1);
            if t0 < self.window_start(m) || *u0 < lo || *u0 > hi || *u1 < lo || *u1 > hi {
                return Err(mismatch(format!("piece {idx} leaves segment {m}")));
            }
            if *t1 == self.segment_completion[m] {
                if *u1 != hi {
                    return Err(mismatch(format!("segment {m} not completed at its completion time")));
                }
                m += 1;
            } else if *t1 > self.segment_completion[m] {
                return Err(mismatch(format!("completion time of segment {m} is not a breakpoint")));
            }
        }
        if m != segments {
            return Err(mismatch(format!("walk stops inside segment {m}")));
        }
        Ok(())
    }

    fn window_start(&self, m: usize) -> &Q {
        if m == 0 {
            &self.breakpoints[0].0
        } else {
            &self.segment_completion[m - 1]
        }
    }

    /// Pieces of a validated schedule.
    pub fn pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        let mut m = 0usize;
        self.breakpoints.windows(2).filter_map(move |w| {
            if m >= self.segment_completion.len() {
                return None;
            }
            let base = Q::from_integer((m as u64).into());
            let piece = Piece {
                t0: w[0].0.clone(),
                t1: w[1].0.clone(),
                seg: m,
                l0: &w[0].1 - &base,
                l1: &w[1].1 - &base,
            };
            if w[1].0 == self.segment_completion[m] {
                m += 1;
            }
            Some(piece)
        })
    }

    /// Position `u` at time `t` (parked after the end).
    pub fn position(&self, t: &Q) -> Q {
        let bp = &self.breakpoints;
        let idx = bp.partition_point(|(bt, _)| bt <= t);
        if idx == 0 {
            return bp[0].1.clone();
        }
        if idx == bp.len() {
            return bp[idx - 1].1.clone();
        }
        let (t0, u0) = &bp[idx - 1];
        let (t1, u1) = &bp[idx];
        u0 + (u1 - u0) * (t - t0) / (t1 - t0)
    }
}

/// Builds the schedule of `strategy` for a route with `segments` segments.
pub fn make_schedule(strategy: Strategy, segments: usize, nominal: impl Fn(usize) -> Q, seed: u64) -> WalkSchedule {
    WalkSchedule::from_pieces(StrategyWalk::new(strategy, segments, nominal, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(_: usize) -> Q {
        qi(1)
    }

    #[test]
    fn unit_speed_single_segment() {
        let w = make_schedule(Strategy::UnitSpeed, 1, ones, 0);
        assert_eq!(w.breakpoints, vec![(qi(0), qi(0)), (qi(1), qi(1))]);
        assert_eq!(w.segment_completion, vec![qi(1)]);
        w.validate(1).unwrap();
        assert_eq!(w.position(&q(1, 4)), q(1, 4));
        assert_eq!(w.position(&qi(9)), qi(1));
    }

    #[test]
    fn strategies_validate() {
        let strategies = [
            Strategy::UnitSpeed,
            Strategy::Alternating(Role::First),
            Strategy::Alternating(Role::Second),
            Strategy::RandomSpeeds,
            Strategy::Jitter,
            Strategy::FrozenPrefix(q(5, 2)),
        ];
        for s in strategies {
            for seed in 0..50 {
                for segs in [0, 1, 2, 7] {
                    let w = make_schedule(s.clone(), segs, |m| q(m as i64 + 1, 2), seed);
                    w.validate(segs).unwrap_or_else(|e| panic!("{s} seed {seed}: {e}"));
                    assert_eq!(w.breakpoints.last().unwrap().1, qi(segs as i64));
                    let rebuilt = WalkSchedule::from_pieces(w.pieces());
                    assert_eq!(rebuilt, w);
                }
            }
        }
    }

    #[test]
    fn alternating_agents_never_move_together() {
        let a = make_schedule(Strategy::Alternating(Role::First), 5, ones, 0);
        let b = make_schedule(Strategy::Alternating(Role::Second), 5, ones, 0);
        for k in 0..24 {
            let (t0, t1) = (q(k, 2), q(k + 1, 2));
            let moves = |w: &WalkSchedule| w.position(&t0) != w.position(&t1);
            assert!(!(moves(&a) && moves(&b)), "both move in [{k}/2, {}/2]", k + 1);
        }
    }

    #[test]
    fn invalid_schedules_rejected() {
        let ok = make_schedule(Strategy::UnitSpeed, 2, ones, 0);
        let mut late = ok.clone();
        late.breakpoints[1].1 = q(3, 2);
        assert!(late.validate(2).is_err());
        let mut backwards = ok.clone();
        backwards.breakpoints[2].0 = qi(1);
        assert!(backwards.validate(2).is_err());
        assert!(ok.validate(3).is_err());
        let mut skip = ok;
        skip.segment_completion[0] = q(3, 2);
        assert!(skip.validate(2).is_err());
    }
}
