//! The asynchronous adversary: walk schedules over finished routes and
//! exact meeting detection.
//!
//! Routes say where an agent goes; the adversary decides when. A meeting is
//! the two agents occupying the same point (node, edge point or planar
//! point) at the same instant. Simulation stops at the earliest meeting.

mod detect;
mod schedule;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use detect::{
    graph_location_at, planar_location_at, simulate_graph, simulate_planar, MeetingPoint, MeetingVerdict,
};
pub use schedule::{make_schedule, Piece, Role, ScheduleError, Strategy, StrategyWalk, WalkSchedule};

use crate::geometry::Polyline;
use crate::graph::{EdgeTraversal, PortGraph};
use crate::rational::{q, qi, serde_q, Q};
use crate::rendezvous::Route;

pub const VERDICT_SCHEMA: &str = "verdict-v1";

/// The five named strategy pairs of the default suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteStrategy {
    UnitSpeed,
    Alternating,
    RandomSpeeds,
    Jitter,
    FrozenPrefix,
}

impl SuiteStrategy {
    pub const ALL: [SuiteStrategy; 5] = [
        SuiteStrategy::UnitSpeed,
        SuiteStrategy::Alternating,
        SuiteStrategy::RandomSpeeds,
        SuiteStrategy::Jitter,
        SuiteStrategy::FrozenPrefix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteStrategy::UnitSpeed => "unit_speed",
            SuiteStrategy::Alternating => "alternating",
            SuiteStrategy::RandomSpeeds => "random_speeds",
            SuiteStrategy::Jitter => "jitter",
            SuiteStrategy::FrozenPrefix => "frozen_prefix",
        }
    }

    /// Per-agent strategies for a seed. `horizon` bounds the frozen prefix.
    ///
    /// Odd seeds swap roles in the asymmetric pairs, so both agents get to be
    /// the one held back.
    pub fn strategies(self, seed: u64, horizon: usize) -> (Strategy, Strategy) {
        let swap = seed % 2 == 1;
        let (a, b) = match self {
            SuiteStrategy::UnitSpeed => (Strategy::UnitSpeed, Strategy::UnitSpeed),
            SuiteStrategy::Alternating => (Strategy::Alternating(Role::First), Strategy::Alternating(Role::Second)),
            SuiteStrategy::RandomSpeeds => (Strategy::RandomSpeeds, Strategy::RandomSpeeds),
            SuiteStrategy::Jitter => (Strategy::Jitter, Strategy::Jitter),
            SuiteStrategy::FrozenPrefix => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f00d);
                let halves = rng.gen_range(0..=2 * horizon.min(1 << 20) as i64);
                (Strategy::FrozenPrefix(q(halves, 2)), Strategy::UnitSpeed)
            }
        };
        if swap && matches!(self, SuiteStrategy::Alternating | SuiteStrategy::FrozenPrefix) {
            (b, a)
        } else {
            (a, b)
        }
    }
}

impl fmt::Display for SuiteStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Seed for one agent's random choices.
pub fn agent_seed(seed: u64, agent: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(agent)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteEntry {
    pub strategy: SuiteStrategy,
    pub seed: u64,
    pub first: String,
    pub second: String,
    #[serde(flatten)]
    pub verdict: MeetingVerdict,
}

/// Per-(strategy, seed) verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RendezvousReport {
    pub entries: Vec<SuiteEntry>,
    pub all_met: bool,
    /// Present in approximate mode.
    #[serde(with = "serde_q::option", skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Q>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_within_epsilon: Option<bool>,
    pub vacuous: bool,
}

impl RendezvousReport {
    fn from_entries(entries: Vec<SuiteEntry>, epsilon: Option<Q>) -> Self {
        let all_met = entries.iter().all(|e| e.verdict.met);
        let all_within_epsilon = epsilon.as_ref().map(|eps| {
            let eps_sq = eps * eps;
            entries
                .iter()
                .all(|e| e.verdict.met || e.verdict.min_distance_sq.as_ref().is_some_and(|d| *d <= eps_sq))
        });
        RendezvousReport {
            vacuous: entries.is_empty(),
            entries,
            all_met,
            epsilon,
            all_within_epsilon,
        }
    }

    /// Success in the sense of the run: every walk pair met, or came within
    /// epsilon in approximate mode.
    pub fn success(&self) -> bool {
        self.all_within_epsilon.unwrap_or(self.all_met)
    }
}

/// Runs one strategy pair over two graph routes.
pub fn run_graph_pair<G: PortGraph>(
    g: &G,
    r1: &Route<G::Node>,
    r2: &Route<G::Node>,
    strategy: SuiteStrategy,
    seed: u64,
) -> SuiteEntry {
    let horizon = r1.len().max(r2.len());
    let (s1, s2) = strategy.strategies(seed, horizon);
    let w1 = graph_walk(g, r1.steps(), s1.clone(), agent_seed(seed, 1));
    let w2 = graph_walk(g, r2.steps(), s2.clone(), agent_seed(seed, 2));
    let verdict = simulate_graph(g, (r1.start(), r1.steps()), (r2.start(), r2.steps()), w1, w2);
    SuiteEntry {
        strategy,
        seed,
        first: s1.to_string(),
        second: s2.to_string(),
        verdict,
    }
}

/// The lazily generated walk of `strategy` over a graph route.
pub fn graph_walk<'a, G: PortGraph>(
    g: &'a G,
    steps: &'a [EdgeTraversal<G::Node>],
    strategy: Strategy,
    seed: u64,
) -> StrategyWalk<'a> {
    StrategyWalk::new(strategy, steps.len(), move |m| g.edge_length(&steps[m]), seed)
}

/// The walk of `strategy` over a planar route; every segment takes unit
/// time at unit speed.
pub fn planar_walk(segments: usize, strategy: Strategy, seed: u64) -> StrategyWalk<'static> {
    StrategyWalk::new(strategy, segments, |_| qi(1), seed)
}

/// Checks two explicit schedules and simulates them over graph routes.
pub fn detect_meeting_graph<G: PortGraph>(
    g: &G,
    r1: &Route<G::Node>,
    r2: &Route<G::Node>,
    w1: &WalkSchedule,
    w2: &WalkSchedule,
) -> Result<MeetingVerdict, ScheduleError> {
    w1.validate(r1.len())?;
    w2.validate(r2.len())?;
    Ok(simulate_graph(
        g,
        (r1.start(), r1.steps()),
        (r2.start(), r2.steps()),
        w1.pieces(),
        w2.pieces(),
    ))
}

/// Checks two explicit schedules and simulates them over planar polylines.
pub fn detect_meeting_planar<P1: Polyline + ?Sized, P2: Polyline + ?Sized>(
    v1: &P1,
    v2: &P2,
    w1: &WalkSchedule,
    w2: &WalkSchedule,
) -> Result<MeetingVerdict, ScheduleError> {
    if v1.vertex_count() == 0 || v2.vertex_count() == 0 {
        return Err(ScheduleError::Mismatch("planar routes need a start point".into()));
    }
    w1.validate(v1.segment_count())?;
    w2.validate(v2.segment_count())?;
    Ok(simulate_planar(v1, v2, w1.pieces(), w2.pieces()))
}

/// Runs every strategy of `suite` for every seed on two graph routes.
pub fn verify_rendezvous_graph<G: PortGraph>(
    g: &G,
    r1: &Route<G::Node>,
    r2: &Route<G::Node>,
    suite: &[SuiteStrategy],
    seeds: &[u64],
) -> RendezvousReport {
    let mut entries = Vec::with_capacity(suite.len() * seeds.len());
    for &strategy in suite {
        for &seed in seeds {
            entries.push(run_graph_pair(g, r1, r2, strategy, seed));
        }
    }
    RendezvousReport::from_entries(entries, None)
}

/// Runs one strategy pair over two planar polylines.
pub fn run_planar_pair<P1: Polyline + ?Sized, P2: Polyline + ?Sized>(
    v1: &P1,
    v2: &P2,
    strategy: SuiteStrategy,
    seed: u64,
) -> SuiteEntry {
    let (n1, n2) = (v1.segment_count(), v2.segment_count());
    let (s1, s2) = strategy.strategies(seed, n1.max(n2));
    let w1 = planar_walk(n1, s1.clone(), agent_seed(seed, 1));
    let w2 = planar_walk(n2, s2.clone(), agent_seed(seed, 2));
    SuiteEntry {
        strategy,
        seed,
        first: s1.to_string(),
        second: s2.to_string(),
        verdict: simulate_planar(v1, v2, w1, w2),
    }
}

/// Planar counterpart of [`verify_rendezvous_graph`]; with `epsilon` the
/// report also states whether every run came within that distance.
pub fn verify_rendezvous_planar<P1: Polyline + ?Sized, P2: Polyline + ?Sized>(
    v1: &P1,
    v2: &P2,
    suite: &[SuiteStrategy],
    seeds: &[u64],
    epsilon: Option<Q>,
) -> RendezvousReport {
    let mut entries = Vec::with_capacity(suite.len() * seeds.len());
    for &strategy in suite {
        for &seed in seeds {
            entries.push(run_planar_pair(v1, v2, strategy, seed));
        }
    }
    RendezvousReport::from_entries(entries, epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete2, path, FiniteGraph};
    use crate::rendezvous::{graph_rv, Limits};

    fn k2_routes(g: &FiniteGraph) -> (Route<crate::graph::NodeId>, Route<crate::graph::NodeId>) {
        let a = g.node("A").unwrap();
        let b = g.node("B").unwrap();
        (
            graph_rv(g, &a, 1, &Limits::phases(1)).unwrap(),
            graph_rv(g, &b, 2, &Limits::phases(1)).unwrap(),
        )
    }

    #[test]
    fn k2_tunnel_meets_under_the_suite() {
        let g = complete2();
        let (r1, r2) = k2_routes(&g);
        let seeds: Vec<u64> = (0..20).collect();
        let report = verify_rendezvous_graph(&g, &r1, &r2, &SuiteStrategy::ALL, &seeds);
        assert_eq!(report.entries.len(), 100);
        assert!(report.all_met && !report.vacuous);
    }

    #[test]
    fn empty_suite_is_vacuous() {
        let g = complete2();
        let (r1, r2) = k2_routes(&g);
        let report = verify_rendezvous_graph(&g, &r1, &r2, &[], &[1, 2]);
        assert!(report.entries.is_empty() && report.all_met && report.vacuous);
    }

    #[test]
    fn diverging_single_edges_never_meet() {
        let g = path(4);
        let b = g.node("B").unwrap();
        let c = g.node("C").unwrap();
        let r1 = Route::from_steps(b, vec![g.traverse(&b, 1).unwrap()]).unwrap();
        let r2 = Route::from_steps(c, vec![g.traverse(&c, 2).unwrap()]).unwrap();
        let report = verify_rendezvous_graph(&g, &r1, &r2, &SuiteStrategy::ALL, &[0, 1, 2]);
        assert!(!report.all_met);
        assert!(report.entries.iter().all(|e| !e.verdict.met));
    }

    #[test]
    fn explicit_schedules_are_checked() {
        let g = complete2();
        let (r1, r2) = k2_routes(&g);
        let good = make_schedule(Strategy::UnitSpeed, r1.len(), |_| qi(1), 0);
        let short = make_schedule(Strategy::UnitSpeed, 1, |_| qi(1), 0);
        assert!(detect_meeting_graph(&g, &r1, &r2, &good, &good).unwrap().met);
        assert!(detect_meeting_graph(&g, &r1, &r2, &short, &good).is_err());
    }

    #[test]
    fn verdict_json_uses_exact_strings() {
        let g = complete2();
        let (r1, r2) = k2_routes(&g);
        let entry = run_graph_pair(&g, &r1, &r2, SuiteStrategy::UnitSpeed, 0);
        let json = serde_json::to_value(&entry).unwrap();
        assert_eq!(json["time"], "1/2");
        assert_eq!(json["location"]["kind"], "edge");
        assert_eq!(json["location"]["offset"], "1/2");
    }
}
