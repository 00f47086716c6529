//! Rendezvous routes in port-labeled graphs and tunnel certificates.
//!
//! Routes are built in phases. Phase `k` processes quadruple `phi(k)`: an
//! agent named in the quadruple tries to follow its port sequence, and when
//! the reverse ports match it replays the other agent's first `k - 1` phases
//! from the far end so that the two routes end up forming a tunnel. Every
//! phase starts and ends at the agent's start node.
//!
//! Construction is pure: the caller bounds it with [`Limits`], and deciding
//! when agents actually meet is left to the adversary simulator.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::rc::Rc;

use crate::enumeration::{phi, phi_index, EnumerationError, Label, Port, Quadruple};
use crate::geometry::GeometryError;
use crate::graph::{follow_ports, shortest_port_paths, EdgeTraversal, FiniteGraph, GraphError, NodeId, PortGraph};

pub const DEFAULT_STEP_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RouteError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("StepBudgetExceeded: route would need {needed} traversals in phase {phase} (budget {budget})")]
    StepBudgetExceeded { budget: usize, needed: usize, phase: u64 },
    #[error("labels are positive integers")]
    ZeroLabel,
    #[error("agents must carry different labels (both are {0})")]
    DuplicateLabel(Label),
    #[error("route is not chained at step {0}")]
    Broken(usize),
    #[error("malformed route dump, line {line}: {reason}")]
    Dump { line: usize, reason: String },
}

/// Bounds on route construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Number of phases built in main mode.
    pub phase_cap: u64,
    /// Maximum number of traversals in any route built along the way.
    pub step_budget: usize,
    /// Reuse simulated sub-routes keyed by `(node, label, phases)`.
    pub memoize: bool,
    /// On budget exhaustion, return the route up to the last complete phase
    /// instead of failing.
    pub truncate_on_budget: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            phase_cap: 1,
            step_budget: DEFAULT_STEP_BUDGET,
            memoize: true,
            truncate_on_budget: false,
        }
    }
}

impl Limits {
    pub fn phases(phase_cap: u64) -> Self {
        Limits {
            phase_cap,
            ..Self::default()
        }
    }

    pub fn with_budget(mut self, step_budget: usize) -> Self {
        self.step_budget = step_budget;
        self
    }

    pub fn truncating(mut self) -> Self {
        self.truncate_on_budget = true;
        self
    }
}

/// A finite route: a chained sequence of edge traversals from `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route<N> {
    start: N,
    steps: Vec<EdgeTraversal<N>>,
    /// `phase_marks[k - 1]` is the step index where phase `k` begins.
    phase_marks: Vec<usize>,
}

impl<N: Clone + Eq + Ord> Route<N> {
    /// The empty route at `start`.
    pub fn new(start: N) -> Self {
        Route {
            start,
            steps: Vec::new(),
            phase_marks: Vec::new(),
        }
    }

    /// Builds a route from raw steps, checking that they chain from `start`.
    pub fn from_steps(start: N, steps: Vec<EdgeTraversal<N>>) -> Result<Self, RouteError> {
        let r = Route {
            start,
            steps,
            phase_marks: Vec::new(),
        };
        r.check_chained()?;
        Ok(r)
    }

    pub fn start(&self) -> &N {
        &self.start
    }

    pub fn steps(&self) -> &[EdgeTraversal<N>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Node reached at the end of the route.
    pub fn end(&self) -> &N {
        self.steps.last().map_or(&self.start, |s| &s.to)
    }

    pub fn is_closed(&self) -> bool {
        self.end() == &self.start
    }

    pub fn phase_marks(&self) -> &[usize] {
        &self.phase_marks
    }

    pub fn phase_count(&self) -> u64 {
        self.phase_marks.len() as u64
    }

    /// Node reached after `n` steps.
    pub fn node_after(&self, n: usize) -> &N {
        if n == 0 {
            &self.start
        } else {
            &self.steps[n - 1].to
        }
    }

    /// Same edges in reverse order, each crossed the other way. Phase marks
    /// are dropped.
    pub fn reversed(&self) -> Self {
        Route {
            start: self.end().clone(),
            steps: self.steps.iter().rev().map(EdgeTraversal::reversed).collect(),
            phase_marks: Vec::new(),
        }
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn concat(&mut self, other: &Route<N>) -> Result<(), RouteError> {
        if other.start != *self.end() {
            return Err(RouteError::Broken(self.steps.len()));
        }
        self.steps.extend_from_slice(&other.steps);
        Ok(())
    }

    /// The route truncated after its first `p` phases, with those marks.
    pub fn prefix_phases(&self, p: u64) -> Self {
        let p = (p as usize).min(self.phase_marks.len());
        let end = self.phase_marks.get(p).copied().unwrap_or(self.steps.len());
        Route {
            start: self.start.clone(),
            steps: self.steps[..end].to_vec(),
            phase_marks: self.phase_marks[..p].to_vec(),
        }
    }

    pub fn check_chained(&self) -> Result<(), RouteError> {
        let mut cur = &self.start;
        for (idx, step) in self.steps.iter().enumerate() {
            if &step.from != cur {
                return Err(RouteError::Broken(idx));
            }
            cur = &step.to;
        }
        Ok(())
    }

    /// Checks chaining and that every step is a genuine traversal of `g`.
    pub fn check_against<G: PortGraph<Node = N>>(&self, g: &G) -> Result<(), RouteError> {
        self.check_chained()?;
        for (idx, step) in self.steps.iter().enumerate() {
            if !g.is_port(&step.from, step.out_port)? || g.traverse(&step.from, step.out_port)? != *step {
                return Err(RouteError::Broken(idx));
            }
        }
        Ok(())
    }

    /// Phases whose mark does not sit at the start node (should be none).
    pub fn unclosed_phases(&self) -> Vec<u64> {
        let mut bad = Vec::new();
        for (k, &mark) in self.phase_marks.iter().enumerate() {
            if self.node_after(mark) != &self.start {
                bad.push(k as u64 + 1);
            }
        }
        if !self.phase_marks.is_empty() && !self.is_closed() {
            bad.push(self.phase_marks.len() as u64 + 1);
        }
        bad
    }

    pub fn map_nodes<M: Clone + Eq + Ord>(&self, mut f: impl FnMut(&N) -> M) -> Route<M> {
        Route {
            start: f(&self.start),
            steps: self
                .steps
                .iter()
                .map(|s| EdgeTraversal {
                    from: f(&s.from),
                    out_port: s.out_port,
                    to: f(&s.to),
                    in_port: s.in_port,
                })
                .collect(),
            phase_marks: self.phase_marks.clone(),
        }
    }

    fn push_reversed(&mut self, part: &[EdgeTraversal<N>]) {
        self.steps.extend(part.iter().rev().map(EdgeTraversal::reversed));
    }
}

// ---------------------------------------------------------------------------
// Route construction

type SimKey<N> = (N, Label, u64);

struct Pending<N> {
    hist_len: usize,
    walked: Vec<EdgeTraversal<N>>,
}

struct Frame<N> {
    v: N,
    label: Label,
    cap: u64,
    k: u64,
    route: Route<N>,
    key: Option<SimKey<N>>,
    pending: Option<Pending<N>>,
}

enum Progress<N> {
    Done,
    NeedSim(SimKey<N>),
}

struct Engine<'a, G: PortGraph> {
    g: &'a G,
    limits: &'a Limits,
    quads: Vec<Quadruple>,
    memo: HashMap<SimKey<G::Node>, Rc<Route<G::Node>>>,
    memo_steps: usize,
}

impl<'a, G: PortGraph> Engine<'a, G> {
    fn new(g: &'a G, limits: &'a Limits) -> Self {
        Engine {
            g,
            limits,
            quads: Vec::new(),
            memo: HashMap::new(),
            memo_steps: 0,
        }
    }

    fn quad(&mut self, k: u64) -> Result<&Quadruple, RouteError> {
        while (self.quads.len() as u64) < k {
            let next = phi(self.quads.len() as u64 + 1)?;
            self.quads.push(next);
        }
        Ok(&self.quads[k as usize - 1])
    }

    fn frame(&self, v: G::Node, label: Label, cap: u64, key: Option<SimKey<G::Node>>) -> Frame<G::Node> {
        Frame {
            route: Route::new(v.clone()),
            v,
            label,
            cap,
            k: 1,
            key,
            pending: None,
        }
    }

    fn run(&mut self, root: Frame<G::Node>) -> Result<Route<G::Node>, RouteError> {
        let mut stack = vec![root];
        let mut returned: Option<Rc<Route<G::Node>>> = None;
        loop {
            let top = stack.last_mut().expect("stack holds the root until it finishes");
            let progress = match self.advance(top, returned.take()) {
                Ok(p) => p,
                Err(RouteError::StepBudgetExceeded { .. }) if self.limits.truncate_on_budget => {
                    let mut root = stack.swap_remove(0);
                    let complete = root.k as usize - 1;
                    root.route.steps.truncate(root.route.phase_marks[complete]);
                    root.route.phase_marks.truncate(complete);
                    return Ok(root.route);
                }
                Err(e) => return Err(e),
            };
            match progress {
                Progress::NeedSim(key) => {
                    let child = self.frame(key.0.clone(), key.1, key.2, Some(key));
                    stack.push(child);
                }
                Progress::Done => {
                    let done = stack.pop().expect("non-empty");
                    if stack.is_empty() {
                        return Ok(done.route);
                    }
                    let route = Rc::new(done.route);
                    // the memo holds at most one budget's worth of steps
                    if self.limits.memoize && self.memo_steps + route.len() <= self.limits.step_budget {
                        if let Some(key) = done.key {
                            self.memo_steps += route.len();
                            self.memo.insert(key, Rc::clone(&route));
                        }
                    }
                    returned = Some(route);
                }
            }
        }
    }

    /// Runs the phase loop of one frame until it finishes or needs a
    /// simulated route it does not have yet.
    fn advance(
        &mut self,
        f: &mut Frame<G::Node>,
        mut sim: Option<Rc<Route<G::Node>>>,
    ) -> Result<Progress<G::Node>, RouteError> {
        while f.k <= f.cap {
            if let Some(pending) = f.pending.take() {
                let sim = sim.take().expect("resumed frames receive their simulation");
                self.close_tunnel(f, pending, &sim)?;
                f.k += 1;
                continue;
            }
            let k = f.k;
            f.route.phase_marks.push(f.route.steps.len());
            let q = self.quad(k)?.clone();
            if f.label != q.i && f.label != q.j {
                f.k += 1;
                continue;
            }
            let (s1, s2, other) = if f.label == q.i {
                (&q.s_prime, &q.s_dprime, q.j)
            } else {
                (&q.s_dprime, &q.s_prime, q.i)
            };
            let walked = follow_ports(self.g, &f.v, s1)?;
            let hist_len = f.route.steps.len();
            self.ensure_budget(hist_len + 2 * walked.len(), k)?;
            f.route.steps.extend_from_slice(&walked);
            let matched = walked.len() == s1.len() && walked.iter().rev().map(|s| s.in_port).eq(s2.iter().copied());
            if !matched {
                f.route.push_reversed(&walked);
                f.k += 1;
                continue;
            }
            let w = walked.last().expect("n >= 1").to.clone();
            let key = (w, other, k - 1);
            let pending = Pending { hist_len, walked };
            let cached = if k == 1 {
                Some(Rc::new(Route::new(key.0.clone())))
            } else if self.limits.memoize {
                self.memo.get(&key).cloned()
            } else {
                None
            };
            match cached {
                Some(route) => {
                    self.close_tunnel(f, pending, &route)?;
                    f.k += 1;
                }
                None => {
                    f.pending = Some(pending);
                    return Ok(Progress::NeedSim(key));
                }
            }
        }
        Ok(Progress::Done)
    }

    /// `r := r . sim . inv(r(s1)) . inv(hist) . r(s1) . inv(sim)`, then the
    /// backtrack `r := r . inv(r(s1))`.
    fn close_tunnel(
        &self,
        f: &mut Frame<G::Node>,
        pending: Pending<G::Node>,
        sim: &Route<G::Node>,
    ) -> Result<(), RouteError> {
        let Pending { hist_len, walked } = pending;
        let n = walked.len();
        let needed = f.route.steps.len() + 2 * sim.len() + 3 * n + hist_len;
        self.ensure_budget(needed, f.k)?;
        let steps = &mut f.route.steps;
        steps.reserve(needed - steps.len());
        steps.extend_from_slice(&sim.steps);
        steps.extend(walked.iter().rev().map(EdgeTraversal::reversed));
        for idx in (0..hist_len).rev() {
            let back = steps[idx].reversed();
            steps.push(back);
        }
        steps.extend_from_slice(&walked);
        steps.extend(sim.steps.iter().rev().map(EdgeTraversal::reversed));
        steps.extend(walked.iter().rev().map(EdgeTraversal::reversed));
        Ok(())
    }

    fn ensure_budget(&self, needed: usize, phase: u64) -> Result<(), RouteError> {
        if needed > self.limits.step_budget {
            Err(RouteError::StepBudgetExceeded {
                budget: self.limits.step_budget,
                needed,
                phase,
            })
        } else {
            Ok(())
        }
    }
}

/// The recursive route builder. With `mode = false` it builds exactly `p`
/// phases (the simulation mode); with `mode = true` it builds
/// `limits.phase_cap` phases and ignores `p`.
pub fn graph_rv_rec<G: PortGraph>(
    g: &G,
    v: &G::Node,
    label: Label,
    p: u64,
    mode: bool,
    limits: &Limits,
) -> Result<Route<G::Node>, RouteError> {
    if label == 0 {
        return Err(RouteError::ZeroLabel);
    }
    if !g.contains(v) {
        return Err(GraphError::UnknownNode(format!("{v:?}")).into());
    }
    let cap = if mode { limits.phase_cap } else { p };
    let mut engine = Engine::new(g, limits);
    let root = engine.frame(v.clone(), label, cap, None);
    engine.run(root)
}

/// Route of the agent labeled `label` starting at `v`, for
/// `limits.phase_cap` phases.
pub fn graph_rv<G: PortGraph>(g: &G, v: &G::Node, label: Label, limits: &Limits) -> Result<Route<G::Node>, RouteError> {
    graph_rv_rec(g, v, label, 0, true, limits)
}

pub type RoutePair<N> = (Route<N>, Route<N>);

/// Routes for two agents; rejects equal labels.
pub fn graph_rv_pair<G: PortGraph>(
    g: &G,
    first: (&G::Node, Label),
    second: (&G::Node, Label),
    limits: &Limits,
) -> Result<RoutePair<G::Node>, RouteError> {
    if first.1 == second.1 {
        return Err(RouteError::DuplicateLabel(first.1));
    }
    Ok((
        graph_rv(g, first.0, first.1, limits)?,
        graph_rv(g, second.0, second.1, limits)?,
    ))
}

/// The quadruple describing two placed agents along a given port path
/// from the first agent's node to the second's.
pub fn quadruple_for(
    first_label: Label,
    second_label: Label,
    path_ports: Vec<Port>,
    reverse_ports: Vec<Port>,
) -> Result<Quadruple, RouteError> {
    if first_label == second_label {
        return Err(RouteError::DuplicateLabel(first_label));
    }
    let q = if first_label < second_label {
        Quadruple::new(first_label, second_label, path_ports, reverse_ports)?
    } else {
        Quadruple::new(second_label, first_label, reverse_ports, path_ports)?
    };
    Ok(q)
}

/// Smallest enumeration index among the quadruples of all shortest port
/// paths between the two agents, with that quadruple.
pub fn connecting_quadruple(
    g: &FiniteGraph,
    first: (NodeId, Label),
    second: (NodeId, Label),
) -> Result<(u64, Quadruple), RouteError> {
    let mut best: Option<(u64, Quadruple)> = None;
    for (fwd, back) in shortest_port_paths(g, first.0, second.0) {
        let q = quadruple_for(first.1, second.1, fwd, back)?;
        let idx = phi_index(&q)?;
        if best.as_ref().map_or(true, |(b, _)| idx < *b) {
            best = Some((idx, q));
        }
    }
    best.ok_or_else(|| {
        GraphError::Disconnected {
            root: g.name(first.0).to_string(),
            unreached: g.name(second.0).to_string(),
        }
        .into()
    })
}

// ---------------------------------------------------------------------------
// Tunnels

/// A prefix of the first route whose reversal is a prefix of the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TunnelCertificate<N> {
    pub n: usize,
    pub meeting_path: Vec<EdgeTraversal<N>>,
}

/// Smallest `n` such that the first `n` steps of `r1` equal the first `n`
/// steps of `r2` read backwards with every traversal reversed.
///
/// Equal starts give the empty tunnel `n = 0`.
pub fn tunnel_check<N: Clone + Eq + Ord>(r1: &Route<N>, r2: &Route<N>) -> Option<TunnelCertificate<N>> {
    if r1.start() == r2.start() {
        return Some(TunnelCertificate {
            n: 0,
            meeting_path: Vec::new(),
        });
    }
    let len = r1.len().min(r2.len());
    if len == 0 {
        return None;
    }
    // Prefix `n` of r1 must equal the length-`n` suffix of inv(r2[..len]).
    let pattern = &r1.steps()[..len];
    let text = r2.steps()[..len].iter().rev().map(EdgeTraversal::reversed);
    let mut border = vec![0usize; len];
    let mut m = 0;
    for i in 1..len {
        while m > 0 && pattern[i] != pattern[m] {
            m = border[m - 1];
        }
        if pattern[i] == pattern[m] {
            m += 1;
        }
        border[i] = m;
    }
    let mut m = 0;
    for x in text {
        if m == len {
            m = border[m - 1];
        }
        while m > 0 && x != pattern[m] {
            m = border[m - 1];
        }
        if x == pattern[m] {
            m += 1;
        }
    }
    if m == 0 {
        return None;
    }
    while border[m - 1] > 0 {
        m = border[m - 1];
    }
    Some(TunnelCertificate {
        n: m,
        meeting_path: r1.steps()[..m].to_vec(),
    })
}

// ---------------------------------------------------------------------------
// Dump format

pub const ROUTE_DUMP_HEADER: &str = "# tunnelmeet route v1";

/// Text dump: a header, `# start <node>`, then one
/// `from<TAB>out_port<TAB>to<TAB>in_port` line per traversal with
/// `# phase k` markers.
pub fn dump_route<N: Clone + Eq + Ord>(r: &Route<N>, label: impl Fn(&N) -> String) -> String {
    let mut out = String::new();
    writeln!(out, "{ROUTE_DUMP_HEADER}").unwrap();
    writeln!(out, "# start {}", label(r.start())).unwrap();
    let mut marks = r.phase_marks().iter().enumerate().peekable();
    for (idx, s) in r.steps().iter().enumerate() {
        while let Some((k, _)) = marks.next_if(|(_, &m)| m == idx) {
            writeln!(out, "# phase {}", k + 1).unwrap();
        }
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            label(&s.from),
            s.out_port,
            label(&s.to),
            s.in_port
        )
        .unwrap();
    }
    for (k, _) in marks {
        writeln!(out, "# phase {}", k + 1).unwrap();
    }
    out
}

/// Parses a route dump with node names kept as text.
pub fn parse_route_dump(text: &str) -> Result<Route<String>, RouteError> {
    let err = |line: usize, reason: &str| RouteError::Dump {
        line,
        reason: reason.to_string(),
    };
    let mut start: Option<String> = None;
    let mut steps = Vec::new();
    let mut marks = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(node) = comment.strip_prefix("start ") {
                start = Some(node.to_string());
            } else if let Some(k) = comment.strip_prefix("phase ") {
                let k: usize = k.trim().parse().map_err(|_| err(line_no, "bad phase number"))?;
                if k != marks.len() + 1 {
                    return Err(err(line_no, "phase markers out of order"));
                }
                marks.push(steps.len());
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(err(line_no, "expected 4 tab-separated fields"));
        }
        let port = |s: &str| -> Result<Port, RouteError> {
            s.parse::<Port>()
                .ok()
                .filter(|&p| p > 0)
                .ok_or_else(|| err(line_no, "bad port"))
        };
        steps.push(EdgeTraversal {
            from: fields[0].to_string(),
            out_port: port(fields[1])?,
            to: fields[2].to_string(),
            in_port: port(fields[3])?,
        });
    }
    let start = start
        .or_else(|| steps.first().map(|s| s.from.clone()))
        .ok_or_else(|| err(0, "missing `# start` line"))?;
    let mut route = Route::from_steps(start, steps)?;
    route.phase_marks = marks;
    Ok(route)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete2, cycle, path, FiniteGraph};

    fn k2_nodes(g: &FiniteGraph) -> (NodeId, NodeId) {
        (g.node("A").unwrap(), g.node("B").unwrap())
    }

    #[test]
    fn zero_phases_is_empty() {
        let g = cycle(4);
        let r = graph_rv(&g, &NodeId(0), 3, &Limits::phases(0)).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.phase_count(), 0);
    }

    #[test]
    fn k2_first_phase_builds_the_tunnel() {
        let g = complete2();
        let (a, b) = k2_nodes(&g);
        let k0 = phi_index(&Quadruple::new(1, 2, vec![1], vec![1]).unwrap()).unwrap();
        assert_eq!(k0, 1);
        let r1 = graph_rv(&g, &a, 1, &Limits::phases(k0)).unwrap();
        let r2 = graph_rv(&g, &b, 2, &Limits::phases(k0)).unwrap();
        // r(s1), empty sim, inverse, inverse of empty history, r(s1), backtrack
        let ab = g.traverse(&a, 1).unwrap();
        let ba = ab.reversed();
        assert_eq!(r1.steps(), &[ab.clone(), ba.clone(), ab.clone(), ba.clone()]);
        assert_eq!(r2.steps(), &[ba.clone(), ab.clone(), ba, ab]);
        let cert = tunnel_check(&r1, &r2).unwrap();
        assert_eq!(cert.n, 1);
    }

    #[test]
    fn missing_port_backtracks_only() {
        let g = complete2();
        let (a, _) = k2_nodes(&g);
        // phi(3) = (1,2,(2),(1)): port 2 does not exist at A, nothing moves.
        // phi(4) = (1,2,(1,1),(1,1)): A->B->A, reverse ports (1,1) match.
        let q3 = phi(3).unwrap();
        assert_eq!(q3.s_prime, vec![2]);
        let r2 = graph_rv(&g, &a, 1, &Limits::phases(2)).unwrap();
        let r3 = graph_rv(&g, &a, 1, &Limits::phases(3)).unwrap();
        assert_eq!(r2, r3.prefix_phases(2));
        assert_eq!(r2.len(), r3.len());
        // phi(2) = (1,2,(1),(2)): the walk succeeds but entry port 1 != 2, so
        // the route gains A->B then B->A only.
        let r1 = graph_rv(&g, &a, 1, &Limits::phases(1)).unwrap();
        assert_eq!(r2.len(), r1.len() + 2);
        assert!(r2.is_closed());
    }

    #[test]
    fn phases_close_and_prefixes_are_stable() {
        let g = path(3);
        for v in g.nodes() {
            for label in 1..=3 {
                let full = graph_rv(&g, &v, label, &Limits::phases(10)).unwrap();
                full.check_against(&g).unwrap();
                assert!(full.unclosed_phases().is_empty());
                for p in 0..=10 {
                    let literal = Limits {
                        memoize: false,
                        ..Limits::phases(p)
                    };
                    let sim = graph_rv_rec(&g, &v, label, p, false, &literal).unwrap();
                    assert_eq!(sim, full.prefix_phases(p), "v={v} l={label} p={p}");
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = path(3);
        let tight = Limits::phases(40).with_budget(50);
        let err = graph_rv(&g, &NodeId(0), 1, &tight).unwrap_err();
        assert!(matches!(err, RouteError::StepBudgetExceeded { budget: 50, .. }));
        let cut = graph_rv(&g, &NodeId(0), 1, &tight.clone().truncating()).unwrap();
        assert!(cut.phase_count() < 40 && cut.len() <= 50);
        let full = graph_rv(&g, &NodeId(0), 1, &Limits::phases(cut.phase_count())).unwrap();
        assert_eq!(cut, full);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let g = complete2();
        let (a, b) = k2_nodes(&g);
        assert_eq!(
            graph_rv_pair(&g, (&a, 2), (&b, 2), &Limits::phases(1)).unwrap_err(),
            RouteError::DuplicateLabel(2)
        );
        assert_eq!(
            graph_rv(&g, &a, 0, &Limits::phases(1)).unwrap_err(),
            RouteError::ZeroLabel
        );
    }

    #[test]
    fn reversal() {
        let g = complete2();
        let (a, b) = k2_nodes(&g);
        let empty: Route<NodeId> = Route::new(a);
        assert_eq!(empty.reversed(), empty);
        let ab = Route::from_steps(a, vec![g.traverse(&a, 1).unwrap()]).unwrap();
        let ba = ab.reversed();
        assert_eq!(ba.start(), &b);
        assert_eq!(ba.steps()[0], g.traverse(&b, 1).unwrap());
        let mut closed = ab.clone();
        closed.concat(&ba).unwrap();
        assert!(closed.is_closed());
        assert!(closed.concat(&ba).is_err());
    }

    #[test]
    fn tunnel_cases() {
        let g = complete2();
        let (a, b) = k2_nodes(&g);
        let r1 = Route::from_steps(a, vec![g.traverse(&a, 1).unwrap()]).unwrap();
        let r2 = Route::from_steps(b, vec![g.traverse(&b, 1).unwrap()]).unwrap();
        assert_eq!(tunnel_check(&r1, &r2).unwrap().n, 1);
        assert_eq!(tunnel_check(&r2, &r1).unwrap().n, 1);

        let c4 = cycle(4);
        let (va, vc) = (c4.node("A").unwrap(), c4.node("C").unwrap());
        let r1 = Route::from_steps(va, vec![c4.traverse(&va, 1).unwrap()]).unwrap();
        let r2 = Route::from_steps(vc, vec![c4.traverse(&vc, 1).unwrap()]).unwrap();
        assert!(tunnel_check(&r1, &r2).is_none());
        assert_eq!(tunnel_check(&r1, &r1).unwrap().n, 0);
    }

    #[test]
    fn dump_round_trip() {
        let g = complete2();
        let (a, _) = k2_nodes(&g);
        let r = graph_rv(&g, &a, 1, &Limits::phases(4)).unwrap();
        let text = dump_route(&r, |v| g.node_label(v));
        let parsed = parse_route_dump(&text).unwrap();
        assert_eq!(parsed, r.map_nodes(|v| g.node_label(v)));
        let empty = graph_rv(&g, &a, 1, &Limits::phases(0)).unwrap();
        assert_eq!(
            dump_route(&empty, |v| g.node_label(v)),
            format!("{ROUTE_DUMP_HEADER}\n# start A\n")
        );
        assert!(parse_route_dump("A\t1\tB\n").is_err());
        assert!(parse_route_dump("# start A\nA\t1\tB\t1\nA\t1\tB\t1\n").is_err());
    }
}
