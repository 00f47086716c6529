//! Exact meeting detection.
//!
//! Both walks are cut at every breakpoint of either schedule. On each
//! resulting time cell both positions are affine in `t`, so coincidence is a
//! linear equation and the squared planar distance is a quadratic whose
//! minimum is found in closed form.

use std::cell::OnceCell;

use num_traits::{One, Zero};
use serde::Serialize;

use super::schedule::Piece;
use crate::geometry::{Polyline, QPoint};
use crate::graph::{EdgeKey, EdgeTraversal, PortGraph};
use crate::rational::{q_to_f64, qi, serde_q, Q};

/// `a + b t`.
#[derive(Debug, Clone, PartialEq)]
struct Aff {
    a: Q,
    b: Q,
}

impl Aff {
    fn constant(a: Q) -> Self {
        Aff { a, b: Q::zero() }
    }

    /// The affine map through `(t0, v0)` and `(t1, v1)`.
    fn through(t0: &Q, v0: &Q, t1: &Q, v1: &Q) -> Self {
        let b = (v1 - v0) / (t1 - t0);
        let a = v0 - &b * t0;
        Aff { a, b }
    }

    fn at(&self, t: &Q) -> Q {
        &self.a + &self.b * t
    }

    fn sub(&self, o: &Aff) -> Aff {
        Aff {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    fn scale(&self, s: &Q) -> Aff {
        Aff {
            a: &self.a * s,
            b: &self.b * s,
        }
    }

    /// Earliest `t` in `[lo, hi]` with value `v`.
    fn hits(&self, v: &Q, lo: &Q, hi: &Q) -> Option<Q> {
        if self.b.is_zero() {
            return (self.a == *v).then(|| lo.clone());
        }
        let t = (v - &self.a) / &self.b;
        (lo <= &t && &t <= hi).then_some(t)
    }
}

/// Where a meeting happened.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeetingPoint {
    Node {
        node: String,
    },
    /// Interior edge point, `offset` measured from the `(lo_node, lo_port)` end.
    Edge {
        lo_node: String,
        lo_port: u64,
        hi_node: String,
        hi_port: u64,
        #[serde(with = "serde_q")]
        offset: Q,
    },
    Point {
        #[serde(with = "serde_q")]
        x: Q,
        #[serde(with = "serde_q")]
        y: Q,
    },
}

/// Result of simulating one pair of walks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeetingVerdict {
    pub met: bool,
    #[serde(with = "serde_q::option")]
    pub time: Option<Q>,
    pub location: Option<MeetingPoint>,
    /// Exact minimum squared distance over the simulated span (planar only).
    #[serde(with = "serde_q::option")]
    pub min_distance_sq: Option<Q>,
    /// Time at which the minimum distance is attained (planar only).
    #[serde(with = "serde_q::option")]
    pub min_distance_time: Option<Q>,
    /// Meeting time when met, otherwise the end of the longer walk.
    #[serde(with = "serde_q")]
    pub simulated_until: Q,
}

/// A walk stream with its parked tail: after the last piece the agent rests
/// at route vertex `segments`.
struct Cursor<I: Iterator<Item = Piece>> {
    pieces: I,
    current: Option<Piece>,
    segments: usize,
    end: Q,
}

impl<I: Iterator<Item = Piece>> Cursor<I> {
    fn new(mut pieces: I, segments: usize) -> Self {
        let current = pieces.next();
        Cursor {
            pieces,
            current,
            segments,
            end: qi(0),
        }
    }

    fn t1(&self) -> Option<&Q> {
        self.current.as_ref().map(|p| &p.t1)
    }

    fn advance_past(&mut self, t: &Q) {
        while let Some(p) = &self.current {
            if p.t1 > *t {
                break;
            }
            self.end = p.t1.clone();
            self.current = self.pieces.next();
        }
    }
}

/// Per-cell state of one agent, in whatever coordinates the world uses.
trait Track {
    type Pos: Clone;
    fn at_piece(&self, p: &Piece) -> Self::Pos;
    fn parked(&self, vertex: usize) -> Self::Pos;
}

/// Drives both cursors through the merged cells, handing each closed cell
/// `[lo, hi]` to `cell`. Stops early when `cell` returns `true`.
fn sweep<T1, T2, I1, I2>(
    tr1: &T1,
    tr2: &T2,
    c1: &mut Cursor<I1>,
    c2: &mut Cursor<I2>,
    mut cell: impl FnMut(&Q, &Q, &T1::Pos, &T2::Pos) -> bool,
) -> Q
where
    T1: Track,
    T2: Track,
    I1: Iterator<Item = Piece>,
    I2: Iterator<Item = Piece>,
{
    let mut lo = qi(0);
    let mut p1 = c1
        .current
        .as_ref()
        .map_or_else(|| tr1.parked(c1.segments), |p| tr1.at_piece(p));
    let mut p2 = c2
        .current
        .as_ref()
        .map_or_else(|| tr2.parked(c2.segments), |p| tr2.at_piece(p));
    let mut first = true;
    loop {
        let hi = match (c1.t1(), c2.t1()) {
            (None, None) => {
                if first {
                    cell(&lo, &lo, &p1, &p2);
                }
                return lo;
            }
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (Some(a), Some(b)) => a.min(b).clone(),
        };
        first = false;
        if cell(&lo, &hi, &p1, &p2) {
            return hi;
        }
        let before1 = c1.t1().cloned();
        let before2 = c2.t1().cloned();
        c1.advance_past(&hi);
        c2.advance_past(&hi);
        if before1.as_ref() == Some(&hi) {
            p1 = c1
                .current
                .as_ref()
                .map_or_else(|| tr1.parked(c1.segments), |p| tr1.at_piece(p));
        }
        if before2.as_ref() == Some(&hi) {
            p2 = c2
                .current
                .as_ref()
                .map_or_else(|| tr2.parked(c2.segments), |p| tr2.at_piece(p));
        }
        lo = hi;
    }
}

// ---------------------------------------------------------------------------
// Graphs

#[derive(Clone)]
#[allow(clippy::large_enum_variant)]
enum GPos<N> {
    Node(N),
    Edge {
        step: EdgeTraversal<N>,
        key: EdgeKey<N>,
        len: Q,
        lam: Aff,
    },
}

struct GraphTrack<'a, G: PortGraph> {
    g: &'a G,
    start: &'a G::Node,
    steps: &'a [EdgeTraversal<G::Node>],
}

impl<G: PortGraph> Track for GraphTrack<'_, G> {
    type Pos = GPos<G::Node>;

    fn at_piece(&self, p: &Piece) -> GPos<G::Node> {
        let step = &self.steps[p.seg];
        if p.l0 == p.l1 {
            if p.l0.is_zero() {
                return GPos::Node(step.from.clone());
            }
            if p.l0.is_one() {
                return GPos::Node(step.to.clone());
            }
        }
        GPos::Edge {
            key: step.edge_key(),
            len: self.g.edge_length(step),
            lam: Aff::through(&p.t0, &p.l0, &p.t1, &p.l1),
            step: step.clone(),
        }
    }

    fn parked(&self, vertex: usize) -> GPos<G::Node> {
        GPos::Node(if vertex == 0 {
            self.start.clone()
        } else {
            self.steps[vertex - 1].to.clone()
        })
    }
}

impl<N: Clone + Ord> GPos<N> {
    /// Offset from the key's `lo` end, affine in t.
    fn offset(&self) -> Option<(&EdgeKey<N>, Aff)> {
        match self {
            GPos::Node(_) => None,
            GPos::Edge { step, key, len, lam } => {
                let off = if step.is_forward() {
                    lam.scale(len)
                } else {
                    Aff::constant(len.clone()).sub(&lam.scale(len))
                };
                Some((key, off))
            }
        }
    }

    /// Times in `[lo, hi]` at which the agent stands on a node, with that node.
    fn node_times(&self, lo: &Q, hi: &Q) -> Vec<(Q, N)> {
        match self {
            GPos::Node(v) => vec![(lo.clone(), v.clone())],
            GPos::Edge { step, lam, .. } => {
                let mut out = Vec::new();
                if !lam.b.is_zero() {
                    if let Some(t) = lam.hits(&Q::zero(), lo, hi) {
                        out.push((t, step.from.clone()));
                    }
                    if let Some(t) = lam.hits(&Q::one(), lo, hi) {
                        out.push((t, step.to.clone()));
                    }
                }
                out
            }
        }
    }

    fn at_node_when(&self, v: &N, lo: &Q, hi: &Q) -> Option<Q> {
        self.node_times(lo, hi)
            .into_iter()
            .filter(|(_, w)| w == v)
            .map(|(t, _)| t)
            .min()
    }
}

fn graph_cell<N: Clone + Ord>(lo: &Q, hi: &Q, a: &GPos<N>, b: &GPos<N>) -> Option<Q> {
    match (a, b) {
        (GPos::Node(x), GPos::Node(y)) => (x == y).then(|| lo.clone()),
        (GPos::Node(x), e @ GPos::Edge { .. }) | (e @ GPos::Edge { .. }, GPos::Node(x)) => e.at_node_when(x, lo, hi),
        _ => {
            let (ka, oa) = a.offset().expect("edge");
            let (kb, ob) = b.offset().expect("edge");
            if ka == kb {
                return oa.sub(&ob).hits(&Q::zero(), lo, hi);
            }
            let nb = b.node_times(lo, hi);
            a.node_times(lo, hi)
                .into_iter()
                .filter(|(t, v)| nb.iter().any(|(u, w)| u == t && w == v))
                .map(|(t, _)| t)
                .min()
        }
    }
}

fn graph_point<G: PortGraph>(g: &G, pos: &GPos<G::Node>, t: &Q) -> MeetingPoint {
    match pos {
        GPos::Node(v) => MeetingPoint::Node { node: g.node_label(v) },
        GPos::Edge { step, key, len, lam } => {
            let l = lam.at(t);
            if l.is_zero() {
                return MeetingPoint::Node {
                    node: g.node_label(&step.from),
                };
            }
            if l.is_one() {
                return MeetingPoint::Node {
                    node: g.node_label(&step.to),
                };
            }
            let offset = if step.is_forward() {
                &l * len
            } else {
                (Q::one() - &l) * len
            };
            MeetingPoint::Edge {
                lo_node: g.node_label(&key.lo.0),
                lo_port: key.lo.1,
                hi_node: g.node_label(&key.hi.0),
                hi_port: key.hi.1,
                offset,
            }
        }
    }
}

/// Simulates two walks over graph routes given as `(start, steps)`.
pub fn simulate_graph<G: PortGraph>(
    g: &G,
    r1: (&G::Node, &[EdgeTraversal<G::Node>]),
    r2: (&G::Node, &[EdgeTraversal<G::Node>]),
    w1: impl Iterator<Item = Piece>,
    w2: impl Iterator<Item = Piece>,
) -> MeetingVerdict {
    let tr1 = GraphTrack {
        g,
        start: r1.0,
        steps: r1.1,
    };
    let tr2 = GraphTrack {
        g,
        start: r2.0,
        steps: r2.1,
    };
    let mut c1 = Cursor::new(w1, r1.1.len());
    let mut c2 = Cursor::new(w2, r2.1.len());
    let mut found: Option<(Q, MeetingPoint)> = None;
    let until = sweep(&tr1, &tr2, &mut c1, &mut c2, |lo, hi, a, b| {
        if let Some(t) = graph_cell(lo, hi, a, b) {
            found = Some((t.clone(), graph_point(g, a, &t)));
            true
        } else {
            false
        }
    });
    match found {
        Some((t, loc)) => MeetingVerdict {
            met: true,
            simulated_until: t.clone(),
            time: Some(t),
            location: Some(loc),
            min_distance_sq: None,
            min_distance_time: None,
        },
        None => MeetingVerdict {
            met: false,
            time: None,
            location: None,
            min_distance_sq: None,
            min_distance_time: None,
            simulated_until: until.max(c1.end.clone()).max(c2.end.clone()),
        },
    }
}

/// Where a graph walk is at time `t`, for independent re-checks of verdicts.
pub fn graph_location_at<G: PortGraph>(
    g: &G,
    start: &G::Node,
    steps: &[EdgeTraversal<G::Node>],
    pieces: impl Iterator<Item = Piece>,
    t: &Q,
) -> MeetingPoint {
    let tr = GraphTrack { g, start, steps };
    let mut last_vertex = 0;
    for p in pieces {
        if p.t0 <= *t && *t <= p.t1 {
            return graph_point(g, &tr.at_piece(&p), t);
        }
        if p.t0 > *t {
            break;
        }
        last_vertex = p.seg + 1;
    }
    graph_point(g, &tr.parked(last_vertex.min(steps.len())), t)
}

// ---------------------------------------------------------------------------
// Plane

/// Planar position on one cell: exact affine coordinates, computed on
/// demand, and a float shadow used to skip cells that cannot matter.
#[derive(Clone)]
struct PPos {
    src: PSrc,
    fx: (f64, f64),
    fy: (f64, f64),
    exact: OnceCell<(Aff, Aff)>,
}

#[derive(Clone)]
#[allow(clippy::large_enum_variant)]
enum PSrc {
    Moving(Piece),
    Parked(usize),
}

impl PPos {
    fn exact<P: Polyline + ?Sized>(&self, vertices: &P) -> &(Aff, Aff) {
        self.exact.get_or_init(|| match &self.src {
            PSrc::Parked(v) => {
                let v = vertices.vertex(*v);
                (Aff::constant(v.x.clone()), Aff::constant(v.y.clone()))
            }
            PSrc::Moving(p) => {
                let a = vertices.vertex(p.seg);
                let b = vertices.vertex(p.seg + 1);
                let s = Aff::through(&p.t0, &p.l0, &p.t1, &p.l1);
                (
                    Aff::constant(a.x.clone()).sub(&s.scale(&(&a.x - &b.x))),
                    Aff::constant(a.y.clone()).sub(&s.scale(&(&a.y - &b.y))),
                )
            }
        })
    }
}

struct PlanarTrack<'a, P: Polyline + ?Sized> {
    vertices: &'a P,
}

impl<P: Polyline + ?Sized> Track for PlanarTrack<'_, P> {
    type Pos = PPos;

    fn at_piece(&self, p: &Piece) -> PPos {
        let a = self.vertices.vertex(p.seg);
        let b = self.vertices.vertex(p.seg + 1);
        let (t0, t1) = (q_to_f64(&p.t0), q_to_f64(&p.t1));
        let (l0, l1) = (q_to_f64(&p.l0), q_to_f64(&p.l1));
        let sb = (l1 - l0) / (t1 - t0);
        let sa = l0 - sb * t0;
        let along = |u: &Q, v: &Q| {
            let (u, v) = (q_to_f64(u), q_to_f64(v));
            (u + sa * (v - u), sb * (v - u))
        };
        PPos {
            fx: along(&a.x, &b.x),
            fy: along(&a.y, &b.y),
            src: PSrc::Moving(p.clone()),
            exact: OnceCell::new(),
        }
    }

    fn parked(&self, vertex: usize) -> PPos {
        let v = self.vertices.vertex(vertex);
        PPos {
            fx: (q_to_f64(&v.x), 0.0),
            fy: (q_to_f64(&v.y), 0.0),
            src: PSrc::Parked(vertex),
            exact: OnceCell::new(),
        }
    }
}

fn planar_root(dx: &Aff, dy: &Aff, lo: &Q, hi: &Q) -> Option<Q> {
    if dx.b.is_zero() && dy.b.is_zero() {
        return (dx.a.is_zero() && dy.a.is_zero()).then(|| lo.clone());
    }
    let (lead, other) = if !dx.b.is_zero() { (dx, dy) } else { (dy, dx) };
    let t = lead.hits(&Q::zero(), lo, hi)?;
    other.at(&t).is_zero().then_some(t)
}

/// Minimum of `dx(t)^2 + dy(t)^2` on `[lo, hi]` and where it is attained.
fn planar_min(dx: &Aff, dy: &Aff, lo: &Q, hi: &Q) -> (Q, Q) {
    let curv = &dx.b * &dx.b + &dy.b * &dy.b;
    let t = if curv.is_zero() {
        lo.clone()
    } else {
        let star = -(&dx.a * &dx.b + &dy.a * &dy.b) / curv;
        star.clamp(lo.clone(), hi.clone())
    };
    let (x, y) = (dx.at(&t), dy.at(&t));
    (&x * &x + &y * &y, t)
}

/// Float counterpart of [`planar_min`], returning the distance itself.
fn planar_min_f64(dx: (f64, f64), dy: (f64, f64), lo: f64, hi: f64) -> f64 {
    let curv = dx.1 * dx.1 + dy.1 * dy.1;
    let t = if curv == 0.0 {
        lo
    } else {
        (-(dx.0 * dx.1 + dy.0 * dy.1) / curv).clamp(lo, hi)
    };
    let (x, y) = (dx.0 + dx.1 * t, dy.0 + dy.1 * t);
    (x * x + y * y).sqrt()
}

/// Float error allowance for the cell filter. Coordinates are small and
/// times stay below `FILTER_MAX_TIME`, so rounding errors are orders of
/// magnitude below this.
const FILTER_SLACK: f64 = 1e-6;
const FILTER_MAX_TIME: f64 = 1e9;
const FILTER_MAX_COORD: f64 = 1e6;

/// Simulates two walks over planar polylines (route vertices, start first).
///
/// A cell is solved exactly unless its float distance is clearly positive
/// and clearly above the best exact minimum so far.
pub fn simulate_planar<P1: Polyline + ?Sized, P2: Polyline + ?Sized>(
    v1: &P1,
    v2: &P2,
    w1: impl Iterator<Item = Piece>,
    w2: impl Iterator<Item = Piece>,
) -> MeetingVerdict {
    assert!(
        v1.vertex_count() > 0 && v2.vertex_count() > 0,
        "planar routes include their start"
    );
    let tr1 = PlanarTrack { vertices: v1 };
    let tr2 = PlanarTrack { vertices: v2 };
    let mut c1 = Cursor::new(w1, v1.segment_count());
    let mut c2 = Cursor::new(w2, v2.segment_count());
    let mut best: Option<(Q, Q)> = None;
    let mut best_f = f64::INFINITY;
    let mut found: Option<(Q, QPoint)> = None;
    let mut lo_f = 0.0;
    let until = sweep(&tr1, &tr2, &mut c1, &mut c2, |lo, hi, a, b| {
        let hi_f = q_to_f64(hi);
        let dxf = (a.fx.0 - b.fx.0, a.fx.1 - b.fx.1);
        let dyf = (a.fy.0 - b.fy.0, a.fy.1 - b.fy.1);
        let trusted = hi_f < FILTER_MAX_TIME
            && [a.fx.0, a.fy.0, b.fx.0, b.fy.0, dxf.1, dyf.1]
                .iter()
                .all(|v| v.is_finite() && v.abs() < FILTER_MAX_COORD);
        let cell_lo = lo_f;
        lo_f = hi_f;
        if trusted && best.is_some() {
            let d = planar_min_f64(dxf, dyf, cell_lo, hi_f);
            if d > FILTER_SLACK && d > best_f + FILTER_SLACK {
                return false;
            }
        }
        let (ax, ay) = a.exact(v1);
        let (bx, by) = b.exact(v2);
        let dx = ax.sub(bx);
        let dy = ay.sub(by);
        if let Some(t) = planar_root(&dx, &dy, lo, hi) {
            best = Some((Q::zero(), t.clone()));
            found = Some((t.clone(), QPoint::new(ax.at(&t), ay.at(&t))));
            return true;
        }
        let (d, t) = planar_min(&dx, &dy, lo, hi);
        if best.as_ref().map_or(true, |(b, _)| d < *b) {
            best_f = q_to_f64(&d).sqrt();
            best = Some((d, t));
        }
        false
    });
    let (min_sq, min_t) = best.expect("at least one cell");
    match found {
        Some((t, p)) => MeetingVerdict {
            met: true,
            simulated_until: t.clone(),
            time: Some(t),
            location: Some(MeetingPoint::Point { x: p.x, y: p.y }),
            min_distance_sq: Some(min_sq),
            min_distance_time: Some(min_t),
        },
        None => MeetingVerdict {
            met: false,
            time: None,
            location: None,
            min_distance_sq: Some(min_sq),
            min_distance_time: Some(min_t),
            simulated_until: until.max(c1.end.clone()).max(c2.end.clone()),
        },
    }
}

/// Where a planar walk is at time `t`.
pub fn planar_location_at<P: Polyline + ?Sized>(vertices: &P, pieces: impl Iterator<Item = Piece>, t: &Q) -> QPoint {
    let tr = PlanarTrack { vertices };
    for p in pieces {
        if p.t0 <= *t && *t <= p.t1 {
            let pos = tr.at_piece(&p);
            let (x, y) = pos.exact(vertices);
            return QPoint::new(x.at(t), y.at(t));
        }
    }
    if *t <= qi(0) {
        return vertices.vertex(0).clone();
    }
    vertices.vertex(vertices.vertex_count() - 1).clone()
}
