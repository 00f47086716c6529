//! The graph `G_T` of a terrain and planar routes built on it.
//!
//! Nodes are the rational interior points (`V1`) plus one degree-1 stub per
//! `(point, port)` whose segment touches the boundary (`V2`). Port `k` at an
//! interior point `p` leads towards `p + z_k`, where `z_k` is the `k`-th
//! rational pair. The zero offset is a zero-length loop back to `p`.
//!
//! Nodes are interned in a table owned by [`GtGraph`], so routes store small
//! ids instead of exact coordinates.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::rc::Rc;

use num_traits::Zero;

use super::{BoundaryHit, GeometryError, Polyline, QPoint, Terrain};
use crate::enumeration::{rational_pair, rational_pair_index, EnumerationError, Label, Port, RationalPair};
use crate::graph::{Degree, EdgeTraversal, GraphError, PortGraph};
use crate::rational::{fmt_q, parse_q};
use crate::rendezvous::{graph_rv, Limits, Route, RouteError};

/// Handle of a `G_T` node inside one [`GtGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GtId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GtNode {
    Interior(QPoint),
    /// Reached by leaving `from` through `port` and touching the boundary at `hit`.
    Stub {
        from: GtId,
        port: Port,
        hit: QPoint,
    },
}

/// Where one `G_T` move from an interior point ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GtArrival {
    Interior(QPoint),
    Boundary(BoundaryHit),
}

/// Absolute target of `port` at `p`: `p` shifted by the `port`-th rational pair.
pub fn gt_target(p: &QPoint, port: Port) -> Result<QPoint, EnumerationError> {
    let z = rational_pair(port)?;
    Ok(QPoint::new(&p.x + z.q1, &p.y + z.q2))
}

/// Port at any interior point whose offset is `d`.
pub fn gt_port(d: &QPoint) -> Result<Port, EnumerationError> {
    rational_pair_index(&RationalPair {
        q1: d.x.clone(),
        q2: d.y.clone(),
    })
}

/// One move of the terrain walk from the interior point `p` through `port`.
pub fn gt_traverse(t: &Terrain, p: &QPoint, port: Port) -> Result<GtArrival, RouteError> {
    if !t.is_interior(p) {
        return Err(GeometryError::StartNotInterior(Box::new(p.clone())).into());
    }
    let target = gt_target(p, port)?;
    Ok(match t.first_hit_unchecked(p, &target) {
        None => GtArrival::Interior(target),
        Some(hit) => GtArrival::Boundary(hit),
    })
}

#[derive(Default)]
struct Table {
    nodes: Vec<GtNode>,
    index: HashMap<GtNode, GtId>,
    moves: HashMap<(GtId, Port), EdgeTraversal<GtId>>,
}

impl Table {
    fn intern(&mut self, node: GtNode) -> GtId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = GtId(u32::try_from(self.nodes.len()).expect("fewer than 2^32 nodes"));
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }
}

/// Lazily explored `G_T` over a terrain.
pub struct GtGraph<'t> {
    terrain: &'t Terrain,
    table: RefCell<Table>,
}

impl<'t> GtGraph<'t> {
    pub fn new(terrain: &'t Terrain) -> Self {
        GtGraph {
            terrain,
            table: RefCell::new(Table::default()),
        }
    }

    pub fn terrain(&self) -> &Terrain {
        self.terrain
    }

    /// Handle of the interior point `p`.
    pub fn interior(&self, p: &QPoint) -> Result<GtId, GeometryError> {
        if !self.terrain.is_interior(p) {
            return Err(GeometryError::StartNotInterior(Box::new(p.clone())));
        }
        Ok(self.table.borrow_mut().intern(GtNode::Interior(p.clone())))
    }

    pub fn node(&self, id: GtId) -> GtNode {
        self.table.borrow().nodes[id.0 as usize].clone()
    }

    /// Planar location of a node: the point itself, or the boundary hit of a stub.
    pub fn point(&self, id: GtId) -> QPoint {
        match &self.table.borrow().nodes[id.0 as usize] {
            GtNode::Interior(p) => p.clone(),
            GtNode::Stub { hit, .. } => hit.clone(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.table.borrow().nodes.len()
    }

    fn unknown(id: &GtId) -> GraphError {
        GraphError::UnknownNode(format!("gt#{}", id.0))
    }

    /// Snapshot of every node's planar location, indexed by id.
    pub fn points(&self) -> Vec<QPoint> {
        self.table
            .borrow()
            .nodes
            .iter()
            .map(|n| match n {
                GtNode::Interior(p) => p.clone(),
                GtNode::Stub { hit, .. } => hit.clone(),
            })
            .collect()
    }

    /// Planar form of a route built on this graph.
    pub fn planar(&self, r: &Route<GtId>) -> PlanarRoute {
        let table = self.table.borrow();
        let mut path = Vec::with_capacity(r.len() + 1);
        let mut kinds = Vec::with_capacity(r.len());
        path.push(r.start().0);
        for step in r.steps() {
            path.push(step.to.0);
            let kind = match (&table.nodes[step.from.0 as usize], &table.nodes[step.to.0 as usize]) {
                (_, GtNode::Stub { .. }) => SegmentKind::BoundaryHit,
                (GtNode::Stub { .. }, _) => SegmentKind::BoundaryReturn,
                _ => SegmentKind::Free,
            };
            kinds.push(kind);
        }
        drop(table);
        PlanarRoute {
            pool: Rc::new(self.points()),
            path,
            kinds,
            phase_marks: r.phase_marks().to_vec(),
        }
    }
}

impl PortGraph for GtGraph<'_> {
    type Node = GtId;

    fn contains(&self, v: &GtId) -> bool {
        (v.0 as usize) < self.node_count()
    }

    fn degree(&self, v: &GtId) -> Result<Degree, GraphError> {
        match self.table.borrow().nodes.get(v.0 as usize) {
            Some(GtNode::Interior(_)) => Ok(Degree::Infinite),
            Some(GtNode::Stub { .. }) => Ok(Degree::Finite(1)),
            None => Err(Self::unknown(v)),
        }
    }

    fn is_port(&self, v: &GtId, port: Port) -> Result<bool, GraphError> {
        match self.table.borrow().nodes.get(v.0 as usize) {
            Some(GtNode::Interior(_)) => Ok(port >= 1),
            Some(GtNode::Stub { .. }) => Ok(port == 1),
            None => Err(Self::unknown(v)),
        }
    }

    fn traverse(&self, v: &GtId, port: Port) -> Result<EdgeTraversal<GtId>, GraphError> {
        if let Some(step) = self.table.borrow().moves.get(&(*v, port)) {
            return Ok(step.clone());
        }
        let node = self
            .table
            .borrow()
            .nodes
            .get(v.0 as usize)
            .cloned()
            .ok_or_else(|| Self::unknown(v))?;
        let invalid = || GraphError::InvalidPort {
            node: self.node_label(v),
            port,
        };
        let (to, in_port) = match node {
            GtNode::Stub { from, port: back, .. } => {
                if port != 1 {
                    return Err(invalid());
                }
                (from, back)
            }
            GtNode::Interior(p) => {
                if port == 0 {
                    return Err(invalid());
                }
                let target = gt_target(&p, port).map_err(|_| GraphError::Overflow)?;
                let offset = &target - &p;
                if offset.x.is_zero() && offset.y.is_zero() {
                    (*v, port)
                } else {
                    match self.terrain.first_hit_unchecked(&p, &target) {
                        None => {
                            let back = gt_port(&(&QPoint::origin() - &offset)).map_err(|_| GraphError::Overflow)?;
                            let to = self.table.borrow_mut().intern(GtNode::Interior(target));
                            (to, back)
                        }
                        Some(hit) => {
                            let stub = GtNode::Stub {
                                from: *v,
                                port,
                                hit: hit.w,
                            };
                            (self.table.borrow_mut().intern(stub), 1)
                        }
                    }
                }
            }
        };
        let step = EdgeTraversal {
            from: *v,
            out_port: port,
            to,
            in_port,
        };
        self.table.borrow_mut().moves.insert((*v, port), step.clone());
        Ok(step)
    }

    fn node_label(&self, v: &GtId) -> String {
        match self.table.borrow().nodes.get(v.0 as usize) {
            Some(GtNode::Interior(p)) => format!("{},{}", fmt_q(&p.x), fmt_q(&p.y)),
            Some(GtNode::Stub { from, port, .. }) => format!("{}#{}", self.node_label(from), port),
            None => format!("gt#{}", v.0),
        }
    }

    fn parse_node(&self, text: &str) -> Result<GtId, GraphError> {
        let bad = || GraphError::UnknownNode(text.to_string());
        if let Some((from, port)) = text.rsplit_once('#') {
            let from = self.parse_node(from)?;
            let port: Port = port.trim().parse().map_err(|_| bad())?;
            let step = self.traverse(&from, port)?;
            return match self.node(step.to) {
                GtNode::Stub { .. } => Ok(step.to),
                GtNode::Interior(_) => Err(bad()),
            };
        }
        let (x, y) = text.split_once(',').ok_or_else(bad)?;
        let p = QPoint::new(parse_q(x).map_err(|_| bad())?, parse_q(y).map_err(|_| bad())?);
        self.interior(&p).map_err(|_| bad())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    /// Between two interior points, avoiding the boundary.
    Free,
    /// From an interior point to its first boundary contact.
    BoundaryHit,
    /// The forced return after a boundary hit.
    BoundaryReturn,
}

impl SegmentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SegmentKind::Free => "free",
            SegmentKind::BoundaryHit => "hit",
            SegmentKind::BoundaryReturn => "return",
        }
    }
}

/// A terrain route: vertices shared through a point pool, one kind per segment.
#[derive(Debug, Clone)]
pub struct PlanarRoute {
    pool: Rc<Vec<QPoint>>,
    path: Vec<u32>,
    kinds: Vec<SegmentKind>,
    phase_marks: Vec<usize>,
}

impl PlanarRoute {
    pub fn start(&self) -> &QPoint {
        self.vertex(0)
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn kinds(&self) -> &[SegmentKind] {
        &self.kinds
    }

    pub fn phase_marks(&self) -> &[usize] {
        &self.phase_marks
    }

    pub fn vertices(&self) -> impl Iterator<Item = &QPoint> {
        self.path.iter().map(|&i| &self.pool[i as usize])
    }

    pub fn segments(&self) -> impl Iterator<Item = (&QPoint, &QPoint, SegmentKind)> {
        (0..self.len()).map(|m| (self.vertex(m), self.vertex(m + 1), self.kinds[m]))
    }

    /// The same route shifted by `by`.
    pub fn translated(&self, by: &QPoint) -> PlanarRoute {
        PlanarRoute {
            pool: Rc::new(self.pool.iter().map(|p| p + by).collect()),
            ..self.clone()
        }
    }

    pub fn to_points(&self) -> Vec<QPoint> {
        self.vertices().cloned().collect()
    }

    /// Text dump: header, `# start x y`, then `x<TAB>y<TAB>kind` per vertex
    /// with `# phase k` markers.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{PLANAR_DUMP_HEADER}").unwrap();
        writeln!(out, "# start {}", self.start()).unwrap();
        let mut marks = self.phase_marks.iter().enumerate().peekable();
        for (m, (_, b, kind)) in self.segments().enumerate() {
            while let Some((k, _)) = marks.next_if(|(_, &at)| at == m) {
                writeln!(out, "# phase {}", k + 1).unwrap();
            }
            writeln!(out, "{}\t{}\t{}", fmt_q(&b.x), fmt_q(&b.y), kind.as_str()).unwrap();
        }
        for (k, _) in marks {
            writeln!(out, "# phase {}", k + 1).unwrap();
        }
        out
    }

    /// Every containment violation: vertices outside the terrain, free
    /// segments touching the boundary, hits not on the boundary, returns not
    /// reversing the preceding hit.
    pub fn audit(&self, t: &Terrain) -> Vec<String> {
        let mut bad = Vec::new();
        if !t.is_interior(self.start()) {
            bad.push(format!("start {} is not interior", self.start()));
        }
        for (m, (a, b, kind)) in self.segments().enumerate() {
            match kind {
                SegmentKind::Free => {
                    if !t.is_interior(b) || (a != b && t.first_hit_unchecked(a, b).is_some()) {
                        bad.push(format!("free segment {m} leaves the interior"));
                    }
                }
                SegmentKind::BoundaryHit => {
                    if t.classify(b) != super::Region::Boundary {
                        bad.push(format!("hit {m} is not on the boundary"));
                    } else if t.first_hit_unchecked(a, b).map(|h| h.w) != Some(b.clone()) {
                        bad.push(format!("hit {m} is not the first contact"));
                    }
                }
                SegmentKind::BoundaryReturn => {
                    let ok = m > 0 && self.kinds[m - 1] == SegmentKind::BoundaryHit && self.vertex(m - 1) == b;
                    if !ok {
                        bad.push(format!("return {m} does not reverse a hit"));
                    }
                }
            }
        }
        bad
    }
}

impl Polyline for PlanarRoute {
    fn vertex_count(&self) -> usize {
        self.path.len()
    }

    fn vertex(&self, i: usize) -> &QPoint {
        &self.pool[self.path[i] as usize]
    }
}

pub const PLANAR_DUMP_HEADER: &str = "# tunnelmeet planar route v1";

/// Route of the agent labeled `label` starting at `start`, built on `gt`.
pub fn geometric_rv_in(
    gt: &GtGraph<'_>,
    start: &QPoint,
    label: Label,
    limits: &Limits,
) -> Result<(Route<GtId>, PlanarRoute), RouteError> {
    let v = gt.interior(start)?;
    let route = graph_rv(gt, &v, label, limits)?;
    let planar = gt.planar(&route);
    Ok((route, planar))
}

/// Terrain route of the agent labeled `label` starting at `start`.
pub fn geometric_rv(t: &Terrain, start: &QPoint, label: Label, limits: &Limits) -> Result<PlanarRoute, RouteError> {
    let gt = GtGraph::new(t);
    geometric_rv_in(&gt, start, label, limits).map(|(_, p)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{pt, Polygon};
    use crate::graph::follow_ports;
    use crate::rational::q;
    use crate::rendezvous::tunnel_check;

    fn square() -> Terrain {
        Terrain::new(Polygon::rect(&pt((0, 1), (0, 1)), &pt((1, 1), (1, 1))), vec![]).unwrap()
    }

    fn port_of(x: (i64, i64), y: (i64, i64)) -> Port {
        gt_port(&pt(x, y)).unwrap()
    }

    #[test]
    fn targets_shift_by_the_enumeration() {
        let k = port_of((1, 1), (0, 1));
        assert_eq!(gt_target(&QPoint::origin(), k).unwrap(), pt((1, 1), (0, 1)));
        let k = port_of((-1, 2), (1, 4));
        assert_eq!(gt_target(&pt((1, 3), (2, 1)), k).unwrap(), pt((-1, 6), (9, 4)));
        let (a, b) = (pt((1, 3), (2, 1)), pt((-5, 7), (3, 11)));
        for k in 1..=1000 {
            assert_eq!(&gt_target(&a, k).unwrap() - &a, &gt_target(&b, k).unwrap() - &b);
        }
    }

    #[test]
    fn traverse_interior_and_boundary() {
        let t = square();
        let c = pt((1, 2), (1, 2));
        let k = port_of((1, 8), (0, 1));
        assert_eq!(gt_traverse(&t, &c, k).unwrap(), GtArrival::Interior(pt((5, 8), (1, 2))));
        let k = port_of((0, 1), (1, 1));
        match gt_traverse(&t, &c, k).unwrap() {
            GtArrival::Boundary(h) => assert_eq!(h.w, pt((1, 2), (1, 1))),
            other => panic!("{other:?}"),
        }
        let g = GtGraph::new(&t);
        let v = g.interior(&c).unwrap();
        let out = g.traverse(&v, k).unwrap();
        assert_eq!(g.degree(&out.to).unwrap(), Degree::Finite(1));
        assert!(!g.is_port(&out.to, 2).unwrap());
        let back = g.traverse(&out.to, 1).unwrap();
        assert_eq!((back.to, back.in_port), (v, k));
        assert_eq!(g.node_label(&out.to), format!("1/2,1/2#{k}"));
        assert_eq!(g.parse_node(&g.node_label(&out.to)).unwrap(), out.to);
    }

    #[test]
    fn port_symmetry_sweep() {
        let t = square();
        let g = GtGraph::new(&t);
        let starts = [pt((1, 2), (1, 2)), pt((1, 4), (3, 4)), pt((1, 8), (1, 16))];
        for p in &starts {
            let v = g.interior(p).unwrap();
            for port in 1..=350u64 {
                let step = g.traverse(&v, port).unwrap();
                let back = g.traverse(&step.to, step.in_port).unwrap();
                assert_eq!((back.to, back.in_port), (v, port), "port {port} at {p}");
            }
        }
    }

    #[test]
    fn zero_phases_is_just_the_start() {
        let t = square();
        let r = geometric_rv(&t, &pt((1, 4), (1, 4)), 1, &Limits::phases(0)).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.start(), &pt((1, 4), (1, 4)));
        assert!(geometric_rv(&t, &pt((0, 1), (1, 4)), 1, &Limits::phases(0)).is_err());
    }

    #[test]
    fn routes_stay_inside() {
        let t = Terrain::new(
            Polygon::rect(&pt((0, 1), (0, 1)), &pt((1, 1), (1, 1))),
            vec![Polygon::rect(&pt((1, 4), (1, 4)), &pt((3, 4), (3, 4)))],
        )
        .unwrap();
        let r = geometric_rv(&t, &pt((1, 8), (1, 2)), 1, &Limits::phases(12)).unwrap();
        assert!(!r.is_empty());
        assert_eq!(r.audit(&t), Vec::<String>::new());
        assert_eq!(r.vertices().last(), Some(r.start()));
    }

    #[test]
    fn one_hop_tunnel_in_the_square() {
        let t = square();
        let (a, b) = (pt((1, 4), (1, 4)), pt((3, 4), (1, 4)));
        let fwd = port_of((1, 2), (0, 1));
        let back = port_of((-1, 2), (0, 1));
        let quad = crate::rendezvous::quadruple_for(1, 2, vec![fwd], vec![back]).unwrap();
        let k = crate::enumeration::phi_index(&quad).unwrap();
        let gt = GtGraph::new(&t);
        let limits = Limits::phases(k).with_budget(2_000_000).truncating();
        let (r1, _) = geometric_rv_in(&gt, &a, 1, &limits).unwrap();
        let (r2, _) = geometric_rv_in(&gt, &b, 2, &limits).unwrap();
        if r1.phase_count() == k && r2.phase_count() == k {
            assert!(tunnel_check(&r1, &r2).is_some());
        }
        let walked = follow_ports(&gt, &gt.interior(&a).unwrap(), &[fwd]).unwrap();
        assert_eq!(gt.point(walked[0].to), b);
        assert_eq!(walked[0].in_port, back);
        let _ = q(1, 1);
    }
}
