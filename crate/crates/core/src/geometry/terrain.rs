//! Closed polygonal terrains with polygonal holes, and exact predicates.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::QPoint;
use crate::rational::Q;

pub const TERRAIN_SCHEMA: &str = "terrain-v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices")]
    TooFewVertices,
    #[error("polygon is not simple: {0}")]
    NotSimple(String),
    #[error("polygon has zero area")]
    Degenerate,
    #[error("hole {0} is not strictly inside the outer polygon")]
    HoleOutside(usize),
    #[error("holes {0} and {1} intersect or nest")]
    HolesOverlap(usize, usize),
    #[error("StartNotInterior: {0} is not an interior point of the terrain")]
    StartNotInterior(Box<QPoint>),
    #[error("unsupported schema `{0}` (expected `{TERRAIN_SCHEMA}`)")]
    Schema(String),
    #[error("no rational path found between {from} and {to}")]
    NoPath { from: Box<QPoint>, to: Box<QPoint> },
    #[error("malformed terrain: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Interior,
    Boundary,
    Outside,
}

/// Sign of the turn `a -> b -> c`.
fn orient(a: &QPoint, b: &QPoint, c: &QPoint) -> i8 {
    let v = (b - a).cross(&(c - a));
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// `p` lies on the closed segment `[a, b]`.
fn on_segment(p: &QPoint, a: &QPoint, b: &QPoint) -> bool {
    orient(a, b, p) == 0
        && a.x.clone().min(b.x.clone()) <= p.x
        && p.x <= a.x.clone().max(b.x.clone())
        && a.y.clone().min(b.y.clone()) <= p.y
        && p.y <= a.y.clone().max(b.y.clone())
}

/// Closed segments `[a, b]` and `[c, d]` share a point.
fn segments_touch(a: &QPoint, b: &QPoint, c: &QPoint, d: &QPoint) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

/// A simple polygon with rational vertices (either orientation).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polygon {
    pub vertices: Vec<QPoint>,
}

impl Polygon {
    pub fn new(vertices: Vec<QPoint>) -> Result<Self, GeometryError> {
        let p = Polygon { vertices };
        p.validate()?;
        Ok(p)
    }

    /// Axis-aligned rectangle with corners `lo` and `hi`.
    pub fn rect(lo: &QPoint, hi: &QPoint) -> Self {
        Polygon {
            vertices: vec![
                lo.clone(),
                QPoint::new(hi.x.clone(), lo.y.clone()),
                hi.clone(),
                QPoint::new(lo.x.clone(), hi.y.clone()),
            ],
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (&QPoint, &QPoint)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn twice_area(&self) -> Q {
        self.edges().map(|(a, b)| a.cross(b)).fold(Q::zero(), |s, v| s + v)
    }

    fn validate(&self) -> Result<(), GeometryError> {
        let n = self.vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices);
        }
        if self.twice_area().is_zero() {
            return Err(GeometryError::Degenerate);
        }
        let edges: Vec<_> = self.edges().collect();
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                if adjacent {
                    // neighbours may only share their common vertex
                    let (far_i, far_j) = if j == i + 1 { (a, d) } else { (b, c) };
                    if on_segment(far_j, a, b) || on_segment(far_i, c, d) {
                        return Err(GeometryError::NotSimple(format!("edges {i} and {j} overlap")));
                    }
                } else if segments_touch(a, b, c, d) {
                    return Err(GeometryError::NotSimple(format!("edges {i} and {j} intersect")));
                }
            }
        }
        Ok(())
    }

    pub fn on_boundary(&self, p: &QPoint) -> bool {
        self.edges().any(|(a, b)| on_segment(p, a, b))
    }

    /// Strict inside test by crossing parity; boundary points are not inside.
    pub fn strictly_contains(&self, p: &QPoint) -> bool {
        if self.on_boundary(p) {
            return false;
        }
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                // x coordinate of the edge at height p.y, compared without division
                let lhs = (&p.x - &a.x) * (&b.y - &a.y);
                let rhs = (&b.x - &a.x) * (&p.y - &a.y);
                let crosses = if b.y > a.y { lhs < rhs } else { lhs > rhs };
                if crosses {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn translated(&self, by: &QPoint) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|v| v + by).collect(),
        }
    }
}

/// First contact of a segment with a boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryHit {
    /// Parameter along `v -> u`, in `(0, 1]`.
    pub s: Q,
    pub w: QPoint,
    /// Squared distance `|v w|^2`.
    pub dist_sq: Q,
}

/// Closed region: the outer polygon minus the open holes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Terrain {
    outer: Polygon,
    holes: Vec<Polygon>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TerrainSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub outer: Vec<QPoint>,
    #[serde(default)]
    pub holes: Vec<Vec<QPoint>>,
}

impl Terrain {
    pub fn new(outer: Polygon, holes: Vec<Polygon>) -> Result<Self, GeometryError> {
        outer.validate()?;
        for (idx, h) in holes.iter().enumerate() {
            h.validate()?;
            let inside = h.vertices.iter().all(|v| outer.strictly_contains(v));
            let crosses = h
                .edges()
                .any(|(a, b)| outer.edges().any(|(c, d)| segments_touch(a, b, c, d)));
            if !inside || crosses {
                return Err(GeometryError::HoleOutside(idx));
            }
        }
        for i in 0..holes.len() {
            for j in i + 1..holes.len() {
                let (a, b) = (&holes[i], &holes[j]);
                let touch = a
                    .edges()
                    .any(|(p, q)| b.edges().any(|(r, s)| segments_touch(p, q, r, s)));
                let nested = b.strictly_contains(&a.vertices[0]) || a.strictly_contains(&b.vertices[0]);
                if touch || nested {
                    return Err(GeometryError::HolesOverlap(i, j));
                }
            }
        }
        Ok(Terrain { outer, holes })
    }

    pub fn from_spec(spec: TerrainSpec) -> Result<Self, GeometryError> {
        if let Some(s) = &spec.schema {
            if s != TERRAIN_SCHEMA {
                return Err(GeometryError::Schema(s.clone()));
            }
        }
        let holes = spec.holes.into_iter().map(|h| Polygon { vertices: h }).collect();
        Terrain::new(Polygon { vertices: spec.outer }, holes)
    }

    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        let spec: TerrainSpec = serde_json::from_str(text).map_err(|e| GeometryError::Malformed(e.to_string()))?;
        Terrain::from_spec(spec)
    }

    pub fn to_spec(&self) -> TerrainSpec {
        TerrainSpec {
            schema: Some(TERRAIN_SCHEMA.to_string()),
            outer: self.outer.vertices.clone(),
            holes: self.holes.iter().map(|h| h.vertices.clone()).collect(),
        }
    }

    pub fn outer(&self) -> &Polygon {
        &self.outer
    }

    pub fn holes(&self) -> &[Polygon] {
        &self.holes
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = (&QPoint, &QPoint)> {
        self.outer.edges().chain(self.holes.iter().flat_map(|h| h.edges()))
    }

    pub fn classify(&self, p: &QPoint) -> Region {
        if self.outer.on_boundary(p) || self.holes.iter().any(|h| h.on_boundary(p)) {
            return Region::Boundary;
        }
        if self.outer.strictly_contains(p) && !self.holes.iter().any(|h| h.strictly_contains(p)) {
            Region::Interior
        } else {
            Region::Outside
        }
    }

    pub fn is_interior(&self, p: &QPoint) -> bool {
        self.classify(p) == Region::Interior
    }

    pub fn contains(&self, p: &QPoint) -> bool {
        self.classify(p) != Region::Outside
    }

    /// Axis-aligned bounding box of the outer polygon.
    pub fn bbox(&self) -> (QPoint, QPoint) {
        let vs = &self.outer.vertices;
        let min = |f: fn(&QPoint) -> &Q| vs.iter().map(f).min().expect("non-empty").clone();
        let max = |f: fn(&QPoint) -> &Q| vs.iter().map(f).max().expect("non-empty").clone();
        (
            QPoint::new(min(|p| &p.x), min(|p| &p.y)),
            QPoint::new(max(|p| &p.x), max(|p| &p.y)),
        )
    }

    pub fn translated(&self, by: &QPoint) -> Terrain {
        Terrain {
            outer: self.outer.translated(by),
            holes: self.holes.iter().map(|h| h.translated(by)).collect(),
        }
    }

    /// First boundary contact of the segment `v -> u`, with the smallest
    /// parameter `s > 0`. Grazing contact counts.
    pub fn first_boundary_hit(&self, v: &QPoint, u: &QPoint) -> Result<Option<BoundaryHit>, GeometryError> {
        if !self.is_interior(v) {
            return Err(GeometryError::StartNotInterior(Box::new(v.clone())));
        }
        Ok(self.first_hit_unchecked(v, u))
    }

    pub(crate) fn first_hit_unchecked(&self, v: &QPoint, u: &QPoint) -> Option<BoundaryHit> {
        let d = u - v;
        if d.x.is_zero() && d.y.is_zero() {
            return None;
        }
        let mut best: Option<Q> = None;
        for (a, b) in self.boundary_edges() {
            if let Some(s) = segment_entry(v, &d, a, b) {
                if best.as_ref().map_or(true, |cur| s < *cur) {
                    best = Some(s);
                }
            }
        }
        best.map(|s| {
            let w = v.lerp(u, &s);
            let dist_sq = &s * &s * d.norm_sq();
            BoundaryHit { s, w, dist_sq }
        })
    }

    /// No point of the closed segment `[a, b]` is outside the interior.
    pub fn segment_is_interior(&self, a: &QPoint, b: &QPoint) -> bool {
        self.is_interior(a) && self.first_hit_unchecked(a, b).is_none()
    }

    /// No boundary point meets the closed axis-aligned square `[lo, hi]`,
    /// and its centre is interior, so the whole square is interior.
    pub fn square_is_interior(&self, lo: &QPoint, hi: &QPoint) -> bool {
        let sq = Polygon::rect(lo, hi);
        let center = lo.lerp(hi, &(Q::one() / Q::from_integer(2.into())));
        if !self.is_interior(&center) {
            return false;
        }
        for (a, b) in self.boundary_edges() {
            let apart = (a.x < lo.x && b.x < lo.x)
                || (a.x > hi.x && b.x > hi.x)
                || (a.y < lo.y && b.y < lo.y)
                || (a.y > hi.y && b.y > hi.y);
            if apart {
                continue;
            }
            if sq.strictly_contains(a) || sq.on_boundary(a) {
                return false;
            }
            if sq.edges().any(|(c, d)| segments_touch(a, b, c, d)) {
                return false;
            }
        }
        true
    }
}

/// Smallest `s in (0, 1]` with `v + s d` on the closed segment `[a, b]`.
fn segment_entry(v: &QPoint, d: &QPoint, a: &QPoint, b: &QPoint) -> Option<Q> {
    let e = b - a;
    let denom = d.cross(&e);
    let va = a - v;
    if denom.is_zero() {
        if !va.cross(d).is_zero() {
            return None;
        }
        // collinear: parameters of a and b along v + s d
        let dd = d.norm_sq();
        let sa = va.dot(d) / &dd;
        let sb = (b - v).dot(d) / &dd;
        // v is interior, so it is never on the edge itself
        let lo = sa.min(sb);
        return (lo.is_positive() && lo <= Q::one()).then_some(lo);
    }
    let s = va.cross(&e) / &denom;
    let r = va.cross(d) / &denom;
    let (zero, one) = (Q::zero(), Q::one());
    (s > zero && s <= one && r >= zero && r <= one).then_some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pt;
    use crate::rational::q;

    pub(crate) fn unit_square() -> Terrain {
        Terrain::new(Polygon::rect(&pt((0, 1), (0, 1)), &pt((1, 1), (1, 1))), vec![]).unwrap()
    }

    fn holed() -> Terrain {
        Terrain::new(
            Polygon::rect(&pt((0, 1), (0, 1)), &pt((1, 1), (1, 1))),
            vec![Polygon::rect(&pt((1, 4), (1, 4)), &pt((3, 4), (3, 4)))],
        )
        .unwrap()
    }

    #[test]
    fn classification() {
        let t = holed();
        assert_eq!(t.classify(&pt((1, 8), (1, 2))), Region::Interior);
        assert_eq!(t.classify(&pt((1, 2), (1, 2))), Region::Outside);
        assert_eq!(t.classify(&pt((1, 4), (1, 2))), Region::Boundary);
        assert_eq!(t.classify(&pt((0, 1), (1, 3))), Region::Boundary);
        assert_eq!(t.classify(&pt((2, 1), (1, 2))), Region::Outside);
    }

    #[test]
    fn boundary_hits() {
        let sq = unit_square();
        let hit = sq
            .first_boundary_hit(&pt((1, 2), (1, 2)), &pt((1, 2), (2, 1)))
            .unwrap()
            .unwrap();
        assert_eq!(hit.w, pt((1, 2), (1, 1)));
        assert_eq!(hit.dist_sq, q(1, 4));
        assert!(sq
            .first_boundary_hit(&pt((1, 2), (1, 2)), &pt((3, 4), (3, 4)))
            .unwrap()
            .is_none());
        let t = holed();
        let hit = t
            .first_boundary_hit(&pt((1, 8), (1, 2)), &pt((7, 8), (1, 2)))
            .unwrap()
            .unwrap();
        assert_eq!(hit.w, pt((1, 4), (1, 2)));
        // grazing the hole's corner counts as contact
        let graze = t
            .first_boundary_hit(&pt((1, 8), (1, 8)), &pt((3, 8), (3, 8)))
            .unwrap()
            .unwrap();
        assert_eq!(graze.w, pt((1, 4), (1, 4)));
        // running along a boundary edge from outside its span
        let along = t
            .first_boundary_hit(&pt((1, 8), (1, 4)), &pt((7, 8), (1, 4)))
            .unwrap()
            .unwrap();
        assert_eq!(along.w, pt((1, 4), (1, 4)));
        assert_eq!(
            sq.first_boundary_hit(&pt((0, 1), (1, 2)), &pt((1, 2), (1, 2))),
            Err(GeometryError::StartNotInterior(Box::new(pt((0, 1), (1, 2)))))
        );
    }

    #[test]
    fn validation() {
        let bow = vec![
            pt((0, 1), (0, 1)),
            pt((1, 1), (1, 1)),
            pt((1, 1), (0, 1)),
            pt((0, 1), (1, 1)),
        ];
        assert!(Polygon::new(bow).is_err());
        let lopsided = vec![
            pt((0, 1), (0, 1)),
            pt((2, 1), (1, 1)),
            pt((2, 1), (0, 1)),
            pt((0, 1), (3, 1)),
        ];
        assert!(matches!(Polygon::new(lopsided), Err(GeometryError::NotSimple(_))));
        let flat = vec![pt((0, 1), (0, 1)), pt((1, 1), (0, 1)), pt((2, 1), (0, 1))];
        assert!(Polygon::new(flat).is_err());
        let outer = Polygon::rect(&pt((0, 1), (0, 1)), &pt((1, 1), (1, 1)));
        let poking = Polygon::rect(&pt((1, 2), (1, 2)), &pt((3, 2), (3, 4)));
        assert_eq!(
            Terrain::new(outer.clone(), vec![poking]),
            Err(GeometryError::HoleOutside(0))
        );
        let h1 = Polygon::rect(&pt((1, 8), (1, 8)), &pt((1, 2), (1, 2)));
        let h2 = Polygon::rect(&pt((1, 4), (1, 4)), &pt((3, 4), (3, 4)));
        assert_eq!(
            Terrain::new(outer, vec![h1, h2]),
            Err(GeometryError::HolesOverlap(0, 1))
        );
    }

    #[test]
    fn json_round_trip() {
        let t = holed();
        let text = serde_json::to_string(&t.to_spec()).unwrap();
        assert!(text.contains("\"terrain-v1\""));
        assert_eq!(Terrain::from_json(&text).unwrap(), t);
    }

    #[test]
    fn interior_squares() {
        let t = holed();
        assert!(!t.square_is_interior(&pt((0, 1), (0, 1)), &pt((1, 8), (1, 8))));
        assert!(t.square_is_interior(&pt((1, 16), (1, 16)), &pt((3, 16), (3, 16))));
        assert!(!t.square_is_interior(&pt((1, 8), (1, 8)), &pt((3, 8), (3, 8))));
        assert!(!t.square_is_interior(&pt((3, 8), (3, 8)), &pt((5, 8), (5, 8))));
    }
}
