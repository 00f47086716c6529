//! Rational polygonal lines inside a terrain, and the port sequences that
//! walk them in `G_T`.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::One;

use super::gt::gt_port;
use super::{GeometryError, QPoint, Terrain};
use crate::enumeration::{phi_index, EnumerationError, Label, Port, Quadruple};
use crate::rational::Q;
use crate::rendezvous::{quadruple_for, RouteError};

const MAX_LEVEL: u32 = 14;

type Cell = (i64, i64);

struct Grid<'t> {
    t: &'t Terrain,
    lo: QPoint,
    h: Q,
    safe: HashMap<Cell, bool>,
}

impl Grid<'_> {
    fn corner(&self, (i, j): Cell) -> QPoint {
        QPoint::new(
            &self.lo.x + &self.h * Q::from(BigInt::from(i)),
            &self.lo.y + &self.h * Q::from(BigInt::from(j)),
        )
    }

    fn center(&self, c: Cell) -> QPoint {
        let half = &self.h / Q::from(BigInt::from(2));
        let p = self.corner(c);
        QPoint::new(&p.x + &half, &p.y + &half)
    }

    fn is_safe(&mut self, c: Cell) -> bool {
        if let Some(&s) = self.safe.get(&c) {
            return s;
        }
        let s = self
            .t
            .square_is_interior(&self.corner(c), &self.corner((c.0 + 1, c.1 + 1)));
        self.safe.insert(c, s);
        s
    }

    /// Cells whose closed square contains `p`.
    fn cells_at(&self, p: &QPoint) -> Vec<Cell> {
        let along = |v: &Q, o: &Q| -> Vec<i64> {
            let r = (v - o) / &self.h;
            let f = r.floor().to_integer();
            let Ok(f) = i64::try_from(f) else {
                return Vec::new();
            };
            if r.is_integer() {
                vec![f - 1, f]
            } else {
                vec![f]
            }
        };
        let xs = along(&p.x, &self.lo.x);
        let ys = along(&p.y, &self.lo.y);
        xs.iter().flat_map(|&i| ys.iter().map(move |&j| (i, j))).collect()
    }
}

/// A rational polyline from `u` to `v` whose vertices are interior and whose
/// segments avoid the boundary.
///
/// Direct segment when possible; otherwise a breadth-first path through
/// interior cells of a dyadic grid, refined until one is found, then
/// shortcut greedily.
pub fn rational_path(t: &Terrain, u: &QPoint, v: &QPoint) -> Result<Vec<QPoint>, GeometryError> {
    for p in [u, v] {
        if !t.is_interior(p) {
            return Err(GeometryError::StartNotInterior(Box::new(p.clone())));
        }
    }
    if u == v {
        return Ok(vec![u.clone()]);
    }
    if t.segment_is_interior(u, v) {
        return Ok(vec![u.clone(), v.clone()]);
    }
    let (lo, hi) = t.bbox();
    let span = (&hi.x - &lo.x).max(&hi.y - &lo.y);
    for level in 1..=MAX_LEVEL {
        let h = &span / Q::from(BigInt::one() << level);
        let mut grid = Grid {
            t,
            lo: lo.clone(),
            h,
            safe: HashMap::new(),
        };
        if let Some(cells) = grid_search(&mut grid, u, v) {
            let mut pts = vec![u.clone()];
            pts.extend(cells.into_iter().map(|c| grid.center(c)));
            pts.push(v.clone());
            pts.dedup();
            return Ok(shortcut(t, pts));
        }
    }
    Err(GeometryError::NoPath {
        from: Box::new(u.clone()),
        to: Box::new(v.clone()),
    })
}

fn grid_search(grid: &mut Grid<'_>, u: &QPoint, v: &QPoint) -> Option<Vec<Cell>> {
    let sources: Vec<Cell> = grid.cells_at(u).into_iter().filter(|&c| grid.is_safe(c)).collect();
    let targets: HashSet<Cell> = grid.cells_at(v).into_iter().filter(|&c| grid.is_safe(c)).collect();
    if sources.is_empty() || targets.is_empty() {
        return None;
    }
    let mut parent: HashMap<Cell, Option<Cell>> = sources.iter().map(|&c| (c, None)).collect();
    let mut queue: VecDeque<Cell> = sources.into_iter().collect();
    while let Some(c) = queue.pop_front() {
        if targets.contains(&c) {
            let mut path = vec![c];
            let mut cur = c;
            while let Some(Some(p)) = parent.get(&cur) {
                path.push(*p);
                cur = *p;
            }
            path.reverse();
            return Some(path);
        }
        for n in [(c.0 + 1, c.1), (c.0 - 1, c.1), (c.0, c.1 + 1), (c.0, c.1 - 1)] {
            if !parent.contains_key(&n) && grid.is_safe(n) {
                parent.insert(n, Some(c));
                queue.push_back(n);
            }
        }
    }
    None
}

/// Keeps the first vertex, then repeatedly jumps to the furthest later vertex
/// reachable by an interior segment.
fn shortcut(t: &Terrain, pts: Vec<QPoint>) -> Vec<QPoint> {
    let mut out = vec![pts[0].clone()];
    let mut i = 0;
    while i + 1 < pts.len() {
        let j = (i + 1..pts.len())
            .rev()
            .find(|&j| t.segment_is_interior(&pts[i], &pts[j]))
            .unwrap_or(i + 1);
        out.push(pts[j].clone());
        i = j;
    }
    out
}

/// `G_T` ports walking `path` forwards, and those walking it backwards from
/// its end.
pub fn polyline_ports(path: &[QPoint]) -> Result<(Vec<Port>, Vec<Port>), EnumerationError> {
    let fwd = path
        .windows(2)
        .map(|w| gt_port(&(&w[1] - &w[0])))
        .collect::<Result<_, _>>()?;
    let back = path
        .windows(2)
        .rev()
        .map(|w| gt_port(&(&w[0] - &w[1])))
        .collect::<Result<_, _>>()?;
    Ok((fwd, back))
}

/// The quadruple of two placed terrain agents along a rational path, with its
/// enumeration index when that fits in 64 bits.
pub fn terrain_quadruple(
    t: &Terrain,
    first: (&QPoint, Label),
    second: (&QPoint, Label),
) -> Result<(Option<u64>, Quadruple), RouteError> {
    let path = rational_path(t, first.0, second.0)?;
    let (fwd, back) = polyline_ports(&path)?;
    let quad = quadruple_for(first.1, second.1, fwd, back)?;
    let idx = match phi_index(&quad) {
        Ok(k) => Some(k),
        Err(EnumerationError::Overflow) => None,
        Err(e) => return Err(e.into()),
    };
    Ok((idx, quad))
}

/// Rounds `p` to the dyadic grid of spacing `2^-bits`.
pub(crate) fn dyadic_round(p: &QPoint, bits: u32) -> QPoint {
    let scale = Q::from(BigInt::one() << bits);
    let round = |v: &Q| {
        let s = v * &scale;
        let r = (s + Q::new(BigInt::one(), BigInt::from(2))).floor();
        r / &scale
    };
    QPoint::new(round(&p.x), round(&p.y))
}

/// Largest `2^-k` (`k <= 64`) such that the square of half-side `2^-k`
/// around `p` is interior.
pub(crate) fn dyadic_clearance(t: &Terrain, p: &QPoint) -> Option<Q> {
    (0..=64u32).find_map(|k| {
        let h = Q::new(BigInt::one(), BigInt::one() << k);
        let lo = QPoint::new(&p.x - &h, &p.y - &h);
        let hi = QPoint::new(&p.x + &h, &p.y + &h);
        t.square_is_interior(&lo, &hi).then_some(h)
    })
}
