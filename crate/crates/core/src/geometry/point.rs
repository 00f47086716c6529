use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{fmt_q, parse_q, Q};

/// A point with exact rational coordinates, y-axis pointing North.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoint {
    pub x: Q,
    pub y: Q,
}

impl QPoint {
    pub fn new(x: Q, y: Q) -> Self {
        QPoint { x, y }
    }

    pub fn origin() -> Self {
        QPoint::new(Q::from_integer(0.into()), Q::from_integer(0.into()))
    }

    pub fn dot(&self, o: &QPoint) -> Q {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &QPoint) -> Q {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm_sq(&self) -> Q {
        self.dot(self)
    }

    pub fn dist_sq(&self, o: &QPoint) -> Q {
        (self - o).norm_sq()
    }

    /// `self + s * (to - self)`.
    pub fn lerp(&self, to: &QPoint, s: &Q) -> QPoint {
        QPoint::new(&self.x + s * (&to.x - &self.x), &self.y + s * (&to.y - &self.y))
    }

    pub fn scale(&self, s: &Q) -> QPoint {
        QPoint::new(&self.x * s, &self.y * s)
    }
}

impl Add for &QPoint {
    type Output = QPoint;
    fn add(self, o: &QPoint) -> QPoint {
        QPoint::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &QPoint {
    type Output = QPoint;
    fn sub(self, o: &QPoint) -> QPoint {
        QPoint::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Mul<&Q> for &QPoint {
    type Output = QPoint;
    fn mul(self, s: &Q) -> QPoint {
        self.scale(s)
    }
}

impl fmt::Display for QPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", fmt_q(&self.x), fmt_q(&self.y))
    }
}

/// Serialized as `["x", "y"]` with `"num/den"` strings.
impl Serialize for QPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [fmt_q(&self.x), fmt_q(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let x = parse_q(&x).map_err(serde::de::Error::custom)?;
        let y = parse_q(&y).map_err(serde::de::Error::custom)?;
        Ok(QPoint::new(x, y))
    }
}

/// A polygonal line given by its vertices, start first.
pub trait Polyline {
    fn vertex_count(&self) -> usize;
    fn vertex(&self, i: usize) -> &QPoint;

    fn segment_count(&self) -> usize {
        self.vertex_count().saturating_sub(1)
    }
}

impl Polyline for [QPoint] {
    fn vertex_count(&self) -> usize {
        self.len()
    }
    fn vertex(&self, i: usize) -> &QPoint {
        &self[i]
    }
}

impl Polyline for Vec<QPoint> {
    fn vertex_count(&self) -> usize {
        self.len()
    }
    fn vertex(&self, i: usize) -> &QPoint {
        &self[i]
    }
}

/// `QPoint` from small integer fractions: `pt((1, 2), (3, 4))` is (1/2, 3/4).
pub fn pt(x: (i64, i64), y: (i64, i64)) -> QPoint {
    QPoint::new(crate::rational::q(x.0, x.1), crate::rational::q(y.0, y.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn arithmetic_and_json() {
        let a = pt((1, 3), (2, 1));
        let b = pt((-1, 2), (1, 4));
        assert_eq!(&a + &b, pt((-1, 6), (9, 4)));
        assert_eq!(a.dist_sq(&a), q(0, 1));
        assert_eq!(a.lerp(&b, &q(1, 2)), pt((-1, 12), (9, 8)));
        let text = serde_json::to_string(&b).unwrap();
        assert_eq!(text, r#"["-1/2","1/4"]"#);
        assert_eq!(serde_json::from_str::<QPoint>(&text).unwrap(), b);
    }
}
