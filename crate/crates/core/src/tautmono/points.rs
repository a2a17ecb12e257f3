use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A marked-point label. The formal point `*` that a forgetful map removes is
/// the reserved maximal label, so it is never a block representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub u32);

impl Point {
    pub const STAR: Point = Point(u32::MAX);

    pub fn is_star(self) -> bool {
        self == Point::STAR
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_star() {
            f.write_str("*")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Serialized as a JSON integer, or the string `"*"` for the star.
impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_star() {
            s.serialize_str("*")
        } else {
            s.serialize_u32(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct PointVisitor;
        impl Visitor<'_> for PointVisitor {
            type Value = Point;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a point label or \"*\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Point, E> {
                u32::try_from(v)
                    .ok()
                    .filter(|&v| v != u32::MAX)
                    .map(Point)
                    .ok_or_else(|| E::custom("point label out of range"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Point, E> {
                if v == "*" {
                    Ok(Point::STAR)
                } else {
                    v.parse::<u32>()
                        .map_err(E::custom)
                        .and_then(|n| self.visit_u64(u64::from(n)))
                }
            }
        }
        de.deserialize_any(PointVisitor)
    }
}

/// Finite set of marked points `I`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointSet {
    labels: BTreeSet<Point>,
}

impl PointSet {
    pub fn empty() -> Self {
        PointSet::default()
    }

    pub fn from_labels(labels: impl IntoIterator<Item = u32>) -> Self {
        PointSet {
            labels: labels.into_iter().map(Point).collect(),
        }
    }

    pub fn from_points(points: impl IntoIterator<Item = Point>) -> Self {
        PointSet {
            labels: points.into_iter().collect(),
        }
    }

    /// `{1, ..., n}`.
    pub fn first_n(n: u32) -> Self {
        Self::from_labels(1..=n)
    }

    /// `I ⊔ {*}`.
    pub fn with_star(&self) -> Self {
        self.with(Point::STAR)
    }

    pub fn with(&self, p: Point) -> Self {
        let mut labels = self.labels.clone();
        labels.insert(p);
        PointSet { labels }
    }

    pub fn without(&self, p: Point) -> Self {
        let mut labels = self.labels.clone();
        labels.remove(&p);
        PointSet { labels }
    }

    pub fn contains(&self, p: Point) -> bool {
        self.labels.contains(&p)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Ascending order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Point> + '_ {
        self.labels.iter().copied()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.labels.is_subset(&other.labels)
    }

    pub fn max_point(&self) -> Option<Point> {
        self.labels.iter().next_back().copied()
    }

    pub(crate) fn require(&self, p: Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::UnknownPoint(p))
        }
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}
