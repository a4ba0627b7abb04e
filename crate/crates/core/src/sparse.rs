//! Finitely supported sequences under the sup norm: the computable slice
//! of the nonnegative sequence cone targeted by the embeddings, plus the
//! signed variant consumed by the folding map.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A coordinate of the sequence space: either a raw index, or a
/// (scale, member) pair naming a cover member inside a scale family.
/// Serialized as `"17"` or `"-2:5"` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Raw(u64),
    Scale { scale: i32, member: u32 },
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Raw(i) => write!(f, "{i}"),
            Coord::Scale { scale, member } => write!(f, "{scale}:{member}"),
        }
    }
}

impl FromStr for Coord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None => s
                .parse::<u64>()
                .map(Coord::Raw)
                .map_err(|_| Error::bad_params(format!("bad coordinate {s:?}"))),
            Some((n, tau)) => {
                let scale = n
                    .parse::<i32>()
                    .map_err(|_| Error::bad_params(format!("bad scale in {s:?}")))?;
                let member = tau
                    .parse::<u32>()
                    .map_err(|_| Error::bad_params(format!("bad member in {s:?}")))?;
                Ok(Coord::Scale { scale, member })
            }
        }
    }
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct CoordVisitor;

impl Visitor<'_> for CoordVisitor {
    type Value = Coord;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a coordinate id like \"17\" or \"-2:5\"")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Coord, E> {
        v.parse().map_err(|e| E::custom(format!("{e}")))
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Coord, D::Error> {
        d.deserialize_str(CoordVisitor)
    }
}

/// Finitely supported sequence with strictly positive stored values;
/// absent coordinates are zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SparseNonnegativeSequence {
    entries: BTreeMap<Coord, f64>,
}

impl SparseNonnegativeSequence {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Build from (coordinate, value) pairs, dropping zeros and rejecting
    /// negative or non-finite values.
    pub fn from_entries(entries: impl IntoIterator<Item = (Coord, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (c, v) in entries {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::bad_params(format!(
                    "coordinate {c} has invalid value {v}"
                )));
            }
            if v > 0.0 && map.insert(c, v).is_some() {
                return Err(Error::bad_params(format!("duplicate coordinate {c}")));
            }
        }
        Ok(SparseNonnegativeSequence { entries: map })
    }

    pub fn get(&self, c: Coord) -> f64 {
        self.entries.get(&c).copied().unwrap_or(0.0)
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coord, f64)> + '_ {
        self.entries.iter().map(|(c, v)| (*c, *v))
    }

    /// Sup norm: the largest entry, 0 for the zero sequence.
    pub fn sup_norm(&self) -> f64 {
        self.entries.values().fold(0.0, |m, v| f64::max(m, *v))
    }

    /// Sup-norm distance to another sequence.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        let mut best = 0.0_f64;
        for (c, v) in &self.entries {
            best = best.max((v - other.get(*c)).abs());
        }
        for (c, v) in &other.entries {
            if !self.entries.contains_key(c) {
                best = best.max(*v);
            }
        }
        best
    }

    pub(crate) fn insert_positive(&mut self, c: Coord, v: f64) {
        debug_assert!(v > 0.0);
        self.entries.insert(c, v);
    }
}

/// Finitely supported signed sequence over raw coordinate ids; the input
/// side of the folding map.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignedSparseSequence {
    entries: BTreeMap<u64, f64>,
}

impl SignedSparseSequence {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (u64, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (c, v) in entries {
            if !v.is_finite() {
                return Err(Error::bad_params(format!(
                    "coordinate {c} has non-finite value {v}"
                )));
            }
            if v != 0.0 && map.insert(c, v).is_some() {
                return Err(Error::bad_params(format!("duplicate coordinate {c}")));
            }
        }
        Ok(SignedSparseSequence { entries: map })
    }

    pub fn get(&self, c: u64) -> f64 {
        self.entries.get(&c).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.entries.iter().map(|(c, v)| (*c, *v))
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn sup_norm(&self) -> f64 {
        self.entries.values().fold(0.0, |m, v| f64::max(m, v.abs()))
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        let mut best = 0.0_f64;
        for (c, v) in &self.entries {
            best = best.max((v - other.get(*c)).abs());
        }
        for (c, v) in &other.entries {
            if !self.entries.contains_key(c) {
                best = best.max(v.abs());
            }
        }
        best
    }
}
