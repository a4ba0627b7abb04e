//! Extended nonnegative values: a finite number or a tagged infinity.
//!
//! Lebesgue numbers and uniform moduli take the value infinity on covers
//! that contain the whole space. The tag survives serialization as the
//! string `"inf"` instead of a float sentinel.

use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinity,
}

impl Extended {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }

    pub fn as_finite(&self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(*v),
            Extended::Infinity => None,
        }
    }

    /// Scale a value by a positive factor; infinity is fixed.
    pub fn scale(&self, factor: f64) -> Extended {
        match self {
            Extended::Finite(v) => Extended::Finite(v * factor),
            Extended::Infinity => Extended::Infinity,
        }
    }

    /// True when `self >= bound` with infinity above every finite bound.
    pub fn at_least(&self, bound: f64) -> bool {
        match self {
            Extended::Finite(v) => *v >= bound,
            Extended::Infinity => true,
        }
    }

    /// True when `self <= bound`.
    pub fn at_most(&self, bound: f64) -> bool {
        match self {
            Extended::Finite(v) => *v <= bound,
            Extended::Infinity => false,
        }
    }
}

impl From<f64> for Extended {
    fn from(v: f64) -> Self {
        debug_assert!(!v.is_nan());
        if v.is_infinite() {
            Extended::Infinity
        } else {
            Extended::Finite(v)
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Extended::Infinity, Extended::Infinity) => Some(Ordering::Equal),
            (Extended::Infinity, Extended::Finite(_)) => Some(Ordering::Greater),
            (Extended::Finite(_), Extended::Infinity) => Some(Ordering::Less),
            (Extended::Finite(a), Extended::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => serializer.serialize_f64(*v),
            Extended::Infinity => serializer.serialize_str("inf"),
        }
    }
}

struct ExtendedVisitor;

impl<'de> Visitor<'de> for ExtendedVisitor {
    type Value = Extended;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a finite number or the string \"inf\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Extended, E> {
        Ok(Extended::Finite(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Extended, E> {
        Ok(Extended::Finite(v as f64))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Extended, E> {
        Ok(Extended::Finite(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Extended, E> {
        if v == "inf" {
            Ok(Extended::Infinity)
        } else {
            Err(E::custom(format!("unexpected extended value {v:?}")))
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Extended, D::Error> {
        deserializer.deserialize_any(ExtendedVisitor)
    }
}
