use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Exponent `q ∈ [1, ∞]` of an `L_q` norm or `ℓ_q` sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lq {
    Finite(f64),
    Infinity,
}

impl Lq {
    pub fn finite(q: f64) -> Result<Self> {
        if q >= 1.0 && q.is_finite() {
            Ok(Lq::Finite(q))
        } else {
            Err(Error::Invalid(format!("q must lie in [1, inf), got {q}")))
        }
    }

    /// `1/q`, zero for `q = ∞`.
    pub fn recip(&self) -> f64 {
        match self {
            Lq::Finite(q) => 1.0 / q,
            Lq::Infinity => 0.0,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Lq::Infinity)
    }
}

impl fmt::Display for Lq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lq::Finite(q) => write!(f, "{q}"),
            Lq::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Lq {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Lq::Infinity),
            t => {
                let q: f64 = t
                    .parse()
                    .map_err(|_| Error::Invalid(format!("cannot parse q from {s:?}")))?;
                Lq::finite(q)
            }
        }
    }
}

impl Serialize for Lq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Lq::Finite(q) => s.serialize_f64(*q),
            Lq::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Lq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(q) => Lq::finite(q).map_err(serde::de::Error::custom),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_roundtrip() {
        assert_eq!("inf".parse::<Lq>().unwrap(), Lq::Infinity);
        assert_eq!("2".parse::<Lq>().unwrap(), Lq::Finite(2.0));
        assert!("0.5".parse::<Lq>().is_err());
        for q in [Lq::Finite(1.5), Lq::Infinity] {
            let s = serde_json::to_string(&q).unwrap();
            assert_eq!(serde_json::from_str::<Lq>(&s).unwrap(), q);
        }
    }
}
