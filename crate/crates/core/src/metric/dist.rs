use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A distance in `[0, ∞]`, stored exactly.
///
/// Comparisons are exact; there is no tolerance anywhere. `Infinite` is
/// greater than every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dist {
    Finite(Ratio<i64>),
    Infinite,
}

impl Dist {
    pub const ZERO: Dist = Dist::Finite(Ratio::new_raw(0, 1));

    pub fn int(n: i64) -> Dist {
        Dist::Finite(Ratio::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Result<Dist> {
        if den == 0 {
            return Err(Error::DistanceSyntax(format!("{num}/{den}")));
        }
        Ok(Dist::Finite(Ratio::new(num, den)))
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Dist::Finite(r) if r.is_negative())
    }

    pub fn is_positive(self) -> bool {
        match self {
            Dist::Finite(r) => r.is_positive(),
            Dist::Infinite => true,
        }
    }

    /// Sum with `∞` absorbing. Overflow of the exact representation is an error.
    pub fn checked_add(self, other: Dist) -> Result<Dist> {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => a
                .checked_add(&b)
                .map(Dist::Finite)
                .ok_or_else(|| Error::BadMetric(format!("distance overflow adding {a} and {b}"))),
            _ => Ok(Dist::Infinite),
        }
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(self) -> Option<i64> {
        match self {
            Dist::Finite(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }
}

impl From<i64> for Dist {
    fn from(n: i64) -> Self {
        Dist::int(n)
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Infinite => f.write_str("INF"),
            Dist::Finite(r) if r.is_integer() => write!(f, "{}", r.to_integer()),
            Dist::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Dist {
    type Err = Error;

    /// Accepts `INF`, integers, `p/q`, and finite decimals (read exactly).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::DistanceSyntax(s.to_string());
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Dist::Infinite);
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            return Dist::ratio(p, q).map_err(|_| bad());
        }
        if let Some((whole, frac)) = t.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
                return Err(bad());
            }
            let negative = whole.starts_with('-');
            let whole: i64 = if whole.is_empty() || whole == "-" { 0 } else { whole.parse().map_err(|_| bad())? };
            let scale = 10i64.pow(frac.len() as u32);
            let frac: i64 = frac.parse().map_err(|_| bad())?;
            let magnitude = whole
                .abs()
                .checked_mul(scale)
                .and_then(|w| w.checked_add(frac))
                .ok_or_else(bad)?;
            let num = if negative || whole < 0 { -magnitude } else { magnitude };
            return Dist::ratio(num, scale);
        }
        t.parse::<i64>().map(Dist::int).map_err(|_| bad())
    }
}

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_integer() {
            Some(n) => serializer.serialize_i64(n),
            None => serializer.collect_str(self),
        }
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = match serde_json::Value::deserialize(deserializer)? {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s,
            other => return Err(serde::de::Error::custom(format!("expected a distance, got {other}"))),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl Default for Dist {
    fn default() -> Self {
        Dist::Finite(Ratio::zero())
    }
}
