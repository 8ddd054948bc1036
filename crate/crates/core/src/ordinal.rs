//! Ordinals below ω^ω in Cantor normal form, plus a distinguished `INF`.
//!
//! An ordinal `ω^k·c_k + … + ω·c_1 + c_0` is stored as the coefficient
//! vector `[c_0, c_1, …, c_k]` with `c_k != 0` (zero is the empty vector).
//! Bounds of the form `ω·m + n` are `[n, m]`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Cnf(Vec<u64>),
    Infinity,
}

/// A Cantor-normal-form ordinal below ω^ω, or `Infinity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ordinal(Repr);

impl Ordinal {
    pub const INFINITY: Ordinal = Ordinal(Repr::Infinity);

    /// Builds an ordinal from low-to-high coefficients, stripping trailing zeros.
    pub fn make(coefficients: impl Into<Vec<u64>>) -> Self {
        let mut coefficients = coefficients.into();
        while coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        Ordinal(Repr::Cnf(coefficients))
    }

    pub fn zero() -> Self {
        Ordinal(Repr::Cnf(Vec::new()))
    }

    pub fn nat(n: u64) -> Self {
        Self::make(vec![n])
    }

    pub fn omega() -> Self {
        Self::make(vec![0, 1])
    }

    /// `ω·m + n`.
    pub fn omega_times_plus(m: u64, n: u64) -> Self {
        Self::make(vec![n, m])
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.0, Repr::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Cnf(c) if c.is_empty())
    }

    /// Low-to-high coefficients, or `None` for `INF`.
    pub fn coefficients(&self) -> Option<&[u64]> {
        match &self.0 {
            Repr::Cnf(c) => Some(c),
            Repr::Infinity => None,
        }
    }

    /// The value as a natural number, if it is one.
    pub fn as_natural(&self) -> Option<u64> {
        match self.coefficients()? {
            [] => Some(0),
            [n] => Some(*n),
            _ => None,
        }
    }

    /// Ordinal addition. Terms of `self` below the leading power of `rhs` are absorbed.
    pub fn add(&self, rhs: &Ordinal) -> Result<Ordinal, Error> {
        let (Some(a), Some(b)) = (self.coefficients(), rhs.coefficients()) else {
            return Err(Error::InfiniteOperand);
        };
        let Some(&lead) = b.last() else {
            return Ok(self.clone());
        };
        let degree = b.len() - 1;
        let mut out = b.to_vec();
        if a.len() > degree {
            out.resize(a.len(), 0);
            out[degree] = a[degree]
                .checked_add(lead)
                .ok_or(Error::OrdinalOverflow)?;
            out[degree + 1..].copy_from_slice(&a[degree + 1..]);
        }
        Ok(Ordinal::make(out))
    }

    /// `self + n` for a natural `n`.
    pub fn add_nat(&self, n: u64) -> Result<Ordinal, Error> {
        self.add(&Ordinal::nat(n))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Infinity, Repr::Infinity) => Ordering::Equal,
            (Repr::Infinity, _) => Ordering::Greater,
            (_, Repr::Infinity) => Ordering::Less,
            (Repr::Cnf(a), Repr::Cnf(b)) => a
                .len()
                .cmp(&b.len())
                .then_with(|| a.iter().rev().cmp(b.iter().rev())),
        }
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coefficients = match &self.0 {
            Repr::Infinity => return f.write_str("INF"),
            Repr::Cnf(c) if c.is_empty() => return f.write_str("0"),
            Repr::Cnf(c) => c,
        };
        let mut first = true;
        for (power, &c) in coefficients.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match power {
                0 => write!(f, "{c}")?,
                1 => write!(f, "w*{c}")?,
                _ => write!(f, "w^{power}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    /// Parses `INF`, `0`, or a sum of terms `w^k*c`, `w^k`, `w*c`, `w`, `c`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::OrdinalSyntax(s.to_string());
        let s_trim = s.trim();
        if s_trim.eq_ignore_ascii_case("inf") {
            return Ok(Ordinal::INFINITY);
        }
        if s_trim.is_empty() {
            return Err(bad());
        }
        let mut coefficients: Vec<u64> = Vec::new();
        let mut last_power: Option<usize> = None;
        for term in s_trim.split('+') {
            let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            let (power, coefficient) = if let Some(rest) = term.strip_prefix('w') {
                let (power, tail) = match rest.strip_prefix('^') {
                    Some(p) => {
                        let end = p.find('*').unwrap_or(p.len());
                        (p[..end].parse::<usize>().map_err(|_| bad())?, &p[end..])
                    }
                    None => (1, rest),
                };
                let coefficient = match tail {
                    "" => 1,
                    t => t
                        .strip_prefix('*')
                        .and_then(|c| c.parse::<u64>().ok())
                        .ok_or_else(bad)?,
                };
                (power, coefficient)
            } else {
                (0, term.parse::<u64>().map_err(|_| bad())?)
            };
            // Cantor normal form lists strictly decreasing powers.
            if last_power.is_some_and(|p| power >= p) {
                return Err(bad());
            }
            last_power = Some(power);
            if coefficients.len() <= power {
                coefficients.resize(power + 1, 0);
            }
            coefficients[power] = coefficient;
        }
        Ok(Ordinal::make(coefficients))
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Nat(u64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Nat(n) => Ok(Ordinal::nat(n)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}
