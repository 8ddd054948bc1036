//! Maps from positive naturals to positive naturals, used both as APD-profile
//! entries and as per-round strategy rules.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum NatMap {
    /// `x ↦ a·x + b`.
    Affine { a: u32, b: u32 },
    /// Finite lookup table; undefined outside its keys.
    Lookup {
        #[serde(deserialize_with = "numeric_keys")]
        values: BTreeMap<u32, u32>,
    },
}

// Tagged enums buffer object keys as strings, so parse them explicitly.
fn numeric_keys<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<u32, u32>, D::Error> {
    BTreeMap::<String, u32>::deserialize(d)?
        .into_iter()
        .map(|(k, v)| k.parse().map(|k| (k, v)).map_err(serde::de::Error::custom))
        .collect()
}

impl NatMap {
    pub fn constant(c: u32) -> Self {
        NatMap::Affine { a: 0, b: c }
    }

    pub fn identity() -> Self {
        NatMap::Affine { a: 1, b: 0 }
    }

    pub fn lookup(values: impl IntoIterator<Item = (u32, u32)>) -> Self {
        NatMap::Lookup { values: values.into_iter().collect() }
    }

    pub fn eval(&self, x: u32) -> Result<u32> {
        let v = match self {
            NatMap::Affine { a, b } => a
                .checked_mul(x)
                .and_then(|ax| ax.checked_add(*b))
                .ok_or(Error::MapUndefined(x))?,
            NatMap::Lookup { values } => *values.get(&x).ok_or(Error::MapUndefined(x))?,
        };
        if v == 0 {
            return Err(Error::NonPositive(x));
        }
        Ok(v)
    }

    /// Whether the map is defined at `x`.
    pub fn defined_at(&self, x: u32) -> bool {
        match self {
            NatMap::Affine { .. } => true,
            NatMap::Lookup { values } => values.contains_key(&x),
        }
    }

    /// Checks positivity everywhere and monotonicity along the domain
    /// (along `1..=horizon` for affine maps, which are monotone anyway).
    pub fn validate(&self, horizon: u32) -> Result<()> {
        let points: Vec<u32> = match self {
            NatMap::Affine { .. } => (1..=horizon.max(1)).collect(),
            NatMap::Lookup { values } => values.keys().copied().collect(),
        };
        let mut prev: Option<(u32, u32)> = None;
        for x in points {
            let v = self.eval(x)?;
            if let Some((px, pv)) = prev {
                if pv > v {
                    return Err(Error::NotMonotone(px, pv, x, v));
                }
            }
            prev = Some((x, v));
        }
        Ok(())
    }

    /// A lookup table total on `1..=t`: values below the domain take the
    /// first defined value, values above take the last.
    pub fn clamped_to(&self, t: u32) -> Result<NatMap> {
        match self {
            NatMap::Affine { .. } => Ok(NatMap::Lookup {
                values: (1..=t).map(|x| Ok((x, self.eval(x)?))).collect::<Result<_>>()?,
            }),
            NatMap::Lookup { values } => {
                let (Some((&lo, &lo_v)), Some((&hi, &hi_v))) = (values.first_key_value(), values.last_key_value()) else {
                    return Err(Error::MapUndefined(1));
                };
                let mut out = BTreeMap::new();
                let mut last = lo_v;
                for x in 1..=t {
                    let v = if x < lo {
                        lo_v
                    } else if x > hi {
                        hi_v
                    } else {
                        values.get(&x).copied().unwrap_or(last)
                    };
                    last = v;
                    out.insert(x, v);
                }
                Ok(NatMap::Lookup { values: out })
            }
        }
    }
}

impl fmt::Display for NatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatMap::Affine { a: 0, b } => write!(f, "{b}"),
            NatMap::Affine { a, b: 0 } => write!(f, "{a}x"),
            NatMap::Affine { a, b } => write!(f, "{a}x+{b}"),
            NatMap::Lookup { values } => {
                f.write_str("[")?;
                for (i, (k, v)) in values.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{k}:{v}")?;
                }
                f.write_str("]")
            }
        }
    }
}
