use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use super::FinSet;
use crate::error::{Error, Result};

type Predicate = dyn Fn(FinSet) -> bool + Send + Sync;

/// A membership predicate standing in for a family over an infinite ground set.
#[derive(Clone)]
pub struct Oracle {
    name: String,
    pred: Arc<Predicate>,
}

impl Oracle {
    pub fn new(name: impl Into<String>, pred: impl Fn(FinSet) -> bool + Send + Sync + 'static) -> Self {
        Oracle { name: name.into(), pred: Arc::new(pred) }
    }

    /// `{σ : |σ| ≤ min σ}`.
    pub fn card_le_min() -> Self {
        Oracle::new("card_le_min", |s: FinSet| s.len() as u32 <= s.min())
    }

    /// `{σ : |σ| ≤ k}`.
    pub fn card_le_const(k: usize) -> Self {
        Oracle::new(format!("card_le_const(k={k})"), move |s: FinSet| s.len() <= k)
    }

    /// Looks up a builtin by the name used in family documents.
    pub fn builtin(name: &str, params: &Value) -> Result<Self> {
        match name {
            "card_le_min" => Ok(Oracle::card_le_min()),
            "card_le_const_k" | "card_le_const" => {
                let k = params
                    .get("k")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::UnknownOracle(format!("{name} needs integer param \"k\"")))?;
                Ok(Oracle::card_le_const(k as usize))
            }
            other => Err(Error::UnknownOracle(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, set: FinSet) -> bool {
        (self.pred)(set)
    }

    /// The oracle of `M^σ`.
    pub(crate) fn derive(&self, sigma: FinSet) -> Oracle {
        let base = Arc::clone(&self.pred);
        Oracle {
            name: format!("{}^{}", self.name, sigma),
            pred: Arc::new(move |tau: FinSet| tau.is_disjoint(sigma) && base(tau.union(sigma))),
        }
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Oracle").field(&self.name).finish()
    }
}
