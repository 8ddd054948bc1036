//! Families `M ⊂ Fin L` over a truncated ground set `{1..T}` and Borst's
//! ordinal `Ord M`.
//!
//! A family is either an explicit finite list of members or an [`Oracle`]
//! predicate. Oracle families stand for families over an infinite ground set;
//! everything computed from them is a statement about the truncation `{1..T}`
//! and is labeled as such.
//!
//! For an explicit family the ordinal is finite and is computed by the
//! defining recursion: `Ord M = 0` when `M` is empty, otherwise
//! `1 + max_a Ord M^a`. Only labels that occur in some member are visited
//! (every other `M^a` is empty).

mod finset;
mod oracle;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

pub use finset::{Combinations, FinSet, MAX_LABEL};
pub use oracle::Oracle;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use finset::{bit, labels_of};

/// Largest truncation an oracle family may be materialized at (2^T subsets).
pub const MATERIALIZE_LIMIT: u32 = 22;

/// Three-valued answer for statements that may only be decidable at truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TriState {
    Verified,
    Refuted,
    Unknown,
}

/// The ground set `{1..T}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroundSet(u32);

impl GroundSet {
    pub fn new(size: u32) -> Result<Self> {
        if size == 0 || size > MAX_LABEL {
            return Err(Error::BadGround(size));
        }
        Ok(GroundSet(size))
    }

    pub fn size(self) -> u32 {
        self.0
    }

    pub fn mask(self) -> u64 {
        if self.0 == 64 {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }

    pub fn contains(self, set: FinSet) -> bool {
        set.bits() & !self.mask() == 0
    }

    pub fn labels(self) -> impl Iterator<Item = u32> {
        1..=self.0
    }

    fn check(self, set: FinSet) -> Result<()> {
        if self.contains(set) {
            Ok(())
        } else {
            Err(Error::OutsideGround { set: set.to_string(), ground: self.0 })
        }
    }
}

#[derive(Clone, Debug)]
enum Body {
    Explicit(BTreeSet<FinSet>),
    Oracle(Oracle),
}

/// A family of finite nonempty subsets of `{1..T}`.
#[derive(Clone, Debug)]
pub struct SetFamily {
    ground: GroundSet,
    body: Body,
}

/// Result of deciding `Ord F < α + p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrdLessThan {
    pub verdict: TriState,
    /// `Some(T)` when the family is an oracle evaluated on `{1..T}`.
    pub truncation: Option<u32>,
    /// Ord of the (truncated) family; a lower bound for oracle families.
    pub truncated_ord: Ordinal,
}

/// What is known about the ordinal of a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrdBounds {
    pub lower: Ordinal,
    /// Exact value when known; `None` for oracle families.
    pub exact: Option<Ordinal>,
    pub truncation: Option<u32>,
}

/// Memo table for the Ord recursion, keyed by the sorted member bitmasks.
#[derive(Default)]
pub struct OrdMemo {
    table: HashMap<Vec<u64>, u32>,
}

impl OrdMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    fn ord(&mut self, members: Vec<u64>) -> u32 {
        if members.is_empty() {
            return 0;
        }
        if let Some(&v) = self.table.get(&members) {
            return v;
        }
        let active = members.iter().fold(0, |acc, m| acc | m);
        let mut best = 0;
        for label in labels_of(active) {
            let b = bit(label);
            let mut derived: Vec<u64> = members
                .iter()
                .filter(|&&m| m & b != 0 && m != b)
                .map(|&m| m & !b)
                .collect();
            derived.sort_unstable();
            best = best.max(self.ord(derived));
        }
        self.table.insert(members, best + 1);
        best + 1
    }
}

fn sorted_bits<'a>(members: impl Iterator<Item = &'a FinSet>) -> Vec<u64> {
    let mut v: Vec<u64> = members.map(|s| s.bits()).collect();
    v.sort_unstable();
    v
}

impl SetFamily {
    pub fn explicit(ground: u32, members: impl IntoIterator<Item = FinSet>) -> Result<Self> {
        let ground = GroundSet::new(ground)?;
        let mut set = BTreeSet::new();
        for m in members {
            ground.check(m)?;
            set.insert(m);
        }
        Ok(SetFamily { ground, body: Body::Explicit(set) })
    }

    /// Convenience constructor from label lists.
    pub fn from_lists<I, S>(ground: u32, lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = u32>,
    {
        let members = lists.into_iter().map(FinSet::new).collect::<Result<Vec<_>>>()?;
        Self::explicit(ground, members)
    }

    pub fn empty(ground: u32) -> Result<Self> {
        Self::explicit(ground, [])
    }

    /// Every nonempty subset of `{1..ground}` with at most `k` elements.
    pub fn all_up_to(ground: u32, k: usize) -> Result<Self> {
        let g = GroundSet::new(ground)?;
        let members = (1..=k.min(ground as usize))
            .flat_map(|size| Combinations::new(g.mask(), size))
            .filter_map(FinSet::from_bits);
        Self::explicit(ground, members)
    }

    pub fn oracle(ground: u32, oracle: Oracle) -> Result<Self> {
        Ok(SetFamily { ground: GroundSet::new(ground)?, body: Body::Oracle(oracle) })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.body, Body::Explicit(_))
    }

    pub fn oracle_name(&self) -> Option<&str> {
        match &self.body {
            Body::Oracle(o) => Some(o.name()),
            Body::Explicit(_) => None,
        }
    }

    /// Members in canonical order. Errors for oracle families.
    pub fn members(&self) -> Result<impl Iterator<Item = FinSet> + '_> {
        Ok(self.explicit_members()?.iter().copied())
    }

    pub fn len(&self) -> Result<usize> {
        Ok(self.explicit_members()?.len())
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.explicit_members()?.is_empty())
    }

    fn explicit_members(&self) -> Result<&BTreeSet<FinSet>> {
        match &self.body {
            Body::Explicit(m) => Ok(m),
            Body::Oracle(o) => Err(Error::OracleFamily(o.name().to_string())),
        }
    }

    /// Membership test; sets leaving the ground set are never members.
    pub fn contains(&self, set: FinSet) -> bool {
        if !self.ground.contains(set) {
            return false;
        }
        match &self.body {
            Body::Explicit(m) => m.contains(&set),
            Body::Oracle(o) => o.contains(set),
        }
    }

    /// The explicit family of all members inside the ground set.
    pub fn materialize(&self) -> Result<SetFamily> {
        match &self.body {
            Body::Explicit(_) => Ok(self.clone()),
            Body::Oracle(o) => {
                let t = self.ground.size();
                if t > MATERIALIZE_LIMIT {
                    return Err(Error::TruncationTooLarge(t, MATERIALIZE_LIMIT));
                }
                let members = (1u64..1 << t).filter_map(FinSet::from_bits).filter(|&s| o.contains(s));
                SetFamily::explicit(t, members)
            }
        }
    }

    /// `M^σ = {τ nonempty : τ ∪ σ ∈ M, τ ∩ σ = ∅}`.
    pub fn derive(&self, sigma: FinSet) -> Result<SetFamily> {
        self.ground.check(sigma)?;
        let body = match &self.body {
            Body::Explicit(m) => Body::Explicit(
                m.iter()
                    .filter(|s| sigma.is_subset(**s))
                    .filter_map(|s| FinSet::from_bits(s.bits() & !sigma.bits()))
                    .collect(),
            ),
            Body::Oracle(o) => Body::Oracle(o.derive(sigma)),
        };
        Ok(SetFamily { ground: self.ground, body })
    }

    /// Borst's ordinal of an explicit family. Errors for oracle families;
    /// use [`SetFamily::ord_bounds`] there.
    pub fn ord(&self) -> Result<Ordinal> {
        self.ord_with(&mut OrdMemo::new())
    }

    pub fn ord_with(&self, memo: &mut OrdMemo) -> Result<Ordinal> {
        Ok(Ordinal::nat(self.ord_natural(memo)? as u64))
    }

    fn ord_natural(&self, memo: &mut OrdMemo) -> Result<u32> {
        let members = self.explicit_members()?;
        Ok(memo.ord(sorted_bits(members.iter())))
    }

    /// Largest member cardinality (0 when empty).
    pub fn max_cardinality(&self) -> Result<usize> {
        Ok(self.explicit_members()?.iter().map(|s| s.len()).max().unwrap_or(0))
    }

    /// Exact ordinal for explicit families; for oracle families, the ordinal
    /// of the truncation as a lower bound.
    pub fn ord_bounds(&self) -> Result<OrdBounds> {
        match &self.body {
            Body::Explicit(_) => {
                let v = self.ord()?;
                Ok(OrdBounds { lower: v.clone(), exact: Some(v), truncation: None })
            }
            Body::Oracle(_) => Ok(OrdBounds {
                lower: self.materialize()?.ord()?,
                exact: None,
                truncation: Some(self.ground.size()),
            }),
        }
    }

    /// Smallest inclusive superfamily.
    pub fn inclusive_closure(&self) -> Result<SetFamily> {
        let mut out = BTreeSet::new();
        for s in self.explicit_members()? {
            let bits = s.bits();
            // enumerate nonempty submasks
            let mut sub = bits;
            while sub != 0 {
                out.insert(FinSet::from_bits(sub).expect("nonzero"));
                sub = (sub - 1) & bits;
            }
        }
        Ok(SetFamily { ground: self.ground, body: Body::Explicit(out) })
    }

    pub fn is_inclusive(&self) -> Result<bool> {
        Ok(self.inclusivity_gap()?.is_none())
    }

    /// A member together with a missing one-smaller subset, if any.
    fn inclusivity_gap(&self) -> Result<Option<(FinSet, FinSet)>> {
        let members = self.explicit_members()?;
        for &s in members {
            for label in s.iter() {
                if let Some(smaller) = s.without(label) {
                    if !members.contains(&smaller) {
                        return Ok(Some((s, smaller)));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Distinct labels `a_1, …, a_k` with every prefix `{a_1..a_j}` a member;
    /// the lexicographically least such sequence. Oracle families are searched
    /// at their truncation.
    pub fn chain_witness(&self, k: usize) -> Result<Option<Vec<u32>>> {
        let explicit = self.materialize()?;
        if let Some((member, missing)) = explicit.inclusivity_gap()? {
            return Err(Error::NotInclusive(member.to_string(), missing.to_string()));
        }
        let members = explicit.explicit_members()?;
        let mut prefix = Vec::with_capacity(k);
        fn dfs(members: &BTreeSet<FinSet>, ground: GroundSet, k: usize, used: u64, prefix: &mut Vec<u32>) -> bool {
            if prefix.len() == k {
                return true;
            }
            for label in ground.labels() {
                let b = bit(label);
                if used & b != 0 {
                    continue;
                }
                let next = FinSet::from_bits(used | b).expect("nonzero");
                if members.contains(&next) {
                    prefix.push(label);
                    if dfs(members, ground, k, used | b, prefix) {
                        return true;
                    }
                    prefix.pop();
                }
            }
            false
        }
        Ok(dfs(members, self.ground, k, 0, &mut prefix).then_some(prefix))
    }

    /// Image family `{φ(σ) : σ ∈ F}` under a map injective on the ground set.
    /// The new ground set is `{1..max φ}`.
    pub fn map_family(&self, phi: impl Fn(u32) -> u32) -> Result<SetFamily> {
        let members = self.explicit_members()?;
        let mut image = vec![0u32; self.ground.size() as usize + 1];
        let mut seen: HashMap<u32, u32> = HashMap::new();
        for label in self.ground.labels() {
            let y = phi(label);
            if y == 0 || y > MAX_LABEL {
                return Err(Error::LabelOutOfRange(y));
            }
            if let Some(&x) = seen.get(&y) {
                return Err(Error::NotInjective(x, label, y));
            }
            seen.insert(y, label);
            image[label as usize] = y;
        }
        let new_ground = *image.iter().max().expect("ground is nonempty");
        let mapped = members
            .iter()
            .map(|s| FinSet::new(s.iter().map(|a| image[a as usize])))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::explicit(new_ground, mapped)
    }

    /// Decides `Ord F < α + p` by checking `Ord F^σ < α` for every `σ` of size `p`.
    ///
    /// Explicit families give a definitive answer. Oracle families are
    /// evaluated at their truncation: `Refuted` is definitive (the truncation
    /// is a subfamily, so its ordinal is a lower bound) and a truncated
    /// success is reported as `Unknown`.
    pub fn ord_less_than(&self, alpha: &Ordinal, p: usize) -> Result<OrdLessThan> {
        if alpha.is_zero() {
            return Err(Error::ZeroAlpha);
        }
        let explicit = self.materialize()?;
        let members = explicit.explicit_members()?;
        let mut memo = OrdMemo::new();
        // σ using a label outside every member gives M^σ = ∅ and Ord 0 < α.
        let active = members.iter().fold(0u64, |acc, s| acc | s.bits());
        let mut holds = true;
        for sigma_bits in Combinations::new(active, p) {
            let derived = match FinSet::from_bits(sigma_bits) {
                Some(sigma) => explicit.derive(sigma)?,
                None => explicit.clone(),
            };
            if derived.ord_with(&mut memo)? >= *alpha {
                holds = false;
                break;
            }
        }
        let truncated_ord = explicit.ord_with(&mut memo)?;
        let (verdict, truncation) = match (&self.body, holds) {
            (Body::Explicit(_), true) => (TriState::Verified, None),
            (Body::Explicit(_), false) => (TriState::Refuted, None),
            (Body::Oracle(_), true) => (TriState::Unknown, Some(self.ground.size())),
            (Body::Oracle(_), false) => (TriState::Refuted, Some(self.ground.size())),
        };
        Ok(OrdLessThan { verdict, truncation, truncated_ord })
    }
}

impl PartialEq for SetFamily {
    /// Explicit families compare by ground and members; oracle families by name.
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground
            && match (&self.body, &other.body) {
                (Body::Explicit(a), Body::Explicit(b)) => a == b,
                (Body::Oracle(a), Body::Oracle(b)) => a.name() == b.name(),
                _ => false,
            }
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Body::Explicit(m) => {
                f.write_str("{")?;
                for (i, s) in m.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, "}} over {{1..{}}}", self.ground.size())
            }
            Body::Oracle(o) => write!(f, "{} over {{1..{}}}", o.name(), self.ground.size()),
        }
    }
}
