//! Integral APD profiles at truncation: extracting `f` for profiles
//! `(n+1, f)` from a truncated family, and checking a profile against the
//! decomposition solver on sampled scale tuples.

use serde::{Deserialize, Serialize};

use super::{family_m, ApproxParams, Decomposition, FamilyReport, Outcome, ScaleSlots, Solved, Solver};
use crate::error::{Error, Result};
use crate::metric::{Dist, MetricSpace};
use crate::natmap::NatMap;
use crate::setfamily::{Combinations, FinSet, OrdMemo, SetFamily};

/// `(α_0, α_1, …, α_m)`: a constant `α_0 ≥ 1` and non-decreasing maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApdProfile {
    base: u32,
    maps: Vec<NatMap>,
}

/// Horizon over which affine entries are checked for positivity.
const AFFINE_HORIZON: u32 = 64;

impl ApdProfile {
    pub fn new(base: u32, maps: Vec<NatMap>) -> Result<Self> {
        if base == 0 {
            return Err(Error::BadProfile("the constant entry must be at least 1".into()));
        }
        Ok(ApdProfile { base, maps })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn maps(&self) -> &[NatMap] {
        &self.maps
    }

    /// Number of entries after the constant one.
    pub fn rounds(&self) -> usize {
        self.maps.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.base == 0 {
            return Err(Error::BadProfile("the constant entry must be at least 1".into()));
        }
        self.maps.iter().try_for_each(|m| m.validate(AFFINE_HORIZON))
    }

    /// The same profile with every map made total on `1..=t` (see [`NatMap::clamped_to`]).
    pub fn clamped_to(&self, t: u32) -> Result<Self> {
        let maps = self.maps.iter().map(|m| m.clamped_to(t)).collect::<Result<_>>()?;
        Ok(ApdProfile { base: self.base, maps })
    }

    /// Slot scales for a non-decreasing tuple `(r_0, …, r_m)`: `α_0` slots
    /// at `r_0`, then `α_i(r_{i-1})` slots at `r_i`.
    pub fn slots_for(&self, tuple: &[u32]) -> Result<Vec<u32>> {
        if tuple.len() != self.maps.len() + 1 {
            return Err(Error::BadProfile(format!(
                "tuple of length {} for a profile with {} entries",
                tuple.len(),
                self.maps.len() + 1
            )));
        }
        if tuple.windows(2).any(|w| w[0] > w[1]) || tuple[0] == 0 {
            return Err(Error::BadProfile(format!("tuple {tuple:?} is not a non-decreasing tuple of positive scales")));
        }
        let mut slots = vec![tuple[0]; self.base as usize];
        for (i, map) in self.maps.iter().enumerate() {
            let count = map.eval(tuple[i])?;
            slots.extend(std::iter::repeat_n(tuple[i + 1], count as usize));
        }
        Ok(slots)
    }
}

/// `f(k) = Ord M^{{k..k+n}} + 1` for every `k` whose block lies in the window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileTable {
    pub n: u32,
    pub f: NatMap,
    /// Consecutive domain points `(k, k')` with `f(k) > f(k')`.
    pub violations: Vec<(u32, u32)>,
    pub family: FamilyReport,
}

impl ProfileTable {
    pub fn profile(&self) -> ApdProfile {
        ApdProfile { base: self.n + 1, maps: vec![self.f.clone()] }
    }

    /// The scale set whose absence from the family yields a decomposition
    /// for `(r_0, r_1)`: `{r_0..r_0+n} ∪ {m..m+f(r_0)-1}` with
    /// `m = max(r_1, r_0+n+1)`.
    pub fn proof_scales(&self, r0: u32, r1: u32) -> Result<Vec<u32>> {
        let f0 = self.f.eval(r0)?;
        let m = r1.max(r0 + self.n + 1);
        Ok((r0..=r0 + self.n).chain(m..m + f0).collect())
    }
}

pub fn derive_profile_f(space: &MetricSpace, n: u32, params: &ApproxParams) -> Result<Solved<ProfileTable>> {
    let family = match family_m(space, params)? {
        Solved::Decided { value } => value,
        Solved::Unknown { reason } => return Ok(Solved::Unknown { reason }),
    };
    let table = profile_table_from_family(family, n)?;
    Ok(Solved::Decided { value: table })
}

fn profile_table_from_family(family: FamilyReport, n: u32) -> Result<ProfileTable> {
    let window = &family.params.scales;
    let mut memo = OrdMemo::new();
    let mut values = Vec::new();
    for &k in window {
        if !(k..=k + n).all(|s| window.binary_search(&s).is_ok()) {
            continue;
        }
        let block = FinSet::range(k, k + n)?;
        let ord = family.family.derive(block)?.ord_with(&mut memo)?;
        let v = ord.as_natural().expect("explicit families have finite Ord") as u32 + 1;
        values.push((k, v));
    }
    if values.is_empty() {
        return Err(Error::BadWindow(format!("no block of {} consecutive scales in the window", n + 1)));
    }
    let violations = values.windows(2).filter(|w| w[0].1 > w[1].1).map(|w| (w[0].0, w[1].0)).collect();
    Ok(ProfileTable { n, f: NatMap::lookup(values), violations, family })
}

/// All non-decreasing `(m+1)`-tuples from the window at which every map the
/// profile needs is defined.
pub fn in_window_tuples(profile: &ApdProfile, window: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut tuple = Vec::with_capacity(profile.rounds() + 1);
    fn extend(profile: &ApdProfile, window: &[u32], tuple: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if tuple.len() == profile.rounds() + 1 {
            out.push(tuple.clone());
            return;
        }
        for &r in window {
            if let Some(&last) = tuple.last() {
                if r < last || !profile.maps[tuple.len() - 1].defined_at(last) {
                    continue;
                }
            }
            tuple.push(r);
            extend(profile, window, tuple, out);
            tuple.pop();
        }
    }
    extend(profile, window, &mut tuple, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TupleResult {
    pub tuple: Vec<u32>,
    pub slots: Vec<u32>,
    pub decomposition: Decomposition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileCheckReport {
    /// Every sampled tuple has a verified decomposition. A sampled check, not a proof.
    pub pass: bool,
    pub any_unknown: bool,
    pub failed: Vec<Vec<u32>>,
    pub tuples: Vec<TupleResult>,
}

/// Runs the decomposition solver on the slots each tuple prescribes.
pub fn profile_check(
    space: &MetricSpace,
    profile: &ApdProfile,
    tuples: &[Vec<u32>],
    bound: Dist,
    node_budget: u64,
) -> Result<ProfileCheckReport> {
    profile.validate()?;
    let solver = Solver::new(space, bound)?;
    let mut results = Vec::with_capacity(tuples.len());
    for tuple in tuples {
        let slots = profile.slots_for(tuple)?;
        let decomposition = solver.solve(&ScaleSlots::from_ints(slots.iter().copied())?, node_budget)?;
        results.push(TupleResult { tuple: tuple.clone(), slots, decomposition });
    }
    let failed = results
        .iter()
        .filter(|t| !t.decomposition.outcome.is_feasible())
        .map(|t| t.tuple.clone())
        .collect::<Vec<_>>();
    let any_unknown = results.iter().any(|t| t.decomposition.outcome == Outcome::Unknown);
    Ok(ProfileCheckReport { pass: failed.is_empty(), any_unknown, failed, tuples: results })
}

/// Sets `σ` of size `n+1` in the window (with `f` defined at `max σ`) for
/// which `Ord M^σ < f(max σ)` fails.
pub fn ord_bound_violations(family: &SetFamily, window: &[u32], n: u32, f: &NatMap) -> Result<Vec<FinSet>> {
    let mask = window.iter().fold(0u64, |acc, &s| acc | 1u64 << (s - 1));
    let mut memo = OrdMemo::new();
    let mut bad = Vec::new();
    for bits in Combinations::new(mask, n as usize + 1) {
        let sigma = FinSet::from_bits(bits).ok_or(Error::EmptySet)?;
        if !f.defined_at(sigma.max()) {
            continue;
        }
        let ord = family.derive(sigma)?.ord_with(&mut memo)?;
        if ord.as_natural().expect("finite") >= f.eval(sigma.max())? as u64 {
            bad.push(sigma);
        }
    }
    Ok(bad)
}
