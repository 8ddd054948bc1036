//! Truncated families of scale sets and the solver behind them.
//!
//! On a finite space every family of subsets is uniformly bounded, so the
//! untruncated families are empty. Everything here is parameterized by an
//! explicit mesh bound `B` and a finite window of integer scales:
//!
//! * `σ ∈ M_B(X)` iff no cover `(X_i)_{i∈σ}` has every scale-i-component of
//!   `X_i` of diameter `≤ B`;
//! * `σ ∈ A_B(X)` iff no cover has every `X_i` a union of an `i`-disjoint
//!   family of mesh `≤ B`.
//!
//! The two coincide at fixed `B`: the pieces of an `i`-disjoint family are
//! unions of scale-i-components, and the components themselves are
//! `i`-disjoint. [`family_m`] uses the decomposition solver; [`family_a`]
//! searches partitions literally and only scales to tiny spaces.

mod literal;
mod profile;
mod solver;

use std::collections::BTreeMap;

use serde::Serialize;

pub use literal::{admits_disjoint_cover, literal_cover_exists, LITERAL_POINT_LIMIT};
pub use profile::{
    derive_profile_f, in_window_tuples, ord_bound_violations, profile_check, ApdProfile, ProfileCheckReport,
    ProfileTable, TupleResult,
};
pub use solver::{
    decompose, ColoringWitness, Decomposition, Outcome, ScaleSlots, Solver, SolverStats, DEFAULT_NODE_BUDGET,
};

use crate::error::{Error, Result};
use crate::metric::{Dist, MetricSpace};
use crate::ordinal::Ordinal;
use crate::setfamily::{Combinations, FinSet, SetFamily, MAX_LABEL};

/// Truncation parameters: the scale window, the mesh bound, the solver budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxParams {
    pub scales: Vec<u32>,
    pub bound: Dist,
    pub node_budget: u64,
}

impl ApproxParams {
    pub fn new(scales: impl IntoIterator<Item = u32>, bound: Dist) -> Result<Self> {
        let mut scales: Vec<u32> = scales.into_iter().collect();
        scales.sort_unstable();
        scales.dedup();
        if scales.is_empty() {
            return Err(Error::BadWindow("empty scale window".into()));
        }
        if let Some(&s) = scales.iter().find(|&&s| s == 0 || s > MAX_LABEL) {
            return Err(Error::BadWindow(format!("scale {s} outside 1..={MAX_LABEL}")));
        }
        if bound.is_negative() {
            return Err(Error::BadWindow(format!("negative bound {bound}")));
        }
        Ok(ApproxParams { scales, bound, node_budget: DEFAULT_NODE_BUDGET })
    }

    pub fn with_budget(mut self, node_budget: u64) -> Self {
        self.node_budget = node_budget;
        self
    }

    /// Ground size of the families built on this window.
    pub fn truncation(&self) -> u32 {
        *self.scales.last().expect("window is nonempty")
    }

    pub fn window_mask(&self) -> u64 {
        self.scales.iter().fold(0, |acc, &s| acc | 1u64 << (s - 1))
    }
}

/// A value, or the reason it could not be decided within budget.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Solved<T> {
    Decided { value: T },
    Unknown { reason: String },
}

impl<T> Solved<T> {
    pub fn decided(self) -> Option<T> {
        match self {
            Solved::Decided { value } => Some(value),
            Solved::Unknown { .. } => None,
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Solved::Unknown { .. })
    }
}

/// How membership of a scale set was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecidedBy {
    Solver,
    /// A feasible proper subset.
    Subset,
    /// A pointwise comparison with an already decided set of equal size.
    Dominance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetDecision {
    pub set: FinSet,
    pub feasible: bool,
    pub by: DecidedBy,
}

/// A truncated family together with how it was computed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    #[serde(rename = "members", serialize_with = "serialize_members")]
    pub family: SetFamily,
    pub params: ApproxParams,
    pub decisions: Vec<SetDecision>,
    pub solver_calls: u64,
    pub nodes: u64,
}

fn serialize_members<S: serde::Serializer>(family: &SetFamily, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(family.members().map_err(serde::ser::Error::custom)?)
}

impl FamilyReport {
    pub fn members(&self) -> Vec<FinSet> {
        self.family.members().expect("explicit").collect()
    }
}

fn pointwise_le(a: FinSet, b: FinSet) -> bool {
    a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

/// `M_B(X)` over the scale window: the scale sets no bounded decomposition exists for.
///
/// Sets are settled by increasing size. A set with a feasible proper subset is
/// feasible (the extra slots stay empty); shrinking scales pointwise keeps
/// feasibility, so a set dominated by a feasible set is feasible and a set
/// dominating an infeasible one is infeasible. Only the rest reach the solver.
/// Any budget exhaustion makes the whole family unknown.
pub fn family_m(space: &MetricSpace, params: &ApproxParams) -> Result<Solved<FamilyReport>> {
    let solver = Solver::new(space, params.bound)?;
    let window = params.window_mask();
    let mut feasible: BTreeMap<FinSet, bool> = BTreeMap::new();
    let mut decisions = Vec::new();
    let (mut calls, mut nodes) = (0u64, 0u64);
    for size in 1..=params.scales.len() {
        let mut same_size: Vec<(FinSet, bool)> = Vec::new();
        for bits in Combinations::new(window, size) {
            let set = FinSet::from_bits(bits).expect("size >= 1");
            let (value, by) = if set.iter().any(|a| set.without(a).is_some_and(|s| feasible[&s])) {
                (true, DecidedBy::Subset)
            } else if let Some(&(_, v)) = same_size
                .iter()
                .find(|&&(other, v)| (v && pointwise_le(set, other)) || (!v && pointwise_le(other, set)))
            {
                (v, DecidedBy::Dominance)
            } else {
                let slots = ScaleSlots::from_ints(set.iter())?;
                let d = solver.solve(&slots, params.node_budget)?;
                calls += 1;
                nodes += d.stats.nodes;
                match d.outcome {
                    Outcome::Feasible { .. } => (true, DecidedBy::Solver),
                    Outcome::Infeasible => (false, DecidedBy::Solver),
                    Outcome::Unknown => {
                        return Ok(Solved::Unknown {
                            reason: format!("solver budget of {} nodes exhausted on {set}", params.node_budget),
                        })
                    }
                }
            };
            feasible.insert(set, value);
            same_size.push((set, value));
            decisions.push(SetDecision { set, feasible: value, by });
        }
        if same_size.iter().all(|&(_, v)| v) {
            // every larger set has a feasible subset
            for bigger in size + 1..=params.scales.len() {
                for bits in Combinations::new(window, bigger) {
                    let set = FinSet::from_bits(bits).expect("size >= 1");
                    feasible.insert(set, true);
                    decisions.push(SetDecision { set, feasible: true, by: DecidedBy::Subset });
                }
            }
            break;
        }
    }
    let members = feasible.iter().filter(|(_, &f)| !f).map(|(&s, _)| s);
    let family = SetFamily::explicit(params.truncation(), members)?;
    debug_assert!(family.is_inclusive()?);
    Ok(Solved::Decided {
        value: FamilyReport { family, params: params.clone(), decisions, solver_calls: calls, nodes },
    })
}

/// `A_B(X)` over the scale window by literal partition search, every set
/// decided on its own. Limited to [`LITERAL_POINT_LIMIT`] points.
pub fn family_a(space: &MetricSpace, params: &ApproxParams) -> Result<SetFamily> {
    let window = params.window_mask();
    let mut members = Vec::new();
    for size in 1..=params.scales.len() {
        for bits in Combinations::new(window, size) {
            let set = FinSet::from_bits(bits).expect("size >= 1");
            let scales: Vec<Dist> = set.iter().map(|s| Dist::int(s as i64)).collect();
            if !literal_cover_exists(space, &scales, params.bound)? {
                members.push(set);
            }
        }
    }
    SetFamily::explicit(params.truncation(), members)
}

/// Truncated transfinite asymptotic dimension: `Ord M_B(X)` over the window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrasdimReport {
    pub ord: Ordinal,
    /// Maximal members of the family.
    pub maximal: Vec<FinSet>,
    pub family: FamilyReport,
}

pub fn trasdim_ord(space: &MetricSpace, params: &ApproxParams) -> Result<Solved<TrasdimReport>> {
    Ok(match family_m(space, params)? {
        Solved::Decided { value } => {
            let ord = value.family.ord()?;
            let members = value.members();
            let maximal = members
                .iter()
                .copied()
                .filter(|&s| !members.iter().any(|&t| t != s && s.is_subset(t)))
                .collect();
            Solved::Decided { value: TrasdimReport { ord, maximal, family: value } }
        }
        Solved::Unknown { reason } => Solved::Unknown { reason },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Norm;

    fn params(scales: impl IntoIterator<Item = u32>, bound: i64) -> ApproxParams {
        ApproxParams::new(scales, Dist::int(bound)).unwrap()
    }

    fn set(labels: &[u32]) -> FinSet {
        FinSet::new(labels.iter().copied()).unwrap()
    }

    #[test]
    fn path_family_sub_facts() {
        let x = MetricSpace::path(29).unwrap();
        let r = family_m(&x, &params(2..=5, 5)).unwrap().decided().unwrap();
        assert!(r.family.contains(set(&[4])));
        assert!(!r.family.contains(set(&[2, 3])));
        assert!(r.family.is_inclusive().unwrap());
    }

    #[test]
    fn large_bound_gives_empty_family() {
        let x = MetricSpace::grid(3, 2, Norm::LInf).unwrap();
        let r = family_m(&x, &params(1..=4, 3)).unwrap().decided().unwrap();
        assert!(r.family.is_empty().unwrap());
        assert_eq!(r.family.ord().unwrap(), Ordinal::zero());
        let small = MetricSpace::grid(2, 2, Norm::LInf).unwrap();
        let a = family_a(&small, &params(1..=3, 2)).unwrap();
        assert!(a.is_empty().unwrap());
    }

    #[test]
    fn single_point_has_ord_zero() {
        let x = MetricSpace::path(0).unwrap();
        let r = trasdim_ord(&x, &params([2, 3], 0)).unwrap().decided().unwrap();
        assert_eq!(r.ord, Ordinal::zero());
    }

    #[test]
    fn unknown_poisons_the_family() {
        let x = MetricSpace::grid(6, 2, Norm::LInf).unwrap();
        let p = params([2, 3], 2).with_budget(5);
        assert!(family_m(&x, &p).unwrap().is_unknown());
    }

    #[test]
    fn window_validation() {
        assert!(ApproxParams::new([], Dist::int(1)).is_err());
        assert!(ApproxParams::new([0, 2], Dist::int(1)).is_err());
        assert!(ApproxParams::new([65], Dist::int(1)).is_err());
        assert!(ApproxParams::new([2], Dist::int(-1)).is_err());
        assert_eq!(ApproxParams::new([5, 2, 5], Dist::int(1)).unwrap().scales, vec![2, 5]);
    }
}
