//! m-strategies and certificates for bounds `Ord M ≤ ω·m + n`.
//!
//! A strategy fixes `|σ_0|` and then, after each prefix `(σ_0, …, σ_k)`,
//! the cardinality of `σ_{k+1}`. Every set of the forced cardinality is an
//! admissible move, so the admitted tuples are determined by the rule alone.
//! A strategy starting at `n + 1` is a certificate for `Ord M ≤ ω·m + n` when
//! no play of pairwise disjoint sets has its union in `M`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::approx::ApdProfile;
use crate::error::{Error, Result};
use crate::natmap::NatMap;
use crate::ordinal::Ordinal;
use crate::setfamily::{Combinations, FinSet, OrdMemo, SetFamily, MAX_LABEL};

/// How the next cardinality is chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    /// Round `k` answers `g_k(max ⋃ prefix)`.
    Uniform(Vec<NatMap>),
    /// Explicit answer per prefix over a truncated ground set.
    Table(BTreeMap<Vec<FinSet>, usize>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Strategy {
    m: usize,
    start: usize,
    rule: Rule,
}

/// Caps on certificate enumeration, which is exponential in `T·m`.
#[derive(Clone, Copy, Debug)]
pub struct CertificateLimits {
    pub max_truncation: u32,
    pub max_rounds: usize,
}

impl Default for CertificateLimits {
    fn default() -> Self {
        CertificateLimits { max_truncation: 16, max_rounds: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum CertificateStatus {
    NoCounterexampleAtTruncation,
    Counterexample { play: Vec<FinSet> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub status: CertificateStatus,
    /// Complete plays whose union was tested.
    pub plays_examined: u64,
    /// Prefixes abandoned because the forced cardinality exceeded the unused ground.
    pub vacuous_plays: u64,
    /// Set when no complete play exists at this truncation: nothing was verified.
    pub all_vacuous: bool,
    pub truncation: u32,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        matches!(self.status, CertificateStatus::NoCounterexampleAtTruncation)
    }
}

fn union_bits(sets: &[FinSet]) -> u64 {
    sets.iter().fold(0, |acc, s| acc | s.bits())
}

fn render_prefix(prefix: &[FinSet]) -> String {
    let parts: Vec<String> = prefix.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

impl Strategy {
    /// A strategy answering round `k` with `rules[k-1](max ⋃ prefix)`.
    pub fn uniform(start: usize, rules: Vec<NatMap>) -> Result<Self> {
        if start == 0 {
            return Err(Error::BadStrategy("start must be positive".into()));
        }
        Ok(Strategy { m: rules.len(), start, rule: Rule::Uniform(rules) })
    }

    /// The unique 0-strategy starting at `start`.
    pub fn zero(start: usize) -> Result<Self> {
        Self::uniform(start, Vec::new())
    }

    /// A decision-table strategy. Every entry must be reachable: its sets are
    /// pairwise disjoint and their sizes follow the table itself.
    pub fn table(m: usize, start: usize, entries: BTreeMap<Vec<FinSet>, usize>) -> Result<Self> {
        if start == 0 {
            return Err(Error::BadStrategy("start must be positive".into()));
        }
        for (prefix, &next) in &entries {
            let where_ = render_prefix(prefix);
            if prefix.is_empty() || prefix.len() > m {
                return Err(Error::BadStrategy(format!("prefix {where_} has length outside 1..={m}")));
            }
            if next == 0 {
                return Err(Error::BadStrategy(format!("prefix {where_} forces an empty set")));
            }
            if union_bits(prefix).count_ones() as usize != prefix.iter().map(|s| s.len()).sum::<usize>() {
                return Err(Error::BadStrategy(format!("prefix {where_} is not pairwise disjoint")));
            }
            if prefix[0].len() != start {
                return Err(Error::BadStrategy(format!("prefix {where_} does not start with a {start}-set")));
            }
            for j in 1..prefix.len() {
                if entries.get(&prefix[..j]) != Some(&prefix[j].len()) {
                    return Err(Error::BadStrategy(format!("prefix {where_} is not reachable")));
                }
            }
        }
        Ok(Strategy { m, start, rule: Rule::Table(entries) })
    }

    pub fn rounds(&self) -> usize {
        self.m
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    /// The forced cardinality of the set following `prefix` (`1 ≤ len ≤ m`).
    pub fn next_cardinality(&self, prefix: &[FinSet]) -> Result<usize> {
        if prefix.is_empty() || prefix.len() > self.m {
            return Err(Error::StrategyNotTotal(render_prefix(prefix)));
        }
        match &self.rule {
            Rule::Uniform(rules) => {
                let top = FinSet::from_bits(union_bits(prefix)).expect("nonempty prefix").max();
                Ok(rules[prefix.len() - 1].eval(top)? as usize)
            }
            Rule::Table(entries) => entries
                .get(prefix)
                .copied()
                .ok_or_else(|| Error::StrategyNotTotal(render_prefix(prefix))),
        }
    }

    /// Whether `play` is admitted: right length, right cardinalities.
    pub fn admits(&self, play: &[FinSet]) -> bool {
        if play.len() != self.m + 1 || play[0].len() != self.start {
            return false;
        }
        (1..play.len()).all(|k| self.next_cardinality(&play[..k]).is_ok_and(|c| c == play[k].len()))
    }

    /// Enumerates every play of pairwise disjoint subsets of `{1..t}` that
    /// follows the strategy, in lexicographic order, and stops at the first
    /// play whose union lies in `family`.
    pub fn check_certificate(&self, family: &SetFamily, t: u32, limits: CertificateLimits) -> Result<CertificateReport> {
        if t == 0 || t > MAX_LABEL {
            return Err(Error::BadGround(t));
        }
        if t > limits.max_truncation || self.m > limits.max_rounds {
            return Err(Error::CapExceeded(format!(
                "T={t}, m={} against T<={}, m<={}",
                self.m, limits.max_truncation, limits.max_rounds
            )));
        }
        let ground = if t == 64 { u64::MAX } else { (1u64 << t) - 1 };
        let mut walk = Walk { strategy: self, family, ground, plays: 0, vacuous: 0 };
        let mut prefix = Vec::with_capacity(self.m + 1);
        let found = walk.visit(&mut prefix, 0)?;
        let (plays, vacuous) = (walk.plays, walk.vacuous);
        Ok(CertificateReport {
            status: match found {
                Some(play) => CertificateStatus::Counterexample { play },
                None => CertificateStatus::NoCounterexampleAtTruncation,
            },
            plays_examined: plays,
            vacuous_plays: vacuous,
            all_vacuous: plays == 0,
            truncation: t,
        })
    }
}

struct Walk<'a> {
    strategy: &'a Strategy,
    family: &'a SetFamily,
    ground: u64,
    plays: u64,
    vacuous: u64,
}

impl Walk<'_> {
    fn visit(&mut self, prefix: &mut Vec<FinSet>, used: u64) -> Result<Option<Vec<FinSet>>> {
        if prefix.len() == self.strategy.m + 1 {
            self.plays += 1;
            let union = FinSet::from_bits(used).expect("plays are nonempty");
            return Ok(self.family.contains(union).then(|| prefix.clone()));
        }
        let size = if prefix.is_empty() {
            self.strategy.start
        } else {
            self.strategy.next_cardinality(prefix)?
        };
        let available = self.ground & !used;
        if size > available.count_ones() as usize {
            self.vacuous += 1;
            return Ok(None);
        }
        for bits in Combinations::new(available, size) {
            prefix.push(FinSet::from_bits(bits).expect("size is positive"));
            let found = self.visit(prefix, used | bits)?;
            prefix.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// The strategy `|σ_0| = α_0`, `|σ_k| = α_k(max ⋃_{i<k} σ_i)` built from a profile.
pub fn strategy_from_profile(profile: &ApdProfile) -> Result<Strategy> {
    profile.validate()?;
    Strategy::uniform(profile.base() as usize, profile.maps().to_vec())
}

/// Builds an m-strategy starting at `n + 1` certifying `Ord F ≤ ω·m + n` for
/// an explicit family, or `None` when the bound fails.
///
/// For each first move `σ_0` the strategy continues with a certificate for
/// `F^{σ_0}` at level `m - 1`, starting at `n_1 + 1` where `n_1` is the least
/// natural with `Ord F^{σ_0} ≤ ω·(m-1) + n_1`.
pub fn strategy_from_family(family: &SetFamily, m: usize, n: usize) -> Result<Option<Strategy>> {
    let mut memo = OrdMemo::new();
    let ord = family.ord_with(&mut memo)?;
    if ord > Ordinal::omega_times_plus(m as u64, n as u64) {
        return Ok(None);
    }
    let mut entries = BTreeMap::new();
    let ground = family.ground().mask();
    let mut prefix = Vec::new();
    fill_table(family, m, n, ground, 0, &mut prefix, &mut entries, &mut memo)?;
    Strategy::table(m, n + 1, entries).map(Some)
}

#[allow(clippy::too_many_arguments)]
fn fill_table(
    family: &SetFamily,
    m: usize,
    n: usize,
    ground: u64,
    used: u64,
    prefix: &mut Vec<FinSet>,
    entries: &mut BTreeMap<Vec<FinSet>, usize>,
    memo: &mut OrdMemo,
) -> Result<()> {
    if m == 0 {
        return Ok(());
    }
    for bits in Combinations::new(ground & !used, n + 1) {
        let first = FinSet::from_bits(bits).expect("n + 1 > 0");
        let derived = family.derive(first)?;
        let next_n = if m == 1 {
            derived.ord_with(memo)?.as_natural().expect("explicit families have finite Ord") as usize
        } else {
            0
        };
        prefix.push(first);
        entries.insert(prefix.clone(), next_n + 1);
        fill_table(&derived, m - 1, next_n, ground, used | bits, prefix, entries, memo)?;
        prefix.pop();
    }
    Ok(())
}
