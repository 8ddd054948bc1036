//! Exact search for a point-to-slot assignment in which every slot's class
//! has all scale-r-components of diameter at most `B`.
//!
//! Distances are replaced by their rank among the distinct finite values of
//! the space, so every comparison is an exact integer comparison. Points are
//! assigned in maximum-cardinality-search order on the proximity graph of the
//! largest slot scale; each slot keeps a union-find over its class with an
//! undo log, and a branch dies as soon as a merged component exceeds `B`.
//! Slots sharing a scale are interchangeable, so a slot is only opened after
//! the previous slot of the same scale is in use.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{Dist, MetricSpace};

/// Scales of the slots of a decomposition; repetitions allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaleSlots(Vec<Dist>);

impl ScaleSlots {
    pub fn new(scales: Vec<Dist>) -> Result<Self> {
        if scales.iter().any(|s| !s.is_positive()) {
            return Err(Error::NonPositiveScale);
        }
        Ok(ScaleSlots(scales))
    }

    pub fn from_ints(scales: impl IntoIterator<Item = u32>) -> Result<Self> {
        Self::new(scales.into_iter().map(|s| Dist::int(s as i64)).collect())
    }

    pub fn scales(&self) -> &[Dist] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Slot index per point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringWitness {
    pub assignment: Vec<usize>,
}

impl ColoringWitness {
    /// Points of each slot, ascending.
    pub fn classes(&self, slots: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); slots];
        for (p, &s) in self.assignment.iter().enumerate() {
            out[s].push(p);
        }
        out
    }

    /// Independent re-check of every class with [`MetricSpace::is_zero_dim`].
    pub fn verify(&self, space: &MetricSpace, slots: &ScaleSlots, bound: Dist) -> Result<bool> {
        if self.assignment.len() != space.len() || self.assignment.iter().any(|&s| s >= slots.len()) {
            return Ok(false);
        }
        for (class, &r) in self.classes(slots.len()).iter().zip(slots.scales()) {
            if !space.is_zero_dim(class, r, bound)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Outcome {
    Feasible { witness: ColoringWitness },
    /// The search space was exhausted.
    Infeasible,
    /// The node budget ran out first.
    Unknown,
}

impl Outcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Outcome::Feasible { .. })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    pub nodes: u64,
    pub backtracks: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub outcome: Outcome,
    pub stats: SolverStats,
}

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// A space and bound compiled to distance ranks, reusable across slot lists.
pub struct Solver<'a> {
    space: &'a MetricSpace,
    bound: Dist,
    n: usize,
    values: Vec<Dist>,
    rank: Vec<u32>,
    max_diam_rank: u32,
}

const INF_RANK: u32 = u32::MAX;

impl<'a> Solver<'a> {
    pub fn new(space: &'a MetricSpace, bound: Dist) -> Result<Self> {
        if bound.is_negative() {
            return Err(Error::BadMetric(format!("negative mesh bound {bound}")));
        }
        let n = space.len();
        let mut values: Vec<Dist> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| space.d(i, j))
            .filter(|d| d.is_finite())
            .collect();
        values.sort_unstable();
        values.dedup();
        let rank = (0..n * n)
            .map(|k| {
                let d = space.d(k / n, k % n);
                if d.is_finite() {
                    values.binary_search(&d).expect("value collected") as u32
                } else {
                    INF_RANK
                }
            })
            .collect();
        let max_diam_rank = if bound.is_finite() {
            // count of values <= bound, minus one; 0 is always present
            (values.partition_point(|v| *v <= bound) as u32).saturating_sub(1)
        } else {
            INF_RANK
        };
        Ok(Solver { space, bound, n, values, rank, max_diam_rank })
    }

    /// Ranks strictly below this are distances `< r`.
    fn edge_limit(&self, r: Dist) -> u32 {
        self.values.partition_point(|v| *v < r) as u32
    }

    pub fn solve(&self, slots: &ScaleSlots, node_budget: u64) -> Result<Decomposition> {
        let n = self.n;
        let k = slots.len();
        if n == 0 {
            let witness = ColoringWitness { assignment: Vec::new() };
            return Ok(Decomposition { outcome: Outcome::Feasible { witness }, stats: SolverStats::default() });
        }
        if k == 0 {
            return Ok(Decomposition { outcome: Outcome::Infeasible, stats: SolverStats::default() });
        }
        let limits: Vec<u32> = slots.scales().iter().map(|&r| self.edge_limit(r)).collect();
        let widest = *limits.iter().max().expect("k > 0");
        let order = self.search_order(widest);
        let mut position = vec![0; n];
        for (pos, &p) in order.iter().enumerate() {
            position[p] = pos;
        }
        // back[j][pos]: earlier positions within scale of slot j
        let back: Vec<Vec<Vec<usize>>> = limits
            .iter()
            .map(|&lim| {
                order
                    .iter()
                    .enumerate()
                    .map(|(pos, &p)| (0..pos).filter(|&q| self.rank[p * n + order[q]] < lim).collect())
                    .collect()
            })
            .collect();
        // fwd[j][pos]: later positions within scale of slot j
        let mut fwd: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; k];
        for (j, per_pos) in back.iter().enumerate() {
            for (pos, earlier) in per_pos.iter().enumerate() {
                for &q in earlier {
                    fwd[j][q].push(pos);
                }
            }
        }
        // previous slot with the same scale, for symmetry breaking
        let twin: Vec<Option<usize>> = (0..k).map(|j| (0..j).rev().find(|&i| limits[i] == limits[j])).collect();

        let mut search = Search {
            rank: &self.rank,
            n,
            order: &order,
            back: &back,
            fwd: &fwd,
            twin: &twin,
            max_diam: self.max_diam_rank,
            slot_of: vec![usize::MAX; n],
            used: vec![0; k],
            parent: (0..n).collect(),
            members: vec![Vec::new(); n],
            diam: vec![0; n],
            undo: Vec::new(),
            domain: vec![if k >= 64 { u64::MAX } else { (1u64 << k) - 1 }; n],
            pruned: Vec::new(),
            stats: SolverStats::default(),
            budget: node_budget,
        };
        let flow = search.run(0);
        let stats = search.stats;
        let outcome = match flow {
            Flow::Found => {
                let assignment = (0..n).map(|p| search.slot_of[position[p]]).collect();
                let witness = ColoringWitness { assignment };
                if !witness.verify(self.space, slots, self.bound)? {
                    return Err(Error::BadMetric("solver produced an invalid witness".into()));
                }
                Outcome::Feasible { witness }
            }
            Flow::Exhausted => Outcome::Infeasible,
            Flow::OutOfBudget => Outcome::Unknown,
        };
        Ok(Decomposition { outcome, stats })
    }

    /// Maximum cardinality search: start at the highest-degree point, then
    /// repeatedly take the point with most already-ordered neighbors
    /// (ties: higher degree, then lower index).
    fn search_order(&self, limit: u32) -> Vec<usize> {
        let n = self.n;
        let adjacent = |a: usize, b: usize| a != b && self.rank[a * n + b] < limit;
        let degree: Vec<usize> = (0..n).map(|a| (0..n).filter(|&b| adjacent(a, b)).count()).collect();
        let mut weight = vec![0usize; n];
        let mut taken = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let next = (0..n)
                .filter(|&p| !taken[p])
                .max_by(|&a, &b| (weight[a], degree[a]).cmp(&(weight[b], degree[b])).then(b.cmp(&a)))
                .expect("points remain");
            taken[next] = true;
            order.push(next);
            for q in 0..n {
                if !taken[q] && adjacent(next, q) {
                    weight[q] += 1;
                }
            }
        }
        order
    }
}

/// Convenience wrapper around [`Solver`].
pub fn decompose(space: &MetricSpace, slots: &ScaleSlots, bound: Dist, node_budget: u64) -> Result<Decomposition> {
    Solver::new(space, bound)?.solve(slots, node_budget)
}

enum Flow {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Merge {
    child: usize,
    root: usize,
    old_diam: u32,
    old_len: usize,
}

/// Search state over positions in the search order.
struct Search<'s> {
    rank: &'s [u32],
    n: usize,
    order: &'s [usize],
    back: &'s [Vec<Vec<usize>>],
    fwd: &'s [Vec<Vec<usize>>],
    twin: &'s [Option<usize>],
    max_diam: u32,
    slot_of: Vec<usize>,
    used: Vec<usize>,
    parent: Vec<usize>,
    members: Vec<Vec<usize>>,
    diam: Vec<u32>,
    undo: Vec<Merge>,
    /// Slots still open to each unplaced position (slots past 63 are never pruned).
    domain: Vec<u64>,
    pruned: Vec<(usize, u64)>,
    stats: SolverStats,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self, pos: usize) -> Flow {
        if pos == self.n {
            return Flow::Found;
        }
        for slot in 0..self.used.len() {
            if slot < 64 && self.domain[pos] & (1 << slot) == 0 {
                continue;
            }
            if let Some(t) = self.twin[slot] {
                if self.used[t] == 0 {
                    continue;
                }
            }
            self.stats.nodes += 1;
            if self.stats.nodes > self.budget {
                return Flow::OutOfBudget;
            }
            let mark = self.undo.len();
            let pruned_mark = self.pruned.len();
            if self.place(pos, slot) && self.forward_check(pos, slot) {
                match self.run(pos + 1) {
                    Flow::Exhausted => {}
                    other => return other,
                }
            }
            self.unplace(pos, slot, mark);
            while self.pruned.len() > pruned_mark {
                let (q, old) = self.pruned.pop().expect("len > mark");
                self.domain[q] = old;
            }
            self.stats.backtracks += 1;
        }
        Flow::Exhausted
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Cross-diameter between two components, stopping early past the bound.
    fn cross(&self, a: usize, b: usize) -> u32 {
        let mut best = 0;
        for &x in &self.members[a] {
            let row = self.order[x] * self.n;
            for &y in &self.members[b] {
                let r = self.rank[row + self.order[y]];
                if r > best {
                    best = r;
                    if best > self.max_diam {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn place(&mut self, pos: usize, slot: usize) -> bool {
        self.slot_of[pos] = slot;
        self.used[slot] += 1;
        self.parent[pos] = pos;
        self.members[pos].clear();
        self.members[pos].push(pos);
        self.diam[pos] = 0;
        let back = &self.back[slot][pos];
        for &q in back {
            if self.slot_of[q] != slot {
                continue;
            }
            let (ra, rb) = (self.find(pos), self.find(q));
            if ra == rb {
                continue;
            }
            let d = self.diam[ra].max(self.diam[rb]).max(self.cross(ra, rb));
            if d > self.max_diam {
                return false;
            }
            let (root, child) = if self.members[ra].len() >= self.members[rb].len() { (ra, rb) } else { (rb, ra) };
            self.undo.push(Merge { child, root, old_diam: self.diam[root], old_len: self.members[root].len() });
            self.parent[child] = root;
            self.diam[root] = d;
            let moved = std::mem::take(&mut self.members[child]);
            self.members[root].extend_from_slice(&moved);
            self.members[child] = moved;
        }
        true
    }

    /// Closes `slot` at every later position that would push the component
    /// of `pos` past the bound; fails on an emptied domain.
    fn forward_check(&mut self, pos: usize, slot: usize) -> bool {
        if slot >= 64 {
            return true;
        }
        let bit = 1u64 << slot;
        let root = self.find(pos);
        let diam = self.diam[root];
        for i in 0..self.members[root].len() {
            let x = self.members[root][i];
            for &q in &self.fwd[slot][x] {
                if q <= pos || self.domain[q] & bit == 0 {
                    continue;
                }
                let row = self.order[q] * self.n;
                let reach = self.members[root].iter().map(|&y| self.rank[row + self.order[y]]).max().unwrap_or(0);
                if diam.max(reach) > self.max_diam {
                    self.pruned.push((q, self.domain[q]));
                    self.domain[q] &= !bit;
                    if self.domain[q] == 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn unplace(&mut self, pos: usize, slot: usize, mark: usize) {
        while self.undo.len() > mark {
            let m = self.undo.pop().expect("len > mark");
            self.members[m.root].truncate(m.old_len);
            self.diam[m.root] = m.old_diam;
            self.parent[m.child] = m.child;
        }
        self.slot_of[pos] = usize::MAX;
        self.used[slot] -= 1;
        self.members[pos].clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Norm;

    fn solve(space: &MetricSpace, slots: &[u32], bound: i64) -> Outcome {
        decompose(space, &ScaleSlots::from_ints(slots.iter().copied()).unwrap(), Dist::int(bound), DEFAULT_NODE_BUDGET)
            .unwrap()
            .outcome
    }

    #[test]
    fn path_examples() {
        let x = MetricSpace::path(29).unwrap();
        assert_eq!(solve(&x, &[4], 5), Outcome::Infeasible);
        assert!(solve(&x, &[2, 3], 5).is_feasible());
    }

    #[test]
    fn scale_one_slot_on_integer_spaces() {
        let x = MetricSpace::grid(4, 2, Norm::L1).unwrap();
        let Outcome::Feasible { witness } = solve(&x, &[3, 1], 0) else {
            panic!("scale 1 separates every point");
        };
        let slots = ScaleSlots::from_ints([3, 1]).unwrap();
        assert!(witness.verify(&x, &slots, Dist::ZERO).unwrap());
    }

    #[test]
    fn degenerate_slot_lists() {
        let x = MetricSpace::path(3).unwrap();
        assert_eq!(solve(&x, &[], 100), Outcome::Infeasible);
        assert!(solve(&x, &[2], 3).is_feasible());
        let empty = MetricSpace::from_matrix(None, vec![]).unwrap();
        assert!(solve(&empty, &[], 0).is_feasible());
        assert!(ScaleSlots::new(vec![Dist::ZERO]).is_err());
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let x = MetricSpace::grid(5, 2, Norm::LInf).unwrap();
        let slots = ScaleSlots::from_ints([2, 2]).unwrap();
        let d = decompose(&x, &slots, Dist::int(2), 10).unwrap();
        assert_eq!(d.outcome, Outcome::Unknown);
        assert!(d.stats.nodes > 10);
    }

    #[test]
    fn witnesses_verify() {
        let x = MetricSpace::path(40).unwrap();
        let slots = ScaleSlots::from_ints([5, 5]).unwrap();
        let d = decompose(&x, &slots, Dist::int(6), DEFAULT_NODE_BUDGET).unwrap();
        let Outcome::Feasible { witness } = d.outcome else { panic!("feasible") };
        assert!(witness.verify(&x, &slots, Dist::int(6)).unwrap());
        assert!(!witness.verify(&x, &slots, Dist::int(1)).unwrap());
    }

    #[test]
    fn infinite_bound_accepts_everything() {
        let a = MetricSpace::path(3).unwrap();
        let x = MetricSpace::disjoint_union(&a, &a).unwrap();
        let slots = ScaleSlots::new(vec![Dist::Infinite]).unwrap();
        assert!(decompose(&x, &slots, Dist::Infinite, 1000).unwrap().outcome.is_feasible());
        assert!(decompose(&x, &slots, Dist::int(3), 1000).unwrap().outcome.is_feasible());
        let one = ScaleSlots::from_ints([10]).unwrap();
        assert_eq!(decompose(&x, &one, Dist::int(2), 1000).unwrap().outcome, Outcome::Infeasible);
    }
}
