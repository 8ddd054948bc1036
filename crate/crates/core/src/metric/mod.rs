//! Finite ∞-pseudometric spaces and scale-r-components.
//!
//! Balls are open: `B(x, r) = {y : d(x, y) < r}`, taken inside the subspace
//! under consideration. Two points of a subspace `Y` are scale-r-chained iff
//! they are joined by a path in the graph on `Y` with edges `d(x, y) < r`:
//! an edge gives intersecting balls (witness `y`), and intersecting balls
//! with witness `z ∈ Y` give the two edges `x–z`, `z–y`. Scale-r-components
//! are computed from the edge graph; [`ball_chain_components`] evaluates the
//! ball condition literally and exists to cross-check that.

mod build;
mod dist;

use std::collections::VecDeque;

use serde::Serialize;

pub use build::{GridShape, Norm};
pub use dist::Dist;

use crate::error::{Error, Result};

/// A finite ∞-pseudometric space with labeled points.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpace {
    labels: Vec<String>,
    dist: Vec<Dist>,
    grid: Option<GridShape>,
}

/// A partition of a point subset into blocks, each with its diameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspacePartition {
    /// Blocks with ascending point indices, ordered by first point.
    pub blocks: Vec<Vec<usize>>,
    pub diameters: Vec<Dist>,
}

impl SubspacePartition {
    fn from_blocks(space: &MetricSpace, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        let diameters = blocks.iter().map(|b| space.diameter(b)).collect();
        SubspacePartition { blocks, diameters }
    }

    /// Supremum of block diameters (0 when there are no blocks).
    pub fn mesh(&self) -> Dist {
        self.diameters.iter().copied().max().unwrap_or(Dist::ZERO)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

impl MetricSpace {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn grid_shape(&self) -> Option<GridShape> {
        self.grid
    }

    #[inline]
    pub fn d(&self, x: usize, y: usize) -> Dist {
        self.dist[x * self.labels.len() + y]
    }

    pub fn points(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    fn check_points(&self, ys: &[usize]) -> Result<()> {
        match ys.iter().find(|&&y| y >= self.len()) {
            Some(&y) => Err(Error::PointOutOfRange(y)),
            None => Ok(()),
        }
    }

    /// Largest pairwise distance within `ys` (0 for fewer than two points).
    pub fn diameter(&self, ys: &[usize]) -> Dist {
        let mut best = Dist::ZERO;
        for (i, &a) in ys.iter().enumerate() {
            for &b in &ys[i + 1..] {
                best = best.max(self.d(a, b));
            }
        }
        best
    }

    /// `inf {d(a, b) : a ∈ A, b ∈ B}`; `∞` if either side is empty.
    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> Dist {
        a.iter()
            .flat_map(|&x| b.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.d(x, y))
            .min()
            .unwrap_or(Dist::Infinite)
    }

    /// Scale-r-components of the subspace `ys`.
    pub fn scale_components(&self, ys: &[usize], r: Dist) -> Result<SubspacePartition> {
        if !r.is_positive() {
            return Err(Error::NonPositiveScale);
        }
        self.check_points(ys)?;
        let mut ds = DisjointSet::new(ys.len());
        for i in 0..ys.len() {
            for j in i + 1..ys.len() {
                if self.d(ys[i], ys[j]) < r {
                    ds.union(i, j);
                }
            }
        }
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); ys.len()];
        for (i, &y) in ys.iter().enumerate() {
            let root = ds.find(i);
            by_root[root].push(y);
        }
        let blocks = by_root.into_iter().filter(|b| !b.is_empty()).collect();
        Ok(SubspacePartition::from_blocks(self, blocks))
    }

    /// Whether every scale-r-component of `ys` has diameter at most `bound`.
    pub fn is_zero_dim(&self, ys: &[usize], r: Dist, bound: Dist) -> Result<bool> {
        Ok(self.scale_components(ys, r)?.mesh() <= bound)
    }

    /// Whether distinct blocks are at distance at least `r`.
    pub fn is_r_disjoint(&self, blocks: &[Vec<usize>], r: Dist) -> Result<bool> {
        self.check_disjoint(blocks)?;
        for (i, a) in blocks.iter().enumerate() {
            for b in &blocks[i + 1..] {
                if self.set_distance(a, b) < r {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `sup` of block diameters.
    pub fn mesh(&self, blocks: &[Vec<usize>]) -> Result<Dist> {
        self.check_disjoint(blocks)?;
        Ok(blocks.iter().map(|b| self.diameter(b)).max().unwrap_or(Dist::ZERO))
    }

    fn check_disjoint(&self, blocks: &[Vec<usize>]) -> Result<()> {
        let mut seen = vec![false; self.len()];
        for &p in blocks.iter().flatten() {
            if p >= self.len() {
                return Err(Error::PointOutOfRange(p));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::OverlappingBlocks(p));
            }
        }
        Ok(())
    }
}

/// Scale-r-components from the literal chain condition: `x ~ y` iff some
/// `z ∈ ys` has `d(x, z) < r` and `d(y, z) < r`, closed transitively.
pub fn ball_chain_components(space: &MetricSpace, ys: &[usize], r: Dist) -> Result<SubspacePartition> {
    if !r.is_positive() {
        return Err(Error::NonPositiveScale);
    }
    space.check_points(ys)?;
    let n = ys.len();
    let balls_meet = |i: usize, j: usize| ys.iter().any(|&z| space.d(ys[i], z) < r && space.d(ys[j], z) < r);
    let mut label = vec![usize::MAX; n];
    let mut blocks = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut block = vec![ys[s]];
        label[s] = id;
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if label[j] == usize::MAX && balls_meet(i, j) {
                    label[j] = id;
                    block.push(ys[j]);
                    queue.push_back(j);
                }
            }
        }
        blocks.push(block);
    }
    Ok(SubspacePartition::from_blocks(space, blocks))
}

struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(last: u32) -> MetricSpace {
        MetricSpace::path(last).unwrap()
    }

    #[test]
    fn components_on_the_path() {
        let x = path(10);
        let p = x.scale_components(&[0, 5, 10], Dist::int(2)).unwrap();
        assert_eq!(p.blocks, vec![vec![0], vec![5], vec![10]]);
        let all = x.points();
        let p = x.scale_components(&all, Dist::int(2)).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.mesh(), Dist::int(10));
        assert!(x.scale_components(&[], Dist::int(2)).unwrap().is_empty());
        assert!(matches!(x.scale_components(&all, Dist::ZERO), Err(Error::NonPositiveScale)));
    }

    #[test]
    fn ties_do_not_connect() {
        let x = path(10);
        let p = x.scale_components(&[0, 2, 4], Dist::int(2)).unwrap();
        assert_eq!(p.len(), 3);
        let p = x.scale_components(&[0, 2, 4], Dist::ratio(5, 2).unwrap()).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn zero_dim_examples() {
        let x = path(10);
        let all = x.points();
        assert!(x.is_zero_dim(&all, Dist::int(2), Dist::int(10)).unwrap());
        assert!(!x.is_zero_dim(&all, Dist::int(2), Dist::int(9)).unwrap());
    }

    #[test]
    fn disjointness_and_mesh() {
        let x = path(10);
        let blocks = vec![vec![0, 1], vec![5, 6]];
        assert!(x.is_r_disjoint(&blocks, Dist::int(4)).unwrap());
        assert!(!x.is_r_disjoint(&blocks, Dist::int(5)).unwrap());
        assert_eq!(x.mesh(&blocks).unwrap(), Dist::int(1));
        let overlapping = vec![vec![0, 1], vec![1, 2]];
        assert!(matches!(x.is_r_disjoint(&overlapping, Dist::int(1)), Err(Error::OverlappingBlocks(1))));
        assert!(matches!(x.mesh(&overlapping), Err(Error::OverlappingBlocks(1))));
    }

    #[test]
    fn infinite_distances_never_merge() {
        let x = MetricSpace::disjoint_union(&path(3), &path(3)).unwrap();
        let all = x.points();
        let p = x.scale_components(&all, Dist::int(1000)).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(x.diameter(&all), Dist::Infinite);
        // at scale ∞ the components are exactly the finite-distance classes
        assert!(x.is_zero_dim(&all, Dist::Infinite, Dist::int(3)).unwrap());
        assert!(!x.is_zero_dim(&all, Dist::Infinite, Dist::int(2)).unwrap());
        assert_eq!(x.set_distance(&[0], &[4]), Dist::Infinite);
    }

    #[test]
    fn ball_oracle_agrees_on_a_small_case() {
        let x = MetricSpace::grid(3, 2, Norm::LInf).unwrap();
        let ys: Vec<usize> = (0..x.len()).step_by(2).collect();
        for r in 1..=4 {
            let r = Dist::int(r);
            assert_eq!(x.scale_components(&ys, r).unwrap(), ball_chain_components(&x, &ys, r).unwrap());
        }
    }
}
