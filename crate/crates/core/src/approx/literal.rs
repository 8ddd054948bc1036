//! Literal evaluation of the disjoint-family condition: a class `Y` is
//! acceptable at scale `r` iff `Y` splits into an `r`-disjoint family of
//! blocks with mesh at most `B`. Searched directly over partitions of `Y`,
//! independently of scale-components. Exponential; small spaces only.

use crate::error::{Error, Result};
use crate::metric::{Dist, MetricSpace};

pub const LITERAL_POINT_LIMIT: usize = 10;

/// Whether `ys` is the union of an `r`-disjoint family with mesh `≤ bound`.
pub fn admits_disjoint_cover(space: &MetricSpace, ys: &[usize], r: Dist, bound: Dist) -> Result<bool> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn place(space: &MetricSpace, ys: &[usize], i: usize, r: Dist, bound: Dist, blocks: &mut Vec<Vec<usize>>) -> Result<bool> {
        if i == ys.len() {
            return Ok(space.is_r_disjoint(blocks, r)? && space.mesh(blocks)? <= bound);
        }
        let p = ys[i];
        for b in 0..=blocks.len() {
            let fits = blocks.iter().enumerate().all(|(c, block)| {
                block.iter().all(|&q| if c == b { space.d(p, q) <= bound } else { space.d(p, q) >= r })
            });
            if !fits {
                continue;
            }
            let fresh = b == blocks.len();
            if fresh {
                blocks.push(vec![p]);
            } else {
                blocks[b].push(p);
            }
            let ok = place(space, ys, i + 1, r, bound, blocks)?;
            if fresh {
                blocks.pop();
            } else {
                blocks[b].pop();
            }
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
    place(space, ys, 0, r, bound, &mut blocks)
}

/// Whether the points can be split into classes, one per scale, each
/// admitting a disjoint bounded cover at its scale.
pub fn literal_cover_exists(space: &MetricSpace, scales: &[Dist], bound: Dist) -> Result<bool> {
    if space.len() > LITERAL_POINT_LIMIT {
        return Err(Error::TooLarge(format!("{} points (limit {LITERAL_POINT_LIMIT})", space.len())));
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); scales.len()];
    fn assign(space: &MetricSpace, p: usize, scales: &[Dist], bound: Dist, classes: &mut [Vec<usize>]) -> Result<bool> {
        if p == space.len() {
            return Ok(true);
        }
        for j in 0..scales.len() {
            classes[j].push(p);
            // the condition is hereditary, so a failing partial class is final
            let ok = admits_disjoint_cover(space, &classes[j], scales[j], bound)?
                && assign(space, p + 1, scales, bound, classes)?;
            classes[j].pop();
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
    assign(space, 0, scales, bound, &mut classes)
}
