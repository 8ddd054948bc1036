//! Seeded random instances for tests, benchmarks and the `generate` command.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::metric::{Dist, MetricSpace};
use crate::setfamily::{FinSet, SetFamily};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `max_members` random nonempty subsets of `{1..ground}`.
pub fn random_family(rng: &mut impl Rng, ground: u32, max_members: usize) -> Result<SetFamily> {
    let full = (1u64 << ground) - 1;
    let count = rng.gen_range(0..=max_members);
    let members: Vec<FinSet> = (0..count)
        .filter_map(|_| FinSet::from_bits(rng.gen::<u64>() & full))
        .collect();
    SetFamily::explicit(ground, members)
}

/// The inclusive closure of a few random generators, each of size at most `max_size`.
pub fn random_inclusive_family(rng: &mut impl Rng, ground: u32, generators: usize, max_size: usize) -> Result<SetFamily> {
    let labels: Vec<u32> = (1..=ground).collect();
    let count = rng.gen_range(0..=generators);
    let members: Vec<FinSet> = (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=max_size.min(ground as usize));
            FinSet::new(labels.choose_multiple(rng, k).copied())
        })
        .collect::<Result<_>>()?;
    SetFamily::explicit(ground, members)?.inclusive_closure()
}

/// A random injective map from `{1..ground}` into `{1..64}`.
pub fn random_injection(rng: &mut impl Rng, ground: u32) -> Vec<u32> {
    let mut targets: Vec<u32> = (1..=64).collect();
    targets.shuffle(rng);
    targets.truncate(ground as usize);
    targets
}

/// Random weights `p/q` with `q ≤ 4` (some pairs at `∞`), closed under
/// shortest paths so the result is a metric.
pub fn random_space(rng: &mut impl Rng, points: usize) -> Result<MetricSpace> {
    let labels: Vec<String> = (0..points).map(|i| i.to_string()).collect();
    let mut edges = Vec::new();
    for u in 0..points {
        for v in u + 1..points {
            if rng.gen_bool(0.15) {
                continue;
            }
            let w = Dist::ratio(rng.gen_range(1..=40), rng.gen_range(1..=4))?;
            edges.push((u, v, w));
        }
    }
    MetricSpace::from_graph(labels, &edges)
}

/// A few scales spread over the distances present in `space`, including ties.
pub fn random_scales(rng: &mut impl Rng, space: &MetricSpace, count: usize) -> Vec<Dist> {
    let mut finite: Vec<Dist> = (0..space.len())
        .flat_map(|i| (0..space.len()).map(move |j| (i, j)))
        .map(|(i, j)| space.d(i, j))
        .filter(|d| d.is_finite() && d.is_positive())
        .collect();
    finite.sort();
    finite.dedup();
    (0..count)
        .map(|_| {
            if finite.is_empty() || rng.gen_bool(0.2) {
                Dist::int(rng.gen_range(1..=12))
            } else {
                finite[rng.gen_range(0..finite.len())]
            }
        })
        .collect()
}
