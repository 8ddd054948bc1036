//! Benchmark inputs shared by the criterion targets.

use trasdim_core::gen;
use trasdim_core::metric::Norm;
use trasdim_core::{MetricSpace, SetFamily};

/// Inclusive family with `generators` random generators over `{1..ground}`.
pub fn inclusive_family(seed: u64, ground: u32, generators: usize) -> SetFamily {
    gen::random_inclusive_family(&mut gen::rng(seed), ground, generators, ground as usize).unwrap()
}

/// The grid `{0..side}²` under the sup norm.
pub fn grid(side: u32) -> MetricSpace {
    MetricSpace::grid(side, 2, Norm::LInf).unwrap()
}
