//! Exact computations around transfinite asymptotic dimension.
//!
//! * [`ordinal`]: Cantor-normal-form ordinals below ω^ω.
//! * [`setfamily`]: families of finite sets and Borst's ordinal `Ord`.
//! * [`strategy`]: m-strategies and certificate checking for `Ord ≤ ω·m + n`.
//! * [`metric`]: finite ∞-pseudometric spaces and scale-r-components.
//! * [`approx`]: the scale-decomposition solver and truncated trasdim.
//!
//! Statements about infinite spaces and families are evaluated on finite
//! truncations (a ground set `{1..T}`, a finite point set, a mesh bound `B`),
//! and results say so.

pub mod approx;
pub mod docs;
pub mod error;
pub mod gen;
pub mod metric;
pub mod natmap;
pub mod ordinal;
pub mod setfamily;
pub mod strategy;

pub use error::{Error, Result};
pub use metric::{Dist, MetricSpace};
pub use natmap::NatMap;
pub use ordinal::Ordinal;
pub use setfamily::{FinSet, GroundSet, Oracle, SetFamily, TriState};
pub use strategy::Strategy;
