use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ordinal arithmetic on INF")]
    InfiniteOperand,
    #[error("ordinal coefficient overflow")]
    OrdinalOverflow,
    #[error("cannot parse ordinal {0:?}")]
    OrdinalSyntax(String),

    #[error("label {0} outside 1..=64")]
    LabelOutOfRange(u32),
    #[error("empty set where a nonempty finite set is required")]
    EmptySet,
    #[error("ground size must be in 1..=64, got {0}")]
    BadGround(u32),
    #[error("set {set} is not a subset of the ground set {{1..{ground}}}")]
    OutsideGround { set: String, ground: u32 },
    #[error("operation needs an explicit family, got oracle {0:?}")]
    OracleFamily(String),
    #[error("truncation {0} too large to materialize (limit {1})")]
    TruncationTooLarge(u32, u32),
    #[error("family is not inclusive: {0} is a member but {1} is not")]
    NotInclusive(String, String),
    #[error("map is not injective on the ground set: {0} and {1} both go to {2}")]
    NotInjective(u32, u32, u32),
    #[error("ordinal alpha must be positive")]
    ZeroAlpha,
    #[error("unknown oracle {0:?}")]
    UnknownOracle(String),

    #[error("map is not non-decreasing: f({0}) = {1} > f({2}) = {3}")]
    NotMonotone(u32, u32, u32, u32),
    #[error("map value must be a positive natural at {0}")]
    NonPositive(u32),
    #[error("map undefined at {0}")]
    MapUndefined(u32),
    #[error("invalid profile: {0}")]
    BadProfile(String),
    #[error("strategy has no decision for prefix {0}")]
    StrategyNotTotal(String),
    #[error("invalid strategy: {0}")]
    BadStrategy(String),
    #[error("certificate check exceeds the cap ({0}); raise the limits explicitly")]
    CapExceeded(String),

    #[error("invalid metric: {0}")]
    BadMetric(String),
    #[error("point index {0} out of range")]
    PointOutOfRange(usize),
    #[error("blocks overlap at point {0}")]
    OverlappingBlocks(usize),
    #[error("scale must be positive")]
    NonPositiveScale,
    #[error("cannot parse distance {0:?}")]
    DistanceSyntax(String),

    #[error("instance too large for literal search: {0}")]
    TooLarge(String),
    #[error("scale window problem: {0}")]
    BadWindow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
