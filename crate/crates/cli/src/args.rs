use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const FORMATS: &str = "\
Input documents (JSON):
  family    {\"ground\":4,\"members\":[[1,2],[3]]}
            {\"ground\":12,\"oracle\":\"card_le_min\",\"params\":{}}
            {\"ground\":10,\"oracle\":\"card_le_const_k\",\"params\":{\"k\":2}}
  space     {\"kind\":\"matrix\",\"labels\":[\"a\",\"b\"],\"rows\":[[0,\"INF\"],[\"INF\",0]]}
            {\"kind\":\"graph\",\"labels\":[\"a\",\"b\"],\"edges\":[[\"a\",\"b\",\"3/2\"]]}
            {\"kind\":\"grid\",\"side\":12,\"dim\":2,\"norm\":\"linf\"}
            {\"kind\":\"disjoint_union\",\"parts\":[<space>,<space>]}
  strategy  {\"m\":1,\"start\":1,\"rules\":[{\"type\":\"affine\",\"a\":1,\"b\":0}]}
            {\"m\":1,\"start\":1,\"type\":\"table\",\"entries\":[{\"prefix\":[[1]],\"next\":2}]}
  profile   {\"base\":2,\"maps\":[{\"type\":\"lookup\",\"values\":{\"2\":1,\"3\":1}}]}
  request   {\"op\":\"trasdim\",\"space\":<space>,\"scales\":[2,3,4],\"B\":4}
            (ops: family, trasdim, derive-f, profile-check; optional n, profile, tuples, budget)

Distances are integers, p/q rationals, exact decimals, or \"INF\".
Scale lists: \"2..6\" (inclusive) or \"2,3,5\".
Ordinals: \"w^2*1 + w*3 + 4\", \"w\", \"7\".

Reports are JSON with \"schema\":\"1\". Exit status: 0 definitive result,
2 undecided (budget exhausted or only known at truncation), 1 input error.";

#[derive(Parser, Debug)]
#[command(name = "trasdim", version, about = "Borst ordinals, strategy certificates and truncated trasdim of finite spaces", after_help = FORMATS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Report format; tables are a view of the JSON report.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Include wall-clock timing (makes reports non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Args, Debug)]
pub struct Input {
    /// Input document.
    #[arg(long, short)]
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct Window {
    /// Scale window, e.g. "2..6" or "2,3,5".
    #[arg(long)]
    pub scales: Option<String>,
    /// Mesh bound B.
    #[arg(long)]
    pub bound: Option<String>,
    /// Solver node budget per decomposition.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ord of a family; with --alpha, decide Ord F < alpha + p.
    Ord {
        #[command(flatten)]
        input: Input,
        /// Truncation for oracle families (defaults to the document's ground).
        #[arg(long)]
        truncation: Option<u32>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 0)]
        p: usize,
    },
    /// Derived family F^sigma.
    Derive {
        #[command(flatten)]
        input: Input,
        /// Comma-separated labels.
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        truncation: Option<u32>,
    },
    /// Lexicographically least chain a_1..a_k with every prefix set in the family.
    Chain {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        truncation: Option<u32>,
    },
    /// Scale-r-components of a space.
    Components {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        scale: String,
    },
    /// Split a space into one class per scale slot with bounded components.
    Decompose {
        #[command(flatten)]
        input: Input,
        /// Slot scales; repeats allowed, e.g. "2,2,3".
        #[arg(long)]
        scales: String,
        #[arg(long)]
        bound: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// The B-truncated family of infeasible scale sets.
    Family {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        window: Window,
    },
    /// Ord of the B-truncated family.
    Trasdim {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        window: Window,
    },
    /// f(k) = Ord M^{k..k+n} + 1 over the window.
    DeriveF {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Check a profile on every in-window non-decreasing tuple.
    ProfileCheck {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        window: Window,
        /// Profile document (or "profile" in a request).
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Exhaustive certificate check of a strategy against a family.
    StrategyCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long)]
        truncation: Option<u32>,
        /// Override the truncation cap (default 16).
        #[arg(long, default_value_t = 16)]
        max_truncation: u32,
        /// Override the round cap (default 3).
        #[arg(long, default_value_t = 3)]
        max_rounds: usize,
    },
    /// Print a seeded random document.
    Generate {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ground size for families, point count for spaces.
        #[arg(long, default_value_t = 6)]
        size: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Family,
    Inclusive,
    Space,
}
