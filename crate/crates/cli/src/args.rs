use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "milnor", version, about = "Power residue symbols, triple symbols and mod-l Milnor invariants")]
pub struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum, env = "MILNOR_FORMAT")]
    pub format: Option<Format>,

    /// Coefficient bound for the form solvers [default: 10000].
    #[arg(long, global = true, env = "MILNOR_SEARCH_BOUND")]
    pub bound: Option<u64>,

    /// TOML file with defaults for `bound`, `format`, `seed`, `witnesses`.
    #[arg(long, global = true, env = "MILNOR_CONFIG")]
    pub config: Option<PathBuf>,

    /// Seed for randomized checks.
    #[arg(long, global = true, env = "MILNOR_SEED")]
    pub seed: Option<u64>,

    /// Include witness embeddings in text and CSV output.
    #[arg(long, global = true)]
    pub witnesses: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Legendre symbol (a/p).
    #[command(allow_negative_numbers = true)]
    Legendre { a: i64, p: u64 },

    /// Cubic residue symbol (x/pi)_3 over Z[w].
    CubicSymbol {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        pi: String,
    },

    /// Redei symbol [p1, p2, p3].
    Redei(TripleArgs),

    /// Triple cubic residue symbol [pi1, pi2, pi3]_3.
    TripleCubic(TripleArgs),

    /// Milnor invariants from power residue symbols or longitude words.
    #[command(subcommand)]
    Milnor(MilnorCommand),

    /// Truncated mod-l Magnus expansion.
    #[command(subcommand)]
    Magnus(MagnusCommand),

    /// Exact check of the Heisenberg covering relations; prints JSON.
    VerifyHeisenberg {
        #[arg(long)]
        l: u32,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        c: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },

    /// Recompute the five-row table for (pi1, pi2) = (-17, -53).
    PaperTable,
}

#[derive(Args, Debug)]
pub struct TripleArgs {
    #[arg(allow_hyphen_values = true)]
    pub first: String,
    #[arg(allow_hyphen_values = true)]
    pub second: String,
    /// Third prime; omit when using --batch.
    #[arg(allow_hyphen_values = true, required_unless_present = "batch")]
    pub third: Option<String>,
    /// File with one third prime per line (`#` starts a comment).
    #[arg(long, conflicts_with = "third")]
    pub batch: Option<PathBuf>,
    /// In batch mode, record failures and continue.
    #[arg(long)]
    pub keep_going: bool,
    /// Use this solution `x,y,z` instead of searching.
    #[arg(long, allow_hyphen_values = true)]
    pub solution: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum MilnorCommand {
    /// mu_l(sigma_p; ij) for branch points a_i, a_j.
    Pair {
        #[arg(long)]
        l: u32,
        /// Odd prime (l = 2) or prime of Z[w] (l = 3).
        #[arg(long, allow_hyphen_values = true)]
        place: String,
        #[arg(allow_hyphen_values = true)]
        ai: String,
        #[arg(allow_hyphen_values = true)]
        aj: String,
    },
    /// mu_l(I) from longitude words f_1, ..., f_r.
    Word {
        #[arg(long)]
        l: u32,
        #[arg(long = "I", alias = "index")]
        index: String,
        #[arg(required = true)]
        longitudes: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum MagnusCommand {
    /// Print Theta(w) up to degree d.
    Expand {
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Number of generators (at least the largest index in the word).
        #[arg(long, default_value_t = 0)]
        r: usize,
        word: String,
    },
    /// Coefficient of X_I in Theta(w).
    Mu {
        #[arg(long)]
        l: u32,
        #[arg(long = "I", alias = "index")]
        index: String,
        word: String,
    },
    /// Zassenhaus filtration degree of w.
    Degree {
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 6)]
        d: usize,
        word: String,
    },
    /// Normal form of w modulo F(3).
    NormalForm {
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 3)]
        r: usize,
        word: String,
    },
}
