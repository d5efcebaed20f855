//! Serializable records. Every numeric field is either a plain integer or a
//! string accepted by the matching parser (`EisensteinInt`, `SymbolValue`).

use milnor_symbols::triple_symbols::{Solution, Witness};
use milnor_symbols::{Error, ErrorClass, TripleSymbolReport};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub u: u64,
    pub v: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub root: RootRecord,
    pub exponent: u8,
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        WitnessRecord { root: RootRecord { u: w.root.u, v: w.root.v }, exponent: w.exponent }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub mu: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedeiSolutionRecord {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedeiRecord {
    pub p1: u64,
    pub p2: u64,
    pub p3: u64,
    pub value: String,
    pub mu2_123: u8,
    pub mu2_sigma_123: u8,
    pub witnesses: Vec<WitnessRecord>,
    pub solution: RedeiSolutionRecord,
    pub pair_invariants: Vec<PairRecord>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicSolutionRecord {
    pub x: String,
    pub y: String,
    pub z: String,
    pub norm_check: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicRecord {
    pub pi1: String,
    pub pi2: String,
    pub pi3: String,
    pub value: String,
    pub mu3_123: u8,
    pub mu3_sigma_123: u8,
    pub witnesses: Vec<WitnessRecord>,
    pub solution: CubicSolutionRecord,
    pub pair_invariants: Vec<PairRecord>,
    pub warnings: Vec<String>,
}

fn pairs(r: &TripleSymbolReport) -> Vec<PairRecord> {
    r.pair_invariants.iter().map(|&(i, j, mu)| PairRecord { i, j, mu }).collect()
}

impl RedeiRecord {
    pub fn new(p3: u64, r: &TripleSymbolReport) -> Self {
        let Solution::Redei(s) = &r.solution else { unreachable!("Redei report carries a Redei solution") };
        RedeiRecord {
            p1: s.p1,
            p2: s.p2,
            p3,
            value: r.value.to_string(),
            mu2_123: r.milnor,
            mu2_sigma_123: r.frobenius_milnor,
            witnesses: r.witnesses.iter().map(WitnessRecord::from).collect(),
            solution: RedeiSolutionRecord { x: s.x, y: s.y, z: s.z },
            pair_invariants: pairs(r),
            warnings: r.warnings.clone(),
        }
    }
}

impl CubicRecord {
    pub fn new(pi3: String, r: &TripleSymbolReport) -> Self {
        let Solution::Cubic(s) = &r.solution else { unreachable!("cubic report carries a cubic solution") };
        CubicRecord {
            pi1: s.pi1.pi().to_string(),
            pi2: s.pi2.pi().to_string(),
            pi3,
            value: r.value.to_string(),
            mu3_123: r.milnor,
            mu3_sigma_123: r.frobenius_milnor,
            witnesses: r.witnesses.iter().map(WitnessRecord::from).collect(),
            solution: CubicSolutionRecord {
                x: s.x.to_string(),
                y: s.y.to_string(),
                z: s.z.to_string(),
                norm_check: s.norm_check.to_string(),
            },
            pair_invariants: pairs(r),
            warnings: r.warnings.clone(),
        }
    }
}

/// A per-item failure in batch mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub input: String,
    pub error: String,
    pub class: String,
    pub exit_code: i32,
}

pub fn class_name(class: ErrorClass) -> &'static str {
    match class {
        ErrorClass::Precondition => "precondition",
        ErrorClass::Degenerate => "degenerate",
        ErrorClass::SearchExhausted => "search-exhausted",
        ErrorClass::Internal => "internal",
    }
}

pub fn exit_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Precondition => 2,
        ErrorClass::Degenerate => 3,
        ErrorClass::SearchExhausted => 4,
        ErrorClass::Internal => 5,
    }
}

impl ErrorRecord {
    pub fn new(input: &str, err: &Error) -> Self {
        ErrorRecord {
            input: input.to_string(),
            error: err.to_string(),
            class: class_name(err.class()).to_string(),
            exit_code: exit_code(err.class()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub pi3: String,
    pub mu3_sigma_123: u8,
    pub expected_mu3_sigma_123: u8,
    pub mu3_123: u8,
    pub expected_mu3_123: u8,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub pi1: String,
    pub pi2: String,
    pub rows: Vec<TableRow>,
    pub passed: bool,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyRecord {
    pub word: String,
    pub exponent: Option<u8>,
    pub expected: u8,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergReport {
    pub l: u32,
    pub c: String,
    pub seed: u64,
    pub alpha_order_l: bool,
    pub beta_order_l: bool,
    pub commutator_is_delta: bool,
    pub delta_central: bool,
    pub delta_order_l: bool,
    pub epsilon_consistent: bool,
    pub monodromy: Vec<MonodromyRecord>,
    pub kernel_trials: usize,
    pub kernel_distinct_matrices: usize,
    pub kernel_consistent: bool,
    pub passed: bool,
}
