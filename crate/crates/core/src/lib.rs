//! Exact computation of quadratic and cubic power residue symbols, the
//! Rédei symbol over `Q`, the triple cubic residue symbol over `Q(ζ₃)`, and
//! their reading as mod `l` Milnor invariants.
//!
//! Alongside the symbol pipelines the crate carries two independent algebraic
//! engines: truncated mod `l` Magnus expansions of free group words (with the
//! Zassenhaus filtration degree and degree-2 normal forms), and an exact
//! model of the dilogarithmic mod `l` Heisenberg covering
//! `k(t)(t^{1/l}, (c^l - t)^{1/l}, ε_l(t)^{1/l})` with its automorphisms.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod eisenstein;
mod error;
pub mod form_solver;
pub mod kummer_cover;
pub mod magnus;
pub mod residue_symbols;
pub mod triple_symbols;

pub use eisenstein::{EisensteinInt, EisensteinPrime, PrimeKind, ResidueField, ResidueFieldElement};
pub use error::{Error, ErrorClass, Result};
pub use form_solver::{CubicData, RedeiData};
pub use magnus::{FreeWord, MultiIndex, NormalForm2, TruncatedSeries, ZassenhausDegree};
pub use residue_symbols::SymbolValue;
pub use triple_symbols::TripleSymbolReport;
