//! Quadratic residue symbols over `Q` and the pair invariant
//! `ζ_l^{μ_l(σ_p; ij)} = ((a_j - a_i)/p)_l^{-1}`.

use alloc::format;
use alloc::string::ToString;
use core::fmt;

use crate::arith;
use crate::eisenstein::{cubic_residue_symbol, EisensteinInt, EisensteinPrime};
use crate::{Error, Result};

/// An element of `μ_l`, stored as the exponent of `ζ_l` in `Z/l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymbolValue {
    l: u32,
    exponent: u8,
}

impl SymbolValue {
    pub fn new(l: u32, exponent: i64) -> Result<Self> {
        if l != 2 && l != 3 {
            return Err(Error::UnsupportedOrder(l));
        }
        Ok(SymbolValue { l, exponent: exponent.rem_euclid(l as i64) as u8 })
    }

    pub fn one(l: u32) -> Result<Self> {
        Self::new(l, 0)
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn exponent(&self) -> u8 {
        self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0
    }

    /// Product in `μ_l`; values of different `l` are rejected.
    pub fn combine(self, other: SymbolValue) -> Result<SymbolValue> {
        if self.l != other.l {
            return Err(Error::MismatchedOrder(self.l, other.l));
        }
        SymbolValue::new(self.l, self.exponent as i64 + other.exponent as i64)
    }

    pub fn inverse(self) -> SymbolValue {
        SymbolValue { l: self.l, exponent: ((self.l as u8) - self.exponent) % self.l as u8 }
    }

    /// `±1` for `l = 2`.
    pub fn sign(&self) -> Option<i8> {
        (self.l == 2).then_some(if self.exponent == 0 { 1 } else { -1 })
    }
}

/// `+1`/`-1` for `l = 2`; `1`, `zeta3`, `zeta3^2` for `l = 3`.
impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.l, self.exponent) {
            (2, 0) => f.write_str("+1"),
            (2, _) => f.write_str("-1"),
            (_, 0) => f.write_str("1"),
            (_, 1) => f.write_str("zeta3"),
            (_, e) => write!(f, "zeta3^{e}"),
        }
    }
}

impl core::str::FromStr for SymbolValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" => SymbolValue::new(2, 0),
            "-1" => SymbolValue::new(2, 1),
            "1" => SymbolValue::new(3, 0),
            "zeta3" => SymbolValue::new(3, 1),
            "zeta3^2" => SymbolValue::new(3, 2),
            other => Err(Error::Parse(format!("invalid symbol value {other:?}"))),
        }
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::BadModulus("2 is not an odd prime".into()));
    }
    if !arith::is_prime_u64(p) {
        return Err(Error::BadModulus(format!("{p} is not prime")));
    }
    Ok(())
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<SymbolValue> {
    check_odd_prime(p)?;
    let r = arith::reduce_i64(a, p);
    if r == 0 {
        return Err(Error::NotCoprime { value: a.to_string(), modulus: p.to_string() });
    }
    SymbolValue::new(2, arith::euler_exponent_2(r, p) as i64)
}

/// The prime at which a pair invariant is evaluated.
#[derive(Clone, Debug)]
pub enum Place {
    /// An odd rational prime (`k = Q`, `l = 2`).
    Rational(u64),
    /// A prime of `Z[ω]` (`k = Q(ζ₃)`, `l = 3`).
    Eisenstein(EisensteinPrime),
}

/// `μ_l(σ_p; ij)` for branch points `a_i, a_j`: minus the exponent of the
/// `l`-th power residue symbol of `a_j - a_i` at `p`. The diagonal `a_i = a_j`
/// gives 0.
pub fn pair_milnor(
    ai: &EisensteinInt,
    aj: &EisensteinInt,
    place: &Place,
    l: u32,
) -> Result<SymbolValue> {
    if ai == aj {
        return SymbolValue::one(l);
    }
    let diff = aj - ai;
    let symbol = match (l, place) {
        (2, Place::Rational(p)) => {
            check_odd_prime(*p)?;
            if !diff.is_rational() {
                return Err(Error::PreconditionFailed(format!(
                    "{diff} is not in Q; l = 2 works over Q only"
                )));
            }
            let d = arith::reduce_big(&diff.a, *p);
            if d == 0 {
                return Err(Error::ExcludedPrime(p.to_string()));
            }
            SymbolValue::new(2, arith::euler_exponent_2(d, *p) as i64)?
        }
        (3, Place::Eisenstein(p)) => {
            if p.divides(&diff) {
                return Err(Error::ExcludedPrime(p.to_string()));
            }
            cubic_residue_symbol(&diff, p)?
        }
        (2 | 3, _) => {
            return Err(Error::PreconditionFailed(format!(
                "l = {l} needs {} places",
                if l == 2 { "rational" } else { "Eisenstein" }
            )))
        }
        _ => return Err(Error::UnsupportedOrder(l)),
    };
    Ok(symbol.inverse())
}
