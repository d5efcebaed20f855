//! Exact arithmetic in the Eisenstein integers `Z[ω]`, `ω² = -1 - ω`.
//!
//! Primes of `Z[ω]` not above 3 are either inert (a rational prime
//! `q ≡ 2 mod 3`, residue field `F_{q²}`) or split (norm a rational prime
//! `p ≡ 1 mod 3`, residue field `F_p`). The residue field is modelled as
//! `Z[ω]/(π)` on the basis `{1, ω̄}`, which keeps the image of `ω` fixed and
//! makes the cubic residue exponent canonical.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, add_mod, mul_mod, reduce_big, sub_mod};
use crate::residue_symbols::SymbolValue;
use crate::{Error, Result};

/// `a + b ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct EisensteinInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl EisensteinInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        EisensteinInt { a: a.into(), b: b.into() }
    }

    pub fn from_int(a: impl Into<BigInt>) -> Self {
        Self::new(a, 0)
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn omega() -> Self {
        Self::new(0, 1)
    }

    /// `√-3 = ω - ω² = 1 + 2ω`.
    pub fn sqrt_minus_3() -> Self {
        Self::new(1, 2)
    }

    /// `3√-3 = 3 + 6ω`, the modulus of the primary normalization.
    pub fn primary_modulus() -> Self {
        Self::new(3, 6)
    }

    /// The six units `±1, ±ω, ±ω²`.
    pub fn units() -> [EisensteinInt; 6] {
        [
            Self::new(1, 0),
            Self::new(-1, 0),
            Self::new(0, 1),
            Self::new(0, -1),
            Self::new(-1, -1),
            Self::new(1, 1),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// `N(a + bω) = a² - ab + b²`.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    /// Complex conjugate: `a + bω̄ = (a - b) - bω`.
    pub fn conj(&self) -> Self {
        EisensteinInt { a: &self.a - &self.b, b: -&self.b }
    }

    /// `gcd(a, b)`, the largest rational integer dividing `self`.
    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b)
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &EisensteinInt) -> Option<EisensteinInt> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        let num = self * &d.conj();
        if (&num.a % &n).is_zero() && (&num.b % &n).is_zero() {
            Some(EisensteinInt { a: num.a / &n, b: num.b / n })
        } else {
            None
        }
    }

    pub fn divides(&self, x: &EisensteinInt) -> bool {
        x.div_exact(self).is_some()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `x ≡ 1 mod 3√-3`.
    pub fn is_primary(&self) -> bool {
        Self::primary_modulus().divides(&(self - &Self::one()))
    }
}

impl From<i64> for EisensteinInt {
    fn from(a: i64) -> Self {
        Self::from_int(a)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a EisensteinInt> for &'a EisensteinInt {
            type Output = EisensteinInt;
            fn $method(self, rhs: &'a EisensteinInt) -> EisensteinInt {
                let f: fn(&EisensteinInt, &EisensteinInt) -> EisensteinInt = $body;
                f(self, rhs)
            }
        }
        impl $tr<EisensteinInt> for EisensteinInt {
            type Output = EisensteinInt;
            fn $method(self, rhs: EisensteinInt) -> EisensteinInt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| EisensteinInt { a: &x.a + &y.a, b: &x.b + &y.b });
forward_binop!(Sub, sub, |x, y| EisensteinInt { a: &x.a - &y.a, b: &x.b - &y.b });
// (a + bω)(c + dω) = ac - bd + (ad + bc - bd)ω
forward_binop!(Mul, mul, |x, y| {
    let bd = &x.b * &y.b;
    EisensteinInt { a: &x.a * &y.a - &bd, b: &x.a * &y.b + &x.b * &y.a - bd }
});

impl Neg for EisensteinInt {
    type Output = EisensteinInt;
    fn neg(self) -> EisensteinInt {
        EisensteinInt { a: -self.a, b: -self.b }
    }
}

impl Neg for &EisensteinInt {
    type Output = EisensteinInt;
    fn neg(self) -> EisensteinInt {
        EisensteinInt { a: -&self.a, b: -&self.b }
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*w", self.b)
        } else if self.b.is_negative() {
            write!(f, "{}-{}*w", self.a, -&self.b)
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

impl FromStr for EisensteinInt {
    type Err = Error;

    /// Accepts `a`, `a+b*w`, `a-b*w` (spaces allowed), plus the shorthands
    /// `b*w`, `w`, `-w`, `a+w`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("invalid Eisenstein integer {s:?}"));
        if compact.is_empty() {
            return Err(bad());
        }
        let parse_int = |t: &str| -> Result<BigInt> {
            let t = t.strip_prefix('+').unwrap_or(t);
            if t.is_empty() || !t.trim_start_matches('-').bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|_| bad())
        };
        let Some(w_term) = compact.strip_suffix('w') else {
            return Ok(Self::from_int(parse_int(&compact)?));
        };
        let split = w_term
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (real, coeff) = match split {
            Some(i) => (Some(&w_term[..i]), &w_term[i..]),
            None => (None, w_term),
        };
        let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
        let b = match coeff {
            "" | "+" => BigInt::one(),
            "-" => -BigInt::one(),
            c => parse_int(c)?,
        };
        let a = match real {
            Some(r) => parse_int(r)?,
            None => BigInt::zero(),
        };
        Ok(EisensteinInt { a, b })
    }
}

/// True iff `x` is prime in `Z[ω]`: its norm is a rational prime, or it is
/// associate to a rational prime `q ≡ 2 mod 3`. Zero and units are not prime.
pub fn is_prime(x: &EisensteinInt) -> bool {
    let n = x.norm();
    if n <= BigInt::one() {
        return false;
    }
    if arith::is_prime_big(&n) {
        return true;
    }
    let q = n.sqrt();
    if &q * &q != n || !arith::is_prime_big(&q) || (&q % 3u32) != BigInt::from(2) {
        return false;
    }
    x.div_exact(&EisensteinInt::from_int(q)).is_some_and(|u| u.is_unit())
}

pub fn norm(x: &EisensteinInt) -> BigInt {
    x.norm()
}

/// The unique associate of the prime `x` congruent to 1 mod `3√-3`.
pub fn primary_associate(x: &EisensteinInt) -> Result<EisensteinInt> {
    if !is_prime(x) {
        return Err(Error::NotPrime(x.to_string()));
    }
    if (x.norm() % 3u32).is_zero() {
        return Err(Error::RamifiedPrime);
    }
    let mut found = EisensteinInt::units().into_iter().map(|u| &u * x).filter(|c| c.is_primary());
    match (found.next(), found.next()) {
        (Some(c), None) => Ok(c),
        (None, _) => Err(Error::NoPrimaryAssociate(x.to_string())),
        (Some(c), Some(d)) => Err(Error::Inconsistent(format!(
            "two primary associates {c} and {d} of {x}"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimeKind {
    /// Generated by a rational prime `q ≡ 2 mod 3`; norm `q²`.
    Inert,
    /// Norm is a rational prime `p ≡ 1 mod 3`.
    Split,
}

/// A prime of `Z[ω]` away from 3, with its residue field data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinPrime {
    pi: EisensteinInt,
    norm: u64,
    p: u64,
    kind: PrimeKind,
    /// Image of ω in `F_p` for split primes (`π | ω - r`); unused when inert.
    root: u64,
}

impl EisensteinPrime {
    /// Wraps a prime generator as given, without normalizing it.
    pub fn new(pi: EisensteinInt) -> Result<Self> {
        if !is_prime(&pi) {
            return Err(Error::NotPrime(pi.to_string()));
        }
        let n = pi.norm();
        if (&n % 3u32).is_zero() {
            return Err(Error::RamifiedPrime);
        }
        let norm = n
            .to_u64()
            .ok_or_else(|| Error::BadModulus(format!("norm of {pi} exceeds 64 bits")))?;
        if arith::is_prime_u64(norm) {
            let [s, _] = arith::sqrt_mod(norm - 3, norm).expect("-3 is a square mod p ≡ 1 (3)");
            let half = arith::inv_mod(2, norm);
            let a = reduce_big(&pi.a, norm);
            let b = reduce_big(&pi.b, norm);
            let root = [s, norm - s]
                .into_iter()
                .map(|s| mul_mod(sub_mod(s, 1, norm), half, norm))
                .find(|&r| add_mod(a, mul_mod(b, r, norm), norm) == 0)
                .expect("one root of z^2 + z + 1 is the image of ω");
            Ok(EisensteinPrime { pi, norm, p: norm, kind: PrimeKind::Split, root })
        } else {
            let p = n.sqrt().to_u64().expect("sqrt of a u64 fits");
            Ok(EisensteinPrime { pi, norm, p, kind: PrimeKind::Inert, root: 0 })
        }
    }

    /// Normalizes `x` to its primary associate first.
    pub fn primary(x: &EisensteinInt) -> Result<Self> {
        Self::new(primary_associate(x)?)
    }

    pub fn pi(&self) -> &EisensteinInt {
        &self.pi
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    /// The rational prime below.
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> PrimeKind {
        self.kind
    }

    pub fn is_primary(&self) -> bool {
        self.pi.is_primary()
    }

    /// Whether the prime ideal is generated by a rational prime.
    pub fn is_rational_generated(&self) -> bool {
        self.kind == PrimeKind::Inert
    }

    pub fn divides(&self, x: &EisensteinInt) -> bool {
        self.pi.divides(x)
    }

    pub fn residue_field(&self) -> ResidueField {
        ResidueField { p: self.p, kind: self.kind, root: self.root }
    }
}

impl fmt::Display for EisensteinPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.pi.fmt(f)
    }
}

/// `u + v ω̄` in the residue field; `v = 0` for split primes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueFieldElement {
    pub u: u64,
    pub v: u64,
}

impl ResidueFieldElement {
    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }
}

impl fmt::Display for ResidueFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v == 0 {
            write!(f, "{}", self.u)
        } else {
            write!(f, "{}+{}*wbar", self.u, self.v)
        }
    }
}

/// `Z[ω]/(π)` for a prime `π` away from 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    kind: PrimeKind,
    root: u64,
}

impl ResidueField {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        match self.kind {
            PrimeKind::Inert => self.p * self.p,
            PrimeKind::Split => self.p,
        }
    }

    pub fn zero(&self) -> ResidueFieldElement {
        ResidueFieldElement { u: 0, v: 0 }
    }

    pub fn one(&self) -> ResidueFieldElement {
        ResidueFieldElement { u: 1, v: 0 }
    }

    /// The image `ω̄` of ω, the fixed generator of `μ₃` in the field.
    pub fn omega(&self) -> ResidueFieldElement {
        match self.kind {
            PrimeKind::Inert => ResidueFieldElement { u: 0, v: 1 },
            PrimeKind::Split => ResidueFieldElement { u: self.root, v: 0 },
        }
    }

    pub fn from_u64(&self, a: u64) -> ResidueFieldElement {
        ResidueFieldElement { u: a % self.p, v: 0 }
    }

    pub fn reduce(&self, x: &EisensteinInt) -> ResidueFieldElement {
        let a = reduce_big(&x.a, self.p);
        let b = reduce_big(&x.b, self.p);
        match self.kind {
            PrimeKind::Inert => ResidueFieldElement { u: a, v: b },
            PrimeKind::Split => {
                ResidueFieldElement { u: add_mod(a, mul_mod(b, self.root, self.p), self.p), v: 0 }
            }
        }
    }

    pub fn add(&self, x: ResidueFieldElement, y: ResidueFieldElement) -> ResidueFieldElement {
        ResidueFieldElement { u: add_mod(x.u, y.u, self.p), v: add_mod(x.v, y.v, self.p) }
    }

    pub fn sub(&self, x: ResidueFieldElement, y: ResidueFieldElement) -> ResidueFieldElement {
        ResidueFieldElement { u: sub_mod(x.u, y.u, self.p), v: sub_mod(x.v, y.v, self.p) }
    }

    pub fn neg(&self, x: ResidueFieldElement) -> ResidueFieldElement {
        self.sub(self.zero(), x)
    }

    pub fn mul(&self, x: ResidueFieldElement, y: ResidueFieldElement) -> ResidueFieldElement {
        let p = self.p;
        let vv = mul_mod(x.v, y.v, p);
        ResidueFieldElement {
            u: sub_mod(mul_mod(x.u, y.u, p), vv, p),
            v: sub_mod(add_mod(mul_mod(x.u, y.v, p), mul_mod(x.v, y.u, p), p), vv, p),
        }
    }

    pub fn pow(&self, mut x: ResidueFieldElement, mut e: u64) -> ResidueFieldElement {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, x: ResidueFieldElement) -> ResidueFieldElement {
        debug_assert!(!x.is_zero());
        self.pow(x, self.order() - 2)
    }

    /// Every element, in `(u, v)` order. Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = ResidueFieldElement> + '_ {
        let vs = match self.kind {
            PrimeKind::Inert => self.p,
            PrimeKind::Split => 1,
        };
        (0..self.p).flat_map(move |u| (0..vs).map(move |v| ResidueFieldElement { u, v }))
    }

    /// `m ∈ {0, 1, 2}` with `x^((q-1)/3) = ω̄^m`, or `None` if `x = 0`.
    pub fn cubic_exponent(&self, x: ResidueFieldElement) -> Option<u8> {
        if x.is_zero() {
            return None;
        }
        let y = self.pow(x, (self.order() - 1) / 3);
        let w = self.omega();
        if y == self.one() {
            Some(0)
        } else if y == w {
            Some(1)
        } else if y == self.mul(w, w) {
            Some(2)
        } else {
            unreachable!("x^((q-1)/3) is a cube root of unity")
        }
    }

    /// All cube roots of `a` (sorted), by Adleman-Manders-Miller extraction
    /// in the 3-Sylow subgroup of `F_q^*`.
    pub fn cube_roots(&self, a: ResidueFieldElement) -> Vec<ResidueFieldElement> {
        if a.is_zero() {
            return alloc::vec![a];
        }
        if self.cubic_exponent(a) != Some(0) {
            return Vec::new();
        }
        let q1 = self.order() - 1;
        let mut s = 0u32;
        let mut t = q1;
        while t % 3 == 0 {
            t /= 3;
            s += 1;
        }
        let g = self
            .elements()
            .skip(2)
            .find(|&g| self.cubic_exponent(g).is_some_and(|e| e != 0))
            .expect("F_q^* has cubic non-residues when 3 | q - 1");
        let z = self.pow(g, t);
        let sylow = 3u64.pow(s);
        // 3m ≡ 1 (mod t)
        let m = if t == 1 { 0 } else { arith_inverse(3, t) };
        let x0 = self.pow(a, m);
        let b = self.mul(self.pow(x0, 3), self.inv(a));
        let gamma = self.pow(z, sylow / 3);
        let gamma2 = self.mul(gamma, gamma);
        let mut log = 0u64;
        for k in 0..s {
            let h = self.mul(b, self.pow(z, (sylow - log % sylow) % sylow));
            let h = self.pow(h, 3u64.pow(s - 1 - k));
            let digit = if h == self.one() {
                0
            } else if h == gamma {
                1
            } else if h == gamma2 {
                2
            } else {
                unreachable!("projection to the order-3 subgroup")
            };
            log += digit * 3u64.pow(k);
        }
        debug_assert_eq!(log % 3, 0);
        let y = self.pow(z, (sylow - (log / 3) % sylow) % sylow);
        let x = self.mul(x0, y);
        if self.pow(x, 3) != a {
            return self.cube_roots_exhaustive(a);
        }
        let w = self.omega();
        let mut roots = alloc::vec![x, self.mul(x, w), self.mul(x, self.mul(w, w))];
        roots.sort();
        roots
    }

    /// Cube roots by enumerating the field.
    pub fn cube_roots_exhaustive(&self, a: ResidueFieldElement) -> Vec<ResidueFieldElement> {
        self.elements().filter(|&x| self.pow(x, 3) == a).collect()
    }
}

fn arith_inverse(a: u64, m: u64) -> u64 {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    debug_assert_eq!(g, 1);
    x.rem_euclid(m as i128) as u64
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

pub fn reduce(x: &EisensteinInt, p: &EisensteinPrime) -> ResidueFieldElement {
    p.residue_field().reduce(x)
}

/// Exponent of `ζ₃` in the cubic residue symbol `(x/π)₃`, by Euler's
/// criterion `x^((Nπ-1)/3) ≡ ω̄^m` in the residue field.
pub fn cubic_residue_symbol(x: &EisensteinInt, p: &EisensteinPrime) -> Result<SymbolValue> {
    if p.norm() % 3 != 1 {
        return Err(Error::BadModulus(format!("norm of {p} is not 1 mod 3")));
    }
    let field = p.residue_field();
    let m = field
        .cubic_exponent(field.reduce(x))
        .ok_or_else(|| Error::DivisibleByModulus(x.to_string()))?;
    SymbolValue::new(3, m as i64)
}
