use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::eisenstein::EisensteinInt;
use crate::{Error, Result};

/// `a + bω` with rational `a, b` and `ω² + ω + 1 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QOmega {
    pub a: BigRational,
    pub b: BigRational,
}

impl QOmega {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QOmega { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        QOmega { a: BigRational::from_integer(n.into()), b: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn omega() -> Self {
        QOmega { a: BigRational::zero(), b: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn conj(&self) -> Self {
        QOmega { a: &self.a - &self.b, b: -&self.b }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(QOmega { a: c.a / &n, b: c.b / n })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QOmega::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The Eisenstein integer equal to `self`, if both parts are integral.
    pub fn to_eisenstein(&self) -> Option<EisensteinInt> {
        (self.a.is_integer() && self.b.is_integer())
            .then(|| EisensteinInt::new(self.a.to_integer(), self.b.to_integer()))
    }
}

impl From<&EisensteinInt> for QOmega {
    fn from(x: &EisensteinInt) -> Self {
        QOmega { a: BigRational::from_integer(x.a.clone()), b: BigRational::from_integer(x.b.clone()) }
    }
}

impl<'a> Add<&'a QOmega> for &'a QOmega {
    type Output = QOmega;
    fn add(self, o: &QOmega) -> QOmega {
        QOmega { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl<'a> Sub<&'a QOmega> for &'a QOmega {
    type Output = QOmega;
    fn sub(self, o: &QOmega) -> QOmega {
        QOmega { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl<'a> Mul<&'a QOmega> for &'a QOmega {
    type Output = QOmega;
    fn mul(self, o: &QOmega) -> QOmega {
        let bd = &self.b * &o.b;
        QOmega { a: &self.a * &o.a - &bd, b: &self.a * &o.b + &self.b * &o.a - bd }
    }
}

impl Neg for &QOmega {
    type Output = QOmega;
    fn neg(self) -> QOmega {
        QOmega { a: -&self.a, b: -&self.b }
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// `3`, `1/2`, `2+w`, `-1/3*w`.
impl fmt::Display for QOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write_rational(f, &self.a);
        }
        if !self.a.is_zero() {
            write_rational(f, &self.a)?;
            if self.b.is_positive() {
                f.write_str("+")?;
            }
        }
        if self.b == -BigRational::one() {
            f.write_str("-")?;
        } else if !self.b.is_one() {
            write_rational(f, &self.b)?;
            f.write_str("*")?;
        }
        f.write_str("w")
    }
}

/// Accepts an Eisenstein integer (`2+w`) or a rational (`3/4`).
impl FromStr for QOmega {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if let Ok(x) = s.parse::<EisensteinInt>() {
            return Ok(QOmega::from(&x));
        }
        s.trim()
            .parse::<BigRational>()
            .map(|a| QOmega { a, b: BigRational::zero() })
            .map_err(|_| Error::Parse(format!("invalid constant {s:?}")))
    }
}

/// Dense univariate polynomial over `Q(ω)`, lowest degree first, no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(Vec<QOmega>);

impl Poly {
    pub fn new(mut coeffs: Vec<QOmega>) -> Self {
        while coeffs.last().is_some_and(QOmega::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: QOmega) -> Self {
        Poly::new(vec![c])
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Poly::new(vec![QOmega::zero(), QOmega::one()])
    }

    pub fn coeffs(&self) -> &[QOmega] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> Option<&QOmega> {
        self.0.last()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let zero = QOmega::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&zero) + o.0.get(i).unwrap_or(&zero)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &QOmega) -> Poly {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![QOmega::zero(); self.0.len() + o.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            for (j, y) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dl = d.lead().expect("division by the zero polynomial").inv().expect("nonzero");
        let dd = d.0.len() - 1;
        let mut rem = self.0.clone();
        let mut quot = vec![QOmega::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let q = rem.last().expect("nonempty") * &dl;
            for (j, c) in d.0.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&q * c);
            }
            quot[k] = q;
            rem.pop();
            while rem.last().is_some_and(QOmega::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) => self.scale(&l.inv().expect("nonzero")),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &QOmega) -> QOmega {
        self.0.iter().rev().fold(QOmega::zero(), |acc, c| &(&acc * x) + c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                _ => {
                    if !c.is_one() {
                        write!(f, "({c})*")?;
                    }
                    if i == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// A rational function in `t` over `Q(ω)`, kept in lowest terms with a monic
/// denominator so that equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseFunction {
    num: Poly,
    den: Poly,
}

impl BaseFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::PreconditionFailed("zero denominator".into()));
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return BaseFunction { num, den: Poly::constant(QOmega::one()) };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) { (num, den) } else { (num.divrem(&g).0, den.divrem(&g).0) };
        if let Some(l) = den.lead().cloned() {
            if !l.is_one() {
                let li = l.inv().expect("nonzero");
                num = num.scale(&li);
                den = den.scale(&li);
            }
        }
        BaseFunction { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        BaseFunction { num: p, den: Poly::constant(QOmega::one()) }
    }

    pub fn constant(c: QOmega) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::constant(QOmega::one())
    }

    pub fn t() -> Self {
        Self::from_poly(Poly::t())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value, if `self` does not depend on `t`.
    pub fn as_constant(&self) -> Option<QOmega> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(QOmega::zero()),
            (Some(0), Some(0)) => Some(self.num.coeffs()[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::canonical(self.num.add(&o.num), self.den.clone());
        }
        Self::canonical(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> Self {
        BaseFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::canonical(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, c: &QOmega) -> Self {
        Self::canonical(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::canonical(self.den.clone(), self.num.clone()))
    }

    /// Value at `t = x`, or `None` at a pole.
    pub fn eval(&self, x: &QOmega) -> Option<QOmega> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| &self.num.eval(x) * &d.inv().expect("nonzero"))
    }
}

impl fmt::Display for BaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Integer helper for tests and callers building constants.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
