//! Bounded exhaustive search for normalized solutions of
//! `x² - p₁y² - p₂z² = 0` and `x³ + π₁y³ = π₂z³`.
//!
//! Solutions are ordered by `(|z|, |y|, |x|, signs)` (norms in place of
//! absolute values over `Z[ω]`), so every search is deterministic.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::eisenstein::{cubic_residue_symbol, EisensteinInt, EisensteinPrime};
use crate::residue_symbols::legendre;
use crate::{Error, Result};

/// Non-rational solutions of the cubic form are searched over a box of at
/// most this coefficient bound.
pub const EISENSTEIN_SEARCH_CAP: u64 = 30;

/// A solution of `x² - p₁y² - p₂z² = 0` with `gcd(x, y, z) = 1`, `y` even and
/// `x - y ≡ 1 mod 4`. Determines `α = x + y√p₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedeiData {
    pub p1: u64,
    pub p2: u64,
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl RedeiData {
    /// Re-checks every normalization condition.
    pub fn verify(&self) -> Result<()> {
        let (x, y, z) = (self.x as i128, self.y as i128, self.z as i128);
        let fail = |what: &str| Err(Error::PreconditionFailed(format!("{self:?}: {what}")));
        if x * x - self.p1 as i128 * y * y - self.p2 as i128 * z * z != 0 {
            return fail("x^2 - p1 y^2 - p2 z^2 != 0");
        }
        if x.gcd(&y).gcd(&z) != 1 {
            return fail("gcd(x, y, z) != 1");
        }
        if y % 2 != 0 {
            return fail("y is odd");
        }
        if (x - y).rem_euclid(4) != 1 {
            return fail("x - y is not 1 mod 4");
        }
        Ok(())
    }

    fn key(&self) -> (u64, u64, u64, bool, bool, bool) {
        (
            self.z.unsigned_abs(),
            self.y.unsigned_abs(),
            self.x.unsigned_abs(),
            self.x < 0,
            self.y < 0,
            self.z < 0,
        )
    }
}

/// Checks `p₁ ≠ p₂`, both prime and `≡ 1 mod 4`, and `(p₁/p₂) = (p₂/p₁) = 1`.
pub fn check_redei_pair(p1: u64, p2: u64) -> Result<()> {
    if p1 == p2 {
        return Err(Error::PreconditionFailed(format!("p1 = p2 = {p1}")));
    }
    for p in [p1, p2] {
        if !arith::is_prime_u64(p) {
            return Err(Error::PreconditionFailed(format!("{p} is not prime")));
        }
        if p % 4 != 1 {
            return Err(Error::PreconditionFailed(format!("{p} is not 1 mod 4")));
        }
    }
    for (a, p) in [(p1, p2), (p2, p1)] {
        if !legendre(a as i64, p)?.is_one() {
            return Err(Error::PreconditionFailed(format!("({a}/{p}) = -1")));
        }
    }
    Ok(())
}

pub fn solve_redei(p1: u64, p2: u64, bound: u64) -> Result<RedeiData> {
    Ok(enumerate_redei(p1, p2, bound, 1)?.swap_remove(0))
}

/// The first `k` normalized solutions with `|x|, |y|, |z| ≤ bound` in the
/// solver's total order. Fewer than `k` may be returned; none is an error.
pub fn enumerate_redei(p1: u64, p2: u64, bound: u64, k: usize) -> Result<Vec<RedeiData>> {
    check_redei_pair(p1, p2)?;
    let bound = bound.min(i64::MAX as u64 / 2) as i64;
    let mut found = Vec::new();
    for z in 1..=bound {
        for y in (0..=bound).step_by(2) {
            let v = p1 as i128 * (y as i128) * (y as i128) + p2 as i128 * (z as i128) * (z as i128);
            let x = v.sqrt();
            if x * x != v || x > bound as i128 {
                continue;
            }
            let x = x as i64;
            for (sx, sy, sz) in signs3() {
                let cand = RedeiData { p1, p2, x: sx * x, y: sy * y, z: sz * z };
                if (y == 0 && sy < 0) || found.contains(&cand) {
                    continue;
                }
                if cand.verify().is_ok() {
                    found.push(cand);
                }
            }
        }
        if found.len() >= k {
            break;
        }
    }
    if found.is_empty() {
        return Err(Error::SearchExhausted(bound as u64));
    }
    found.sort_by_key(RedeiData::key);
    found.truncate(k);
    Ok(found)
}

fn signs3() -> impl Iterator<Item = (i64, i64, i64)> {
    (0..8).map(|m| {
        let s = |bit: i32| if m >> bit & 1 == 1 { -1 } else { 1 };
        (s(0), s(1), s(2))
    })
}

/// How faithfully a cubic solution was checked against the ideal
/// factorization condition on `α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormCheck {
    /// Only the content and 3-coprimality conditions were verified.
    ContentApproximation,
}

/// A solution of `x³ + π₁y³ = π₂z³` over `Z[ω]`, giving `α = x + y∛π₁` and
/// `θ = (x + ζ₃y∛π₁)(x + ζ₃²y∛π₁)²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicData {
    pub pi1: EisensteinPrime,
    pub pi2: EisensteinPrime,
    pub x: EisensteinInt,
    pub y: EisensteinInt,
    pub z: EisensteinInt,
    pub norm_check: NormCheck,
}

impl CubicData {
    pub fn verify(&self) -> Result<()> {
        let fail = |what: &str| {
            Err(Error::PreconditionFailed(format!("({}, {}, {}): {what}", self.x, self.y, self.z)))
        };
        let lhs = &self.x.pow(3) + &(self.pi1.pi() * &self.y.pow(3));
        if lhs != self.pi2.pi() * &self.z.pow(3) {
            return fail("x^3 + pi1 y^3 != pi2 z^3");
        }
        if self.z.is_zero() {
            return fail("z = 0");
        }
        if (self.z.norm() % 3u32).is_zero() {
            return fail("3 divides N(z)");
        }
        let content = self.x.content().gcd(&self.y.content()).gcd(&self.z.content());
        if !content.is_one() {
            return fail("a rational prime divides x, y and z");
        }
        Ok(())
    }

    /// `θ = θ₀ + θ₁ρ + θ₂ρ²` with `ρ = ∛π₁`.
    pub fn theta_coefficients(&self) -> [EisensteinInt; 3] {
        let w = EisensteinInt::omega();
        let w2 = w.pow(2);
        let first = [self.x.clone(), &w * &self.y];
        let second = [self.x.clone(), &w2 * &self.y];
        let mut prod = poly_mul(&first, &poly_mul(&second, &second));
        // ρ³ = π₁
        while prod.len() > 3 {
            let top = prod.pop().unwrap();
            let i = prod.len() - 3;
            prod[i] = &prod[i] + &(self.pi1.pi() * &top);
        }
        prod.resize(3, EisensteinInt::zero());
        [prod[0].clone(), prod[1].clone(), prod[2].clone()]
    }

    fn key(&self) -> impl Ord {
        (
            self.z.norm(),
            self.y.norm(),
            self.x.norm(),
            sign_key(&self.x),
            sign_key(&self.y),
            sign_key(&self.z),
        )
    }
}

fn sign_key(x: &EisensteinInt) -> (bool, BigInt, bool, BigInt) {
    (x.a.is_negative(), x.a.abs(), x.b.is_negative(), x.b.abs())
}

fn poly_mul(f: &[EisensteinInt], g: &[EisensteinInt]) -> Vec<EisensteinInt> {
    let mut out = alloc::vec![EisensteinInt::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] = &out[i + j] + &(a * b);
        }
    }
    out
}

/// Checks that `π₁, π₂` are distinct primary primes with norms `≡ 1 mod 9`
/// and trivial mutual cubic residue symbols.
pub fn check_cubic_pair(pi1: &EisensteinPrime, pi2: &EisensteinPrime) -> Result<()> {
    if pi1 == pi2 {
        return Err(Error::PreconditionFailed(format!("pi1 = pi2 = {pi1}")));
    }
    for p in [pi1, pi2] {
        if !p.is_primary() {
            return Err(Error::PreconditionFailed(format!("{p} is not primary")));
        }
        if p.norm() % 9 != 1 {
            return Err(Error::PreconditionFailed(format!("N({p}) is not 1 mod 9")));
        }
    }
    for (a, p) in [(pi1, pi2), (pi2, pi1)] {
        if !cubic_residue_symbol(a.pi(), p)?.is_one() {
            return Err(Error::PreconditionFailed(format!("({a}/{p})_3 != 1")));
        }
    }
    Ok(())
}

pub fn solve_cubic(pi1: &EisensteinPrime, pi2: &EisensteinPrime, bound: u64) -> Result<CubicData> {
    Ok(enumerate_cubic(pi1, pi2, bound, 1)?.swap_remove(0))
}

/// The first `k` solutions in the solver's order. Solutions with `x, y, z`
/// all rational come first; the remaining ones are searched with the
/// coefficient bound clamped to [`EISENSTEIN_SEARCH_CAP`].
pub fn enumerate_cubic(
    pi1: &EisensteinPrime,
    pi2: &EisensteinPrime,
    bound: u64,
    k: usize,
) -> Result<Vec<CubicData>> {
    check_cubic_pair(pi1, pi2)?;
    let make = |x: EisensteinInt, y: &EisensteinInt, z: &EisensteinInt| CubicData {
        pi1: pi1.clone(),
        pi2: pi2.clone(),
        x,
        y: y.clone(),
        z: z.clone(),
        norm_check: NormCheck::ContentApproximation,
    };
    let rhs = |y: &EisensteinInt, z: &EisensteinInt| pi2.pi() * &z.pow(3) - pi1.pi() * &y.pow(3);

    let bound_i = bound.min(i64::MAX as u64) as i64;
    let mut rational = Vec::new();
    for az in 1..=bound_i {
        for z in [az, -az].map(EisensteinInt::from_int) {
            for y in (-bound_i..=bound_i).map(EisensteinInt::from_int) {
                for x in cube_roots(&rhs(&y, &z)) {
                    if !x.is_rational() || x.a.abs() > BigInt::from(bound) {
                        continue;
                    }
                    let cand = make(x, &y, &z);
                    if cand.verify().is_ok() {
                        rational.push(cand);
                    }
                }
            }
        }
        if rational.len() >= k {
            break;
        }
    }
    rational.sort_by_key(CubicData::key);
    rational.truncate(k);
    if rational.len() >= k {
        return Ok(rational);
    }

    let cap = bound.min(EISENSTEIN_SEARCH_CAP) as i64;
    let mut box_elems: Vec<EisensteinInt> = (-cap..=cap)
        .flat_map(|a| (-cap..=cap).map(move |b| EisensteinInt::new(a, b)))
        .filter(|e| !e.is_zero())
        .collect();
    box_elems.sort_by_key(|e| (e.norm(), sign_key(e)));
    let in_box = |x: &EisensteinInt| x.a.abs() <= BigInt::from(cap) && x.b.abs() <= BigInt::from(cap);
    let mut others = Vec::new();
    let mut level: Option<BigInt> = None;
    for z in &box_elems {
        let n = z.norm();
        if level.as_ref() != Some(&n) {
            if rational.len() + others.len() >= k {
                break;
            }
            level = Some(n);
        }
        if (z.norm() % 3u32).is_zero() {
            continue;
        }
        for y in core::iter::once(EisensteinInt::zero()).chain(box_elems.iter().cloned()) {
            for x in cube_roots(&rhs(&y, z)) {
                if !in_box(&x) || (x.is_rational() && y.is_rational() && z.is_rational()) {
                    continue;
                }
                let cand = make(x, &y, z);
                if cand.verify().is_ok() {
                    others.push(cand);
                }
            }
        }
    }
    others.sort_by_key(CubicData::key);
    rational.extend(others);
    rational.truncate(k);
    if rational.is_empty() {
        return Err(Error::SearchExhausted(bound));
    }
    Ok(rational)
}

/// All `x ∈ Z[ω]` with `x³ = v`.
pub fn cube_roots(v: &EisensteinInt) -> Vec<EisensteinInt> {
    if v.is_zero() {
        return alloc::vec![EisensteinInt::zero()];
    }
    let one_root = if v.is_rational() {
        let r = v.a.cbrt();
        (&r * &r * &r == v.a).then(|| EisensteinInt::from_int(r))
    } else {
        float_cube_root(v).or_else(|| norm_cube_root(v))
    };
    match one_root {
        Some(x) => {
            let w = EisensteinInt::omega();
            let wx = &w * &x;
            let w2x = &w * &wx;
            alloc::vec![x, wx, w2x]
        }
        None => Vec::new(),
    }
}

fn float_cube_root(v: &EisensteinInt) -> Option<EisensteinInt> {
    let (a, b) = (v.a.to_f64()?, v.b.to_f64()?);
    if a.abs() > 1e15 || b.abs() > 1e15 {
        return None;
    }
    // a + bω = (a - b/2) + i b√3/2
    let sqrt3 = libm::sqrt(3.0);
    let (re, im) = (a - b / 2.0, b * sqrt3 / 2.0);
    let r = libm::cbrt(libm::sqrt(re * re + im * im));
    let t = libm::atan2(im, re) / 3.0;
    let (xr, xi) = (r * libm::cos(t), r * libm::sin(t));
    let cb = libm::round(2.0 * xi / sqrt3) as i64;
    let ca = libm::round(xr + xi / sqrt3) as i64;
    for da in -1..=1 {
        for db in -1..=1 {
            let x = EisensteinInt::new(ca + da, cb + db);
            if &x.pow(3) == v {
                return Some(x);
            }
        }
    }
    None
}

fn norm_cube_root(v: &EisensteinInt) -> Option<EisensteinInt> {
    let n = v.norm();
    let m = n.cbrt();
    if &m * &m * &m != n {
        return None;
    }
    // a² - ab + b² = m  ⇒  |b| ≤ 2√(m/3)
    let b_max = (BigInt::from(4) * &m / 3u32).sqrt() + 1u32;
    let mut b = -b_max.clone();
    while b <= b_max {
        let disc = BigInt::from(4) * &m - BigInt::from(3) * &b * &b;
        if !disc.is_negative() {
            let s = disc.sqrt();
            if &s * &s == disc {
                for a2 in [&b + &s, &b - &s] {
                    if a2.is_even() {
                        let x = EisensteinInt { a: a2 / 2u32, b: b.clone() };
                        if &x.pow(3) == v {
                            return Some(x);
                        }
                    }
                }
            }
        }
        b += 1u32;
    }
    None
}

impl core::fmt::Display for NormCheck {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            NormCheck::ContentApproximation => "content-and-3-coprimality",
        })
    }
}
