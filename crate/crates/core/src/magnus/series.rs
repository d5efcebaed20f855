use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// A multi-index `(i₁, …, i_n)` naming the monomial `X_{i₁} ⋯ X_{i_n}`.
/// Ordered by degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn new(indices: impl Into<Vec<usize>>) -> Self {
        MultiIndex(indices.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_index(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    fn extended(&self, i: usize, k: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v.extend(core::iter::repeat(i).take(k));
        MultiIndex(v)
    }

    /// Every multi-index over `1..=r` of length exactly `n`, in order.
    pub fn all_of_length(r: usize, n: usize) -> Vec<MultiIndex> {
        let mut out = alloc::vec![MultiIndex::default()];
        for _ in 0..n {
            out = out.iter().flat_map(|m| (1..=r).map(move |i| m.extended(i, 1))).collect();
        }
        out
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Parses `1,2,3` (spaces allowed); indices start at 1.
impl FromStr for MultiIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(MultiIndex::default());
        }
        s.split(',')
            .map(|t| match t.trim().parse::<usize>() {
                Ok(i) if i > 0 => Ok(i),
                _ => Err(Error::Parse(format!("invalid multi-index entry {t:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex)
    }
}

/// `C(n, k) mod l` for prime `l` and any integer `n`, via Lucas' theorem and
/// `C(-m, k) = (-1)^k C(m + k - 1, k)`.
pub fn binomial_mod(n: i64, k: u64, l: u32) -> u8 {
    let l64 = l as u64;
    let (mut top, sign) = if n >= 0 {
        (n as u64, 1i64)
    } else {
        (n.unsigned_abs() + k - 1, if k % 2 == 0 { 1 } else { -1 })
    };
    let mut bottom = k;
    let mut acc: u64 = 1;
    while bottom > 0 || top > 0 {
        let (t, b) = (top % l64, bottom % l64);
        if b > t {
            return 0;
        }
        acc = acc * small_binomial(t, b) % l64;
        top /= l64;
        bottom /= l64;
    }
    (sign * acc as i64).rem_euclid(l as i64) as u8
}

fn small_binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

/// An element of `F_l⟨⟨X₁, …, X_r⟩⟩` truncated above degree `d`; only
/// nonzero coefficients are stored, the constant term under the empty index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    l: u32,
    r: usize,
    d: usize,
    coeffs: BTreeMap<MultiIndex, u8>,
}

impl TruncatedSeries {
    pub fn zero(l: u32, r: usize, d: usize) -> Self {
        TruncatedSeries { l, r, d, coeffs: BTreeMap::new() }
    }

    pub fn one(l: u32, r: usize, d: usize) -> Self {
        let mut s = Self::zero(l, r, d);
        s.coeffs.insert(MultiIndex::default(), 1);
        s
    }

    /// `(1 + X_i)^n`.
    pub fn generator_power(l: u32, r: usize, d: usize, i: usize, n: i64) -> Self {
        Self::one(l, r, d).mul_generator_power(i, n)
    }

    pub fn modulus(&self) -> u32 {
        self.l
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn truncation(&self) -> usize {
        self.d
    }

    pub fn coefficient(&self, index: &MultiIndex) -> u8 {
        self.coeffs.get(index).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, u8)> {
        self.coeffs.iter().map(|(k, &v)| (k, v))
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coefficient(&MultiIndex::default()) == 1
    }

    /// Smallest degree of a nonzero term of `self - 1`, if any.
    pub fn deviation_degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .find(|(k, &v)| !(k.is_empty() && v == 1))
            .map(|(k, _)| k.len())
            .or_else(|| (!self.coeffs.contains_key(&MultiIndex::default())).then_some(0))
    }

    fn add_term(map: &mut BTreeMap<MultiIndex, u8>, key: MultiIndex, c: u8, l: u32) {
        let entry = map.entry(key).or_insert(0);
        *entry = ((*entry as u32 + c as u32) % l) as u8;
    }

    fn settle(mut map: BTreeMap<MultiIndex, u8>) -> BTreeMap<MultiIndex, u8> {
        map.retain(|_, v| *v != 0);
        map
    }

    /// `self · (1 + X_i)^n`, truncated.
    pub fn mul_generator_power(&self, i: usize, n: i64) -> Self {
        let ks: Vec<(usize, u8)> =
            (0..=self.d).map(|k| (k, binomial_mod(n, k as u64, self.l))).filter(|&(_, c)| c != 0).collect();
        let mut out = BTreeMap::new();
        for (key, &c) in &self.coeffs {
            for &(k, b) in &ks {
                if key.len() + k > self.d {
                    break;
                }
                let prod = (c as u32 * b as u32 % self.l) as u8;
                Self::add_term(&mut out, key.extended(i, k), prod, self.l);
            }
        }
        TruncatedSeries { l: self.l, r: self.r.max(i), d: self.d, coeffs: Self::settle(out) }
    }

    /// Truncated product; both factors must share `l` and `d`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = BTreeMap::new();
        for (a, &x) in &self.coeffs {
            for (b, &y) in &other.coeffs {
                if a.len() + b.len() > self.d {
                    // other's keys are graded, so later keys are longer
                    break;
                }
                let mut key = a.0.clone();
                key.extend_from_slice(&b.0);
                Self::add_term(&mut out, MultiIndex(key), (x as u32 * y as u32 % self.l) as u8, self.l);
            }
        }
        Ok(TruncatedSeries { l: self.l, r: self.r.max(other.r), d: self.d, coeffs: Self::settle(out) })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.coeffs.clone();
        for (k, &v) in &other.coeffs {
            Self::add_term(&mut out, k.clone(), v, self.l);
        }
        Ok(TruncatedSeries { l: self.l, r: self.r.max(other.r), d: self.d, coeffs: Self::settle(out) })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.l != other.l {
            return Err(Error::MismatchedOrder(self.l, other.l));
        }
        if self.d != other.d {
            return Err(Error::InconsistentShape(format!(
                "truncation degrees {} and {} differ",
                self.d, other.d
            )));
        }
        Ok(())
    }
}

/// Graded order, e.g. `1 + X1X2 + 2*X2X1`.
impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (n, (key, &c)) in self.coeffs.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            match (key.is_empty(), c) {
                (true, _) => write!(f, "{c}")?,
                (false, 1) => {}
                (false, _) => write!(f, "{c}*")?,
            }
            for i in &key.0 {
                write!(f, "X{i}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn exact_binomial(n: i64, k: u64) -> i128 {
        // product formula valid for all integer n
        let mut num: i128 = 1;
        let mut den: i128 = 1;
        for j in 0..k as i128 {
            num *= n as i128 - j;
            den *= j + 1;
        }
        num / den
    }

    #[test]
    fn binomials_agree_with_exact_values() {
        for l in [2u32, 3] {
            for n in -40i64..=40 {
                for k in 0..=12u64 {
                    let want = exact_binomial(n, k).rem_euclid(l as i128) as u8;
                    assert_eq!(binomial_mod(n, k, l), want, "C({n},{k}) mod {l}");
                }
            }
        }
        assert_eq!(binomial_mod(5040, 1, 3), 0);
        assert_eq!(binomial_mod(-1, 7, 2), 1);
    }

    #[test]
    fn multi_index_order_and_parsing() {
        let a: MultiIndex = "2".parse().unwrap();
        let b: MultiIndex = "1, 1".parse().unwrap();
        let c: MultiIndex = "1,2".parse().unwrap();
        assert!(a < b && b < c);
        assert_eq!(c.to_string(), "1,2");
        assert!("1,0".parse::<MultiIndex>().is_err());
        assert!("a".parse::<MultiIndex>().is_err());
        assert_eq!(MultiIndex::all_of_length(3, 2).len(), 9);
    }

    #[test]
    fn generator_inverse_is_alternating_series() {
        let s = TruncatedSeries::generator_power(3, 1, 5, 1, -1);
        for k in 0..=5 {
            let want = if k % 2 == 0 { 1 } else { 2 };
            assert_eq!(s.coefficient(&MultiIndex(alloc::vec![1; k])), want);
        }
        let t = TruncatedSeries::generator_power(3, 1, 5, 1, 1);
        assert!(s.mul(&t).unwrap().is_one());
    }

    #[test]
    fn display_is_graded() {
        let x = TruncatedSeries::generator_power(3, 2, 2, 1, 1);
        let y = TruncatedSeries::generator_power(3, 2, 2, 2, 2);
        assert_eq!(x.mul(&y).unwrap().to_string(), "1 + X1 + 2*X2 + 2*X1X2 + X2X2");
        assert_eq!(TruncatedSeries::zero(2, 1, 1).to_string(), "0");
        assert_eq!(TruncatedSeries::one(2, 1, 3).deviation_degree(), None);
        assert_eq!(x.deviation_degree(), Some(1));
        assert!(x.mul(&TruncatedSeries::one(2, 1, 2)).is_err());
        assert!(x.mul(&TruncatedSeries::one(3, 1, 3)).is_err());
    }
}
