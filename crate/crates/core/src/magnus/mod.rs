//! Mod-`l` Magnus expansion of free-group words, Milnor invariants read off
//! from its coefficients, and the Zassenhaus filtration it detects.

mod series;
mod word;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

pub use series::{binomial_mod, MultiIndex, TruncatedSeries};
pub use word::FreeWord;

use crate::{Error, Result};

fn check_l(l: u32) -> Result<()> {
    if l == 2 || l == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder(l))
    }
}

/// `Θ(w)` in `F_l⟨⟨X₁, …, X_r⟩⟩` modulo degree `> d`, with `x_i ↦ 1 + X_i`.
/// The rank is raised to the word's own rank if that is larger.
pub fn expand(w: &FreeWord, l: u32, r: usize, d: usize) -> Result<TruncatedSeries> {
    check_l(l)?;
    let mut s = TruncatedSeries::one(l, r.max(w.rank()), d);
    for &(i, e) in w.letters() {
        s = s.mul_generator_power(i, e);
    }
    Ok(s)
}

/// The coefficient `μ(I; w)` of `X_I` in `Θ(w)`.
pub fn mu(index: &MultiIndex, w: &FreeWord, l: u32) -> Result<u8> {
    let s = expand(w, l, index.max_index(), index.len())?;
    Ok(s.coefficient(index))
}

/// `μ(i₁ ⋯ i_n)` of a link (or prime set) with longitudes `λ_j`: the
/// coefficient of `X_{i₁} ⋯ X_{i_{n-1}}` in `Θ(λ_{i_n})`. Length one gives 0.
pub fn milnor_of_element(longitudes: &[FreeWord], index: &MultiIndex, l: u32) -> Result<u8> {
    check_l(l)?;
    let r = longitudes.len();
    if index.is_empty() {
        return Err(Error::PreconditionFailed("empty multi-index".into()));
    }
    if let Some(&bad) = index.0.iter().find(|&&i| i == 0 || i > r) {
        return Err(Error::IndexOutOfRange { index: bad, max: r });
    }
    if let Some(w) = longitudes.iter().find(|w| w.rank() > r) {
        return Err(Error::InconsistentShape(format!(
            "longitude {w} uses more than {r} generators ({})",
            word::describe(longitudes)
        )));
    }
    if index.len() == 1 {
        return Ok(0);
    }
    let (last, head) = index.0.split_last().expect("nonempty");
    let head = MultiIndex(head.to_vec());
    let s = expand(&longitudes[last - 1], l, r, head.len())?;
    Ok(s.coefficient(&head))
}

/// Position of a word in the mod-`l` Zassenhaus filtration, as far as a
/// truncation at degree `d` can tell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZassenhausDegree {
    /// `w ∈ F_(n) \ F_(n+1)`.
    Exact(usize),
    /// `w ∈ F_(n)`; the expansion agrees with 1 up to the truncation.
    AtLeast(usize),
}

impl ZassenhausDegree {
    /// Whether `w ∈ F_(n)` is established.
    pub fn at_least(self, n: usize) -> bool {
        match self {
            ZassenhausDegree::Exact(m) | ZassenhausDegree::AtLeast(m) => m >= n,
        }
    }
}

impl fmt::Display for ZassenhausDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZassenhausDegree::Exact(n) => write!(f, "{n}"),
            ZassenhausDegree::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

/// Largest `n ≤ d + 1` with `w ∈ F_(n)`, using `Θ(w) - 1 ∈ (X)^n`.
pub fn zassenhaus_degree(w: &FreeWord, l: u32, d: usize) -> Result<ZassenhausDegree> {
    let s = expand(w, l, w.rank(), d)?;
    Ok(match s.deviation_degree() {
        Some(n) => ZassenhausDegree::Exact(n),
        None => ZassenhausDegree::AtLeast(d + 1),
    })
}

/// Normal form of `w ∈ F_(2)` modulo `F_(3)`:
/// `∏ x_i^{l·e_ii} ∏_{i<j} [x_i, x_j]^{e_ij}`. For `l = 3` the diagonal is
/// always zero since cubes already lie in `F_(3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm2 {
    l: u32,
    r: usize,
    diagonal: Vec<u8>,
    pairs: BTreeMap<(usize, usize), u8>,
}

impl NormalForm2 {
    pub fn modulus(&self) -> u32 {
        self.l
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// `e_ij` for `1 ≤ i ≤ j ≤ r`.
    pub fn exponent(&self, i: usize, j: usize) -> Result<u8> {
        for k in [i, j] {
            if k == 0 || k > self.r {
                return Err(Error::IndexOutOfRange { index: k, max: self.r });
            }
        }
        Ok(match i.cmp(&j) {
            core::cmp::Ordering::Equal => self.diagonal[i - 1],
            core::cmp::Ordering::Less => self.pairs.get(&(i, j)).copied().unwrap_or(0),
            core::cmp::Ordering::Greater => {
                return Err(Error::PreconditionFailed(format!("exponent e_{i}{j} needs i <= j")))
            }
        })
    }

    /// The representative word.
    pub fn to_word(&self) -> FreeWord {
        let mut w = FreeWord::identity(self.r);
        for (k, &e) in self.diagonal.iter().enumerate() {
            let x = FreeWord::generator(self.r, k + 1).expect("in range");
            w = w.mul(&x.pow(self.l as i64 * e as i64));
        }
        for (&(i, j), &e) in &self.pairs {
            let xi = FreeWord::generator(self.r, i).expect("in range");
            let xj = FreeWord::generator(self.r, j).expect("in range");
            w = w.mul(&FreeWord::commutator(&xi, &xj).pow(e as i64));
        }
        w
    }
}

/// Parseable word form, e.g. `x1^2 [x1,x3]`.
impl fmt::Display for NormalForm2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, &e) in self.diagonal.iter().enumerate() {
            if e != 0 {
                parts.push(format!("x{}^{}", k + 1, self.l as u64 * e as u64));
            }
        }
        for (&(i, j), &e) in &self.pairs {
            parts.push(if e == 1 { format!("[x{i},x{j}]") } else { format!("[x{i},x{j}]^{e}") });
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Reads `e_ij` off the degree-2 part of `Θ(w)`: for `l = 2` the coefficient
/// of `X_jX_i` is `e_ij`, for `l = 3` it is `-e_ij`.
pub fn normal_form_deg2(w: &FreeWord, l: u32, r: usize) -> Result<NormalForm2> {
    let r = r.max(w.rank());
    let s = expand(w, l, r, 2)?;
    if s.terms().any(|(k, _)| k.len() == 1) {
        return Err(Error::NotInF2);
    }
    let c = |i: usize, j: usize| s.coefficient(&MultiIndex(alloc::vec![i, j]));
    let mut diagonal = alloc::vec![0u8; r];
    let mut pairs = BTreeMap::new();
    for i in 1..=r {
        if l == 2 {
            diagonal[i - 1] = c(i, i);
        } else if c(i, i) != 0 {
            return Err(Error::InconsistentShape(format!("X{i}X{i} has coefficient {}", c(i, i))));
        }
        for j in i + 1..=r {
            let (ij, ji) = (c(i, j), c(j, i));
            if (ij as u32 + ji as u32) % l != 0 {
                return Err(Error::InconsistentShape(format!(
                    "X{i}X{j} and X{j}X{i} have coefficients {ij} and {ji}"
                )));
            }
            let e = if l == 2 { ji } else { ij };
            if e != 0 {
                pairs.insert((i, j), e);
            }
        }
    }
    Ok(NormalForm2 { l, r, diagonal, pairs })
}

/// The local relator `x^{N-1} [x, y]` (tame inertia `x`, Frobenius `y`, `N`
/// the norm of the prime).
pub fn local_relator(x: &FreeWord, y: &FreeWord, norm_minus_one: i64) -> FreeWord {
    x.pow(norm_minus_one).mul(&FreeWord::commutator(x, y))
}

/// Filtration degree of the local relator; the relation holds mod `F_(d+1)`
/// when the result is `AtLeast(d + 1)`.
pub fn check_local_relation(
    x: &FreeWord,
    y: &FreeWord,
    norm_minus_one: i64,
    l: u32,
    d: usize,
) -> Result<ZassenhausDegree> {
    zassenhaus_degree(&local_relator(x, y, norm_minus_one), l, d)
}
