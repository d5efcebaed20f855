//! The Rédei symbol `[p₁, p₂, p₃]` and the triple cubic residue symbol
//! `[𝔭₁, 𝔭₂, 𝔭₃]₃`, read as mod `l` triple Milnor invariants.
//!
//! Under the pairwise hypotheses `p₃` splits completely in `K = k(√p₁, √p₂)`
//! (resp. `k(∛π₁, ∛π₂)`), so the Frobenius of a prime above it acts on
//! `√α` (resp. `∛θ`) through the power residue character of the image of
//! `α` (resp. `θ`) under an embedding `K → F_q`. Each embedding is fixed by
//! a root of `p₁` (resp. `π₁`) in `F_q`; every root gives a witness and all
//! witnesses must agree.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arith::{self, add_mod, mul_mod, reduce_i64};
use crate::eisenstein::{cubic_residue_symbol, EisensteinInt, EisensteinPrime, ResidueFieldElement};
use crate::form_solver::{self, CubicData, RedeiData};
use crate::residue_symbols::{legendre, pair_milnor, Place, SymbolValue};
use crate::{Error, Result};

/// How many leading solutions are tried when none is supplied and the
/// first ones share a factor with the third prime.
const SOLUTION_CANDIDATES: usize = 16;

/// One residue-field embedding: the chosen root and the raw Euler exponent
/// of `α` (resp. `θ`) under it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub root: ResidueFieldElement,
    pub exponent: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Redei(RedeiData),
    Cubic(CubicData),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSymbolReport {
    pub value: SymbolValue,
    pub witnesses: Vec<Witness>,
    pub solution: Solution,
    /// `μ_l(123)`.
    pub milnor: u8,
    /// `μ_l(σ_{p₃}; 123)`.
    pub frobenius_milnor: u8,
    /// `μ_l(σ_{p₃}; ij)` for the branch points `0, c^l, t₀` of the
    /// specialization; all zero for admissible inputs.
    pub pair_invariants: Vec<(usize, usize, u8)>,
    pub warnings: Vec<String>,
}

impl TripleSymbolReport {
    pub fn l(&self) -> u32 {
        self.value.l()
    }
}

/// `(μ_l(123), μ_l(σ; 123))` from the symbol value: equal for `l = 2`,
/// opposite for `l = 3`.
pub fn milnor_from_symbol(value: SymbolValue) -> (u8, u8) {
    let e = value.exponent();
    match value.l() {
        2 => (e, e),
        _ => (e, value.inverse().exponent()),
    }
}

fn check_redei_third(p1: u64, p2: u64, p3: u64) -> Result<()> {
    form_solver::check_redei_pair(p1, p2)?;
    if p3 == p1 || p3 == p2 {
        return Err(Error::PreconditionFailed(format!("p3 = {p3} repeats p1 or p2")));
    }
    if !arith::is_prime_u64(p3) || p3 % 4 != 1 {
        return Err(Error::PreconditionFailed(format!("{p3} is not a prime 1 mod 4")));
    }
    for (a, p) in [(p1, p3), (p3, p1), (p2, p3), (p3, p2)] {
        if !legendre(a as i64, p)?.is_one() {
            return Err(Error::PreconditionFailed(format!("({a}/{p}) = -1")));
        }
    }
    Ok(())
}

fn redei_admissible(s: &RedeiData, p3: u64) -> bool {
    [s.x, s.y, s.z].iter().all(|&v| reduce_i64(v, p3) != 0)
}

/// `μ₂(σ_{p₃}; ij)` on the points `a₁ = 0, a₂ = x², a₃ = p₁y²`.
fn redei_pair_invariants(s: &RedeiData, p3: u64) -> Result<Vec<(usize, usize, u8)>> {
    let x = EisensteinInt::from_int(s.x);
    let y = EisensteinInt::from_int(s.y);
    let points = [EisensteinInt::zero(), &x * &x, &(&y * &y) * &EisensteinInt::from_int(s.p1 as i64)];
    pair_table(&points, &Place::Rational(p3), 2)
}

fn pair_table(points: &[EisensteinInt; 3], place: &Place, l: u32) -> Result<Vec<(usize, usize, u8)>> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let mu = pair_milnor(&points[i], &points[j], place, l)?;
            if !mu.is_one() {
                return Err(Error::Inconsistent(format!(
                    "pair invariant mu({}{}) = {} under admissible hypotheses",
                    i + 1,
                    j + 1,
                    mu.exponent()
                )));
            }
            out.push((i + 1, j + 1, mu.exponent()));
        }
    }
    Ok(out)
}

/// The Rédei symbol of `p₁, p₂, p₃`. Without a supplied solution the first
/// solution (in solver order, within `bound`) coprime to `p₃` is used.
pub fn redei_symbol(
    p1: u64,
    p2: u64,
    p3: u64,
    solution: Option<&RedeiData>,
    bound: u64,
) -> Result<TripleSymbolReport> {
    check_redei_third(p1, p2, p3)?;
    let sol = match solution {
        Some(s) => {
            if (s.p1, s.p2) != (p1, p2) {
                return Err(Error::PreconditionFailed(format!(
                    "solution is for ({}, {}), not ({p1}, {p2})",
                    s.p1, s.p2
                )));
            }
            s.verify()?;
            if !redei_admissible(s, p3) {
                return Err(Error::PreconditionFailed(format!("{p3} divides x*y*z")));
            }
            s.clone()
        }
        None => first_admissible(
            |k| form_solver::enumerate_redei(p1, p2, bound, k),
            |s| redei_admissible(s, p3),
            || format!("{p3}"),
        )?,
    };
    let pair_invariants = redei_pair_invariants(&sol, p3)?;

    let roots = arith::sqrt_mod(p1, p3).expect("(p1/p3) = 1 was checked");
    let mut witnesses = Vec::new();
    for s in roots {
        let alpha = add_mod(reduce_i64(sol.x, p3), mul_mod(s, reduce_i64(sol.y, p3), p3), p3);
        if alpha == 0 {
            continue;
        }
        witnesses.push(Witness {
            root: ResidueFieldElement { u: s, v: 0 },
            exponent: arith::euler_exponent_2(alpha, p3),
        });
    }
    let e = agree(&witnesses, || format!("[{p1}, {p2}, {p3}]"))?;
    let value = SymbolValue::new(2, e as i64)?;
    let (milnor, frobenius_milnor) = milnor_from_symbol(value);
    Ok(TripleSymbolReport {
        value,
        witnesses,
        solution: Solution::Redei(sol),
        milnor,
        frobenius_milnor,
        pair_invariants,
        warnings: Vec::new(),
    })
}

/// The first solution in solver order passing `ok`. The solvers scan by
/// `|z|` level, so asking for one solution first avoids sweeping the whole
/// box when it already qualifies.
fn first_admissible<T>(
    enumerate: impl Fn(usize) -> Result<Vec<T>>,
    ok: impl Fn(&T) -> bool,
    name: impl Fn() -> String,
) -> Result<T> {
    for k in [1, SOLUTION_CANDIDATES] {
        let sols = enumerate(k)?;
        let exhausted = sols.len() < k;
        if let Some(s) = sols.into_iter().find(&ok) {
            return Ok(s);
        }
        if exhausted {
            break;
        }
    }
    Err(Error::PreconditionFailed(format!("{} divides x*y*z for every candidate solution", name())))
}

fn agree(witnesses: &[Witness], name: impl Fn() -> String) -> Result<u8> {
    let first = witnesses
        .first()
        .ok_or_else(|| Error::DegeneratePrime(format!("every embedding vanishes for {}", name())))?;
    if witnesses.iter().any(|w| w.exponent != first.exponent) {
        return Err(Error::Inconsistent(format!("witnesses for {} disagree: {witnesses:?}", name())));
    }
    Ok(first.exponent)
}

fn check_cubic_third(pi1: &EisensteinPrime, pi2: &EisensteinPrime, pi3: &EisensteinPrime) -> Result<()> {
    form_solver::check_cubic_pair(pi1, pi2)?;
    if pi3 == pi1 || pi3 == pi2 {
        return Err(Error::PreconditionFailed(format!("pi3 = {pi3} repeats pi1 or pi2")));
    }
    if !pi3.is_primary() || pi3.norm() % 9 != 1 {
        return Err(Error::PreconditionFailed(format!("{pi3} is not primary with norm 1 mod 9")));
    }
    for (a, p) in [(pi1, pi3), (pi3, pi1), (pi2, pi3), (pi3, pi2)] {
        if !cubic_residue_symbol(a.pi(), p)?.is_one() {
            return Err(Error::PreconditionFailed(format!("({a}/{p})_3 != 1")));
        }
    }
    Ok(())
}

fn cubic_admissible(s: &CubicData, pi3: &EisensteinPrime) -> bool {
    [&s.x, &s.y, &s.z].iter().all(|v| !pi3.divides(v))
}

/// `μ₃(σ_{𝔭₃}; ij)` on the points `a₁ = 0, a₂ = x³, a₃ = -π₁y³`.
fn cubic_pair_invariants(s: &CubicData, pi3: &EisensteinPrime) -> Result<Vec<(usize, usize, u8)>> {
    let points = [EisensteinInt::zero(), s.x.pow(3), -(s.pi1.pi() * &s.y.pow(3))];
    pair_table(&points, &Place::Eisenstein(pi3.clone()), 3)
}

/// The triple cubic residue symbol of primary primes `π₁, π₂, π₃`.
///
/// The raw witness exponent `e` is the Euler exponent of `θ` at `π₃`; the
/// symbol value is `ζ₃^{-e}`, so that `μ₃(σ; 123) = e` and `μ₃(123) = -e`.
pub fn cubic_triple_symbol(
    pi1: &EisensteinPrime,
    pi2: &EisensteinPrime,
    pi3: &EisensteinPrime,
    solution: Option<&CubicData>,
    bound: u64,
) -> Result<TripleSymbolReport> {
    check_cubic_third(pi1, pi2, pi3)?;
    let mut warnings = Vec::new();
    for p in [pi1, pi2] {
        if !p.is_rational_generated() {
            warnings.push(format!("{p} is not generated by a rational prime"));
        }
    }
    let sol = match solution {
        Some(s) => {
            if (&s.pi1, &s.pi2) != (pi1, pi2) {
                return Err(Error::PreconditionFailed("solution is for a different pair".into()));
            }
            s.verify()?;
            if !cubic_admissible(s, pi3) {
                return Err(Error::PreconditionFailed(format!("{pi3} divides x*y*z")));
            }
            s.clone()
        }
        None => first_admissible(
            |k| form_solver::enumerate_cubic(pi1, pi2, bound, k),
            |s| cubic_admissible(s, pi3),
            || format!("{pi3}"),
        )?,
    };
    let pair_invariants = cubic_pair_invariants(&sol, pi3)?;

    let field = pi3.residue_field();
    let roots = field.cube_roots(field.reduce(pi1.pi()));
    if roots.is_empty() {
        return Err(Error::NoCubeRoot(format!("{pi1} mod {pi3}")));
    }
    let (x, y) = (field.reduce(&sol.x), field.reduce(&sol.y));
    let w = field.omega();
    let w2 = field.mul(w, w);
    let mut witnesses = Vec::new();
    for &c in &roots {
        let yc = field.mul(y, c);
        let first = field.add(x, field.mul(w, yc));
        let second = field.add(x, field.mul(w2, yc));
        let theta = field.mul(first, field.mul(second, second));
        if let Some(e) = field.cubic_exponent(theta) {
            witnesses.push(Witness { root: c, exponent: e });
        }
    }
    let e = agree(&witnesses, || format!("[{pi1}, {pi2}, {pi3}]_3"))?;
    let value = SymbolValue::new(3, -(e as i64))?;
    let (milnor, frobenius_milnor) = milnor_from_symbol(value);
    debug_assert_eq!(frobenius_milnor, e);
    Ok(TripleSymbolReport {
        value,
        witnesses,
        solution: Solution::Cubic(sol),
        milnor,
        frobenius_milnor,
        pair_invariants,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(a: i64) -> EisensteinPrime {
        EisensteinPrime::primary(&EisensteinInt::from_int(a)).unwrap()
    }

    fn primes_1_mod_4(limit: u64) -> Vec<u64> {
        (5..limit).filter(|&p| p % 4 == 1 && arith::is_prime_u64(p)).collect()
    }

    // Decides squareness by listing all squares mod p.
    fn is_square_oracle(a: u64, p: u64) -> bool {
        (1..p).any(|x| x * x % p == a % p)
    }

    #[test]
    fn example_table_cubic() {
        let (p1, p2) = (prime(-17), prime(-53));
        let expected = [(71, 1u8, 2u8), (89, 2, 1), (107, 1, 2), (179, 2, 1), (197, 2, 1)];
        for (q, frob, mu) in expected {
            let r = cubic_triple_symbol(&p1, &p2, &prime(-q), None, 10).unwrap();
            assert_eq!((r.frobenius_milnor, r.milnor), (frob, mu), "pi3 = -{q}");
            assert_eq!(r.value.exponent(), mu);
            assert_eq!(r.witnesses.len(), 3);
            assert!(r.witnesses.iter().all(|w| w.exponent == frob));
            assert!(r.warnings.is_empty());
            assert!(r.pair_invariants.iter().all(|&(_, _, m)| m == 0));
        }
    }

    #[test]
    fn milnor_from_symbol_conventions() {
        assert_eq!(milnor_from_symbol(SymbolValue::new(2, 0).unwrap()), (0, 0));
        assert_eq!(milnor_from_symbol(SymbolValue::new(2, 1).unwrap()), (1, 1));
        assert_eq!(milnor_from_symbol(SymbolValue::new(3, 2).unwrap()), (2, 1));
        assert_eq!(milnor_from_symbol(SymbolValue::new(3, 1).unwrap()), (1, 2));
    }

    #[test]
    fn redei_against_square_oracle() {
        let (p1, p2) = (5u64, 29u64);
        let sol = form_solver::solve_redei(p1, p2, 50).unwrap();
        let thirds: Vec<u64> = primes_1_mod_4(2000)
            .into_iter()
            .filter(|&p| p != p1 && p != p2)
            .filter(|&p| legendre(p1 as i64, p).unwrap().is_one() && legendre(p2 as i64, p).unwrap().is_one())
            .filter(|&p| redei_admissible(&sol, p))
            .take(3)
            .collect();
        assert_eq!(thirds.len(), 3);
        for p3 in thirds {
            let r = redei_symbol(p1, p2, p3, Some(&sol), 50).unwrap();
            let s = (1..p3).find(|s| s * s % p3 == p1 % p3).unwrap();
            let alpha = reduce_i64(sol.x + s as i64 * sol.y, p3);
            let want = if is_square_oracle(alpha, p3) { 0 } else { 1 };
            assert_eq!(r.value.exponent(), want, "p3 = {p3}");
            assert_eq!(r.milnor, r.frobenius_milnor);
        }
    }

    #[test]
    fn redei_square_alpha_is_trivial() {
        // p3 for which x + s y happens to be a square: value must be +1
        let sol = form_solver::solve_redei(5, 29, 50).unwrap();
        let mut seen_plus = false;
        for p3 in primes_1_mod_4(3000) {
            if let Ok(r) = redei_symbol(5, 29, p3, Some(&sol), 50) {
                let s = r.witnesses[0].root.u;
                let alpha = reduce_i64(sol.x + s as i64 * sol.y, p3);
                if is_square_oracle(alpha, p3) {
                    assert_eq!(r.value.sign(), Some(1));
                    seen_plus = true;
                }
            }
        }
        assert!(seen_plus);
    }

    #[test]
    fn redei_errors() {
        assert!(matches!(redei_symbol(5, 29, 13, None, 50), Err(Error::PreconditionFailed(_))));
        assert!(matches!(redei_symbol(5, 29, 29, None, 50), Err(Error::PreconditionFailed(_))));
        // p3 = 7 divides x = 7 of (7, 2, 1) but a later solution is used
        let r = redei_symbol(5, 29, 101, None, 200);
        if let Ok(r) = r {
            if let Solution::Redei(s) = &r.solution {
                assert!(redei_admissible(s, 101));
            }
        }
        let bad = RedeiData { p1: 5, p2: 29, x: 7, y: 2, z: 2 };
        assert!(redei_symbol(5, 29, 101, Some(&bad), 50).is_err());
    }

    #[test]
    fn cubic_errors() {
        let (p1, p2) = (prime(-17), prime(-53));
        // pi3 repeating pi1
        assert!(matches!(cubic_triple_symbol(&p1, &p2, &p1, None, 10), Err(Error::PreconditionFailed(_))));
        // a split primary prime with nontrivial symbol against -17
        let bad3 = (1..80)
            .flat_map(|a| (1..80).map(move |b| EisensteinInt::new(a, b)))
            .filter_map(|x| EisensteinPrime::primary(&x).ok())
            .find(|p| !cubic_residue_symbol(p1.pi(), p).unwrap().is_one())
            .unwrap();
        assert!(matches!(cubic_triple_symbol(&p1, &p2, &bad3, None, 10), Err(Error::PreconditionFailed(_))));
        // a forged solution that fails the form identity
        let mut forged = form_solver::solve_cubic(&p1, &p2, 10).unwrap();
        forged.z = EisensteinInt::from_int(2);
        assert!(cubic_triple_symbol(&p1, &p2, &prime(-71), Some(&forged), 10).is_err());
    }

    #[test]
    fn cubic_symbol_independent_of_solution() {
        let (p1, p2) = (prime(-17), prime(-53));
        let sols = form_solver::enumerate_cubic(&p1, &p2, 20, 6).unwrap();
        for q in [71, 89, 107, 179, 197] {
            let p3 = prime(-q);
            let values: Vec<_> = sols
                .iter()
                .filter(|s| cubic_admissible(s, &p3))
                .map(|s| cubic_triple_symbol(&p1, &p2, &p3, Some(s), 20).unwrap().value)
                .collect();
            assert!(values.len() >= 3);
            assert!(values.windows(2).all(|w| w[0] == w[1]), "pi3 = -{q}: {values:?}");
        }
    }
}
