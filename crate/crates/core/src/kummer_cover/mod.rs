//! Exact model of the mod-`l` Heisenberg covering
//! `R = k(t)(T, U, E)` with `T^l = t`, `U^l = c^l - t`, `E^l = ε_l(t)`,
//! `ε_l = ∏_{i=1}^{l-1} (c - ζ^i T)^i`, and the automorphisms `α, β, δ`.

mod field;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

pub use field::{rational, BaseFunction, Poly, QOmega};

use crate::eisenstein::EisensteinInt;
use crate::form_solver::CubicData;
use crate::magnus::FreeWord;
use crate::residue_symbols::SymbolValue;
use crate::{Error, Result};

/// Exponents `(a, b, e)` of the monomial `T^a U^b E^e`.
pub type Monomial = (u8, u8, u8);

/// `Σ f_{abe} T^a U^b E^e` with `0 ≤ a, b, e < l`; zero coefficients are
/// not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RadicalElement(BTreeMap<Monomial, BaseFunction>);

impl RadicalElement {
    pub fn zero() -> Self {
        RadicalElement(BTreeMap::new())
    }

    pub fn from_base(f: BaseFunction) -> Self {
        Self::monomial((0, 0, 0), f)
    }

    pub fn monomial(m: Monomial, f: BaseFunction) -> Self {
        let mut map = BTreeMap::new();
        if !f.is_zero() {
            map.insert(m, f);
        }
        RadicalElement(map)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BaseFunction)> {
        self.0.iter()
    }

    pub fn coefficient(&self, m: Monomial) -> BaseFunction {
        self.0.get(&m).cloned().unwrap_or_else(BaseFunction::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn accumulate(&mut self, m: Monomial, f: BaseFunction) {
        if f.is_zero() {
            return;
        }
        match self.0.get_mut(&m) {
            Some(g) => {
                *g = g.add(&f);
                if g.is_zero() {
                    self.0.remove(&m);
                }
            }
            None => {
                self.0.insert(m, f);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&m, f) in &o.0 {
            out.accumulate(m, f.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        RadicalElement(self.0.iter().map(|(&m, f)| (m, f.neg())).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, f: &BaseFunction) -> Self {
        let mut out = Self::zero();
        for (&m, g) in &self.0 {
            out.accumulate(m, g.mul(f));
        }
        out
    }

    /// `f(t)` if `self` lies in the base field.
    pub fn as_base(&self) -> Option<BaseFunction> {
        match self.0.len() {
            0 => Some(BaseFunction::zero()),
            1 => self.0.get(&(0, 0, 0)).cloned(),
            _ => None,
        }
    }
}

impl fmt::Display for RadicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (n, (&(a, b, e), c)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "[{c}]")?;
            for (name, k) in [("T", a), ("U", b), ("E", e)] {
                match k {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

/// An automorphism of `R` over `k(t)`, given by the images of `T`, `U`, `E`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoverAutomorphism {
    t: RadicalElement,
    u: RadicalElement,
    e: RadicalElement,
}

impl CoverAutomorphism {
    pub fn image_t(&self) -> &RadicalElement {
        &self.t
    }

    pub fn image_u(&self) -> &RadicalElement {
        &self.u
    }

    pub fn image_e(&self) -> &RadicalElement {
        &self.e
    }
}

/// The covering field for a fixed `l ∈ {2, 3}` and branch constant `c ≠ 0`.
#[derive(Clone, Debug)]
pub struct CoverField {
    l: u32,
    c: QOmega,
    zeta: QOmega,
    /// `ε_l` on the `T`-basis.
    eps: RadicalElement,
}

impl CoverField {
    pub fn new(l: u32, c: QOmega) -> Result<Self> {
        let zeta = match l {
            2 => QOmega::from_int(-1),
            3 => QOmega::omega(),
            _ => return Err(Error::UnsupportedOrder(l)),
        };
        if c.is_zero() {
            return Err(Error::BadConstant);
        }
        let mut field = CoverField { l, c, zeta, eps: RadicalElement::zero() };
        field.eps = field.epsilon_from_product();
        Ok(field)
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn c(&self) -> &QOmega {
        &self.c
    }

    pub fn zeta(&self) -> &QOmega {
        &self.zeta
    }

    pub fn epsilon(&self) -> &RadicalElement {
        &self.eps
    }

    pub fn t(&self) -> RadicalElement {
        RadicalElement::monomial((1, 0, 0), BaseFunction::one())
    }

    pub fn u(&self) -> RadicalElement {
        RadicalElement::monomial((0, 1, 0), BaseFunction::one())
    }

    pub fn e(&self) -> RadicalElement {
        RadicalElement::monomial((0, 0, 1), BaseFunction::one())
    }

    pub fn constant(&self, c: QOmega) -> RadicalElement {
        RadicalElement::from_base(BaseFunction::constant(c))
    }

    /// `c^l - t`.
    pub fn u_power(&self) -> BaseFunction {
        BaseFunction::constant(self.c.pow(self.l)).sub(&BaseFunction::t())
    }

    fn epsilon_from_product(&self) -> RadicalElement {
        let mut acc = self.constant(QOmega::one());
        for i in 1..self.l {
            let factor = self.constant(self.c.clone()).sub(&self.t().scale(&BaseFunction::constant(self.zeta.pow(i))));
            for _ in 0..i {
                acc = self.mul(&acc, &factor);
            }
        }
        acc
    }

    /// `ε_l` from its expanded closed form: `c + T` for `l = 2`, and
    /// `c³ + (2+ω)c²T + (2+ω)cT² + (1+ω)t` for `l = 3`.
    pub fn epsilon_closed_form(&self) -> RadicalElement {
        let c = &self.c;
        let base = |x: QOmega| BaseFunction::constant(x);
        if self.l == 2 {
            return self.constant(c.clone()).add(&self.t());
        }
        let two_w = &QOmega::from_int(2) + &QOmega::omega();
        let one_w = &QOmega::from_int(1) + &QOmega::omega();
        let mut out = RadicalElement::from_base(base(c.pow(3)).add(&BaseFunction::t().scale(&one_w)));
        out = out.add(&RadicalElement::monomial((1, 0, 0), base(&two_w * &c.pow(2))));
        out.add(&RadicalElement::monomial((2, 0, 0), base(&two_w * c)))
    }

    fn push_reduced(&self, out: &mut RadicalElement, (a, b, e): (u32, u32, u32), mut f: BaseFunction) {
        let l = self.l;
        let (mut a, mut b, mut e) = (a, b, e);
        if a >= l {
            a -= l;
            f = f.mul(&BaseFunction::t());
        }
        if b >= l {
            b -= l;
            f = f.mul(&self.u_power());
        }
        if e >= l {
            e -= l;
            for (&(k, _, _), g) in self.eps.terms() {
                let mut a2 = a + k as u32;
                let mut h = f.mul(g);
                if a2 >= l {
                    a2 -= l;
                    h = h.mul(&BaseFunction::t());
                }
                out.accumulate((a2 as u8, b as u8, e as u8), h);
            }
            return;
        }
        out.accumulate((a as u8, b as u8, e as u8), f);
    }

    pub fn mul(&self, x: &RadicalElement, y: &RadicalElement) -> RadicalElement {
        let mut out = RadicalElement::zero();
        for (&(a, b, e), f) in x.terms() {
            for (&(a2, b2, e2), g) in y.terms() {
                let m = ((a + a2) as u32, (b + b2) as u32, (e + e2) as u32);
                self.push_reduced(&mut out, m, f.mul(g));
            }
        }
        out
    }

    pub fn pow(&self, x: &RadicalElement, n: u32) -> RadicalElement {
        let mut acc = self.constant(QOmega::one());
        for _ in 0..n {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Image of `x` under the ring map fixing `k(t)` with the given images of
    /// `T`, `U`, `E`.
    fn substitute(&self, x: &RadicalElement, t: &RadicalElement, u: &RadicalElement, e: &RadicalElement) -> RadicalElement {
        let powers = |g: &RadicalElement| {
            let mut v = Vec::with_capacity(self.l as usize);
            v.push(self.constant(QOmega::one()));
            for k in 1..self.l as usize {
                let next = self.mul(&v[k - 1], g);
                v.push(next);
            }
            v
        };
        let (tp, up, ep) = (powers(t), powers(u), powers(e));
        let mut out = RadicalElement::zero();
        for (&(a, b, c), f) in x.terms() {
            let m = self.mul(&self.mul(&tp[a as usize], &up[b as usize]), &ep[c as usize]);
            out = out.add(&m.scale(f));
        }
        out
    }

    /// Checks `T'^l = t`, `U'^l = c^l - t`, `E'^l = ε_l(T')`.
    pub fn automorphism(&self, t: RadicalElement, u: RadicalElement, e: RadicalElement) -> Result<CoverAutomorphism> {
        let l = self.l;
        if self.pow(&t, l) != RadicalElement::from_base(BaseFunction::t()) {
            return Err(Error::NotAutomorphism(format!("image of T = {t} is not an l-th root of t")));
        }
        if self.pow(&u, l) != RadicalElement::from_base(self.u_power()) {
            return Err(Error::NotAutomorphism(format!("image of U = {u} is not an l-th root of c^l - t")));
        }
        let eps_image = self.substitute(&self.eps, &t, &u, &e);
        if self.pow(&e, l) != eps_image {
            return Err(Error::NotAutomorphism(format!("image of E = {e} is not an l-th root of the image of epsilon")));
        }
        Ok(CoverAutomorphism { t, u, e })
    }

    pub fn identity(&self) -> CoverAutomorphism {
        CoverAutomorphism { t: self.t(), u: self.u(), e: self.e() }
    }

    /// `(α̃, β̃)`: `α̃(T) = ζT`, `α̃(E) = (c - T)U^{l-1}/(c^l - t) · E`;
    /// `β̃(U) = ζU`; everything else fixed.
    pub fn generators(&self) -> Result<(CoverAutomorphism, CoverAutomorphism)> {
        let z = BaseFunction::constant(self.zeta.clone());
        let inv = self.u_power().inv().expect("c^l - t is nonzero");
        let c_minus_t = self.constant(self.c.clone()).sub(&self.t());
        let u_top = self.pow(&self.u(), self.l - 1);
        let e_img = self.mul(&self.mul(&c_minus_t, &u_top), &self.e()).scale(&inv);
        let alpha = self.automorphism(self.t().scale(&z), self.u(), e_img)?;
        let beta = self.automorphism(self.t(), self.u().scale(&z), self.e())?;
        Ok((alpha, beta))
    }

    /// `δ(E) = ζE`.
    pub fn delta(&self) -> Result<CoverAutomorphism> {
        let z = BaseFunction::constant(self.zeta.clone());
        self.automorphism(self.t(), self.u(), self.e().scale(&z))
    }

    pub fn apply(&self, phi: &CoverAutomorphism, x: &RadicalElement) -> RadicalElement {
        self.substitute(x, &phi.t, &phi.u, &phi.e)
    }

    /// `φ ∘ ψ`.
    pub fn compose(&self, phi: &CoverAutomorphism, psi: &CoverAutomorphism) -> CoverAutomorphism {
        CoverAutomorphism { t: self.apply(phi, &psi.t), u: self.apply(phi, &psi.u), e: self.apply(phi, &psi.e) }
    }

    /// `φ^{-1}` as the power `φ^{n-1}`, `n` the order of `φ`.
    pub fn inverse(&self, phi: &CoverAutomorphism) -> Result<CoverAutomorphism> {
        let id = self.identity();
        let mut prev = id.clone();
        let mut cur = phi.clone();
        for _ in 0..(self.l * self.l) {
            if cur == id {
                return Ok(prev);
            }
            prev = cur.clone();
            cur = self.compose(phi, &cur);
        }
        Err(Error::NotAutomorphism("no finite order found within l^2 steps".into()))
    }

    pub fn power(&self, phi: &CoverAutomorphism, n: i64) -> Result<CoverAutomorphism> {
        let base = if n < 0 { self.inverse(phi)? } else { phi.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.compose(&acc, &base);
        }
        Ok(acc)
    }

    /// `ρ(w)` with `x₁ ↦ α̃`, `x₂ ↦ β̃` and other generators trivial.
    /// Exponents are reduced mod `l`, the order of `α̃` and `β̃`.
    pub fn automorphism_of_word(&self, w: &FreeWord) -> Result<CoverAutomorphism> {
        let (alpha, beta) = self.generators()?;
        let mut acc = self.identity();
        for &(i, e) in w.letters() {
            let g = match i {
                1 => &alpha,
                2 => &beta,
                _ => continue,
            };
            let k = e.rem_euclid(self.l as i64);
            acc = self.compose(&acc, &self.power(g, k)?);
        }
        Ok(acc)
    }

    /// The exponent `k` with `ρ(w)(E) = ζ^k E`.
    pub fn monodromy(&self, w: &FreeWord) -> Result<SymbolValue> {
        let phi = self.automorphism_of_word(w)?;
        let img = phi.image_e();
        let scalar = match img.terms().collect::<Vec<_>>().as_slice() {
            [(&(0, 0, 1), f)] => f.as_constant(),
            _ => None,
        };
        let scalar = scalar.ok_or(Error::NotScalar)?;
        let mut z = QOmega::one();
        for k in 0..self.l {
            if z == scalar {
                return SymbolValue::new(self.l, k as i64);
            }
            z = &z * &self.zeta;
        }
        Err(Error::NotScalar)
    }

    /// The coefficients of `ε₃` at `t = -π₁y³`, `c = x`, rescaled by
    /// `(-y)^k` so they sit on the basis `1, ρ, ρ²` with `ρ³ = π₁`.
    pub fn specialize_epsilon(&self, pi1: &EisensteinInt, y: &EisensteinInt) -> Result<[EisensteinInt; 3]> {
        if self.l != 3 {
            return Err(Error::UnsupportedOrder(self.l));
        }
        let yq = QOmega::from(y);
        let t_val = -&(&QOmega::from(pi1) * &yq.pow(3));
        let minus_y = -&yq;
        let mut out = [EisensteinInt::zero(), EisensteinInt::zero(), EisensteinInt::zero()];
        for (k, slot) in out.iter_mut().enumerate() {
            let f = self.eps.coefficient((k as u8, 0, 0));
            let v = f.eval(&t_val).ok_or_else(|| Error::PreconditionFailed("pole at t".into()))?;
            let v = &v * &minus_y.pow(k as u32);
            *slot = v.to_eisenstein().ok_or_else(|| Error::Inconsistent(format!("{v} is not integral")))?;
        }
        Ok(out)
    }

    /// Whether `ε₃` specializes to `θ` of the given cubic solution, with
    /// `c` equal to its `x`.
    pub fn matches_theta(&self, data: &CubicData) -> Result<bool> {
        if QOmega::from(&data.x) != self.c {
            return Err(Error::PreconditionFailed(format!("c = {} differs from x = {}", self.c, data.x)));
        }
        Ok(self.specialize_epsilon(data.pi1.pi(), &data.y)? == data.theta_coefficients())
    }
}

/// `α̃, β̃` for `l` and `c`.
pub fn make_generators(l: u32, c: QOmega) -> Result<(CoverField, CoverAutomorphism, CoverAutomorphism)> {
    let field = CoverField::new(l, c)?;
    let (a, b) = field.generators()?;
    Ok((field, a, b))
}

/// Monodromy of `w` with `c = 1`.
pub fn monodromy_check(w: &FreeWord, l: u32) -> Result<SymbolValue> {
    CoverField::new(l, QOmega::one())?.monodromy(w)
}

/// Upper unitriangular `[[1, a12, a13], [0, 1, a23], [0, 0, 1]]` over `Z/l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HeisenbergMatrix {
    pub l: u32,
    pub a12: u32,
    pub a23: u32,
    pub a13: u32,
}

impl HeisenbergMatrix {
    pub fn identity(l: u32) -> Self {
        HeisenbergMatrix { l, a12: 0, a23: 0, a13: 0 }
    }

    pub fn alpha(l: u32) -> Self {
        HeisenbergMatrix { a12: 1, ..Self::identity(l) }
    }

    pub fn beta(l: u32) -> Self {
        HeisenbergMatrix { a23: 1, ..Self::identity(l) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let l = self.l;
        HeisenbergMatrix {
            l,
            a12: (self.a12 + o.a12) % l,
            a23: (self.a23 + o.a23) % l,
            a13: (self.a13 + o.a13 + self.a12 * o.a23) % l,
        }
    }

    pub fn inverse(&self) -> Self {
        let l = self.l;
        HeisenbergMatrix {
            l,
            a12: (l - self.a12) % l,
            a23: (l - self.a23) % l,
            a13: (l * l - self.a13 + self.a12 * self.a23) % l,
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { *self };
        (0..n.unsigned_abs()).fold(Self::identity(self.l), |acc, _| acc.mul(&base))
    }
}

impl fmt::Display for HeisenbergMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[1,{},{}],[0,1,{}],[0,0,1]]", self.a12, self.a13, self.a23)
    }
}

/// Image of `w` (`x₁ ↦ α̃`, `x₂ ↦ β̃`, others trivial) in `H(F_l)`.
pub fn to_matrix(w: &FreeWord, l: u32) -> HeisenbergMatrix {
    w.letters().iter().fold(HeisenbergMatrix::identity(l), |acc, &(i, e)| match i {
        1 => acc.mul(&HeisenbergMatrix::alpha(l).pow(e)),
        2 => acc.mul(&HeisenbergMatrix::beta(l).pow(e)),
        _ => acc,
    })
}
