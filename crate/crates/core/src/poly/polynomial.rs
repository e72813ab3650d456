use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;

use super::coeff::{cr_one, cr_real, cr_zero, format_cr, is_zero, ComplexRational, Rational};
use super::curve::CurveJet;
use super::map::HoloPolyMap;
use super::monomial::{MixedMonomial, Var};
use super::PolyError;

/// Order of vanishing at the origin; `Infinite` for the zero polynomial.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum VanishingOrder {
    Finite(u32),
    Infinite,
}

impl VanishingOrder {
    pub fn at_least(&self, n: u32) -> bool {
        match self {
            VanishingOrder::Finite(k) => *k >= n,
            VanishingOrder::Infinite => true,
        }
    }

    pub fn finite(&self) -> Option<u32> {
        match self {
            VanishingOrder::Finite(k) => Some(*k),
            VanishingOrder::Infinite => None,
        }
    }
}

impl fmt::Display for VanishingOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VanishingOrder::Finite(k) => write!(f, "{k}"),
            VanishingOrder::Infinite => write!(f, "inf"),
        }
    }
}

/// Sparse polynomial in `z_1, z_2, z_3` and their conjugates with exact coefficients,
/// truncated at total degree `degree_cap`.
///
/// Terms are kept in canonical form: graded-lex order, no zero coefficients.
/// `truncated` records whether any operation producing this value dropped terms above the cap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MixedPolynomial {
    terms: BTreeMap<MixedMonomial, ComplexRational>,
    degree_cap: u32,
    truncated: bool,
}

impl MixedPolynomial {
    pub fn zero(degree_cap: u32) -> Self {
        MixedPolynomial { terms: BTreeMap::new(), degree_cap, truncated: false }
    }

    pub fn constant(c: ComplexRational, degree_cap: u32) -> Self {
        Self::monomial(MixedMonomial::ONE, c, degree_cap)
    }

    pub fn monomial(m: MixedMonomial, c: ComplexRational, degree_cap: u32) -> Self {
        let mut p = Self::zero(degree_cap);
        p.add_term(m, c);
        p
    }

    /// `z_i`, 0-based.
    pub fn z(i: usize, degree_cap: u32) -> Self {
        Self::monomial(MixedMonomial::z(i), cr_one(), degree_cap)
    }

    pub fn zbar(i: usize, degree_cap: u32) -> Self {
        Self::monomial(MixedMonomial::zbar(i), cr_one(), degree_cap)
    }

    /// `Re z_i = (z_i + conj(z_i)) / 2`.
    pub fn re_z(i: usize, degree_cap: u32) -> Self {
        let half = cr_real(Rational::new(BigInt::one(), BigInt::from(2)));
        let mut p = Self::zero(degree_cap);
        p.add_term(MixedMonomial::z(i), half.clone());
        p.add_term(MixedMonomial::zbar(i), half);
        p
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping zeros and
    /// terms above the cap (which sets the truncation flag).
    pub fn from_terms<I>(terms: I, degree_cap: u32) -> Self
    where
        I: IntoIterator<Item = (MixedMonomial, ComplexRational)>,
    {
        let mut p = Self::zero(degree_cap);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m` in place, keeping canonical form.
    pub fn add_term(&mut self, m: MixedMonomial, c: ComplexRational) {
        if is_zero(&c) {
            return;
        }
        if m.degree() > self.degree_cap {
            self.truncated = true;
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing = &*existing + &c;
                if is_zero(existing) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MixedMonomial, &ComplexRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MixedMonomial) -> ComplexRational {
        self.terms.get(m).cloned().unwrap_or_else(cr_zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Same terms with a different cap; terms above a lower cap are dropped.
    pub fn with_cap(&self, degree_cap: u32) -> Self {
        let mut out = Self::zero(degree_cap);
        out.truncated = self.truncated;
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter<F: Fn(&MixedMonomial) -> bool>(&self, keep: F) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (*m, c.clone()));
        let mut out = Self::from_terms(terms, self.degree_cap);
        out.truncated = self.truncated;
        out
    }

    /// Hermitian symmetry `coeff(alpha, beta) = conj(coeff(beta, alpha))`, i.e. real-valued.
    pub fn is_real_valued(&self) -> bool {
        self.terms.iter().all(|(m, c)| {
            self.terms.get(&m.conjugate()).is_some_and(|d| d.re == c.re && d.im == -c.im.clone())
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_cap(other)?;
        let mut out = self.clone();
        out.truncated |= other.truncated;
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.checked_add(&other.neg_ref())
    }

    /// Product truncated at the common cap.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_cap(other)?;
        Ok(self.mul_truncated(other, self.degree_cap))
    }

    fn mul_truncated(&self, other: &Self, cap: u32) -> Self {
        let mut out = Self::zero(cap);
        out.truncated = self.truncated || other.truncated;
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if da + mb.degree() > cap {
                    out.truncated = true;
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    fn check_cap(&self, other: &Self) -> Result<(), PolyError> {
        if self.degree_cap != other.degree_cap {
            return Err(PolyError::CapMismatch { left: self.degree_cap, right: other.degree_cap });
        }
        Ok(())
    }

    fn neg_ref(&self) -> Self {
        MixedPolynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
            degree_cap: self.degree_cap,
            truncated: self.truncated,
        }
    }

    pub fn scale(&self, s: &ComplexRational) -> Self {
        let mut out = Self::zero(self.degree_cap);
        out.truncated = self.truncated;
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    /// Swaps `alpha` and `beta` in every term and conjugates coefficients.
    pub fn conjugate(&self) -> Self {
        MixedPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.conjugate(), c.conj())).collect(),
            degree_cap: self.degree_cap,
            truncated: self.truncated,
        }
    }

    /// `(p + conj p) / 2`.
    pub fn real_part(&self) -> Self {
        let half = cr_real(Rational::new(BigInt::one(), BigInt::from(2)));
        (self + &self.conjugate()).scale(&half)
    }

    /// Raises to a nonnegative integer power, truncating at the cap.
    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(cr_one(), self.degree_cap);
        for _ in 0..e {
            out = out.mul_truncated(self, self.degree_cap);
        }
        out
    }

    /// Formal Wirtinger derivative of the given order, treating `z` and `conj(z)` as independent.
    pub fn wirtinger_derivative(&self, var: Var, order: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..order {
            out = out.derivative_once(var);
        }
        out
    }

    fn derivative_once(&self, var: Var) -> Self {
        let mut out = Self::zero(self.degree_cap);
        out.truncated = self.truncated;
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            *dm.exponent_mut(var) -= 1;
            out.add_term(dm, c * cr_real(Rational::from_integer(BigInt::from(e))));
        }
        out
    }

    /// Mixed derivative `d^(a+b) / dz_i^a dzbar_i^b`.
    pub fn mixed_derivative(&self, i: usize, a: u32, b: u32) -> Self {
        self.wirtinger_derivative(Var::Z(i), a).wirtinger_derivative(Var::ZBar(i), b)
    }

    /// Substitutes `conj(z_i) = conj(point_i)` and evaluates in double precision.
    pub fn evaluate(&self, point: &[Complex64; 3]) -> Complex64 {
        super::numeric::NumericPolynomial::new(self).evaluate(point)
    }

    /// Exact evaluation at a complex-rational point.
    pub fn evaluate_exact(&self, point: &[ComplexRational; 3]) -> ComplexRational {
        let conj: Vec<ComplexRational> = point.iter().map(|z| z.conj()).collect();
        let mut pow_cache: HashMap<(usize, bool, u32), ComplexRational> = HashMap::new();
        let mut power = |i: usize, bar: bool, e: u32| -> ComplexRational {
            pow_cache
                .entry((i, bar, e))
                .or_insert_with(|| {
                    let base = if bar { &conj[i] } else { &point[i] };
                    (0..e).fold(cr_one(), |acc, _| acc * base)
                })
                .clone()
        };
        let mut total = cr_zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for i in 0..3 {
                if m.alpha[i] > 0 {
                    v *= power(i, false, m.alpha[i]);
                }
                if m.beta[i] > 0 {
                    v *= power(i, true, m.beta[i]);
                }
            }
            total += v;
        }
        total
    }

    /// Substitutes the map components for `z` and their conjugates for `conj(z)`,
    /// truncating at this polynomial's cap.
    pub fn compose(&self, map: &HoloPolyMap) -> Self {
        let cap = self.degree_cap;
        let comps: Vec<MixedPolynomial> = map.components().iter().map(|c| c.with_cap(cap)).collect();
        let conjs: Vec<MixedPolynomial> = comps.iter().map(|c| c.conjugate()).collect();
        let mut cache: HashMap<(usize, bool, u32), MixedPolynomial> = HashMap::new();
        let mut out = Self::zero(cap);
        out.truncated = self.truncated || map.components().iter().any(|c| c.truncated);
        for (m, c) in &self.terms {
            let mut prod = Self::constant(c.clone(), cap);
            for i in 0..3 {
                for (bar, e) in [(false, m.alpha[i]), (true, m.beta[i])] {
                    if e == 0 {
                        continue;
                    }
                    let base = if bar { &conjs[i] } else { &comps[i] };
                    let pw = power_cached(&mut cache, base, i, bar, e, cap);
                    prod = prod.mul_truncated(&pw, cap);
                }
            }
            out.truncated |= prod.truncated;
            for (pm, pc) in prod.terms {
                out.add_term(pm, pc);
            }
        }
        out
    }

    /// Minimal total degree of a stored term.
    pub fn vanishing_order(&self) -> VanishingOrder {
        self.terms.keys().map(|m| m.degree()).min().map_or(VanishingOrder::Infinite, VanishingOrder::Finite)
    }

    /// Pulls back along a curve jet; the result lives in the `z_1` slot, which plays the role of `t`.
    pub fn restrict_to_curve(&self, curve: &CurveJet) -> Self {
        self.compose(&curve.as_map(self.degree_cap))
    }

    /// The part of degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.filter(|m| m.degree() == d)
    }
}

fn power_cached(
    cache: &mut HashMap<(usize, bool, u32), MixedPolynomial>,
    base: &MixedPolynomial,
    i: usize,
    bar: bool,
    e: u32,
    cap: u32,
) -> MixedPolynomial {
    if let Some(p) = cache.get(&(i, bar, e)) {
        return p.clone();
    }
    let p = if e == 1 {
        base.clone()
    } else {
        let prev = power_cached(cache, base, i, bar, e - 1, cap);
        prev.mul_truncated(base, cap)
    };
    cache.insert((i, bar, e), p.clone());
    p
}

/// Contact order `nu(p o gamma) / nu(gamma)`, `None` when the restriction vanishes to the jet order.
pub fn contact_order(p: &MixedPolynomial, curve: &CurveJet) -> Option<Rational> {
    let restricted = p.restrict_to_curve(curve);
    let num = restricted.vanishing_order().finite()?;
    let den = curve.vanishing_order().finite()?;
    Some(Rational::new(BigInt::from(num), BigInt::from(den)))
}

impl Add for &MixedPolynomial {
    type Output = MixedPolynomial;

    /// # Panics
    /// If the degree caps differ; use [`MixedPolynomial::checked_add`] to get an error instead.
    fn add(self, rhs: &MixedPolynomial) -> MixedPolynomial {
        self.checked_add(rhs).expect("degree caps must agree")
    }
}

impl Sub for &MixedPolynomial {
    type Output = MixedPolynomial;

    fn sub(self, rhs: &MixedPolynomial) -> MixedPolynomial {
        self.checked_sub(rhs).expect("degree caps must agree")
    }
}

impl Mul for &MixedPolynomial {
    type Output = MixedPolynomial;

    fn mul(self, rhs: &MixedPolynomial) -> MixedPolynomial {
        self.checked_mul(rhs).expect("degree caps must agree")
    }
}

impl Neg for &MixedPolynomial {
    type Output = MixedPolynomial;

    fn neg(self) -> MixedPolynomial {
        self.neg_ref()
    }
}

impl fmt::Display for MixedPolynomial {
    /// Prints in the input grammar, so the output parses back to the same term map.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if *m == MixedMonomial::ONE {
                    format!("({})", format_cr(c))
                } else if c.is_one() {
                    format!("{m}")
                } else {
                    format!("({})*{m}", format_cr(c))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
