//! Special holomorphic coordinates: pure-term elimination, curve absorption and the
//! shear that puts a mixed term on the `z_2` axis.

use std::f64::consts::PI;

use num_traits::{One, Zero};

use crate::poly::coeff::{cr, cr_int, cr_one, cr_real, cr_zero, is_zero, rational, rational_approx};
use crate::poly::{ComplexRational, CurveJet, HoloPolyMap, MixedMonomial, MixedPolynomial, PolyError, VanishingOrder};

/// Number of unit-modulus shear candidates tried after `h = 0`.
pub const SHEAR_CANDIDATES: usize = 50;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum NormalFormError {
    #[error("defining function is not real-valued")]
    NotRealValued,
    #[error("defining function does not vanish at the origin")]
    NonzeroConstant,
    #[error("no Re z3 leading term: the z3 coefficient of the linear part is zero")]
    MissingNormalDirection,
    #[error("no mixed term of order <= {eta}; Bloom-Graham type exceeds the contact order")]
    NoMixedTerm { eta: u32 },
    #[error("curve contact order {contact} is below eta = {eta}")]
    ContactTooLow { contact: u32, eta: u32, gamma3_order: VanishingOrder },
    #[error("inconsistent input: gamma_3 vanishes to order {gamma3_order} < eta = {eta} while the contact order is {contact}")]
    InconsistentCurve { gamma3_order: u32, eta: u32, contact: VanishingOrder },
    #[error("curve is singular at the origin: gamma_1'(0) = gamma_2'(0) = 0")]
    SingularCurve,
    #[error("no shear direction among {tried} candidates puts a mixed order-{m} term on the z2 axis")]
    ShearExhausted { tried: usize, m: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Output of the pure-term elimination.
#[derive(Clone, Debug)]
pub struct BloomGrahamResult {
    /// `R o map`.
    pub normalized: MixedPolynomial,
    pub map: HoloPolyMap,
    /// Lowest order of a mixed term in `(z_1, z_2)`.
    pub m: u32,
    pub witness: MixedMonomial,
    pub witness_coefficient: ComplexRational,
}

/// Verdict of the parametrization check.
#[derive(Clone, Debug)]
pub struct CurveCheck {
    pub contact: VanishingOrder,
    pub gamma3_order: VanishingOrder,
    /// The curve with `gamma_3` dropped; present on a pass.
    pub truncated: Option<CurveJet>,
    /// On a failure with `nu(gamma_3) = l < eta`: the coefficient of `t^l` in `r o gamma`,
    /// which equals `a_l / 2` and cannot be cancelled by mixed terms.
    pub pure_obstruction: Option<(u32, ComplexRational)>,
}

impl CurveCheck {
    pub fn passed(&self) -> bool {
        self.truncated.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct CurveAbsorption {
    /// `Psi_1`, including the `z_1 <-> z_2` relabeling when it was needed.
    pub map: HoloPolyMap,
    pub r1: MixedPolynomial,
    pub swapped: bool,
}

#[derive(Clone, Debug)]
pub struct ShearChoice {
    pub h: ComplexRational,
    /// Index in the schedule: 0 is `h = 0`, `k + 1` is the `k`-th unit candidate.
    pub candidate: usize,
    pub map: HoloPolyMap,
    pub r: MixedPolynomial,
    /// `(alpha_2, beta_2)` with `z_2^alpha_2 conj(z_2)^beta_2` carrying a nonzero coefficient.
    pub witness: (u32, u32),
    pub witness_coefficient: ComplexRational,
}

/// Checks (i)-(iii) of the special-coordinates theorem.
#[derive(Clone, Debug)]
pub struct Certificate {
    /// Linear part is exactly `Re z_3`, no pure `(z_1, z_2)` terms up to `eta`, no mixed ones below `m`.
    pub shape: bool,
    pub contact: VanishingOrder,
    pub contact_ok: bool,
    /// `None` on the Krantz branch, where (iii) does not apply.
    pub witness: Option<(MixedMonomial, ComplexRational)>,
    /// Every constructed map has a triangular Jacobian with unit diagonal.
    pub maps_triangular: bool,
}

impl Certificate {
    pub fn passes(&self) -> bool {
        self.shape
            && self.contact_ok
            && self.maps_triangular
            && self.witness.as_ref().map_or(true, |(_, c)| !is_zero(c))
    }
}

#[derive(Clone, Debug)]
pub struct SpecialCoordinates {
    pub r: MixedPolynomial,
    /// `Psi = Psi~ o Psi_1 o Psi_2`, so `r = R o Psi`.
    pub psi: HoloPolyMap,
    pub h: ComplexRational,
    pub eta: u32,
    /// `None` when no mixed term occurs up to `eta` (Krantz branch).
    pub m: Option<u32>,
    pub swapped: bool,
    pub certificate: Certificate,
}

/// Puts the linear part into the form `Re u_3` and kills every pure `(u_1, u_2)` term up to
/// order `eta`, lowest order first. Mixed terms are left alone.
pub fn eliminate_pure_terms(
    big_r: &MixedPolynomial,
    eta: u32,
) -> Result<(MixedPolynomial, HoloPolyMap), NormalFormError> {
    if !big_r.is_real_valued() {
        return Err(NormalFormError::NotRealValued);
    }
    if !is_zero(&big_r.coeff(&MixedMonomial::ONE)) {
        return Err(NormalFormError::NonzeroConstant);
    }
    let cap = big_r.degree_cap();
    let c3 = big_r.coeff(&MixedMonomial::z(2));
    if is_zero(&c3) {
        return Err(NormalFormError::MissingNormalDirection);
    }
    // R = Re(2 c1 z1 + 2 c2 z2 + 2 c3 z3) + ...; solve u3 = 2 c1 z1 + 2 c2 z2 + 2 c3 z3 for z3.
    let inv = cr_one() / (c3.clone() * cr_int(2, 0));
    let mut z3 = MixedPolynomial::z(2, cap).scale(&inv);
    for i in 0..2 {
        let ci = big_r.coeff(&MixedMonomial::z(i));
        z3 = &z3 - &MixedPolynomial::z(i, cap).scale(&(ci * &c3.inv()));
    }
    let mut map = HoloPolyMap::replacing(cap, 2, z3)?;
    let mut r = if map == HoloPolyMap::identity(cap) { big_r.clone() } else { big_r.compose(&map) };

    for l in 2..=eta.min(cap) {
        let pure = r.filter(|m| m.is_holomorphic() && m.is_tangential() && m.degree() == l);
        if pure.is_zero() {
            continue;
        }
        // u3 -> u3 - 2 p_l(u') removes p_l and its conjugate through Re u3.
        let comp = &MixedPolynomial::z(2, cap) - &pure.scale(&cr_int(2, 0));
        let phi = HoloPolyMap::replacing(cap, 2, comp)?;
        r = r.compose(&phi);
        map = map.compose(&phi);
    }
    Ok((r, map))
}

/// Lowest-order mixed `(z_1, z_2)` term up to `eta`, first in graded-lex order.
pub fn lowest_mixed_term(r: &MixedPolynomial, eta: u32) -> Option<(MixedMonomial, ComplexRational)> {
    r.terms()
        .filter(|(m, _)| m.is_tangential() && m.is_mixed() && m.degree() <= eta)
        .min_by_key(|(m, _)| m.degree())
        .map(|(m, c)| (*m, c.clone()))
}

pub fn bloom_graham_normalize(big_r: &MixedPolynomial, eta: u32) -> Result<BloomGrahamResult, NormalFormError> {
    let (normalized, map) = eliminate_pure_terms(big_r, eta)?;
    let (witness, witness_coefficient) =
        lowest_mixed_term(&normalized, eta).ok_or(NormalFormError::NoMixedTerm { eta })?;
    Ok(BloomGrahamResult { m: witness.degree(), normalized, map, witness, witness_coefficient })
}

/// Parametrization check: the contact order of `gamma` must reach `eta`, and then `gamma_3`
/// must vanish to order at least `eta`. `r` is expected in Bloom-Graham normal form.
pub fn check_curve_vanishing(
    r: &MixedPolynomial,
    gamma: &CurveJet,
    eta: u32,
) -> Result<CurveCheck, NormalFormError> {
    let restricted = r.restrict_to_curve(gamma);
    let contact = restricted.vanishing_order();
    let gamma3_order = gamma.component_order(2);
    if !contact.at_least(eta) {
        let pure_obstruction = gamma3_order.finite().filter(|&l| l < eta).map(|l| {
            (l, restricted.coeff(&MixedMonomial::new([l, 0, 0], [0; 3])))
        });
        return Ok(CurveCheck { contact, gamma3_order, truncated: None, pure_obstruction });
    }
    if let VanishingOrder::Finite(l) = gamma3_order {
        if l < eta {
            return Err(NormalFormError::InconsistentCurve { gamma3_order: l, eta, contact });
        }
    }
    Ok(CurveCheck { contact, gamma3_order, truncated: Some(gamma.without_third()), pure_obstruction: None })
}

/// Straightens `gamma = (g1, g2, 0)` onto the `z_1` axis with `u = (v_1, v_2 + g2(v_1), v_3)`.
pub fn absorb_curve(r: &MixedPolynomial, gamma: &CurveJet) -> Result<CurveAbsorption, NormalFormError> {
    let cap = r.degree_cap();
    let (mut r, mut gamma, mut prefix) = (r.clone(), gamma.clone(), None);
    let swapped = is_zero(&gamma.derivative_at_zero(0));
    if swapped {
        if is_zero(&gamma.derivative_at_zero(1)) {
            return Err(NormalFormError::SingularCurve);
        }
        let swap = HoloPolyMap::swap12(cap);
        r = r.compose(&swap);
        gamma = gamma.swap12();
        prefix = Some(swap);
    }
    let gamma = gamma.reparametrize_first()?;
    let g2 = gamma.component(1);
    let shift = MixedPolynomial::from_terms(
        g2.iter().enumerate().map(|(k, c)| (MixedMonomial::new([k as u32, 0, 0], [0; 3]), c.clone())),
        cap,
    );
    let psi1 = HoloPolyMap::replacing(cap, 1, &MixedPolynomial::z(1, cap) + &shift)?;
    let r1 = if shift.is_zero() { r } else { r.compose(&psi1) };
    let map = match prefix {
        Some(swap) => swap.compose(&psi1),
        None => psi1,
    };
    Ok(CurveAbsorption { map, r1, swapped })
}

/// The shear schedule: `0`, then `exp(2 pi i k / phi)` for `k = 0..SHEAR_CANDIDATES`,
/// rounded to rationals with denominator `10^6`.
pub fn shear_candidates() -> Vec<ComplexRational> {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let mut out = vec![cr_zero()];
    for k in 0..SHEAR_CANDIDATES {
        let angle = 2.0 * PI * k as f64 / golden;
        out.push(cr(rational_approx(angle.cos(), 1_000_000), rational_approx(angle.sin(), 1_000_000)));
    }
    out
}

fn shear_map(h: &ComplexRational, cap: u32) -> Result<HoloPolyMap, PolyError> {
    let comp = &MixedPolynomial::z(0, cap) + &MixedPolynomial::z(1, cap).scale(h);
    HoloPolyMap::replacing(cap, 0, comp)
}

/// First `(alpha_2, beta_2)`, both positive with sum `m`, whose pure-`z_2` coefficient is nonzero.
pub fn z2_mixed_witness(r: &MixedPolynomial, m: u32) -> Option<((u32, u32), ComplexRational)> {
    (1..m).find_map(|a| {
        let c = r.coeff(&MixedMonomial::new([0, a, 0], [0, m - a, 0]));
        (!is_zero(&c)).then_some(((a, m - a), c))
    })
}

pub fn find_shear_direction(r1: &MixedPolynomial, m: u32) -> Result<ShearChoice, NormalFormError> {
    let cap = r1.degree_cap();
    let leading = r1.filter(|mono| mono.is_tangential() && mono.is_mixed() && mono.degree() == m);
    let candidates = shear_candidates();
    for (idx, h) in candidates.iter().enumerate() {
        let map = shear_map(h, cap)?;
        // Only the order-m part decides; compose it first.
        if z2_mixed_witness(&leading.compose(&map), m).is_none() {
            continue;
        }
        let r = if h.is_zero() { r1.clone() } else { r1.compose(&map) };
        let (witness, witness_coefficient) =
            z2_mixed_witness(&r, m).expect("order-m part of r is the sheared leading part");
        return Ok(ShearChoice { h: h.clone(), candidate: idx, map, r, witness, witness_coefficient });
    }
    Err(NormalFormError::ShearExhausted { tried: candidates.len(), m })
}

/// Exact shape scan for check (i).
pub fn shape_ok(r: &MixedPolynomial, eta: u32, m: Option<u32>) -> bool {
    let half = cr_real(rational(1, 2));
    let linear_ok = r.terms().filter(|(mono, _)| mono.degree() <= 1).all(|(mono, c)| {
        (*mono == MixedMonomial::z(2) || *mono == MixedMonomial::zbar(2)) && *c == half
    }) && r.coeff(&MixedMonomial::z(2)) == half;
    let no_pure = !r.terms().any(|(mono, _)| mono.is_tangential() && mono.is_pure() && mono.degree() <= eta);
    let mixed_floor = m.unwrap_or(eta + 1);
    let no_low_mixed =
        !r.terms().any(|(mono, _)| mono.is_tangential() && mono.is_mixed() && mono.degree() < mixed_floor);
    linear_ok && no_pure && no_low_mixed
}

/// `nu(r(t, 0, 0))`, read off the terms in `z_1, conj(z_1)` alone.
pub fn axis_contact(r: &MixedPolynomial) -> VanishingOrder {
    r.filter(|mono| mono.alpha[1..] == [0, 0] && mono.beta[1..] == [0, 0]).vanishing_order()
}

/// Full construction: normalize, check the curve, absorb it, shear. A domain with no mixed
/// term up to `eta` takes the Krantz branch: no shear, and check (iii) is not applicable.
pub fn certify_special_coordinates(
    big_r: &MixedPolynomial,
    gamma: &CurveJet,
    eta: u32,
) -> Result<SpecialCoordinates, NormalFormError> {
    let (normalized, psi_tilde) = eliminate_pure_terms(big_r, eta)?;
    let m = lowest_mixed_term(&normalized, eta).map(|(mono, _)| mono.degree());

    let inverse = psi_tilde.inverse()?;
    let pulled = gamma.mapped(&inverse)?;
    let check = check_curve_vanishing(&normalized, &pulled, eta)?;
    let Some(straight) = check.truncated else {
        let contact = check.contact.finite().unwrap_or(u32::MAX);
        return Err(NormalFormError::ContactTooLow { contact, eta, gamma3_order: check.gamma3_order });
    };

    let absorbed = absorb_curve(&normalized, &straight)?;
    let mut maps = vec![psi_tilde.clone(), absorbed.map.clone()];
    let (r, psi_rest, h, witness) = match m {
        Some(m) => {
            let shear = find_shear_direction(&absorbed.r1, m)?;
            maps.push(shear.map.clone());
            let (a2, b2) = shear.witness;
            let mono = MixedMonomial::new([0, a2, 0], [0, b2, 0]);
            let psi = absorbed.map.compose(&shear.map);
            (shear.r, psi, shear.h, Some((mono, shear.witness_coefficient)))
        }
        None => (absorbed.r1.clone(), absorbed.map.clone(), cr_zero(), None),
    };
    let psi = psi_tilde.compose(&psi_rest);

    let contact = axis_contact(&r);
    let certificate = Certificate {
        shape: shape_ok(&r, eta, m),
        contact,
        contact_ok: contact.at_least(eta),
        // Recomputed from the final r rather than trusted from the shear step.
        witness: witness.map(|(mono, _)| (mono, r.coeff(&mono))),
        maps_triangular: maps.iter().all(HoloPolyMap::is_triangular_invertible),
    };
    Ok(SpecialCoordinates { r, psi, h, eta, m, swapped: absorbed.swapped, certificate })
}

/// `true` when `h` is exactly `1`.
pub fn is_unit_shear(h: &ComplexRational) -> bool {
    h.re.is_one() && h.im.is_zero()
}
