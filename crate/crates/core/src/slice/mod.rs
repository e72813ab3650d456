//! Per-`(d, delta)` slice machinery: the boundary point `e~_delta`, the slice coordinate change
//! `Phi`, the normalized slice polynomial `rho`, the scale functions `A_l`, `tau`, `J_delta`,
//! and log-log verification of the derivative-scaling estimates.

pub mod direction;
pub mod fit;
pub mod scaling;

use std::collections::BTreeMap;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::poly::coeff::{cr_from_c64, cr_one, cr_real, cr_to_c64, is_zero, rational};
use crate::poly::{ComplexRational, HoloPolyMap, MixedMonomial, MixedPolynomial, NumericPolynomial, Var};

pub use direction::{choose_direction, DirectionChoice};
pub use fit::{fit_loglog, scaling_row, FitTolerances, LogLogFit, ScalingKind, ScalingRow};
pub use scaling::{
    slice_sweep, verify_r_derivative_scaling, verify_rho_derivative_scaling, RhoScalingReport, ScalingTable,
};

pub const MAX_NEWTON_ITERATIONS: u32 = 50;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SliceError {
    #[error("slice decomposition has no vertex polynomials")]
    EmptyDecomposition,
    #[error("every vertex polynomial vanishes on the unit circle")]
    AllVertexPolynomialsVanish,
    #[error("Newton iteration for e_delta did not converge at delta = {delta} (residual {residual:e})")]
    NoConvergence { delta: f64, residual: f64 },
    #[error("dr/dz3 vanishes at the slice point for delta = {delta}")]
    SingularNormal { delta: f64 },
    #[error("invalid delta sweep: {0}")]
    InvalidSweep(String),
}

/// Geometric `delta` grid from `start` to `end` with `count` points, written `start:end:count`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeometricSweep {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Default for GeometricSweep {
    fn default() -> Self {
        GeometricSweep { start: 1e-2, end: 1e-6, count: 9 }
    }
}

impl GeometricSweep {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Self, SliceError> {
        if !(start > 0.0 && end > 0.0 && start.is_finite() && end.is_finite()) {
            return Err(SliceError::InvalidSweep("endpoints must be positive".into()));
        }
        if count < 2 {
            return Err(SliceError::InvalidSweep("need at least two points".into()));
        }
        Ok(GeometricSweep { start, end, count })
    }

    /// Interpolates in `log10`, so decade grids hit powers of ten exactly.
    pub fn values(&self) -> Vec<f64> {
        let (a, b) = (self.start.log10(), self.end.log10());
        (0..self.count).map(|i| 10f64.powf(a + (b - a) * i as f64 / (self.count - 1) as f64)).collect()
    }
}

impl FromStr for GeometricSweep {
    type Err = SliceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [start, end, count] = parts.as_slice() else {
            return Err(SliceError::InvalidSweep(format!("expected start:end:count, got {s:?}")));
        };
        let num = |x: &str| x.parse::<f64>().map_err(|e| SliceError::InvalidSweep(format!("{x:?}: {e}")));
        let count = count.parse::<usize>().map_err(|e| SliceError::InvalidSweep(format!("{count:?}: {e}")))?;
        Self::new(num(start)?, num(end)?, count)
    }
}

impl std::fmt::Display for GeometricSweep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:e}:{:e}:{}", self.start, self.end, self.count)
    }
}

/// Boundary point `e~_delta = (d delta^{1/eta}, 0, e_delta)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EDelta {
    pub delta: f64,
    pub point: [Complex64; 3],
    pub e_delta: Complex64,
    /// `|r(e~_delta)|`.
    pub residual: f64,
    pub iterations: u32,
    /// `|e_delta| / delta`.
    pub size_constant: f64,
}

/// `d delta^{1/eta}`.
pub fn slice_center(d: Complex64, eta: u32, delta: f64) -> Complex64 {
    d * delta.powf(1.0 / eta as f64)
}

/// Real root of `s -> r(d delta^{1/eta}, 0, s)` by damped Newton from 0.
pub fn solve_e_delta(r: &MixedPolynomial, d: Complex64, eta: u32, delta: f64) -> Result<EDelta, SliceError> {
    let x1 = slice_center(d, eta, delta);
    let f = NumericPolynomial::new(r);
    let df = NumericPolynomial::new(&(&r.wirtinger_derivative(Var::Z(2), 1) + &r.wirtinger_derivative(Var::ZBar(2), 1)));
    let at = |s: f64| [x1, Complex64::new(0.0, 0.0), Complex64::new(s, 0.0)];
    let value = |s: f64| f.evaluate(&at(s)).re;

    let mut s = 0.0;
    let mut fs = value(s);
    let mut iterations = 0;
    while iterations < MAX_NEWTON_ITERATIONS && fs.abs() > 1e-14 * delta {
        iterations += 1;
        let slope = df.evaluate(&at(s)).re;
        if slope == 0.0 || !slope.is_finite() {
            return Err(SliceError::SingularNormal { delta });
        }
        let step = fs / slope;
        let mut lambda = 1.0;
        let mut next = s - step;
        let mut fnext = value(next);
        while fnext.abs() > fs.abs() && lambda > 1e-6 {
            lambda *= 0.5;
            next = s - lambda * step;
            fnext = value(next);
        }
        let stalled = next == s;
        s = next;
        fs = fnext;
        if stalled {
            break;
        }
    }
    let residual = fs.abs();
    if residual >= 1e-12 * delta || !residual.is_finite() {
        return Err(SliceError::NoConvergence { delta, residual });
    }
    Ok(EDelta {
        delta,
        point: at(s),
        e_delta: Complex64::new(s, 0.0),
        residual,
        iterations,
        size_constant: s.abs() / delta,
    })
}

/// Shape of `rho` restricted to the slice: pure `zeta_2` coefficients up to order `m` and the
/// deviation of the `Re zeta_3` coefficient from 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceShape {
    pub max_pure_coefficient: f64,
    pub re_zeta3_error: f64,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct SliceNormalization {
    pub delta: f64,
    pub m: u32,
    pub e_delta: Complex64,
    pub tilde_e: [Complex64; 3],
    /// `(zeta_1, zeta_2, Phi_3(zeta_2, zeta_3))`, so `rho = r o phi`.
    pub phi: HoloPolyMap,
    /// `c_l` for `l = 2..=m`.
    pub c: BTreeMap<u32, ComplexRational>,
    /// `rho(d delta^{1/eta}, zeta'')`; the `z_1` slot is empty.
    pub rho_slice: MixedPolynomial,
    /// `rho(zeta_1, zeta'')`.
    pub rho: MixedPolynomial,
    /// Coefficients of `zeta_2^j conj(zeta_2)^k` in the slice, `j, k >= 1`, `j + k <= m`.
    pub a_jk: BTreeMap<(u32, u32), Complex64>,
    /// `A_l = max_{j+k=l} |a_jk|` for `l = 2..=m`.
    pub a_l: BTreeMap<u32, f64>,
    /// Infinite when every `A_l` vanishes (no mixed `zeta_2` term on the slice).
    pub tau: f64,
    pub shape: SliceShape,
}

impl SliceNormalization {
    /// `J_delta(zeta'') = (delta^2 + |zeta_3|^2 + sum_k A_k^2 |zeta_2|^{2k})^{1/2}`.
    pub fn j_delta(&self, zeta2: Complex64, zeta3: Complex64) -> f64 {
        let s2 = zeta2.norm_sqr();
        let sum: f64 = self.a_l.iter().map(|(&k, &a)| a * a * s2.powi(k as i32)).sum();
        (self.delta * self.delta + zeta3.norm_sqr() + sum).sqrt()
    }

    /// `tau(e~_delta, t) = min_l (t / A_l)^{1/l}` over the nonzero `A_l`; infinite when all vanish.
    pub fn tau_at(&self, t: f64) -> f64 {
        tau_from(&self.a_l, t)
    }

    pub fn c_l(&self, l: u32) -> Complex64 {
        self.c.get(&l).map_or(Complex64::new(0.0, 0.0), cr_to_c64)
    }

    /// `d^{j+k} rho / dzeta_2^j dconj(zeta_2)^k` at the slice origin, `= j! k! a_jk`.
    pub fn rho_derivative(&self, j: u32, k: u32) -> Complex64 {
        let coeff = self.rho_slice.coeff(&MixedMonomial::new([0, j, 0], [0, k, 0]));
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        cr_to_c64(&coeff) * fact(j) * fact(k)
    }

    pub fn a_m(&self) -> f64 {
        self.a_l.get(&self.m).copied().unwrap_or(0.0)
    }
}

fn tau_from(a_l: &BTreeMap<u32, f64>, t: f64) -> f64 {
    a_l.iter().filter(|(_, &a)| a > 0.0).map(|(&l, &a)| (t / a).powf(1.0 / l as f64)).fold(f64::INFINITY, f64::min)
}

/// Degree cap under which `r o Phi` is exact when `Phi_3` has degree `m` in `zeta_2`.
fn composition_cap(r: &MixedPolynomial, m: u32) -> u32 {
    r.terms()
        .map(|(mono, _)| mono.degree() + (mono.alpha[2] + mono.beta[2]) * (m.max(1) - 1))
        .max()
        .unwrap_or(0)
        .max(r.degree_cap())
}

/// Builds `Phi^1` and `phi^2, .., phi^m` at `tilde_e`, each `phi^l` removing the `w_2^l` term, and
/// reads off `c_l`, `a_jk`, `A_l` and `tau`.
pub fn slice_normalize(
    r: &MixedPolynomial,
    tilde_e: [Complex64; 3],
    delta: f64,
    m: u32,
) -> Result<SliceNormalization, SliceError> {
    let cap = composition_cap(r, m);
    let r = r.with_cap(cap);
    let e_exact = tilde_e.map(cr_from_c64);

    let r3 = r.wirtinger_derivative(Var::Z(2), 1).evaluate_exact(&e_exact);
    let r2 = r.wirtinger_derivative(Var::Z(1), 1).evaluate_exact(&e_exact);
    if is_zero(&r3) {
        return Err(SliceError::SingularNormal { delta });
    }
    let r3_inv = cr_one() / &r3;
    let half = cr_real(rational(1, 2));

    let z = |i: usize| MixedPolynomial::z(i, cap);
    let z2_pow = |l: u32| MixedPolynomial::monomial(MixedMonomial::new([0, l, 0], [0; 3]), cr_one(), cap);
    let third = |poly: MixedPolynomial| HoloPolyMap::new([z(0), z(1), poly]).expect("holomorphic components");

    let frozen_map = HoloPolyMap::new([MixedPolynomial::constant(e_exact[0].clone(), cap), z(1), z(2)])
        .expect("holomorphic components");
    let frozen = r.compose(&frozen_map);

    // Phi^1_3 = e + r3^{-1} (w3 / 2 - r2 w2), extended below by the c_l terms.
    let mut phi3 = &(&MixedPolynomial::constant(e_exact[2].clone(), cap) + &z(2).scale(&(&r3_inv * &half)))
        - &z(1).scale(&(&r3_inv * &r2));
    let mut rho_slice = frozen.compose(&third(phi3.clone()));
    let mut c = BTreeMap::new();
    for l in 2..=m {
        let c_l = rho_slice.coeff(&MixedMonomial::new([0, l, 0], [0; 3]));
        if !is_zero(&c_l) {
            let two_c = &c_l * cr_real(rational(2, 1));
            rho_slice = rho_slice.compose(&third(&z(2) - &z2_pow(l).scale(&two_c)));
            phi3 = &phi3 - &z2_pow(l).scale(&(&r3_inv * &c_l));
        }
        c.insert(l, c_l);
    }
    let phi = third(phi3);
    let rho = r.compose(&phi);

    let mut a_jk = BTreeMap::new();
    let mut a_l: BTreeMap<u32, f64> = (2..=m).map(|l| (l, 0.0)).collect();
    for (mono, coeff) in rho_slice.terms() {
        let (j, k) = (mono.alpha[1], mono.beta[1]);
        if j == 0 || k == 0 || j + k > m || mono.alpha[2] + mono.beta[2] > 0 {
            continue;
        }
        let v = cr_to_c64(coeff);
        a_jk.insert((j, k), v);
        let entry = a_l.entry(j + k).or_insert(0.0);
        *entry = entry.max(v.norm());
    }
    let tau = tau_from(&a_l, delta);

    let max_pure_coefficient = rho_slice
        .terms()
        .filter(|(mono, _)| {
            mono.is_pure() && mono.alpha[2] + mono.beta[2] == 0 && (1..=m.max(1)).contains(&mono.degree())
        })
        .map(|(_, c)| cr_to_c64(c).norm())
        .fold(0.0, f64::max);
    let re3 = cr_to_c64(&rho_slice.coeff(&MixedMonomial::z(2)));
    let re_zeta3_error = (re3 - Complex64::new(0.5, 0.0)).norm()
        + (cr_to_c64(&rho_slice.coeff(&MixedMonomial::zbar(2))) - Complex64::new(0.5, 0.0)).norm();
    let shape = SliceShape {
        max_pure_coefficient,
        re_zeta3_error,
        passed: max_pure_coefficient < 1e-12 && re_zeta3_error < 1e-12,
    };

    Ok(SliceNormalization {
        delta,
        m,
        e_delta: tilde_e[2],
        tilde_e,
        phi,
        c,
        rho_slice,
        rho,
        a_jk,
        a_l,
        tau,
        shape,
    })
}
