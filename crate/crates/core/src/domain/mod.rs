//! Pushed-out and family domains around a slice, polydiscs adapted to `J_delta`, and sampled
//! checks of the containment and interpolation estimates.

pub mod sampler;

use num_complex::Complex64;
use serde::Serialize;

use crate::newton::NewtonDiagram;
use crate::poly::NumericPolynomial;
use crate::slice::SliceNormalization;
pub use sampler::{disc_point, log_disc_point, radical_inverse, Halton};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("sampler produced no points in the slab")]
    EmptySlab,
    #[error("slab factor c = {0} must lie in [0, 1)")]
    InvalidSlab(f64),
}

fn origin() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// How the `zeta''` box is covered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// Area-uniform in `|zeta_2|, |zeta_3| < a`.
    #[default]
    Uniform,
    /// Log-uniform moduli down to `1e-3 delta`, resolving the scale `J_delta ~ delta`.
    Multiscale,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub samples: usize,
    pub seed: u64,
    pub mode: SamplingMode,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { samples: 100_000, seed: 0, mode: SamplingMode::Uniform }
    }
}

impl SamplerConfig {
    fn box_point(&self, u: &[f64], a: f64, delta: f64) -> (Complex64, Complex64) {
        match self.mode {
            SamplingMode::Uniform => (disc_point(u[0], u[1], a), disc_point(u[2], u[3], a)),
            SamplingMode::Multiscale => {
                let lo = 1e-3 * delta;
                (log_disc_point(u[0], u[1], lo, a), log_disc_point(u[2], u[3], lo, a))
            }
        }
    }
}

/// `Omega^{eps0}_{a, delta}`: `rho(d delta^{1/eta}, zeta'') < eps0 J_delta(zeta'')` in the box `|zeta_2|, |zeta_3| < a`.
pub struct PushedOutDomain<'a> {
    pub a: f64,
    pub epsilon0: f64,
    pub norm: &'a SliceNormalization,
    rho_slice: NumericPolynomial,
}

impl<'a> PushedOutDomain<'a> {
    pub fn new(norm: &'a SliceNormalization, a: f64, epsilon0: f64) -> Self {
        PushedOutDomain { a, epsilon0, norm, rho_slice: NumericPolynomial::new(&norm.rho_slice) }
    }

    pub fn rho(&self, zeta2: Complex64, zeta3: Complex64) -> f64 {
        self.rho_slice.evaluate(&[origin(), zeta2, zeta3]).re
    }

    pub fn contains(&self, zeta2: Complex64, zeta3: Complex64) -> bool {
        zeta2.norm() < self.a
            && zeta3.norm() < self.a
            && self.rho(zeta2, zeta3) < self.epsilon0 * self.norm.j_delta(zeta2, zeta3)
    }
}

/// Which fibre condition the slab is crossed with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FibreKind {
    /// `rho(zeta_1, zeta'') < 0`.
    True,
    /// `rho(d delta^{1/eta}, zeta'') < eps0 J_delta(zeta'')`.
    PushedOut,
}

/// `|zeta_1 - d delta^{1/eta}| < c delta^{1/eta}` crossed with a fibre condition on `|zeta_2|, |zeta_3| < a`.
pub struct FamilyDomain<'a> {
    pub c: f64,
    pub center: Complex64,
    pub radius: f64,
    pub kind: FibreKind,
    pushed: PushedOutDomain<'a>,
    rho: NumericPolynomial,
}

impl<'a> FamilyDomain<'a> {
    pub fn new(
        norm: &'a SliceNormalization,
        eta: u32,
        c: f64,
        a: f64,
        epsilon0: f64,
        kind: FibreKind,
    ) -> Result<Self, DomainError> {
        if !(0.0..1.0).contains(&c) {
            return Err(DomainError::InvalidSlab(c));
        }
        let scale = norm.delta.powf(1.0 / eta as f64);
        Ok(FamilyDomain {
            c,
            center: norm.tilde_e[0],
            radius: c * scale,
            kind,
            pushed: PushedOutDomain::new(norm, a, epsilon0),
            rho: NumericPolynomial::new(&norm.rho),
        })
    }

    pub fn in_slab(&self, zeta1: Complex64) -> bool {
        (zeta1 - self.center).norm() < self.radius || (self.radius == 0.0 && zeta1 == self.center)
    }

    pub fn rho(&self, point: &[Complex64; 3]) -> f64 {
        self.rho.evaluate(point).re
    }

    pub fn contains(&self, point: &[Complex64; 3]) -> bool {
        let [z1, z2, z3] = *point;
        if !self.in_slab(z1) {
            return false;
        }
        match self.kind {
            FibreKind::True => z2.norm() < self.pushed.a && z3.norm() < self.pushed.a && self.rho(point) < 0.0,
            FibreKind::PushedOut => self.pushed.contains(z2, z3),
        }
    }
}

/// `{|zeta_2 - c_2| < tau(e~, a_1 J(c)), |zeta_3 - c_3| < a_1 J(c)}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polydisc {
    pub center: [Complex64; 2],
    pub radii: (f64, f64),
}

impl Polydisc {
    pub fn new(norm: &SliceNormalization, center: [Complex64; 2], a1: f64) -> Self {
        let j = a1 * norm.j_delta(center[0], center[1]);
        Polydisc { center, radii: (norm.tau_at(j), j) }
    }

    pub fn contains(&self, zeta2: Complex64, zeta3: Complex64) -> bool {
        (zeta2 - self.center[0]).norm() < self.radii.0 && (zeta3 - self.center[1]).norm() < self.radii.1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainmentVerdict {
    pub delta: f64,
    pub c: f64,
    pub samples: usize,
    /// `sup |rho(d delta^{1/eta}, zeta'') - rho(zeta_1, zeta'')| / J_delta(zeta'')`.
    pub sup_ratio: f64,
    /// `sup_ratio / c`; 0 when `c = 0`.
    pub constant: f64,
    pub worst_point: [Complex64; 3],
    pub true_members: usize,
    /// Sampled points of `Omega_{a, delta, zeta_1}` outside `Omega^{eps0}_{a, delta, zeta_1}`.
    pub violations: usize,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContainmentParams {
    pub c: f64,
    pub a: f64,
    pub epsilon0: f64,
    /// Pass iff `sup_ratio <= max_constant * c`.
    pub max_constant: f64,
}

impl Default for ContainmentParams {
    fn default() -> Self {
        ContainmentParams { c: 0.1, a: 0.25, epsilon0: 0.1, max_constant: 10.0 }
    }
}

/// Samples the slab times the `zeta''` box and measures how far `rho(zeta_1, .)` moves from the
/// frozen slice, relative to `J_delta`; also counts points of the true fibre that leave the pushed-out one.
pub fn verify_containment(
    norm: &SliceNormalization,
    eta: u32,
    params: &ContainmentParams,
    sampler: &SamplerConfig,
) -> Result<ContainmentVerdict, DomainError> {
    let truth = FamilyDomain::new(norm, eta, params.c, params.a, params.epsilon0, FibreKind::True)?;
    let pushed = PushedOutDomain::new(norm, params.a, params.epsilon0);
    let halton = Halton::new(6, sampler.seed);
    let mut sup: f64 = 0.0;
    let mut worst = [origin(); 3];
    let mut in_slab = 0;
    let mut true_members = 0;
    let mut violations = 0;
    for u in halton.points(sampler.samples) {
        let z1 = truth.center + disc_point(u[4], u[5], truth.radius);
        if !truth.in_slab(z1) {
            continue;
        }
        in_slab += 1;
        let (z2, z3) = sampler.box_point(&u, params.a, norm.delta);
        let point = [z1, z2, z3];
        let frozen = pushed.rho(z2, z3);
        let ratio = (frozen - truth.rho(&point)).abs() / norm.j_delta(z2, z3);
        if ratio > sup {
            sup = ratio;
            worst = point;
        }
        if truth.contains(&point) {
            true_members += 1;
            if !pushed.contains(z2, z3) {
                violations += 1;
            }
        }
    }
    if in_slab == 0 {
        return Err(DomainError::EmptySlab);
    }
    let constant = if params.c > 0.0 { sup / params.c } else { 0.0 };
    let bound_ok = if params.c > 0.0 { constant <= params.max_constant } else { sup <= 1e-12 };
    Ok(ContainmentVerdict {
        delta: norm.delta,
        c: params.c,
        samples: in_slab,
        sup_ratio: sup,
        constant,
        worst_point: worst,
        true_members,
        violations,
        passed: bound_ok && violations == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterpolationRow {
    pub point: (u32, u32),
    pub segment: usize,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterpolationVerdict {
    pub rows: Vec<InterpolationRow>,
    pub max_ratio: f64,
    pub passed: bool,
}

/// `x^p y^q <= x^{p_{nu-1}} y^{q_{nu-1}} + x^{p_nu} y^{q_nu}` with constant 1 for every
/// `Gamma_L` projection on segment `nu`, sampled over `0 < x, y <= 1/2`.
pub fn verify_interpolation(diagram: &NewtonDiagram, sampler: &SamplerConfig) -> InterpolationVerdict {
    let mut points: Vec<((u32, u32), usize)> = diagram
        .gamma_l
        .iter()
        .filter_map(|mono| {
            let pt = mono.projection();
            diagram.segment_containing(pt).map(|nu| (pt, nu))
        })
        .collect();
    points.sort();
    points.dedup();
    let halton = Halton::new(2, sampler.seed);
    let samples: Vec<(f64, f64)> = halton
        .points(sampler.samples)
        .map(|u| match sampler.mode {
            SamplingMode::Uniform => (0.5 * u[0], 0.5 * u[1]),
            SamplingMode::Multiscale => (0.5 * 1e-6f64.powf(u[0]), 0.5 * 1e-6f64.powf(u[1])),
        })
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .collect();
    let rows: Vec<InterpolationRow> = points
        .into_iter()
        .map(|((p, q), nu)| {
            let (p0, q0) = diagram.vertices[nu - 1];
            let (p1, q1) = diagram.vertices[nu];
            let mono = |x: f64, y: f64, a: u32, b: u32| x.powi(a as i32) * y.powi(b as i32);
            let max_ratio = samples
                .iter()
                .map(|&(x, y)| mono(x, y, p, q) / (mono(x, y, p0, q0) + mono(x, y, p1, q1)))
                .fold(0.0, f64::max);
            InterpolationRow { point: (p, q), segment: nu, max_ratio }
        })
        .collect();
    let max_ratio = rows.iter().map(|r| r.max_ratio).fold(0.0, f64::max);
    InterpolationVerdict { rows, max_ratio, passed: max_ratio <= 1.0 + 1e-12 }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JnuVerdict {
    pub delta: f64,
    pub sup_ratio: f64,
    pub worst_point: [Complex64; 2],
    pub passed: bool,
}

/// `J^nu_delta = delta + |zeta_3| + sum_nu delta^{p_nu/eta} |zeta_2|^{q_nu}` over `J_delta`,
/// sampled on `|zeta_2|, |zeta_3| < a`; passes when the sup stays below `max_constant`.
pub fn verify_jnu_dominated(
    norm: &SliceNormalization,
    diagram: &NewtonDiagram,
    a: f64,
    max_constant: f64,
    sampler: &SamplerConfig,
) -> JnuVerdict {
    let delta = norm.delta;
    let eta = diagram.eta as f64;
    let weights: Vec<(f64, i32)> =
        diagram.vertices[1..].iter().map(|&(p, q)| (delta.powf(p as f64 / eta), q as i32)).collect();
    let j_nu = |z2: Complex64, z3: Complex64| {
        delta + z3.norm() + weights.iter().map(|&(w, q)| w * z2.norm().powi(q)).sum::<f64>()
    };
    let mut sup: f64 = 0.0;
    let mut worst = [origin(); 2];
    let mut consider = |z2: Complex64, z3: Complex64| {
        let ratio = j_nu(z2, z3) / norm.j_delta(z2, z3);
        if ratio > sup {
            sup = ratio;
            worst = [z2, z3];
        }
    };
    consider(origin(), origin());
    for u in Halton::new(4, sampler.seed).points(sampler.samples) {
        let (z2, z3) = sampler.box_point(&u, a, delta);
        consider(z2, z3);
    }
    JnuVerdict { delta, sup_ratio: sup, worst_point: worst, passed: sup <= max_constant }
}
