//! The exponent-extraction argument as a computation: cutoff, the test form
//! `beta = dbar(cutoffs * f)`, its sup-norm scaling, the witness gap, the circle average `H_delta`,
//! and the conditional verdict `eps <= 1/eta`.

pub mod grid;
pub mod witness;

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{disc_point, log_disc_point, Halton, SamplerConfig};
use crate::poly::{NumericPolynomial, Rational};
use crate::slice::{fit_loglog, LogLogFit, SliceNormalization};
pub use grid::{GridError, GridWitness};
pub use witness::{wirtinger_fd, ConstantWitness, DemoWitness, HolomorphicWitness, WitnessSource, Zeta3Witness};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum HolderError {
    #[error("no sampled shell point lies in the domain at delta = {delta}")]
    DegenerateSampling { delta: f64 },
    #[error("need at least {need} delta values, got {got}")]
    ShortSweep { need: usize, got: usize },
    #[error("witness is undefined at {point:?}")]
    WitnessUndefined { point: [Complex64; 3] },
    #[error("cannot conclude: {0}")]
    Prerequisite(String),
}

fn g(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

fn dg(x: f64) -> f64 {
    if x > 0.0 {
        g(x) / (x * x)
    } else {
        0.0
    }
}

/// `phi(t) = 1` for `t <= 1/2`, `0` for `t >= 3/4`, built from `exp(-1/x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CutoffProfile {
    pub inner: f64,
    pub outer: f64,
    /// `sup |phi'|`.
    pub derivative_bound: f64,
}

impl Default for CutoffProfile {
    fn default() -> Self {
        let mut c = CutoffProfile { inner: 0.5, outer: 0.75, derivative_bound: 0.0 };
        let n = 20_000;
        c.derivative_bound = (0..=n)
            .map(|i| c.derivative(c.inner + (c.outer - c.inner) * i as f64 / n as f64).abs())
            .fold(0.0, f64::max);
        c
    }
}

impl CutoffProfile {
    fn x(&self, t: f64) -> f64 {
        (t - self.inner) / (self.outer - self.inner)
    }

    pub fn value(&self, t: f64) -> f64 {
        let x = self.x(t);
        if x <= 0.0 {
            return 1.0;
        }
        if x >= 1.0 {
            return 0.0;
        }
        g(1.0 - x) / (g(x) + g(1.0 - x))
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let x = self.x(t);
        if x <= 0.0 || x >= 1.0 {
            return 0.0;
        }
        let (a, b) = (g(x), g(1.0 - x));
        // d/dx [b / (a + b)] = -(a' b + a b') / (a + b)^2 with b' = -g'(1 - x).
        let ds = -(dg(x) * b + a * dg(1.0 - x)) / ((a + b) * (a + b));
        ds / (self.outer - self.inner)
    }

    /// `phi(|w| / s)` and its `dconj(w)` derivative `phi'(|w|/s) w / (2 s |w|)`.
    pub fn radial(&self, w: Complex64, s: f64) -> (f64, Complex64) {
        let r = w.norm();
        let v = self.value(r / s);
        if r == 0.0 {
            return (v, Complex64::new(0.0, 0.0));
        }
        (v, w * (self.derivative(r / s) / (2.0 * s * r)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HolderParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub epsilon0: f64,
    pub quadrature_nodes: usize,
}

impl Default for HolderParams {
    fn default() -> Self {
        HolderParams { a: 0.25, b: 1.0, c: 0.1, epsilon0: 0.1, quadrature_nodes: 256 }
    }
}

/// `beta = dbar(phi(|zeta_1 - x_1| / (c delta^{1/eta})) phi(|zeta_2| / (a/2)) phi(|zeta_3| / (a/2)) f)`.
pub struct TestForm<'w> {
    pub delta: f64,
    pub center: Complex64,
    /// `c delta^{1/eta}`.
    pub slab_scale: f64,
    pub half_a: f64,
    pub cutoff: CutoffProfile,
    pub witness: &'w dyn HolomorphicWitness,
}

impl<'w> TestForm<'w> {
    pub fn new(
        witness: &'w dyn HolomorphicWitness,
        norm: &SliceNormalization,
        eta: u32,
        params: &HolderParams,
    ) -> Self {
        TestForm {
            delta: norm.delta,
            center: norm.tilde_e[0],
            slab_scale: params.c * norm.delta.powf(1.0 / eta as f64),
            half_a: params.a / 2.0,
            cutoff: CutoffProfile::default(),
            witness,
        }
    }

    /// The cut-off product `chi f` before differentiation.
    pub fn potential(&self, z: &[Complex64; 3]) -> Complex64 {
        let chi = self.cutoff.value((z[0] - self.center).norm() / self.slab_scale)
            * self.cutoff.value(z[1].norm() / self.half_a)
            * self.cutoff.value(z[2].norm() / self.half_a);
        if chi == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.witness.eval(z[1], z[2]) * chi
    }

    /// Coefficients of `dconj(zeta_1)`, `dconj(zeta_2)`, `dconj(zeta_3)` by the product rule.
    pub fn coefficients(&self, z: &[Complex64; 3]) -> [Complex64; 3] {
        let (c1, d1) = self.cutoff.radial(z[0] - self.center, self.slab_scale);
        let (c2, d2) = self.cutoff.radial(z[1], self.half_a);
        let (c3, d3) = self.cutoff.radial(z[2], self.half_a);
        if c1 * c2 * c3 == 0.0 && d1.norm() + d2.norm() + d3.norm() == 0.0 {
            return [Complex64::new(0.0, 0.0); 3];
        }
        let f = self.witness.eval(z[1], z[2]);
        let [fb2, fb3] = self.witness.dbar(z[1], z[2]);
        [d1 * c2 * c3 * f, (d2 * f + fb2 * c2) * c1 * c3, (d3 * f + fb3 * c3) * c1 * c2]
    }

    pub fn norm_at(&self, z: &[Complex64; 3]) -> f64 {
        self.coefficients(z).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaSample {
    pub delta: f64,
    pub sup_norm: f64,
    pub worst_point: [Complex64; 3],
    pub domain_points: usize,
}

/// `||beta||_inf` over the true domain, sampling the three cutoff transition shells in turn;
/// the free `zeta''` coordinates are log-radial down to `1e-3 delta`.
pub fn beta_sup_norm(
    form: &TestForm<'_>,
    norm: &SliceNormalization,
    sampler: &SamplerConfig,
) -> Result<BetaSample, HolderError> {
    let rho = NumericPolynomial::new(&norm.rho);
    let lo = 1e-3 * form.delta;
    let outer = form.cutoff.outer;
    let inner = form.cutoff.inner;
    let annulus = |u: f64, v: f64, s: f64| {
        let r2 = (inner * s).powi(2) + u * ((outer * s).powi(2) - (inner * s).powi(2));
        Complex64::from_polar(r2.sqrt(), TAU * v)
    };
    let mut sup: f64 = 0.0;
    let mut worst = [Complex64::new(0.0, 0.0); 3];
    let mut count = 0;
    for (i, u) in Halton::new(6, sampler.seed).points(sampler.samples).enumerate() {
        let z1_disc = || form.center + disc_point(u[0], u[1], outer * form.slab_scale);
        let z = match i % 3 {
            0 => [
                form.center + annulus(u[0], u[1], form.slab_scale),
                log_disc_point(u[2], u[3], lo, outer * form.half_a),
                log_disc_point(u[4], u[5], lo, outer * form.half_a),
            ],
            1 => [z1_disc(), annulus(u[2], u[3], form.half_a), log_disc_point(u[4], u[5], lo, outer * form.half_a)],
            _ => [z1_disc(), log_disc_point(u[2], u[3], lo, outer * form.half_a), annulus(u[4], u[5], form.half_a)],
        };
        if rho.evaluate(&z).re >= 0.0 {
            continue;
        }
        count += 1;
        let n = form.norm_at(&z);
        if n.is_nan() {
            return Err(HolderError::WitnessUndefined { point: z });
        }
        if n > sup {
            sup = n;
            worst = z;
        }
    }
    if count == 0 {
        return Err(HolderError::DegenerateSampling { delta: form.delta });
    }
    Ok(BetaSample { delta: form.delta, sup_norm: sup, worst_point: worst, domain_points: count })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaNormFit {
    pub samples: Vec<BetaSample>,
    pub target: f64,
    pub fit: Option<LogLogFit>,
    /// `(min, max)` of `||beta|| delta^{1/eta}`.
    pub band: (f64, f64),
    pub passed: bool,
}

/// Fits `log ||beta||_inf` against `log delta`; passes when the slope is within `slope_tol` of
/// `-1/eta` and the realized constants stay within a factor 10 of each other.
pub fn beta_sup_norm_fit(
    norms: &[&SliceNormalization],
    eta: u32,
    source: &WitnessSource,
    params: &HolderParams,
    sampler: &SamplerConfig,
    slope_tol: f64,
) -> Result<BetaNormFit, HolderError> {
    if norms.len() < 5 {
        return Err(HolderError::ShortSweep { need: 5, got: norms.len() });
    }
    let samples: Vec<BetaSample> = std::thread::scope(|scope| {
        let handles: Vec<_> = norms
            .iter()
            .map(|&norm| {
                scope.spawn(move || {
                    let witness = source.at(norm.delta);
                    let form = TestForm::new(witness.as_ref(), norm, eta, params);
                    beta_sup_norm(&form, norm, sampler)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("beta worker panicked")).collect::<Result<Vec<_>, _>>()
    })?;
    let deltas: Vec<f64> = samples.iter().map(|s| s.delta).collect();
    let values: Vec<f64> = samples.iter().map(|s| s.sup_norm).collect();
    let target = -1.0 / eta as f64;
    let fit = fit_loglog(&deltas, &values);
    let constants: Vec<f64> = samples.iter().map(|s| s.sup_norm * s.delta.powf(-target)).collect();
    let band = (constants.iter().copied().fold(f64::INFINITY, f64::min), constants.iter().copied().fold(0.0, f64::max));
    let stable = band.0 > 0.0 && band.1 / band.0 <= 10.0;
    let passed = stable && fit.as_ref().is_some_and(|f| f.points >= 5 && (f.slope - target).abs() <= slope_tol);
    Ok(BetaNormFit { samples, target, fit, band, passed })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessGapTable {
    pub witness: String,
    pub b: f64,
    pub deltas: Vec<f64>,
    /// `|f(0, -b delta) - f(0, -b delta / 2)|`.
    pub gaps: Vec<f64>,
    /// `|df/dzeta_3 (0, -b delta / 2)|`.
    pub derivatives: Vec<f64>,
    /// `derivative * delta`, compared against `1/3`.
    pub derivative_constants: Vec<f64>,
    pub min_gap: f64,
    /// Slope of `log gap` against `log delta`; positive means the gap decays.
    pub gap_slope: Option<f64>,
    pub gap_ok: bool,
    pub derivative_ok: bool,
    /// Sampled `|f|` never exceeds the declared bound on the sampled pushed-out points.
    pub bound_ok: bool,
    pub passed: bool,
}

/// Gap `|f(0, -b delta) - f(0, -b delta/2)|` over the sweep: must stay above `gap_floor` and not decay.
/// Also checks `|f'| >= max(declared floor, 1 / (3 delta))` at `(0, -b delta / 2)` and the declared bound
/// on `sup_points` (pushed-out domain samples supplied per `delta`).
pub fn witness_gap_check(
    source: &WitnessSource,
    deltas: &[f64],
    b: f64,
    gap_floor: f64,
    sup_points: &[Vec<[Complex64; 2]>],
) -> WitnessGapTable {
    let zero = Complex64::new(0.0, 0.0);
    let mut gaps = Vec::new();
    let mut derivatives = Vec::new();
    let mut derivative_ok = true;
    let mut bound_ok = true;
    for (k, &delta) in deltas.iter().enumerate() {
        let f = source.at(delta);
        let deep = f.eval(zero, Complex64::new(-b * delta, 0.0));
        let half = f.eval(zero, Complex64::new(-b * delta / 2.0, 0.0));
        gaps.push((deep - half).norm());
        let d = f.d_zeta3(zero, Complex64::new(-b * delta / 2.0, 0.0)).norm();
        derivatives.push(d);
        let floor = f.declared_derivative_floor(delta).max(1.0 / (3.0 * delta));
        derivative_ok &= d >= floor * (1.0 - 1e-12);
        if let Some(points) = sup_points.get(k) {
            bound_ok &= points.iter().all(|p| f.eval(p[0], p[1]).norm() <= f.declared_bound() * (1.0 + 1e-12));
        }
    }
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let gap_slope = fit_loglog(deltas, &gaps).map(|f| f.slope);
    let gap_ok = min_gap >= gap_floor && gap_slope.map_or(true, |s| s <= 0.05);
    WitnessGapTable {
        witness: source.name(),
        b,
        deltas: deltas.to_vec(),
        derivative_constants: derivatives.iter().zip(deltas).map(|(d, delta)| d * delta).collect(),
        gaps,
        derivatives,
        min_gap,
        gap_slope,
        gap_ok,
        derivative_ok,
        bound_ok,
        passed: gap_ok && derivative_ok && bound_ok,
    }
}

/// `H_delta = |(1/2pi) int h(q_1(theta)) - h(q_2(theta)) dtheta|` with
/// `q_k(theta) = (x_1 + (4/5) c delta^{1/eta} e^{i theta}, 0, -b delta / k)`, trapezoid rule.
pub fn circle_average_h(
    h: impl Fn(&[Complex64; 3]) -> Complex64,
    center: Complex64,
    delta: f64,
    eta: u32,
    b: f64,
    c: f64,
    nodes: usize,
) -> Result<f64, HolderError> {
    let radius = 0.8 * c * delta.powf(1.0 / eta as f64);
    let zero = Complex64::new(0.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let z1 = center + Complex64::from_polar(radius, TAU * k as f64 / nodes as f64);
        let q1 = [z1, zero, Complex64::new(-b * delta / 2.0, 0.0)];
        let q2 = [z1, zero, Complex64::new(-b * delta, 0.0)];
        let v = h(&q1) - h(&q2);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(HolderError::WitnessUndefined { point: q1 });
        }
        sum += v;
    }
    Ok((sum / nodes as f64).norm())
}

/// Mean-value self-test: circle average of `h` about `center` against `h(center)`.
pub fn mean_value_defect(h: impl Fn(Complex64) -> Complex64, center: Complex64, radius: f64, nodes: usize) -> f64 {
    let mean = (0..nodes)
        .map(|k| h(center + Complex64::from_polar(radius, TAU * k as f64 / nodes as f64)))
        .sum::<Complex64>()
        / nodes as f64;
    (mean - h(center)).norm()
}

fn serialize_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolderVerdict {
    pub eta: u32,
    /// `1/eta` exactly.
    #[serde(serialize_with = "serialize_rational")]
    pub bound: Rational,
    pub bound_value: f64,
    pub beta_norm_slope: Option<f64>,
    pub witness_gap: Vec<f64>,
    pub conclusion: String,
    pub reasoning: Vec<String>,
}

/// Emits `eps <= 1/eta` once the `beta` scaling and the witness gap have been verified.
pub fn conclude(eta: u32, beta: &BetaNormFit, gap: &WitnessGapTable) -> Result<HolderVerdict, HolderError> {
    if !beta.passed {
        return Err(HolderError::Prerequisite("beta sup-norm scaling failed".into()));
    }
    if !gap.passed {
        return Err(HolderError::Prerequisite("witness gap check failed".into()));
    }
    let slope = beta.fit.as_ref().map(|f| f.slope);
    Ok(HolderVerdict {
        eta,
        bound: Rational::new(BigInt::from(1), BigInt::from(eta)),
        bound_value: 1.0 / eta as f64,
        beta_norm_slope: slope,
        witness_gap: gap.gaps.clone(),
        conclusion: format!("no solution operator for dbar gains Holder regularity eps > 1/{eta}"),
        reasoning: vec![
            format!("||beta||_inf ~ delta^(-1/{eta}) (fitted slope {:.4})", slope.unwrap_or(f64::NAN)),
            format!("H_delta >= {:.6} uniformly in delta (witness gap)", gap.min_gap),
            "a Holder-eps solution u of dbar u = beta gives H_delta <~ delta^eps ||beta||_inf ~ delta^(eps - 1/eta)".into(),
            format!("H_delta >~ 1 as delta -> 0 then forces eps <= 1/{eta}"),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::coeff::cr_one;
    use crate::poly::{MixedMonomial, MixedPolynomial};
    use crate::slice::{slice_normalize, solve_e_delta, GeometricSweep};

    fn e1(k: u32) -> MixedPolynomial {
        let cap = 2 * k + 1;
        let abs2 = |a: [u32; 3]| MixedPolynomial::monomial(MixedMonomial::new(a, a), cr_one(), cap);
        &(&MixedPolynomial::re_z(2, cap) + &abs2([0, 1, 0])) + &abs2([k, 0, 0])
    }

    fn sweep(r: &MixedPolynomial, eta: u32, m: u32, deltas: &[f64]) -> Vec<SliceNormalization> {
        deltas
            .iter()
            .map(|&delta| {
                let e = solve_e_delta(r, Complex64::new(1.0, 0.0), eta, delta).unwrap();
                slice_normalize(r, e.point, delta, m).unwrap()
            })
            .collect()
    }

    #[test]
    fn cutoff_plateaus_and_derivative() {
        let c = CutoffProfile::default();
        assert_eq!(c.value(0.3), 1.0);
        assert_eq!(c.value(0.5), 1.0);
        assert_eq!(c.value(0.75), 0.0);
        assert!((c.value(0.625) - 0.5).abs() < 1e-15);
        for i in 0..100 {
            let t = 0.5 + 0.25 * i as f64 / 100.0;
            let v = c.value(t);
            assert!((0.0..=1.0).contains(&v));
            let fd = (c.value(t + 1e-7) - c.value(t - 1e-7)) / 2e-7;
            assert!((fd - c.derivative(t)).abs() < 1e-5);
        }
        // The smooth step has slope 2 at its midpoint; rescaled to width 1/4 that is 8.
        assert!((c.derivative_bound - 8.0).abs() < 1e-6);
    }

    #[test]
    fn beta_vanishes_off_the_shells() {
        let n = &sweep(&e1(2), 4, 2, &[1e-3])[0];
        let w = DemoWitness { delta: 1e-3 };
        let form = TestForm::new(&w, n, 4, &HolderParams::default());
        let inside = [form.center, Complex64::new(0.01, 0.0), Complex64::new(-0.01, 0.0)];
        assert_eq!(form.norm_at(&inside), 0.0);
        let outside = [form.center + 0.9 * form.slab_scale, Complex64::new(0.2, 0.0), Complex64::new(-0.2, 0.0)];
        assert_eq!(form.norm_at(&outside), 0.0);
    }

    #[test]
    fn beta_matches_finite_difference_dbar() {
        let delta = 1e-3;
        let n = &sweep(&e1(2), 4, 2, &[delta])[0];
        let w = DemoWitness { delta };
        let form = TestForm::new(&w, n, 4, &HolderParams::default());
        let mut worst: f64 = 0.0;
        for (i, u) in Halton::new(6, 3).points(10_000).enumerate() {
            let shell = |uu: f64, vv: f64, s: f64| Complex64::from_polar(s * (0.5 + 0.25 * uu), TAU * vv);
            let mut z = [
                form.center + disc_point(u[0], u[1], 0.7 * form.slab_scale),
                disc_point(u[2], u[3], 0.3 * form.half_a),
                Complex64::new(-delta, 0.0) + disc_point(u[4], u[5], 0.5 * delta),
            ];
            match i % 3 {
                0 => z[0] = form.center + shell(u[0], u[1], form.slab_scale),
                1 => z[1] = shell(u[2], u[3], form.half_a),
                _ => z[2] = shell(u[4], u[5], form.half_a),
            }
            let analytic = form.coefficients(&z);
            for k in 0..3 {
                let h = 1e-4 * if k == 0 { form.slab_scale } else { form.half_a.min(delta) };
                let fd = wirtinger_fd(
                    |wk| {
                        let mut p = z;
                        p[k] = wk;
                        form.potential(&p)
                    },
                    z[k],
                    h,
                )
                .1;
                // Errors are measured against the size of the cutoff gradient, not the local value.
                let s_k = if k == 0 { form.slab_scale } else { form.half_a };
                let scale = (w.eval(z[1], z[2]).norm() * form.cutoff.derivative_bound / s_k).max(analytic[k].norm());
                worst = worst.max((fd - analytic[k]).norm() / scale);
            }
        }
        assert!(worst < 1e-5, "{worst}");
    }

    #[test]
    fn e1_beta_slope_is_minus_one_over_eta() {
        let deltas = GeometricSweep::default().values();
        let norms = sweep(&e1(2), 4, 2, &deltas);
        let refs: Vec<&SliceNormalization> = norms.iter().collect();
        let sampler = SamplerConfig { samples: 6000, ..Default::default() };
        let fit = beta_sup_norm_fit(&refs, 4, &WitnessSource::Demo, &HolderParams::default(), &sampler, 0.1).unwrap();
        assert!(fit.passed, "{fit:?}");
        let constant = beta_sup_norm_fit(
            &refs,
            4,
            &WitnessSource::Constant(Complex64::new(1.0, 0.0)),
            &HolderParams::default(),
            &sampler,
            0.1,
        )
        .unwrap();
        assert!((constant.fit.unwrap().slope + 0.25).abs() < 0.1);
    }

    #[test]
    fn demo_gap_is_one_sixth() {
        let deltas = GeometricSweep::default().values();
        let t = witness_gap_check(&WitnessSource::Demo, &deltas, 1.0, 1e-3, &[]);
        assert!(t.passed);
        assert!(t.gaps.iter().all(|g| (g - 1.0 / 6.0).abs() < 1e-12));
        assert!(t.derivative_constants.iter().all(|d| (d - 1.0 / 2.25).abs() < 1e-9));
        let constant = witness_gap_check(&WitnessSource::Constant(Complex64::new(1.0, 0.0)), &deltas, 1.0, 1e-3, &[]);
        assert!(!constant.passed && constant.min_gap == 0.0);
        let linear = witness_gap_check(&WitnessSource::Zeta3, &deltas, 1.0, 1e-3, &[]);
        assert!(!linear.gap_ok);
        assert!((linear.gap_slope.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn circle_average_examples() {
        let (delta, eta, b, c): (f64, u32, f64, f64) = (1e-4, 4, 1.0, 0.1);
        let center = Complex64::new(delta.powf(0.25), 0.0);
        let w = DemoWitness { delta };
        let h = circle_average_h(|z| w.eval(z[1], z[2]), center, delta, eta, b, c, 256).unwrap();
        assert!((h - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(circle_average_h(|z| z[0], center, delta, eta, b, c, 256).unwrap(), 0.0);
        let poly = |z: &[Complex64; 3]| z[0] * z[0] * z[0] + z[0].conj() * z[2] * 1e3;
        let h1 = circle_average_h(poly, center, delta, eta, b, c, 64).unwrap();
        let h2 = circle_average_h(poly, center, delta, eta, b, c, 128).unwrap();
        assert!((h1 - h2).abs() < 1e-10);
        let defect = mean_value_defect(|z| z * z * z - 2.0 * z, center, 0.8 * c * delta.powf(0.25), 256);
        assert!(defect < 1e-10);
    }

    #[test]
    fn conclusion_bound_is_exact() {
        let deltas = GeometricSweep::default().values();
        let norms = sweep(&e1(2), 4, 2, &deltas);
        let refs: Vec<&SliceNormalization> = norms.iter().collect();
        let sampler = SamplerConfig { samples: 3000, ..Default::default() };
        let beta = beta_sup_norm_fit(&refs, 4, &WitnessSource::Demo, &HolderParams::default(), &sampler, 0.1).unwrap();
        let gap = witness_gap_check(&WitnessSource::Demo, &deltas, 1.0, 1e-3, &[]);
        let v = conclude(4, &beta, &gap).unwrap();
        assert_eq!(v.bound, Rational::new(BigInt::from(1), BigInt::from(4)));
        let bad = witness_gap_check(&WitnessSource::Zeta3, &deltas, 1.0, 1e-3, &[]);
        assert!(conclude(4, &beta, &bad).is_err());
    }
}
