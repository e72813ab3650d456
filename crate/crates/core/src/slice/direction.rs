use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::SliceError;
use crate::newton::SliceDecomposition;
use crate::poly::NumericPolynomial;

/// A value of `min_M |M(e^{i theta})|` below this fraction of the best score counts as a zero.
const ZERO_FRACTION: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionChoice {
    pub theta0: f64,
    pub d: Complex64,
    /// Half-width of the arc around `theta0` on which no `M` vanishes.
    pub margin: f64,
    /// Per vertex polynomial `M_{alpha_2, beta_2}`: min of `|M(e^{i theta})|` over `|theta - theta0| <= margin / 2`.
    pub min_modulus_profile: BTreeMap<(u32, u32), f64>,
    pub samples: usize,
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Picks `theta0` maximizing `min_M |M(e^{i theta})|` on a uniform grid of `samples` angles.
/// Homogeneity makes `|M(tau e^{i theta})| / tau^{deg M}` independent of `tau`. Ties go to the
/// widest zero-free arc, then to the smallest angle.
pub fn choose_direction(decomp: &SliceDecomposition, samples: usize) -> Result<DirectionChoice, SliceError> {
    if decomp.m_polynomials.is_empty() {
        return Err(SliceError::EmptyDecomposition);
    }
    let samples = samples.max(4);
    let ms: Vec<((u32, u32), NumericPolynomial)> =
        decomp.m_polynomials.iter().map(|(k, vp)| (*k, NumericPolynomial::new(&vp.poly))).collect();
    let modulus = |m: &NumericPolynomial, theta: f64| {
        m.evaluate(&[Complex64::from_polar(1.0, theta), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]).norm()
    };
    let score = |theta: f64| ms.iter().map(|(_, m)| modulus(m, theta)).fold(f64::INFINITY, f64::min);

    let thetas: Vec<f64> = (0..samples).map(|k| TAU * k as f64 / samples as f64).collect();
    let scores: Vec<f64> = thetas.iter().map(|&t| score(t)).collect();
    let best = scores.iter().copied().fold(0.0, f64::max);
    if best <= 0.0 {
        return Err(SliceError::AllVertexPolynomialsVanish);
    }
    let floor = ZERO_FRACTION * best;

    // Zeros: refine every grid local minimum by ternary search and keep those that reach the floor.
    let step = TAU / samples as f64;
    let mut zeros = Vec::new();
    for k in 0..samples {
        let prev = scores[(k + samples - 1) % samples];
        let next = scores[(k + 1) % samples];
        if scores[k] > prev || scores[k] > next || scores[k] >= 0.5 * best {
            continue;
        }
        let (mut lo, mut hi) = (thetas[k] - step, thetas[k] + step);
        for _ in 0..100 {
            let a = lo + (hi - lo) / 3.0;
            let b = hi - (hi - lo) / 3.0;
            if score(a) <= score(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        let at = 0.5 * (lo + hi);
        if score(at).min(scores[k]) < floor {
            zeros.push(if scores[k] < floor { thetas[k] } else { at });
        }
    }
    let margin_at = |theta: f64| zeros.iter().map(|&z| circular_distance(theta, z)).fold(PI, f64::min);

    let mut choice = 0;
    let mut choice_margin = margin_at(thetas[0]);
    for k in 1..samples {
        if scores[k] < (1.0 - 1e-12) * best {
            continue;
        }
        let mk = margin_at(thetas[k]);
        if scores[choice] < (1.0 - 1e-12) * best || mk > choice_margin {
            choice = k;
            choice_margin = mk;
        }
    }
    let theta0 = thetas[choice];

    let profile = ms
        .iter()
        .map(|(key, m)| {
            let min = thetas
                .iter()
                .filter(|&&t| circular_distance(t, theta0) <= 0.5 * choice_margin)
                .map(|&t| modulus(m, t))
                .fold(f64::INFINITY, f64::min);
            (*key, min)
        })
        .collect();
    Ok(DirectionChoice {
        theta0,
        d: Complex64::from_polar(1.0, theta0),
        margin: choice_margin,
        min_modulus_profile: profile,
        samples,
    })
}
