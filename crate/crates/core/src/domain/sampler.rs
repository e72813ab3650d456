//! Halton low-discrepancy points and the maps from the unit cube to discs.

use std::f64::consts::TAU;

use num_complex::Complex64;

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * f;
        index /= base;
        f *= inv;
    }
    out
}

/// Halton sequence in `dim <= 12` dimensions. The seed shifts the starting index, so equal
/// seeds give identical streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Halton {
    dim: usize,
    offset: u64,
}

impl Halton {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= PRIMES.len(), "Halton sampler supports at most {} dimensions", PRIMES.len());
        // Index 0 is the all-zero corner; start past it.
        Halton { dim, offset: 1 + seed.wrapping_mul(1_000_003) % (1 << 40) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: u64) -> Vec<f64> {
        PRIMES[..self.dim].iter().map(|&p| radical_inverse(self.offset + i, p)).collect()
    }

    pub fn points(&self, n: usize) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..n as u64).map(|i| self.point(i))
    }
}

/// Area-uniform point of the disc `|z| < radius` from `(u, v)` in the unit square.
pub fn disc_point(u: f64, v: f64, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * u.sqrt(), TAU * v)
}

/// Point whose modulus is log-uniform on `[lo, radius)`, for sup estimates that live at small scales.
pub fn log_disc_point(u: f64, v: f64, lo: f64, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * (lo / radius).powf(u), TAU * v)
}
