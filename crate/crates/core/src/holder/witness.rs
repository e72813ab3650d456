//! Holomorphic witness functions `f(zeta_2, zeta_3)` and finite-difference Wirtinger derivatives.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::grid::GridWitness;

/// `(df/dz, df/dzbar)` by central differences with one Richardson step (error `O(h^4)`).
pub fn wirtinger_fd(f: impl Fn(Complex64) -> Complex64, z: Complex64, h: f64) -> (Complex64, Complex64) {
    let partials = |h: f64| {
        let dx = (f(z + h) - f(z - h)) / (2.0 * h);
        let ih = Complex64::new(0.0, h);
        let dy = (f(z + ih) - f(z - ih)) / (2.0 * h);
        (dx, dy)
    };
    let (dx1, dy1) = partials(h);
    let (dx2, dy2) = partials(0.5 * h);
    let dx = (4.0 * dx2 - dx1) / 3.0;
    let dy = (4.0 * dy2 - dy1) / 3.0;
    let i = Complex64::new(0.0, 1.0);
    ((dx - i * dy) * 0.5, (dx + i * dy) * 0.5)
}

/// A bounded function of `(zeta_2, zeta_3)` that should be holomorphic on the pushed-out domain.
pub trait HolomorphicWitness: Send + Sync {
    fn name(&self) -> String;

    /// `NaN` outside the witness's domain of definition.
    fn eval(&self, zeta2: Complex64, zeta3: Complex64) -> Complex64;

    /// Claimed sup of `|f|` on the pushed-out domain.
    fn declared_bound(&self) -> f64;

    /// Claimed lower bound for `|df/dzeta_3 (0, -b delta / 2)|`.
    fn declared_derivative_floor(&self, delta: f64) -> f64;

    /// Step used for finite differences near `(zeta_2, zeta_3)`.
    fn fd_step(&self) -> f64 {
        1e-4
    }

    fn d_zeta3(&self, zeta2: Complex64, zeta3: Complex64) -> Complex64 {
        wirtinger_fd(|w| self.eval(zeta2, w), zeta3, self.fd_step()).0
    }

    /// `(df/dconj(zeta_2), df/dconj(zeta_3))`; zero for a holomorphic witness.
    fn dbar(&self, zeta2: Complex64, zeta3: Complex64) -> [Complex64; 2] {
        let h = self.fd_step();
        [wirtinger_fd(|w| self.eval(w, zeta3), zeta2, h).1, wirtinger_fd(|w| self.eval(zeta2, w), zeta3, h).1]
    }
}

/// `f(zeta_2, zeta_3) = delta / (zeta_3 - delta)`, pole at `zeta_3 = delta` outside the domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DemoWitness {
    pub delta: f64,
}

impl HolomorphicWitness for DemoWitness {
    fn name(&self) -> String {
        "demo".into()
    }

    fn eval(&self, _zeta2: Complex64, zeta3: Complex64) -> Complex64 {
        self.delta / (zeta3 - self.delta)
    }

    /// `|zeta_3 - delta| >= delta / 2` wherever `Re zeta_3 < eps0 J_delta` with `eps0 <= 0.2`.
    fn declared_bound(&self) -> f64 {
        2.0
    }

    fn declared_derivative_floor(&self, delta: f64) -> f64 {
        1.0 / (3.0 * delta)
    }

    fn fd_step(&self) -> f64 {
        1e-3 * self.delta
    }

    fn d_zeta3(&self, _zeta2: Complex64, zeta3: Complex64) -> Complex64 {
        let w = zeta3 - self.delta;
        -self.delta / (w * w)
    }

    fn dbar(&self, _zeta2: Complex64, _zeta3: Complex64) -> [Complex64; 2] {
        [Complex64::new(0.0, 0.0); 2]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantWitness {
    pub value: Complex64,
}

impl HolomorphicWitness for ConstantWitness {
    fn name(&self) -> String {
        "constant".into()
    }

    fn eval(&self, _zeta2: Complex64, _zeta3: Complex64) -> Complex64 {
        self.value
    }

    fn declared_bound(&self) -> f64 {
        self.value.norm()
    }

    fn declared_derivative_floor(&self, _delta: f64) -> f64 {
        0.0
    }
}

/// `f = zeta_3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Zeta3Witness;

impl HolomorphicWitness for Zeta3Witness {
    fn name(&self) -> String {
        "zeta3".into()
    }

    fn eval(&self, _zeta2: Complex64, zeta3: Complex64) -> Complex64 {
        zeta3
    }

    fn declared_bound(&self) -> f64 {
        1.0
    }

    fn declared_derivative_floor(&self, _delta: f64) -> f64 {
        0.0
    }
}

/// Witness family indexed by `delta`, as named in configs and reports.
#[derive(Clone)]
pub enum WitnessSource {
    Demo,
    Constant(Complex64),
    Zeta3,
    Grid(Arc<GridWitness>),
}

impl WitnessSource {
    pub fn at(&self, delta: f64) -> Box<dyn HolomorphicWitness> {
        match self {
            WitnessSource::Demo => Box::new(DemoWitness { delta }),
            WitnessSource::Constant(value) => Box::new(ConstantWitness { value: *value }),
            WitnessSource::Zeta3 => Box::new(Zeta3Witness),
            WitnessSource::Grid(grid) => Box::new(grid.scaled(delta)),
        }
    }

    pub fn name(&self) -> String {
        match self {
            WitnessSource::Demo => "demo".into(),
            WitnessSource::Constant(v) => format!("constant({}, {})", v.re, v.im),
            WitnessSource::Zeta3 => "zeta3".into(),
            WitnessSource::Grid(g) => format!("grid:{}", g.name),
        }
    }
}

impl fmt::Debug for WitnessSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_matches_analytic_derivative() {
        let f = |z: Complex64| z * z * z;
        let z = Complex64::new(0.3, -0.2);
        let (dz, dzbar) = wirtinger_fd(f, z, 1e-3);
        assert!((dz - 3.0 * z * z).norm() < 1e-12);
        assert!(dzbar.norm() < 1e-12);
        let (dz, dzbar) = wirtinger_fd(|z: Complex64| Complex64::new(z.norm_sqr(), 0.0), z, 1e-3);
        assert!((dz - z.conj()).norm() < 1e-12 && (dzbar - z).norm() < 1e-12);
    }

    #[test]
    fn demo_derivative_at_half_depth() {
        // b = 1: |df/dzeta_3 (0, -delta/2)| = 1 / (2.25 delta) >= 1 / (3 delta).
        for delta in [1e-2, 1e-4, 1e-6] {
            let w = DemoWitness { delta };
            let d = w.d_zeta3(Complex64::new(0.0, 0.0), Complex64::new(-delta / 2.0, 0.0)).norm();
            assert!((d * delta - 1.0 / 2.25).abs() < 1e-12);
            assert!(d >= w.declared_derivative_floor(delta));
            let fd = wirtinger_fd(|z| w.eval(Complex64::new(0.0, 0.0), z), Complex64::new(-delta / 2.0, 0.0), w.fd_step());
            assert!((fd.0.norm() - d).abs() < 1e-8 * d);
        }
    }

    #[test]
    fn demo_is_holomorphic_away_from_pole() {
        let delta = 1e-3;
        let w = DemoWitness { delta };
        for (x, y) in [(-0.5, 0.0), (0.0, 1.0), (-3.0, 2.0), (0.2, -0.7)] {
            let z3 = Complex64::new(x * delta, y * delta);
            let (dz, dzbar) = wirtinger_fd(|z| w.eval(Complex64::new(0.0, 0.0), z), z3, w.fd_step());
            assert!(dzbar.norm() < 1e-10 * dz.norm(), "{z3}: {dzbar}");
        }
    }
}
