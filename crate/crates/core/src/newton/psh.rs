//! Sampled plurisubharmonicity and the mixed-`z_2` witness search.

use nalgebra::Matrix3;
use num_complex::Complex64;

use super::NewtonDiagram;
use crate::poly::{ComplexRational, MixedMonomial, MixedPolynomial, NumericPolynomial, Var};

/// Grid over the polydisc `|z_i| <= radius`: `per_dim` equispaced values per real coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub per_dim: usize,
    pub radius: f64,
    pub tolerance: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { per_dim: 9, radius: 0.5, tolerance: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PshVerdict {
    pub passed: bool,
    pub min_eigenvalue: f64,
    pub worst_point: [Complex64; 3],
    pub points_checked: usize,
}

/// Eigenvalues (ascending) of the Hermitian matrix `[[a, d, e], [conj d, b, f], [conj e, conj f, c]]`.
pub fn hermitian3_eigenvalues(diag: [f64; 3], d: Complex64, e: Complex64, f: Complex64) -> [f64; 3] {
    let re = |x: f64| Complex64::new(x, 0.0);
    #[rustfmt::skip]
    let m = Matrix3::new(
        re(diag[0]), d, e,
        d.conj(), re(diag[1]), f,
        e.conj(), f.conj(), re(diag[2]),
    );
    let mut ev: [f64; 3] = m.symmetric_eigenvalues().into();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Compiled complex Hessian `d^2 p / dz_i dconj(z_j)` for `i <= j`.
struct Hessian {
    diag: [NumericPolynomial; 3],
    upper: [NumericPolynomial; 3],
    /// Variables the Hessian depends on.
    active: [bool; 3],
}

impl Hessian {
    fn new(p: &MixedPolynomial) -> Self {
        let entry = |i: usize, j: usize| p.wirtinger_derivative(Var::Z(i), 1).wirtinger_derivative(Var::ZBar(j), 1);
        let polys = [entry(0, 0), entry(1, 1), entry(2, 2), entry(0, 1), entry(0, 2), entry(1, 2)];
        let mut active = [false; 3];
        for poly in &polys {
            for (mono, _) in poly.terms() {
                for (k, flag) in active.iter_mut().enumerate() {
                    *flag |= mono.alpha[k] > 0 || mono.beta[k] > 0;
                }
            }
        }
        let c = |q: &MixedPolynomial| NumericPolynomial::new(q);
        Hessian {
            diag: [c(&polys[0]), c(&polys[1]), c(&polys[2])],
            upper: [c(&polys[3]), c(&polys[4]), c(&polys[5])],
            active,
        }
    }

    fn min_eigenvalue(&self, z: &[Complex64; 3]) -> f64 {
        let diag = [0, 1, 2].map(|i| self.diag[i].evaluate(z).re);
        let [d, e, f] = [0, 1, 2].map(|i| self.upper[i].evaluate(z));
        hermitian3_eigenvalues(diag, d, e, f)[0]
    }
}

fn axis(per_dim: usize, radius: f64) -> Vec<f64> {
    if per_dim <= 1 {
        return vec![0.0];
    }
    (0..per_dim).map(|i| -radius + 2.0 * radius * i as f64 / (per_dim - 1) as f64).collect()
}

fn disc_points(per_dim: usize, radius: f64) -> Vec<Complex64> {
    let xs = axis(per_dim, radius);
    let mut out = Vec::new();
    for &x in &xs {
        for &y in &xs {
            let z = Complex64::new(x, y);
            if z.norm() <= radius * (1.0 + 1e-12) {
                out.push(z);
            }
        }
    }
    out
}

/// Minimal eigenvalue of the complex Hessian over the grid. Variables the Hessian does not
/// depend on are held at 0, which leaves the minimum unchanged.
pub fn levi_psh_check(p: &MixedPolynomial, grid: &GridSpec) -> PshVerdict {
    let hess = Hessian::new(p);
    let disc = disc_points(grid.per_dim, grid.radius);
    let origin = vec![Complex64::new(0.0, 0.0)];
    let ranges: Vec<&Vec<Complex64>> = hess.active.iter().map(|&a| if a { &disc } else { &origin }).collect();
    let mut min = f64::INFINITY;
    let mut worst = [Complex64::new(0.0, 0.0); 3];
    let mut count = 0;
    for &z1 in ranges[0] {
        for &z2 in ranges[1] {
            for &z3 in ranges[2] {
                let z = [z1, z2, z3];
                let ev = hess.min_eigenvalue(&z);
                count += 1;
                if ev < min {
                    min = ev;
                    worst = z;
                }
            }
        }
    }
    PshVerdict { passed: min >= -grid.tolerance, min_eigenvalue: min, worst_point: worst, points_checked: count }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessOutcome {
    /// A term `z^alpha conj(z)^beta` on the vertex with `alpha_2, beta_2 > 0`.
    Found { monomial: MixedMonomial, coefficient: ComplexRational },
    /// No such term, and the `(z_1, z_2)` Levi determinant is negative at `point`.
    Refuted { point: [Complex64; 2], levi_determinant: f64 },
    Inconclusive { min_levi_determinant: f64 },
}

/// Looks for a mixed-in-`z_2` term of `vertex_poly` on vertex `nu`; failing that, samples the
/// Levi determinant `H11 H22 - |H12|^2` of `vertex_poly` to exhibit non-plurisubharmonicity.
pub fn mixed_witness(diagram: &NewtonDiagram, vertex_poly: &MixedPolynomial, nu: usize) -> WitnessOutcome {
    let vertex = diagram.vertices[nu];
    let found = vertex_poly.terms().find(|(mono, _)| {
        mono.is_tangential() && mono.projection() == vertex && mono.alpha[1] > 0 && mono.beta[1] > 0
    });
    if let Some((mono, c)) = found {
        return WitnessOutcome::Found { monomial: *mono, coefficient: c.clone() };
    }
    let entry = |i: usize, j: usize| {
        NumericPolynomial::new(&vertex_poly.wirtinger_derivative(Var::Z(i), 1).wirtinger_derivative(Var::ZBar(j), 1))
    };
    let (h11, h22, h12) = (entry(0, 0), entry(1, 1), entry(0, 1));
    let disc = disc_points(17, 0.5);
    let mut min = f64::INFINITY;
    let mut worst = [Complex64::new(0.0, 0.0); 2];
    for &z1 in &disc {
        for &z2 in &disc {
            let z = [z1, z2, Complex64::new(0.0, 0.0)];
            let det = h11.evaluate(&z).re * h22.evaluate(&z).re - h12.evaluate(&z).norm_sqr();
            if det < min {
                min = det;
                worst = [z1, z2];
            }
        }
    }
    if min < -1e-12 {
        WitnessOutcome::Refuted { point: worst, levi_determinant: min }
    } else {
        WitnessOutcome::Inconclusive { min_levi_determinant: min }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::{build_diagram, vertex_part};
    use crate::poly::coeff::{cr_int, cr_one};

    fn abs2(i: usize, cap: u32) -> MixedPolynomial {
        MixedPolynomial::monomial(MixedMonomial::new(unit(i), unit(i)), cr_one(), cap)
    }

    fn unit(i: usize) -> [u32; 3] {
        let mut a = [0; 3];
        a[i] = 1;
        a
    }

    #[test]
    fn eigenvalues_of_rank_one_block() {
        // [[1, 1], [1, 1]] (+) [3] has eigenvalues 0, 2, 3.
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let ev = hermitian3_eigenvalues([1.0, 1.0, 3.0], one, zero, zero);
        for (a, b) in ev.iter().zip([0.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn sum_of_squares_is_psh() {
        let p = &abs2(0, 3) + &abs2(1, 3);
        let v = levi_psh_check(&p, &GridSpec::default());
        assert!(v.passed);
        assert!(v.min_eigenvalue.abs() < 1e-15);
    }

    #[test]
    fn pluriharmonic_passes() {
        let z1sq = MixedPolynomial::monomial(MixedMonomial::new([2, 0, 0], [0; 3]), cr_one(), 3);
        let v = levi_psh_check(&z1sq.real_part(), &GridSpec::default());
        assert!(v.passed);
        assert!(v.min_eigenvalue.abs() < 1e-15);
    }

    #[test]
    fn negative_form_fails() {
        let v = levi_psh_check(&(-&abs2(0, 3)), &GridSpec::default());
        assert!(!v.passed);
        assert!((v.min_eigenvalue + 1.0).abs() < 1e-12);
    }

    #[test]
    fn refutes_non_psh_vertex() {
        // Re z3 + Re(conj(z1) z2^2) at vertex (1, 2), completed to a diagram with (0, 3).
        let cap = 4;
        let t = MixedPolynomial::monomial(MixedMonomial::new([0, 2, 0], [1, 0, 0]), cr_one(), cap);
        let axis = MixedPolynomial::monomial(MixedMonomial::new([0, 2, 0], [0, 1, 0]), cr_int(1, 0), cap);
        let r = &(&(&MixedPolynomial::re_z(2, cap) + &t.real_part()) + &axis.real_part())
            + &MixedPolynomial::monomial(MixedMonomial::new([2, 0, 0], [2, 0, 0]), cr_one(), cap);
        let d = build_diagram(&r, 3, 4).unwrap();
        assert_eq!(d.vertices, vec![(4, 0), (1, 2), (0, 3)]);
        let vp = vertex_part(&r, &d, 1).unwrap();
        match mixed_witness(&d, &vp, 1) {
            WitnessOutcome::Refuted { levi_determinant, .. } => assert!(levi_determinant < 0.0),
            other => panic!("expected refutation, got {other:?}"),
        }
    }
}
