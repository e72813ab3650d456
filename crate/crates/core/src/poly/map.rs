use num_complex::Complex64;

use super::coeff::{cr_one, cr_zero, is_zero, ComplexRational};
use super::monomial::MixedMonomial;
use super::polynomial::MixedPolynomial;
use super::PolyError;

/// A holomorphic polynomial map `C^3 -> C^3`, each component free of conjugate variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HoloPolyMap {
    components: [MixedPolynomial; 3],
}

impl HoloPolyMap {
    pub fn new(components: [MixedPolynomial; 3]) -> Result<Self, PolyError> {
        for (i, c) in components.iter().enumerate() {
            if c.terms().any(|(m, _)| !m.is_holomorphic()) {
                return Err(PolyError::NotHolomorphic { component: i + 1 });
            }
        }
        Ok(HoloPolyMap { components })
    }

    pub fn identity(degree_cap: u32) -> Self {
        HoloPolyMap {
            components: [
                MixedPolynomial::z(0, degree_cap),
                MixedPolynomial::z(1, degree_cap),
                MixedPolynomial::z(2, degree_cap),
            ],
        }
    }

    /// Exchanges the roles of `z_1` and `z_2`.
    pub fn swap12(degree_cap: u32) -> Self {
        HoloPolyMap {
            components: [
                MixedPolynomial::z(1, degree_cap),
                MixedPolynomial::z(0, degree_cap),
                MixedPolynomial::z(2, degree_cap),
            ],
        }
    }

    /// Identity except the `i`-th component.
    pub fn replacing(degree_cap: u32, i: usize, component: MixedPolynomial) -> Result<Self, PolyError> {
        let mut comps = Self::identity(degree_cap).components;
        comps[i] = component.with_cap(degree_cap);
        Self::new(comps)
    }

    pub fn components(&self) -> &[MixedPolynomial; 3] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &MixedPolynomial {
        &self.components[i]
    }

    /// `self o inner`: substitutes `inner` into every component of `self`.
    pub fn compose(&self, inner: &HoloPolyMap) -> HoloPolyMap {
        HoloPolyMap { components: self.components.clone().map(|c| c.compose(inner)) }
    }

    pub fn apply(&self, point: &[Complex64; 3]) -> [Complex64; 3] {
        [0, 1, 2].map(|i| self.components[i].evaluate(point))
    }

    pub fn apply_exact(&self, point: &[ComplexRational; 3]) -> [ComplexRational; 3] {
        [0, 1, 2].map(|i| self.components[i].evaluate_exact(point))
    }

    /// Linear part as a 3x3 matrix, `row i = component i`.
    pub fn linear_part(&self) -> [[ComplexRational; 3]; 3] {
        [0, 1, 2].map(|i| [0, 1, 2].map(|j| self.components[i].coeff(&MixedMonomial::z(j))))
    }

    pub fn fixes_origin(&self) -> bool {
        self.components.iter().all(|c| is_zero(&c.coeff(&MixedMonomial::ONE)))
    }

    /// Lower-triangular unit-diagonal Jacobian at the origin, up to a permutation of
    /// the first two coordinates, and a nonzero `z_3` scaling allowed on the diagonal.
    pub fn is_triangular_invertible(&self) -> bool {
        let lin = self.linear_part();
        let unit_tri = |l: &[[ComplexRational; 3]; 3]| {
            l[0][0] == cr_one()
                && l[1][1] == cr_one()
                && !is_zero(&l[2][2])
                && is_zero(&l[0][1])
                && is_zero(&l[0][2])
                && is_zero(&l[1][2])
        };
        let unit_upper = |l: &[[ComplexRational; 3]; 3]| {
            l[0][0] == cr_one()
                && l[1][1] == cr_one()
                && !is_zero(&l[2][2])
                && is_zero(&l[1][0])
                && is_zero(&l[0][2])
                && is_zero(&l[1][2])
        };
        let swapped = {
            let mut s = lin.clone();
            s.swap(0, 1);
            s
        };
        unit_tri(&lin) || unit_upper(&lin) || unit_tri(&swapped) || unit_upper(&swapped)
    }

    /// Inverse map up to the cap, for maps fixing the origin with invertible linear part.
    pub fn inverse(&self) -> Result<HoloPolyMap, PolyError> {
        if !self.fixes_origin() {
            return Err(PolyError::NotInvertible);
        }
        let cap = self.components[0].degree_cap();
        let lin = self.linear_part();
        let lin_inv = invert3(&lin).ok_or(PolyError::NotInvertible)?;
        let nonlinear: Vec<MixedPolynomial> =
            self.components.iter().map(|c| c.filter(|m| m.degree() >= 2)).collect();
        let apply_linear = |mat: &[[ComplexRational; 3]; 3], v: &[MixedPolynomial; 3]| -> [MixedPolynomial; 3] {
            [0, 1, 2].map(|i| {
                let mut acc = MixedPolynomial::zero(cap);
                for (j, vj) in v.iter().enumerate() {
                    if !is_zero(&mat[i][j]) {
                        acc = &acc + &vj.scale(&mat[i][j]);
                    }
                }
                acc
            })
        };
        let ident = HoloPolyMap::identity(cap).components;
        // G = L^{-1} (y - N(G(y))); each pass fixes one more degree.
        let mut g = apply_linear(&lin_inv, &ident);
        for _ in 0..cap {
            let g_map = HoloPolyMap { components: g.clone() };
            let rhs: [MixedPolynomial; 3] = [0, 1, 2].map(|i| &ident[i] - &nonlinear[i].compose(&g_map));
            g = apply_linear(&lin_inv, &rhs);
        }
        Ok(HoloPolyMap { components: g })
    }

    pub fn degree_cap(&self) -> u32 {
        self.components[0].degree_cap()
    }
}

fn invert3(m: &[[ComplexRational; 3]; 3]) -> Option<[[ComplexRational; 3]; 3]> {
    let mut a: Vec<Vec<ComplexRational>> = m.iter().map(|r| r.to_vec()).collect();
    let mut inv: Vec<Vec<ComplexRational>> =
        (0..3).map(|i| (0..3).map(|j| if i == j { cr_one() } else { cr_zero() }).collect()).collect();
    for col in 0..3 {
        let pivot = (col..3).find(|&r| !is_zero(&a[r][col]))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..3 {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..3 {
            if r != col && !is_zero(&a[r][col]) {
                let f = a[r][col].clone();
                for j in 0..3 {
                    let t = &f * &a[col][j];
                    a[r][j] = &a[r][j] - &t;
                    let t = &f * &inv[col][j];
                    inv[r][j] = &inv[r][j] - &t;
                }
            }
        }
    }
    Some([0, 1, 2].map(|i| [0, 1, 2].map(|j| inv[i][j].clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::coeff::cr_int;

    #[test]
    fn rejects_conjugates() {
        let bad = [MixedPolynomial::zbar(0, 4), MixedPolynomial::z(1, 4), MixedPolynomial::z(2, 4)];
        assert!(matches!(HoloPolyMap::new(bad), Err(PolyError::NotHolomorphic { component: 1 })));
    }

    #[test]
    fn inverse_of_triangular_map() {
        let cap = 6;
        let z1 = MixedPolynomial::z(0, cap);
        let z2 = MixedPolynomial::z(1, cap);
        let comp2 = &z2 + &(&z1 * &z1);
        let comp3 = &MixedPolynomial::z(2, cap).scale(&cr_int(2, 0)) - &(&z1 * &z2).scale(&cr_int(0, 3));
        let map = HoloPolyMap::new([z1.clone(), comp2, comp3]).unwrap();
        assert!(map.is_triangular_invertible());
        let inv = map.inverse().unwrap();
        assert_eq!(map.compose(&inv), HoloPolyMap::identity(cap));
        assert_eq!(inv.compose(&map), HoloPolyMap::identity(cap));
    }
}
