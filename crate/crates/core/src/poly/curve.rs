use num_traits::Zero;

use super::coeff::{cr_one, cr_zero, is_zero, ComplexRational};
use super::map::HoloPolyMap;
use super::monomial::MixedMonomial;
use super::polynomial::{MixedPolynomial, VanishingOrder};
use super::PolyError;

/// Truncated univariate power series in `t` with exact coefficients; index = power.
pub type Series = Vec<ComplexRational>;

/// Jet of a holomorphic curve `t -> (g1(t), g2(t), g3(t))` through the origin.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveJet {
    components: [Series; 3],
    order: u32,
}

impl CurveJet {
    /// Coefficients above `order` are dropped; a nonzero constant term is rejected.
    pub fn new(components: [Series; 3], order: u32) -> Result<Self, PolyError> {
        let components = components.map(|s| normalize(s, order));
        if components.iter().any(|s| !is_zero(&s[0])) {
            return Err(PolyError::CurveNotThroughOrigin);
        }
        Ok(CurveJet { components, order })
    }

    /// Reads the components from polynomials in the `z_1` slot (the parameter `t`).
    pub fn from_polynomials(polys: &[MixedPolynomial; 3], order: u32) -> Result<Self, PolyError> {
        let mut comps: [Series; 3] = Default::default();
        for (i, p) in polys.iter().enumerate() {
            let mut s = vec![cr_zero(); order as usize + 1];
            for (m, c) in p.terms() {
                if !m.is_holomorphic() || m.alpha[1] != 0 || m.alpha[2] != 0 {
                    return Err(PolyError::CurveNotUnivariate { component: i + 1 });
                }
                let k = m.alpha[0] as usize;
                if k <= order as usize {
                    s[k] = c.clone();
                }
            }
            comps[i] = s;
        }
        Self::new(comps, order)
    }

    /// `(t, 0, 0)`.
    pub fn z1_axis(order: u32) -> Self {
        let mut g1 = vec![cr_zero(); order as usize + 1];
        g1[1] = cr_one();
        Self::new([g1, Vec::new(), Vec::new()], order).expect("axis passes through the origin")
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn component(&self, i: usize) -> &Series {
        &self.components[i]
    }

    /// The curve as a map whose first argument is `t`.
    pub fn as_map(&self, degree_cap: u32) -> HoloPolyMap {
        let comps = self.components.clone().map(|s| {
            let terms = s.into_iter().enumerate().map(|(k, c)| {
                (MixedMonomial::new([k as u32, 0, 0], [0; 3]), c)
            });
            MixedPolynomial::from_terms(terms, degree_cap)
        });
        HoloPolyMap::new(comps).expect("curve components are holomorphic")
    }

    pub fn component_order(&self, i: usize) -> VanishingOrder {
        series_order(&self.components[i])
    }

    /// `min_k nu(g_k)`.
    pub fn vanishing_order(&self) -> VanishingOrder {
        (0..3).map(|i| self.component_order(i)).min().unwrap_or(VanishingOrder::Infinite)
    }

    pub fn derivative_at_zero(&self, i: usize) -> ComplexRational {
        self.components[i].get(1).cloned().unwrap_or_else(cr_zero)
    }

    /// Same curve with the third component dropped.
    pub fn without_third(&self) -> Self {
        CurveJet {
            components: [self.components[0].clone(), self.components[1].clone(), vec![cr_zero(); self.order as usize + 1]],
            order: self.order,
        }
    }

    pub fn swap12(&self) -> Self {
        CurveJet {
            components: [self.components[1].clone(), self.components[0].clone(), self.components[2].clone()],
            order: self.order,
        }
    }

    /// The image curve `map o gamma`, same jet order.
    pub fn mapped(&self, map: &HoloPolyMap) -> Result<Self, PolyError> {
        let param = self.as_map(self.order);
        let comps = map.components().clone().map(|c| c.with_cap(self.order).compose(&param));
        Self::from_polynomials(&comps, self.order)
    }

    /// Reparametrizes so the first component is exactly `t`; needs `g1'(0) != 0`.
    pub fn reparametrize_first(&self) -> Result<Self, PolyError> {
        let inv = series_inverse(&self.components[0], self.order)?;
        let comps = [0, 1, 2].map(|i| series_compose(&self.components[i], &inv, self.order));
        Self::new(comps, self.order)
    }
}

fn normalize(mut s: Series, order: u32) -> Series {
    s.resize(order as usize + 1, cr_zero());
    s
}

pub fn series_order(s: &Series) -> VanishingOrder {
    s.iter()
        .position(|c| !is_zero(c))
        .map_or(VanishingOrder::Infinite, |k| VanishingOrder::Finite(k as u32))
}

pub fn series_mul(a: &Series, b: &Series, order: u32) -> Series {
    let n = order as usize + 1;
    let mut out = vec![cr_zero(); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `a(b(t))`, requires `b(0) = 0`.
pub fn series_compose(a: &Series, b: &Series, order: u32) -> Series {
    let n = order as usize + 1;
    let mut out = vec![cr_zero(); n];
    let mut power = vec![cr_zero(); n];
    power[0] = cr_one();
    for (k, ak) in a.iter().enumerate().take(n) {
        if k > 0 {
            power = series_mul(&power, b, order);
        }
        if ak.is_zero() {
            continue;
        }
        for (o, p) in out.iter_mut().zip(&power) {
            *o += ak * p;
        }
    }
    out
}

/// Compositional inverse of a series with zero constant term and nonzero linear term.
pub fn series_inverse(a: &Series, order: u32) -> Result<Series, PolyError> {
    let n = order as usize + 1;
    let a1 = a.get(1).cloned().unwrap_or_else(cr_zero);
    if is_zero(&a1) || a.first().is_some_and(|c| !is_zero(c)) {
        return Err(PolyError::DegenerateParametrization);
    }
    // Fixed point g = (t - (a - a1 t)(g)) / a1, exact to one more degree per pass.
    let mut higher = a.clone();
    higher.resize(n, cr_zero());
    higher[1] = cr_zero();
    let mut g = vec![cr_zero(); n];
    if n > 1 {
        g[1] = cr_one() / &a1;
    }
    for _ in 0..n {
        let h = series_compose(&higher, &g, order);
        let mut next = vec![cr_zero(); n];
        for k in 0..n {
            let target = if k == 1 { cr_one() } else { cr_zero() };
            next[k] = (target - &h[k]) / &a1;
        }
        g = next;
    }
    Ok(g)
}
