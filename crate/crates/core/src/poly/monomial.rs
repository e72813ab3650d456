use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A monomial `z^alpha * conj(z)^beta` in three complex variables.
///
/// Ordered graded-lexicographically: total degree first, then `alpha`, then `beta`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct MixedMonomial {
    pub alpha: [u32; 3],
    pub beta: [u32; 3],
}

/// A single Wirtinger direction: `d/dz_i` or `d/dzbar_i` (0-based index).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    Z(usize),
    ZBar(usize),
}

impl MixedMonomial {
    pub const ONE: MixedMonomial = MixedMonomial { alpha: [0; 3], beta: [0; 3] };

    pub fn new(alpha: [u32; 3], beta: [u32; 3]) -> Self {
        MixedMonomial { alpha, beta }
    }

    /// `z_i` for a 0-based index.
    pub fn z(i: usize) -> Self {
        let mut m = Self::ONE;
        m.alpha[i] = 1;
        m
    }

    pub fn zbar(i: usize) -> Self {
        let mut m = Self::ONE;
        m.beta[i] = 1;
        m
    }

    pub fn degree(&self) -> u32 {
        self.alpha.iter().sum::<u32>() + self.beta.iter().sum::<u32>()
    }

    pub fn holomorphic_degree(&self) -> u32 {
        self.alpha.iter().sum()
    }

    pub fn antiholomorphic_degree(&self) -> u32 {
        self.beta.iter().sum()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.beta == [0; 3]
    }

    /// True when neither `z_3` nor its conjugate appears.
    pub fn is_tangential(&self) -> bool {
        self.alpha[2] == 0 && self.beta[2] == 0
    }

    /// Both holomorphic and antiholomorphic factors present.
    pub fn is_mixed(&self) -> bool {
        self.holomorphic_degree() > 0 && self.antiholomorphic_degree() > 0
    }

    /// Nonconstant and purely holomorphic or purely antiholomorphic.
    pub fn is_pure(&self) -> bool {
        self.degree() > 0 && !self.is_mixed()
    }

    /// `(alpha_1 + beta_1, alpha_2 + beta_2)`, the point this monomial contributes to a Newton diagram.
    pub fn projection(&self) -> (u32, u32) {
        (self.alpha[0] + self.beta[0], self.alpha[1] + self.beta[1])
    }

    pub fn conjugate(&self) -> Self {
        MixedMonomial { alpha: self.beta, beta: self.alpha }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..3 {
            out.alpha[i] += other.alpha[i];
            out.beta[i] += other.beta[i];
        }
        out
    }

    pub fn exponent(&self, var: Var) -> u32 {
        match var {
            Var::Z(i) => self.alpha[i],
            Var::ZBar(i) => self.beta[i],
        }
    }

    pub(crate) fn exponent_mut(&mut self, var: Var) -> &mut u32 {
        match var {
            Var::Z(i) => &mut self.alpha[i],
            Var::ZBar(i) => &mut self.beta[i],
        }
    }
}

impl Ord for MixedMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.alpha.cmp(&other.alpha))
            .then_with(|| self.beta.cmp(&other.beta))
    }
}

impl PartialOrd for MixedMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MixedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        for i in 0..3 {
            match self.alpha[i] {
                0 => {}
                1 => factors.push(format!("z{}", i + 1)),
                e => factors.push(format!("z{}^{}", i + 1, e)),
            }
            match self.beta[i] {
                0 => {}
                1 => factors.push(format!("conj(z{})", i + 1)),
                e => factors.push(format!("conj(z{})^{}", i + 1, e)),
            }
        }
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}
