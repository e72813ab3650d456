use num_complex::Complex64;

use super::coeff::cr_to_c64;
use super::monomial::MixedMonomial;
use super::polynomial::MixedPolynomial;

/// Double-precision snapshot of a [`MixedPolynomial`] for repeated evaluation.
#[derive(Clone, Debug)]
pub struct NumericPolynomial {
    terms: Vec<(MixedMonomial, Complex64)>,
    max_alpha: [u32; 3],
    max_beta: [u32; 3],
}

impl NumericPolynomial {
    pub fn new(p: &MixedPolynomial) -> Self {
        let terms: Vec<(MixedMonomial, Complex64)> = p.terms().map(|(m, c)| (*m, cr_to_c64(c))).collect();
        let mut max_alpha = [0; 3];
        let mut max_beta = [0; 3];
        for (m, _) in &terms {
            for i in 0..3 {
                max_alpha[i] = max_alpha[i].max(m.alpha[i]);
                max_beta[i] = max_beta[i].max(m.beta[i]);
            }
        }
        NumericPolynomial { terms, max_alpha, max_beta }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, point: &[Complex64; 3]) -> Complex64 {
        if self.terms.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let mut pz: [[Complex64; 24]; 3] = [[Complex64::new(0.0, 0.0); 24]; 3];
        let mut pzb: [[Complex64; 24]; 3] = [[Complex64::new(0.0, 0.0); 24]; 3];
        let big = self.max_alpha.iter().chain(&self.max_beta).any(|&e| e >= 24);
        if big {
            return self.evaluate_slow(point);
        }
        for i in 0..3 {
            let z = point[i];
            let zb = z.conj();
            pz[i][0] = Complex64::new(1.0, 0.0);
            pzb[i][0] = Complex64::new(1.0, 0.0);
            for k in 1..=self.max_alpha[i] as usize {
                pz[i][k] = pz[i][k - 1] * z;
            }
            for k in 1..=self.max_beta[i] as usize {
                pzb[i][k] = pzb[i][k - 1] * zb;
            }
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = *c;
            for i in 0..3 {
                v *= pz[i][m.alpha[i] as usize] * pzb[i][m.beta[i] as usize];
            }
            total += v;
        }
        total
    }

    fn evaluate_slow(&self, point: &[Complex64; 3]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = *c;
                for i in 0..3 {
                    v *= point[i].powu(m.alpha[i]) * point[i].conj().powu(m.beta[i]);
                }
                v
            })
            .sum()
    }
}
