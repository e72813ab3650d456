//! Exact complex-rational coefficients.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// A complex number with arbitrary-precision rational real and imaginary parts.
pub type ComplexRational = Complex<BigRational>;

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn cr(re: Rational, im: Rational) -> ComplexRational {
    Complex::new(re, im)
}

pub fn cr_int(re: i64, im: i64) -> ComplexRational {
    Complex::new(rational(re, 1), rational(im, 1))
}

pub fn cr_real(re: Rational) -> ComplexRational {
    Complex::new(re, Rational::zero())
}

pub fn cr_zero() -> ComplexRational {
    Complex::zero()
}

pub fn cr_one() -> ComplexRational {
    Complex::one()
}

pub fn cr_i() -> ComplexRational {
    Complex::new(Rational::zero(), Rational::one())
}

/// Exact rational value of a finite double (every finite `f64` is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Rational {
    BigRational::from_float(x).unwrap_or_else(|| panic!("non-finite value {x} has no rational form"))
}

pub fn cr_from_c64(z: Complex64) -> ComplexRational {
    Complex::new(rational_from_f64(z.re), rational_from_f64(z.im))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn cr_to_c64(z: &ComplexRational) -> Complex64 {
    Complex64::new(rational_to_f64(&z.re), rational_to_f64(&z.im))
}

pub fn is_zero(z: &ComplexRational) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

/// Rational approximation with denominator exactly `den` (round to nearest).
pub fn rational_approx(x: f64, den: i64) -> Rational {
    let num = (x * den as f64).round() as i64;
    rational(num, den)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact text form: `3/7`, `-2`, `1/2 + 3/4*i`, `-i`.
pub fn format_cr(z: &ComplexRational) -> String {
    let im_part = |im: &Rational| -> String {
        if im.is_one() {
            "i".to_string()
        } else {
            format!("{im}*i")
        }
    };
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => format!("{}", z.re),
        (true, false) => {
            if z.im == -Rational::one() {
                "-i".to_string()
            } else {
                im_part(&z.im)
            }
        }
        (false, false) => {
            let sign = if z.im.is_negative() { "-" } else { "+" };
            format!("{} {} {}", z.re, sign, im_part(&z.im.abs()))
        }
    }
}
