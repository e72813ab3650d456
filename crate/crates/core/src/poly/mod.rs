//! Exact sparse polynomials in `z_1, z_2, z_3` and their conjugates.
//!
//! All symbolic work happens over [`ComplexRational`] coefficients. Doubles appear only
//! in [`MixedPolynomial::evaluate`] and [`NumericPolynomial`], which exist for sampling.

pub mod coeff;
pub mod curve;
pub mod map;
pub mod monomial;
pub mod numeric;
pub mod polynomial;

pub use coeff::{ComplexRational, Rational};
pub use curve::CurveJet;
pub use map::HoloPolyMap;
pub use monomial::{MixedMonomial, Var};
pub use numeric::NumericPolynomial;
pub use polynomial::{contact_order, MixedPolynomial, VanishingOrder};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("degree caps differ ({left} vs {right})")]
    CapMismatch { left: u32, right: u32 },
    #[error("map component {component} contains conjugate variables")]
    NotHolomorphic { component: usize },
    #[error("map does not fix the origin or has a singular linear part")]
    NotInvertible,
    #[error("curve does not pass through the origin")]
    CurveNotThroughOrigin,
    #[error("curve component {component} must be a polynomial in t alone")]
    CurveNotUnivariate { component: usize },
    #[error("parametrization has vanishing derivative at the origin")]
    DegenerateParametrization,
}
