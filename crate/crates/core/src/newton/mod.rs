//! Newton diagram of a defining function in special coordinates, its weighted truncations
//! and the decomposition into vertex polynomials `M` and dominated tail terms.

pub mod psh;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::poly::{MixedMonomial, MixedPolynomial, Rational};

pub use psh::{levi_psh_check, mixed_witness, GridSpec, PshVerdict, WitnessOutcome};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("m = {m} exceeds eta = {eta}")]
    TypeAboveContact { m: u32, eta: u32 },
    #[error("pure z2 point (0, {q}) lies below (0, m = {m})")]
    LowAxisPoint { q: u32, m: u32 },
    #[error("point ({p}, 0) with p < eta: r(t, 0, 0) vanishes to order below eta")]
    LowContactPoint { p: u32 },
    #[error("no point (0, {m}) in S: the z2-axis witness is missing")]
    MissingAxisVertex { m: u32 },
    #[error("condition ({0}) fails")]
    Condition(u8),
    #[error("segment index {nu} out of range 1..={n}")]
    SegmentOutOfRange { nu: usize, n: usize },
    #[error("l = {l} out of range 0..={m}")]
    IndexOutOfRange { l: u32, m: u32 },
    #[error("tail term at ({k}, {l}) is not dominated: [t_l] + 1 = {bound} > k")]
    TailNotDominated { k: u32, l: u32, bound: u32 },
}

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact Newton data: index sets, vertices `(p_nu, q_nu)` and segment weights `(eta_nu, lambda_nu)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonDiagram {
    pub eta: u32,
    pub m: u32,
    pub gamma: Vec<MixedMonomial>,
    pub gamma_l: Vec<MixedMonomial>,
    pub lambda_set: Vec<MixedMonomial>,
    pub s_points: BTreeSet<(u32, u32)>,
    /// `vertices[0] = (eta, 0)`, `vertices[N] = (0, m)`.
    pub vertices: Vec<(u32, u32)>,
    /// `weights[nu - 1] = (eta_nu, lambda_nu)`.
    pub weights: Vec<(Rational, Rational)>,
    /// `t_table[l] = t_l` for `l = 0..=m`.
    pub t_table: Vec<Rational>,
}

/// Outcome of the post-hoc check of conditions (1)-(5).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub holds: [bool; 5],
}

impl ConditionReport {
    pub fn all(&self) -> bool {
        self.holds.iter().all(|&b| b)
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Lower convex chain of `points` (monotone chain, collinear points dropped), ordered by
/// increasing first coordinate.
pub fn lower_hull(points: &BTreeSet<(u32, u32)>) -> Vec<(u32, u32)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &(p, q) in points {
        let pt = (p as i64, q as i64);
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    hull.into_iter().map(|(p, q)| (p as u32, q as u32)).collect()
}

/// Weight `(a_1 + b_1) / eta_nu + (a_2 + b_2) / lambda_nu + (a_3 + b_3)` of a monomial.
pub fn weight(mono: &MixedMonomial, eta_nu: &Rational, lambda_nu: &Rational) -> Rational {
    let (p, qq) = mono.projection();
    q(p as i64) / eta_nu + q(qq as i64) / lambda_nu + q((mono.alpha[2] + mono.beta[2]) as i64)
}

fn on_segment(pt: (u32, u32), a: (u32, u32), b: (u32, u32)) -> bool {
    let (pa, pb, pp) = ((a.0 as i64, a.1 as i64), (b.0 as i64, b.1 as i64), (pt.0 as i64, pt.1 as i64));
    cross(pa, pb, pp) == 0
        && (pt.0 as i64 - pa.0) * (pt.0 as i64 - pb.0) <= 0
        && (pt.1 as i64 - pa.1) * (pt.1 as i64 - pb.1) <= 0
}

impl NewtonDiagram {
    pub fn n_segments(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn eta_nu(&self, nu: usize) -> &Rational {
        &self.weights[nu - 1].0
    }

    pub fn lambda_nu(&self, nu: usize) -> &Rational {
        &self.weights[nu - 1].1
    }

    /// Segment `nu` with `q_{nu-1} < l <= q_nu`.
    pub fn segment_of(&self, l: u32) -> Option<usize> {
        (1..self.vertices.len()).find(|&nu| self.vertices[nu - 1].1 < l && l <= self.vertices[nu].1)
    }

    pub fn t_exponent(&self, l: u32) -> Result<Rational, DiagramError> {
        self.t_table.get(l as usize).cloned().ok_or(DiagramError::IndexOutOfRange { l, m: self.m })
    }

    /// Segment index of a point on `L`, preferring the lower index at shared vertices.
    pub fn segment_containing(&self, pt: (u32, u32)) -> Option<usize> {
        (1..self.vertices.len()).find(|&nu| on_segment(pt, self.vertices[nu - 1], self.vertices[nu]))
    }

    pub fn on_boundary(&self, mono: &MixedMonomial) -> bool {
        self.segment_containing(mono.projection()).is_some()
    }

    pub fn check_conditions(&self) -> ConditionReport {
        let n = self.n_segments();
        let one = Rational::one();
        let c1 = self.vertices[0] == (self.eta, 0)
            && self.vertices[n] == (0, self.m)
            && *self.lambda_nu(n) == q(self.m as i64)
            && *self.eta_nu(1) == q(self.eta as i64);
        let c2 = self.vertices.windows(2).all(|w| w[0].0 > w[1].0 && w[0].1 < w[1].1);
        let c3 = self.weights.windows(2).all(|w| w[0].1 < w[1].1 && w[0].0 > w[1].0);
        let c4 = (1..=n).all(|nu| {
            [self.vertices[nu - 1], self.vertices[nu]].iter().all(|&(p, qq)| {
                q(p as i64) / self.eta_nu(nu) + q(qq as i64) / self.lambda_nu(nu) == one
            })
        });
        let c5 = self.gamma.iter().all(|mono| {
            (1..=n).all(|nu| weight(mono, self.eta_nu(nu), self.lambda_nu(nu)) >= one)
        });
        ConditionReport { holds: [c1, c2, c3, c4, c5] }
    }

    /// No point of `S` lies strictly below any segment line.
    pub fn hull_is_minimal(&self) -> bool {
        let one = Rational::one();
        self.s_points.iter().all(|&(p, qq)| {
            (1..=self.n_segments())
                .all(|nu| q(p as i64) / self.eta_nu(nu) + q(qq as i64) / self.lambda_nu(nu) >= one)
        })
    }
}

/// Builds the diagram of `r` (in special coordinates) with Bloom-Graham type `m` and contact `eta`.
pub fn build_diagram(r: &MixedPolynomial, m: u32, eta: u32) -> Result<NewtonDiagram, DiagramError> {
    if m > eta {
        return Err(DiagramError::TypeAboveContact { m, eta });
    }
    let gamma: Vec<MixedMonomial> = r
        .terms()
        .map(|(mono, _)| *mono)
        .filter(|mono| mono.is_tangential() && mono.is_mixed() && (m..=eta).contains(&mono.degree()))
        .collect();
    let mut s_points: BTreeSet<(u32, u32)> = gamma.iter().map(|mono| mono.projection()).collect();
    s_points.insert((eta, 0));
    for &(p, qq) in &s_points {
        if p == 0 && qq < m {
            return Err(DiagramError::LowAxisPoint { q: qq, m });
        }
        if qq == 0 && p < eta {
            return Err(DiagramError::LowContactPoint { p });
        }
    }
    if !s_points.contains(&(0, m)) {
        return Err(DiagramError::MissingAxisVertex { m });
    }

    let mut vertices = lower_hull(&s_points);
    vertices.reverse();
    let n = vertices.len() - 1;

    let weights: Vec<(Rational, Rational)> = (1..=n)
        .map(|nu| {
            let (p0, q0) = (q(vertices[nu - 1].0 as i64), q(vertices[nu - 1].1 as i64));
            let (p1, q1) = (q(vertices[nu].0 as i64), q(vertices[nu].1 as i64));
            let eta_nu = &p0 + &q0 * (&p0 - &p1) / (&q1 - &q0);
            let lambda_nu = &q1 + &p1 * (&q1 - &q0) / (&p0 - &p1);
            (eta_nu, lambda_nu)
        })
        .collect();

    let mut diagram = NewtonDiagram {
        eta,
        m,
        gamma_l: Vec::new(),
        lambda_set: Vec::new(),
        gamma,
        s_points,
        vertices,
        weights,
        t_table: Vec::new(),
    };
    diagram.t_table = (0..=m)
        .map(|l| match diagram.segment_of(l) {
            None => q(eta as i64),
            Some(nu) => diagram.eta_nu(nu) * (Rational::one() - q(l as i64) / diagram.lambda_nu(nu)),
        })
        .collect();
    diagram.gamma_l = diagram.gamma.iter().copied().filter(|mono| diagram.on_boundary(mono)).collect();
    let vertex_set: BTreeSet<(u32, u32)> = diagram.vertices[1..].iter().copied().collect();
    diagram.lambda_set = diagram
        .gamma_l
        .iter()
        .copied()
        .filter(|mono| vertex_set.contains(&mono.projection()) && mono.alpha[1] > 0 && mono.beta[1] > 0)
        .collect();

    let report = diagram.check_conditions();
    if let Some(i) = report.holds.iter().position(|&b| !b) {
        return Err(DiagramError::Condition(i as u8 + 1));
    }
    Ok(diagram)
}

fn is_re_z3(mono: &MixedMonomial) -> bool {
    *mono == MixedMonomial::z(2) || *mono == MixedMonomial::zbar(2)
}

/// `r~^nu`: `Re z_3` plus the `Gamma_L` terms of weight exactly 1 for segment `nu`.
pub fn weighted_truncation(
    r: &MixedPolynomial,
    diagram: &NewtonDiagram,
    nu: usize,
) -> Result<MixedPolynomial, DiagramError> {
    check_nu(diagram, nu)?;
    Ok(truncate(r, diagram, nu))
}

fn check_nu(diagram: &NewtonDiagram, nu: usize) -> Result<(), DiagramError> {
    let n = diagram.n_segments();
    if nu == 0 || nu > n {
        return Err(DiagramError::SegmentOutOfRange { nu, n });
    }
    Ok(())
}

fn truncate(r: &MixedPolynomial, diagram: &NewtonDiagram, nu: usize) -> MixedPolynomial {
    let (eta_nu, lambda_nu) = (diagram.eta_nu(nu), diagram.lambda_nu(nu));
    let one = Rational::one();
    let gamma_l: BTreeSet<MixedMonomial> = diagram.gamma_l.iter().copied().collect();
    r.filter(|mono| {
        (is_re_z3(mono) || gamma_l.contains(mono)) && weight(mono, eta_nu, lambda_nu) == one
    })
}

/// The weight-`(nu + 1)` truncation of `r~^nu`: `Re z_3` plus the terms sitting on vertex `nu`.
pub fn iterated_truncation(
    r: &MixedPolynomial,
    diagram: &NewtonDiagram,
    nu: usize,
) -> Result<MixedPolynomial, DiagramError> {
    check_nu(diagram, nu)?;
    check_nu(diagram, nu + 1)?;
    Ok(truncate(&truncate(r, diagram, nu), diagram, nu + 1))
}

/// `Re z_3` plus the `Gamma_L` terms projecting onto vertex `nu`; for `nu < N` this is the
/// iterated truncation, for `nu = N` the `z_2`-axis part of `r~^N`.
pub fn vertex_part(r: &MixedPolynomial, diagram: &NewtonDiagram, nu: usize) -> Result<MixedPolynomial, DiagramError> {
    check_nu(diagram, nu)?;
    let v = diagram.vertices[nu];
    let gamma_l: BTreeSet<MixedMonomial> = diagram.gamma_l.iter().copied().collect();
    Ok(r.filter(|mono| is_re_z3(mono) || (gamma_l.contains(mono) && mono.projection() == v)))
}

/// Vertex polynomial `M_{alpha_2, beta_2}` together with the segment it belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPolynomial {
    pub nu: usize,
    /// Polynomial in `z_1, conj(z_1)`, homogeneous of degree `p_nu`.
    pub poly: MixedPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailTerm {
    pub monomial: MixedMonomial,
    pub k: u32,
    pub l: u32,
    /// `[t_l] + 1` when `1 <= l <= m`, `None` for `l > m` (dominated by `|z_2|^{m+1}`).
    pub bound: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceDecomposition {
    pub core_terms: Vec<MixedMonomial>,
    pub m_polynomials: BTreeMap<(u32, u32), VertexPolynomial>,
    pub tail: Vec<TailTerm>,
    /// `([t_l] + 1, l)` for `l = 1..=m`.
    pub tail_bound_exponents: Vec<(u32, u32)>,
}

impl SliceDecomposition {
    /// Remark checks: every `M` is nonzero and homogeneous of degree `p_nu`, and constant on the last segment.
    pub fn m_polynomials_valid(&self, diagram: &NewtonDiagram) -> bool {
        let n = diagram.n_segments();
        self.m_polynomials.values().all(|vp| {
            let p_nu = diagram.vertices[vp.nu].0;
            !vp.poly.is_zero()
                && vp.poly.terms().all(|(mono, _)| mono.degree() == p_nu)
                && (vp.nu != n || vp.poly.degree() == Some(0))
        })
    }
}

fn floor_rational(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Splits the `Gamma` terms of `r` into the `Gamma_L - Lambda` core, the vertex polynomials
/// `M_{alpha_2, beta_2}(z_1)`, and tail terms, re-checking `[t_l] + 1 <= k` for each tail term.
pub fn decompose(r: &MixedPolynomial, diagram: &NewtonDiagram) -> Result<SliceDecomposition, DiagramError> {
    let lambda: BTreeSet<MixedMonomial> = diagram.lambda_set.iter().copied().collect();
    let gamma_l: BTreeSet<MixedMonomial> = diagram.gamma_l.iter().copied().collect();
    let core_terms = diagram.gamma_l.iter().copied().filter(|mono| !lambda.contains(mono)).collect();

    let mut m_polynomials: BTreeMap<(u32, u32), VertexPolynomial> = BTreeMap::new();
    for mono in &diagram.lambda_set {
        let nu = diagram.vertices.iter().position(|&v| v == mono.projection()).expect("Lambda sits on a vertex");
        let z1_part = MixedMonomial::new([mono.alpha[0], 0, 0], [mono.beta[0], 0, 0]);
        let entry = m_polynomials
            .entry((mono.alpha[1], mono.beta[1]))
            .or_insert_with(|| VertexPolynomial { nu, poly: MixedPolynomial::zero(r.degree_cap()) });
        entry.poly.add_term(z1_part, r.coeff(mono));
    }

    let tail_bound_exponents: Vec<(u32, u32)> = (1..=diagram.m)
        .map(|l| {
            let t = &diagram.t_table[l as usize];
            let b = floor_rational(t) + BigInt::one();
            (u32::try_from(b).expect("small exponent"), l)
        })
        .collect();

    let mut tail = Vec::new();
    for mono in &diagram.gamma {
        if gamma_l.contains(mono) {
            continue;
        }
        let (k, l) = mono.projection();
        let bound = if (1..=diagram.m).contains(&l) { Some(tail_bound_exponents[l as usize - 1].0) } else { None };
        if let Some(b) = bound {
            if b > k {
                return Err(DiagramError::TailNotDominated { k, l, bound: b });
            }
        }
        tail.push(TailTerm { monomial: *mono, k, l, bound });
    }
    Ok(SliceDecomposition { core_terms, m_polynomials, tail, tail_bound_exponents })
}
