//! Sweeps over `delta` and the log-log checks of the `r` and `rho` derivative estimates.

use std::collections::BTreeMap;

use serde::Serialize;

use super::fit::{scaling_row, FitTolerances, ScalingKind, ScalingRow};
use super::{slice_normalize, solve_e_delta, DirectionChoice, EDelta, SliceError, SliceNormalization};
use crate::newton::NewtonDiagram;
use crate::poly::coeff::rational_to_f64;
use crate::poly::{MixedPolynomial, NumericPolynomial};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingTable {
    /// Upper bounds `<~ delta^{t_l / eta}`.
    pub upper: Vec<ScalingRow>,
    /// Two-sided estimates `~ delta^{p_nu / eta}` at the vertex witnesses.
    pub vertex: Vec<ScalingRow>,
}

impl ScalingTable {
    pub fn passed(&self) -> bool {
        self.upper.iter().chain(&self.vertex).all(|row| row.passed)
    }
}

/// `(alpha_2, beta_2) -> nu` for every `z_2`-mixed vertex term.
pub fn vertex_witnesses(diagram: &NewtonDiagram) -> BTreeMap<(u32, u32), usize> {
    diagram
        .lambda_set
        .iter()
        .filter_map(|mono| {
            let nu = diagram.vertices.iter().position(|&v| v == mono.projection())?;
            Some(((mono.alpha[1], mono.beta[1]), nu))
        })
        .collect()
}

fn t_over_eta(diagram: &NewtonDiagram, l: u32) -> f64 {
    rational_to_f64(&diagram.t_table[l as usize]) / diagram.eta as f64
}

fn p_over_eta(diagram: &NewtonDiagram, nu: usize) -> f64 {
    diagram.vertices[nu].0 as f64 / diagram.eta as f64
}

/// Boundary points and slice normalizations for every `delta`, computed in parallel and
/// returned in sweep order.
pub fn slice_sweep(
    r: &MixedPolynomial,
    diagram: &NewtonDiagram,
    choice: &DirectionChoice,
    deltas: &[f64],
) -> Result<Vec<(EDelta, SliceNormalization)>, SliceError> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = deltas
            .iter()
            .map(|&delta| {
                scope.spawn(move || {
                    let e = solve_e_delta(r, choice.d, diagram.eta, delta)?;
                    let n = slice_normalize(r, e.point, delta, diagram.m)?;
                    Ok((e, n))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("slice worker panicked")).collect()
    })
}

/// `|d^l r / dz_2^a dconj(z_2)^b (e~_delta)|` over the sweep: every `a + b = l <= m` against
/// `t_l / eta` as an upper bound, and the vertex witnesses against `p_nu / eta` two-sided.
pub fn verify_r_derivative_scaling(
    r: &MixedPolynomial,
    diagram: &NewtonDiagram,
    choice: &DirectionChoice,
    deltas: &[f64],
    tol: &FitTolerances,
) -> Result<ScalingTable, SliceError> {
    let points: Vec<EDelta> =
        deltas.iter().map(|&delta| solve_e_delta(r, choice.d, diagram.eta, delta)).collect::<Result<_, _>>()?;
    let values = |a: u32, b: u32| {
        let der = NumericPolynomial::new(&r.mixed_derivative(1, a, b));
        points.iter().map(|e| der.evaluate(&e.point).norm()).collect::<Vec<f64>>()
    };
    let mut upper = Vec::new();
    for l in 1..=diagram.m {
        for a in 0..=l {
            let b = l - a;
            let label = format!("r_z2^{a}_zbar2^{b}");
            upper.push(scaling_row(label, ScalingKind::UpperBound, t_over_eta(diagram, l), deltas, values(a, b), tol));
        }
    }
    let vertex = vertex_witnesses(diagram)
        .into_iter()
        .map(|((a, b), nu)| {
            let label = format!("r_z2^{a}_zbar2^{b} (vertex {nu})");
            scaling_row(label, ScalingKind::TwoSided, p_over_eta(diagram, nu), deltas, values(a, b), tol)
        })
        .collect();
    Ok(ScalingTable { upper, vertex })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoScalingReport {
    pub table: ScalingTable,
    /// `A_m` against `delta^0`.
    pub a_m: ScalingRow,
    /// `tau` nondecreasing in `delta`.
    pub tau_monotone: bool,
    /// `tau <= (delta / A_m)^{1/m}` up to `1e-9` relative.
    pub tau_consistent: bool,
    /// `max tau / delta^{1/m}`.
    pub tau_constant: f64,
    /// `max |e_delta| / delta`.
    pub e_constant: f64,
    pub shape_ok: bool,
    pub passed: bool,
}

/// `|c_l|` against `t_l / eta`, vertex derivatives of `rho` against `p_nu / eta`, `A_m ~ 1`,
/// and the `tau` sanity checks, over a sweep from [`slice_sweep`].
pub fn verify_rho_derivative_scaling(
    sweep: &[(EDelta, SliceNormalization)],
    diagram: &NewtonDiagram,
    tol: &FitTolerances,
) -> RhoScalingReport {
    let deltas: Vec<f64> = sweep.iter().map(|(e, _)| e.delta).collect();
    let norms: Vec<&SliceNormalization> = sweep.iter().map(|(_, n)| n).collect();
    let m = diagram.m;

    let upper = (2..=m)
        .map(|l| {
            let values = norms.iter().map(|n| n.c_l(l).norm()).collect();
            scaling_row(format!("c_{l}"), ScalingKind::UpperBound, t_over_eta(diagram, l), &deltas, values, tol)
        })
        .collect();
    let vertex = vertex_witnesses(diagram)
        .into_iter()
        .map(|((a, b), nu)| {
            let values = norms.iter().map(|n| n.rho_derivative(a, b).norm()).collect();
            let label = format!("rho_z2^{a}_zbar2^{b} (vertex {nu})");
            scaling_row(label, ScalingKind::TwoSided, p_over_eta(diagram, nu), &deltas, values, tol)
        })
        .collect();
    let table = ScalingTable { upper, vertex };
    let a_m = scaling_row(
        format!("A_{m}"),
        ScalingKind::TwoSided,
        0.0,
        &deltas,
        norms.iter().map(|n| n.a_m()).collect(),
        tol,
    );

    let mut by_delta: Vec<(f64, f64)> = norms.iter().map(|n| (n.delta, n.tau)).collect();
    by_delta.sort_by(|x, y| x.0.total_cmp(&y.0));
    let tau_monotone = by_delta.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - 1e-12));
    let tau_consistent = norms.iter().all(|n| {
        let am = n.a_m();
        am > 0.0 && n.tau <= (n.delta / am).powf(1.0 / m as f64) * (1.0 + 1e-9)
    });
    let tau_constant = norms.iter().map(|n| n.tau / n.delta.powf(1.0 / m as f64)).fold(0.0, f64::max);
    let e_constant = sweep.iter().map(|(e, _)| e.size_constant).fold(0.0, f64::max);
    let shape_ok = norms.iter().all(|n| n.shape.passed);
    let passed = table.passed() && a_m.passed && tau_monotone && tau_consistent && shape_ok;
    RhoScalingReport { table, a_m, tau_monotone, tau_consistent, tau_constant, e_constant, shape_ok, passed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::{build_diagram, decompose};
    use crate::poly::coeff::cr_one;
    use crate::poly::MixedMonomial;
    use crate::slice::{choose_direction, GeometricSweep};

    fn abs2(a: [u32; 3], cap: u32) -> MixedPolynomial {
        MixedPolynomial::monomial(MixedMonomial::new(a, a), cr_one(), cap)
    }

    fn e2() -> MixedPolynomial {
        let mut r = MixedPolynomial::re_z(2, 11);
        for a in [[2, 1, 0], [0, 3, 0], [5, 0, 0]] {
            r = &r + &abs2(a, 11);
        }
        r
    }

    #[test]
    fn e2_vertex_slopes() {
        let r = e2();
        let d = build_diagram(&r, 6, 10).unwrap();
        let choice = choose_direction(&decompose(&r, &d).unwrap(), 720).unwrap();
        assert_eq!(choice.theta0, 0.0);
        let deltas = GeometricSweep::default().values();
        let tol = FitTolerances::default();
        let table = verify_r_derivative_scaling(&r, &d, &choice, &deltas, &tol).unwrap();
        assert!(table.passed(), "{table:#?}");
        let witness = table.vertex.iter().find(|row| row.label.starts_with("r_z2^1_zbar2^1")).unwrap();
        assert!((witness.fit.as_ref().unwrap().slope - 0.4).abs() < 1e-9);

        let sweep = slice_sweep(&r, &d, &choice, &deltas).unwrap();
        let report = verify_rho_derivative_scaling(&sweep, &d, &tol);
        assert!(report.passed, "{report:#?}");
        assert!(report.a_m.fit.as_ref().unwrap().slope.abs() < 0.05);
        let a6 = sweep[0].1.a_m();
        assert!((a6 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn e1_witness_is_constant_one() {
        let cap = 5;
        let r = &(&MixedPolynomial::re_z(2, cap) + &abs2([0, 1, 0], cap)) + &abs2([2, 0, 0], cap);
        let d = build_diagram(&r, 2, 4).unwrap();
        let choice = choose_direction(&decompose(&r, &d).unwrap(), 720).unwrap();
        let deltas = GeometricSweep::default().values();
        let table = verify_r_derivative_scaling(&r, &d, &choice, &deltas, &FitTolerances::default()).unwrap();
        let row = &table.vertex[0];
        assert!(row.passed);
        assert!(row.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
        // First derivatives in z2 vanish on the slice.
        assert!(table.upper.iter().filter(|row| row.label.contains("^1_zbar2^0")).all(|row| row.degenerate));
    }
}
