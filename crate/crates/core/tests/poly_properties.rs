use holder_gain::poly::coeff::{cr_int, cr_to_c64};
use holder_gain::poly::{HoloPolyMap, MixedMonomial, MixedPolynomial, Var};
use num_complex::Complex64;
use proptest::prelude::*;

const CAP: u32 = 6;

fn monomial(max_deg: u32) -> impl Strategy<Value = MixedMonomial> {
    (prop::array::uniform3(0u32..=2), prop::array::uniform3(0u32..=2))
        .prop_filter("degree", move |(a, b)| a.iter().chain(b).sum::<u32>() <= max_deg)
        .prop_map(|(a, b)| MixedMonomial::new(a, b))
}

fn poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = MixedPolynomial> {
    prop::collection::vec((monomial(max_deg), -4i64..=4, -4i64..=4), 0..=max_terms)
        .prop_map(|ts| MixedPolynomial::from_terms(ts.into_iter().map(|(m, a, b)| (m, cr_int(a, b))), CAP))
}

fn real_poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = MixedPolynomial> {
    poly(max_deg, max_terms).prop_map(|p| p.real_part())
}

/// Holomorphic map fixing the origin with components of degree 1..=2.
fn origin_map(cap: u32) -> impl Strategy<Value = HoloPolyMap> {
    let comp = prop::collection::vec((prop::array::uniform3(0u32..=2), -3i64..=3, -3i64..=3), 0..=4).prop_map(
        move |ts| {
            MixedPolynomial::from_terms(
                ts.into_iter()
                    .filter(|(a, _, _)| (1..=2).contains(&a.iter().sum::<u32>()))
                    .map(|(a, re, im)| (MixedMonomial::new(a, [0; 3]), cr_int(re, im))),
                cap,
            )
        },
    );
    [comp.clone(), comp.clone(), comp].prop_map(|c| HoloPolyMap::new(c).unwrap())
}

fn point() -> impl Strategy<Value = [Complex64; 3]> {
    prop::array::uniform3((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)))
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1.0)
}

fn same_terms(p: &MixedPolynomial, q: &MixedPolynomial) -> bool {
    p.terms().eq(q.terms())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hermitian_symmetry_is_preserved(p in real_poly(3, 5), q in real_poly(3, 5), map in origin_map(CAP)) {
        prop_assert!(p.is_real_valued());
        prop_assert!((&p + &q).is_real_valued());
        prop_assert!((&p * &q).is_real_valued());
        prop_assert!(p.compose(&map).is_real_valued());
        prop_assert!((&p - &q).real_part().is_real_valued());
    }

    #[test]
    fn real_valued_evaluation_is_real(p in real_poly(4, 6), x in point()) {
        prop_assert!(p.evaluate(&x).im.abs() < 1e-10);
    }

    #[test]
    fn evaluation_is_multiplicative(p in poly(3, 5), q in poly(3, 5), x in point()) {
        let lhs = (&p * &q).evaluate(&x);
        let rhs = p.evaluate(&x) * q.evaluate(&x);
        prop_assert!(close(lhs, rhs, 1e-10), "{lhs} vs {rhs}");
    }

    #[test]
    fn wirtinger_matches_finite_differences(p in poly(4, 6), x in point(), i in 0usize..3) {
        let h = 1e-5;
        let shifted = |dz: Complex64| {
            let mut y = x;
            y[i] += dz;
            p.evaluate(&y)
        };
        let dx = (shifted(Complex64::new(h, 0.0)) - shifted(Complex64::new(-h, 0.0))) / (2.0 * h);
        let dy = (shifted(Complex64::new(0.0, h)) - shifted(Complex64::new(0.0, -h))) / (2.0 * h);
        let dz_fd = (dx - Complex64::i() * dy) / 2.0;
        let dzbar_fd = (dx + Complex64::i() * dy) / 2.0;
        let dz = p.wirtinger_derivative(Var::Z(i), 1).evaluate(&x);
        let dzbar = p.wirtinger_derivative(Var::ZBar(i), 1).evaluate(&x);
        prop_assert!(close(dz, dz_fd, 1e-6), "d/dz: {dz} vs {dz_fd}");
        prop_assert!(close(dzbar, dzbar_fd, 1e-6), "d/dzbar: {dzbar} vs {dzbar_fd}");
    }

    #[test]
    fn compose_is_associative(p in poly(3, 4), a in origin_map(4), b in origin_map(4)) {
        let p = p.with_cap(4);
        let lhs = p.compose(&a).compose(&b);
        let rhs = p.compose(&a.compose(&b));
        prop_assert!(same_terms(&lhs, &rhs));
    }

    #[test]
    fn compose_commutes_with_evaluation(p in poly(2, 4), map in origin_map(CAP), x in point()) {
        // Degrees stay within the cap: 2 * 2 <= 6.
        let x = x.map(|z| z * 0.5);
        let lhs = p.compose(&map).evaluate(&x);
        let rhs = p.evaluate(&map.apply(&x));
        prop_assert!(close(lhs, rhs, 1e-10), "{lhs} vs {rhs}");
    }

    #[test]
    fn conjugation_is_an_involution(p in poly(4, 6)) {
        prop_assert_eq!(p.conjugate().conjugate(), p);
    }

    #[test]
    fn exact_and_double_evaluation_agree(p in poly(3, 5), re in -3i64..=3, im in -3i64..=3) {
        let q = cr_int(re, im);
        let zero = cr_int(0, 0);
        let exact = p.evaluate_exact(&[q.clone(), zero.clone(), q.clone()]);
        let approx = p.evaluate(&[cr_to_c64(&q), Complex64::new(0.0, 0.0), cr_to_c64(&q)]);
        prop_assert!(close(cr_to_c64(&exact), approx, 1e-12));
    }
}
