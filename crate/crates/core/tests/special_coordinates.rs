use std::path::Path;

use holder_gain::newton::{build_diagram, iterated_truncation, levi_psh_check, weighted_truncation, GridSpec};
use holder_gain::normal_form::{certify_special_coordinates, SpecialCoordinates};
use holder_gain::poly::{CurveJet, MixedMonomial, MixedPolynomial};
use holder_gain::report::{parse_curve, parse_defining_function};

fn corpus(name: &str) -> MixedPolynomial {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    parse_defining_function(&std::fs::read_to_string(path).unwrap(), Some(12)).unwrap()
}

fn certify(big_r: &MixedPolynomial, eta: u32) -> SpecialCoordinates {
    certify_special_coordinates(big_r, &CurveJet::z1_axis(eta + 1), eta).unwrap()
}

fn assert_pullback(big_r: &MixedPolynomial, sc: &SpecialCoordinates) {
    let pulled = big_r.compose(&sc.psi);
    for d in 0..=sc.eta {
        assert_eq!(pulled.homogeneous_part(d), sc.r.homogeneous_part(d), "degree {d}");
    }
}

#[test]
fn e2_and_kn_certify() {
    let e2 = certify(&corpus("e2.poly"), 10);
    assert!(e2.certificate.passes());
    assert_eq!(e2.m, Some(6));
    let (mono, _) = e2.certificate.witness.clone().unwrap();
    assert_eq!(mono, MixedMonomial::new([0, 3, 0], [0, 3, 0]));

    let kn = certify(&corpus("kn.poly"), 8);
    assert!(kn.certificate.passes());
    assert_eq!(kn.m, Some(2));
}

#[test]
fn corpus_pulls_back_through_psi() {
    for (name, eta) in [("half_space.poly", 2), ("e1_k2.poly", 4), ("e2.poly", 10), ("kn.poly", 8)] {
        let big_r = corpus(name);
        assert_pullback(&big_r, &certify(&big_r, eta));
    }
}

#[test]
fn pure_terms_and_a_tilted_curve_are_absorbed() {
    let big_r =
        parse_defining_function("Re(z3) + Re(z1^3) + 2*Re(z1*z2^2) + abs2(z2) + abs2(z1)^2 + Re(z1^4)", Some(6)).unwrap();
    // Stays on the boundary only because z3 follows the pure terms.
    let curve = parse_curve("z1 = t\nz3 = -t^3 - t^4\norder = 6\n", 6).unwrap();
    let sc = certify_special_coordinates(&big_r, &curve, 4).unwrap();
    assert!(sc.certificate.passes(), "{:?}", sc.certificate);
    assert_pullback(&big_r, &sc);
    let pure = sc.r.terms().filter(|(m, _)| {
        m.is_tangential() && (m.alpha == [0; 3] || m.beta == [0; 3]) && (1..=4).contains(&m.degree())
    });
    assert_eq!(pure.count(), 0);
}

#[test]
fn normalizing_twice_changes_nothing() {
    for (name, eta) in [("e1_k3.poly", 6), ("e2.poly", 10), ("kn.poly", 8)] {
        let once = certify(&corpus(name), eta);
        let twice = certify(&once.r, eta);
        for d in 0..=eta {
            assert_eq!(once.r.homogeneous_part(d), twice.r.homogeneous_part(d), "{name} degree {d}");
        }
    }
}

#[test]
fn truncations_of_e2_are_psh() {
    let sc = certify(&corpus("e2.poly"), 10);
    let d = build_diagram(&sc.r, 6, 10).unwrap();
    let grid = GridSpec { per_dim: 9, radius: 0.5, tolerance: 1e-9 };
    for nu in 1..=d.n_segments() {
        assert!(levi_psh_check(&weighted_truncation(&sc.r, &d, nu).unwrap(), &grid).passed);
    }
    assert!(levi_psh_check(&iterated_truncation(&sc.r, &d, 1).unwrap(), &grid).passed);
}
