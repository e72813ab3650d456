//! Acceptance gate: one PASS/FAIL line per criterion. Runs without the libtest harness so the
//! lines are printed on success too; exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use holder_gain::domain::{verify_containment, ContainmentParams, SamplerConfig};
use holder_gain::holder::{beta_sup_norm_fit, witness_gap_check, HolderParams, WitnessSource};
use holder_gain::newton::{
    build_diagram, decompose, iterated_truncation, levi_psh_check, weighted_truncation, GridSpec, NewtonDiagram,
};
use holder_gain::normal_form::{certify_special_coordinates, SpecialCoordinates};
use holder_gain::poly::coeff::{cr_int, cr_to_c64, rational};
use holder_gain::poly::{HoloPolyMap, MixedMonomial, MixedPolynomial, Rational, Var};
use holder_gain::report::{run_analysis, ConfigFile, DomainSpec, Stage};
use holder_gain::slice::{
    choose_direction, slice_sweep, solve_e_delta, slice_normalize, verify_r_derivative_scaling,
    verify_rho_derivative_scaling, FitTolerances, GeometricSweep, SliceNormalization,
};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const CORPUS: [&str; 6] = ["half_space", "e1_k1", "e1_k2", "e1_k3", "e2", "kn"];

type Outcome = Result<String, String>;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn load(name: &str) -> DomainSpec {
    let dir = corpus_dir();
    let cfg = ConfigFile::parse(&std::fs::read_to_string(dir.join(format!("{name}.conf"))).unwrap(), &dir).unwrap();
    let domain = std::fs::read_to_string(cfg.domain.as_ref().unwrap()).unwrap();
    let curve = cfg.curve.as_ref().map(|p| std::fs::read_to_string(p).unwrap());
    DomainSpec::from_sources(&domain, curve.as_deref(), cfg.eta, cfg.options).unwrap()
}

fn special(spec: &DomainSpec) -> SpecialCoordinates {
    certify_special_coordinates(&spec.r, &spec.curve, spec.eta).unwrap()
}

fn diagram(sc: &SpecialCoordinates) -> Option<NewtonDiagram> {
    sc.m.map(|m| build_diagram(&sc.r, m, sc.eta).unwrap())
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_1() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for name in CORPUS {
        let spec = load(name);
        let start = Instant::now();
        let sc = special(&spec);
        let secs = start.elapsed().as_secs_f64();
        let cert = &sc.certificate;
        let witness_ok = match (&sc.m, &cert.witness) {
            (None, None) => true,
            (Some(_), Some((_, c))) => cr_to_c64(c).norm() > 0.0,
            _ => false,
        };
        let pass = cert.shape && cert.contact_ok && witness_ok && cert.passes() && secs < 5.0;
        ok &= pass;
        lines.push(format!("{name}:{}({secs:.2}s)", if pass { "ok" } else { "FAIL" }));
    }
    ensure(ok, lines.join(" "))
}

fn q(n: i64) -> Rational {
    rational(n, 1)
}

fn criterion_2() -> Outcome {
    let sc = special(&load("e2"));
    let d = diagram(&sc).unwrap();
    let vertices_ok = d.vertices == vec![(10, 0), (4, 2), (0, 6)];
    let weights_ok = d.weights == vec![(q(10), rational(10, 3)), (q(6), q(6))];
    let t_ok = d.t_table == [10, 7, 4, 3, 2, 1, 0].map(q).to_vec();
    let cond = d.check_conditions();
    let t: Vec<String> = d.t_table.iter().map(|t| t.to_string()).collect();
    ensure(
        vertices_ok && weights_ok && t_ok && cond.all() && d.hull_is_minimal(),
        format!("vertices {:?}, t-table {{{}}}, conditions {:?}", d.vertices, t.join(", "), cond.holds),
    )
}

fn criterion_3() -> Outcome {
    let grid = GridSpec { per_dim: 9, radius: 0.5, tolerance: 1e-9 };
    let mut worst = f64::INFINITY;
    let mut checked = 0;
    let mut failures = Vec::new();
    for name in CORPUS {
        let sc = special(&load(name));
        let mut polys = vec![("r".to_string(), sc.r.clone())];
        if let Some(d) = diagram(&sc) {
            let n = d.n_segments();
            for nu in 1..=n {
                polys.push((format!("r~^{nu}"), weighted_truncation(&sc.r, &d, nu).unwrap()));
            }
            for nu in 1..n {
                polys.push((format!("r~^{nu},{}", nu + 1), iterated_truncation(&sc.r, &d, nu).unwrap()));
            }
        }
        for (label, p) in polys {
            let v = levi_psh_check(&p, &grid);
            checked += 1;
            worst = worst.min(v.min_eigenvalue);
            if !v.passed {
                failures.push(format!("{name}:{label}"));
            }
        }
    }
    ensure(failures.is_empty(), format!("{checked} functions, min eigenvalue {worst:.3e}, failures {failures:?}"))
}

fn criterion_4() -> Outcome {
    let tol = FitTolerances::default();
    let deltas = GeometricSweep::default().values();
    let mut lines = Vec::new();
    let mut ok = true;
    for name in CORPUS {
        let sc = special(&load(name));
        let Some(d) = diagram(&sc) else { continue };
        let start = Instant::now();
        let choice = choose_direction(&decompose(&sc.r, &d).unwrap(), 720).unwrap();
        let table = verify_r_derivative_scaling(&sc.r, &d, &choice, &deltas, &tol).unwrap();
        let sweep = slice_sweep(&sc.r, &d, &choice, &deltas).unwrap();
        let rho = verify_rho_derivative_scaling(&sweep, &d, &tol);
        let secs = start.elapsed().as_secs_f64();
        let vertex_ok = table.vertex.iter().chain(&rho.table.vertex).all(|row| {
            row.fit.as_ref().is_some_and(|f| (f.slope - row.target).abs() <= 0.05 && f.r_squared >= 0.99 && f.points == 9)
        });
        let am_slope = rho.a_m.fit.as_ref().map_or(f64::NAN, |f| f.slope);
        let pass = vertex_ok && am_slope.abs() <= 0.05 && table.passed() && rho.passed && secs < 30.0;
        ok &= pass;
        let slopes: Vec<String> = table
            .vertex
            .iter()
            .map(|row| format!("{:.3}/{:.3}", row.fit.as_ref().map_or(f64::NAN, |f| f.slope), row.target))
            .collect();
        lines.push(format!("{name}:{}[{} A_m {am_slope:.3}]({secs:.1}s)", if pass { "ok" } else { "FAIL" }, slopes.join(",")));
    }
    ensure(ok, lines.join(" "))
}

fn normalization(sc: &SpecialCoordinates, delta: f64) -> SliceNormalization {
    match diagram(sc) {
        Some(d) => {
            let choice = choose_direction(&decompose(&sc.r, &d).unwrap(), 720).unwrap();
            slice_sweep(&sc.r, &d, &choice, &[delta]).unwrap().pop().unwrap().1
        }
        None => {
            let e = solve_e_delta(&sc.r, Complex64::new(1.0, 0.0), sc.eta, delta).unwrap();
            slice_normalize(&sc.r, e.point, delta, 2).unwrap()
        }
    }
}

fn criterion_5() -> Outcome {
    let params = ContainmentParams::default();
    let sampler = SamplerConfig::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for name in CORPUS {
        let sc = special(&load(name));
        let mut worst_c: f64 = 0.0;
        let mut violations = 0;
        for delta in [1e-3, 1e-4, 1e-5] {
            let v = verify_containment(&normalization(&sc, delta), sc.eta, &params, &sampler).unwrap();
            ok &= v.passed;
            worst_c = worst_c.max(v.constant);
            violations += v.violations;
        }
        lines.push(format!("{name}:C={worst_c:.2},violations={violations}"));
    }
    ensure(ok, format!("C <= 10 and no violations at a=0.25 c=0.1: {}", lines.join(" ")))
}

fn criterion_6() -> Outcome {
    let deltas = GeometricSweep::default().values();
    let sampler = SamplerConfig { samples: 20_000, ..SamplerConfig::default() };
    let mut lines = Vec::new();
    let mut ok = true;
    for name in ["e1_k2", "e2"] {
        let sc = special(&load(name));
        let d = diagram(&sc).unwrap();
        let choice = choose_direction(&decompose(&sc.r, &d).unwrap(), 720).unwrap();
        let sweep = slice_sweep(&sc.r, &d, &choice, &deltas).unwrap();
        let norms: Vec<&SliceNormalization> = sweep.iter().map(|(_, n)| n).collect();
        let fit = beta_sup_norm_fit(&norms, sc.eta, &WitnessSource::Demo, &HolderParams::default(), &sampler, 0.1).unwrap();
        let slope = fit.fit.as_ref().map_or(f64::NAN, |f| f.slope);
        let target = -1.0 / sc.eta as f64;
        let pass = (slope - target).abs() <= 0.1;
        ok &= pass;
        lines.push(format!("{name}: slope {slope:.4} target {target:.4}"));
    }
    ensure(ok, lines.join(", "))
}

fn criterion_7() -> Outcome {
    let deltas = GeometricSweep::default().values();
    let table = witness_gap_check(&WitnessSource::Demo, &deltas, 1.0, 1e-3, &[]);
    let max_err = table.gaps.iter().map(|g| (g - 1.0 / 6.0).abs()).fold(0.0, f64::max);
    let floor_ok = deltas.iter().zip(&table.derivatives).all(|(delta, d)| *d >= 1.0 / (3.0 * delta));
    let demo = WitnessSource::Demo.at(1e-4);
    let at_half = demo.d_zeta3(Complex64::new(0.0, 0.0), Complex64::new(-0.5e-4, 0.0)).norm() * 1e-4;
    ensure(
        max_err <= 1e-12 && floor_ok && table.passed,
        format!("max |gap - 1/6| = {max_err:.1e} over {} deltas, delta*|f'| = {at_half:.6}", deltas.len()),
    )
}

fn criterion_8() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut bounds = Vec::new();
    for name in CORPUS {
        let spec = load(name);
        let a = run_analysis(&spec, Stage::Full);
        let b = run_analysis(&spec, Stage::Full);
        let identical = a.to_json_string() == b.to_json_string();
        let expected = format!("1/{}", spec.eta);
        let bound = a.bound().map(str::to_string);
        let value = a.json["verdict"]["bound_value"].as_f64();
        let pass = identical && bound.as_deref() == Some(expected.as_str()) && value == Some(1.0 / spec.eta as f64) && a.passed();
        ok &= pass;
        bounds.push((spec.eta, value.unwrap_or(f64::NAN)));
        lines.push(format!("{name}:{}{}", bound.unwrap_or_else(|| "none".into()), if pass { "" } else { "(FAIL)" }));
    }
    bounds.sort_by_key(|&(eta, _)| eta);
    let monotone = bounds.windows(2).all(|w| w[0].0 == w[1].0 || w[1].1 < w[0].1);
    ensure(ok && monotone, format!("{} (byte-identical reruns)", lines.join(" ")))
}

const CAP: u32 = 6;

fn poly_strategy(max_deg: u32, max_terms: usize) -> impl Strategy<Value = MixedPolynomial> {
    let mono = (prop::array::uniform3(0u32..=2), prop::array::uniform3(0u32..=2))
        .prop_filter("degree", move |(a, b)| a.iter().chain(b).sum::<u32>() <= max_deg)
        .prop_map(|(a, b)| MixedMonomial::new(a, b));
    prop::collection::vec((mono, -4i64..=4, -4i64..=4), 0..=max_terms)
        .prop_map(|ts| MixedPolynomial::from_terms(ts.into_iter().map(|(m, a, b)| (m, cr_int(a, b))), CAP))
}

fn map_strategy(cap: u32) -> impl Strategy<Value = HoloPolyMap> {
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

fn point_strategy() -> impl Strategy<Value = [Complex64; 3]> {
    prop::array::uniform3((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)))
}

fn criterion_9() -> Outcome {
    let runner = || TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    let close = |a: Complex64, b: Complex64, rel: f64| (a - b).norm() <= rel * a.norm().max(b.norm()).max(1.0);
    let mut results = Vec::new();

    let hermitian = runner().run(
        &(poly_strategy(3, 5), poly_strategy(3, 5), map_strategy(CAP)),
        |(p, q, map)| {
            let (p, q) = (p.real_part(), q.real_part());
            prop_assert!((&p + &q).is_real_valued() && (&p * &q).is_real_valued() && p.compose(&map).is_real_valued());
            Ok(())
        },
    );
    results.push(("hermitian", hermitian.map_err(|e| e.to_string())));

    let homomorphism = runner().run(&(poly_strategy(3, 5), poly_strategy(3, 5), point_strategy()), |(p, q, x)| {
        prop_assert!(close((&p * &q).evaluate(&x), p.evaluate(&x) * q.evaluate(&x), 1e-12));
        prop_assert!(close((&p + &q).evaluate(&x), p.evaluate(&x) + q.evaluate(&x), 1e-12));
        Ok(())
    });
    results.push(("evaluation", homomorphism.map_err(|e| e.to_string())));

    let wirtinger = runner().run(&(poly_strategy(4, 6), point_strategy(), 0usize..3), |(p, x, i)| {
        let h = 1e-5;
        let shifted = |dz: Complex64| {
            let mut y = x;
            y[i] += dz;
            p.evaluate(&y)
        };
        let dx = (shifted(Complex64::new(h, 0.0)) - shifted(Complex64::new(-h, 0.0))) / (2.0 * h);
        let dy = (shifted(Complex64::new(0.0, h)) - shifted(Complex64::new(0.0, -h))) / (2.0 * h);
        let iu = Complex64::new(0.0, 1.0);
        let dz = p.wirtinger_derivative(Var::Z(i), 1).evaluate(&x);
        let dzb = p.wirtinger_derivative(Var::ZBar(i), 1).evaluate(&x);
        let scale = p.terms().map(|(_, c)| cr_to_c64(c).norm()).sum::<f64>().max(1.0);
        prop_assert!((dz - (dx - iu * dy) * 0.5).norm() <= 1e-6 * scale);
        prop_assert!((dzb - (dx + iu * dy) * 0.5).norm() <= 1e-6 * scale);
        Ok(())
    });
    results.push(("wirtinger", wirtinger.map_err(|e| e.to_string())));

    let assoc = runner().run(&(poly_strategy(3, 4), map_strategy(4), map_strategy(4)), |(p, a, b)| {
        let p = p.with_cap(4);
        let left = p.compose(&a).compose(&b);
        let right = p.compose(&a.compose(&b));
        prop_assert!(left.terms().eq(right.terms()));
        Ok(())
    });
    results.push(("compose", assoc.map_err(|e| e.to_string())));

    let failed: Vec<String> =
        results.iter().filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}"))).collect();
    let names: Vec<&str> = results.iter().map(|(n, _)| *n).collect();
    ensure(failed.is_empty(), if failed.is_empty() { format!("1000 cases each: {}", names.join(", ")) } else { failed.join("; ") })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("special-coordinates certificate on the corpus", criterion_1),
        ("E2 Newton diagram, weights and t-table", criterion_2),
        ("plurisubharmonicity of r and its truncations", criterion_3),
        ("vertex derivative slopes p_nu/eta and A_m ~ 1", criterion_4),
        ("slab containment constant and pushed-out inclusion", criterion_5),
        ("beta sup-norm slope -1/eta", criterion_6),
        ("demo witness gap 1/6 and derivative floor", criterion_7),
        ("final bound 1/eta, deterministic reports", criterion_8),
        ("polynomial core property suite", criterion_9),
    ];
    let mut failures = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {status} {title}: {detail}", i + 1);
    }
    if failures > 0 {
        println!("{failures} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
