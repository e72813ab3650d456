//! Input parsing, configuration and the end-to-end run that produces the JSON report.

pub mod config;
pub mod parse;
pub mod schema;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::domain::{
    log_disc_point, verify_containment, verify_interpolation, verify_jnu_dominated, ContainmentParams, Halton,
    PushedOutDomain, SamplerConfig, SamplingMode,
};
use crate::holder::{
    beta_sup_norm_fit, circle_average_h, conclude, mean_value_defect, witness_gap_check, GridWitness, HolderParams,
    WitnessSource,
};
use crate::newton::{
    build_diagram, decompose, iterated_truncation, levi_psh_check, weighted_truncation, GridSpec, NewtonDiagram,
    PshVerdict,
};
use crate::normal_form::{certify_special_coordinates, SpecialCoordinates};
use crate::poly::{contact_order, CurveJet, MixedPolynomial};
use crate::slice::{
    choose_direction, slice_sweep, verify_r_derivative_scaling, verify_rho_derivative_scaling, DirectionChoice,
    EDelta, FitTolerances, SliceNormalization,
};
pub use config::{ConfigError, ConfigFile, RunOptions, WitnessChoice};
pub use parse::{parse_curve, parse_defining_function, ParseError};

/// Curve used when none is given: the `z_1` axis.
pub const DEFAULT_CURVE: &str = "z1 = t\n";

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("defining function {0}")]
    Domain(ParseError),
    #[error("curve {0}")]
    Curve(ParseError),
    #[error("cannot infer eta: contact order along the curve is {0}; pass --eta")]
    Eta(String),
    #[error("witness grid {path}: {message}")]
    Witness { path: String, message: String },
}

/// A parsed run: sources, exact data and options.
#[derive(Clone, Debug)]
pub struct DomainSpec {
    pub domain_source: String,
    pub r: MixedPolynomial,
    pub curve_source: String,
    pub curve: CurveJet,
    pub eta: u32,
    pub options: RunOptions,
    pub witness: WitnessSource,
}

impl DomainSpec {
    /// Parses both sources. Without `eta`, the contact order of `R` along the curve is used when it is an integer.
    pub fn from_sources(
        domain_source: &str,
        curve_source: Option<&str>,
        eta: Option<u32>,
        options: RunOptions,
    ) -> Result<Self, InputError> {
        let cap_hint = options.degree_cap;
        let mut r = parse_defining_function(domain_source, cap_hint).map_err(InputError::Domain)?;
        if cap_hint.is_none() {
            if let Some(eta) = eta {
                r = r.with_cap(r.degree_cap().max(eta + 1));
            }
        }
        let curve_source = curve_source.unwrap_or(DEFAULT_CURVE).to_string();
        let curve = parse_curve(&curve_source, r.degree_cap()).map_err(InputError::Curve)?;
        let eta = match eta {
            Some(eta) => eta,
            None => match contact_order(&r, &curve) {
                Some(q) if q.is_integer() && q > num_traits::Zero::zero() => {
                    u32::try_from(q.to_integer()).map_err(|_| InputError::Eta(q.to_string()))?
                }
                Some(q) => return Err(InputError::Eta(q.to_string())),
                None => return Err(InputError::Eta("infinite".into())),
            },
        };
        if cap_hint.is_none() && r.degree_cap() <= eta {
            r = r.with_cap(eta + 1);
        }
        let witness = match &options.witness {
            WitnessChoice::Demo => WitnessSource::Demo,
            WitnessChoice::Zeta3 => WitnessSource::Zeta3,
            WitnessChoice::Constant(c) => WitnessSource::Constant(*c),
            WitnessChoice::Grid(path) => {
                let err = |message: String| InputError::Witness { path: path.display().to_string(), message };
                let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
                WitnessSource::Grid(Arc::new(GridWitness::parse(&text).map_err(|e| err(e.to_string()))?))
            }
        };
        Ok(DomainSpec { domain_source: domain_source.to_string(), r, curve_source, curve, eta, options, witness })
    }

    /// SHA-256 over the sources, `eta` and the canonical options.
    pub fn config_hash(&self) -> String {
        let mut h = Sha256::new();
        for part in [&self.domain_source, &self.curve_source, &format!("eta = {}", self.eta), &self.options.canonical()] {
            h.update(part.as_bytes());
            h.update([0u8]);
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// How far a run goes; each subcommand stops at one of these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Normalize,
    Diagram,
    Slice,
    Full,
}

/// The report as a JSON tree plus the verdict summary it contains.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisReport {
    pub json: Value,
    /// `(check, passed)` in execution order.
    pub verdicts: Vec<(String, bool)>,
    pub error: Option<(String, String)>,
}

impl AnalysisReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.verdicts.iter().all(|(_, ok)| *ok)
    }

    /// Pretty JSON with a trailing newline; byte-stable for a fixed spec.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.json).expect("report serializes") + "\n"
    }

    /// `1/eta` when the final stage concluded.
    pub fn bound(&self) -> Option<&str> {
        self.json.get("verdict")?.get("bound")?.as_str()
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable report section")
}

fn poly_text(p: &MixedPolynomial) -> Value {
    Value::String(p.to_string())
}

fn c64(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn psh_json(name: &str, v: &PshVerdict) -> Value {
    json!({
        "name": name,
        "passed": v.passed,
        "min_eigenvalue": v.min_eigenvalue,
        "worst_point": v.worst_point.iter().map(|z| c64(*z)).collect::<Vec<_>>(),
        "points_checked": v.points_checked,
    })
}

fn normal_form_json(sc: &SpecialCoordinates) -> Value {
    let cert = &sc.certificate;
    json!({
        "eta": sc.eta,
        "m": sc.m,
        "krantz_branch": sc.m.is_none(),
        "shear": parse::format_coefficient(&sc.h),
        "swapped": sc.swapped,
        "r": poly_text(&sc.r),
        "truncated": sc.r.truncated(),
        "psi": sc.psi.components().iter().map(poly_text).collect::<Vec<_>>(),
        "certificate": {
            "shape": cert.shape,
            "contact": cert.contact.to_string(),
            "contact_ok": cert.contact_ok,
            "witness": cert.witness.as_ref().map(|(mono, c)| json!({
                "monomial": mono.to_string(),
                "coefficient": parse::format_coefficient(c),
            })),
            "maps_triangular": cert.maps_triangular,
            "passed": cert.passes(),
        },
    })
}

fn diagram_json(d: &NewtonDiagram, conditions: [bool; 5], minimal: bool, decomposition: Value) -> Value {
    json!({
        "eta": d.eta,
        "m": d.m,
        "s_points": d.s_points.iter().map(|&(p, q)| json!([p, q])).collect::<Vec<_>>(),
        "vertices": d.vertices.iter().map(|&(p, q)| json!([p, q])).collect::<Vec<_>>(),
        "weights": d.weights.iter().map(|(e, l)| json!({"eta_nu": e.to_string(), "lambda_nu": l.to_string()})).collect::<Vec<_>>(),
        "t_table": d.t_table.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "conditions": conditions,
        "hull_minimal": minimal,
        "decomposition": decomposition,
    })
}

fn direction_json(c: &DirectionChoice) -> Value {
    let profile: BTreeMap<String, f64> =
        c.min_modulus_profile.iter().map(|(&(a, b), &v)| (format!("{a},{b}"), v)).collect();
    json!({
        "theta0": c.theta0,
        "d": c64(c.d),
        "margin": c.margin,
        "min_modulus_profile": profile,
        "samples": c.samples,
    })
}

fn e_delta_json(e: &EDelta, n: &SliceNormalization) -> Value {
    json!({
        "delta": e.delta,
        "e_delta": e.e_delta,
        "residual": e.residual,
        "iterations": e.iterations,
        "size_constant": e.size_constant,
        "tau": n.tau,
        "a_m": n.a_m(),
        "shape": to_value(&n.shape),
    })
}

/// Pushed-out domain points (`zeta_2`, `zeta_3`) for the witness bound check.
fn pushed_out_points(norm: &SliceNormalization, a: f64, epsilon0: f64, sampler: &SamplerConfig) -> Vec<[Complex64; 2]> {
    let pushed = PushedOutDomain::new(norm, a, epsilon0);
    let lo = 1e-3 * norm.delta;
    Halton::new(4, sampler.seed)
        .points(sampler.samples)
        .map(|u| [log_disc_point(u[0], u[1], lo, a), log_disc_point(u[2], u[3], lo, a)])
        .filter(|p| pushed.contains(p[0], p[1]))
        .collect()
}

struct Run {
    sections: serde_json::Map<String, Value>,
    verdicts: Vec<(String, bool)>,
}

impl Run {
    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.verdicts.push((name.into(), ok));
    }
}

/// Runs the pipeline up to `stage`. Input problems were caught by [`DomainSpec::from_sources`];
/// a stage that fails stops the run and is recorded under `error` in the report.
pub fn run_analysis(spec: &DomainSpec, stage: Stage) -> AnalysisReport {
    let mut run = Run { sections: serde_json::Map::new(), verdicts: Vec::new() };
    let error = run_stages(spec, stage, &mut run).err();
    let o = &spec.options;
    let mut root = serde_json::Map::new();
    root.insert("tool".into(), json!({"name": "holder-gain", "version": env!("CARGO_PKG_VERSION")}));
    root.insert("config_hash".into(), Value::String(spec.config_hash()));
    root.insert("stage".into(), to_value(&stage));
    root.insert(
        "input".into(),
        json!({
            "domain_source": spec.domain_source,
            "defining_function": poly_text(&spec.r),
            "degree_cap": spec.r.degree_cap(),
            "curve_source": spec.curve_source,
            "curve_order": spec.curve.order(),
            "eta": spec.eta,
            "witness": spec.witness.name(),
            "options": to_value(o),
        }),
    );
    root.extend(run.sections);
    root.insert(
        "verdicts".into(),
        Value::Array(run.verdicts.iter().map(|(n, ok)| json!({"check": n, "passed": ok})).collect()),
    );
    root.insert("error".into(), error.as_ref().map_or(Value::Null, |(s, m)| json!({"stage": s, "message": m})));
    let report = AnalysisReport { json: Value::Null, verdicts: run.verdicts, error };
    root.insert("passed".into(), Value::Bool(report.passed()));
    AnalysisReport { json: Value::Object(root), ..report }
}

type StageResult = Result<(), (String, String)>;

fn fail(stage: &str, e: impl std::fmt::Display) -> (String, String) {
    (stage.to_string(), e.to_string())
}

fn run_stages(spec: &DomainSpec, stage: Stage, run: &mut Run) -> StageResult {
    let o = &spec.options;
    let eta = spec.eta;
    let sc = certify_special_coordinates(&spec.r, &spec.curve, eta).map_err(|e| fail("normal_form", e))?;
    run.sections.insert("normal_form".into(), normal_form_json(&sc));
    run.check("special_coordinates", sc.certificate.passes());

    let grid = GridSpec { per_dim: o.psh_per_dim, radius: o.psh_radius, tolerance: o.psh_tolerance };
    let Some(m) = sc.m else {
        if stage >= Stage::Diagram {
            let psh = levi_psh_check(&sc.r, &grid);
            run.check("psh:r", psh.passed);
            run.sections.insert("psh".into(), Value::Array(vec![psh_json("r", &psh)]));
        }
        if stage == Stage::Full {
            run.sections.insert("verdict".into(), json!({
                "eta": eta,
                "bound": format!("1/{eta}"),
                "bound_value": 1.0 / eta as f64,
                "branch": "krantz",
                "conclusion": format!("Holder gain eps <= 1/{eta}"),
                "reasoning": [
                    format!("no mixed term of order <= {eta}: the Bloom-Graham type exceeds eta"),
                    "Krantz: Bloom-Graham type m gives eps <= 1/m, for every m up to the type".to_string(),
                    format!("taking m >= {eta} gives eps <= 1/m <= 1/{eta}"),
                ],
            }));
        }
        return Ok(());
    };
    if stage == Stage::Normalize {
        return Ok(());
    }

    let r = &sc.r;
    let diagram = build_diagram(r, m, eta).map_err(|e| fail("newton_diagram", e))?;
    let dec = decompose(r, &diagram).map_err(|e| fail("newton_diagram", e))?;
    let conditions = diagram.check_conditions().holds;
    let minimal = diagram.hull_is_minimal();
    let m_polys: BTreeMap<String, Value> = dec
        .m_polynomials
        .iter()
        .map(|(&(a, b), vp)| (format!("{a},{b}"), json!({"nu": vp.nu, "poly": poly_text(&vp.poly)})))
        .collect();
    let decomposition = json!({
        "m_polynomials": m_polys,
        "m_polynomials_valid": dec.m_polynomials_valid(&diagram),
        "core_terms": dec.core_terms.iter().map(|mono| mono.to_string()).collect::<Vec<_>>(),
        "tail": dec.tail.iter().map(|t| json!({"monomial": t.monomial.to_string(), "k": t.k, "l": t.l, "bound": t.bound})).collect::<Vec<_>>(),
    });
    run.sections.insert("newton".into(), diagram_json(&diagram, conditions, minimal, decomposition));
    run.check("diagram_conditions", conditions.iter().all(|&c| c) && minimal);
    run.check("vertex_polynomials", dec.m_polynomials_valid(&diagram));

    let n = diagram.n_segments();
    let mut psh = vec![("r".to_string(), levi_psh_check(r, &grid))];
    for nu in 1..=n {
        let t = weighted_truncation(r, &diagram, nu).map_err(|e| fail("newton_diagram", e))?;
        psh.push((format!("r~^{nu}"), levi_psh_check(&t, &grid)));
    }
    for nu in 1..n {
        let t = iterated_truncation(r, &diagram, nu).map_err(|e| fail("newton_diagram", e))?;
        psh.push((format!("r~^{nu},{}", nu + 1), levi_psh_check(&t, &grid)));
    }
    for (name, v) in &psh {
        run.check(format!("psh:{name}"), v.passed);
    }
    run.sections.insert("psh".into(), Value::Array(psh.iter().map(|(name, v)| psh_json(name, v)).collect()));
    if stage == Stage::Diagram {
        return Ok(());
    }

    let tol = FitTolerances { slope: o.slope_tolerance, r_squared: o.r_squared, ..FitTolerances::default() };
    let choice = choose_direction(&dec, o.direction_samples).map_err(|e| fail("slice_analysis", e))?;
    let deltas = o.deltas.values();
    let r_table = verify_r_derivative_scaling(r, &diagram, &choice, &deltas, &tol).map_err(|e| fail("slice_analysis", e))?;
    let sweep = slice_sweep(r, &diagram, &choice, &deltas).map_err(|e| fail("slice_analysis", e))?;
    let rho_report = verify_rho_derivative_scaling(&sweep, &diagram, &tol);
    run.check("r_derivative_scaling", r_table.passed());
    run.check("rho_derivative_scaling", rho_report.passed);
    run.sections.insert(
        "slice".into(),
        json!({
            "direction": direction_json(&choice),
            "boundary_points": sweep.iter().map(|(e, n)| e_delta_json(e, n)).collect::<Vec<_>>(),
            "r_scaling": to_value(&r_table),
            "rho_scaling": to_value(&rho_report),
        }),
    );
    if stage == Stage::Slice {
        return Ok(());
    }

    // Domain geometry.
    let sampler = o.sampler();
    let params = ContainmentParams { c: o.c, a: o.a, epsilon0: o.epsilon0, max_constant: o.max_constant };
    let mut containment = Vec::new();
    let mut jnu = Vec::new();
    for &delta in &o.containment_deltas {
        let (_, norm) = crate::slice::slice_sweep(r, &diagram, &choice, &[delta])
            .map_err(|e| fail("domain_geometry", e))?
            .pop()
            .expect("one delta in, one out");
        let v = verify_containment(&norm, eta, &params, &sampler).map_err(|e| fail("domain_geometry", e))?;
        run.check(format!("containment:{delta:e}"), v.passed);
        containment.push(v);
        let j = verify_jnu_dominated(&norm, &diagram, o.a, o.max_constant, &sampler);
        run.check(format!("jnu:{delta:e}"), j.passed);
        jnu.push(j);
    }
    let interpolation = verify_interpolation(&diagram, &sampler);
    run.check("interpolation", interpolation.passed);
    run.sections.insert(
        "domain".into(),
        json!({
            "params": to_value(&params),
            "containment": to_value(&containment),
            "interpolation": to_value(&interpolation),
            "jnu": to_value(&jnu),
        }),
    );

    // Holder pipeline.
    let hp = HolderParams { a: o.a, b: o.b, c: o.c, epsilon0: o.epsilon0, quadrature_nodes: o.quadrature_nodes };
    let norms: Vec<&SliceNormalization> = sweep.iter().map(|(_, n)| n).collect();
    let beta_sampler = SamplerConfig { samples: o.beta_samples, seed: o.seed, mode: SamplingMode::Multiscale };
    let beta = beta_sup_norm_fit(&norms, eta, &spec.witness, &hp, &beta_sampler, o.beta_slope_tolerance)
        .map_err(|e| fail("holder_pipeline", e))?;
    let sup_points: Vec<Vec<[Complex64; 2]>> =
        norms.iter().map(|n| pushed_out_points(n, o.a, o.epsilon0, &beta_sampler)).collect();
    let gap = witness_gap_check(&spec.witness, &deltas, o.b, o.gap_floor, &sup_points);
    let mut circle = Vec::new();
    let mut mean_value: f64 = 0.0;
    for n in &norms {
        let f = spec.witness.at(n.delta);
        let h = circle_average_h(|z| f.eval(z[1], z[2]), n.tilde_e[0], n.delta, eta, o.b, o.c, o.quadrature_nodes)
            .map_err(|e| fail("holder_pipeline", e))?;
        circle.push(json!({"delta": n.delta, "h_delta": h}));
        let radius = 0.8 * o.c * n.delta.powf(1.0 / eta as f64);
        mean_value = mean_value.max(mean_value_defect(|z| z * z * z - 2.0 * z, n.tilde_e[0], radius, o.quadrature_nodes));
    }
    run.check("beta_sup_norm", beta.passed);
    run.check("witness_gap", gap.passed);
    run.check("mean_value_self_test", mean_value < 1e-10);
    let verdict = conclude(eta, &beta, &gap);
    run.sections.insert(
        "holder".into(),
        json!({
            "params": to_value(&hp),
            "witness": spec.witness.name(),
            "beta": to_value(&beta),
            "gap": to_value(&gap),
            "circle_average": circle,
            "mean_value_defect": mean_value,
        }),
    );
    let verdict = verdict.map_err(|e| fail("holder_pipeline", e))?;
    let mut v = to_value(&verdict);
    v["branch"] = json!("newton");
    run.sections.insert("verdict".into(), v);
    Ok(())
}
