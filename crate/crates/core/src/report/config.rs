//! `key = value` run configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{SamplerConfig, SamplingMode};
use crate::slice::GeometricSweep;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

/// Witness selection as written in configs: `demo`, `zeta3`, `constant:<re>,<im>` or `grid:<path>`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum WitnessChoice {
    Demo,
    Zeta3,
    Constant(Complex64),
    Grid(PathBuf),
}

impl FromStr for WitnessChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "demo" => Ok(WitnessChoice::Demo),
            "zeta3" => Ok(WitnessChoice::Zeta3),
            _ => {
                if let Some(rest) = s.strip_prefix("constant:") {
                    let (re, im) = rest.split_once(',').unwrap_or((rest, "0"));
                    let re = re.trim().parse::<f64>().map_err(|e| format!("constant witness: {e}"))?;
                    let im = im.trim().parse::<f64>().map_err(|e| format!("constant witness: {e}"))?;
                    Ok(WitnessChoice::Constant(Complex64::new(re, im)))
                } else if let Some(path) = s.strip_prefix("grid:") {
                    Ok(WitnessChoice::Grid(PathBuf::from(path)))
                } else {
                    Err(format!("unknown witness {s:?}"))
                }
            }
        }
    }
}

impl std::fmt::Display for WitnessChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WitnessChoice::Demo => write!(f, "demo"),
            WitnessChoice::Zeta3 => write!(f, "zeta3"),
            WitnessChoice::Constant(c) => write!(f, "constant:{},{}", c.re, c.im),
            WitnessChoice::Grid(p) => write!(f, "grid:{}", p.display()),
        }
    }
}

/// Numerical options of a run. Every field has a default; a config file overrides a subset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunOptions {
    pub deltas: GeometricSweep,
    /// Deltas for the containment check.
    pub containment_deltas: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub sampling: SamplingMode,
    /// Samples per delta for the `beta` sup-norm estimate.
    pub beta_samples: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub epsilon0: f64,
    pub a1: f64,
    pub max_constant: f64,
    pub slope_tolerance: f64,
    pub beta_slope_tolerance: f64,
    pub r_squared: f64,
    pub psh_per_dim: usize,
    pub psh_radius: f64,
    pub psh_tolerance: f64,
    pub direction_samples: usize,
    pub quadrature_nodes: usize,
    pub gap_floor: f64,
    pub witness: WitnessChoice,
    pub degree_cap: Option<u32>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            deltas: GeometricSweep::default(),
            containment_deltas: vec![1e-3, 1e-4, 1e-5],
            samples: 100_000,
            seed: 0,
            sampling: SamplingMode::Uniform,
            beta_samples: 20_000,
            a: 0.25,
            b: 1.0,
            c: 0.1,
            epsilon0: 0.1,
            a1: 0.1,
            max_constant: 10.0,
            slope_tolerance: 0.05,
            beta_slope_tolerance: 0.1,
            r_squared: 0.99,
            psh_per_dim: 9,
            psh_radius: 0.5,
            psh_tolerance: 1e-9,
            direction_samples: 720,
            quadrature_nodes: 256,
            gap_floor: 1e-3,
            witness: WitnessChoice::Demo,
            degree_cap: None,
        }
    }
}

/// Parsed config file: input paths (resolved against the file's directory) and options.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    pub domain: Option<PathBuf>,
    pub curve: Option<PathBuf>,
    pub eta: Option<u32>,
    pub options: RunOptions,
}

fn parse_value<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e| ConfigError { line, message: format!("{key}: {e}") })
}

impl ConfigFile {
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut cfg = ConfigFile::default();
        let mut seen = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(ConfigError { line, message: "expected `key = value`".into() });
            };
            let (key, v) = (key.trim(), value.trim());
            if let Some(first) = seen.insert(key.to_string(), line) {
                return Err(ConfigError { line, message: format!("{key} already set on line {first}") });
            }
            cfg.set(line, key, v, base)?;
        }
        Ok(cfg)
    }

    fn set(&mut self, line: usize, key: &str, v: &str, base: &Path) -> Result<(), ConfigError> {
        let o = &mut self.options;
        match key {
            "domain" => self.domain = Some(base.join(v)),
            "curve" => self.curve = Some(base.join(v)),
            "eta" => self.eta = Some(parse_value(line, key, v)?),
            "deltas" => o.deltas = parse_value(line, key, v)?,
            "containment_deltas" => {
                o.containment_deltas =
                    v.split(',').map(|s| parse_value(line, key, s.trim())).collect::<Result<_, _>>()?
            }
            "samples" => o.samples = parse_value(line, key, v)?,
            "seed" => o.seed = parse_value(line, key, v)?,
            "sampling" => {
                o.sampling = match v {
                    "uniform" => SamplingMode::Uniform,
                    "multiscale" => SamplingMode::Multiscale,
                    _ => return Err(ConfigError { line, message: format!("sampling: unknown mode {v:?}") }),
                }
            }
            "beta_samples" => o.beta_samples = parse_value(line, key, v)?,
            "a" => o.a = parse_value(line, key, v)?,
            "b" => o.b = parse_value(line, key, v)?,
            "c" => o.c = parse_value(line, key, v)?,
            "epsilon0" => o.epsilon0 = parse_value(line, key, v)?,
            "a1" => o.a1 = parse_value(line, key, v)?,
            "max_constant" => o.max_constant = parse_value(line, key, v)?,
            "slope_tolerance" => o.slope_tolerance = parse_value(line, key, v)?,
            "beta_slope_tolerance" => o.beta_slope_tolerance = parse_value(line, key, v)?,
            "r_squared" => o.r_squared = parse_value(line, key, v)?,
            "psh_per_dim" => o.psh_per_dim = parse_value(line, key, v)?,
            "psh_radius" => o.psh_radius = parse_value(line, key, v)?,
            "psh_tolerance" => o.psh_tolerance = parse_value(line, key, v)?,
            "direction_samples" => o.direction_samples = parse_value(line, key, v)?,
            "quadrature_nodes" => o.quadrature_nodes = parse_value(line, key, v)?,
            "gap_floor" => o.gap_floor = parse_value(line, key, v)?,
            "witness" => {
                o.witness = match parse_value::<WitnessChoice>(line, key, v)? {
                    WitnessChoice::Grid(p) => WitnessChoice::Grid(base.join(p)),
                    w => w,
                }
            }
            "degree_cap" => o.degree_cap = Some(parse_value(line, key, v)?),
            _ => return Err(ConfigError { line, message: format!("unknown key {key:?}") }),
        }
        Ok(())
    }
}

impl RunOptions {
    pub fn sampler(&self) -> SamplerConfig {
        SamplerConfig { samples: self.samples, seed: self.seed, mode: self.sampling }
    }

    /// Canonical `key = value` text; hashed into the report.
    pub fn canonical(&self) -> String {
        let deltas: Vec<String> = self.containment_deltas.iter().map(|d| format!("{d:e}")).collect();
        let mut lines = vec![
            format!("deltas = {}", self.deltas),
            format!("containment_deltas = {}", deltas.join(",")),
            format!("samples = {}", self.samples),
            format!("seed = {}", self.seed),
            format!("sampling = {}", if self.sampling == SamplingMode::Uniform { "uniform" } else { "multiscale" }),
            format!("beta_samples = {}", self.beta_samples),
        ];
        for (k, v) in [
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("epsilon0", self.epsilon0),
            ("a1", self.a1),
            ("max_constant", self.max_constant),
            ("slope_tolerance", self.slope_tolerance),
            ("beta_slope_tolerance", self.beta_slope_tolerance),
            ("r_squared", self.r_squared),
            ("psh_radius", self.psh_radius),
            ("psh_tolerance", self.psh_tolerance),
            ("gap_floor", self.gap_floor),
        ] {
            lines.push(format!("{k} = {v:e}"));
        }
        lines.push(format!("psh_per_dim = {}", self.psh_per_dim));
        lines.push(format!("direction_samples = {}", self.direction_samples));
        lines.push(format!("quadrature_nodes = {}", self.quadrature_nodes));
        lines.push(format!("witness = {}", self.witness));
        if let Some(cap) = self.degree_cap {
            lines.push(format!("degree_cap = {cap}"));
        }
        lines.join("\n") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_resolves_paths() {
        let text = "# run\ndomain = e2.poly\neta = 10\nsamples = 500  # quick\ndeltas = 1e-2:1e-4:5\nwitness = constant:1,0\n";
        let cfg = ConfigFile::parse(text, Path::new("/corpus")).unwrap();
        assert_eq!(cfg.domain, Some(PathBuf::from("/corpus/e2.poly")));
        assert_eq!(cfg.eta, Some(10));
        assert_eq!(cfg.options.samples, 500);
        assert_eq!(cfg.options.deltas.count, 5);
        assert_eq!(cfg.options.witness, WitnessChoice::Constant(Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn errors_name_the_line() {
        let e = ConfigFile::parse("eta = 4\nbogus = 1\n", Path::new(".")).unwrap_err();
        assert_eq!(e.line, 2);
        let e = ConfigFile::parse("eta = 4\neta = 5\n", Path::new(".")).unwrap_err();
        assert!(e.message.contains("already set"));
        assert!(ConfigFile::parse("samples = many\n", Path::new(".")).is_err());
        assert!(ConfigFile::parse("no equals sign\n", Path::new(".")).is_err());
    }

    #[test]
    fn canonical_text_reparses_to_the_same_options() {
        let mut o = RunOptions::default();
        o.seed = 7;
        o.witness = WitnessChoice::Zeta3;
        let back = ConfigFile::parse(&o.canonical(), Path::new(".")).unwrap();
        assert_eq!(back.options, o);
    }
}
