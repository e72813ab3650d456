//! Tabulated witnesses.
//!
//! A grid file is plain text. `#` starts a comment; blank lines are ignored.
//!
//! ```text
//! holder-gain-witness-grid 1
//! name <word>
//! bound <f64>                    # declared sup |f|
//! derivative_floor <f64>         # floor for |df/dzeta_3|, divided by delta when scaled
//! zeta3_scale none|delta         # with `delta`, the z3 axes are in units of delta
//! axis z2re <min> <max> <n>
//! axis z2im <min> <max> <n>
//! axis z3re <min> <max> <n>
//! axis z3im <min> <max> <n>
//! data
//! <re> <im>                      # n_z2re * n_z2im * n_z3re * n_z3im lines, z3im fastest
//! ```
//!
//! Values between nodes are multilinear interpolants; an axis with one node is constant in
//! that coordinate. Points outside the box evaluate to `NaN`.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::witness::HolomorphicWitness;

pub const GRID_MAGIC: &str = "holder-gain-witness-grid";
const AXES: [&str; 4] = ["z2re", "z2im", "z3re", "z3im"];

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("grid file line {line}: {message}")]
pub struct GridError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    /// Lower node index and weight of the upper node, or `None` outside `[min, max]`.
    fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if self.n == 1 {
            return Some((0, 0.0));
        }
        if !(self.min..=self.max).contains(&x) {
            return None;
        }
        let t = (x - self.min) / (self.max - self.min) * (self.n - 1) as f64;
        let i = (t.floor() as usize).min(self.n - 2);
        Some((i, t - i as f64))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridWitness {
    pub name: String,
    pub bound: f64,
    pub derivative_floor: f64,
    pub delta_scaled: bool,
    pub axes: [Axis; 4],
    pub data: Vec<Complex64>,
}

impl GridWitness {
    pub fn parse(text: &str) -> Result<Self, GridError> {
        let err = |line: usize, message: String| GridError { line, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let num = |line: usize, s: &str| s.parse::<f64>().map_err(|e| err(line, format!("{s:?}: {e}")));

        let (line, header) = lines.next().ok_or_else(|| err(0, "empty file".into()))?;
        if header != format!("{GRID_MAGIC} 1") {
            return Err(err(line, format!("expected header `{GRID_MAGIC} 1`")));
        }
        let mut name = None;
        let mut bound = None;
        let mut floor = None;
        let mut scaled = None;
        let mut axes: [Option<Axis>; 4] = [None; 4];
        let mut data_line = None;
        for (line, l) in lines.by_ref() {
            let words: Vec<&str> = l.split_whitespace().collect();
            match words.as_slice() {
                ["name", n] => name = Some(n.to_string()),
                ["bound", v] => bound = Some(num(line, v)?),
                ["derivative_floor", v] => floor = Some(num(line, v)?),
                ["zeta3_scale", "none"] => scaled = Some(false),
                ["zeta3_scale", "delta"] => scaled = Some(true),
                ["axis", which, lo, hi, n] => {
                    let k = AXES.iter().position(|a| a == which).ok_or_else(|| err(line, format!("unknown axis {which}")))?;
                    let n: usize = n.parse().map_err(|e| err(line, format!("{n:?}: {e}")))?;
                    let (min, max) = (num(line, lo)?, num(line, hi)?);
                    if n == 0 || (n > 1 && !(max > min)) {
                        return Err(err(line, "axis needs n >= 1 and max > min".into()));
                    }
                    axes[k] = Some(Axis { min, max, n });
                }
                ["data"] => {
                    data_line = Some(line);
                    break;
                }
                _ => return Err(err(line, format!("unrecognized entry {l:?}"))),
            }
        }
        let data_line = data_line.ok_or_else(|| err(0, "missing `data` section".into()))?;
        let missing = |what: &str| err(data_line, format!("missing `{what}` before data"));
        let axes = [0, 1, 2, 3].map(|k| axes[k].ok_or(k));
        let axes = match axes {
            [Ok(a), Ok(b), Ok(c), Ok(d)] => [a, b, c, d],
            other => {
                let k = other.iter().find_map(|a| a.err()).unwrap_or(0);
                return Err(missing(&format!("axis {}", AXES[k])));
            }
        };
        let expected: usize = axes.iter().map(|a| a.n).product();
        let mut data = Vec::with_capacity(expected);
        for (line, l) in lines {
            let words: Vec<&str> = l.split_whitespace().collect();
            let [re, im] = words.as_slice() else {
                return Err(err(line, "expected `<re> <im>`".into()));
            };
            data.push(Complex64::new(num(line, re)?, num(line, im)?));
        }
        if data.len() != expected {
            return Err(err(data_line, format!("expected {expected} samples, found {}", data.len())));
        }
        Ok(GridWitness {
            name: name.ok_or_else(|| missing("name"))?,
            bound: bound.ok_or_else(|| missing("bound"))?,
            derivative_floor: floor.ok_or_else(|| missing("derivative_floor"))?,
            delta_scaled: scaled.ok_or_else(|| missing("zeta3_scale"))?,
            axes,
            data,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{GRID_MAGIC} 1\nname {}\nbound {:e}\nderivative_floor {:e}\n", self.name, self.bound, self.derivative_floor);
        let _ = writeln!(out, "zeta3_scale {}", if self.delta_scaled { "delta" } else { "none" });
        for (name, a) in AXES.iter().zip(&self.axes) {
            let _ = writeln!(out, "axis {name} {:e} {:e} {}", a.min, a.max, a.n);
        }
        out.push_str("data\n");
        for v in &self.data {
            let _ = writeln!(out, "{:e} {:e}", v.re, v.im);
        }
        out
    }

    /// Tabulates `f` on the given axes.
    pub fn tabulate(
        name: &str,
        axes: [Axis; 4],
        bound: f64,
        derivative_floor: f64,
        delta_scaled: bool,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Self {
        let node = |a: &Axis, i: usize| if a.n == 1 { a.min } else { a.min + (a.max - a.min) * i as f64 / (a.n - 1) as f64 };
        let mut data = Vec::new();
        for i0 in 0..axes[0].n {
            for i1 in 0..axes[1].n {
                for i2 in 0..axes[2].n {
                    for i3 in 0..axes[3].n {
                        let z2 = Complex64::new(node(&axes[0], i0), node(&axes[1], i1));
                        let z3 = Complex64::new(node(&axes[2], i2), node(&axes[3], i3));
                        data.push(f(z2, z3));
                    }
                }
            }
        }
        GridWitness { name: name.into(), bound, derivative_floor, delta_scaled, axes, data }
    }

    fn index(&self, idx: [usize; 4]) -> usize {
        ((idx[0] * self.axes[1].n + idx[1]) * self.axes[2].n + idx[2]) * self.axes[3].n + idx[3]
    }

    /// Multilinear interpolation in grid coordinates.
    pub fn interpolate(&self, coords: [f64; 4]) -> Complex64 {
        let mut cells = [(0usize, 0.0f64); 4];
        for k in 0..4 {
            match self.axes[k].locate(coords[k]) {
                Some(c) => cells[k] = c,
                None => return Complex64::new(f64::NAN, f64::NAN),
            }
        }
        let mut total = Complex64::new(0.0, 0.0);
        for corner in 0..16u32 {
            let mut weight = 1.0;
            let mut idx = [0; 4];
            for k in 0..4 {
                let upper = corner >> k & 1 == 1;
                let (i, t) = cells[k];
                if self.axes[k].n == 1 {
                    if upper {
                        weight = 0.0;
                    }
                    idx[k] = 0;
                    continue;
                }
                idx[k] = i + upper as usize;
                weight *= if upper { t } else { 1.0 - t };
            }
            if weight != 0.0 {
                total += self.data[self.index(idx)] * weight;
            }
        }
        total
    }

    pub fn scaled(&self, delta: f64) -> ScaledGrid {
        ScaledGrid { grid: self.clone(), delta }
    }
}

/// A grid witness at a fixed `delta`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledGrid {
    pub grid: GridWitness,
    pub delta: f64,
}

impl ScaledGrid {
    fn unit(&self) -> f64 {
        if self.grid.delta_scaled {
            self.delta
        } else {
            1.0
        }
    }
}

impl HolomorphicWitness for ScaledGrid {
    fn name(&self) -> String {
        format!("grid:{}", self.grid.name)
    }

    fn eval(&self, zeta2: Complex64, zeta3: Complex64) -> Complex64 {
        let u = self.unit();
        self.grid.interpolate([zeta2.re, zeta2.im, zeta3.re / u, zeta3.im / u])
    }

    fn declared_bound(&self) -> f64 {
        self.grid.bound
    }

    fn declared_derivative_floor(&self, _delta: f64) -> f64 {
        self.grid.derivative_floor / self.unit()
    }

    fn fd_step(&self) -> f64 {
        let a = &self.grid.axes[2];
        let spacing = if a.n > 1 { (a.max - a.min) / (a.n - 1) as f64 } else { 1.0 };
        0.25 * spacing * self.unit()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holder::witness::DemoWitness;

    fn demo_grid(n: usize) -> GridWitness {
        let one = Axis { min: 0.0, max: 0.0, n: 1 };
        let axis = Axis { min: -2.0, max: 0.5, n };
        GridWitness::tabulate("demo", [one, one, axis, Axis { min: -1.0, max: 1.0, n }], 2.0, 1.0 / 3.0, true, |_, z3| {
            1.0 / (z3 - 1.0)
        })
    }

    #[test]
    fn round_trip_through_text() {
        let g = demo_grid(5);
        let back = GridWitness::parse(&g.to_text()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn interpolation_reproduces_nodes_and_approximates_demo() {
        let g = demo_grid(201);
        let delta = 1e-3;
        let s = g.scaled(delta);
        let demo = DemoWitness { delta };
        let zero = Complex64::new(0.0, 0.0);
        // A grid node: z3 / delta = -0.5.
        let node = Complex64::new(-0.5 * delta, 0.0);
        assert!((s.eval(zero, node) - demo.eval(zero, node)).norm() < 1e-12);
        let off = Complex64::new(-0.503 * delta, 0.0071 * delta);
        assert!((s.eval(zero, off) - demo.eval(zero, off)).norm() < 1e-3);
        assert!(s.eval(zero, Complex64::new(delta, 0.0)).re.is_nan());
        assert!((s.declared_derivative_floor(delta) - 1.0 / (3.0 * delta)).abs() < 1e-9);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = GridWitness::parse("holder-gain-witness-grid 1\nname x\nbogus 1\n").unwrap_err();
        assert_eq!(e.line, 3);
        let mut text = demo_grid(3).to_text();
        text.push_str("1 2\n");
        assert!(GridWitness::parse(&text).unwrap_err().message.contains("expected 9 samples"));
    }
}
