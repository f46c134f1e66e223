//! TOML problem files.
//!
//! ```toml
//! [ring]
//! variables = ["x", "y", "z"]
//! weights = [1, 1, 1]
//! f = "x^3 + y^3 + z^3"
//!
//! [module]
//! generator_degrees = [0, 0]
//! presentation = [["x", "-y^2 + y*z - z^2"], ["y + z", "x^2"]]
//!
//! [connection]          # and [connection2] for `connection equiv`
//! action = "left"       # or "right": matrices act on row vectors
//! euler = "normalized"  # or "degree": E is sum d_i x_i d/dx_i
//! E = [["2/9", "0"], ["0", "2/9"]]
//! D1 = ...
//!
//! [curve]
//! generators = [2, 3]
//! lambda_complement = [1]
//! c = "0"
//!
//! [options]
//! window = [-3, 6]
//! format = "json"
//! degree_bound = 20
//! ```

use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use lrcoh::derlie::Surface;
use lrcoh::exactmath::{int, Scalar};
use lrcoh::modconn::{Connection, PolyMatrix, PresentedModule};
use lrcoh::polyring::{Polynomial, WeightedRing};

/// An input error, already rendered with a line and column when one applies.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub ring: Option<RingSection>,
    pub module: Option<ModuleSection>,
    pub connection: Option<ConnectionSection>,
    pub connection2: Option<ConnectionSection>,
    pub curve: Option<CurveSection>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSection {
    pub variables: Vec<String>,
    pub weights: Vec<i64>,
    pub f: Spanned<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSection {
    pub generator_degrees: Vec<i64>,
    pub presentation: Vec<Vec<Spanned<String>>>,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    #[default]
    Left,
    Right,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Euler {
    #[default]
    Normalized,
    Degree,
}

type TextMatrix = Vec<Vec<Spanned<String>>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionSection {
    #[serde(default)]
    pub action: Action,
    #[serde(default)]
    pub euler: Euler,
    #[serde(rename = "E")]
    pub e: TextMatrix,
    #[serde(rename = "D1")]
    pub d1: TextMatrix,
    #[serde(rename = "D2")]
    pub d2: TextMatrix,
    #[serde(rename = "D3")]
    pub d3: TextMatrix,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub generators: Vec<u64>,
    #[serde(default)]
    pub lambda_complement: Vec<u64>,
    pub c: Option<ScalarText>,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub window: Option<[i64; 2]>,
    pub format: Option<Format>,
    pub degree_bound: Option<u64>,
}

/// 1-based line and column of a byte offset.
fn line_col(source: &str, offset: usize) -> (usize, usize) {
    let before = &source[..offset.min(source.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, col)
}

pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t),
    };
    let q = match body.split_once('/') {
        Some((a, b)) => {
            let den: num_bigint::BigInt = b.trim().parse().ok()?;
            if den == num_bigint::BigInt::from(0) {
                return None;
            }
            Scalar::new(a.trim().parse().ok()?, den)
        }
        None => Scalar::from_integer(body.parse().ok()?),
    };
    Some(if neg { -q } else { q })
}

/// A parsed problem file plus the source it came from, for error positions.
pub struct Problem {
    pub file: ProblemFile,
    source: String,
}

impl Problem {
    pub fn parse(source: &str) -> Result<Problem, InputError> {
        let file: ProblemFile = toml::from_str(source).map_err(|e| {
            let at = e.span().map(|s| line_col(source, s.start));
            match at {
                Some((l, c)) => InputError(format!("problem file {l}:{c}: {}", e.message())),
                None => InputError(format!("problem file: {}", e.message())),
            }
        })?;
        match (&file.ring, &file.curve) {
            (Some(_), Some(_)) => return Err(InputError("a problem file has either [ring] or [curve], not both".into())),
            (None, None) => return Err(InputError("a problem file needs a [ring] or a [curve] section".into())),
            _ => {}
        }
        Ok(Problem { file, source: source.to_string() })
    }

    fn poly_error(&self, span: Range<usize>, what: &str, err: impl std::fmt::Display, pos: usize) -> InputError {
        // Offsets inside a basic string start one past the opening quote.
        let (l, c) = line_col(&self.source, span.start + 1 + pos);
        InputError(format!("problem file {l}:{c}: {what}: {err}"))
    }

    fn poly(&self, ring: &WeightedRing, text: &Spanned<String>, what: &str) -> Result<Polynomial, InputError> {
        ring.parse(text.get_ref()).map_err(|e| self.poly_error(text.span(), what, &e, e.position()))
    }

    pub fn ring(&self) -> Result<WeightedRing, InputError> {
        let sec = self.file.ring.as_ref().ok_or_else(|| InputError("this command needs a [ring] section".into()))?;
        let names: Vec<&str> = sec.variables.iter().map(String::as_str).collect();
        let f = lrcoh::polyring::parse_polynomial_in(sec.f.get_ref(), &sec.variables)
            .map_err(|e| self.poly_error(sec.f.span(), "ring.f", &e, e.position()))?;
        WeightedRing::new(names.iter().map(|s| s.to_string()).collect(), sec.weights.clone(), f)
            .map_err(|e| InputError(format!("[ring]: {e}")))
    }

    pub fn surface(&self) -> Result<Surface, InputError> {
        let ring = self.ring()?;
        if ring.nvars() != 3 {
            return Err(InputError(format!("[ring]: surfaces need three variables, found {}", ring.nvars())));
        }
        Surface::new(ring).map_err(|e| InputError(format!("[ring]: {e}")))
    }

    fn matrix(&self, ring: &WeightedRing, rows: &TextMatrix, what: &str) -> Result<PolyMatrix, InputError> {
        rows.iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter().enumerate().map(|(j, t)| self.poly(ring, t, &format!("{what}[{i}][{j}]"))).collect()
            })
            .collect()
    }

    pub fn module(&self, ring: &WeightedRing) -> Result<PresentedModule, InputError> {
        let Some(sec) = &self.file.module else {
            return Ok(PresentedModule::free());
        };
        let p = self.matrix(ring, &sec.presentation, "module.presentation")?;
        PresentedModule::new(ring, sec.generator_degrees.clone(), p).map_err(|e| InputError(format!("[module]: {e}")))
    }

    /// The connection in the library convention: column vectors, normalized `E`.
    pub fn connection(&self, ring: &WeightedRing, second: bool) -> Result<Connection, InputError> {
        let (name, sec) = if second { ("connection2", &self.file.connection2) } else { ("connection", &self.file.connection) };
        let sec = sec.as_ref().ok_or_else(|| InputError(format!("this command needs a [{name}] section")))?;
        let a = [
            self.matrix(ring, &sec.e, &format!("{name}.E"))?,
            self.matrix(ring, &sec.d1, &format!("{name}.D1"))?,
            self.matrix(ring, &sec.d2, &format!("{name}.D2"))?,
            self.matrix(ring, &sec.d3, &format!("{name}.D3"))?,
        ];
        let mut c = Connection { a };
        if sec.action == Action::Right {
            c = c.transposed();
        }
        if sec.euler == Euler::Degree {
            c = c.with_euler_scaled(&int(ring.degree()));
        }
        Ok(c)
    }

    pub fn curve_c(&self) -> Result<Option<Scalar>, InputError> {
        let Some(sec) = &self.file.curve else { return Ok(None) };
        match &sec.c {
            None => Ok(None),
            Some(ScalarText::Int(n)) => Ok(Some(int(*n))),
            Some(ScalarText::Text(t)) => {
                parse_scalar(t).map(Some).ok_or_else(|| InputError(format!("[curve]: c = '{t}' is not a rational number")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lrcoh::exactmath::frac;

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("-2/6"), Some(frac(-1, 3)));
        assert_eq!(parse_scalar(" 5 "), Some(int(5)));
        assert_eq!(parse_scalar("1/0"), None);
        assert_eq!(parse_scalar("x"), None);
    }

    #[test]
    fn positions() {
        let src = "[ring]\nvariables = [\"x\", \"y\", \"z\"]\nweights = [1, 1, 1]\nf = \"x^3 + q\"\n";
        let p = Problem::parse(src).unwrap();
        let err = p.ring().unwrap_err().0;
        assert!(err.starts_with("problem file 4:12:"), "{err}");
        let bad = Problem::parse("[ring]\nvariables = 3\n").err().unwrap().0;
        assert!(bad.starts_with("problem file 2:"), "{bad}");
    }

    #[test]
    fn exactly_one_subject() {
        assert!(Problem::parse("[options]\n").is_err());
        let both = "[ring]\nvariables=[\"x\"]\nweights=[1]\nf=\"x^2\"\n[curve]\ngenerators=[2,3]\n";
        assert!(Problem::parse(both).is_err());
    }
}
