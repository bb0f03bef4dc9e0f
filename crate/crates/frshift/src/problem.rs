//! Line-oriented `key = value` problem files and the shared default
//! configuration table.

use crate::error::{Error, Result};
use crate::fredholm::{ProblemSpec, DEFAULT_FREDHOLM_MARGIN, DEFAULT_X_MAX, DEFAULT_X_NODES};
use crate::mellin::LogGrid;
use crate::shift::Shift;
use crate::so_expr::{certify_default, parse_expr, SoExpression, DEFAULT_CLUSTER_EPSILON};

pub const DEFAULT_GRID_L: f64 = 12.0;
pub const DEFAULT_GRID_N: usize = 4096;
pub const DEFAULT_TOL_SOLVE: f64 = 1e-8;

/// Effective numerical configuration; every report echoes these values.
#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub grid_l: f64,
    pub grid_n: usize,
    pub x_max: f64,
    pub x_nodes: usize,
    pub cluster_epsilon: f64,
    pub tol_solve: f64,
    pub margin_fredholm: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            grid_l: DEFAULT_GRID_L,
            grid_n: DEFAULT_GRID_N,
            x_max: DEFAULT_X_MAX,
            x_nodes: DEFAULT_X_NODES,
            cluster_epsilon: DEFAULT_CLUSTER_EPSILON,
            tol_solve: DEFAULT_TOL_SOLVE,
            margin_fredholm: DEFAULT_FREDHOLM_MARGIN,
        }
    }
}

impl Config {
    /// Apply one `key=value` override; the keys match the problem-file keys.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "grid.L" => self.grid_l = parse_real(key, value)?,
            "grid.n" => self.grid_n = parse_usize(key, value)?,
            "x.max" => self.x_max = parse_real(key, value)?,
            "x.nodes" => self.x_nodes = parse_usize(key, value)?,
            "cluster.epsilon" => self.cluster_epsilon = parse_real(key, value)?,
            "tol.solve" => self.tol_solve = parse_real(key, value)?,
            "margin.fredholm" => self.margin_fredholm = parse_real(key, value)?,
            _ => return Err(Error::Problem(format!("unknown key {key}"))),
        }
        Ok(())
    }

    pub fn echo(&self) -> String {
        format!(
            "grid.L = {}\ngrid.n = {}\nx.max = {}\nx.nodes = {}\ncluster.epsilon = {}\ntol.solve = {}\nmargin.fredholm = {}\n",
            self.grid_l,
            self.grid_n,
            self.x_max,
            self.x_nodes,
            self.cluster_epsilon,
            self.tol_solve,
            self.margin_fredholm
        )
    }
}

/// Parsed but not yet certified problem data.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub p: f64,
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub omega: String,
    pub config: Config,
}

fn parse_real(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::Problem(format!("key {key}: expected a real number, got `{value}`")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| Error::Problem(format!("key {key}: expected an integer, got `{value}`")))
}

/// Parse problem-file text. `#` starts a comment; blank lines ignored;
/// unknown keys and duplicates rejected.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let mut p: Option<f64> = None;
    let mut exprs: [Option<String>; 5] = [None, None, None, None, None];
    const EXPR_KEYS: [&str; 5] = ["a", "b", "c", "d", "omega"];
    let mut config = Config::default();
    let mut seen_config: Vec<String> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Problem(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        if key == "p" {
            if p.is_some() {
                return Err(Error::Problem("duplicate key p".into()));
            }
            p = Some(parse_real(key, value)?);
        } else if let Some(slot) = EXPR_KEYS.iter().position(|&k| k == key) {
            if exprs[slot].is_some() {
                return Err(Error::Problem(format!("duplicate key {key}")));
            }
            exprs[slot] = Some(value.to_string());
        } else {
            if seen_config.iter().any(|k| k == key) {
                return Err(Error::Problem(format!("duplicate key {key}")));
            }
            config.set(key, value)?;
            seen_config.push(key.to_string());
        }
    }

    let p = p.ok_or_else(|| Error::Problem("missing key p".into()))?;
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Problem(format!("key p: must lie in (1, inf), got {p}")));
    }
    let mut it = exprs.into_iter();
    let mut take = |key: &str| -> Result<String> {
        it.next()
            .flatten()
            .ok_or_else(|| Error::Problem(format!("missing key {key}")))
    };
    Ok(ProblemFile {
        p,
        a: take("a")?,
        b: take("b")?,
        c: take("c")?,
        d: take("d")?,
        omega: take("omega")?,
        config,
    })
}

pub fn load_problem(path: &std::path::Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path)?;
    parse_problem(&text)
}

fn parse_named(key: &str, src: &str) -> Result<SoExpression> {
    parse_expr(src).map_err(|e| Error::Problem(format!("key {key}: {e}")))
}

impl ProblemFile {
    /// Parse and certify all five expressions, validate the shift, and
    /// assemble the ProblemSpec. Failures name the offending key.
    pub fn build(&self) -> Result<ProblemSpec> {
        let a = parse_named("a", &self.a)?;
        let b = parse_named("b", &self.b)?;
        let c = parse_named("c", &self.c)?;
        let d = parse_named("d", &self.d)?;
        let omega = parse_named("omega", &self.omega)?;
        for (key, expr) in [("a", &a), ("b", &b), ("c", &c), ("d", &d)] {
            let report =
                certify_default(expr).map_err(|e| Error::Problem(format!("key {key}: {e}")))?;
            if !report.pass {
                return Err(Error::Certification(format!(
                    "key {key}: expression `{}` is not certified slowly oscillating",
                    expr.text()
                )));
            }
        }
        let shift =
            Shift::new(omega).map_err(|e| Error::Problem(format!("key omega: {e}")))?;
        let grid = LogGrid::new(self.config.grid_l, self.config.grid_n)?;
        let mut spec = ProblemSpec::new(a, b, c, d, shift, self.p, grid)?;
        spec.x_max = self.config.x_max;
        spec.x_nodes = self.config.x_nodes;
        spec.cluster_epsilon = self.config.cluster_epsilon;
        spec.margin = self.config.margin_fredholm;
        Ok(spec)
    }
}
