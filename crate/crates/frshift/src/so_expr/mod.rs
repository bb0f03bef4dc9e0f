//! Expression language for slowly oscillating functions on the half-line.
//!
//! The grammar is deliberately closed: every production is either a constant,
//! a sigmoid in `ln t`, or a bounded smooth function composed with the
//! slowly-varying primitive `llog(t) = ln(1 + ln(1 + |ln t|))`. Functions
//! built this way can be certified slowly oscillating by sampling, and all
//! nodes carry exact chain-rule derivatives.
//!
//! Evaluation works internally in the coordinate x = ln t, because fiber
//! analysis must probe t = exp(+-e^u) far beyond the range representable in
//! f64; `ln(t)` and `llog(t)` applied to the bare variable read x directly.

mod cluster;
mod parser;

pub use cluster::{
    cluster_tuples, ClusterSet, Endpoint, FiberPoint, SamplingSchedule, DEFAULT_CLUSTER_EPSILON,
};
pub use parser::parse_expr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Tanh,
    Llog,
    Sigm,
}

#[derive(Debug, Clone)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Call(Func, Box<Expr>),
}

/// An expression on (0, inf) from the closed slowly-oscillating grammar.
#[derive(Debug, Clone)]
pub struct SoExpression {
    root: Expr,
    text: String,
}

impl SoExpression {
    pub(crate) fn new(root: Expr, text: String) -> Self {
        SoExpression { root, text }
    }

    /// Constant expression without going through the parser.
    pub fn constant(v: f64) -> Self {
        SoExpression {
            root: Expr::Num(v),
            text: format!("{v}"),
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Recursive evaluation at `t > 0`. Guarded nodes (ln, power, division)
    /// report a domain error when fed out-of-domain values.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("eval requires t > 0, got {t}")));
        }
        eval_x_node(&self.root, t.ln())
    }

    /// Evaluation at the point t = e^x. Unlike [`eval`](Self::eval), the
    /// argument may lie beyond the f64-representable range of t itself.
    pub fn eval_at_x(&self, x: f64) -> Result<f64> {
        eval_x_node(&self.root, x)
    }

    /// Chain-rule derivative d/dt at `t > 0`.
    pub fn deriv_eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("deriv_eval requires t > 0, got {t}")));
        }
        Ok(eval_dx_node(&self.root, t.ln())?.1 / t)
    }

    /// Value of `t * d/dt` at `t`, the quantity entering the shift condition.
    /// Equals d/dx of the expression read as a function of x = ln t.
    pub fn t_deriv_eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!(
                "t_deriv_eval requires t > 0, got {t}"
            )));
        }
        Ok(eval_dx_node(&self.root, t.ln())?.1)
    }

    /// `t * d/dt` at t = e^x, valid for x beyond the representable t range.
    pub fn t_deriv_at_x(&self, x: f64) -> Result<f64> {
        Ok(eval_dx_node(&self.root, x)?.1)
    }
}

fn eval_x_node(e: &Expr, x: f64) -> Result<f64> {
    Ok(match e {
        Expr::Num(v) => *v,
        Expr::Var => x.exp(),
        Expr::Neg(u) => -eval_x_node(u, x)?,
        Expr::Add(u, v) => eval_x_node(u, x)? + eval_x_node(v, x)?,
        Expr::Sub(u, v) => eval_x_node(u, x)? - eval_x_node(v, x)?,
        Expr::Mul(u, v) => eval_x_node(u, x)? * eval_x_node(v, x)?,
        Expr::Div(u, v) => {
            let den = eval_x_node(v, x)?;
            if den.abs() < 1e-300 {
                return Err(Error::Domain(format!("division by ~0 at x = ln t = {x}")));
            }
            eval_x_node(u, x)? / den
        }
        Expr::Pow(u, q) => {
            let base = eval_x_node(u, x)?;
            if base <= 0.0 {
                return Err(Error::Domain(format!(
                    "power of non-positive base {base} at x = ln t = {x}"
                )));
            }
            base.powf(*q)
        }
        // shortcuts keeping logarithmic quantities finite when t = e^x
        // overflows or underflows f64
        Expr::Call(Func::Ln, u) if matches!(**u, Expr::Var) => x,
        Expr::Call(Func::Llog, u) if matches!(**u, Expr::Var) => llog_x(x),
        Expr::Call(f, u) => {
            let v = eval_x_node(u, x)?;
            apply_func(*f, v, x)?
        }
    })
}

fn apply_func(f: Func, v: f64, x: f64) -> Result<f64> {
    Ok(match f {
        Func::Exp => v.exp(),
        Func::Ln => {
            if v <= 0.0 {
                return Err(Error::Domain(format!(
                    "ln of non-positive {v} at x = ln t = {x}"
                )));
            }
            v.ln()
        }
        Func::Sin => v.sin(),
        Func::Cos => v.cos(),
        Func::Tanh => v.tanh(),
        Func::Llog => {
            if v <= 0.0 {
                return Err(Error::Domain(format!(
                    "llog of non-positive {v} at x = ln t = {x}"
                )));
            }
            llog_x(v.ln())
        }
        Func::Sigm => sigm(v),
    })
}

/// llog(t) expressed through x = ln t.
pub(crate) fn llog_x(x: f64) -> f64 {
    (1.0 + (1.0 + x.abs()).ln()).ln()
}

#[cfg(test)]
pub(crate) fn llog(t: f64) -> f64 {
    llog_x(t.ln())
}

pub(crate) fn sigm(u: f64) -> f64 {
    // overflow-safe logistic
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// Value and d/dx in one pass (x = ln t).
fn eval_dx_node(e: &Expr, x: f64) -> Result<(f64, f64)> {
    Ok(match e {
        Expr::Num(v) => (*v, 0.0),
        Expr::Var => {
            let t = x.exp();
            (t, t)
        }
        Expr::Neg(u) => {
            let (v, d) = eval_dx_node(u, x)?;
            (-v, -d)
        }
        Expr::Add(u, v) => {
            let (a, da) = eval_dx_node(u, x)?;
            let (b, db) = eval_dx_node(v, x)?;
            (a + b, da + db)
        }
        Expr::Sub(u, v) => {
            let (a, da) = eval_dx_node(u, x)?;
            let (b, db) = eval_dx_node(v, x)?;
            (a - b, da - db)
        }
        Expr::Mul(u, v) => {
            let (a, da) = eval_dx_node(u, x)?;
            let (b, db) = eval_dx_node(v, x)?;
            (a * b, da * b + a * db)
        }
        Expr::Div(u, v) => {
            let (a, da) = eval_dx_node(u, x)?;
            let (b, db) = eval_dx_node(v, x)?;
            if b.abs() < 1e-300 {
                return Err(Error::Domain(format!("division by ~0 at x = ln t = {x}")));
            }
            (a / b, (da * b - a * db) / (b * b))
        }
        Expr::Pow(u, q) => {
            let (a, da) = eval_dx_node(u, x)?;
            if a <= 0.0 {
                return Err(Error::Domain(format!(
                    "power of non-positive base {a} at x = ln t = {x}"
                )));
            }
            let v = a.powf(*q);
            (v, q * a.powf(q - 1.0) * da)
        }
        Expr::Call(Func::Ln, u) if matches!(**u, Expr::Var) => (x, 1.0),
        Expr::Call(Func::Llog, u) if matches!(**u, Expr::Var) => (llog_x(x), llog_x_deriv(x)),
        Expr::Call(f, u) => {
            let (a, da) = eval_dx_node(u, x)?;
            let v = apply_func(*f, a, x)?;
            let dv = match f {
                Func::Exp => v * da,
                Func::Ln => da / a,
                Func::Sin => a.cos() * da,
                Func::Cos => -a.sin() * da,
                Func::Tanh => (1.0 - v * v) * da,
                Func::Llog => llog_x_deriv(a.ln()) * da / a,
                Func::Sigm => v * (1.0 - v) * da,
            };
            (v, dv)
        }
    })
}

/// d/dx of llog_x; kink at x = 0, signum(0) contributes the one-sided
/// average 0 there.
fn llog_x_deriv(x: f64) -> f64 {
    let w = x.abs();
    let s = if x == 0.0 { 0.0 } else { x.signum() };
    s / ((1.0 + (1.0 + w).ln()) * (1.0 + w))
}

/// Oscillation of `e` over a log-uniform sample of `[lambda*r, r]`.
pub fn oscillation(
    e: &SoExpression,
    lambda: f64,
    r: f64,
    samples_per_interval: usize,
) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Domain(format!(
            "lambda must be in (0,1), got {lambda}"
        )));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("r must be positive, got {r}")));
    }
    oscillation_at_x(e, lambda, r.ln(), samples_per_interval)
}

/// Oscillation over `[lambda*r, r]` specified through x_hi = ln r, so the
/// window can sit beyond the representable range of t.
pub fn oscillation_at_x(
    e: &SoExpression,
    lambda: f64,
    x_hi: f64,
    samples_per_interval: usize,
) -> Result<f64> {
    if samples_per_interval < 2 {
        return Err(Error::Domain(
            "samples_per_interval must be at least 2".into(),
        ));
    }
    let x_lo = x_hi + lambda.ln();
    let m = samples_per_interval;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let x = x_lo + (x_hi - x_lo) * (i as f64) / ((m - 1) as f64);
        let v = e.eval_at_x(x)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok(hi - lo)
}

/// Default schedule ln r = +-e^u, u = 1..=6, used by certification.
/// Returned values are x = ln r.
pub fn default_x_schedule() -> (Vec<f64>, Vec<f64>) {
    let toward0 = (1..=6).map(|u| -(u as f64).exp()).collect();
    let toward_inf = (1..=6).map(|u| (u as f64).exp()).collect();
    (toward0, toward_inf)
}

#[derive(Debug, Clone)]
pub struct CertificationReport {
    pub lambda: f64,
    pub tolerance: f64,
    /// (ln r, oscillation) pairs toward endpoint 0, in schedule order.
    pub osc_at_zero: Vec<(f64, f64)>,
    /// (ln r, oscillation) pairs toward endpoint infinity.
    pub osc_at_inf: Vec<(f64, f64)>,
    pub pass: bool,
}

pub const DEFAULT_CERT_TOLERANCE: f64 = 0.05;
pub const DEFAULT_OSC_SAMPLES: usize = 64;

/// Numerical evidence that `osc(f, [lambda r, r]) -> 0` toward both
/// endpoints; the schedules list x = ln r.
///
/// A failed certification is a report outcome, not an error.
pub fn so_certify(
    e: &SoExpression,
    lambda: f64,
    x_toward0: &[f64],
    x_toward_inf: &[f64],
    tolerance: f64,
) -> Result<CertificationReport> {
    if x_toward0.len() < 4 || x_toward_inf.len() < 4 {
        return Err(Error::Domain(
            "r_schedule needs at least 4 points toward each endpoint".into(),
        ));
    }
    let seq = |xs: &[f64]| -> Result<Vec<(f64, f64)>> {
        xs.iter()
            .map(|&x| Ok((x, oscillation_at_x(e, lambda, x, DEFAULT_OSC_SAMPLES)?)))
            .collect()
    };
    let osc0 = seq(x_toward0)?;
    let osci = seq(x_toward_inf)?;
    // decay must hold while the oscillation is resolvable; below tol/10 the
    // sequence is already conclusive and sampling jitter may wiggle it
    let floor = 0.1 * tolerance;
    let trending_down =
        |s: &[(f64, f64)]| s.windows(2).all(|w| w[1].1 <= (w[0].1 * 1.05).max(floor) + 1e-9);
    let pass = trending_down(&osc0)
        && trending_down(&osci)
        && osc0.last().unwrap().1 < tolerance
        && osci.last().unwrap().1 < tolerance;
    Ok(CertificationReport {
        lambda,
        tolerance,
        osc_at_zero: osc0,
        osc_at_inf: osci,
        pass,
    })
}

/// Convenience wrapper with all defaults (lambda = 1/2, u in 1..=6, tol 0.05).
pub fn certify_default(e: &SoExpression) -> Result<CertificationReport> {
    let (x0, xi) = default_x_schedule();
    so_certify(e, 0.5, &x0, &xi, DEFAULT_CERT_TOLERANCE)
}
