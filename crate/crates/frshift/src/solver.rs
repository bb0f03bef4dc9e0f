//! Invertibility of the binomial functional operator aI - bW_alpha: the
//! two-sided endpoint criterion, the explicit Neumann-series solver, and an
//! independent transplantation cross-check on the unit interval.

use crate::error::{Error, Result};
use crate::interp;
use crate::mellin::{LogGrid, SampledFunction};
use crate::oplab::{op_w, op_w_inv, OperatorExpr};
use crate::shift::Shift;
use crate::so_expr::{cluster_tuples, ClusterSet, Endpoint, SamplingSchedule, SoExpression};
use num_complex::Complex64;

pub const DEFAULT_SLACK: f64 = 1e-6;
/// Cluster and tail-window endpoint estimates must agree this closely.
pub const ESTIMATE_AGREEMENT: f64 = 1e-2;

#[derive(Clone)]
pub struct BinomialOperator {
    pub a: SoExpression,
    pub b: SoExpression,
    pub shift: Shift,
    pub p: f64,
}

impl BinomialOperator {
    pub fn new(a: SoExpression, b: SoExpression, shift: Shift, p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::Domain(format!("p must lie in (1, inf), got {p}")));
        }
        Ok(BinomialOperator { a, b, shift, p })
    }

    pub fn expr(&self) -> OperatorExpr {
        OperatorExpr::binomial(&self.a, &self.b, &self.shift)
    }

    /// Endpoint cluster set of the tuple (a, b, 0, 0, omega).
    pub fn clusters(&self, endpoint: Endpoint, epsilon: f64) -> Result<ClusterSet> {
        let zero = SoExpression::constant(0.0);
        cluster_tuples(
            &self.a,
            &self.b,
            &zero,
            &zero,
            self.shift.omega(),
            endpoint,
            SamplingSchedule::default(),
            epsilon,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Fo1,
    Fo2,
    None,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Branch::Fo1 => "FO1",
            Branch::Fo2 => "FO2",
            Branch::None => "NONE",
        };
        write!(f, "{s}")
    }
}

/// The margin function m(t) = |a(t)| - |b(t)| (alpha'(t))^{-1/p} whose
/// endpoint liminf (FO1) or limsup (FO2) decides invertibility.
#[derive(Debug, Clone)]
pub struct InvertibilityDecision {
    pub branch: Branch,
    pub inf_abs_a: f64,
    pub inf_abs_b: f64,
    /// min over fiber points of the margin, per endpoint (liminf estimate)
    pub liminf_zero: f64,
    pub liminf_inf: f64,
    /// max over fiber points of the margin, per endpoint (limsup estimate)
    pub limsup_zero: f64,
    pub limsup_inf: f64,
    /// x = ln t of the raw sample achieving the binding margin
    pub witness_x_zero: f64,
    pub witness_x_inf: f64,
    pub slack: f64,
    /// margins within slack of zero: evidence cannot certify a sign
    pub undecided_near_boundary: bool,
}

fn margin_of(abs_a: f64, abs_b: f64, alpha_deriv: f64, p: f64) -> f64 {
    abs_a - abs_b * alpha_deriv.powf(-1.0 / p)
}

/// Theorem-1.1 branch selection from endpoint fiber data, with the cluster
/// estimates cross-checked against direct tail-window scans.
pub fn check_fo_conditions(
    op: &BinomialOperator,
    clusters0: &ClusterSet,
    clusters_inf: &ClusterSet,
    grid: LogGrid,
) -> Result<InvertibilityDecision> {
    check_fo_conditions_with_slack(op, clusters0, clusters_inf, grid, DEFAULT_SLACK)
}

pub fn check_fo_conditions_with_slack(
    op: &BinomialOperator,
    clusters0: &ClusterSet,
    clusters_inf: &ClusterSet,
    grid: LogGrid,
    slack: f64,
) -> Result<InvertibilityDecision> {
    if clusters0.tuples.is_empty() || clusters_inf.tuples.is_empty() {
        return Err(Error::Sampling("empty endpoint cluster set".into()));
    }
    let p = op.p;

    // global infima of |a|, |b| over the validation grid
    let mut inf_abs_a = f64::INFINITY;
    let mut inf_abs_b = f64::INFINITY;
    for j in 0..grid.n {
        let t = grid.t(j);
        inf_abs_a = inf_abs_a.min(op.a.eval(t)?.abs());
        inf_abs_b = inf_abs_b.min(op.b.eval(t)?.abs());
    }
    // ...and over the doubly exponential sampling range, since the fibers
    // live beyond any fixed grid
    for cs in [clusters0, clusters_inf] {
        for (_, fp) in &cs.raw {
            inf_abs_a = inf_abs_a.min(fp.a_val.norm());
            inf_abs_b = inf_abs_b.min(fp.b_val.norm());
        }
    }

    let endpoint_stats = |cs: &ClusterSet| -> Result<(f64, f64, f64)> {
        // cluster-based estimates
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for fp in &cs.tuples {
            let m = margin_of(fp.a_val.norm(), fp.b_val.norm(), fp.alpha_deriv(), p);
            lo = lo.min(m);
            hi = hi.max(m);
        }
        // tail-window scan over the raw samples (outer half of the schedule)
        let half = cs.raw.len() / 2;
        let mut lo_tail = f64::INFINITY;
        let mut hi_tail = f64::NEG_INFINITY;
        let mut witness_x = cs.raw[half].0;
        for (x, fp) in &cs.raw[half..] {
            let m = margin_of(fp.a_val.norm(), fp.b_val.norm(), fp.alpha_deriv(), p);
            if m < lo_tail {
                lo_tail = m;
                witness_x = *x;
            }
            hi_tail = hi_tail.max(m);
        }
        // the tail window covers fewer oscillation periods than the full
        // schedule, so its range may lag the cluster range by a fraction
        // of the data's own oscillation spread
        let tol = ESTIMATE_AGREEMENT + cs.epsilon + 0.25 * (hi - lo);
        if lo_tail - lo > tol || hi - hi_tail > tol {
            return Err(Error::Sampling(format!(
                "endpoint estimates disagree: cluster [{lo:.6}, {hi:.6}] vs tail window \
                 [{lo_tail:.6}, {hi_tail:.6}]; refine the sampling schedule"
            )));
        }
        Ok((lo.min(lo_tail), hi.max(hi_tail), witness_x))
    };

    let (liminf_zero, limsup_zero, witness_x_zero) = endpoint_stats(clusters0)?;
    let (liminf_inf, limsup_inf, witness_x_inf) = endpoint_stats(clusters_inf)?;

    let liminf_min = liminf_zero.min(liminf_inf);
    let limsup_max = limsup_zero.max(limsup_inf);

    let fo1 = inf_abs_a > slack && liminf_min > slack;
    let fo2 = inf_abs_b > slack && limsup_max < -slack;
    let branch = if fo1 {
        Branch::Fo1
    } else if fo2 {
        Branch::Fo2
    } else {
        Branch::None
    };
    let undecided_near_boundary =
        branch == Branch::None && (liminf_min.abs() <= slack || limsup_max.abs() <= slack);

    Ok(InvertibilityDecision {
        branch,
        inf_abs_a,
        inf_abs_b,
        liminf_zero,
        liminf_inf,
        limsup_zero,
        limsup_inf,
        witness_x_zero,
        witness_x_inf,
        slack,
        undecided_near_boundary,
    })
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub u: SampledFunction,
    pub iterations: usize,
    pub residual: f64,
}

/// Neumann-series solve of (aI - bW_alpha)u = f on the decided branch,
/// iterated as u <- a^{-1} f + a^{-1} b W u (FO1) or through
/// v <- b^{-1} f + b^{-1} a W^{-1} v, u = -W^{-1} v (FO2) -- one operator
/// application per accumulated series term.
pub fn neumann_solve(
    op: &BinomialOperator,
    f: &SampledFunction,
    decision: &InvertibilityDecision,
    tol: f64,
    max_iter: usize,
) -> Result<SolveOutcome> {
    if decision.branch == Branch::None {
        return Err(Error::Problem(
            "neumann_solve requires branch FO1 or FO2".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let g = f.grid;
    let f_norm = f.norm_dt().max(1e-300);
    let a_vals: Vec<f64> = (0..g.n).map(|j| op.a.eval(g.t(j))).collect::<Result<_>>()?;
    let b_vals: Vec<f64> = (0..g.n).map(|j| op.b.eval(g.t(j))).collect::<Result<_>>()?;
    let full = op.expr();

    let residual_of = |u: &SampledFunction| -> Result<f64> {
        let au = full.apply(u, op.p)?;
        let mut r = 0.0;
        for j in 0..g.n {
            r += (au.values[j] - f.values[j]).norm_sqr() * g.t(j);
        }
        Ok((r * g.dx()).sqrt() / f_norm)
    };

    match decision.branch {
        Branch::Fo1 => {
            let mut u = f.clone();
            for (j, v) in u.values.iter_mut().enumerate() {
                *v /= a_vals[j];
            }
            let mut residual = residual_of(&u)?;
            for it in 1..=max_iter {
                if residual <= tol {
                    return Ok(SolveOutcome {
                        u,
                        iterations: it - 1,
                        residual,
                    });
                }
                let wu = op_w(&op.shift, &u)?;
                for j in 0..g.n {
                    u.values[j] = (f.values[j] + b_vals[j] * wu.values[j]) / a_vals[j];
                }
                residual = residual_of(&u)?;
            }
            if residual <= tol {
                return Ok(SolveOutcome {
                    u,
                    iterations: max_iter,
                    residual,
                });
            }
            Err(Error::NonConvergence {
                iterations: max_iter,
                residual,
            })
        }
        Branch::Fo2 => {
            // v solves b v - a W^{-1} v = f; then u = -W^{-1} v
            let mut v = f.clone();
            for (j, val) in v.values.iter_mut().enumerate() {
                *val /= b_vals[j];
            }
            let mut u = op_w_inv(&op.shift, &v)?;
            for val in u.values.iter_mut() {
                *val = -*val;
            }
            let mut residual = residual_of(&u)?;
            for it in 1..=max_iter {
                if residual <= tol {
                    return Ok(SolveOutcome {
                        u,
                        iterations: it - 1,
                        residual,
                    });
                }
                let wv = op_w_inv(&op.shift, &v)?;
                for j in 0..g.n {
                    v.values[j] = (f.values[j] + a_vals[j] * wv.values[j]) / b_vals[j];
                }
                u = op_w_inv(&op.shift, &v)?;
                for val in u.values.iter_mut() {
                    *val = -*val;
                }
                residual = residual_of(&u)?;
            }
            if residual <= tol {
                return Ok(SolveOutcome {
                    u,
                    iterations: max_iter,
                    residual,
                });
            }
            Err(Error::NonConvergence {
                iterations: max_iter,
                residual,
            })
        }
        Branch::None => unreachable!(),
    }
}

pub const DEFAULT_TRANSPLANT_POINTS: usize = 8192;

#[derive(Debug, Clone)]
pub struct TransplantReport {
    /// max-abs relative discrepancy between the two routes
    pub discrepancy: f64,
    pub nodes_compared: usize,
    pub y_points: usize,
}

/// Two-sided evaluation of the transplantation identity: the half-line
/// action G (aI - bW_alpha) f must match the interval-side operator
/// (a o eta) I - (b o eta) c_{alpha,p} W_{alpha~} applied to G f, where
/// eta(y) = y/(1-y), (G phi)(y) = (1-y)^{-2/p} phi(eta(y)),
/// alpha~ = eta^{-1} o alpha o eta and
/// c_{alpha,p}(y) = ((1-alpha~(y))/(1-y))^{2/p} = ((1+t)/(1+alpha(t)))^{2/p}.
/// The interval route interpolates G f on its own uniform y-grid, so the
/// two routes share only the input samples.
pub fn transplant_check(
    op: &BinomialOperator,
    f: &SampledFunction,
    y_points: usize,
) -> Result<TransplantReport> {
    if y_points < 16 {
        return Err(Error::Domain("y_points too small".into()));
    }
    let g = f.grid;
    let x_first = g.x(0);
    let dx = g.dx();
    let two_over_p = 2.0 / op.p;

    // half-line route: h = (aI - bW) f, then transplant
    let h = op.expr().apply(f, op.p)?;

    let y_step = 1.0 / (y_points as f64 + 1.0);
    let y_of = |i: usize| (i as f64 + 1.0) * y_step;

    // G phi at eta(y), by cubic interpolation of log-grid samples
    let transplant = |vals: &[Complex64], y: f64| -> Complex64 {
        let t = y / (1.0 - y);
        let w = (1.0 - y).powf(-two_over_p);
        interp::cubic(vals, x_first, dx, t.ln()) * w
    };

    // interval-side data on the uniform y-grid
    let gf: Vec<Complex64> = (0..y_points).map(|i| transplant(&f.values, y_of(i))).collect();

    // resolution guard: near y -> 1 the pullback eta spreads y-steps over
    // huge t-ranges; we only compare where eta(y) stays well inside the grid
    let x_lo = x_first + 6.0 * dx;
    let x_hi = g.x(g.n - 1) - 6.0 * dx;

    let mut max_diff = 0.0f64;
    let mut scale = 0.0f64;
    let mut compared = 0usize;
    for i in 0..y_points {
        let y = y_of(i);
        let t = y / (1.0 - y);
        let x = t.ln();
        if x < x_lo || x > x_hi {
            continue;
        }
        let alpha_t = op.shift.alpha_of(t)?;
        let x_alpha = alpha_t.ln();
        if x_alpha < x_lo || x_alpha > x_hi {
            continue;
        }
        // route 1: G h at this y
        let lhs = transplant(&h.values, y);
        // route 2: interval primitives acting on the y-grid samples of G f
        let y_alpha = alpha_t / (1.0 + alpha_t);
        let c = ((1.0 + t) / (1.0 + alpha_t)).powf(two_over_p);
        let gf_shifted = interp::cubic(&gf, y_of(0), y_step, y_alpha);
        let rhs = op.a.eval(t)? * gf[i] - op.b.eval(t)? * c * gf_shifted;
        max_diff = max_diff.max((lhs - rhs).norm());
        scale = scale.max(lhs.norm());
        compared += 1;
    }
    if compared == 0 {
        return Err(Error::Sampling(
            "transplant_check: no y-node maps into the grid interior".into(),
        ));
    }
    Ok(TransplantReport {
        discrepancy: max_diff / scale.max(1e-300),
        nodes_compared: compared,
        y_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mellin::gaussian_bump;
    use crate::so_expr::parse_expr;

    fn e(s: &str) -> SoExpression {
        parse_expr(s).unwrap()
    }

    fn ln2_shift() -> Shift {
        Shift::new(e("0.6931471805599453")).unwrap()
    }

    fn decide(op: &BinomialOperator) -> InvertibilityDecision {
        let c0 = op.clusters(Endpoint::Zero, 1e-3).unwrap();
        let ci = op.clusters(Endpoint::Infinity, 1e-3).unwrap();
        let g = LogGrid::new(12.0, 1024).unwrap();
        check_fo_conditions(op, &c0, &ci, g).unwrap()
    }

    #[test]
    fn fo1_constant_example() {
        // a=2, b=1, omega=ln2, p=2: margin 2 - 2^{-1/2} at both endpoints
        let op = BinomialOperator::new(e("2"), e("1"), ln2_shift(), 2.0).unwrap();
        let d = decide(&op);
        assert_eq!(d.branch, Branch::Fo1);
        let want = 2.0 - 2f64.powf(-0.5);
        assert!((d.liminf_zero - want).abs() < 1e-9, "{d:?}");
        assert!((d.liminf_inf - want).abs() < 1e-9);
        assert!((d.inf_abs_a - 2.0).abs() < 1e-12);
    }

    #[test]
    fn fo2_constant_example() {
        let op = BinomialOperator::new(e("1"), e("2"), ln2_shift(), 2.0).unwrap();
        let d = decide(&op);
        assert_eq!(d.branch, Branch::Fo2);
        let want = 1.0 - 2.0 * 2f64.powf(-0.5);
        assert!((d.limsup_inf - want).abs() < 1e-9, "{d:?}");
        assert!((d.inf_abs_b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn small_margin_fo1() {
        // omega = 1e-3: margin 1 - e^{-5e-4} ~ 5.0e-4, still above slack
        let shift = Shift::new(e("0.001")).unwrap();
        let op = BinomialOperator::new(e("1"), e("1"), shift, 2.0).unwrap();
        let d = decide(&op);
        assert_eq!(d.branch, Branch::Fo1);
        let want = 1.0 - (-0.0005f64).exp();
        assert!((d.liminf_zero - want).abs() < 1e-9, "{d:?}");
    }

    #[test]
    fn exact_boundary_is_none_with_warning() {
        // a=1, b=2^{1/2}, omega=ln2: margin exactly 0
        let op = BinomialOperator::new(
            e("1"),
            e("1.4142135623730951"),
            ln2_shift(),
            2.0,
        )
        .unwrap();
        let d = decide(&op);
        assert_eq!(d.branch, Branch::None);
        assert!(d.undecided_near_boundary, "{d:?}");
    }

    #[test]
    fn mutual_exclusivity_on_probes() {
        for (a, b) in [("2", "1"), ("1", "2"), ("3", "1"), ("1", "3")] {
            let op = BinomialOperator::new(e(a), e(b), ln2_shift(), 2.0).unwrap();
            let d = decide(&op);
            let fo1 = d.inf_abs_a > d.slack && d.liminf_zero.min(d.liminf_inf) > d.slack;
            let fo2 = d.inf_abs_b > d.slack && d.limsup_zero.max(d.limsup_inf) < -d.slack;
            assert!(!(fo1 && fo2), "both FO1 and FO2 at a={a}, b={b}");
        }
    }

    #[test]
    fn neumann_trivial_division() {
        let op = BinomialOperator::new(e("2"), e("0"), ln2_shift(), 2.0).unwrap();
        let g = LogGrid::new(12.0, 512).unwrap();
        let f = gaussian_bump(g, 0.0, 1.0);
        let d = decide(&op);
        let out = neumann_solve(&op, &f, &d, 1e-10, 5).unwrap();
        for (u, fv) in out.u.values.iter().zip(&f.values) {
            assert!((u - fv / 2.0).norm() < 1e-12);
        }
    }

    #[test]
    fn neumann_fo1_and_fo2_converge() {
        // default resolution: the FO2 route composes the interpolated W
        // with the interpolated W^{-1}, whose mismatch scales like dx^4
        let g = LogGrid::new(12.0, 4096).unwrap();
        // offset the bump: the series terms translate leftward by ln2 each,
        // and must stay on the grid until they are below tolerance
        let f = gaussian_bump(g, 3.0, 1.0);

        let op1 = BinomialOperator::new(e("2"), e("1"), ln2_shift(), 2.0).unwrap();
        let d1 = decide(&op1);
        let s1 = neumann_solve(&op1, &f, &d1, 1e-8, 25).unwrap();
        assert!(s1.residual <= 1e-8, "{}", s1.residual);

        // FO2 mirror: omega = -ln2, so the inverse-shift series has the
        // same 2^{-3/2} term ratio as the FO1 case in L^2(dt)
        let mirror = Shift::new(e("-0.6931471805599453")).unwrap();
        let op2 = BinomialOperator::new(e("1"), e("2"), mirror, 2.0).unwrap();
        let d2 = decide(&op2);
        assert_eq!(d2.branch, Branch::Fo2);
        let s2 = neumann_solve(&op2, &f, &d2, 1e-8, 40).unwrap();
        assert!(s2.residual <= 1e-8, "{}", s2.residual);

        // inverse verification: apply the operator to the solution
        let back = op2.expr().apply(&s2.u, 2.0).unwrap();
        let err: f64 = back
            .values
            .iter()
            .zip(&f.values)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        // the stopping rule is in the dt-norm, whose node weight sqrt(t dx)
        // is ~2e-4 at the left grid edge, so the pointwise bound is looser
        assert!(err <= 1e-5, "{err}");
    }

    #[test]
    fn neumann_rejects_none_branch() {
        let op = BinomialOperator::new(
            e("1"),
            e("1.4142135623730951"),
            ln2_shift(),
            2.0,
        )
        .unwrap();
        let g = LogGrid::new(12.0, 256).unwrap();
        let f = gaussian_bump(g, 0.0, 1.0);
        let d = decide(&op);
        assert!(neumann_solve(&op, &f, &d, 1e-8, 10).is_err());
    }

    #[test]
    fn geometric_residual_decrease() {
        // predicted term ratio for a=2, b=1, omega=ln2, p=2:
        // |a^{-1} b| * ||W|| = (1/2) * 2^{-1/2} ~ 0.354
        let op = BinomialOperator::new(e("2"), e("1"), ln2_shift(), 2.0).unwrap();
        let g = LogGrid::new(12.0, 1024).unwrap();
        let f = gaussian_bump(g, 0.0, 1.0);
        let d = decide(&op);
        let mut residuals = Vec::new();
        for it in 1..8 {
            match neumann_solve(&op, &f, &d, 1e-30, it) {
                Ok(out) => residuals.push(out.residual),
                Err(Error::NonConvergence { residual, .. }) => residuals.push(residual),
                Err(err) => panic!("{err}"),
            }
        }
        for w in residuals.windows(2) {
            if w[0] > 1e-12 {
                assert!(w[1] / w[0] <= 0.354 + 0.1, "{residuals:?}");
            }
        }
    }

    #[test]
    fn transplant_examples() {
        let g = LogGrid::new(12.0, 2048).unwrap();
        let f = gaussian_bump(g, 0.0, 1.0);

        // b = 0: both routes are multiplication by a o eta
        let op = BinomialOperator::new(e("2"), e("0"), ln2_shift(), 2.0).unwrap();
        let rep = transplant_check(&op, &f, DEFAULT_TRANSPLANT_POINTS).unwrap();
        assert!(rep.discrepancy <= 1e-12, "{rep:?}");

        let op = BinomialOperator::new(e("2"), e("1"), ln2_shift(), 2.0).unwrap();
        let rep = transplant_check(&op, &f, DEFAULT_TRANSPLANT_POINTS).unwrap();
        assert!(rep.discrepancy <= 1e-4, "{rep:?}");

        // f = 0 propagates to 0 discrepancy
        let zero = SampledFunction::zeros(g);
        let rep = transplant_check(&op, &zero, DEFAULT_TRANSPLANT_POINTS).unwrap();
        assert!(rep.discrepancy == 0.0);
    }
}
