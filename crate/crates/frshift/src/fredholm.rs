//! Fredholm sufficiency verdict for N = (aI - bW)P+ + (cI - dW)P-.
//!
//! Condition (i) is the two binomial invertibility checks; condition (ii)
//! evaluates the local symbol n_xi(x) over the estimated endpoint fiber
//! sets and a bounded x-grid, with an analytic certificate for the tails
//! |x| > X where the grid cannot reach.

use crate::error::{Error, Result};
use crate::mellin::LogGrid;
use crate::oplab::{
    finite_section, smallest_singular, DecayProfile, OperatorExpr, DEFAULT_SECTION_CAP,
};
use crate::shift::Shift;
use crate::so_expr::{
    cluster_tuples, ClusterSet, Endpoint, FiberPoint, SamplingSchedule, SoExpression,
    DEFAULT_CLUSTER_EPSILON,
};
use crate::solver::{check_fo_conditions, BinomialOperator, Branch, InvertibilityDecision};
use crate::special::coth;
use num_complex::Complex64;
use std::f64::consts::PI;

pub const DEFAULT_X_MAX: f64 = 6.0;
pub const DEFAULT_X_NODES: usize = 2401;
pub const DEFAULT_FREDHOLM_MARGIN: f64 = 1e-6;

/// Certified problem data for the Fredholm check, plus the numerical
/// parameters every downstream stage shares.
#[derive(Clone)]
pub struct ProblemSpec {
    pub a: SoExpression,
    pub b: SoExpression,
    pub c: SoExpression,
    pub d: SoExpression,
    pub shift: Shift,
    pub p: f64,
    pub grid: LogGrid,
    pub x_max: f64,
    pub x_nodes: usize,
    pub cluster_epsilon: f64,
    pub margin: f64,
}

impl ProblemSpec {
    pub fn new(
        a: SoExpression,
        b: SoExpression,
        c: SoExpression,
        d: SoExpression,
        shift: Shift,
        p: f64,
        grid: LogGrid,
    ) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::Domain(format!("p must lie in (1, inf), got {p}")));
        }
        Ok(ProblemSpec {
            a,
            b,
            c,
            d,
            shift,
            p,
            grid,
            x_max: DEFAULT_X_MAX,
            x_nodes: DEFAULT_X_NODES,
            cluster_epsilon: DEFAULT_CLUSTER_EPSILON,
            margin: DEFAULT_FREDHOLM_MARGIN,
        })
    }

    /// Joint endpoint cluster set of the full data tuple (a, b, c, d, omega).
    pub fn clusters(&self, endpoint: Endpoint) -> Result<ClusterSet> {
        cluster_tuples(
            &self.a,
            &self.b,
            &self.c,
            &self.d,
            self.shift.omega(),
            endpoint,
            SamplingSchedule::default(),
            self.cluster_epsilon,
        )
    }

    pub fn n_expr(&self) -> OperatorExpr {
        OperatorExpr::n_operator(&self.a, &self.b, &self.c, &self.d, &self.shift)
    }
}

/// Local symbol n_xi(x) at a fiber point:
/// [a - b e^{i omega (x + i/p)}] (1 + coth[pi(x + i/p)]) / 2
///   + [c - d e^{i omega (x + i/p)}] (1 - coth[pi(x + i/p)]) / 2.
pub fn n_xi(xi: &FiberPoint, x: f64, p: f64) -> Complex64 {
    let z = Complex64::new(x, 1.0 / p);
    let e = (Complex64::i() * xi.omega_val * z).exp();
    let ct = coth(PI * z);
    let half = Complex64::new(0.5, 0.0);
    (xi.a_val - xi.b_val * e) * (1.0 + ct) * half + (xi.c_val - xi.d_val * e) * (1.0 - ct) * half
}

/// Certified lower bound on |n_xi(x)| over |x| > X.
///
/// For x > X the symbol is (a - bE) plus a perturbation controlled by
/// |coth(pi(x + i/p)) - 1| <= delta := 2 e^{-2 pi X} / (1 - e^{-2 pi X});
/// the oscillatory factor E has constant modulus e^{-omega/p}, so the
/// reverse triangle inequality bounds |a - bE| >= ||a| - |b| e^{-omega/p}|
/// pointwise over the whole tail. Symmetrically with (c, d) leading at
/// the -infinity tail. The bound may be <= 0, meaning no certificate.
pub fn tail_certificate(xi: &FiberPoint, x_max: f64, p: f64) -> f64 {
    let q = (-2.0 * PI * x_max).exp();
    let delta = 2.0 * q / (1.0 - q);
    let e_mod = (-xi.omega_val / p).exp();
    let abs_a = xi.a_val.norm();
    let abs_b = xi.b_val.norm() * e_mod;
    let abs_c = xi.c_val.norm();
    let abs_d = xi.d_val.norm() * e_mod;
    let perturb = (abs_a + abs_b + abs_c + abs_d) * delta / 2.0;
    let plus = (abs_a - abs_b).abs() - perturb;
    let minus = (abs_c - abs_d).abs() - perturb;
    plus.min(minus)
}

/// n_xi sampled over the fiber set x x-grid product.
#[derive(Clone)]
pub struct SymbolSurface {
    pub fibers: Vec<FiberPoint>,
    pub x_grid: Vec<f64>,
    /// samples[fiber][node]
    pub samples: Vec<Vec<Complex64>>,
    /// per-fiber (min |n|, witness x)
    pub fiber_minima: Vec<(f64, f64)>,
}

impl SymbolSurface {
    pub fn global_min(&self) -> (f64, usize, f64) {
        let mut best = (f64::INFINITY, 0usize, 0.0f64);
        for (i, &(m, wx)) in self.fiber_minima.iter().enumerate() {
            if m < best.0 {
                best = (m, i, wx);
            }
        }
        best
    }
}

/// Summary of condition (ii): the grid minimum plus the tail certificate.
#[derive(Debug, Clone)]
pub struct ConditionIiSummary {
    pub min_modulus: f64,
    pub witness_fiber: FiberPoint,
    pub witness_x: f64,
    pub tail_certificate: f64,
    pub fiber_count: usize,
}

pub fn uniform_x_grid(x_max: f64, nodes: usize) -> Vec<f64> {
    let n = nodes.max(2);
    (0..n)
        .map(|k| -x_max + 2.0 * x_max * (k as f64) / ((n - 1) as f64))
        .collect()
}

/// Evaluate n_xi over the union of both endpoint fiber sets and the
/// uniform grid on [-x_max, x_max].
pub fn condition_ii(
    spec: &ProblemSpec,
    clusters0: &ClusterSet,
    clusters_inf: &ClusterSet,
) -> Result<(SymbolSurface, ConditionIiSummary)> {
    let mut fibers: Vec<FiberPoint> = Vec::new();
    fibers.extend_from_slice(&clusters0.tuples);
    fibers.extend_from_slice(&clusters_inf.tuples);
    if fibers.is_empty() {
        return Err(Error::Sampling("empty endpoint cluster sets".into()));
    }
    let x_grid = uniform_x_grid(spec.x_max, spec.x_nodes);
    let mut samples = Vec::with_capacity(fibers.len());
    let mut fiber_minima = Vec::with_capacity(fibers.len());
    let mut tail = f64::INFINITY;
    for xi in &fibers {
        let row: Vec<Complex64> = x_grid.iter().map(|&x| n_xi(xi, x, spec.p)).collect();
        let mut m = f64::INFINITY;
        let mut wx = x_grid[0];
        for (k, v) in row.iter().enumerate() {
            let a = v.norm();
            if a < m {
                m = a;
                wx = x_grid[k];
            }
        }
        tail = tail.min(tail_certificate(xi, spec.x_max, spec.p));
        samples.push(row);
        fiber_minima.push((m, wx));
    }
    let surface = SymbolSurface {
        fibers,
        x_grid,
        samples,
        fiber_minima,
    };
    let (min_modulus, idx, witness_x) = surface.global_min();
    let summary = ConditionIiSummary {
        min_modulus,
        witness_fiber: surface.fibers[idx],
        witness_x,
        tail_certificate: tail,
        fiber_count: surface.fibers.len(),
    };
    Ok((surface, summary))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    Sufficient,
    NotSufficient,
    /// Condition (i) and the grid minimum pass but the analytic tail bound
    /// cannot certify |x| > X.
    InconclusiveTail,
}

impl std::fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerdictStatus::Sufficient => "SUFFICIENT",
            VerdictStatus::NotSufficient => "NOT-SUFFICIENT",
            VerdictStatus::InconclusiveTail => "INCONCLUSIVE-TAIL",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone)]
pub struct Verdict {
    pub cond_i_plus: InvertibilityDecision,
    pub cond_i_minus: InvertibilityDecision,
    pub cond_ii_min_modulus: f64,
    pub cond_ii_witness: (FiberPoint, f64),
    pub tail_certificate: f64,
    pub fredholm_sufficient: bool,
    pub status: VerdictStatus,
    pub oracle_profile: Option<DecayProfile>,
    pub fiber_count: usize,
    pub cluster_epsilon: f64,
    pub margin: f64,
}

impl Verdict {
    /// Machine-readable key=value block with stable field names.
    pub fn key_value_block(&self) -> String {
        format!(
            "branch_plus = {}\nbranch_minus = {}\nmin_abs_n = {:.16e}\ntail_cert = {:.16e}\nsufficient = {}\n",
            self.cond_i_plus.branch,
            self.cond_i_minus.branch,
            self.cond_ii_min_modulus,
            self.tail_certificate,
            self.fredholm_sufficient
        )
    }

    pub fn report_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("status = {}\n", self.status));
        s.push_str(&self.key_value_block());
        s.push_str(&format!(
            "cond_ii_witness_x = {:.16e}\nfiber_count = {}\ncluster_epsilon = {:.16e}\nmargin = {:.16e}\n",
            self.cond_ii_witness.1, self.fiber_count, self.cluster_epsilon, self.margin
        ));
        s.push_str(&format!(
            "undecided_near_boundary_plus = {}\nundecided_near_boundary_minus = {}\n",
            self.cond_i_plus.undecided_near_boundary, self.cond_i_minus.undecided_near_boundary
        ));
        if let Some(profile) = &self.oracle_profile {
            s.push_str(&format!("oracle = {}\n", profile.classification));
            for &(n, sigma) in &profile.entries {
                s.push_str(&format!("oracle_sigma_min[{n}] = {sigma:.16e}\n"));
            }
        }
        s
    }
}

/// Run both condition (i) checks and condition (ii), and combine.
pub fn fredholm_verdict(spec: &ProblemSpec) -> Result<Verdict> {
    let clusters0 = spec.clusters(Endpoint::Zero)?;
    let clusters_inf = spec.clusters(Endpoint::Infinity)?;

    let a_plus = BinomialOperator::new(
        spec.a.clone(),
        spec.b.clone(),
        spec.shift.clone(),
        spec.p,
    )?;
    let a_minus = BinomialOperator::new(
        spec.c.clone(),
        spec.d.clone(),
        spec.shift.clone(),
        spec.p,
    )?;
    let cp0 = a_plus.clusters(Endpoint::Zero, spec.cluster_epsilon)?;
    let cpi = a_plus.clusters(Endpoint::Infinity, spec.cluster_epsilon)?;
    let cm0 = a_minus.clusters(Endpoint::Zero, spec.cluster_epsilon)?;
    let cmi = a_minus.clusters(Endpoint::Infinity, spec.cluster_epsilon)?;
    let cond_i_plus = check_fo_conditions(&a_plus, &cp0, &cpi, spec.grid)?;
    let cond_i_minus = check_fo_conditions(&a_minus, &cm0, &cmi, spec.grid)?;

    let (_, summary) = condition_ii(spec, &clusters0, &clusters_inf)?;

    let branches_ok =
        cond_i_plus.branch != Branch::None && cond_i_minus.branch != Branch::None;
    let grid_ok = summary.min_modulus > spec.margin;
    let tail_ok = summary.tail_certificate > spec.margin;
    let fredholm_sufficient = branches_ok && grid_ok && tail_ok;
    let status = if fredholm_sufficient {
        VerdictStatus::Sufficient
    } else if branches_ok && grid_ok {
        VerdictStatus::InconclusiveTail
    } else {
        VerdictStatus::NotSufficient
    };

    Ok(Verdict {
        cond_i_plus,
        cond_i_minus,
        cond_ii_min_modulus: summary.min_modulus,
        cond_ii_witness: (summary.witness_fiber, summary.witness_x),
        tail_certificate: summary.tail_certificate,
        fredholm_sufficient,
        status,
        oracle_profile: None,
        fiber_count: summary.fiber_count,
        cluster_epsilon: spec.cluster_epsilon,
        margin: spec.margin,
    })
}

/// Verdict plus the advisory finite-section SVD oracle.
///
/// The oracle builds its own grid at the largest requested truncation
/// size so the section assembly stays within the column-count cap.
///
/// When both sides decide FO2 the oracle sections W^{-1} N instead of N:
/// the two differ by the invertible factor W, but one-sided truncation of
/// a dominant-shift binomial always admits a geometrically growing
/// quasi-null vector cut off at the window edge, so sections of N itself
/// are exponentially degenerate even though N is invertible. W^{-1} N is
/// identity-dominant and sections stably; it is assembled through the
/// analytic rewrite W^{-1}(aI - bW) = (a o alpha^{-1}) W^{-1} - (b o
/// alpha^{-1}) I, because composing the truncated W^{-1} with the
/// truncated W zeroes a boundary band instead of cancelling.
pub fn fredholm_verdict_with_oracle(spec: &ProblemSpec, sizes: &[usize]) -> Result<Verdict> {
    let mut verdict = fredholm_verdict(spec)?;
    let n_max = sizes.iter().copied().max().unwrap_or(0);
    if n_max == 0 {
        return Err(Error::Domain("oracle requires at least one size".into()));
    }
    let oracle_grid = LogGrid::new(spec.grid.l, n_max)?;
    let op = if verdict.cond_i_plus.branch == Branch::Fo2
        && verdict.cond_i_minus.branch == Branch::Fo2
    {
        let normalized = |u: &SoExpression, v: &SoExpression| {
            // W^{-1} (uI - vW) = (u o alpha^{-1}) W^{-1} - (v o alpha^{-1}) I
            OperatorExpr::Sum(vec![
                OperatorExpr::Compose(vec![
                    OperatorExpr::MultInvShift(u.clone(), spec.shift.clone()),
                    OperatorExpr::WInv(spec.shift.clone()),
                ]),
                OperatorExpr::Scaled(
                    Complex64::new(-1.0, 0.0),
                    Box::new(OperatorExpr::MultInvShift(v.clone(), spec.shift.clone())),
                ),
            ])
        };
        OperatorExpr::Sum(vec![
            OperatorExpr::Compose(vec![normalized(&spec.a, &spec.b), OperatorExpr::PPlus]),
            OperatorExpr::Compose(vec![normalized(&spec.c, &spec.d), OperatorExpr::PMinus]),
        ])
    } else {
        spec.n_expr()
    };
    let section = finite_section(&op, oracle_grid, spec.p, DEFAULT_SECTION_CAP)?;
    verdict.oracle_profile = Some(smallest_singular(&section, sizes)?);
    Ok(verdict)
}
