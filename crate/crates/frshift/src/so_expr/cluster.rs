//! Joint cluster-set estimation of the endpoint fibers.
//!
//! Fiber values of slowly oscillating data are partial limits along
//! sequences t_n -> s. We sample along the doubly exponential schedule
//! t = exp(+-e^u) (dyadic-scale invariance of SO data makes a polynomial
//! schedule under-explore the fibers) and greedily cluster the raw
//! (a, b, c, d, omega, kappa) tuples.

use super::SoExpression;
use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Zero,
    Infinity,
}

/// Cluster value of the data tuple at one fiber point.
///
/// `kappa_val` is the cluster value of 1 + t*omega'(t), so that
/// alpha'(xi) = kappa_val * e^{omega_val}.
#[derive(Debug, Clone, Copy)]
pub struct FiberPoint {
    pub a_val: Complex64,
    pub b_val: Complex64,
    pub c_val: Complex64,
    pub d_val: Complex64,
    pub omega_val: f64,
    pub kappa_val: f64,
}

impl FiberPoint {
    pub fn alpha_deriv(&self) -> f64 {
        self.kappa_val * self.omega_val.exp()
    }
}

#[derive(Debug, Clone)]
pub struct ClusterSet {
    pub endpoint: Endpoint,
    pub tuples: Vec<FiberPoint>,
    pub epsilon: f64,
    pub samples_used: usize,
    /// Raw sample tuples keyed by x = ln t (t itself may overflow f64),
    /// retained for soundness checks and tail scans.
    pub raw: Vec<(f64, FiberPoint)>,
}

#[derive(Debug, Clone, Copy)]
pub struct SamplingSchedule {
    pub u_min: f64,
    pub u_max: f64,
    pub points: usize,
}

impl Default for SamplingSchedule {
    fn default() -> Self {
        SamplingSchedule {
            u_min: 2.0,
            u_max: 9.0,
            points: 400,
        }
    }
}

pub const DEFAULT_CLUSTER_EPSILON: f64 = 1e-3;

fn tuple_dist(p: &FiberPoint, q: &FiberPoint) -> f64 {
    let mut d: f64 = 0.0;
    d = d.max((p.a_val - q.a_val).norm());
    d = d.max((p.b_val - q.b_val).norm());
    d = d.max((p.c_val - q.c_val).norm());
    d = d.max((p.d_val - q.d_val).norm());
    d = d.max((p.omega_val - q.omega_val).abs());
    d = d.max((p.kappa_val - q.kappa_val).abs());
    d
}

/// Collect raw joint tuples along t_n = exp(+-e^u) and cluster greedily
/// with radius `epsilon`. Each cluster representative is a raw sample, so
/// every FiberPoint is within epsilon of a sample by construction.
pub fn cluster_tuples(
    a: &SoExpression,
    b: &SoExpression,
    c: &SoExpression,
    d: &SoExpression,
    omega: &SoExpression,
    endpoint: Endpoint,
    sampling: SamplingSchedule,
    epsilon: f64,
) -> Result<ClusterSet> {
    if sampling.points == 0 {
        return Err(Error::Sampling("empty sampling schedule".into()));
    }
    let sign = match endpoint {
        Endpoint::Zero => -1.0,
        Endpoint::Infinity => 1.0,
    };
    let mut raw = Vec::with_capacity(sampling.points);
    for i in 0..sampling.points {
        let u = sampling.u_min
            + (sampling.u_max - sampling.u_min) * (i as f64)
                / ((sampling.points - 1).max(1) as f64);
        let x = sign * u.exp();
        let tup = FiberPoint {
            a_val: Complex64::new(a.eval_at_x(x)?, 0.0),
            b_val: Complex64::new(b.eval_at_x(x)?, 0.0),
            c_val: Complex64::new(c.eval_at_x(x)?, 0.0),
            d_val: Complex64::new(d.eval_at_x(x)?, 0.0),
            omega_val: omega.eval_at_x(x)?,
            kappa_val: 1.0 + omega.t_deriv_at_x(x)?,
        };
        raw.push((x, tup));
    }
    let mut tuples: Vec<FiberPoint> = Vec::new();
    for (_, tup) in &raw {
        if !tuples.iter().any(|rep| tuple_dist(rep, tup) <= epsilon) {
            tuples.push(*tup);
        }
    }
    Ok(ClusterSet {
        endpoint,
        tuples,
        epsilon,
        samples_used: raw.len(),
        raw,
    })
}
