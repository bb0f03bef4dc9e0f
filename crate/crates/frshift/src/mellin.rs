//! Log-uniform grid infrastructure and the discrete Mellin calculus.
//!
//! Everything lives in the coordinates of the isometry (Ef)(x) = f(e^x):
//! the Mellin transform is a plain Fourier transform in x = ln t, Mellin
//! convolution operators are diagonal on the dual grid, and Mellin
//! pseudodifferential operators are dense sums over (node, dual node).

use crate::error::{Error, Result};
use crate::special;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

pub const DEFAULT_GRID_HALF_WIDTH: f64 = 12.0;
pub const DEFAULT_GRID_POINTS: usize = 4096;
/// Tail nodes (5% each side) must carry less than this norm fraction for
/// periodization error to stay below transform round-off.
pub const SUPPORT_TAIL_THRESHOLD: f64 = 1e-8;

/// Log-uniform grid: x_j = x0 - L + j * (2L/n), t_j = e^{x_j}, dual
/// frequencies xi_k = pi (k - n/2) / L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrid {
    pub l: f64,
    pub n: usize,
    /// Center in x = ln t; 0 for the symmetric default grid.
    pub x0: f64,
}

impl LogGrid {
    pub fn new(l: f64, n: usize) -> Result<LogGrid> {
        Self::centered(l, n, 0.0)
    }

    pub fn centered(l: f64, n: usize, x0: f64) -> Result<LogGrid> {
        if !(l > 0.0) {
            return Err(Error::Grid(format!("half-width must be positive, got {l}")));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::Grid(format!(
                "n must be a power of two >= 16, got {n}"
            )));
        }
        Ok(LogGrid { l, n, x0 })
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 - self.l + self.dx() * j as f64
    }

    pub fn t(&self, j: usize) -> f64 {
        self.x(j).exp()
    }

    /// Dual frequency for spectrum index k in 0..n.
    pub fn xi(&self, k: usize) -> f64 {
        PI * (k as f64 - self.n as f64 / 2.0) / self.l
    }

    pub fn dxi(&self) -> f64 {
        PI / self.l
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    pub fn ts(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.t(j)).collect()
    }
}

/// Complex samples of a function on a LogGrid; value j is f(t_j).
#[derive(Debug, Clone)]
pub struct SampledFunction {
    pub grid: LogGrid,
    pub values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: LogGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::Grid(format!(
                "value length {} does not match grid size {}",
                values.len(),
                grid.n
            )));
        }
        Ok(SampledFunction { grid, values })
    }

    pub fn zeros(grid: LogGrid) -> Self {
        SampledFunction {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n],
        }
    }

    pub fn from_fn(grid: LogGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n).map(|j| f(grid.t(j))).collect();
        SampledFunction { grid, values }
    }

    /// Discrete L^2(dt) norm: (sum |f_j|^2 t_j dx)^{1/2}.
    pub fn norm_dt(&self) -> f64 {
        let dx = self.grid.dx();
        self.values
            .iter()
            .enumerate()
            .map(|(j, v)| v.norm_sqr() * self.grid.t(j) * dx)
            .sum::<f64>()
            .sqrt()
    }

    /// Discrete L^2(dmu) norm, dmu = dt/t: (sum |f_j|^2 dx)^{1/2}.
    pub fn norm_dmu(&self) -> f64 {
        let dx = self.grid.dx();
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx).sqrt()
    }

    /// Fraction of the dmu norm carried by the outer 5% of nodes per side.
    pub fn tail_mass_fraction(&self) -> f64 {
        let n = self.grid.n;
        let k = (n / 20).max(1);
        let total: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let tail: f64 = self.values[..k]
            .iter()
            .chain(self.values[n - k..].iter())
            .map(|v| v.norm_sqr())
            .sum();
        (tail / total).sqrt()
    }
}

/// Centered Gaussian bump in x = ln t; the standard compliant test function.
pub fn gaussian_bump(grid: LogGrid, center_x: f64, width: f64) -> SampledFunction {
    SampledFunction::from_fn(grid, |t| {
        let u = (t.ln() - center_x) / width;
        Complex64::new((-u * u).exp(), 0.0)
    })
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_in_place(values: &mut [Complex64], inverse: bool) {
    let plan: Arc<dyn rustfft::Fft<f64>> = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(values.len())
        } else {
            p.plan_fft_forward(values.len())
        }
    });
    plan.process(values);
}

/// Discrete Mellin transform: spectrum[k] = sum_j f(t_j) t_j^{-i xi_k} dx,
/// with xi_k = grid.xi(k).
pub fn mellin_forward(f: &SampledFunction) -> Vec<Complex64> {
    let g = f.grid;
    let n = g.n;
    let dx = g.dx();
    let mut work = f.values.clone();
    fft_in_place(&mut work, false);
    let x_first = g.x0 - g.l;
    (0..n)
        .map(|k| {
            let m = (k + n / 2) % n; // DFT bin for frequency index k - n/2
            let xi = g.xi(k);
            work[m] * dx * Complex64::new(0.0, -xi * x_first).exp()
        })
        .collect()
}

/// Inverse transform: f(t_j) = (1/2pi) sum_k spectrum[k] t_j^{i xi_k} dxi.
pub fn mellin_inverse(grid: LogGrid, spectrum: &[Complex64]) -> Result<SampledFunction> {
    let n = grid.n;
    if spectrum.len() != n {
        return Err(Error::Grid(format!(
            "spectrum length {} does not match grid size {}",
            spectrum.len(),
            n
        )));
    }
    let x_first = grid.x0 - grid.l;
    let mut work = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let m = (k + n / 2) % n;
        let xi = grid.xi(k);
        work[m] = spectrum[k] * Complex64::new(0.0, xi * x_first).exp();
    }
    fft_in_place(&mut work, true);
    let scale = 1.0 / (n as f64 * grid.dx());
    let values = work.into_iter().map(|v| v * scale).collect();
    SampledFunction::new(grid, values)
}

/// Weight map (Phi f)(t) = t^{1/p} f(t), the isometry L^p(dt) -> L^p(dmu).
pub fn phi_map(f: &SampledFunction, p: f64) -> SampledFunction {
    let values = f
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v * f.grid.t(j).powf(1.0 / p))
        .collect();
    SampledFunction {
        grid: f.grid,
        values,
    }
}

pub fn phi_inv(f: &SampledFunction, p: f64) -> SampledFunction {
    let values = f
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v * f.grid.t(j).powf(-1.0 / p))
        .collect();
    SampledFunction {
        grid: f.grid,
        values,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MultiplierTag {
    SP { p: f64 },
    RPBeta { p: f64, beta: Complex64 },
    Custom,
}

/// Symbol values a(xi_k) on the dual grid of a fixed LogGrid.
#[derive(Debug, Clone)]
pub struct MellinMultiplier {
    pub grid: LogGrid,
    pub values: Vec<Complex64>,
    pub tag: MultiplierTag,
}

impl MellinMultiplier {
    pub fn from_fn(grid: LogGrid, tag: MultiplierTag, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n).map(|k| f(grid.xi(k))).collect();
        MellinMultiplier { grid, values, tag }
    }

    pub fn unit(grid: LogGrid) -> Self {
        Self::from_fn(grid, MultiplierTag::Custom, |_| Complex64::new(1.0, 0.0))
    }

    pub fn s_p(grid: LogGrid, p: f64) -> Self {
        Self::from_fn(grid, MultiplierTag::SP { p }, |x| special::s_p(p, x))
    }

    pub fn r_p_beta(grid: LogGrid, p: f64, beta: Complex64) -> Result<Self> {
        if !(beta.re > 0.0 && beta.re < 2.0 * PI) {
            return Err(Error::Domain(format!(
                "Re beta must lie in (0, 2pi), got {}",
                beta.re
            )));
        }
        Ok(Self::from_fn(grid, MultiplierTag::RPBeta { p, beta }, |x| {
            special::r_p_beta(p, beta, x)
        }))
    }

    pub fn r_p(grid: LogGrid, p: f64) -> Self {
        Self::r_p_beta(grid, p, Complex64::new(PI, 0.0)).unwrap()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Co(a) f = M^{-1}(a * M f), diagonal on the dual grid.
pub fn apply_convolution(m: &MellinMultiplier, f: &SampledFunction) -> Result<SampledFunction> {
    if m.grid != f.grid {
        return Err(Error::Grid("multiplier and function grids differ".into()));
    }
    let mut spec = mellin_forward(f);
    for (s, a) in spec.iter_mut().zip(&m.values) {
        *s *= a;
    }
    mellin_inverse(f.grid, &spec)
}

/// A Mellin pseudodifferential symbol a(t, x), evaluated on demand.
pub struct PdoSymbol {
    eval: Box<dyn Fn(f64, f64) -> Complex64 + Send + Sync>,
    pub tag: String,
}

impl PdoSymbol {
    pub fn new(tag: impl Into<String>, eval: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static) -> Self {
        PdoSymbol {
            eval: Box::new(eval),
            tag: tag.into(),
        }
    }

    pub fn eval(&self, t: f64, x: f64) -> Complex64 {
        (self.eval)(t, x)
    }

    /// Max modulus over a subsampled grid x dual-grid lattice.
    pub fn scan_bound(&self, grid: LogGrid, stride: usize) -> Result<f64> {
        let stride = stride.max(1);
        let mut bound: f64 = 0.0;
        for j in (0..grid.n).step_by(stride) {
            for k in (0..grid.n).step_by(stride) {
                let v = self.eval(grid.t(j), grid.xi(k)).norm();
                if !v.is_finite() {
                    return Err(Error::Domain(format!(
                        "symbol {} unbounded at (t, x) = ({}, {})",
                        self.tag,
                        grid.t(j),
                        grid.xi(k)
                    )));
                }
                bound = bound.max(v);
            }
        }
        Ok(bound)
    }
}

/// Dense Mellin PDO application:
/// out(t_j) = (1/2pi) sum_k a(t_j, xi_k) (Mf)(xi_k) t_j^{i xi_k} dxi.
pub fn apply_pdo(sym: &PdoSymbol, f: &SampledFunction) -> Result<SampledFunction> {
    let g = f.grid;
    let spec = mellin_forward(f);
    let scale = g.dxi() / (2.0 * PI);
    let mut out = vec![Complex64::new(0.0, 0.0); g.n];
    for (j, o) in out.iter_mut().enumerate() {
        let t = g.t(j);
        let x = g.x(j);
        let mut acc = Complex64::new(0.0, 0.0);
        // deterministic accumulation order over k
        for (k, s) in spec.iter().enumerate() {
            let xi = g.xi(k);
            acc += sym.eval(t, xi) * s * Complex64::new(0.0, xi * x).exp();
        }
        *o = acc * scale;
    }
    SampledFunction::new(g, out)
}

/// Discrete total variation sum |a(xi_{k+1}) - a(xi_k)| of the stored values.
pub fn tv_norm(m: &MellinMultiplier) -> f64 {
    m.values.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
}

/// || S_R ||_{B(L^p(R))}: 1 for p = 2, classical value otherwise.
pub fn cauchy_operator_norm(p: f64) -> f64 {
    if (p - 2.0).abs() < 1e-14 {
        1.0
    } else {
        let u = (PI / (2.0 * p)).tan();
        u.max(1.0 / u)
    }
}

/// Stechkin bound ||S_R|| * (||a||_inf + V(a)) on the multiplier norm.
pub fn stechkin_bound(m: &MellinMultiplier, p: f64) -> f64 {
    cauchy_operator_norm(p) * (m.sup_norm() + tv_norm(m))
}
