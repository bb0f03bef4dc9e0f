//! Cubic Lagrange interpolation on a uniform grid, with zero extension
//! outside the sampled range (test functions are bumps with limit 0).

use num_complex::Complex64;

/// Interpolate `values` sampled at u_j = first + j*step at the query point.
/// Queries outside [first, first + (len-1)*step] return 0.
pub fn cubic(values: &[Complex64], first: f64, step: f64, q: f64) -> Complex64 {
    let n = values.len();
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let u = (q - first) / step;
    if u < 0.0 || u > (n - 1) as f64 {
        return Complex64::new(0.0, 0.0);
    }
    if n < 4 {
        // linear fallback for tiny grids
        let i = (u.floor() as usize).min(n - 2);
        let s = u - i as f64;
        return values[i] * (1.0 - s) + values[i + 1] * s;
    }
    // 4-point stencil i0..i0+3 around the query
    let mut i0 = u.floor() as isize - 1;
    i0 = i0.clamp(0, (n - 4) as isize);
    let i0 = i0 as usize;
    let s = u - i0 as f64; // in [-eps, 3+eps] relative to the stencil
    let w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    let w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    let w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    let w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    values[i0] * w0 + values[i0 + 1] * w1 + values[i0 + 2] * w2 + values[i0 + 3] * w3
}

/// Real-valued convenience wrapper.
pub fn cubic_real(values: &[f64], first: f64, step: f64, q: f64) -> f64 {
    let n = values.len();
    if n == 0 {
        return 0.0;
    }
    let u = (q - first) / step;
    if u < 0.0 || u > (n - 1) as f64 {
        return 0.0;
    }
    if n < 4 {
        let i = (u.floor() as usize).min(n - 2);
        let s = u - i as f64;
        return values[i] * (1.0 - s) + values[i + 1] * s;
    }
    let mut i0 = u.floor() as isize - 1;
    i0 = i0.clamp(0, (n - 4) as isize);
    let i0 = i0 as usize;
    let s = u - i0 as f64;
    let w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    let w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    let w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    let w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    values[i0] * w0 + values[i0 + 1] * w1 + values[i0 + 2] * w2 + values[i0 + 3] * w3
}
