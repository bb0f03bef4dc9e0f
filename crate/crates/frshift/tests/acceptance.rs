//! Acceptance suite: the eleven pinned criteria, one test each. Every test
//! prints a single PASS/FAIL line with the measured figure of merit before
//! asserting, so `--nocapture` yields the full scoreboard.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use frshift::fredholm::fredholm_verdict_with_oracle;
use frshift::mellin::{apply_pdo, gaussian_bump, phi_inv, phi_map, LogGrid, SampledFunction};
use frshift::oplab::{
    b_xi_eval, finite_section, op_r, op_r_quadrature, op_s, op_s_quadrature, op_w,
    singular_values, symbol_a, symbol_a_at_fiber, symbol_c, DecayClass, OperatorExpr,
};
use frshift::problem::parse_problem;
use frshift::shift::Shift;
use frshift::so_expr::{certify_default, parse_expr, Endpoint, FiberPoint, SoExpression};
use frshift::solver::{
    check_fo_conditions, neumann_solve, transplant_check, BinomialOperator, Branch,
};
use frshift::special::{r_p, s_p};
use frshift::validate::{CATALOG, CATALOG_SUFFICIENT};

fn e(src: &str) -> SoExpression {
    parse_expr(src).expect("acceptance expression parses")
}

fn report(criterion: usize, name: &str, measured: f64, tolerance: f64) {
    let pass = measured <= tolerance && measured.is_finite();
    println!(
        "criterion {criterion:2} {name}: {} measured={measured:.3e} tolerance={tolerance:.3e}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{name}: {measured:.6e} > {tolerance:.6e}");
}

fn rel_err(got: &SampledFunction, want: &SampledFunction) -> f64 {
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (a, b) in got.values.iter().zip(&want.values) {
        num += (a - b).norm_sqr();
        den += b.norm_sqr();
    }
    (num / den.max(1e-300)).sqrt()
}

/// 1. Pointwise multiplier identity s_p^2 - r_p^2 = 1.
#[test]
fn criterion_01_symbol_identity() {
    let mut worst = 0.0f64;
    for &p in &[1.5, 2.0, 3.0] {
        for k in 0..2401 {
            let x = -6.0 + 12.0 * (k as f64) / 2400.0;
            let s = s_p(p, x);
            let r = r_p(p, x);
            worst = worst.max((s * s - r * r - 1.0).norm());
        }
    }
    report(1, "symbol-identity", worst, 1e-13);
}

/// 2. Operator identity S^2 f = f + R^2 f on 10 random bumps.
#[test]
fn criterion_02_s_r_identity() {
    let grid = LogGrid::new(12.0, 4096).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let center = rng.gen_range(-3.0..3.0);
        let width = rng.gen_range(0.5..2.0);
        let f = gaussian_bump(grid, center, width);
        for &p in &[1.5, 2.0, 3.0] {
            let ssf = op_s(&op_s(&f, p).unwrap(), p).unwrap();
            let rrf = op_r(&op_r(&f, p).unwrap(), p).unwrap();
            let want = SampledFunction::new(
                grid,
                f.values
                    .iter()
                    .zip(&rrf.values)
                    .map(|(a, b)| a + b)
                    .collect(),
            )
            .unwrap();
            worst = worst.max(rel_err(&ssf, &want));
        }
    }
    report(2, "s-r-identity", worst, 1e-10);
}

/// 3. S and R multiplier routes against independent quadrature at 20
/// interior probes.
#[test]
fn criterion_03_quadrature_agreement() {
    // wide grid: the multiplier route's periodization error decays like
    // e^{-(2L - |x|)/2} and must sit below the 1e-5 comparison level
    let grid = LogGrid::new(18.0, 4096).unwrap();
    let f = gaussian_bump(grid, 0.0, 1.0);
    let sf = op_s(&f, 2.0).unwrap();
    let rf = op_r(&f, 2.0).unwrap();
    let scale_s = sf.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let scale_r = rf.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let probe = grid.n / 2 - 300 + 30 * k;
        let qs = op_s_quadrature(&f, probe, 16, 4).unwrap();
        let qr = op_r_quadrature(&f, probe, 16).unwrap();
        worst = worst.max((qs - sf.values[probe]).norm() / scale_s);
        worst = worst.max((qr - rf.values[probe]).norm() / scale_r);
    }
    report(3, "quadrature-agreement", worst, 1e-5);
}

/// 4. Kernel-transform instance: r_2(0) = -i against the direct quadrature
/// of int_0^inf tau^{-1/2}/(1+tau) dtau = pi.
#[test]
fn criterion_04_kernel_transform_instance() {
    let h = 1e-3;
    let half_range = 80.0;
    let m = (2.0 * half_range / h) as usize;
    let mut acc = 0.0f64;
    for j in 0..=m {
        let u = -half_range + h * j as f64;
        let w = if j == 0 || j == m { 0.5 } else { 1.0 };
        // e^{u/2}/(1+e^u) = 1/(e^{-u/2} + e^{u/2}), overflow-safe
        acc += w / ((-u / 2.0).exp() + (u / 2.0).exp());
    }
    let instance = acc * h / (PI * Complex64::i());
    report(
        4,
        "kernel-transform-instance",
        (instance - r_p(2.0, 0.0)).norm(),
        1e-8,
    );
}

/// 5. PDO realization: Phi W R Phi^{-1} agrees with the dense symbol
/// application for constant and genuinely slowly oscillating omega.
#[test]
fn criterion_05_pdo_realization() {
    // R f inherits e^{-|x|/2} kernel tails, so the zero-fill translation and
    // the periodic dense sum disagree by O(e^{-L/2}) at the edges; L = 28
    // keeps that artifact below the gate
    let grid = LogGrid::new(28.0, 4096).unwrap();
    let p = 2.0;
    let f = gaussian_bump(grid, 0.0, 1.0);
    let mut worst = 0.0f64;
    for omega_src in ["0.6931471805599453", "0.5*sigm(ln(t))"] {
        let shift = Shift::new(e(omega_src)).unwrap();
        let lhs = phi_map(
            &op_w(&shift, &op_r(&phi_inv(&f, p), p).unwrap()).unwrap(),
            p,
        );
        let rhs = apply_pdo(&symbol_c(&shift, p), &f).unwrap();
        worst = worst.max(rel_err(&lhs, &rhs));
    }
    report(5, "pdo-realization", worst, 1e-5);
}

/// 6. Factorization of the symbol difference on a 20x20 (t, x) lattice at
/// two fiber values.
#[test]
fn criterion_06_symbol_factorization() {
    let shift = Shift::new(e("0.5*sigm(ln(t))")).unwrap();
    let p = 2.0;
    let sym_a = symbol_a(&shift, p);
    let mut worst = 0.0f64;
    for omega_xi in [0.0, 0.5] {
        let xi = FiberPoint {
            a_val: Complex64::new(0.0, 0.0),
            b_val: Complex64::new(0.0, 0.0),
            c_val: Complex64::new(0.0, 0.0),
            d_val: Complex64::new(0.0, 0.0),
            omega_val: omega_xi,
            kappa_val: 1.0,
        };
        for i in 0..20 {
            let t = (-6.0 + 12.0 * i as f64 / 19.0f64).exp();
            let omega_t = shift.omega_at(t).unwrap();
            for k in 0..20 {
                let x = -6.0 + 12.0 * k as f64 / 19.0;
                let lhs = sym_a.eval(t, x) - symbol_a_at_fiber(&xi, p, x);
                let rhs =
                    (omega_t - omega_xi) * r_p(p, x) * b_xi_eval(&xi, &shift, p, t, x).unwrap();
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    report(6, "symbol-factorization", worst, 1e-10);
}

/// 7. Neumann solver: FO1 within 25 iterations, FO2 mirror within 40, and
/// inverse verification by applying the operator to the solution.
#[test]
fn criterion_07_neumann_solver() {
    // FO2 composes the interpolated W with the interpolated W^{-1}, whose
    // mismatch scales like dx^4: full default resolution required
    let grid = LogGrid::new(12.0, 4096).unwrap();
    // offset the bump: the series terms translate leftward by ln2 each
    let f = gaussian_bump(grid, 3.0, 1.0);
    let decide = |op: &BinomialOperator| {
        let c0 = op.clusters(Endpoint::Zero, 1e-3).unwrap();
        let ci = op.clusters(Endpoint::Infinity, 1e-3).unwrap();
        check_fo_conditions(op, &c0, &ci, grid).unwrap()
    };

    let op1 = BinomialOperator::new(
        e("2"),
        e("1"),
        Shift::new(e("0.6931471805599453")).unwrap(),
        2.0,
    )
    .unwrap();
    let d1 = decide(&op1);
    assert_eq!(d1.branch, Branch::Fo1);
    let s1 = neumann_solve(&op1, &f, &d1, 1e-8, 25).unwrap();

    let op2 = BinomialOperator::new(
        e("1"),
        e("2"),
        Shift::new(e("-0.6931471805599453")).unwrap(),
        2.0,
    )
    .unwrap();
    let d2 = decide(&op2);
    assert_eq!(d2.branch, Branch::Fo2);
    let s2 = neumann_solve(&op2, &f, &d2, 1e-8, 40).unwrap();

    // inverse verification in the same relative dt-norm as the residual
    let verify = |op: &BinomialOperator, u: &SampledFunction| -> f64 {
        let back = op.expr().apply(u, 2.0).unwrap();
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..grid.n {
            num += (back.values[j] - f.values[j]).norm_sqr() * grid.t(j);
            den += f.values[j].norm_sqr() * grid.t(j);
        }
        (num / den).sqrt()
    };
    let worst = s1
        .residual
        .max(s2.residual)
        .max(verify(&op1, &s1.u))
        .max(verify(&op2, &s2.u));
    report(7, "neumann-solver", worst, 1e-8);
}

/// 8. Transplantation identity: two-sided evaluation discrepancy over the
/// catalog binomials with a genuine shift.
#[test]
fn criterion_08_transplantation() {
    // sin(llog t) has a curvature kink at t = 1 (the |ln t| inside llog),
    // where cubic interpolation is locally first-order; the oscillating
    // case needs the finer grid to clear the gate
    let cases: [(&str, &str, &str, usize); 3] = [
        ("2", "1", "0.6931471805599453", 2048),
        ("1", "2", "-0.6931471805599453", 2048),
        ("2 + 0.5*sin(llog(t))", "1", "0.5*sigm(ln(t))", 16384),
    ];
    let mut worst = 0.0f64;
    for (a, b, omega, n) in cases {
        let grid = LogGrid::new(12.0, n).unwrap();
        let f = gaussian_bump(grid, 0.0, 1.0);
        let op =
            BinomialOperator::new(e(a), e(b), Shift::new(e(omega)).unwrap(), 2.0).unwrap();
        let rep = transplant_check(&op, &f, 8192).unwrap();
        worst = worst.max(rep.discrepancy);
    }
    report(8, "transplantation", worst, 1e-4);
}

/// 9. Verdict/oracle concordance over the six-instance catalog at the full
/// truncation ladder {128, 256, 512, 1024}.
#[test]
fn criterion_09_verdict_oracle_concordance() {
    let sizes = [128usize, 256, 512, 1024];
    let mut mismatches = 0usize;
    for (k, (name, text)) in CATALOG.iter().enumerate() {
        let mut pf = parse_problem(text).unwrap();
        pf.config.grid_n = 1024;
        let spec = pf.build().unwrap();
        let v = fredholm_verdict_with_oracle(&spec, &sizes).unwrap();
        let profile = v.oracle_profile.as_ref().unwrap();
        if v.fredholm_sufficient != CATALOG_SUFFICIENT[k] {
            eprintln!("{name}: sufficiency {}", v.fredholm_sufficient);
            mismatches += 1;
        }
        let want_class = if CATALOG_SUFFICIENT[k] {
            DecayClass::BoundedBelow
        } else {
            DecayClass::Decaying
        };
        if profile.classification != want_class {
            eprintln!("{name}: oracle {}", profile.classification);
            mismatches += 1;
        }
    }
    report(9, "verdict-oracle-concordance", mismatches as f64, 0.5);
}

/// 10. Compactness surrogates: Duduchava quartile decay and endpoint
/// commutator decay.
#[test]
fn criterion_10_compactness_surrogates() {
    // quartile singular value of a Co(r) with endpoint-vanishing a
    let a = e("4*sigm(ln(t))*(1 - sigm(ln(t)))");
    let op = OperatorExpr::Compose(vec![OperatorExpr::Mult(a), OperatorExpr::R]);
    let mut quartile = Vec::new();
    for &m in &[256usize, 512, 1024] {
        let grid = LogGrid::new(12.0, m).unwrap();
        let fs = finite_section(&op, grid, 2.0, 1024).unwrap();
        let mut s = singular_values(&fs).unwrap();
        s.sort_by(|x, y| y.partial_cmp(x).unwrap());
        quartile.push(s[m.div_ceil(4) - 1]);
    }
    let worst_ratio = quartile
        .windows(2)
        .map(|w| w[1] / w[0])
        .fold(0.0f64, f64::max);
    report(10, "duduchava-quartile-decay", worst_ratio, 0.6);

    // commutator [aI, S] on grids centered at x0 = +-e^u
    let a = e("sin(llog(t))");
    let mut worst = 0.0f64;
    for sign in [-1.0, 1.0] {
        let mut last = f64::NAN;
        for u in 1..=6 {
            let x0 = sign * (u as f64).exp();
            let grid = LogGrid::centered(6.0, 256, x0).unwrap();
            let f = gaussian_bump(grid, x0, 1.0);
            // multiply via eval_at_x: t = e^x overflows f64 out here
            let mul = |g: &SampledFunction| {
                let vals = (0..grid.n)
                    .map(|j| g.values[j] * a.eval_at_x(grid.x(j)).unwrap())
                    .collect();
                SampledFunction::new(grid, vals).unwrap()
            };
            let asf = mul(&op_s(&f, 2.0).unwrap());
            let saf = op_s(&mul(&f), 2.0).unwrap();
            let num: f64 = asf
                .values
                .iter()
                .zip(&saf.values)
                .map(|(x, y)| (x - y).norm_sqr())
                .sum();
            let den: f64 = f.values.iter().map(|v| v.norm_sqr()).sum();
            last = (num / den).sqrt();
        }
        worst = worst.max(last);
    }
    report(10, "commutator-endpoint-decay", worst, 0.05);
}

/// 11. Slow-oscillation certification regression.
#[test]
fn criterion_11_so_certification() {
    let mut mismatches = 0usize;
    if !certify_default(&e("sin(llog(t))")).unwrap().pass {
        mismatches += 1;
    }
    if certify_default(&e("sin(ln(t))")).unwrap().pass {
        mismatches += 1;
    }
    let flat = certify_default(&e("3")).unwrap();
    let zero_osc = flat
        .osc_at_zero
        .iter()
        .chain(&flat.osc_at_inf)
        .all(|&(_, o)| o == 0.0);
    if !(flat.pass && zero_osc) {
        mismatches += 1;
    }
    report(11, "so-certification-regression", mismatches as f64, 0.5);
}
