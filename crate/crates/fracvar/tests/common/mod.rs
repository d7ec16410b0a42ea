//! Independent oracles for the integration tests: adaptive quadrature of
//! the defining singular-kernel integrals, with the singularity removed by
//! a power substitution. These never touch the discrete operator code
//! paths they are used to check.

/// Recursive adaptive Simpson quadrature.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 40)
}

/// Left Riemann-Liouville integral of order `alpha` at `x`, computed by
/// quadrature after the substitution u = (x - t)^alpha which removes the
/// kernel singularity.
pub fn left_rl_integral(f: &impl Fn(f64) -> f64, a: f64, alpha: f64, x: f64) -> f64 {
    if x <= a {
        return 0.0;
    }
    let upper = (x - a).powf(alpha);
    let integrand = |u: f64| f(x - u.powf(1.0 / alpha));
    adaptive_simpson(&integrand, 0.0, upper, 1e-12) / (alpha * gamma(alpha))
}

/// Right Riemann-Liouville integral of order `alpha` at `x` on `[_, b]`.
pub fn right_rl_integral(f: &impl Fn(f64) -> f64, b: f64, alpha: f64, x: f64) -> f64 {
    if x >= b {
        return 0.0;
    }
    let upper = (b - x).powf(alpha);
    let integrand = |u: f64| f(x + u.powf(1.0 / alpha));
    adaptive_simpson(&integrand, 0.0, upper, 1e-12) / (alpha * gamma(alpha))
}

/// Left Caputo derivative of order `alpha` in (0, 1) from the analytic
/// first derivative `fp`.
pub fn left_caputo(fp: &impl Fn(f64) -> f64, a: f64, alpha: f64, x: f64) -> f64 {
    if x <= a {
        return 0.0;
    }
    let beta = 1.0 - alpha;
    let upper = (x - a).powf(beta);
    let integrand = |u: f64| fp(x - u.powf(1.0 / beta));
    adaptive_simpson(&integrand, 0.0, upper, 1e-12) / (beta * gamma(beta))
}

/// Right Caputo derivative of order `alpha` in (0, 1) from the analytic
/// first derivative `fp`.
pub fn right_caputo(fp: &impl Fn(f64) -> f64, b: f64, alpha: f64, x: f64) -> f64 {
    if x >= b {
        return 0.0;
    }
    let beta = 1.0 - alpha;
    let upper = (b - x).powf(beta);
    let integrand = |u: f64| fp(x + u.powf(1.0 / beta));
    -adaptive_simpson(&integrand, 0.0, upper, 1e-12) / (beta * gamma(beta))
}

/// Left Caputo derivative of order `mu` in (m-1, m) from the analytic m-th
/// derivative `fm`.
pub fn left_caputo_high(fm: &impl Fn(f64) -> f64, a: f64, mu: f64, m: usize, x: f64) -> f64 {
    if x <= a {
        return 0.0;
    }
    let beta = m as f64 - mu;
    let upper = (x - a).powf(beta);
    let integrand = |u: f64| fm(x - u.powf(1.0 / beta));
    adaptive_simpson(&integrand, 0.0, upper, 1e-12) / (beta * gamma(beta))
}

/// Left Riemann-Liouville derivative at `x` by central differencing of the
/// quadrature-computed order-(1 - alpha) integral.
pub fn left_rl_derivative(f: &impl Fn(f64) -> f64, a: f64, alpha: f64, x: f64) -> f64 {
    let delta = 1e-5;
    let hi = left_rl_integral(f, a, 1.0 - alpha, x + delta);
    let lo = left_rl_integral(f, a, 1.0 - alpha, x - delta);
    (hi - lo) / (2.0 * delta)
}

/// Gamma via the classic eight-term Stirling series after shifting the
/// argument up by 10; independent of the library's Lanczos path.
pub fn gamma(z: f64) -> f64 {
    let shift = 10;
    let zs = z + shift as f64;
    let series = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let mut s = 0.0;
    let mut zp = zs;
    for c in series {
        s += c / zp;
        zp *= zs * zs;
    }
    let ln_gamma_shifted =
        (zs - 0.5) * zs.ln() - zs + 0.5 * (2.0 * std::f64::consts::PI).ln() + s;
    let mut g = ln_gamma_shifted.exp();
    for k in 0..shift {
        g /= z + k as f64;
    }
    g
}
