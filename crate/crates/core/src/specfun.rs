//! Scalar numerics: adaptive Gauss–Kronrod quadrature, incomplete elliptic
//! integrals, a bracketed root finder, and the Jacobi amplitude.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance for quadrature-backed special functions.
pub const QUAD_TOL: f64 = 1e-14;
/// Default interval width for bracketed root finding.
pub const ROOT_TOL: f64 = 1e-13;

const MAX_INTERVALS: usize = 4096;
const MAX_ROOT_ITERATIONS: usize = 300;

/// Outcome of an adaptive quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

// Kronrod abscissae on [0, 1]; odd indices are shared with the 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Globally adaptive Gauss–Kronrod (7, 15) quadrature of `f` over `[a, b]`.
///
/// Terminates once the summed error estimate is at most `max(tol, tol·|value|)`.
pub fn adaptive_integrate<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    adaptive_integrate_tols(f, a, b, tol, tol)
}

/// As [`adaptive_integrate`] with separate absolute and relative targets.
pub fn adaptive_integrate_tols<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Domain(format!("integration interval [{a}, {b}]")));
    }
    if !(abs_tol > 0.0 && rel_tol > 0.0) {
        return Err(Error::Domain(format!("quadrature tolerance {abs_tol}/{rel_tol}")));
    }
    let mut panels = vec![gk15(&mut f, a, b)];
    let mut evaluations = 15;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target || error <= 64.0 * f64::EPSILON * value.abs() {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        if panels.len() >= MAX_INTERVALS {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                iterations: panels.len(),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // Panel below floating resolution; its error cannot shrink further.
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        panels.push(gk15(&mut f, p.a, mid));
        panels.push(gk15(&mut f, mid, p.b));
        evaluations += 30;
    }
}

fn check_modulus(m: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::Domain(format!("elliptic modulus m = {m} outside [0, 1]")));
    }
    Ok(())
}

fn delta(theta: f64, m: f64) -> f64 {
    let s = theta.sin();
    (1.0 - m * s * s).sqrt()
}

/// Integrates a π-periodic even integrand from 0 to `x`, reducing to one quarter period.
fn periodic_integral<G: Fn(f64) -> f64 + Copy>(x: f64, quarter: G, per_period: f64) -> Result<f64> {
    let n = (x / PI).round();
    let r = x - n * PI;
    let partial = adaptive_integrate_tols(quarter, 0.0, r.abs(), QUAD_TOL * 1e-2, QUAD_TOL)?.value;
    Ok(n * per_period + r.signum() * partial)
}

/// Incomplete elliptic integral of the first kind, `∫₀ˣ dθ / √(1 − m sin²θ)`.
pub fn incomplete_f(x: f64, m: f64) -> Result<f64> {
    check_modulus(m)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("amplitude {x}")));
    }
    let integrand = move |t: f64| 1.0 / delta(t, m);
    if m == 1.0 {
        if x.abs() >= FRAC_PI_2 {
            return Err(Error::Domain(format!(
                "F(x, 1) is singular on the path for |x| = {} ≥ π/2",
                x.abs()
            )));
        }
        return Ok(x.signum() * adaptive_integrate_tols(integrand, 0.0, x.abs(), 1e-16, QUAD_TOL)?.value);
    }
    if x.abs() <= FRAC_PI_2 {
        return Ok(x.signum() * adaptive_integrate_tols(integrand, 0.0, x.abs(), 1e-16, QUAD_TOL)?.value);
    }
    let k = complete_k(m)?;
    periodic_integral(x, integrand, 2.0 * k)
}

/// Incomplete elliptic integral of the second kind, `∫₀ˣ √(1 − m sin²θ) dθ`.
pub fn incomplete_e(x: f64, m: f64) -> Result<f64> {
    check_modulus(m)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("amplitude {x}")));
    }
    let integrand = move |t: f64| delta(t, m);
    if x.abs() <= FRAC_PI_2 {
        return Ok(x.signum() * adaptive_integrate_tols(integrand, 0.0, x.abs(), 1e-16, QUAD_TOL)?.value);
    }
    let e = complete_e(m)?;
    periodic_integral(x, integrand, 2.0 * e)
}

/// Complete integral of the first kind, `F(π/2, m)`, for `m ∈ [0, 1)`.
pub fn complete_k(m: f64) -> Result<f64> {
    check_modulus(m)?;
    if m == 1.0 {
        return Err(Error::Domain("K(1) diverges".into()));
    }
    Ok(adaptive_integrate_tols(|t| 1.0 / delta(t, m), 0.0, FRAC_PI_2, 1e-16, QUAD_TOL)?.value)
}

/// Complete integral of the second kind, `E(π/2, m)`.
pub fn complete_e(m: f64) -> Result<f64> {
    check_modulus(m)?;
    Ok(adaptive_integrate_tols(|t| delta(t, m), 0.0, FRAC_PI_2, 1e-16, QUAD_TOL)?.value)
}

/// Jacobi amplitude: the `x` with `F(x, m) = u`, for `m ∈ [0, 1)`.
pub fn jacobi_amplitude(u: f64, m: f64) -> Result<f64> {
    check_modulus(m)?;
    if m == 1.0 || !u.is_finite() {
        return Err(Error::Domain(format!("amplitude inverse at u = {u}, m = {m}")));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    // F(x) lies between x and x/√(1−m), which brackets the inverse.
    let (mut lo, mut hi) = if u > 0.0 {
        (u * (1.0 - m).sqrt(), u)
    } else {
        (u, u * (1.0 - m).sqrt())
    };
    let k = complete_k(m)?;
    let mut x = u * FRAC_PI_2 / k;
    for _ in 0..100 {
        let fx = incomplete_f(x, m)? - u;
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let mut next = x - fx * delta(x, m);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NonConvergence {
        what: "Jacobi amplitude",
        iterations: 100,
    })
}

/// Brent-style bracketed root finder (bisection, secant and inverse quadratic steps).
///
/// Returns a point inside a sign-change interval of width at most `tol`.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("root tolerance {tol}")));
    }
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(Error::NoBracket { a, b, fa, fb });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ROOT_ITERATIONS {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(Error::NonConvergence {
        what: "bracketed root finder",
        iterations: MAX_ROOT_ITERATIONS,
    })
}

/// Hyperbolic secant.
pub fn sech(x: f64) -> f64 {
    // cosh overflows near |x| = 710; sech is zero to double precision well before.
    if x.abs() > 700.0 {
        0.0
    } else {
        1.0 / x.cosh()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert_eq!(incomplete_f(0.0, 0.4).unwrap(), 0.0);
        assert!((incomplete_f(0.7, 0.0).unwrap() - 0.7).abs() < 1e-15);
        assert!((incomplete_e(1.2, 0.0).unwrap() - 1.2).abs() < 1e-15);
        assert!((incomplete_e(FRAC_PI_2, 1.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(incomplete_f(0.5, -0.1).is_err());
        assert!(incomplete_e(0.5, 1.1).is_err());
        assert!(incomplete_f(FRAC_PI_2, 1.0).is_err());
        assert!(incomplete_f(1.0, 1.0).is_ok());
    }

    #[test]
    fn periodic_reduction_is_consistent() {
        let m = 0.7;
        let k = complete_k(m).unwrap();
        let f3 = incomplete_f(3.0, m).unwrap();
        let direct = adaptive_integrate(|t| 1.0 / delta(t, m), 0.0, 3.0, 1e-15).unwrap().value;
        assert!((f3 - direct).abs() < 1e-13);
        assert!((incomplete_f(PI, m).unwrap() - 2.0 * k).abs() < 1e-13);
        assert!((incomplete_f(-3.0, m).unwrap() + f3).abs() < 1e-15);
    }

    #[test]
    fn amplitude_inverts_f() {
        for &m in &[0.0, 0.3, 0.73, 0.95] {
            for &x in &[-4.0, -1.0, 0.2, 1.5, 2.9] {
                let u = incomplete_f(x, m).unwrap();
                let back = jacobi_amplitude(u, m).unwrap();
                assert!((back - x).abs() < 1e-13, "m={m} x={x} back={back}");
            }
        }
    }

    #[test]
    fn root_finder_closed_forms() {
        let r = find_root(|x| x * x - 2.0, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
        let r = find_root(f64::cos, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - FRAC_PI_2).abs() < 1e-12);
        assert!(matches!(
            find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn quadrature_constant_and_chord() {
        let q = adaptive_integrate(|_| 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!(q.value, 1.0);
        assert!(q.error_estimate <= 1e-15 && q.evaluations >= 1);
        let q = adaptive_integrate(|t| (2.0 - 2.0 * t.cos()).sqrt(), 0.0, 2.0 * PI, 1e-13).unwrap();
        assert!((q.value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn empty_interval_counts_evaluations() {
        let q = adaptive_integrate(|x| x, 2.0, 2.0, 1e-12).unwrap();
        assert_eq!(q.value, 0.0);
        assert!(q.evaluations >= 1);
    }
}
