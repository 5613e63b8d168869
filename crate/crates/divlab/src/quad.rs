//! Adaptive Gauss–Kronrod quadrature.
//!
//! A 7-point Gauss / 15-point Kronrod pair with panel bisection. The error
//! estimate per panel is `|G7 - K15|`; a panel is accepted when that falls
//! below the absolute tolerance (scaled by the panel's share of the
//! interval). Kronrod nodes are interior, so integrable endpoint
//! singularities never get evaluated at the endpoint itself.

use crate::{Error, Result};

// Kronrod-15 abscissae on [0, 1] side (symmetric +-), Gauss-7 nodes are the
// odd-indexed entries.
const XK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = WK[7] * f(c);
    let mut gauss = WG[3] * f(c);
    for i in 0..7 {
        let x = h * XK[i];
        let fsum = f(c - x) + f(c + x);
        kron += WK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    (kron * h, (kron - gauss).abs() * h.abs())
}

/// Accept a panel once its error estimate clears the absolute tolerance or
/// hits the relative floor where `|G7 - K15|` is pure roundoff.
fn accepted(val: f64, err: f64, tol: f64) -> bool {
    err <= tol || err <= 32.0 * f64::EPSILON * val.abs()
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    worst: &mut f64,
    acc: &mut KahanSum,
) {
    let (val, err) = gk15(f, a, b);
    if accepted(val, err, tol) || depth >= 44 {
        if !accepted(val, err, tol) {
            *worst = worst.max(err);
        }
        acc.add(val);
        return;
    }
    let c = 0.5 * (a + b);
    adapt(f, a, c, tol, depth + 1, worst, acc);
    adapt(f, c, b, tol, depth + 1, worst, acc);
}

#[derive(Default)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Integrate `f` over `[a, b]` to absolute per-panel tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut worst = 0.0f64;
    let mut acc = KahanSum::default();
    adapt(&f, a, b, tol, 0, &mut worst, &mut acc);
    if worst > tol * 1e3 && worst > 1e-9 * acc.sum.abs() {
        return Err(Error::QuadratureError(worst));
    }
    Ok(acc.sum)
}

/// Integrate `f(s) ds` over `[lo, hi]` with `0 < lo < hi` by adaptive
/// quadrature in `u = log s`. This equalizes resolution across interval
/// endpoints that differ by many orders of magnitude, which is exactly the
/// `[1/n, n]` situation of the truncated measures.
pub fn integrate_log<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    assert!(lo > 0.0 && hi >= lo);
    integrate(
        |u| {
            let s = u.exp();
            f(s) * s
        },
        lo.ln(),
        hi.ln(),
        tol,
    )
}

/// Integrate `r0(s) s^e_low ds` over `(0, 1]` plus `ri(v) v^e_up dv` over
/// `(0, 1]` where the second piece is a half-line tail already rewritten in
/// `v = 1/s`. Both `r0` and `ri` must be continuous on `[0, 1]` including
/// the endpoint 0, and `e_low, e_up > -1`.
///
/// Each piece is flattened with the power substitution `x = w^(1/(1+e))`,
/// under which the `w`-powers cancel *exactly*:
/// `integral x^e r(x) dx = integral m r(w^m) dw` with `m = 1/(1+e)`. The
/// transformed integrand only ever evaluates `r` — even where `w^m`
/// underflows to zero, `r(0)` is well defined — so arbitrarily heavy tails
/// (whose mass lives beyond f64 range in `s`) are captured without
/// overflow.
pub fn integrate_split_powers<F0, F1>(
    r_low: F0,
    e_low: f64,
    r_up: F1,
    e_up: f64,
    tol: f64,
) -> Result<f64>
where
    F0: Fn(f64) -> f64,
    F1: Fn(f64) -> f64,
{
    assert!(e_low > -1.0 && e_up > -1.0, "non-integrable endpoint");
    let m0 = 1.0 / (1.0 + e_low);
    let lower = integrate(|w| m0 * r_low(w.powf(m0)), 0.0, 1.0, tol)?;
    let m1 = 1.0 / (1.0 + e_up);
    let upper = integrate(|w| m1 * r_up(w.powf(m1)), 0.0, 1.0, tol)?;
    Ok(lower + upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn sine_over_many_periods() {
        let v = integrate(f64::sin, 0.0, 5.0 * std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn endpoint_singularity_via_flattening() {
        // integral of s^(-1/2) over (0,1] is 2: e_low = -1/2, r = 1
        let v = integrate_split_powers(|_| 1.0, -0.5, |_| 0.0, 0.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn log_transform_matches_direct() {
        let direct = integrate(|s| 1.0 / (s * (1.0 + s)), 0.25, 4.0, 1e-12).unwrap();
        let logged = integrate_log(|s| 1.0 / (s * (1.0 + s)), 0.25, 4.0, 1e-12).unwrap();
        assert!((direct - logged).abs() < 1e-11);
    }

    #[test]
    fn half_line_beta_integrals() {
        // integral of s^(a-1) / (1+s)^2 over (0,inf) = B(a, 2-a) = (1-a) pi / sin(a pi)
        // lower piece: s^(a-1) (1+s)^-2; upper piece in v = 1/s:
        // integrand v^(1-a) (1+v)^-2
        for a in [0.3, 0.5, 0.9, 1.2, 1.7, 1.95] {
            let expect = (1.0 - a) * std::f64::consts::PI / (a * std::f64::consts::PI).sin();
            let v = integrate_split_powers(
                |s| (1.0 + s).powi(-2),
                a - 1.0,
                |v| (1.0 + v).powi(-2),
                1.0 - a,
                1e-12,
            )
            .unwrap();
            assert!((v - expect).abs() < 1e-10, "a={a}: {v} vs {expect}");
        }
    }

    #[test]
    fn half_line_heavy_tail() {
        // integral of s^(a-1)/(1+s)^3 over (0,inf) = B(a, 3-a) with a = 2.99:
        // the upper tail decays like s^(-1.01), so most of its mass sits
        // beyond f64 range in s; the flattened form still nails it.
        let a = 2.99f64;
        let expect = {
            let g = |x: f64| lgamma(x).exp();
            g(a) * g(3.0 - a) / 2.0
        };
        let v = integrate_split_powers(
            |s| (1.0 + s).powi(-3),
            a - 1.0,
            |v| (1.0 + v).powi(-3),
            2.0 - a,
            1e-12,
        )
        .unwrap();
        assert!((v - expect).abs() / expect < 1e-10, "{v} vs {expect}");
    }

    // Lanczos approximation, test-only.
    fn lgamma(x: f64) -> f64 {
        const G: f64 = 7.0;
        const COEF: [f64; 9] = [
            0.99999999999980993,
            676.5203681218851,
            -1259.1392167224028,
            771.32342877765313,
            -176.61502916214059,
            12.507343278686905,
            -0.13857109526572012,
            9.9843695780195716e-6,
            1.5056327351493116e-7,
        ];
        if x < 0.5 {
            let pi = std::f64::consts::PI;
            (pi / (pi * x).sin()).ln() - lgamma(1.0 - x)
        } else {
            let x = x - 1.0;
            let mut a = COEF[0];
            let t = x + G + 0.5;
            for (i, &c) in COEF.iter().enumerate().skip(1) {
                a += c / (x + i as f64);
            }
            0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
        }
    }
}
