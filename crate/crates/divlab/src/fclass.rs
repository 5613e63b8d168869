//! Operator convex functions on `(0, +inf)`.
//!
//! Each function carries a direct evaluator, its boundary values
//! `f(0+)` and `f'(+inf)` in the extended reals, and (for the built-in
//! catalog) an integral representation
//!
//! ```text
//! f(t) = a + b(t-1) + c(t-1)^2 + d (t-1)^2/t + integral (t-1)^2/(t+s) dmu(s)
//! ```
//!
//! with `mu` a positive measure on `(0, +inf)` subject to
//! `integral 1/(1+s) dmu(s) < inf`. The representation is never trusted on
//! faith: [`validate_representation`] reconstructs the evaluator from it by
//! adaptive quadrature, and the catalog is gated on that reconstruction
//! agreeing to 1e-8.
//!
//! Truncating the measure to `[1/n, n]` produces the function `f_n` whose
//! boundary values are finite; the associated measure `nu_n` drives the
//! variational evaluation. Both follow the decomposition
//! `f_n(t) = f_n(0+) + f_n'(+inf) t - h_n(t)` with
//! `h_n(t) = integral t(1+s)/(t+s) dnu_n(s)`.

use crate::ext::ExtReal;
use crate::{quad, tol, Error, Result};
use std::sync::Arc;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type WeightedFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Density part of the measure `mu`, carrying the integrability metadata
/// (endpoint exponents) the half-line quadrature needs: `density(s) ~
/// s^(exp at zero)` as `s -> 0` and `~ s^(exp at inf)` as `s -> +inf`.
///
/// Every catalog density is of the exact form `C s^g / (1+s)^d`
/// ([`MuDensity::power_ratio`]), a family closed under the transpose
/// pushforward; for that form the endpoint powers are peeled off
/// analytically, so even tails whose mass lives beyond f64 range in `s`
/// (exponents close to -1) integrate to full precision. Arbitrary
/// evaluators are admitted through [`MuDensity::custom`] and handled with a
/// clamped change of variables; they are accurate for moderate exponents.
#[derive(Clone)]
pub enum MuDensity {
    PowerRatio {
        coef: f64,
        pow_num: f64,
        pow_den: f64,
    },
    Custom {
        eval: RealFn,
        exp_at_zero: f64,
        exp_at_inf: f64,
    },
}

impl MuDensity {
    /// `C s^pow_num / (1+s)^pow_den`.
    pub fn power_ratio(coef: f64, pow_num: f64, pow_den: f64) -> Self {
        MuDensity::PowerRatio {
            coef,
            pow_num,
            pow_den,
        }
    }

    pub fn custom<F: Fn(f64) -> f64 + Send + Sync + 'static>(
        eval: F,
        exp_at_zero: f64,
        exp_at_inf: f64,
    ) -> Self {
        MuDensity::Custom {
            eval: Arc::new(eval),
            exp_at_zero,
            exp_at_inf,
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            MuDensity::PowerRatio {
                coef,
                pow_num,
                pow_den,
            } => coef * s.powf(*pow_num) * (1.0 + s).powf(-pow_den),
            MuDensity::Custom { eval, .. } => eval(s),
        }
    }

    pub fn exp_at_zero(&self) -> f64 {
        match self {
            MuDensity::PowerRatio { pow_num, .. } => *pow_num,
            MuDensity::Custom { exp_at_zero, .. } => *exp_at_zero,
        }
    }

    pub fn exp_at_inf(&self) -> f64 {
        match self {
            MuDensity::PowerRatio {
                pow_num, pow_den, ..
            } => pow_num - pow_den,
            MuDensity::Custom { exp_at_inf, .. } => *exp_at_inf,
        }
    }

    /// The density with its leading power at 0 peeled off:
    /// `density(s) = s^exp_at_zero * reduced(s)` with `reduced` continuous
    /// on `[0, 1]`.
    fn reduced_low(&self) -> RealFn {
        match self {
            MuDensity::PowerRatio { coef, pow_den, .. } => {
                let (c, d) = (*coef, *pow_den);
                Arc::new(move |s: f64| c * (1.0 + s).powf(-d))
            }
            MuDensity::Custom { eval, exp_at_zero, .. } => {
                let (eval, p0) = (eval.clone(), *exp_at_zero);
                Arc::new(move |s: f64| {
                    let s = s.max(1e-12);
                    eval(s) * s.powf(-p0)
                })
            }
        }
    }

    /// The reflected density with its leading power peeled off:
    /// `density(1/v) = v^(-exp_at_inf) * reduced(v)` with `reduced`
    /// continuous on `[0, 1]`.
    fn reduced_high(&self) -> RealFn {
        match self {
            MuDensity::PowerRatio { coef, pow_den, .. } => {
                let (c, d) = (*coef, *pow_den);
                Arc::new(move |v: f64| c * (1.0 + v).powf(-d))
            }
            MuDensity::Custom { eval, exp_at_inf, .. } => {
                let (eval, pi) = (eval.clone(), *exp_at_inf);
                Arc::new(move |v: f64| {
                    let v = v.max(1e-12);
                    eval(1.0 / v) * v.powf(pi)
                })
            }
        }
    }

    /// Transpose pushforward: a density `g(s) ds` becomes `g(1/s)/s ds`.
    fn transposed(&self) -> MuDensity {
        match self {
            MuDensity::PowerRatio {
                coef,
                pow_num,
                pow_den,
            } => MuDensity::PowerRatio {
                coef: *coef,
                pow_num: pow_den - pow_num - 1.0,
                pow_den: *pow_den,
            },
            MuDensity::Custom {
                eval,
                exp_at_zero,
                exp_at_inf,
            } => {
                let inner = eval.clone();
                MuDensity::Custom {
                    eval: Arc::new(move |s: f64| inner(1.0 / s) / s),
                    exp_at_zero: -exp_at_inf - 1.0,
                    exp_at_inf: -exp_at_zero - 1.0,
                }
            }
        }
    }

    /// `integral kernel(s) density(s) ds` over `(0, +inf)`.
    ///
    /// The kernel is given in peeled form on both ends:
    /// `kernel(s) = s^(-k0_pow) k0(s)` near 0 with `k0` continuous on
    /// `[0, 1]`, and `kernel(1/v) = v^ki_pow ki(v)` with `ki` continuous on
    /// `[0, 1]`.
    fn integrate_kernel<K0, K1>(
        &self,
        k0_pow: f64,
        k0: K0,
        ki_pow: f64,
        ki: K1,
        tol: f64,
    ) -> Result<f64>
    where
        K0: Fn(f64) -> f64,
        K1: Fn(f64) -> f64,
    {
        let e_low = self.exp_at_zero() - k0_pow;
        let e_up = ki_pow - self.exp_at_inf() - 2.0;
        if e_low <= -1.0 || e_up <= -1.0 {
            return Err(Error::DomainError(
                "kernel-density product is not integrable".into(),
            ));
        }
        let r_low = self.reduced_low();
        let r_high = self.reduced_high();
        quad::integrate_split_powers(
            |s| r_low(s) * k0(s),
            e_low,
            |v| r_high(v) * ki(v),
            e_up,
            tol,
        )
    }
}

impl std::fmt::Debug for MuDensity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MuDensity::PowerRatio {
                coef,
                pow_num,
                pow_den,
            } => f
                .debug_struct("PowerRatio")
                .field("coef", coef)
                .field("pow_num", pow_num)
                .field("pow_den", pow_den)
                .finish(),
            MuDensity::Custom {
                exp_at_zero,
                exp_at_inf,
                ..
            } => f
                .debug_struct("Custom")
                .field("exp_at_zero", exp_at_zero)
                .field("exp_at_inf", exp_at_inf)
                .finish(),
        }
    }
}

/// The tuple `(a, b, c, d, mu)` with `mu` split into atoms and a density.
#[derive(Clone, Debug, Default)]
pub struct IntegralRepresentation {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// `(location s > 0, mass > 0)`
    pub mu_atoms: Vec<(f64, f64)>,
    pub mu_density: Option<MuDensity>,
}

impl IntegralRepresentation {
    /// Check the structural invariants: nonnegative `c`, `d`, atom masses,
    /// and the integrability condition `integral 1/(1+s) dmu < inf`
    /// (numerically: the density exponents admit it and the integral
    /// evaluates finite).
    pub fn check(&self) -> Result<()> {
        if self.c < 0.0 || self.d < 0.0 {
            return Err(Error::DomainError("c and d must be nonnegative".into()));
        }
        if self.mu_atoms.iter().any(|&(s, m)| s <= 0.0 || m <= 0.0) {
            return Err(Error::DomainError(
                "mu atoms need location > 0 and mass > 0".into(),
            ));
        }
        let mut total = self
            .mu_atoms
            .iter()
            .map(|&(s, m)| m / (1.0 + s))
            .sum::<f64>();
        if let Some(dens) = &self.mu_density {
            if dens.exp_at_zero() <= -1.0 || dens.exp_at_inf() >= 0.0 {
                return Err(Error::DomainError(
                    "density exponents violate integrability of 1/(1+s) dmu".into(),
                ));
            }
            total += dens.integrate_kernel(
                0.0,
                |s| 1.0 / (1.0 + s),
                1.0,
                |v| 1.0 / (1.0 + v),
                tol::QUAD_PANEL,
            )?;
        }
        if !total.is_finite() {
            return Err(Error::DomainError(
                "integral of 1/(1+s) dmu is not finite".into(),
            ));
        }
        Ok(())
    }

    /// Reconstruct `f(t)` from the representation by quadrature.
    pub fn reconstruct(&self, t: f64) -> Result<f64> {
        let tm1sq = (t - 1.0) * (t - 1.0);
        let mut v = self.a + self.b * (t - 1.0) + self.c * tm1sq + self.d * tm1sq / t;
        for &(s, m) in &self.mu_atoms {
            v += m * tm1sq / (t + s);
        }
        if let Some(dens) = &self.mu_density {
            // kernel (t-1)^2/(t+s); reflected: (t-1)^2 v / (1+tv)
            v += dens.integrate_kernel(
                0.0,
                |s| tm1sq / (t + s),
                1.0,
                |w| tm1sq / (1.0 + t * w),
                tol::QUAD_PANEL,
            )?;
        }
        Ok(v)
    }

    /// `integral s^-1 dmu` over the closed window `[lo, hi]`; part of
    /// `f_n(0+)`.
    fn inv_moment_on(&self, lo: f64, hi: f64) -> Result<f64> {
        let mut v = self
            .mu_atoms
            .iter()
            .filter(|&&(s, _)| in_window(s, lo, hi))
            .map(|&(s, m)| m / s)
            .sum::<f64>();
        if let Some(dens) = &self.mu_density {
            v += quad::integrate_log(|s| dens.eval(s) / s, lo, hi, tol::QUAD_PANEL)?;
        }
        Ok(v)
    }

    /// `mu([lo, hi])`; part of `f_n'(+inf)`.
    fn mass_on(&self, lo: f64, hi: f64) -> Result<f64> {
        let mut v = self
            .mu_atoms
            .iter()
            .filter(|&&(s, _)| in_window(s, lo, hi))
            .map(|&(_, m)| m)
            .sum::<f64>();
        if let Some(dens) = &self.mu_density {
            v += quad::integrate_log(|s| dens.eval(s), lo, hi, tol::QUAD_PANEL)?;
        }
        Ok(v)
    }

    /// Boundary value `f(0+)` computed from the representation, when finite:
    /// `a - b + c + inf*d + integral s^-1 dmu`.
    pub fn boundary_at_zero(&self) -> Result<ExtReal> {
        if self.d > 0.0 {
            return Ok(ExtReal::PosInf);
        }
        if let Some(dens) = &self.mu_density {
            if dens.exp_at_zero() <= 0.0 {
                // s^-1 density non-integrable at 0
                return Ok(ExtReal::PosInf);
            }
            let v = dens.integrate_kernel(1.0, |_| 1.0, 1.0, |_| 1.0, tol::QUAD_PANEL)?;
            let atoms: f64 = self.mu_atoms.iter().map(|&(s, m)| m / s).sum();
            return Ok(ExtReal::Finite(self.a - self.b + self.c + v + atoms));
        }
        let atoms: f64 = self.mu_atoms.iter().map(|&(s, m)| m / s).sum();
        Ok(ExtReal::Finite(self.a - self.b + self.c + atoms))
    }

    /// Boundary value `f'(+inf)` from the representation:
    /// `b + inf*c + d + mu((0, inf))`.
    pub fn boundary_at_infinity(&self) -> Result<ExtReal> {
        if self.c > 0.0 {
            return Ok(ExtReal::PosInf);
        }
        if let Some(dens) = &self.mu_density {
            if dens.exp_at_inf() >= -1.0 {
                // mu has infinite total mass
                return Ok(ExtReal::PosInf);
            }
            let v = dens.integrate_kernel(0.0, |_| 1.0, 0.0, |_| 1.0, tol::QUAD_PANEL)?;
            let atoms: f64 = self.mu_atoms.iter().map(|&(_, m)| m).sum();
            return Ok(ExtReal::Finite(self.b + self.d + v + atoms));
        }
        let atoms: f64 = self.mu_atoms.iter().map(|&(_, m)| m).sum();
        Ok(ExtReal::Finite(self.b + self.d + atoms))
    }
}

/// Atoms exactly at the window edge are included (closed interval).
fn in_window(s: f64, lo: f64, hi: f64) -> bool {
    s >= lo * (1.0 - 1e-12) && s <= hi * (1.0 + 1e-12)
}

/// A convex function on `(0, +inf)` with boundary data and an optional
/// integral representation.
#[derive(Clone)]
pub struct ConvexFunctionSpec {
    pub name: String,
    eval: RealFn,
    /// Stable evaluation of `b * f(a/b)` for `a, b > 0`; catalog entries
    /// work in log space here so ratios around 1e12 do not overflow.
    weighted: Option<WeightedFn>,
    pub f_at_zero_plus: ExtReal,
    pub fprime_at_infinity: ExtReal,
    pub representation: Option<IntegralRepresentation>,
}

impl std::fmt::Debug for ConvexFunctionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConvexFunctionSpec")
            .field("name", &self.name)
            .field("f_at_zero_plus", &self.f_at_zero_plus)
            .field("fprime_at_infinity", &self.fprime_at_infinity)
            .finish()
    }
}

impl ConvexFunctionSpec {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(
        name: impl Into<String>,
        eval: F,
        f_at_zero_plus: ExtReal,
        fprime_at_infinity: ExtReal,
        representation: Option<IntegralRepresentation>,
    ) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            weighted: None,
            f_at_zero_plus,
            fprime_at_infinity,
            representation,
        }
    }

    fn with_weighted<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(mut self, w: F) -> Self {
        self.weighted = Some(Arc::new(w));
        self
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// `b * f(a/b)` for strictly positive `a`, `b`.
    pub fn weighted_eval(&self, a: f64, b: f64) -> f64 {
        debug_assert!(a > 0.0 && b > 0.0);
        match &self.weighted {
            Some(w) => w(a, b),
            None => b * self.eval(a / b),
        }
    }

    pub fn value_at_one(&self) -> f64 {
        self.eval(1.0)
    }

    /// The truncated function `f_n(t)`: the `c` and `d` kernels are damped
    /// to `n(t-1)^2/(t+n)` and `(t-1)^2/(t+1/n)`, and `mu` is restricted to
    /// the closed window `[1/n, n]`.
    pub fn eval_truncated(&self, n: u32, t: f64) -> Result<f64> {
        let rep = self.representation.as_ref().ok_or_else(|| {
            Error::DomainError(format!("{} has no integral representation", self.name))
        })?;
        let nf = n as f64;
        let (lo, hi) = (1.0 / nf, nf);
        let tm1sq = (t - 1.0) * (t - 1.0);
        let mut v = rep.a
            + rep.b * (t - 1.0)
            + rep.c * nf * tm1sq / (t + nf)
            + rep.d * tm1sq / (t + 1.0 / nf);
        for &(s, m) in &rep.mu_atoms {
            if in_window(s, lo, hi) {
                v += m * tm1sq / (t + s);
            }
        }
        if let Some(dens) = &rep.mu_density {
            v += quad::integrate_log(|s| tm1sq / (t + s) * dens.eval(s), lo, hi, tol::QUAD_PANEL)?;
        }
        Ok(v)
    }
}

/// Truncation data for level `n`: the finite boundary values of `f_n` and
/// the measure `nu_n` supported on `[1/n, n]`.
#[derive(Clone)]
pub struct TruncationData {
    pub n: u32,
    pub fn_at_zero_plus: f64,
    pub fn_prime_at_infinity: f64,
    /// `(location, mass)`; holds the `c(1+n)` atom at `n`, the `d(1+n)` atom
    /// at `1/n`, and transported `mu` atoms.
    pub nu_atoms: Vec<(f64, f64)>,
    nu_density: Option<RealFn>,
}

impl std::fmt::Debug for TruncationData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TruncationData")
            .field("n", &self.n)
            .field("fn_at_zero_plus", &self.fn_at_zero_plus)
            .field("fn_prime_at_infinity", &self.fn_prime_at_infinity)
            .field("nu_atoms", &self.nu_atoms)
            .finish()
    }
}

impl TruncationData {
    pub fn window(&self) -> (f64, f64) {
        (1.0 / self.n as f64, self.n as f64)
    }

    /// `integral g(s) dnu_n(s)` over the window: atom sum plus log-space
    /// adaptive quadrature of the density part.
    pub fn integrate_against<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        let (lo, hi) = self.window();
        let mut v = self.nu_atoms.iter().map(|&(s, m)| m * g(s)).sum::<f64>();
        if let Some(dens) = &self.nu_density {
            v += quad::integrate_log(|s| g(s) * dens(s), lo, hi, tol::QUAD_PANEL)?;
        }
        Ok(v)
    }

    /// `h_n(t) = integral t(1+s)/(t+s) dnu_n(s)`, operator monotone in `t`.
    pub fn h_n(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Err(Error::DomainError("h_n needs t > 0".into()));
        }
        self.integrate_against(|s| t * (1.0 + s) / (t + s))
    }
}

/// Build the truncation at level `n`:
///
/// ```text
/// f_n(0+)      = a - b + c + n d + integral_[1/n,n] s^-1 dmu
/// f_n'(+inf)   = b + n c + d + mu([1/n, n])
/// dnu_n        = c(1+n) delta_n + d(1+n) delta_(1/n) + (1+s)/s dmu on [1/n, n]
/// ```
pub fn truncate(f: &ConvexFunctionSpec, n: u32) -> Result<TruncationData> {
    assert!(n >= 1);
    let rep = f
        .representation
        .as_ref()
        .ok_or_else(|| Error::DomainError(format!("{} has no integral representation", f.name)))?;
    let nf = n as f64;
    let (lo, hi) = (1.0 / nf, nf);
    let fn0 = rep.a - rep.b + rep.c + nf * rep.d + rep.inv_moment_on(lo, hi)?;
    let fninf = rep.b + nf * rep.c + rep.d + rep.mass_on(lo, hi)?;

    let mut nu_atoms = Vec::new();
    if rep.c > 0.0 {
        nu_atoms.push((nf, rep.c * (1.0 + nf)));
    }
    if rep.d > 0.0 {
        nu_atoms.push((1.0 / nf, rep.d * (1.0 + nf)));
    }
    for &(s, m) in &rep.mu_atoms {
        if in_window(s, lo, hi) {
            nu_atoms.push((s, m * (1.0 + s) / s));
        }
    }
    let nu_density: Option<RealFn> = rep.mu_density.as_ref().map(|dens| {
        let dens = dens.clone();
        Arc::new(move |s: f64| (1.0 + s) / s * dens.eval(s)) as RealFn
    });

    Ok(TruncationData {
        n,
        fn_at_zero_plus: fn0,
        fn_prime_at_infinity: fninf,
        nu_atoms,
        nu_density,
    })
}

/// The transpose `f~(t) = t f(1/t)`.
///
/// Parameters map as `a~ = a`, `b~ = a - b`, `c~ = d`, `d~ = c`, and `mu~`
/// is the pushforward of `s dmu(1/s)`: an atom `(s, m)` lands at `(1/s,
/// m/s)` and a density `g(s) ds` becomes `g(1/s)/s ds`. Boundary values
/// swap. The result is certified against its own evaluator by
/// [`validate_representation`] in the tests, not taken on trust.
pub fn transpose(f: &ConvexFunctionSpec) -> ConvexFunctionSpec {
    let inner = f.eval.clone();
    let eval = move |t: f64| t * inner(1.0 / t);
    let rep = f.representation.as_ref().map(|rep| {
        let mu_atoms = rep
            .mu_atoms
            .iter()
            .map(|&(s, m)| (1.0 / s, m / s))
            .collect();
        let mu_density = rep.mu_density.as_ref().map(|dens| dens.transposed());
        IntegralRepresentation {
            a: rep.a,
            b: rep.a - rep.b,
            c: rep.d,
            d: rep.c,
            mu_atoms,
            mu_density,
        }
    });
    let mut out = ConvexFunctionSpec::new(
        format!("transpose({})", f.name),
        eval,
        f.fprime_at_infinity,
        f.f_at_zero_plus,
        rep,
    );
    if let Some(w) = &f.weighted {
        let w = w.clone();
        out = out.with_weighted(move |a, b| w(b, a));
    }
    out
}

/// Reconstruct the evaluator from the representation on a grid and return
/// the maximum absolute error. Boundary values are cross-checked against
/// the representation where both sides are finite; a finite/infinite
/// mismatch returns `+inf` so it can never pass a tolerance gate.
pub fn validate_representation(f: &ConvexFunctionSpec, grid: &[f64]) -> Result<f64> {
    let rep = f
        .representation
        .as_ref()
        .ok_or_else(|| Error::DomainError(format!("{} has no integral representation", f.name)))?;
    rep.check()?;
    let mut max_err = 0.0f64;
    for &t in grid {
        let rec = rep.reconstruct(t)?;
        max_err = max_err.max((rec - f.eval(t)).abs());
    }
    for (rec_side, declared) in [
        (rep.boundary_at_zero()?, f.f_at_zero_plus),
        (rep.boundary_at_infinity()?, f.fprime_at_infinity),
    ] {
        match (rec_side, declared) {
            (ExtReal::Finite(x), ExtReal::Finite(y)) => max_err = max_err.max((x - y).abs()),
            (a, b) if a == b => {}
            _ => return Ok(f64::INFINITY),
        }
    }
    Ok(max_err)
}

/// Log-spaced grid, endpoints included.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (llo + (lhi - llo) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Default validation grid: 200 log-spaced points in `[1e-4, 1e4]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-4, 1e4, 200)
}

const PI: f64 = std::f64::consts::PI;

/// Built-in catalog.
///
/// Accepted names: `neg_log`, `t_log_t`, `power` (with a parameter
/// `alpha` in `(0,1) u (1,2]`), `square_dev`, `square_dev_over_t`,
/// `hellinger`. CLI syntax `power:<alpha>` is handled by
/// [`parse_catalog_name`].
pub fn catalog_lookup(name: &str, param: Option<f64>) -> Result<ConvexFunctionSpec> {
    match name {
        "neg_log" => Ok(neg_log()),
        "t_log_t" => Ok(t_log_t()),
        "power" => {
            let alpha =
                param.ok_or_else(|| Error::UnsupportedFunction("power needs alpha".into()))?;
            power(alpha)
        }
        "square_dev" => Ok(square_dev()),
        "square_dev_over_t" => Ok(square_dev_over_t()),
        "hellinger" => Ok(hellinger()),
        other => Err(Error::UnsupportedFunction(other.into())),
    }
}

/// Parse a CLI-style catalog name, e.g. `"t_log_t"` or `"power:1.5"`.
pub fn parse_catalog_name(spec: &str) -> Result<ConvexFunctionSpec> {
    match spec.split_once(':') {
        Some((name, param)) => {
            let p: f64 = param
                .parse()
                .map_err(|_| Error::UnsupportedFunction(spec.into()))?;
            catalog_lookup(name, Some(p))
        }
        None => catalog_lookup(spec, None),
    }
}

/// All six catalog names, with a representative parameter for `power`.
pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "neg_log",
        "t_log_t",
        "power:0.5",
        "square_dev",
        "square_dev_over_t",
        "hellinger",
    ]
}

/// `f(t) = -log t`: `a = c = d = 0`, `b = -1`, density `(1+s)^-2`.
fn neg_log() -> ConvexFunctionSpec {
    let rep = IntegralRepresentation {
        a: 0.0,
        b: -1.0,
        c: 0.0,
        d: 0.0,
        mu_atoms: vec![],
        mu_density: Some(MuDensity::power_ratio(1.0, 0.0, 2.0)),
    };
    ConvexFunctionSpec::new(
        "neg_log",
        |t: f64| -t.ln(),
        ExtReal::PosInf,
        ExtReal::Finite(0.0),
        Some(rep),
    )
    .with_weighted(|a, b| b * (b.ln() - a.ln()))
}

/// `f(t) = t log t`: `b = 1`, density `s (1+s)^-2` (the transpose of
/// `neg_log`'s).
fn t_log_t() -> ConvexFunctionSpec {
    let rep = IntegralRepresentation {
        a: 0.0,
        b: 1.0,
        c: 0.0,
        d: 0.0,
        mu_atoms: vec![],
        mu_density: Some(MuDensity::power_ratio(1.0, 1.0, 2.0)),
    };
    ConvexFunctionSpec::new(
        "t_log_t",
        |t: f64| t * t.ln(),
        ExtReal::Finite(0.0),
        ExtReal::PosInf,
        Some(rep),
    )
    .with_weighted(|a, b| a * (a.ln() - b.ln()))
}

/// Powers with the sign convention that keeps them convex:
/// `f(t) = -t^alpha` for `alpha` in `(0,1)` and `f(t) = t^alpha` for
/// `alpha` in `(1,2]`.
///
/// For `alpha < 2` the measure density is the Cauchy-transform family
/// `|sin(alpha pi)|/pi * s^alpha / (1+s)^2`; its correctness is established
/// by the reconstruction gate, which must come in at 1e-8 or better before
/// the entry is usable. `alpha = 2` is the polynomial case
/// `t^2 = 1 + 2(t-1) + (t-1)^2`.
fn power(alpha: f64) -> Result<ConvexFunctionSpec> {
    if !(alpha > 0.0 && alpha <= 2.0) || alpha == 1.0 {
        return Err(Error::UnsupportedFunction(format!(
            "power alpha must lie in (0,1) u (1,2], got {alpha}"
        )));
    }
    let name = format!("power:{alpha}");
    if alpha == 2.0 {
        let rep = IntegralRepresentation {
            a: 1.0,
            b: 2.0,
            c: 1.0,
            d: 0.0,
            mu_atoms: vec![],
            mu_density: None,
        };
        return Ok(ConvexFunctionSpec::new(
            name,
            |t: f64| t * t,
            ExtReal::Finite(0.0),
            ExtReal::PosInf,
            Some(rep),
        )
        .with_weighted(|a, b| a * a / b));
    }
    let sign = if alpha < 1.0 { -1.0 } else { 1.0 };
    let coef = (alpha * PI).sin().abs() / PI;
    let rep = IntegralRepresentation {
        a: sign,
        b: sign * alpha,
        c: 0.0,
        d: 0.0,
        mu_atoms: vec![],
        mu_density: Some(MuDensity::power_ratio(coef, alpha, 2.0)),
    };
    let fprime = if alpha < 1.0 {
        ExtReal::Finite(0.0)
    } else {
        ExtReal::PosInf
    };
    Ok(ConvexFunctionSpec::new(
        name,
        move |t: f64| sign * t.powf(alpha),
        ExtReal::Finite(0.0),
        fprime,
        Some(rep),
    )
    .with_weighted(move |a, b| sign * (alpha * a.ln() + (1.0 - alpha) * b.ln()).exp()))
}

/// `f(t) = (t-1)^2`: pure `c` term.
fn square_dev() -> ConvexFunctionSpec {
    let rep = IntegralRepresentation {
        a: 0.0,
        b: 0.0,
        c: 1.0,
        d: 0.0,
        mu_atoms: vec![],
        mu_density: None,
    };
    ConvexFunctionSpec::new(
        "square_dev",
        |t: f64| (t - 1.0) * (t - 1.0),
        ExtReal::Finite(1.0),
        ExtReal::PosInf,
        Some(rep),
    )
    .with_weighted(|a, b| (a - b) * (a - b) / b)
}

/// `f(t) = (t-1)^2 / t`: pure `d` term.
fn square_dev_over_t() -> ConvexFunctionSpec {
    let rep = IntegralRepresentation {
        a: 0.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
        mu_atoms: vec![],
        mu_density: None,
    };
    ConvexFunctionSpec::new(
        "square_dev_over_t",
        |t: f64| (t - 1.0) * (t - 1.0) / t,
        ExtReal::PosInf,
        ExtReal::Finite(1.0),
        Some(rep),
    )
    .with_weighted(|a, b| (a - b) * (a - b) / a)
}

/// `f(t) = (1 - sqrt t)^2`: density `(2/pi) sqrt(s) / (1+s)^2`.
fn hellinger() -> ConvexFunctionSpec {
    let rep = IntegralRepresentation {
        a: 0.0,
        b: 0.0,
        c: 0.0,
        d: 0.0,
        mu_atoms: vec![],
        mu_density: Some(MuDensity::power_ratio(2.0 / PI, 0.5, 2.0)),
    };
    ConvexFunctionSpec::new(
        "hellinger",
        |t: f64| {
            let r = 1.0 - t.sqrt();
            r * r
        },
        ExtReal::Finite(1.0),
        ExtReal::Finite(1.0),
        Some(rep),
    )
    .with_weighted(|a, b| {
        let r = a.sqrt() - b.sqrt();
        r * r
    })
}
