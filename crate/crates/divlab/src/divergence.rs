//! The relative modular spectral-overlap data and the direct (spectral)
//! evaluation of standard f-divergences.
//!
//! For density operators with spectral decompositions
//! `D_rho = sum_a a P_a` and `D_sigma = sum_b b Q_b`, the relative modular
//! operator acts as left multiplication by `D_rho` composed with right
//! multiplication by the generalized inverse of `D_sigma`; its joint
//! spectral data is the set of triples `(a, b, w)` with `w = Tr(P_a Q_b)`.
//! The standard f-divergence is then
//!
//! ```text
//! S_f(rho || sigma) = sum_ab  b f(a/b) w_ab
//!                   + f(0+)   sigma(1 - supp rho)
//!                   + f'(inf) rho(1 - supp sigma)
//! ```
//!
//! with the conventions `(+inf) * 0 = 0`, `(+inf) * c = +inf` for `c > 0`.
//! The result always lies in `(-inf, +inf]`.

use crate::ext::ExtReal;
use crate::fclass::ConvexFunctionSpec;
use crate::states::{ClassicalDistribution, PositiveFunctional};
use crate::{tol, Error, Result};

/// Joint spectral-overlap data of the relative modular operator, plus the
/// two off-support masses that feed the boundary terms.
#[derive(Debug, Clone)]
pub struct ModularSpectrum {
    /// `(a_i, b_j, w_ij)` over strictly positive eigenvalues of both
    /// operators; weights below 1e-14 are dropped as orthogonality noise.
    pub pairs: Vec<(f64, f64, f64)>,
    /// `sigma(1 - supp rho)`
    pub sigma_off_mass: f64,
    /// `rho(1 - supp sigma)`
    pub rho_off_mass: f64,
    /// `max(1, Tr rho, Tr sigma)`-relative threshold below which an
    /// off-mass counts as exactly zero.
    mass_floor: f64,
}

impl ModularSpectrum {
    /// Does the sigma off-mass count as strictly positive?
    pub fn sigma_off_positive(&self) -> bool {
        self.sigma_off_mass > self.mass_floor
    }

    pub fn rho_off_positive(&self) -> bool {
        self.rho_off_mass > self.mass_floor
    }
}

/// Compute the spectral-overlap data of `Delta_{rho,sigma}`.
///
/// Only eigenvalues above each operator's support cutoff are kept. The
/// weight of a pair `(i, j)` is the squared absolute overlap of the
/// eigenvector columns; summed over degenerate eigenvalues this is exactly
/// `Tr(P_a Q_b)`.
pub fn relative_modular_spectrum(
    rho: &PositiveFunctional,
    sigma: &PositiveFunctional,
) -> Result<ModularSpectrum> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionError(rho.dim(), sigma.dim()));
    }
    let rpos = rho.positive_spectrum();
    let spos = sigma.positive_spectrum();
    let ru = &rho.eigen().eigenvectors;
    let su = &sigma.eigen().eigenvectors;

    let mut pairs = Vec::with_capacity(rpos.len() * spos.len());
    let mut rho_on_ssupport = 0.0;
    let mut sigma_on_rsupport = 0.0;
    for &(i, a) in &rpos {
        for &(j, b) in &spos {
            let w = ru.column(i).dotc(&su.column(j)).norm_sqr();
            rho_on_ssupport += a * w;
            sigma_on_rsupport += b * w;
            if w >= tol::OVERLAP_DROP {
                pairs.push((a, b, w));
            }
        }
    }
    let sigma_off_mass = (sigma.trace() - sigma_on_rsupport).max(0.0);
    let rho_off_mass = (rho.trace() - rho_on_ssupport).max(0.0);
    let mass_floor = tol::OFF_MASS * rho.trace().max(sigma.trace()).max(1.0);
    Ok(ModularSpectrum {
        pairs,
        sigma_off_mass,
        rho_off_mass,
        mass_floor,
    })
}

/// The standard f-divergence `S_f(rho || sigma)`, evaluated directly on the
/// spectral-overlap data.
///
/// `+inf` can only arise from an infinite boundary value multiplying a
/// strictly positive off-mass; if the finite double sum itself overflows,
/// that is a numerical failure and reported as [`Error::Overflow`].
pub fn standard_f_divergence(
    f: &ConvexFunctionSpec,
    rho: &PositiveFunctional,
    sigma: &PositiveFunctional,
) -> Result<ExtReal> {
    let spec = relative_modular_spectrum(rho, sigma)?;
    standard_f_divergence_on(f, &spec)
}

/// Same, on precomputed spectral data.
pub fn standard_f_divergence_on(
    f: &ConvexFunctionSpec,
    spec: &ModularSpectrum,
) -> Result<ExtReal> {
    let mut sum = 0.0f64;
    for &(a, b, w) in &spec.pairs {
        sum += w * f.weighted_eval(a, b);
    }
    if !sum.is_finite() {
        return Err(Error::Overflow);
    }
    let sigma_off = if spec.sigma_off_positive() {
        spec.sigma_off_mass
    } else {
        0.0
    };
    let rho_off = if spec.rho_off_positive() {
        spec.rho_off_mass
    } else {
        0.0
    };
    let total = ExtReal::Finite(sum)
        + f.f_at_zero_plus.mul_mass(sigma_off)
        + f.fprime_at_infinity.mul_mass(rho_off);
    Ok(total)
}

/// Classical f-divergence of two weight vectors, with the same support
/// conventions applied coordinatewise: `psi_k f(phi_k/psi_k)` when both are
/// positive, `f(0+) psi_k` when `phi_k = 0`, `f'(inf) phi_k` when
/// `psi_k = 0`, and `0` when both vanish.
pub fn classical_f_divergence(
    f: &ConvexFunctionSpec,
    phi: &ClassicalDistribution,
    psi: &ClassicalDistribution,
) -> Result<ExtReal> {
    if phi.len() != psi.len() {
        return Err(Error::LengthMismatch(phi.len(), psi.len()));
    }
    let mut out = ExtReal::Finite(0.0);
    let mut finite_sum = 0.0f64;
    for (&p, &q) in phi.weights().iter().zip(psi.weights()) {
        if p > 0.0 && q > 0.0 {
            finite_sum += f.weighted_eval(p, q);
        } else if p <= 0.0 && q > 0.0 {
            out = out + f.f_at_zero_plus.mul_mass(q);
        } else if p > 0.0 {
            out = out + f.fprime_at_infinity.mul_mass(p);
        }
    }
    if !finite_sum.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(out + ExtReal::Finite(finite_sum))
}

/// Relative entropy `D(rho || sigma) = S_f(rho || sigma)` with
/// `f(t) = t log t`; equals `Tr D_rho (log D_rho - log D_sigma)` when the
/// support of rho sits inside the support of sigma, `+inf` otherwise.
pub fn relative_entropy(
    rho: &PositiveFunctional,
    sigma: &PositiveFunctional,
) -> Result<ExtReal> {
    let f = crate::fclass::catalog_lookup("t_log_t", None)?;
    standard_f_divergence(&f, rho, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fclass::{catalog_names, parse_catalog_name, transpose};
    use crate::spectral::HermitianOperator;
    use crate::states::make_functional;

    fn diag(vals: &[f64]) -> PositiveFunctional {
        make_functional(&HermitianOperator::from_diagonal(vals)).unwrap()
    }

    fn plus_state() -> PositiveFunctional {
        make_functional(&HermitianOperator::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap()).unwrap()
    }

    #[test]
    fn spectrum_of_commuting_diagonal_pair() {
        let rho = diag(&[0.5, 0.5]);
        let sigma = diag(&[0.75, 0.25]);
        let spec = relative_modular_spectrum(&rho, &sigma).unwrap();
        assert_eq!(spec.pairs.len(), 2);
        let mut bs: Vec<f64> = spec.pairs.iter().map(|p| p.1).collect();
        bs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((bs[0] - 0.25).abs() < 1e-12 && (bs[1] - 0.75).abs() < 1e-12);
        for &(a, _, w) in &spec.pairs {
            assert!((a - 0.5).abs() < 1e-12);
            assert!((w - 1.0).abs() < 1e-12);
        }
        assert!(spec.sigma_off_mass < 1e-12);
        assert!(spec.rho_off_mass < 1e-12);
    }

    #[test]
    fn spectrum_of_plus_state_against_diagonal() {
        let rho = plus_state();
        let sigma = diag(&[0.75, 0.25]);
        let spec = relative_modular_spectrum(&rho, &sigma).unwrap();
        assert_eq!(spec.pairs.len(), 2);
        for &(a, _, w) in &spec.pairs {
            assert!((a - 1.0).abs() < 1e-12);
            assert!((w - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_of_orthogonal_supports() {
        let rho = diag(&[1.0, 0.0]);
        let sigma = diag(&[0.0, 1.0]);
        let spec = relative_modular_spectrum(&rho, &sigma).unwrap();
        assert!(spec.pairs.is_empty());
        assert!((spec.sigma_off_mass - 1.0).abs() < 1e-12);
        assert!((spec.rho_off_mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_mass_bookkeeping() {
        // sum_ij b_j w_ij + sigma_off = Tr sigma, and the rho analogue
        let rho = plus_state();
        let sigma = diag(&[0.7, 0.0]);
        let spec = relative_modular_spectrum(&rho, &sigma).unwrap();
        let b_mass: f64 = spec.pairs.iter().map(|&(_, b, w)| b * w).sum();
        let a_mass: f64 = spec.pairs.iter().map(|&(a, _, w)| a * w).sum();
        assert!((b_mass + spec.sigma_off_mass - sigma.trace()).abs() < 1e-10);
        assert!((a_mass + spec.rho_off_mass - rho.trace()).abs() < 1e-10);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let rho = diag(&[1.0]);
        let sigma = diag(&[0.5, 0.5]);
        assert!(matches!(
            relative_modular_spectrum(&rho, &sigma),
            Err(Error::DimensionError(_, _))
        ));
    }

    #[test]
    fn kl_of_commuting_pair() {
        let f = parse_catalog_name("t_log_t").unwrap();
        let rho = diag(&[0.5, 0.5]);
        let sigma = diag(&[0.75, 0.25]);
        let v = standard_f_divergence(&f, &rho, &sigma).unwrap();
        // 0.5 ln(4/3), by hand
        let want = 0.5 * (4.0f64 / 3.0).ln();
        assert!(v.approx_eq(ExtReal::Finite(want), 1e-12), "{v}");
    }

    #[test]
    fn umegaki_value_for_plus_state() {
        // Tr rho(log rho - log sigma) for pure rho = |+><+|:
        // -<+|log sigma|+> = -(ln .75 + ln .25)/2
        let f = parse_catalog_name("t_log_t").unwrap();
        let rho = plus_state();
        let sigma = diag(&[0.75, 0.25]);
        let v = standard_f_divergence(&f, &rho, &sigma).unwrap();
        let want = -0.5 * (0.75f64.ln() + 0.25f64.ln());
        assert!(v.approx_eq(ExtReal::Finite(want), 1e-10), "{v} vs {want}");
        assert!((want - 0.836988).abs() < 1e-6);
    }

    #[test]
    fn identical_arguments_give_f_of_one_times_trace() {
        for name in catalog_names() {
            let f = parse_catalog_name(name).unwrap();
            let sigma = diag(&[0.3, 0.45]).scale(1.7).unwrap();
            let v = standard_f_divergence(&f, &sigma, &sigma).unwrap();
            let want = f.value_at_one() * sigma.trace();
            assert!(v.approx_eq(ExtReal::Finite(want), 1e-10), "{name}");
        }
    }

    #[test]
    fn support_violation_gives_plus_infinity() {
        let f = parse_catalog_name("t_log_t").unwrap();
        let rho = diag(&[1.0, 0.0]);
        let sigma = diag(&[0.0, 1.0]);
        let v = standard_f_divergence(&f, &rho, &sigma).unwrap();
        assert_eq!(v, ExtReal::PosInf);
    }

    #[test]
    fn zero_rho_hits_the_f_zero_boundary() {
        // S_f(0 || sigma) = f(0+) sigma(1)
        let rho = diag(&[0.0, 0.0]);
        let sigma = diag(&[0.6, 0.4]);
        let hel = parse_catalog_name("hellinger").unwrap();
        let v = standard_f_divergence(&hel, &rho, &sigma).unwrap();
        assert!(v.approx_eq(ExtReal::Finite(1.0), 1e-12));
        let nl = parse_catalog_name("neg_log").unwrap();
        assert_eq!(standard_f_divergence(&nl, &rho, &sigma).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn zero_sigma_hits_the_fprime_boundary() {
        // S_f(rho || 0) = f'(inf) rho(1)
        let rho = diag(&[0.6, 0.4]);
        let sigma = diag(&[0.0, 0.0]);
        let hel = parse_catalog_name("hellinger").unwrap();
        let v = standard_f_divergence(&hel, &rho, &sigma).unwrap();
        assert!(v.approx_eq(ExtReal::Finite(1.0), 1e-12));
    }

    #[test]
    fn classical_kl_by_hand() {
        let f = parse_catalog_name("t_log_t").unwrap();
        let phi = ClassicalDistribution::new(vec![0.5, 0.5]).unwrap();
        let psi = ClassicalDistribution::new(vec![0.75, 0.25]).unwrap();
        let v = classical_f_divergence(&f, &phi, &psi).unwrap();
        let want = 0.5 * (0.5f64 / 0.75).ln() + 0.5 * (0.5f64 / 0.25).ln();
        assert!(v.approx_eq(ExtReal::Finite(want), 1e-12));
        assert!((want - 0.143841).abs() < 1e-6);
    }

    #[test]
    fn classical_identical_gives_zero_for_neg_log() {
        let f = parse_catalog_name("neg_log").unwrap();
        let phi = ClassicalDistribution::new(vec![0.2, 0.8]).unwrap();
        let v = classical_f_divergence(&f, &phi, &phi).unwrap();
        assert!(v.approx_eq(ExtReal::Finite(0.0), 1e-12));
    }

    #[test]
    fn classical_disjoint_supports() {
        let f = parse_catalog_name("t_log_t").unwrap();
        let phi = ClassicalDistribution::new(vec![1.0, 0.0]).unwrap();
        let psi = ClassicalDistribution::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(classical_f_divergence(&f, &phi, &psi).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn relative_entropy_examples() {
        let sigma = diag(&[0.75, 0.25]);
        assert!(relative_entropy(&sigma, &sigma)
            .unwrap()
            .approx_eq(ExtReal::Finite(0.0), 1e-12));

        let rho = diag(&[0.5, 0.5]);
        let want = 0.5 * (4.0f64 / 3.0).ln();
        assert!(relative_entropy(&rho, &sigma)
            .unwrap()
            .approx_eq(ExtReal::Finite(want), 1e-12));

        let sing = diag(&[0.5, 0.0]);
        assert_eq!(relative_entropy(&rho, &sing).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn transpose_symmetry_including_extended_branches() {
        let cases = vec![
            (diag(&[0.5, 0.5]), diag(&[0.75, 0.25])),
            (plus_state(), diag(&[0.75, 0.25])),
            (diag(&[1.0, 0.0]), diag(&[0.0, 1.0])),
            (diag(&[0.5, 0.5]), diag(&[0.5, 0.0])),
            (diag(&[0.3, 0.0]), diag(&[0.8, 0.2])),
        ];
        for name in catalog_names() {
            let f = parse_catalog_name(name).unwrap();
            let ft = transpose(&f);
            for (rho, sigma) in &cases {
                let lhs = standard_f_divergence(&f, rho, sigma).unwrap();
                let rhs = standard_f_divergence(&ft, sigma, rho).unwrap();
                assert!(
                    lhs.approx_eq(rhs, 1e-10),
                    "{name}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn affine_rule() {
        // S_(a+bt) = a Tr sigma + b Tr rho
        let f = ConvexFunctionSpec::new(
            "affine",
            |t: f64| 2.0 + 3.0 * (t - 1.0),
            ExtReal::Finite(-1.0),
            ExtReal::Finite(3.0),
            None,
        );
        let rho = plus_state().scale(0.9).unwrap();
        let sigma = diag(&[0.75, 0.25]).scale(1.4).unwrap();
        let v = standard_f_divergence(&f, &rho, &sigma).unwrap();
        let want = -1.0 * sigma.trace() + 3.0 * rho.trace();
        assert!(v.approx_eq(ExtReal::Finite(want), 1e-12), "{v} vs {want}");
    }

    #[test]
    fn homogeneity_in_both_arguments() {
        let f = parse_catalog_name("t_log_t").unwrap();
        let rho = plus_state();
        let sigma = diag(&[0.75, 0.25]);
        let base = standard_f_divergence(&f, &rho, &sigma).unwrap();
        for lambda in [0.0, 0.5, 2.0] {
            let lr = rho.scale(lambda).unwrap();
            let ls = sigma.scale(lambda).unwrap();
            let v = standard_f_divergence(&f, &lr, &ls).unwrap();
            assert!(v.approx_eq(base.scale(lambda), 1e-12), "lambda={lambda}");
        }
    }

    #[test]
    fn additivity_on_direct_sums() {
        use crate::states::direct_sum;
        let f = parse_catalog_name("hellinger").unwrap();
        let (r1, s1) = (diag(&[0.5, 0.5]), diag(&[0.75, 0.25]));
        let (r2, s2) = (plus_state(), diag(&[0.9, 0.1]));
        let joint = standard_f_divergence(&f, &direct_sum(&r1, &r2), &direct_sum(&s1, &s2))
            .unwrap();
        let split = standard_f_divergence(&f, &r1, &s1).unwrap()
            + standard_f_divergence(&f, &r2, &s2).unwrap();
        assert!(joint.approx_eq(split, 1e-10));
    }

    #[test]
    fn commuting_pairs_match_classical() {
        for name in catalog_names() {
            let f = parse_catalog_name(name).unwrap();
            let rho = diag(&[0.5, 0.3, 0.2]);
            let sigma = diag(&[0.2, 0.5, 0.3]);
            let quantum = standard_f_divergence(&f, &rho, &sigma).unwrap();
            let classical = classical_f_divergence(
                &f,
                &ClassicalDistribution::new(vec![0.5, 0.3, 0.2]).unwrap(),
                &ClassicalDistribution::new(vec![0.2, 0.5, 0.3]).unwrap(),
            )
            .unwrap();
            assert!(quantum.approx_eq(classical, 1e-12), "{name}");
        }
    }
}
