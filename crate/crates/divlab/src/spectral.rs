//! Dense Hermitian eigen-machinery, spectral functions, supports, and
//! pinching. Every other module sits on top of this one.

use crate::{tol, Error, Result};
use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// A Hermitian operator on `C^d`.
///
/// Construction checks Hermiticity to 1e-12 (absolute, entrywise) and then
/// stores the exactly symmetrized form `(H + H*)/2`, so Hermiticity is an
/// invariant rather than a precondition downstream.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    mat: CMatrix,
}

impl HermitianOperator {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionError(mat.nrows(), mat.ncols()));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput);
        }
        let adj = mat.adjoint();
        let asym = (&mat - &adj).max_abs_entry();
        if asym > tol::HERMITIAN {
            return Err(Error::NotHermitian(asym));
        }
        let sym = (mat + adj).scale(0.5);
        Ok(Self { mat: sym })
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mat = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self { mat }
    }

    /// Real symmetric matrix given row-major.
    pub fn from_real(d: usize, rows: &[f64]) -> Result<Self> {
        assert_eq!(rows.len(), d * d);
        let mat = CMatrix::from_fn(d, d, |i, j| C64::new(rows[i * d + j], 0.0));
        Self::new(mat)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            mat: CMatrix::identity(d, d),
        }
    }

    pub fn zeros(d: usize) -> Self {
        Self {
            mat: CMatrix::zeros(d, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    /// `Tr(self * other)`, real for Hermitian arguments.
    pub fn trace_product(&self, other: &HermitianOperator) -> f64 {
        // Tr(AB) = sum_{ij} A_ij B_ji = sum_{ij} A_ij conj(B_ij) for Hermitian B
        self.mat
            .iter()
            .zip(other.mat.transpose().iter())
            .map(|(a, b)| (a * b).re)
            .sum()
    }

    pub fn add(&self, other: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            mat: &self.mat - &other.mat,
        }
    }

    pub fn scale(&self, lambda: f64) -> HermitianOperator {
        HermitianOperator {
            mat: self.mat.scale(lambda),
        }
    }

    /// Bypasses the Hermiticity check; for internal construction where the
    /// result is Hermitian by algebra (e.g. `V D V*` with real `D`). The
    /// matrix is still symmetrized to keep the invariant exact.
    pub(crate) fn from_symmetrized(mat: CMatrix) -> Self {
        let adj = mat.adjoint();
        Self {
            mat: (mat + adj).scale(0.5),
        }
    }
}

/// Eigendecomposition of a [`HermitianOperator`], eigenvalues ascending,
/// eigenvector columns orthonormal.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(g(lambda)) V*`.
    pub fn assemble<F: Fn(f64) -> f64>(&self, g: F) -> HermitianOperator {
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| g(l)).collect();
        self.assemble_from_values(&vals)
    }

    /// `V diag(vals) V*` with one value per eigenvalue, in order.
    pub fn assemble_from_values(&self, vals: &[f64]) -> HermitianOperator {
        let d = self.dim();
        assert_eq!(vals.len(), d);
        let gdiag = DVector::from_fn(d, |i, _| C64::new(vals[i], 0.0));
        let vd = &self.eigenvectors * CMatrix::from_diagonal(&gdiag);
        HermitianOperator::from_symmetrized(vd * self.eigenvectors.adjoint())
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }
}

/// Eigendecompose a Hermitian operator. Output is deterministic for
/// identical input: eigenvalues ascending, ties left in the order produced
/// by the (deterministic) solver.
pub fn eig_hermitian(h: &HermitianOperator) -> Result<EigenSystem> {
    let d = h.dim();
    if d == 0 {
        return Ok(EigenSystem {
            eigenvalues: DVector::zeros(0),
            eigenvectors: CMatrix::zeros(0, 0),
        });
    }
    let se = h.mat.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let eigenvalues = DVector::from_fn(d, |i, _| se.eigenvalues[order[i]]);
    let mut eigenvectors = CMatrix::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &se.eigenvectors.column(src));
    }
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// How `apply_spectral_function` treats eigenvalues inside the support
/// tolerance band around zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroPolicy {
    /// Map them to 0. With `g = 1/t` this yields the generalized inverse;
    /// with `g = t^p` the convention `h^0 = support projection`.
    MapZeroToZero,
    /// Apply `g` at the actual eigenvalue (must be finite there).
    ApplyAtZero,
    /// Any eigenvalue in the zero band is an error.
    ErrorOnZero,
}

/// `g(H) = V diag(g(lambda)) V*` with the given zero policy. Zero detection
/// uses the support tolerance: `|lambda| <= 1e-10 * max|lambda|`.
pub fn apply_spectral_function<F: Fn(f64) -> f64>(
    h: &HermitianOperator,
    g: F,
    zero_policy: ZeroPolicy,
) -> Result<HermitianOperator> {
    let es = eig_hermitian(h)?;
    apply_spectral_function_eig(&es, g, zero_policy)
}

/// Same as [`apply_spectral_function`] but reuses an existing decomposition.
pub fn apply_spectral_function_eig<F: Fn(f64) -> f64>(
    es: &EigenSystem,
    g: F,
    zero_policy: ZeroPolicy,
) -> Result<HermitianOperator> {
    let cutoff = tol::SUPPORT_REL * es.max_abs_eigenvalue();
    let d = es.dim();
    let mut gvals = vec![0.0; d];
    for i in 0..d {
        let lam = es.eigenvalues[i];
        if lam.abs() <= cutoff {
            match zero_policy {
                ZeroPolicy::MapZeroToZero => {
                    gvals[i] = 0.0;
                    continue;
                }
                ZeroPolicy::ErrorOnZero => {
                    return Err(Error::DomainError(format!(
                        "eigenvalue {lam:e} inside the zero band"
                    )));
                }
                ZeroPolicy::ApplyAtZero => {}
            }
        }
        let v = g(lam);
        if !v.is_finite() {
            return Err(Error::DomainError(format!(
                "g({lam:e}) is not finite"
            )));
        }
        gvals[i] = v;
    }
    Ok(es.assemble_from_values(&gvals))
}

/// Orthogonal projection onto the span of eigenvectors with eigenvalue above
/// the support cutoff. Input must be PSD up to `1e-10 * ||H||_F`.
pub fn support_projection(h: &HermitianOperator) -> Result<HermitianOperator> {
    let es = eig_hermitian(h)?;
    let psd_tol = tol::PSD_REL * h.frobenius_norm();
    if let Some(&min) = es
        .eigenvalues
        .iter()
        .min_by(|a, b| a.partial_cmp(b).unwrap())
    {
        if min < -psd_tol {
            return Err(Error::NotPositive(min));
        }
    }
    let cutoff = tol::SUPPORT_REL * es.max_abs_eigenvalue();
    Ok(es.assemble(|lam| if lam > cutoff { 1.0 } else { 0.0 }))
}

/// Rank of the support of a PSD operator.
pub fn support_rank(h: &HermitianOperator) -> Result<usize> {
    let es = eig_hermitian(h)?;
    let cutoff = tol::SUPPORT_REL * es.max_abs_eigenvalue();
    Ok(es.eigenvalues.iter().filter(|&&l| l > cutoff).count())
}

/// Validate that `e` is an orthogonal projection: Hermitian with
/// `e^2 = e` to within `eps`.
pub fn check_projection(e: &HermitianOperator, eps: f64) -> Result<()> {
    let e2 = &e.mat * &e.mat;
    let res = (&e2 - &e.mat).max_abs_entry();
    if res > eps {
        return Err(Error::InvalidProjection(res));
    }
    Ok(())
}

/// The pinching `H -> sum_k e_k H e_k` for an orthogonal resolution
/// `{e_k}` of the identity. Unital, completely positive, trace preserving.
pub fn pinch(h: &HermitianOperator, projections: &[HermitianOperator]) -> Result<HermitianOperator> {
    let d = h.dim();
    let mut sum = CMatrix::zeros(d, d);
    for e in projections {
        if e.dim() != d {
            return Err(Error::DimensionError(e.dim(), d));
        }
        check_projection(e, 1e-10).map_err(|_| {
            Error::InvalidPartition(f64::NAN)
        })?;
        sum += &e.mat;
    }
    let res = (&sum - CMatrix::identity(d, d)).max_abs_entry();
    if res > 1e-10 {
        return Err(Error::InvalidPartition(res));
    }
    let mut out = CMatrix::zeros(d, d);
    for e in projections {
        out += &e.mat * &h.mat * &e.mat;
    }
    Ok(HermitianOperator::from_symmetrized(out))
}

/// Fréchet derivative of a spectral function at `h` in direction `k`,
/// via the divided-difference (Daleckii–Krein) form
/// `Df(H)[K] = V (Phi .* (V* K V)) V*` with
/// `Phi_ij = (f(l_i) - f(l_j)) / (l_i - l_j)`, `f'(l_i)` on the diagonal.
pub fn frechet_derivative<F, G>(
    es: &EigenSystem,
    f: F,
    fprime: G,
    k: &HermitianOperator,
) -> HermitianOperator
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let d = es.dim();
    let kt = es.eigenvectors.adjoint() * &k.mat * &es.eigenvectors;
    let mut out = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let (li, lj) = (es.eigenvalues[i], es.eigenvalues[j]);
            let phi = if (li - lj).abs() > 1e-10 * (1.0 + li.abs().max(lj.abs())) {
                (f(li) - f(lj)) / (li - lj)
            } else {
                fprime(0.5 * (li + lj))
            };
            out[(i, j)] = kt[(i, j)].scale(phi);
        }
    }
    HermitianOperator::from_symmetrized(&es.eigenvectors * out * es.eigenvectors.adjoint())
}

/// Largest absolute entry of a complex matrix.
pub(crate) trait MaxAbsEntry {
    fn max_abs_entry(&self) -> f64;
}

impl MaxAbsEntry for CMatrix {
    fn max_abs_entry(&self) -> f64 {
        self.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus_projector() -> HermitianOperator {
        HermitianOperator::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap()
    }

    #[test]
    fn eig_identity_and_diagonal() {
        let id = HermitianOperator::identity(2);
        let es = eig_hermitian(&id).unwrap();
        assert_eq!(es.eigenvalues.as_slice(), &[1.0, 1.0]);

        let h = HermitianOperator::from_diagonal(&[0.75, 0.25]);
        let es = eig_hermitian(&h).unwrap();
        assert_eq!(es.eigenvalues.as_slice(), &[0.25, 0.75]);
    }

    #[test]
    fn eig_pauli_x_by_characteristic_polynomial() {
        // det(X - l) = l^2 - 1, roots -1 and 1
        let x = HermitianOperator::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let es = eig_hermitian(&x).unwrap();
        assert!((es.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((es.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_reconstruction_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
        for d in 2..=8 {
            let mat = CMatrix::from_fn(d, d, |_, _| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let h = HermitianOperator::from_symmetrized(mat);
            let es = eig_hermitian(&h).unwrap();
            let rec = es.assemble(|l| l);
            let err = rec.sub(&h).frobenius_norm() / h.frobenius_norm().max(1.0);
            assert!(err < 1e-10, "d={d} err={err:e}");
            let v = &es.eigenvectors;
            let unit = (v.adjoint() * v - CMatrix::identity(d, d)).max_abs_entry();
            assert!(unit < 1e-10);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::from_row_slice(2, 2, &[
            C64::new(1.0, 0.0), C64::new(1.0, 0.0),
            C64::new(0.0, 0.0), C64::new(1.0, 0.0),
        ]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn non_finite_rejected() {
        let m = CMatrix::from_row_slice(1, 1, &[C64::new(f64::NAN, 0.0)]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::InvalidInput)));
    }

    #[test]
    fn spectral_log_on_diagonal() {
        let h = HermitianOperator::from_diagonal(&[1.0, std::f64::consts::E]);
        let l = apply_spectral_function(&h, f64::ln, ZeroPolicy::ErrorOnZero).unwrap();
        let want = HermitianOperator::from_diagonal(&[0.0, 1.0]);
        assert!(l.sub(&want).frobenius_norm() < 1e-12);
    }

    #[test]
    fn generalized_inverse_convention() {
        let h = HermitianOperator::from_diagonal(&[2.0, 0.0]);
        let inv = apply_spectral_function(&h, |t| 1.0 / t, ZeroPolicy::MapZeroToZero).unwrap();
        let want = HermitianOperator::from_diagonal(&[0.5, 0.0]);
        assert!(inv.sub(&want).frobenius_norm() < 1e-12);
    }

    #[test]
    fn sqrt_of_rank_one_projector() {
        let p = plus_projector();
        let s = apply_spectral_function(&p, f64::sqrt, ZeroPolicy::MapZeroToZero).unwrap();
        assert!(s.sub(&p).frobenius_norm() < 1e-12);
    }

    #[test]
    fn log_at_zero_is_domain_error() {
        let h = HermitianOperator::from_diagonal(&[1.0, 0.0]);
        let r = apply_spectral_function(&h, f64::ln, ZeroPolicy::ApplyAtZero);
        assert!(matches!(r, Err(Error::DomainError(_))));
    }

    #[test]
    fn identity_function_returns_input() {
        let p = plus_projector();
        let same = apply_spectral_function(&p, |t| t, ZeroPolicy::ApplyAtZero).unwrap();
        assert!(same.sub(&p).frobenius_norm() < 1e-12);
    }

    #[test]
    fn support_of_diagonal() {
        let h = HermitianOperator::from_diagonal(&[0.5, 0.0]);
        let s = support_projection(&h).unwrap();
        let want = HermitianOperator::from_diagonal(&[1.0, 0.0]);
        assert!(s.sub(&want).frobenius_norm() < 1e-12);
    }

    #[test]
    fn support_drops_below_tolerance_eigenvalue() {
        let h = HermitianOperator::from_diagonal(&[1e-14, 0.5]);
        let s = support_projection(&h).unwrap();
        let want = HermitianOperator::from_diagonal(&[0.0, 1.0]);
        assert!(s.sub(&want).frobenius_norm() < 1e-12);
    }

    #[test]
    fn projector_is_its_own_support() {
        let p = plus_projector();
        let s = support_projection(&p).unwrap();
        assert!(s.sub(&p).frobenius_norm() < 1e-12);
    }

    #[test]
    fn support_rejects_negative() {
        let h = HermitianOperator::from_diagonal(&[-0.5, 1.0]);
        assert!(matches!(support_projection(&h), Err(Error::NotPositive(_))));
    }

    #[test]
    fn support_sandwich_recovers_psd_input() {
        let p = plus_projector().scale(0.7);
        let s = support_projection(&p).unwrap();
        let sps = HermitianOperator::from_symmetrized(s.matrix() * p.matrix() * s.matrix());
        assert!(sps.sub(&p).frobenius_norm() < 1e-10);
    }

    #[test]
    fn pinch_kills_off_diagonal() {
        let h = plus_projector();
        let parts = [
            HermitianOperator::from_diagonal(&[1.0, 0.0]),
            HermitianOperator::from_diagonal(&[0.0, 1.0]),
        ];
        let out = pinch(&h, &parts).unwrap();
        let want = HermitianOperator::from_diagonal(&[0.5, 0.5]);
        assert!(out.sub(&want).frobenius_norm() < 1e-12);
    }

    #[test]
    fn pinch_by_identity_is_identity_map() {
        let h = plus_projector();
        let out = pinch(&h, &[HermitianOperator::identity(2)]).unwrap();
        assert!(out.sub(&h).frobenius_norm() < 1e-12);
    }

    #[test]
    fn pinch_fixes_diagonal_operators() {
        let h = HermitianOperator::from_diagonal(&[0.3, 0.7]);
        let parts = [
            HermitianOperator::from_diagonal(&[1.0, 0.0]),
            HermitianOperator::from_diagonal(&[0.0, 1.0]),
        ];
        let out = pinch(&h, &parts).unwrap();
        assert!(out.sub(&h).frobenius_norm() < 1e-12);
    }

    #[test]
    fn pinch_preserves_trace() {
        let h = plus_projector().scale(1.3);
        let parts = [
            HermitianOperator::from_diagonal(&[1.0, 0.0]),
            HermitianOperator::from_diagonal(&[0.0, 1.0]),
        ];
        let out = pinch(&h, &parts).unwrap();
        assert!((out.trace() - h.trace()).abs() < 1e-12);
    }

    #[test]
    fn pinch_rejects_bad_partition() {
        let h = HermitianOperator::identity(2);
        let parts = [HermitianOperator::from_diagonal(&[1.0, 0.0])];
        assert!(matches!(pinch(&h, &parts), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn frechet_derivative_matches_finite_difference() {
        let h = HermitianOperator::from_real(3, &[
            0.9, 0.2, 0.1,
            0.2, 0.4, 0.0,
            0.1, 0.0, 1.3,
        ])
        .unwrap();
        let k = HermitianOperator::from_real(3, &[
            0.1, 0.05, 0.0,
            0.05, -0.2, 0.02,
            0.0, 0.02, 0.3,
        ])
        .unwrap();
        let es = eig_hermitian(&h).unwrap();
        let df = frechet_derivative(&es, f64::exp, f64::exp, &k);
        let eps = 1e-6;
        let fplus = apply_spectral_function(&h.add(&k.scale(eps)), f64::exp, ZeroPolicy::ApplyAtZero).unwrap();
        let fminus = apply_spectral_function(&h.add(&k.scale(-eps)), f64::exp, ZeroPolicy::ApplyAtZero).unwrap();
        let fd = fplus.sub(&fminus).scale(0.5 / eps);
        assert!(df.sub(&fd).frobenius_norm() < 1e-8);
    }
}
