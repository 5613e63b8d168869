//! Positive functionals (density operators, possibly unnormalized and
//! singular), classical distributions, direct sums, and compressions.
//!
//! Functionals are unnormalized by default; normalization is an explicit
//! user action. This is what homogeneity and additivity tests require.

use crate::spectral::{self, CMatrix, EigenSystem, HermitianOperator, C64};
use crate::{tol, Error, Result};
use serde::{Deserialize, Serialize};

/// A normal positive functional on `B(C^d)`: a PSD operator plus its cached
/// trace. Negative eigenvalues within tolerance are clipped to zero at
/// construction; the zero functional is legal.
#[derive(Debug, Clone)]
pub struct PositiveFunctional {
    op: HermitianOperator,
    eig: EigenSystem,
    trace: f64,
}

impl PositiveFunctional {
    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    /// Eigendecomposition computed once at validation time.
    pub fn eigen(&self) -> &EigenSystem {
        &self.eig
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn is_zero(&self) -> bool {
        self.trace <= tol::OFF_MASS
    }

    /// `Tr(D x)` for a Hermitian observable `x`.
    pub fn expectation(&self, x: &HermitianOperator) -> f64 {
        self.op.trace_product(x)
    }

    pub fn scale(&self, lambda: f64) -> Result<PositiveFunctional> {
        make_functional(&self.op.scale(lambda))
    }

    /// The functional as a state (trace one). Errors on the zero functional.
    pub fn normalized(&self) -> Result<PositiveFunctional> {
        if self.is_zero() {
            return Err(Error::DomainError("cannot normalize the zero functional".into()));
        }
        self.scale(1.0 / self.trace)
    }

    /// Support cutoff for this functional: eigenvalues at or below
    /// `1e-10 * lambda_max` count as zero.
    pub fn support_cutoff(&self) -> f64 {
        tol::SUPPORT_REL * self.eig.max_abs_eigenvalue()
    }

    /// Strictly positive part of the spectrum, with eigenvector indices.
    pub fn positive_spectrum(&self) -> Vec<(usize, f64)> {
        let cut = self.support_cutoff();
        self.eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > cut)
            .map(|(i, &l)| (i, l))
            .collect()
    }

    pub fn support_projection(&self) -> HermitianOperator {
        let cut = self.support_cutoff();
        self.eig.assemble(|l| if l > cut { 1.0 } else { 0.0 })
    }
}

/// Validate a Hermitian operator as a positive functional. Eigenvalues in
/// `[-tol_psd, 0)` are clipped to zero; anything below `-tol_psd` is an
/// error. `tol_psd = 1e-10 * ||H||_F`.
pub fn make_functional(h: &HermitianOperator) -> Result<PositiveFunctional> {
    let es = spectral::eig_hermitian(h)?;
    let psd_tol = tol::PSD_REL * h.frobenius_norm();
    let mut clipped = Vec::with_capacity(es.dim());
    for &l in es.eigenvalues.iter() {
        if l < -psd_tol {
            return Err(Error::NotPositive(l));
        }
        clipped.push(l.max(0.0));
    }
    let op = es.assemble_from_values(&clipped);
    let eig = EigenSystem {
        eigenvalues: nalgebra::DVector::from_vec(clipped),
        eigenvectors: es.eigenvectors,
    };
    let trace = op.trace();
    Ok(PositiveFunctional { op, eig, trace })
}

/// Block-diagonal direct sum. Traces add; spectra concatenate.
pub fn direct_sum(p: &PositiveFunctional, q: &PositiveFunctional) -> PositiveFunctional {
    let (dp, dq) = (p.dim(), q.dim());
    let d = dp + dq;
    let mut mat = CMatrix::zeros(d, d);
    mat.view_mut((0, 0), (dp, dp)).copy_from(p.op.matrix());
    mat.view_mut((dp, dp), (dq, dq)).copy_from(q.op.matrix());
    make_functional(&HermitianOperator::from_symmetrized(mat))
        .expect("direct sum of PSD blocks is PSD")
}

/// Restrict `p` to the range of the projection `e`: returns `e p e` as an
/// operator on `ran e` (dimension = rank of `e`).
pub fn compress(p: &PositiveFunctional, e: &HermitianOperator) -> Result<PositiveFunctional> {
    if e.dim() != p.dim() {
        return Err(Error::DimensionError(e.dim(), p.dim()));
    }
    spectral::check_projection(e, 1e-10)?;
    let es = spectral::eig_hermitian(e)?;
    let cols: Vec<usize> = es
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0.5)
        .map(|(i, _)| i)
        .collect();
    let r = cols.len();
    let d = p.dim();
    let mut isometry = CMatrix::zeros(d, r);
    for (dst, &src) in cols.iter().enumerate() {
        isometry.set_column(dst, &es.eigenvectors.column(src));
    }
    let small = isometry.adjoint() * p.op.matrix() * &isometry;
    make_functional(&HermitianOperator::from_symmetrized(small))
}

/// A classical distribution: nonnegative weights, possibly unnormalized.
/// Deliberately a separate type from diagonal functionals so the classical
/// consistency checks are a genuine cross-implementation comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalDistribution {
    weights: Vec<f64>,
}

impl ClassicalDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidInput);
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// On-disk form of a state:
/// `{"dim": d, "re": [[..d x d..]], "im": [[..d x d..]]}`, `im` optional.
/// The reader symmetrizes and validates positivity.
#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl StateFile {
    pub fn to_functional(&self) -> Result<PositiveFunctional> {
        let d = self.dim;
        let check_shape = |m: &Vec<Vec<f64>>| -> Result<()> {
            if m.len() != d || m.iter().any(|row| row.len() != d) {
                return Err(Error::DimensionError(m.len(), d));
            }
            Ok(())
        };
        check_shape(&self.re)?;
        if let Some(im) = &self.im {
            check_shape(im)?;
        }
        let mat = CMatrix::from_fn(d, d, |i, j| {
            let re = self.re[i][j];
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            C64::new(re, im)
        });
        // reader symmetrizes: accept any matrix whose Hermitian part is PSD
        let herm = HermitianOperator::from_symmetrized(mat);
        if herm
            .matrix()
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidInput);
        }
        make_functional(&herm)
    }

    pub fn from_functional(p: &PositiveFunctional) -> Self {
        let d = p.dim();
        let m = p.operator().matrix();
        let re = (0..d)
            .map(|i| (0..d).map(|j| m[(i, j)].re).collect())
            .collect();
        let has_im = m.iter().any(|z| z.im.abs() > 0.0);
        let im = has_im.then(|| {
            (0..d)
                .map(|i| (0..d).map(|j| m[(i, j)].im).collect())
                .collect()
        });
        Self { dim: d, re, im }
    }
}

/// Read a state from a JSON file.
pub fn load_state(path: &std::path::Path) -> Result<PositiveFunctional> {
    let text = std::fs::read_to_string(path)?;
    let file: StateFile = serde_json::from_str(&text)?;
    file.to_functional()
}
