//! Quantum channels and positive maps for exercising monotonicity:
//! Kraus-form CPTP maps, pinchings, partial traces, subalgebra
//! restrictions, block compressions, and seeded random generation.
//!
//! Random objects are deterministic per seed; independent trials draw from
//! streams split off a master seed by trial index.

use crate::spectral::{self, CMatrix, HermitianOperator, C64};
use crate::states::{make_functional, PositiveFunctional};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// A completely positive map in Kraus form.
#[derive(Debug, Clone)]
pub struct Channel {
    kraus: Vec<CMatrix>,
    pub trace_preserving: bool,
    pub unital: bool,
}

impl Channel {
    /// Build from Kraus operators, verifying the declared flags:
    /// `sum K* K = 1` (trace preserving) and `sum K K* = 1` (unital), each
    /// to 1e-10.
    pub fn new(kraus: Vec<CMatrix>, trace_preserving: bool, unital: bool) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidInput);
        }
        let (rows, cols) = (kraus[0].nrows(), kraus[0].ncols());
        if kraus.iter().any(|k| k.nrows() != rows || k.ncols() != cols) {
            return Err(Error::DimensionError(rows, cols));
        }
        let ch = Self {
            kraus,
            trace_preserving,
            unital,
        };
        if trace_preserving {
            let res = ch.completeness_residual();
            if res > 1e-10 {
                return Err(Error::InvalidInput);
            }
        }
        if unital {
            let res = ch.unitality_residual();
            if res > 1e-10 {
                return Err(Error::InvalidInput);
            }
        }
        Ok(ch)
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.kraus[0].ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.kraus[0].nrows()
    }

    /// `|| sum K* K - 1 ||_max`
    pub fn completeness_residual(&self) -> f64 {
        let d = self.dim_in();
        let mut sum = CMatrix::zeros(d, d);
        for k in &self.kraus {
            sum += k.adjoint() * k;
        }
        (sum - CMatrix::identity(d, d))
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// `|| sum K K* - 1 ||_max`
    pub fn unitality_residual(&self) -> f64 {
        let d = self.dim_out();
        let mut sum = CMatrix::zeros(d, d);
        for k in &self.kraus {
            sum += k * k.adjoint();
        }
        (sum - CMatrix::identity(d, d))
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()))
    }
}

/// Apply the predual action `p -> sum K p K*` to a positive functional.
/// Trace is preserved to 1e-12 when the channel is trace preserving.
pub fn apply_channel_predual(ch: &Channel, p: &PositiveFunctional) -> Result<PositiveFunctional> {
    if ch.dim_in() != p.dim() {
        return Err(Error::DimensionError(ch.dim_in(), p.dim()));
    }
    let d = ch.dim_out();
    let mut out = CMatrix::zeros(d, d);
    for k in &ch.kraus {
        out += k * p.operator().matrix() * k.adjoint();
    }
    make_functional(&HermitianOperator::from_symmetrized(out))
}

/// Restriction of a functional to the block-diagonal subalgebra determined
/// by an orthogonal resolution of the identity: the pinching
/// `p -> sum e_k p e_k`.
pub fn restrict_to_subalgebra(
    p: &PositiveFunctional,
    partition: &[HermitianOperator],
) -> Result<PositiveFunctional> {
    let pinched = spectral::pinch(p.operator(), partition)?;
    make_functional(&pinched)
}

/// The dephasing partition: rank-one projections onto the standard basis.
pub fn dephasing_partition(d: usize) -> Vec<HermitianOperator> {
    (0..d)
        .map(|i| {
            let mut diag = vec![0.0; d];
            diag[i] = 1.0;
            HermitianOperator::from_diagonal(&diag)
        })
        .collect()
}

/// The two-block partition `{e, 1-e}` of a projection.
pub fn two_block_partition(e: &HermitianOperator) -> Result<Vec<HermitianOperator>> {
    spectral::check_projection(e, 1e-10)?;
    let d = e.dim();
    let complement =
        HermitianOperator::from_symmetrized(CMatrix::identity(d, d) - e.matrix().clone());
    Ok(vec![e.clone(), complement])
}

/// Partial trace over the second tensor factor of `C^da (x) C^db`,
/// realized as the channel with Kraus operators `K_i = 1 (x) <i|`.
pub fn partial_trace_channel(da: usize, db: usize) -> Channel {
    let mut kraus = Vec::with_capacity(db);
    for i in 0..db {
        let mut k = CMatrix::zeros(da, da * db);
        for a in 0..da {
            k[(a, a * db + i)] = C64::new(1.0, 0.0);
        }
        kraus.push(k);
    }
    Channel::new(kraus, true, false).expect("partial trace is CPTP")
}

/// RNG stream for trial `index` split off a master seed.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha12Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-ish random CPTP channel: QR of a seeded complex Gaussian
/// `(kraus_count * d_out) x d_in` array yields an isometry, sliced into
/// Kraus blocks. Deterministic per seed.
pub fn random_cptp(d_in: usize, d_out: usize, kraus_count: usize, seed: u64) -> Result<Channel> {
    if d_in == 0 || d_out == 0 || kraus_count == 0 {
        return Err(Error::InvalidInput);
    }
    if kraus_count * d_out < d_in {
        return Err(Error::DimensionError(kraus_count * d_out, d_in));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let g = gaussian_matrix(kraus_count * d_out, d_in, &mut rng);
    let q = g.qr().q();
    let kraus = (0..kraus_count)
        .map(|k| q.view((k * d_out, 0), (d_out, d_in)).into_owned())
        .collect();
    Channel::new(kraus, true, false)
}

/// Random unitary via QR of a square complex Gaussian.
pub fn random_unitary(d: usize, rng: &mut ChaCha12Rng) -> CMatrix {
    gaussian_matrix(d, d, rng).qr().q()
}

/// Random Hermitian with entries of order one.
pub fn random_hermitian(d: usize, rng: &mut ChaCha12Rng) -> HermitianOperator {
    HermitianOperator::from_symmetrized(gaussian_matrix(d, d, rng))
}

/// Wishart-type PSD functional `G G*`, unnormalized.
pub fn random_psd(d: usize, rng: &mut ChaCha12Rng) -> PositiveFunctional {
    let g = gaussian_matrix(d, d, rng);
    make_functional(&HermitianOperator::from_symmetrized(&g * g.adjoint()))
        .expect("G G* is PSD")
}

/// Random density operator (unit trace).
pub fn random_density(d: usize, rng: &mut ChaCha12Rng) -> PositiveFunctional {
    let p = random_psd(d, rng);
    p.normalized().expect("Wishart is almost surely nonzero")
}

/// Random full-support density: a Wishart state mixed with the maximally
/// mixed one, keeping every eigenvalue at or above `0.2/d`. This keeps
/// eigenvalue ratios moderate, which the variational route's truncation
/// error analysis relies on.
pub fn random_full_support_density(d: usize, rng: &mut ChaCha12Rng) -> PositiveFunctional {
    let w = random_density(d, rng);
    let mixed = w
        .operator()
        .scale(0.8)
        .add(&HermitianOperator::identity(d).scale(0.2 / d as f64));
    make_functional(&mixed).expect("convex mix of densities is PSD")
}

/// Seeded full-support pair, both normalized.
pub fn random_full_support_pair(d: usize, seed: u64) -> (PositiveFunctional, PositiveFunctional) {
    let mut rng = trial_rng(seed, 0);
    let rho = random_full_support_density(d, &mut rng);
    let sigma = random_full_support_density(d, &mut rng);
    (rho, sigma)
}

/// Random rank-`r` orthogonal projection.
pub fn random_projection(d: usize, rank: usize, rng: &mut ChaCha12Rng) -> HermitianOperator {
    assert!(rank <= d);
    let g = gaussian_matrix(d, rank, rng);
    let q = g.qr().q();
    HermitianOperator::from_symmetrized(&q * q.adjoint())
}

/// An ordered pair `sigma1 <= sigma2`: subtract `eps P` for a projection
/// `P` under the support of `sigma2`, with `eps` small enough to stay PSD.
pub fn random_ordered_pair(
    d: usize,
    rng: &mut ChaCha12Rng,
) -> (PositiveFunctional, PositiveFunctional) {
    let sigma2 = random_full_support_density(d, rng);
    let rank = 1 + rng.random_range(0..d);
    let p = random_projection(d, rank, rng);
    let min_eig = sigma2.eigen().eigenvalues[0];
    let eps = 0.5 * min_eig;
    let sigma1 = make_functional(&sigma2.operator().sub(&p.scale(eps)))
        .expect("sigma2 - eps P stays PSD by construction");
    (sigma1, sigma2)
}

/// On-disk form of a channel: `{"kraus": [{"re": [[..]], "im": [[..]]}]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ChannelFile {
    pub kraus: Vec<KrausEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct KrausEntry {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl ChannelFile {
    pub fn to_channel(&self) -> Result<Channel> {
        if self.kraus.is_empty() {
            return Err(Error::InvalidInput);
        }
        let mut ops = Vec::with_capacity(self.kraus.len());
        for entry in &self.kraus {
            let rows = entry.re.len();
            if rows == 0 {
                return Err(Error::InvalidInput);
            }
            let cols = entry.re[0].len();
            if entry.re.iter().any(|r| r.len() != cols) {
                return Err(Error::InvalidInput);
            }
            if let Some(im) = &entry.im {
                if im.len() != rows || im.iter().any(|r| r.len() != cols) {
                    return Err(Error::InvalidInput);
                }
            }
            let m = CMatrix::from_fn(rows, cols, |i, j| {
                C64::new(
                    entry.re[i][j],
                    entry.im.as_ref().map_or(0.0, |im| im[i][j]),
                )
            });
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidInput);
            }
            ops.push(m);
        }
        // flags inferred from the operators themselves
        let probe = Channel {
            kraus: ops,
            trace_preserving: false,
            unital: false,
        };
        let tp = probe.completeness_residual() <= 1e-10;
        let un = probe.unitality_residual() <= 1e-10;
        Ok(Channel {
            trace_preserving: tp,
            unital: un,
            ..probe
        })
    }

    pub fn from_channel(ch: &Channel) -> Self {
        let kraus = ch
            .kraus_ops()
            .iter()
            .map(|k| {
                let re = (0..k.nrows())
                    .map(|i| (0..k.ncols()).map(|j| k[(i, j)].re).collect())
                    .collect();
                let has_im = k.iter().any(|z| z.im != 0.0);
                let im = has_im.then(|| {
                    (0..k.nrows())
                        .map(|i| (0..k.ncols()).map(|j| k[(i, j)].im).collect())
                        .collect()
                });
                KrausEntry { re, im }
            })
            .collect();
        Self { kraus }
    }
}

pub fn load_channel(path: &std::path::Path) -> Result<Channel> {
    let text = std::fs::read_to_string(path)?;
    let file: ChannelFile = serde_json::from_str(&text)?;
    file.to_channel()
}
