//! Density matrices, pure states, random sampling, fidelity and entropy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    c64, check_psd_spectrum, eigvalsh, hermitian_eig, psd_power, psd_trace_power, spectrum_entropy,
    ComplexMatrix, LogBase, C64, HERMITIAN_TOL,
};

/// Trace tolerance for normalized states.
pub const TRACE_TOL: f64 = 1e-9;
/// Unit-norm tolerance for pure-state amplitudes.
pub const NORM_TOL: f64 = 1e-12;

/// A Hermitian PSD matrix, either normalized (trace 1) or with a decaying
/// trace in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumState {
    matrix: ComplexMatrix,
    normalized: bool,
}

impl QuantumState {
    /// Validates a normalized density matrix.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let matrix = validate_psd(matrix)?;
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace {
                trace: tr,
                expected: "1",
            });
        }
        Ok(Self {
            matrix,
            normalized: true,
        })
    }

    /// Validates a subnormalized density matrix (trace in `[0, 1]`).
    pub fn unnormalized(matrix: ComplexMatrix) -> Result<Self> {
        let matrix = validate_psd(matrix)?;
        let tr = matrix.trace().re;
        if !(-TRACE_TOL..=1.0 + TRACE_TOL).contains(&tr) {
            return Err(Error::BadTrace {
                trace: tr,
                expected: "within [0, 1]",
            });
        }
        Ok(Self {
            matrix,
            normalized: false,
        })
    }

    /// Projects a Hermitian matrix onto the nearest density matrix by clipping
    /// negative eigenvalues and renormalizing. Returns the state together with
    /// the max-entry projection distance.
    pub fn nearest_density(matrix: &ComplexMatrix) -> Result<(Self, f64)> {
        let eig = hermitian_eig(matrix)?;
        let clipped: f64 = eig.values.iter().map(|&l| l.max(0.0)).sum();
        if clipped <= 0.0 {
            return Err(Error::BadTrace {
                trace: clipped,
                expected: "positive after clipping",
            });
        }
        let projected = eig.map(|l| l.max(0.0) / clipped).hermitian_part();
        let distance = projected.max_abs_diff(matrix);
        Ok((
            Self {
                matrix: projected,
                normalized: true,
            },
            distance,
        ))
    }

    /// Wraps a matrix that is already known to be a valid state.
    pub(crate) fn trusted(matrix: ComplexMatrix, normalized: bool) -> Self {
        Self { matrix, normalized }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::trusted(ComplexMatrix::identity(dim).scale(1.0 / dim as f64), true)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `ρ / Tr ρ`.
    pub fn renormalized(&self) -> Result<Self> {
        let tr = self.trace();
        if tr <= TRACE_TOL {
            return Err(Error::VanishingTrace { trace: tr });
        }
        Ok(Self::trusted(self.matrix.scale(1.0 / tr), true))
    }

    /// Eigenvalues in descending order.
    pub fn spectrum(&self) -> Vec<f64> {
        eigvalsh(&self.matrix)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_of_product(&self.matrix).re
    }

    /// `U ρ U^†`.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        self.matrix.check_same_dim(u)?;
        Ok(Self::trusted(
            self.matrix.conjugate_by(u).hermitian_part(),
            self.normalized,
        ))
    }

    /// `p ρ + (1 - p) σ`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        self.matrix.check_same_dim(&other.matrix)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "mixing weight {p} outside [0, 1]"
            )));
        }
        Ok(Self::trusted(
            &self.matrix.scale(p) + &other.matrix.scale(1.0 - p),
            self.normalized && other.normalized,
        ))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self::trusted(
            self.matrix.kron(&other.matrix),
            self.normalized && other.normalized,
        )
    }

    /// `½ (ρ ⊕ τ)`.
    pub fn half_direct_sum(&self, other: &Self) -> Self {
        Self::trusted(self.matrix.direct_sum(&other.matrix).scale(0.5), true)
    }
}

fn validate_psd(matrix: ComplexMatrix) -> Result<ComplexMatrix> {
    if !matrix.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = matrix.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let matrix = matrix.hermitian_part();
    check_psd_spectrum(&eigvalsh(&matrix))?;
    Ok(matrix)
}

impl From<&PureState> for QuantumState {
    fn from(psi: &PureState) -> Self {
        psi.density()
    }
}

/// A unit vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Validates unit norm.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidParameter("empty state vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!(
                "state vector norm {norm} is not 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalize(amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidParameter(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / n).collect(),
        })
    }

    /// Basis vector `|k>` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amplitudes = vec![c64(0.0, 0.0); dim];
        amplitudes[k] = c64(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn density(&self) -> QuantumState {
        QuantumState::trusted(ComplexMatrix::outer(&self.amplitudes), true)
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Kind of random state to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

/// Seeded generator used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Normalized complex Gaussian vector (Haar-distributed pure state).
pub fn random_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        if let Ok(psi) = PureState::normalize(v) {
            return psi;
        }
    }
}

/// Square complex Ginibre matrix.
pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| gaussian_complex(rng))
}

/// Ginibre mixed state `G G^† / Tr(G G^†)`.
pub fn random_mixed<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> QuantumState {
    let g = ginibre(dim, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    QuantumState::trusted(w.scale(1.0 / tr).hermitian_part(), true)
}

/// Random state of the requested kind, deterministic in `seed`.
pub fn random_state(dim: usize, kind: StateKind, seed: u64) -> Result<QuantumState> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "random states need dim >= 2, got {dim}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    Ok(match kind {
        StateKind::Pure => random_pure(dim, &mut rng).density(),
        StateKind::Mixed => random_mixed(dim, &mut rng),
    })
}

/// Haar-random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<C64> = (0..dim).map(|i| g[(i, j)]).collect();
        for _ in 0..2 {
            for u in &cols {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let n = norm(&v);
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Uhlmann fidelity `Tr sqrt(sqrt(ρ) σ sqrt(ρ))`.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    a.matrix.check_same_dim(&b.matrix)?;
    Ok(fidelity_psd(&a.matrix, &b.matrix))
}

/// Fidelity of two matrices known to be PSD.
pub(crate) fn fidelity_psd(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let sa = psd_power(a, 0.5);
    let inner = &(&sa * b) * &sa;
    psd_trace_power(&inner, 0.5)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &QuantumState) -> f64 {
    entropy_with_base(rho, LogBase::Bits)
}

pub fn entropy_with_base(rho: &QuantumState, base: LogBase) -> f64 {
    spectrum_entropy(&rho.spectrum(), base)
}
