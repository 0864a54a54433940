//! Dense complex linear algebra, Haar sampling and positive-semidefiniteness
//! checks.
//!
//! Bipartite operators use the ordering `|i⟩_α ⊗ |j⟩_β ↦ i·d_β + j`, so
//! Alice's index is the slow one.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type StateVector = DVector<C64>;

/// Max-norm tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Relative slack for "≥ 0" decisions: eigenvalues down to
/// `-PSD_REL_TOL * (1 + ‖m‖)` count as non-negative.
pub const PSD_REL_TOL: f64 = 1e-9;

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Alice,
    Bob,
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Traces out `traced` from an operator on `C^{d_alpha} ⊗ C^{d_beta}` and
/// returns the reduced operator on the other factor.
pub fn partial_trace(
    m: &ComplexMatrix,
    d_alpha: usize,
    d_beta: usize,
    traced: Subsystem,
) -> Result<ComplexMatrix> {
    let n = d_alpha * d_beta;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected {n}x{n} operator for {d_alpha}x{d_beta} system, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let out = match traced {
        Subsystem::Alice => ComplexMatrix::from_fn(d_beta, d_beta, |j, l| {
            (0..d_alpha).map(|i| m[(i * d_beta + j, i * d_beta + l)]).sum()
        }),
        Subsystem::Bob => ComplexMatrix::from_fn(d_alpha, d_alpha, |i, k| {
            (0..d_beta).map(|j| m[(i * d_beta + j, k * d_beta + j)]).sum()
        }),
    };
    Ok(out)
}

/// Partial transpose over Alice's factor:
/// `⟨i j|m^{T_α}|k l⟩ = ⟨k j|m|i l⟩`.
pub fn partial_transpose_alice(
    m: &ComplexMatrix,
    d_alpha: usize,
    d_beta: usize,
) -> Result<ComplexMatrix> {
    let n = d_alpha * d_beta;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected {n}x{n} operator, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r / d_beta, r % d_beta);
        let (k, l) = (c / d_beta, c % d_beta);
        m[(k * d_beta + j, i * d_beta + l)]
    }))
}

/// Largest entrywise deviation `|m - m†|`.
pub fn hermiticity_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let deviation = hermiticity_deviation(m);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let h = (m + m.adjoint()).scale(0.5);
    let mut eig: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue_hermitian(m: &ComplexMatrix) -> Result<f64> {
    hermitian_eigenvalues(m)?
        .first()
        .copied()
        .ok_or_else(|| Error::DimensionMismatch("empty matrix".into()))
}

/// Signed PSD margin of a Hermitian matrix.
///
/// `min_eigenvalue` is the smallest eigenvalue and `tolerance` the slack
/// `PSD_REL_TOL·(1 + ‖m‖₂)` below zero that is still read as PSD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdMargin {
    pub min_eigenvalue: f64,
    pub tolerance: f64,
}

impl PsdMargin {
    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue >= -self.tolerance
    }

    /// Within the tolerance band around zero, where the verdict is only
    /// as good as floating point.
    pub fn is_boundary(&self) -> bool {
        self.min_eigenvalue.abs() <= self.tolerance
    }
}

pub fn psd_margin(m: &ComplexMatrix) -> Result<PsdMargin> {
    let eig = hermitian_eigenvalues(m)?;
    let (lo, hi) = match (eig.first(), eig.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Err(Error::DimensionMismatch("empty matrix".into())),
    };
    let norm = lo.abs().max(hi.abs());
    Ok(PsdMargin {
        min_eigenvalue: lo,
        tolerance: PSD_REL_TOL * (1.0 + norm),
    })
}

/// Trace distance `½‖a − b‖₁` between Hermitian operators.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "trace distance between {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let eig = hermitian_eigenvalues(&(a - b))?;
    Ok(0.5 * eig.iter().map(|e| e.abs()).sum::<f64>())
}

/// `⟨v|m|v⟩`, real part.
pub fn expectation(m: &ComplexMatrix, v: &StateVector) -> f64 {
    (v.adjoint() * m * v)[(0, 0)].re
}

/// `|v⟩⟨v|`.
pub fn projector(v: &StateVector) -> ComplexMatrix {
    v * v.adjoint()
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Reproducible sampler of Haar-random pure states and unitaries on `C^d`.
///
/// Each sampler owns its generator; parallel Monte-Carlo gives every worker
/// its own stream via [`HaarSampler::with_stream`].
#[derive(Debug, Clone)]
pub struct HaarSampler {
    dim: usize,
    rng: ChaCha8Rng,
}

impl HaarSampler {
    pub fn new(dim: usize, seed: u64) -> Self {
        Self::with_stream(dim, seed, 0)
    }

    /// Independent stream `stream` of the generator keyed by `seed`.
    pub fn with_stream(dim: usize, seed: u64, stream: u64) -> Self {
        assert!(dim >= 1, "Haar sampler needs dimension >= 1");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { dim, rng }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn gaussian(&mut self) -> C64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        C64::new(re, im)
    }

    /// Writes a Haar-random unit vector into `out` (length `dim`).
    pub fn fill_vector(&mut self, out: &mut [C64]) {
        debug_assert_eq!(out.len(), self.dim);
        loop {
            let mut norm_sqr = 0.0;
            for z in out.iter_mut() {
                *z = self.gaussian();
                norm_sqr += z.norm_sqr();
            }
            // Zero has probability zero but would poison the normalization.
            if norm_sqr > f64::MIN_POSITIVE {
                let inv = norm_sqr.sqrt().recip();
                out.iter_mut().for_each(|z| *z *= inv);
                return;
            }
        }
    }

    pub fn haar_vector(&mut self) -> StateVector {
        let mut v = StateVector::zeros(self.dim);
        self.fill_vector(v.as_mut_slice());
        v
    }

    /// Haar-random unitary: QR of a complex Ginibre matrix with the phases
    /// of `R`'s diagonal absorbed into `Q`.
    pub fn haar_unitary(&mut self) -> ComplexMatrix {
        let d = self.dim;
        let g = ComplexMatrix::from_fn(d, d, |_, _| self.gaussian());
        let qr = g.qr();
        let r = qr.r();
        let mut q = qr.q();
        for k in 0..d {
            let rkk = r[(k, k)];
            let phase = if rkk.norm() > 0.0 {
                rkk / rkk.norm()
            } else {
                C64::new(1.0, 0.0)
            };
            for i in 0..d {
                q[(i, k)] *= phase;
            }
        }
        q
    }
}

/// Convenience: the sampled vector for a fresh sampler, for tests and docs.
pub fn haar_vector(s: &mut HaarSampler) -> StateVector {
    s.haar_vector()
}
