//! Werner and isotropic state families, conditioned ensembles on Bob's side,
//! and the PPT and CHSH reference criteria.

use std::fmt;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{
    self, expectation, hermiticity_deviation, identity, kron, partial_trace,
    partial_transpose_alice, projector, ComplexMatrix, HaarSampler, StateVector, Subsystem, C64,
};

/// Tolerance for trace and Hermiticity checks on density matrices.
pub const STATE_TOL: f64 = 1e-10;
/// Smallest eigenvalue still accepted for a density matrix.
pub const STATE_PSD_TOL: f64 = 1e-9;

/// Bisection tolerance on η and iteration cap for threshold localization.
pub const BISECTION_TOL: f64 = 1e-9;
pub const BISECTION_MAX_ITER: usize = 200;

/// Hermitian, unit-trace, positive operator on `C^{d_alpha} ⊗ C^{d_beta}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    d_alpha: usize,
    d_beta: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(d_alpha: usize, d_beta: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n = d_alpha * d_beta;
        if n == 0 || matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "density matrix for {d_alpha}x{d_beta} must be {n}x{n}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = hermiticity_deviation(&matrix);
        if herm > STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let min = qcore::min_eigenvalue_hermitian(&matrix)?;
        if min < -STATE_PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self {
            d_alpha,
            d_beta,
            matrix,
        })
    }

    /// Single-party state, treated as `C^1 ⊗ C^d`.
    pub fn single(matrix: ComplexMatrix) -> Result<Self> {
        let d = matrix.nrows();
        Self::new(1, d, matrix)
    }

    pub fn product(sigma: &ComplexMatrix, rho: &ComplexMatrix) -> Result<Self> {
        Self::new(sigma.nrows(), rho.nrows(), kron(sigma, rho))
    }

    pub fn d_alpha(&self) -> usize {
        self.d_alpha
    }

    pub fn d_beta(&self) -> usize {
        self.d_beta
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Bob's marginal `Tr_α[W]`.
    pub fn bob_marginal(&self) -> ComplexMatrix {
        partial_trace(&self.matrix, self.d_alpha, self.d_beta, Subsystem::Alice)
            .expect("shape checked at construction")
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        qcore::hermitian_eigenvalues(&self.matrix).expect("Hermitian by construction")
    }
}

/// Orthonormal basis of Alice's (or Bob's) space, stored as the columns of a
/// unitary matrix. Outcome `a` is the projector onto column `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveBasis {
    vectors: ComplexMatrix,
}

impl ProjectiveBasis {
    pub fn new(vectors: ComplexMatrix) -> Result<Self> {
        let d = vectors.nrows();
        if d == 0 || vectors.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "basis must be square, got {}x{}",
                vectors.nrows(),
                vectors.ncols()
            )));
        }
        let deviation = qcore::max_abs_diff(&(vectors.adjoint() * &vectors), &identity(d));
        if deviation > STATE_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self { vectors })
    }

    pub fn computational(d: usize) -> Self {
        Self {
            vectors: identity(d),
        }
    }

    pub fn haar_random(sampler: &mut HaarSampler) -> Self {
        Self {
            vectors: sampler.haar_unitary(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn vector(&self, a: usize) -> StateVector {
        self.vectors.column(a).into_owned()
    }

    pub fn projector(&self, a: usize) -> ComplexMatrix {
        projector(&self.vector(a))
    }

    /// Complex-conjugated basis `{|a*⟩}`.
    pub fn conjugate(&self) -> Self {
        Self {
            vectors: self.vectors.map(|z| z.conj()),
        }
    }

    /// `{u|a⟩}` for a unitary `u`.
    pub fn transformed(&self, u: &ComplexMatrix) -> Self {
        Self {
            vectors: u * &self.vectors,
        }
    }

    /// `|⟨a|ψ⟩|²` for every outcome `a`, written into `out`.
    pub fn overlaps_into(&self, psi: &[C64], out: &mut [f64]) {
        let d = self.dim();
        for (a, o) in out.iter_mut().enumerate().take(d) {
            let col = self.vectors.column(a);
            let mut amp = C64::new(0.0, 0.0);
            for i in 0..d {
                amp += col[i].conj() * psi[i];
            }
            *o = amp.norm_sqr();
        }
    }
}

/// The two symmetric state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `U⊗U`-invariant family built from the flip operator.
    Werner,
    /// `U*⊗U`-invariant family built from the maximally entangled projector.
    Isotropic,
}

impl Family {
    /// Basis in which Bob's conditioned states are diagonal-with-a-spike for
    /// Alice's measurement in `basis`: `{|a⟩}` for Werner states and
    /// `{|a*⟩}` for isotropic states.
    pub fn bob_frame(&self, basis: &ProjectiveBasis) -> ProjectiveBasis {
        match self {
            Family::Werner => basis.clone(),
            Family::Isotropic => basis.conjugate(),
        }
    }

    /// Alice's half `U_α(g)` of the symmetry representation, given Bob's `U`.
    pub fn alice_unitary(&self, u: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Family::Werner => u.clone(),
            Family::Isotropic => u.map(|z| z.conj()),
        }
    }

    pub fn state(&self, d: usize, eta: f64) -> Result<DensityMatrix> {
        match self {
            Family::Werner => werner_state(d, eta),
            Family::Isotropic => isotropic_state(d, eta),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Werner => f.write_str("werner"),
            Family::Isotropic => f.write_str("isotropic"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "werner" => Ok(Family::Werner),
            "isotropic" | "iso" => Ok(Family::Isotropic),
            other => Err(Error::InvalidArgument(format!("unknown family '{other}'"))),
        }
    }
}

/// A member of one of the two families: `(family, d, η)` with `η ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    family: Family,
    d: usize,
    eta: f64,
}

impl FamilySpec {
    pub fn new(family: Family, d: usize, eta: f64) -> Result<Self> {
        check_params(d, eta)?;
        Ok(Self { family, d, eta })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn state(&self) -> DensityMatrix {
        self.family
            .state(self.d, self.eta)
            .expect("parameters validated at construction")
    }
}

fn check_params(d: usize, eta: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::EtaOutOfRange(eta));
    }
    Ok(())
}

/// Flip operator `V|φ⟩|ψ⟩ = |ψ⟩|φ⟩` on `C^d ⊗ C^d`.
pub fn flip_operator(d: usize) -> ComplexMatrix {
    let n = d * d;
    let mut v = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            v[(j * d + i, i * d + j)] = C64::new(1.0, 0.0);
        }
    }
    v
}

/// `|ψ₊⟩ = Σ_i |i⟩|i⟩ / √d`.
pub fn maximally_entangled(d: usize) -> StateVector {
    let mut v = StateVector::zeros(d * d);
    let amp = C64::new((d as f64).sqrt().recip(), 0.0);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    v
}

/// `W = ((d−1+η)/(d−1))·I/d² − (η/(d−1))·V/d`.
pub fn werner_state(d: usize, eta: f64) -> Result<DensityMatrix> {
    check_params(d, eta)?;
    let df = d as f64;
    let a = (df - 1.0 + eta) / (df - 1.0) / (df * df);
    let b = eta / (df - 1.0) / df;
    let m = identity(d * d).scale(a) - flip_operator(d).scale(b);
    DensityMatrix::new(d, d, m)
}

/// `W = (1−η)·I/d² + η·P₊`.
pub fn isotropic_state(d: usize, eta: f64) -> Result<DensityMatrix> {
    check_params(d, eta)?;
    let df = d as f64;
    let m = identity(d * d).scale((1.0 - eta) / (df * df))
        + projector(&maximally_entangled(d)).scale(eta);
    DensityMatrix::new(d, d, m)
}

/// Bob's unnormalized conditioned states `ρ̃_a = Tr_α[W(|a⟩⟨a| ⊗ I)]`,
/// indexed by Alice's outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedEnsemble {
    members: Vec<ComplexMatrix>,
}

impl ConditionedEnsemble {
    /// Wraps a list of unnormalized states; checks they are PSD and their
    /// traces sum to one.
    pub fn new(members: Vec<ComplexMatrix>) -> Result<Self> {
        let d = members
            .first()
            .map(|m| m.nrows())
            .ok_or_else(|| Error::InvalidEnsemble("no members".into()))?;
        let mut total = 0.0;
        for m in &members {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch("ensemble members differ in size".into()));
            }
            let margin = qcore::psd_margin(m)?;
            if !margin.is_psd() {
                return Err(Error::InvalidEnsemble(format!(
                    "member has eigenvalue {:.3e}",
                    margin.min_eigenvalue
                )));
            }
            total += m.trace().re;
        }
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidEnsemble(format!("total weight {total} != 1")));
        }
        Ok(Self { members })
    }

    pub(crate) fn from_members_unchecked(members: Vec<ComplexMatrix>) -> Self {
        Self { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[ComplexMatrix] {
        &self.members
    }

    pub fn member(&self, a: usize) -> &ComplexMatrix {
        &self.members[a]
    }

    /// `Tr[ρ̃_a]` for each outcome.
    pub fn probabilities(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.trace().re).collect()
    }

    /// `ρ_a = ρ̃_a / Tr[ρ̃_a]`, or `None` for a zero-probability outcome.
    pub fn normalized(&self, a: usize) -> Option<ComplexMatrix> {
        let p = self.members[a].trace().re;
        (p > 0.0).then(|| self.members[a].unscale(p))
    }

    /// `Σ_a ρ̃_a`.
    pub fn total(&self) -> ComplexMatrix {
        let d = self.members[0].nrows();
        self.members
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, m| acc + m)
    }

    /// `⟨v_a|ρ̃_a|v_a⟩` summed over outcomes, with `v_a` the columns of `frame`.
    pub fn summed_overlap(&self, frame: &ProjectiveBasis) -> f64 {
        self.members
            .iter()
            .enumerate()
            .map(|(a, m)| expectation(m, &frame.vector(a)))
            .sum()
    }
}

pub fn conditioned_ensemble(
    w: &DensityMatrix,
    basis: &ProjectiveBasis,
) -> Result<ConditionedEnsemble> {
    let (da, db) = (w.d_alpha, w.d_beta);
    if basis.dim() != da {
        return Err(Error::DimensionMismatch(format!(
            "basis of dimension {} for Alice's dimension {da}",
            basis.dim()
        )));
    }
    let m = &w.matrix;
    let members = (0..da)
        .map(|a| {
            let v = basis.matrix().column(a);
            ComplexMatrix::from_fn(db, db, |j, l| {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..da {
                    let vi = v[i].conj();
                    for k in 0..da {
                        acc += vi * v[k] * m[(i * db + j, k * db + l)];
                    }
                }
                acc
            })
        })
        .collect();
    Ok(ConditionedEnsemble::from_members_unchecked(members))
}

/// `P(a,b|A,B;W) = Tr[(Π_a ⊗ Π_b) W]`.
pub fn joint_probability(
    w: &DensityMatrix,
    basis_a: &ProjectiveBasis,
    a: usize,
    basis_b: &ProjectiveBasis,
    b: usize,
) -> Result<f64> {
    if basis_a.dim() != w.d_alpha || basis_b.dim() != w.d_beta {
        return Err(Error::DimensionMismatch(format!(
            "bases of dimension ({}, {}) for a {}x{} state",
            basis_a.dim(),
            basis_b.dim(),
            w.d_alpha,
            w.d_beta
        )));
    }
    if a >= w.d_alpha || b >= w.d_beta {
        return Err(Error::InvalidArgument(format!("outcome ({a}, {b}) out of range")));
    }
    let pi = kron(&basis_a.projector(a), &basis_b.projector(b));
    Ok((pi * &w.matrix).trace().re)
}

/// Closed-form `⟨ã|ρ̃_a|ã⟩` per outcome: `(1−η)/d²` for Werner states and
/// `η/d + (1−η)/d²` for isotropic states (`ã` in the family's Bob frame).
pub fn overlap_statistic(spec: &FamilySpec) -> f64 {
    let d = spec.d as f64;
    let eta = spec.eta;
    match spec.family {
        Family::Werner => (1.0 - eta) / (d * d),
        Family::Isotropic => eta / d + (1.0 - eta) / (d * d),
    }
}

/// Smallest eigenvalue of `W^{T_α}`; negative iff the state is NPT.
pub fn ppt_min_eigenvalue(w: &DensityMatrix) -> f64 {
    let pt = partial_transpose_alice(&w.matrix, w.d_alpha, w.d_beta)
        .expect("shape checked at construction");
    qcore::min_eigenvalue_hermitian(&pt).expect("partial transpose of a Hermitian matrix")
}

fn pauli() -> [ComplexMatrix; 3] {
    let z0 = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        ComplexMatrix::from_row_slice(2, 2, &[z0, one, one, z0]),
        ComplexMatrix::from_row_slice(2, 2, &[z0, -i, i, z0]),
        ComplexMatrix::from_row_slice(2, 2, &[one, z0, z0, -one]),
    ]
}

/// Correlation tensor `T_ij = Tr[W σ_i ⊗ σ_j]`, Pauli order (x, y, z).
pub fn correlation_tensor(w: &DensityMatrix) -> Result<Matrix3<f64>> {
    if w.d_alpha != 2 || w.d_beta != 2 {
        return Err(Error::DimensionMismatch(format!(
            "CHSH criterion needs two qubits, got {}x{}",
            w.d_alpha, w.d_beta
        )));
    }
    let s = pauli();
    Ok(Matrix3::from_fn(|i, j| {
        (kron(&s[i], &s[j]) * &w.matrix).trace().re
    }))
}

/// Horodecki parameter `M(ρ)`: sum of the two largest eigenvalues of `TᵀT`.
/// Some CHSH inequality is violated iff `M > 1`.
pub fn horodecki_chsh_parameter(w: &DensityMatrix) -> Result<f64> {
    let t = correlation_tensor(w)?;
    let mut eig: Vec<f64> = (t.transpose() * t).symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    Ok(eig[0] + eig[1])
}

/// Bisection for the sign change of `f` on `[lo, hi]`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NotBracketed { lo, hi });
    }
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol {
            return Ok(mid);
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// η at which the family's partial transpose acquires a negative eigenvalue.
pub fn ppt_threshold(family: Family, d: usize) -> Result<f64> {
    bisect(
        |eta| Ok(ppt_min_eigenvalue(&family.state(d, eta)?)),
        0.0,
        1.0,
        BISECTION_TOL,
    )
}

/// η at which the two-qubit Werner state starts violating CHSH (`M = 1`).
pub fn chsh_threshold_werner_d2() -> Result<f64> {
    bisect(
        |eta| Ok(horodecki_chsh_parameter(&werner_state(2, eta)?)? - 1.0),
        0.0,
        1.0,
        BISECTION_TOL,
    )
}
