//! Covariance-matrix algebra for bipartite Gaussian states.
//!
//! Conventions: ħ = 1, quadratures ordered `(q₁, p₁, q₂, p₂, …)` with
//! Alice's modes first, vacuum covariance `I/2`. The uncertainty relation
//! and every steering LMI are written with `Σ = (ħ/2)·J`, where `J` is the
//! per-mode symplectic form `[[0, 1], [−1, 0]]`; so the vacuum saturates
//! `V + iΣ ≥ 0` and a single mode obeys `V(q)·V(p) ≥ 1/4`.
//!
//! Steering by Alice's Gaussian measurements is impossible iff
//! `V + 0_α ⊕ iΣ_β ≥ 0`. When that holds, the Schur complement
//! `U = V_β − Cᵀ V_α⁻¹ C` is a valid covariance matrix lying below every
//! conditioned covariance `V_β^A`, which is the LHS construction behind the
//! criterion.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{self, ComplexMatrix, PsdMargin, C64};

pub type RealMatrix = DMatrix<f64>;

pub const HBAR: f64 = 1.0;

/// Symmetry tolerance for covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Reid's bound on the product of conditional variances, `(ħ/2)²`.
pub const REID_BOUND: f64 = HBAR * HBAR / 4.0;

/// Default homodyne regularization: `T = diag(ε, 1/ε)`.
pub const DEFAULT_HOMODYNE_EPS: f64 = 1e-8;

/// Block-diagonal `J = ⊕ [[0, 1], [−1, 0]]` over `modes` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    matrix: RealMatrix,
}

impl SymplecticForm {
    pub fn new(modes: usize) -> Self {
        let mut j = RealMatrix::zeros(2 * modes, 2 * modes);
        for k in 0..modes {
            j[(2 * k, 2 * k + 1)] = 1.0;
            j[(2 * k + 1, 2 * k)] = -1.0;
        }
        Self { matrix: j }
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }
}

fn symmetry_deviation(m: &RealMatrix) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..i {
            dev = dev.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    dev
}

fn check_symmetric(m: &RealMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let deviation = symmetry_deviation(m);
    if deviation > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { deviation });
    }
    Ok(())
}

/// `m + i·(ħ/2)·(s_α J_α ⊕ s_β J_β)` as a complex Hermitian matrix, with
/// `s_α, s_β ∈ {0, 1}` selecting which parties carry the commutator term.
fn lmi_matrix(m: &RealMatrix, modes_alice: usize, alice: bool, bob: bool) -> ComplexMatrix {
    let n = m.nrows();
    let j = SymplecticForm::new(n / 2);
    let split = 2 * modes_alice;
    ComplexMatrix::from_fn(n, n, |r, c| {
        let on = if r < split && c < split {
            alice
        } else if r >= split && c >= split {
            bob
        } else {
            false
        };
        let im = if on { 0.5 * HBAR * j.matrix()[(r, c)] } else { 0.0 };
        C64::new(m[(r, c)], im)
    })
}

/// Real symmetric covariance matrix of an `(m_alpha + m_beta)`-mode
/// Gaussian state in (Alice, Bob) block form
/// `[[V_α, C], [Cᵀ, V_β]]`.
///
/// Construction checks shape and symmetry only; physical validity is a
/// separate question answered by [`is_valid_state`].
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    m_alpha: usize,
    m_beta: usize,
    matrix: RealMatrix,
}

impl CovarianceMatrix {
    pub fn new(m_alpha: usize, m_beta: usize, matrix: RealMatrix) -> Result<Self> {
        let n = 2 * (m_alpha + m_beta);
        if m_alpha == 0 || m_beta == 0 {
            return Err(Error::DimensionMismatch("each party needs at least one mode".into()));
        }
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{m_alpha}+{m_beta} modes need a {n}x{n} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_symmetric(&matrix)?;
        Ok(Self {
            m_alpha,
            m_beta,
            matrix,
        })
    }

    pub fn from_blocks(v_alpha: &RealMatrix, c: &RealMatrix, v_beta: &RealMatrix) -> Result<Self> {
        let (na, nb) = (v_alpha.nrows(), v_beta.nrows());
        if na % 2 != 0 || nb % 2 != 0 || c.shape() != (na, nb) {
            return Err(Error::DimensionMismatch(format!(
                "blocks {:?}, {:?}, {:?} do not fit together",
                v_alpha.shape(),
                c.shape(),
                v_beta.shape()
            )));
        }
        let mut m = RealMatrix::zeros(na + nb, na + nb);
        m.view_mut((0, 0), (na, na)).copy_from(v_alpha);
        m.view_mut((0, na), (na, nb)).copy_from(c);
        m.view_mut((na, 0), (nb, na)).copy_from(&c.transpose());
        m.view_mut((na, na), (nb, nb)).copy_from(v_beta);
        Self::new(na / 2, nb / 2, m)
    }

    /// `V_α ⊕ V_β`.
    pub fn product(v_alpha: &RealMatrix, v_beta: &RealMatrix) -> Result<Self> {
        Self::from_blocks(v_alpha, &RealMatrix::zeros(v_alpha.nrows(), v_beta.nrows()), v_beta)
    }

    pub fn vacuum(m_alpha: usize, m_beta: usize) -> Self {
        let n = 2 * (m_alpha + m_beta);
        Self {
            m_alpha,
            m_beta,
            matrix: RealMatrix::identity(n, n).scale(0.5 * HBAR),
        }
    }

    /// Two-mode squeezed vacuum: `V_α = V_β = cosh(2r)/2·I`,
    /// `C = sinh(2r)/2·diag(1, −1)`.
    pub fn two_mode_squeezed(r: f64) -> Self {
        let c = 0.5 * HBAR * (2.0 * r).cosh();
        let s = 0.5 * HBAR * (2.0 * r).sinh();
        let m = RealMatrix::from_row_slice(
            4,
            4,
            &[
                c, 0.0, s, 0.0, //
                0.0, c, 0.0, -s, //
                s, 0.0, c, 0.0, //
                0.0, -s, 0.0, c,
            ],
        );
        Self::new(1, 1, m).expect("symmetric by construction")
    }

    /// Adds `noise_alpha·I` to Alice's block and `noise_beta·I` to Bob's.
    pub fn with_added_noise(&self, noise_alpha: f64, noise_beta: f64) -> Self {
        let mut m = self.matrix.clone();
        let split = 2 * self.m_alpha;
        for k in 0..m.nrows() {
            m[(k, k)] += if k < split { noise_alpha } else { noise_beta };
        }
        Self { matrix: m, ..*self }
    }

    /// The same state with the parties' roles exchanged.
    pub fn swapped(&self) -> Self {
        Self::from_blocks(&self.bob_block(), &self.cross_block().transpose(), &self.alice_block())
            .expect("blocks of a valid covariance matrix")
    }

    pub fn modes_alice(&self) -> usize {
        self.m_alpha
    }

    pub fn modes_bob(&self) -> usize {
        self.m_beta
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    /// `V_α`.
    pub fn alice_block(&self) -> RealMatrix {
        let na = 2 * self.m_alpha;
        self.matrix.view((0, 0), (na, na)).into_owned()
    }

    /// `V_β`.
    pub fn bob_block(&self) -> RealMatrix {
        let (na, nb) = (2 * self.m_alpha, 2 * self.m_beta);
        self.matrix.view((na, na), (nb, nb)).into_owned()
    }

    /// `C`, Alice rows by Bob columns.
    pub fn cross_block(&self) -> RealMatrix {
        let (na, nb) = (2 * self.m_alpha, 2 * self.m_beta);
        self.matrix.view((0, na), (na, nb)).into_owned()
    }

    /// Standard form for one mode per side: diagonal `V_α`, `V_β` and `C`.
    pub fn is_standard_form(&self) -> bool {
        self.m_alpha == 1
            && self.m_beta == 1
            && [(0, 1), (2, 3), (0, 3), (1, 2)]
                .iter()
                .all(|&(i, j)| self.matrix[(i, j)].abs() <= SYMMETRY_TOL)
    }

    /// Covariance of the partially transposed state (Bob's momenta flipped).
    pub fn partial_transpose(&self) -> Self {
        let n = self.matrix.nrows();
        let split = 2 * self.m_alpha;
        let flip = DVector::from_fn(n, |k, _| if k >= split && k % 2 == 1 { -1.0 } else { 1.0 });
        let m = RealMatrix::from_fn(n, n, |i, j| flip[i] * self.matrix[(i, j)] * flip[j]);
        Self { matrix: m, ..*self }
    }
}

/// Margin of the uncertainty relation `V + iΣ_αβ ≥ 0`.
pub fn validity_margin(v: &CovarianceMatrix) -> PsdMargin {
    qcore::psd_margin(&lmi_matrix(&v.matrix, v.m_alpha, true, true)).expect("Hermitian by construction")
}

pub fn is_valid_state(v: &CovarianceMatrix) -> bool {
    validity_margin(v).is_psd()
}

/// Margin of `V + 0_α ⊕ iΣ_β ≥ 0`; negative beyond tolerance means Alice
/// can steer Bob with Gaussian measurements.
pub fn alice_steering_margin(v: &CovarianceMatrix) -> PsdMargin {
    qcore::psd_margin(&lmi_matrix(&v.matrix, v.m_alpha, false, true)).expect("Hermitian by construction")
}

/// Margin of `V + iΣ_α ⊕ 0_β ≥ 0` (Bob steering Alice).
pub fn bob_steering_margin(v: &CovarianceMatrix) -> PsdMargin {
    qcore::psd_margin(&lmi_matrix(&v.matrix, v.m_alpha, true, false)).expect("Hermitian by construction")
}

fn require_valid(v: &CovarianceMatrix) -> Result<()> {
    let margin = validity_margin(v);
    if !margin.is_psd() {
        return Err(Error::UnphysicalCovariance {
            min_eigenvalue: margin.min_eigenvalue,
        });
    }
    Ok(())
}

/// Whether Alice's Gaussian measurements can steer Bob: the LMI
/// `V + 0_α ⊕ iΣ_β ≥ 0` fails by more than the PSD tolerance.
pub fn steerable_by_alice(v: &CovarianceMatrix) -> Result<bool> {
    require_valid(v)?;
    Ok(!alice_steering_margin(v).is_psd())
}

pub fn steerable_by_bob(v: &CovarianceMatrix) -> Result<bool> {
    require_valid(v)?;
    Ok(!bob_steering_margin(v).is_psd())
}

/// Gaussian measurement on Alice's modes, described by the covariance `T`
/// of its POVM seed state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMeasurement {
    t: RealMatrix,
}

impl GaussianMeasurement {
    /// Checks symmetry and `T + iΣ_α ≥ 0`.
    pub fn new(t: RealMatrix) -> Result<Self> {
        check_symmetric(&t)?;
        if t.nrows() % 2 != 0 || t.nrows() == 0 {
            return Err(Error::InvalidMeasurement(format!(
                "T must be 2m x 2m, got {}x{}",
                t.nrows(),
                t.ncols()
            )));
        }
        let margin = qcore::psd_margin(&lmi_matrix(&t, t.nrows() / 2, true, true))?;
        if !margin.is_psd() {
            return Err(Error::InvalidMeasurement(format!(
                "T + iΣ has eigenvalue {:.3e}",
                margin.min_eigenvalue
            )));
        }
        Ok(Self { t })
    }

    /// Near-ideal homodyne detection of every `q` quadrature:
    /// `T = ⊕ diag(ε, 1/ε)·ħ/2`.
    pub fn homodyne_q(modes: usize, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidMeasurement(format!("eps must be positive, got {eps}")));
        }
        let diag = DVector::from_fn(2 * modes, |k, _| 0.5 * HBAR * if k % 2 == 0 { eps } else { 1.0 / eps });
        Self::new(RealMatrix::from_diagonal(&diag))
    }

    /// Homodyne detection of every `p` quadrature.
    pub fn homodyne_p(modes: usize, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidMeasurement(format!("eps must be positive, got {eps}")));
        }
        let diag = DVector::from_fn(2 * modes, |k, _| 0.5 * HBAR * if k % 2 == 1 { eps } else { 1.0 / eps });
        Self::new(RealMatrix::from_diagonal(&diag))
    }

    /// Heterodyne detection (vacuum seed).
    pub fn heterodyne(modes: usize) -> Self {
        Self {
            t: RealMatrix::identity(2 * modes, 2 * modes).scale(0.5 * HBAR),
        }
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.t
    }

    pub fn modes(&self) -> usize {
        self.t.nrows() / 2
    }
}

/// Bob's covariance after Alice's measurement:
/// `V_β^A = V_β − Cᵀ (T + V_α)⁻¹ C`. It does not depend on Alice's outcome.
pub fn conditioned_cm(v: &CovarianceMatrix, t: &GaussianMeasurement) -> Result<RealMatrix> {
    if t.modes() != v.m_alpha {
        return Err(Error::DimensionMismatch(format!(
            "measurement on {} modes for Alice's {} modes",
            t.modes(),
            v.m_alpha
        )));
    }
    let c = v.cross_block();
    let sum = t.matrix() + v.alice_block();
    let solved = sum.lu().solve(&c).ok_or(Error::Singular("T + V_alpha"))?;
    let out = v.bob_block() - c.transpose() * solved;
    Ok(symmetrize(out))
}

/// `U = V_β − Cᵀ V_α⁻¹ C`.
pub fn schur_complement_u(v: &CovarianceMatrix) -> Result<RealMatrix> {
    let c = v.cross_block();
    let solved = v.alice_block().lu().solve(&c).ok_or(Error::Singular("V_alpha"))?;
    Ok(symmetrize(v.bob_block() - c.transpose() * solved))
}

fn symmetrize(m: RealMatrix) -> RealMatrix {
    (&m + m.transpose()).scale(0.5)
}

/// Margin of `U + iΣ_β ≥ 0` for a Bob-side covariance block.
pub fn bob_uncertainty_margin(u: &RealMatrix) -> Result<PsdMargin> {
    check_symmetric(u)?;
    qcore::psd_margin(&lmi_matrix(u, u.nrows() / 2, true, true))
}

/// Margin of `a − b ≥ 0` for real symmetric matrices.
pub fn real_psd_margin(a: &RealMatrix, b: &RealMatrix) -> Result<PsdMargin> {
    let d = symmetrize(a - b);
    qcore::psd_margin(&d.map(|x| C64::new(x, 0.0)))
}

/// Reid product `V(q_β|q_α)·V(p_β|p_α)` with
/// `V(x_β|x_α) = V(x_β) − C_x²/V(x_α)`; the EPR paradox is demonstrated iff
/// it falls below [`REID_BOUND`]. Needs a standard-form two-mode matrix.
pub fn reid_product(v: &CovarianceMatrix) -> Result<f64> {
    if v.m_alpha != 1 || v.m_beta != 1 {
        return Err(Error::NotStandardForm(format!(
            "needs one mode per side, got {}+{}",
            v.m_alpha, v.m_beta
        )));
    }
    if !v.is_standard_form() {
        return Err(Error::NotStandardForm("off-diagonal block entries are non-zero".into()));
    }
    let m = &v.matrix;
    let cond = |x: usize| m[(2 + x, 2 + x)] - m[(x, 2 + x)].powi(2) / m[(x, x)];
    Ok(cond(0) * cond(1))
}

/// Random symplectic matrix `exp(J·H)` with `H` a symmetric matrix of
/// Gaussian entries scaled by `scale`.
pub fn random_symplectic<R: Rng + ?Sized>(modes: usize, scale: f64, rng: &mut R) -> RealMatrix {
    let n = 2 * modes;
    let mut h = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let x: f64 = rng.sample::<f64, _>(rand_distr::StandardNormal) * scale;
            h[(i, j)] = x;
            h[(j, i)] = x;
        }
    }
    (SymplecticForm::new(modes).matrix() * h).exp()
}

/// Random physical covariance matrix `S·D·Sᵀ` with symplectic eigenvalues
/// `ν_k ∈ [½, ½·nu_max]` (Williamson form), rejection-filtered for validity.
pub fn random_valid_cm<R: Rng + ?Sized>(m_alpha: usize, m_beta: usize, nu_max: f64, rng: &mut R) -> CovarianceMatrix {
    let modes = m_alpha + m_beta;
    loop {
        let s = random_symplectic(modes, 0.4, rng);
        let mut d = DVector::zeros(2 * modes);
        for k in 0..modes {
            let nu = 0.5 * HBAR * rng.random_range(1.0..nu_max);
            d[2 * k] = nu;
            d[2 * k + 1] = nu;
        }
        let v = symmetrize(&s * RealMatrix::from_diagonal(&d) * s.transpose());
        if let Ok(cm) = CovarianceMatrix::new(m_alpha, m_beta, v) {
            if is_valid_state(&cm) {
                return cm;
            }
        }
    }
}

/// Random valid standard-form two-mode covariance matrix. Half the draws are
/// squeezed, noisy, locally squeezed two-mode squeezed vacua; the rest are
/// uniform diagonal entries kept only when physical.
pub fn random_standard_form_cm<R: Rng + ?Sized>(rng: &mut R) -> CovarianceMatrix {
    loop {
        let m = if rng.random_bool(0.5) {
            let r: f64 = rng.random_range(0.0..1.5);
            let (na, nb) = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
            let (sa, sb): (f64, f64) = (rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7));
            let base = CovarianceMatrix::two_mode_squeezed(r).with_added_noise(na, nb);
            let scale = DVector::from_vec(vec![sa.exp(), (-sa).exp(), sb.exp(), (-sb).exp()]);
            RealMatrix::from_fn(4, 4, |i, j| scale[i] * base.matrix[(i, j)] * scale[j])
        } else {
            let a = [rng.random_range(0.5..3.0), rng.random_range(0.5..3.0)];
            let b = [rng.random_range(0.5..3.0), rng.random_range(0.5..3.0)];
            let c = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let mut m = RealMatrix::zeros(4, 4);
            for x in 0..2 {
                m[(x, x)] = a[x];
                m[(2 + x, 2 + x)] = b[x];
                m[(x, 2 + x)] = c[x];
                m[(2 + x, x)] = c[x];
            }
            m
        };
        if let Ok(cm) = CovarianceMatrix::new(1, 1, m) {
            if is_valid_state(&cm) {
                return cm;
            }
        }
    }
}

/// Random Gaussian measurement `T = S·diag(ν)·Sᵀ`, `ν ≥ ħ/2`.
pub fn random_measurement<R: Rng + ?Sized>(modes: usize, rng: &mut R) -> GaussianMeasurement {
    let s = random_symplectic(modes, 0.8, rng);
    let mut d = DVector::zeros(2 * modes);
    for k in 0..modes {
        let nu = 0.5 * HBAR * rng.random_range(1.0..3.0);
        d[2 * k] = nu;
        d[2 * k + 1] = nu;
    }
    let t = symmetrize(&s * RealMatrix::from_diagonal(&d) * s.transpose());
    GaussianMeasurement::new(t).expect("Williamson form is a valid measurement")
}

/// JSON form of a covariance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceDocument {
    pub hbar: f64,
    pub modes_alice: usize,
    pub modes_bob: usize,
    /// Row-major, `2(modes_alice + modes_bob)` rows.
    pub matrix: Vec<Vec<f64>>,
}

impl CovarianceDocument {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidDocument(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

impl TryFrom<&CovarianceDocument> for CovarianceMatrix {
    type Error = Error;

    fn try_from(doc: &CovarianceDocument) -> Result<Self> {
        if doc.hbar != HBAR {
            return Err(Error::InvalidDocument(format!(
                "only hbar = 1 is supported, got {}",
                doc.hbar
            )));
        }
        let n = 2 * (doc.modes_alice + doc.modes_bob);
        if doc.matrix.len() != n || doc.matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidDocument(format!(
                "matrix must be {n}x{n} for {}+{} modes",
                doc.modes_alice, doc.modes_bob
            )));
        }
        let m = RealMatrix::from_fn(n, n, |i, j| doc.matrix[i][j]);
        CovarianceMatrix::new(doc.modes_alice, doc.modes_bob, m).map_err(|e| match e {
            Error::NotSymmetric { .. } | Error::DimensionMismatch(_) | Error::InvalidArgument(_) => {
                Error::InvalidDocument(e.to_string())
            }
            other => other,
        })
    }
}

impl From<&CovarianceMatrix> for CovarianceDocument {
    fn from(v: &CovarianceMatrix) -> Self {
        let n = v.matrix.nrows();
        Self {
            hbar: HBAR,
            modes_alice: v.m_alpha,
            modes_bob: v.m_beta,
            matrix: (0..n).map(|i| (0..n).map(|j| v.matrix[(i, j)]).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn symplectic_form_squares_to_minus_identity() {
        let j = SymplecticForm::new(3);
        let m = j.matrix();
        assert_eq!(m.transpose(), -m.clone());
        assert_eq!(m * m, -RealMatrix::identity(6, 6));
        assert_eq!(j.modes(), 3);
    }

    #[test]
    fn vacuum_saturates_validity() {
        let v = CovarianceMatrix::vacuum(1, 1);
        let m = validity_margin(&v);
        assert!(m.min_eigenvalue.abs() < 1e-10);
        assert!(is_valid_state(&v));
    }

    #[test]
    fn sub_vacuum_noise_is_invalid() {
        let v = CovarianceMatrix::new(1, 1, RealMatrix::identity(4, 4).scale(0.25)).unwrap();
        assert!(!is_valid_state(&v));
        assert!(matches!(
            steerable_by_alice(&v),
            Err(Error::UnphysicalCovariance { .. })
        ));
    }

    #[test]
    fn tmsv_is_valid() {
        // Oracle: TMSV is S(r)·(I/2)·S(r)ᵀ, pure, so the validity LMI is
        // saturated: two symplectic eigenvalues equal to 1/2.
        let v = CovarianceMatrix::two_mode_squeezed(1.0);
        let m = validity_margin(&v);
        assert!(m.is_psd());
        assert!(m.min_eigenvalue.abs() < 1e-9);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let mut m = RealMatrix::identity(4, 4);
        m[(0, 1)] = 0.1;
        assert!(matches!(
            CovarianceMatrix::new(1, 1, m),
            Err(Error::NotSymmetric { .. })
        ));
        assert!(CovarianceMatrix::new(1, 1, RealMatrix::identity(6, 6)).is_err());
    }

    #[test]
    fn products_are_not_steerable() {
        let mut r = rng(3);
        for _ in 0..50 {
            let a = random_valid_cm(1, 1, 3.0, &mut r);
            let b = random_valid_cm(1, 1, 3.0, &mut r);
            let v = CovarianceMatrix::product(&a.alice_block(), &b.bob_block()).unwrap();
            assert!(!steerable_by_alice(&v).unwrap());
            assert!(!steerable_by_bob(&v).unwrap());
        }
    }

    #[test]
    fn tmsv_steering_margin_is_monotone_in_r() {
        assert!(steerable_by_alice(&CovarianceMatrix::two_mode_squeezed(1.0)).unwrap());
        let grid: Vec<f64> = (1..=40).map(|k| 0.025 * k as f64).collect();
        let margins: Vec<f64> = grid
            .iter()
            .map(|&r| alice_steering_margin(&CovarianceMatrix::two_mode_squeezed(r)).min_eigenvalue)
            .collect();
        assert!(margins.windows(2).all(|w| w[1] < w[0]));
        assert!(margins.iter().all(|&m| m < 0.0));
        // r → 0: the violation vanishes; at r = 1e-8 it is below the
        // resolution of the PSD tolerance.
        let tiny = alice_steering_margin(&CovarianceMatrix::two_mode_squeezed(1e-8));
        assert!(tiny.is_boundary());
        assert!(tiny.min_eigenvalue < 1e-15);
    }

    #[test]
    fn tmsv_is_symmetric_under_swap() {
        for r in [0.1, 0.5, 1.0] {
            let v = CovarianceMatrix::two_mode_squeezed(r);
            assert_eq!(steerable_by_alice(&v).unwrap(), steerable_by_bob(&v).unwrap());
            let a = alice_steering_margin(&v).min_eigenvalue;
            let b = alice_steering_margin(&v.swapped()).min_eigenvalue;
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn one_sided_noise_gives_one_way_steering() {
        // Grid search for Alice-side noise that leaves Alice able to steer
        // Bob while Bob cannot steer Alice.
        let base = CovarianceMatrix::two_mode_squeezed(1.0);
        let found = (1..100).map(|k| 0.01 * k as f64).find(|&n| {
            let v = base.with_added_noise(n, 0.0);
            steerable_by_alice(&v).unwrap() && !steerable_by_bob(&v).unwrap()
        });
        let n = found.expect("asymmetric noise level exists");
        // Closed form: Bob steers Alice iff n + 1/(4c) < 1/2, Alice steers
        // Bob iff (1/4 + n c)/(c + n) < 1/2, with c = cosh(2)/2.
        let c = 0.5 * 2f64.cosh();
        assert!(n + 1.0 / (4.0 * c) >= 0.5 - 1e-9);
        assert!((0.25 + n * c) / (c + n) < 0.5);
    }

    #[test]
    fn conditioned_cm_cases() {
        let mut r = rng(4);
        let a = random_valid_cm(1, 1, 3.0, &mut r);
        let v = CovarianceMatrix::product(&a.alice_block(), &a.bob_block()).unwrap();
        let t = random_measurement(1, &mut r);
        assert!((conditioned_cm(&v, &t).unwrap() - v.bob_block()).abs().max() < 1e-15);

        // Homodyne q on a TMSV squeezes Bob's q to 1/(2 cosh 2r).
        let rr = 0.7;
        let v = CovarianceMatrix::two_mode_squeezed(rr);
        let t = GaussianMeasurement::homodyne_q(1, 1e-8).unwrap();
        let vb = conditioned_cm(&v, &t).unwrap();
        assert!((vb[(0, 0)] - 1.0 / (2.0 * (2.0 * rr).cosh())).abs() < 1e-7);

        for _ in 0..50 {
            let v = random_valid_cm(2, 1, 3.0, &mut r);
            let t = random_measurement(2, &mut r);
            let vb = conditioned_cm(&v, &t).unwrap();
            assert!(symmetry_deviation(&vb) < 1e-14);
            assert!(real_psd_margin(&v.bob_block(), &vb).unwrap().is_psd());
        }
        let bad = GaussianMeasurement::heterodyne(2);
        assert!(conditioned_cm(&CovarianceMatrix::two_mode_squeezed(0.3), &bad).is_err());
    }

    #[test]
    fn invalid_measurement_rejected() {
        let t = RealMatrix::identity(2, 2).scale(0.1);
        assert!(GaussianMeasurement::new(t).is_err());
        assert!(GaussianMeasurement::homodyne_q(1, 0.0).is_err());
    }

    #[test]
    fn schur_complement_cases() {
        let v = CovarianceMatrix::product(
            &RealMatrix::identity(2, 2).scale(0.8),
            &RealMatrix::identity(2, 2).scale(1.3),
        )
        .unwrap();
        assert!((schur_complement_u(&v).unwrap() - v.bob_block()).abs().max() < 1e-15);
        let r = 0.5f64;
        let u = schur_complement_u(&CovarianceMatrix::two_mode_squeezed(r)).unwrap();
        let expect = 1.0 / (2.0 * (2.0 * r).cosh());
        assert!((expect - 0.3241).abs() < 1e-4);
        assert!((u - RealMatrix::identity(2, 2).scale(expect)).abs().max() < 1e-12);
    }

    #[test]
    fn non_steerable_states_give_valid_u() {
        let mut r = rng(5);
        let mut seen = 0;
        while seen < 100 {
            let v = random_valid_cm(1, 1, 4.0, &mut r);
            if steerable_by_alice(&v).unwrap() {
                continue;
            }
            seen += 1;
            let u = schur_complement_u(&v).unwrap();
            assert!(bob_uncertainty_margin(&u).unwrap().min_eigenvalue >= -1e-9);
        }
    }

    #[test]
    fn reid_examples() {
        let vac = CovarianceMatrix::vacuum(1, 1);
        assert!((reid_product(&vac).unwrap() - 0.25).abs() < 1e-15);
        let r = 1.0f64;
        let p = reid_product(&CovarianceMatrix::two_mode_squeezed(r)).unwrap();
        let oracle = 1.0 / (4.0 * (2.0 * r).cosh().powi(2));
        assert!((p - oracle).abs() < 1e-12);
        assert!((p - 0.01766).abs() < 1e-5);
        let mut prev = 0.0;
        for r in [0.3, 0.1, 0.03, 0.01, 0.001] {
            let p = reid_product(&CovarianceMatrix::two_mode_squeezed(r)).unwrap();
            assert!(p < 0.25 && p > prev);
            prev = p;
        }
    }

    #[test]
    fn reid_rejects_non_standard_form() {
        let mut r = rng(6);
        let v = random_valid_cm(1, 1, 2.0, &mut r);
        assert!(matches!(reid_product(&v), Err(Error::NotStandardForm(_))));
        assert!(reid_product(&CovarianceMatrix::vacuum(2, 1)).is_err());
    }

    #[test]
    fn bob_noise_never_helps_alice() {
        let mut r = rng(7);
        for _ in 0..20 {
            let v = random_valid_cm(1, 1, 2.0, &mut r);
            let margins: Vec<f64> = (0..=20)
                .map(|k| alice_steering_margin(&v.with_added_noise(0.0, 0.1 * k as f64)).min_eigenvalue)
                .collect();
            assert!(margins.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        }
    }

    #[test]
    fn document_roundtrip_and_validation() {
        let v = CovarianceMatrix::two_mode_squeezed(0.4);
        let doc = CovarianceDocument::from(&v);
        let back = CovarianceMatrix::try_from(&CovarianceDocument::from_json(&doc.to_json()).unwrap()).unwrap();
        assert_eq!(back, v);
        let mut bad = doc.clone();
        bad.hbar = 2.0;
        assert!(matches!(CovarianceMatrix::try_from(&bad), Err(Error::InvalidDocument(_))));
        let mut bad = doc;
        bad.matrix.pop();
        assert!(CovarianceMatrix::try_from(&bad).is_err());
        assert!(CovarianceDocument::from_json("{\"hbar\": 1}").is_err());
    }
}
