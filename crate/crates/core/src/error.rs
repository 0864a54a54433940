use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not symmetric (max deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },

    #[error("eta = {0} lies outside [0, 1]")]
    EtaOutOfRange(f64),

    #[error("local dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("basis vectors are not orthonormal (Gram deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("covariance matrix violates the uncertainty relation (min eigenvalue {min_eigenvalue:.3e})")]
    UnphysicalCovariance { min_eigenvalue: f64 },

    #[error("invalid Gaussian measurement: {0}")]
    InvalidMeasurement(String),

    #[error("singular matrix: {0}")]
    Singular(&'static str),

    #[error("covariance matrix is not in standard form: {0}")]
    NotStandardForm(String),

    #[error("invalid covariance document: {0}")]
    InvalidDocument(String),

    #[error("root is not bracketed: f({lo}) and f({hi}) share a sign")]
    NotBracketed { lo: f64, hi: f64 },

    #[error("basis {0} has no announced ensemble")]
    MissingBasis(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
