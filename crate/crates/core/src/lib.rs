//! Numerical toolkit for quantum steering.
//!
//! The crate builds the Werner and isotropic bipartite state families, the
//! Haar-covariant local-hidden-state (LHS) models that reproduce them below
//! their steering thresholds, and the covariance-matrix machinery that decides
//! steerability of Gaussian states under Gaussian measurements. A simulator of
//! the two-party steering task ties the pieces together.
//!
//! Modules:
//!
//! * [`qcore`]: dense complex linear algebra, Haar sampling, PSD checks.
//! * [`states`]: state families, conditioned ensembles, PPT and CHSH criteria.
//! * [`lhs`]: response functions, optimal ensembles, overlap bounds, witnesses.
//! * [`gaussian`]: covariance matrices, the steering LMI, Reid's EPR product.
//! * [`protocol`]: honest and cheating provers against a verifying Bob.
//! * [`stats`]: small statistical helpers shared by the Monte-Carlo code.

pub mod error;
pub mod gaussian;
pub mod lhs;
pub mod protocol;
pub mod qcore;
pub mod states;
pub mod stats;

pub use error::{Error, Result};
pub use gaussian::{CovarianceMatrix, GaussianMeasurement};
pub use lhs::{LhsEnsemble, ResponseFunction, Verdict, WitnessDirection, WitnessReport};
pub use protocol::{AliceAgent, RunRecord, VerificationReport};
pub use qcore::{ComplexMatrix, HaarSampler, StateVector, Subsystem, C64};
pub use states::{ConditionedEnsemble, DensityMatrix, Family, FamilySpec, ProjectiveBasis};
