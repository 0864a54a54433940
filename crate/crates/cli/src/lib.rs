//! Subcommand implementations for the `steer` binary.
//!
//! Every command returns its output as a string so the binary only has to
//! print it and map errors to exit codes.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use steering_core::gaussian::{self, CovarianceDocument};
use steering_core::lhs::{self, ETA_BELL_UPPER_D2};
use steering_core::protocol::{self, Mode, ProtocolOptions};
use steering_core::qcore::PsdMargin;
use steering_core::{CovarianceMatrix, Error as CoreError, Family, FamilySpec};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID_INPUT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Invalid input that still produced a report worth printing.
    #[error("invalid input: {message}")]
    Rejected { message: String, report: String },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::InvalidInput(_) | CliError::Rejected { .. } => EXIT_INVALID_INPUT,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        use CoreError::*;
        match e {
            EtaOutOfRange(_) | DimensionTooSmall(_) | InvalidArgument(_) | MissingBasis(_) => {
                CliError::Usage(e.to_string())
            }
            InvalidDocument(_) => CliError::Usage(e.to_string()),
            UnphysicalCovariance { .. } | InvalidMeasurement(_) | NotStandardForm(_) | InvalidDensityMatrix(_)
            | InvalidEnsemble(_) | NotOrthonormal { .. } | NotSymmetric { .. } => CliError::InvalidInput(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn require_dim(d: usize) -> CliResult<()> {
    if d < 2 {
        return Err(CliError::Usage(format!("dimension must be at least 2, got {d}")));
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Output goes to `out` if given, else is returned for stdout.
fn emit(text: String, out: Option<&Path>) -> CliResult<String> {
    match out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| CliError::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn cmd_thresholds(d: usize) -> CliResult<String> {
    require_dim(d)?;
    let mut s = String::new();
    writeln!(s, "d                  {d}").unwrap();
    writeln!(s, "eta_ent            {:.6}", lhs::eta_ent(d)).unwrap();
    writeln!(s, "eta_steer_werner   {:.6}", lhs::eta_steer(Family::Werner, d)).unwrap();
    writeln!(s, "eta_steer_iso      {:.6}", lhs::eta_steer(Family::Isotropic, d)).unwrap();
    if d == 2 {
        writeln!(s, "eta_bell_upper     {ETA_BELL_UPPER_D2:.6}").unwrap();
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryRow {
    pub d: usize,
    pub eta_ent: f64,
    pub eta_steer_werner: f64,
    pub eta_steer_iso: f64,
}

impl BoundaryRow {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            eta_ent: lhs::eta_ent(d),
            eta_steer_werner: lhs::eta_steer(Family::Werner, d),
            eta_steer_iso: lhs::eta_steer(Family::Isotropic, d),
        }
    }
}

pub const BOUNDARY_HEADER: &str = "d,eta_ent,eta_steer_werner,eta_steer_iso";

pub fn boundary_csv(d_max: usize) -> CliResult<String> {
    require_dim(d_max)?;
    let mut s = String::from(BOUNDARY_HEADER);
    s.push('\n');
    for d in 2..=d_max {
        let r = BoundaryRow::new(d);
        if !(r.eta_ent < r.eta_steer_werner && r.eta_ent < r.eta_steer_iso) {
            return Err(CliError::Numerical(format!("threshold hierarchy broken at d = {d}")));
        }
        writeln!(
            s,
            "{},{:.6},{:.6},{:.6}",
            r.d, r.eta_ent, r.eta_steer_werner, r.eta_steer_iso
        )
        .unwrap();
    }
    Ok(s)
}

/// Nothing is written unless every row was computed.
pub fn cmd_boundary(d_max: usize, out: Option<&Path>) -> CliResult<String> {
    emit(boundary_csv(d_max)?, out)
}

#[derive(Debug, Clone, Serialize)]
pub struct MarginReport {
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub boundary: bool,
}

impl From<PsdMargin> for MarginReport {
    fn from(m: PsdMargin) -> Self {
        Self {
            min_eigenvalue: m.min_eigenvalue,
            tolerance: m.tolerance,
            boundary: m.is_boundary(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Margins {
    pub validity: MarginReport,
    pub alice_steers_bob: MarginReport,
    pub bob_steers_alice: MarginReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussianReport {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steerable_by_alice: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steerable_by_bob: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reid_product: Option<f64>,
    pub margins: Margins,
}

pub fn gaussian_report(v: &CovarianceMatrix) -> CliResult<GaussianReport> {
    let validity = gaussian::validity_margin(v);
    let margins = Margins {
        validity: validity.into(),
        alice_steers_bob: gaussian::alice_steering_margin(v).into(),
        bob_steers_alice: gaussian::bob_steering_margin(v).into(),
    };
    if !validity.is_psd() {
        return Ok(GaussianReport {
            valid: false,
            steerable_by_alice: None,
            steerable_by_bob: None,
            reid_product: None,
            margins,
        });
    }
    let reid_product = if v.modes_alice() == 1 && v.modes_bob() == 1 && v.is_standard_form() {
        Some(gaussian::reid_product(v)?)
    } else {
        None
    };
    Ok(GaussianReport {
        valid: true,
        steerable_by_alice: Some(gaussian::steerable_by_alice(v)?),
        steerable_by_bob: Some(gaussian::steerable_by_bob(v)?),
        reid_product,
        margins,
    })
}

/// Checks a covariance-matrix document. An unphysical matrix still prints
/// its report but exits with [`EXIT_INVALID_INPUT`].
pub fn cmd_gaussian_check(path: &Path) -> CliResult<String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc = CovarianceDocument::from_json(&text)?;
    let v = CovarianceMatrix::try_from(&doc)?;
    let report = gaussian_report(&v)?;
    let json = to_json(&report);
    if !report.valid {
        return Err(CliError::Rejected {
            message: format!(
                "uncertainty relation violated (min eigenvalue {:e})",
                report.margins.validity.min_eigenvalue
            ),
            report: json,
        });
    }
    Ok(json)
}

pub fn family_spec(family: Family, d: usize, eta: f64) -> CliResult<FamilySpec> {
    require_dim(d)?;
    if !(0.0..=1.0).contains(&eta) {
        return Err(CliError::Usage(format!("eta must lie in [0, 1], got {eta}")));
    }
    Ok(FamilySpec::new(family, d, eta)?)
}

pub struct SimulateArgs {
    pub family: Family,
    pub d: usize,
    pub eta: f64,
    pub mode: Mode,
    pub runs: usize,
    pub seed: u64,
    pub tomography_noise: bool,
}

pub fn cmd_simulate(args: &SimulateArgs, out: Option<&Path>) -> CliResult<String> {
    let spec = family_spec(args.family, args.d, args.eta)?;
    if args.runs == 0 {
        return Err(CliError::Usage("--runs must be positive".into()));
    }
    let options = ProtocolOptions {
        tomography_noise: args.tomography_noise,
    };
    let report = protocol::simulate(&spec, args.mode, args.runs, args.seed, options)?;
    emit(to_json(&report), out)
}

pub fn cmd_witness(family: Family, d: usize, eta: f64, bases: usize, seed: u64) -> CliResult<String> {
    let spec = family_spec(family, d, eta)?;
    if bases == 0 {
        return Err(CliError::Usage("--bases must be positive".into()));
    }
    Ok(to_json(&lhs::steering_witness(&spec, bases, seed)?))
}
