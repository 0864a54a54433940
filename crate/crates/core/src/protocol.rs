//! The two-party steering task.
//!
//! Bob asks for one of a fixed menu of measurement bases at random; Alice
//! announces an outcome and Bob receives his half of the state. An honest
//! Alice measures a shared family state. A cheating Alice holds no
//! entanglement: she draws a hidden state from an LHS ensemble, sends it and
//! announces what her response function dictates. Bob aggregates the runs,
//! checks the announced ensembles against what he received, and certifies
//! steering only if the ensembles check out *and* the overlap witness beats
//! every LHS model.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lhs::{self, Draw, LhsEnsemble, Verdict, WitnessReport};
use crate::qcore::{self, ComplexMatrix, HaarSampler, StateVector, C64};
use crate::states::{self, ConditionedEnsemble, Family, FamilySpec, ProjectiveBasis};
use crate::stats::{self, Moments, THREE_SIGMA_TAIL};

/// Runs per parallel work unit.
pub const RUN_CHUNK: usize = 1 << 13;

/// Trace-distance consistency threshold in units of its standard error.
pub const TRACE_DISTANCE_SIGMAS: f64 = 5.0;

/// Absolute slack on trace distances (exact states still differ by
/// rounding).
pub const TRACE_DISTANCE_FLOOR: f64 = 1e-9;

/// Cells with fewer runs than this skip the trace-distance test; their
/// frequency is still covered by the chi-square test.
pub const MIN_CELL_RUNS: u64 = 30;

/// Haar-random bases on Bob's menu besides the computational one.
pub const DEFAULT_RANDOM_BASES: usize = 10;

/// The prover.
#[derive(Debug, Clone)]
pub enum AliceAgent {
    /// Shares the given family state with Bob and measures honestly.
    Honest(FamilySpec),
    /// Sends hidden states from an LHS ensemble.
    Cheating(LhsEnsemble),
}

impl AliceAgent {
    pub fn dim(&self) -> usize {
        match self {
            AliceAgent::Honest(spec) => spec.d(),
            AliceAgent::Cheating(f) => f.dim(),
        }
    }
}

/// What Bob holds after a run.
#[derive(Debug, Clone, PartialEq)]
pub enum ReceivedState {
    /// Exact mixed state (shared between runs of the same cell).
    Mixed(Arc<ComplexMatrix>),
    /// Exact pure state.
    Pure(StateVector),
    /// Single-shot tomographic estimate (Hermitian, unit trace, not PSD).
    Estimate(ComplexMatrix),
}

impl ReceivedState {
    pub fn density(&self) -> ComplexMatrix {
        match self {
            ReceivedState::Mixed(m) => (**m).clone(),
            ReceivedState::Pure(v) => qcore::projector(v),
            ReceivedState::Estimate(m) => m.clone(),
        }
    }

    /// `⟨v|ρ|v⟩`.
    pub fn expectation(&self, v: &StateVector) -> f64 {
        match self {
            ReceivedState::Mixed(m) => qcore::expectation(m, v),
            ReceivedState::Pure(p) => v.dotc(p).norm_sqr(),
            ReceivedState::Estimate(m) => qcore::expectation(m, v),
        }
    }

    fn entry(&self, i: usize, j: usize) -> C64 {
        match self {
            ReceivedState::Mixed(m) => m[(i, j)],
            ReceivedState::Pure(p) => p[i] * p[j].conj(),
            ReceivedState::Estimate(m) => m[(i, j)],
        }
    }
}

/// One round of the task.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    /// Index into Bob's basis menu.
    pub basis: usize,
    pub outcome: usize,
    pub state: ReceivedState,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolOptions {
    /// Replace Bob's exact access by a single-shot estimate per run: a
    /// measurement in a Haar-random basis with outcome `k` yields
    /// `(d+1)|b_k⟩⟨b_k| − I`, unbiased for the received state.
    pub tomography_noise: bool,
}

/// Bob's default menu: the computational basis plus `n_random` Haar-random
/// bases.
pub fn default_bases(d: usize, n_random: usize, seed: u64) -> Vec<ProjectiveBasis> {
    let mut sampler = HaarSampler::with_stream(d, seed, u64::MAX);
    std::iter::once(ProjectiveBasis::computational(d))
        .chain((0..n_random).map(|_| ProjectiveBasis::haar_random(&mut sampler)))
        .collect()
}

struct HonestCell {
    cumulative: Vec<f64>,
    states: Vec<Option<Arc<ComplexMatrix>>>,
}

fn shadow_estimate(state: &ReceivedState, sampler: &mut HaarSampler) -> ReceivedState {
    let d = sampler.dim();
    let basis = ProjectiveBasis::haar_random(sampler);
    let u: f64 = sampler.rng().random();
    let mut acc = 0.0;
    let mut k = d - 1;
    for a in 0..d {
        acc += state.expectation(&basis.vector(a)).max(0.0);
        if u < acc {
            k = a;
            break;
        }
    }
    let est = basis.projector(k).scale(d as f64 + 1.0) - qcore::identity(d);
    ReceivedState::Estimate(est)
}

pub fn run_protocol(
    alice: &AliceAgent,
    bases: &[ProjectiveBasis],
    n_runs: usize,
    seed: u64,
) -> Result<Vec<RunRecord>> {
    run_protocol_with(alice, bases, n_runs, seed, ProtocolOptions::default())
}

/// Simulates `n_runs` rounds. Each run picks a basis uniformly from
/// `bases`. Runs are generated in fixed chunks with independent generator
/// streams and returned in run order.
pub fn run_protocol_with(
    alice: &AliceAgent,
    bases: &[ProjectiveBasis],
    n_runs: usize,
    seed: u64,
    options: ProtocolOptions,
) -> Result<Vec<RunRecord>> {
    if n_runs == 0 {
        return Err(Error::InvalidArgument("need at least one run".into()));
    }
    if bases.is_empty() {
        return Err(Error::InvalidArgument("Bob needs at least one basis".into()));
    }
    let d = alice.dim();
    if let Some(b) = bases.iter().find(|b| b.dim() != d) {
        return Err(Error::DimensionMismatch(format!(
            "basis of dimension {} for Alice's dimension {d}",
            b.dim()
        )));
    }
    let honest: Option<Vec<HonestCell>> = match alice {
        AliceAgent::Honest(spec) => {
            let w = spec.state();
            let cells = bases
                .iter()
                .map(|b| {
                    let ens = states::conditioned_ensemble(&w, b)?;
                    let mut total = 0.0;
                    let cumulative = ens
                        .probabilities()
                        .iter()
                        .map(|p| {
                            total += p.max(0.0);
                            total
                        })
                        .collect();
                    let states = (0..ens.len()).map(|a| ens.normalized(a).map(Arc::new)).collect();
                    Ok(HonestCell { cumulative, states })
                })
                .collect::<Result<Vec<_>>>()?;
            Some(cells)
        }
        AliceAgent::Cheating(_) => None,
    };

    let chunks = n_runs.div_ceil(RUN_CHUNK);
    let parts: Vec<Vec<RunRecord>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let len = RUN_CHUNK.min(n_runs - k * RUN_CHUNK);
            let mut sampler = HaarSampler::with_stream(d, seed, k as u64);
            let mut buf = vec![C64::new(0.0, 0.0); d];
            let mut scratch = vec![0.0; d];
            let mut out = Vec::with_capacity(len);
            for _ in 0..len {
                let b = sampler.rng().random_range(0..bases.len());
                let (outcome, state) = match (alice, &honest) {
                    (AliceAgent::Honest(_), Some(cells)) => {
                        let cell = &cells[b];
                        let total = *cell.cumulative.last().expect("non-empty");
                        let u: f64 = sampler.rng().random::<f64>() * total;
                        let a = cell
                            .cumulative
                            .partition_point(|&c| c <= u)
                            .min(cell.cumulative.len() - 1);
                        let st = cell.states[a].clone().expect("sampled outcome has positive weight");
                        (a, ReceivedState::Mixed(st))
                    }
                    (AliceAgent::Cheating(f), _) => {
                        let draw = f.draw(&mut sampler, &mut buf);
                        let a = f.respond(&bases[b], &draw, &buf, &mut scratch);
                        let psi = match draw {
                            Draw::Fresh => StateVector::from_column_slice(&buf),
                            Draw::Member(m) => m.state().clone(),
                        };
                        (a, ReceivedState::Pure(psi))
                    }
                    _ => unreachable!("honest cells exist for an honest agent"),
                };
                let state = if options.tomography_noise {
                    shadow_estimate(&state, &mut sampler)
                } else {
                    state
                };
                out.push(RunRecord {
                    basis: b,
                    outcome,
                    state,
                });
            }
            out
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

/// Alice's claim: the family whose witness Bob should evaluate, and the
/// conditioned ensemble she promises for every basis on Bob's menu.
#[derive(Debug, Clone)]
pub struct Announcement {
    pub family: Family,
    pub bases: Vec<ProjectiveBasis>,
    pub ensembles: Vec<ConditionedEnsemble>,
}

impl Announcement {
    /// The true conditioned ensembles of `spec` on each basis.
    pub fn for_state(spec: &FamilySpec, bases: &[ProjectiveBasis]) -> Result<Self> {
        let w = spec.state();
        let ensembles = bases
            .iter()
            .map(|b| states::conditioned_ensemble(&w, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            family: spec.family(),
            bases: bases.to_vec(),
            ensembles,
        })
    }
}

/// Serializable complex matrix: rows of `[re, im]` pairs.
pub type MatrixRows = Vec<Vec<[f64; 2]>>;

fn to_rows(m: &ComplexMatrix) -> MatrixRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub basis: usize,
    pub outcome: usize,
    pub count: u64,
    pub frequency: f64,
    pub expected_frequency: f64,
    /// Trace distance between Bob's averaged received state and the
    /// announced normalized state; absent for cells below
    /// [`MIN_CELL_RUNS`].
    pub trace_distance: Option<f64>,
    pub trace_distance_se: Option<f64>,
    pub consistent: bool,
    /// Bob's averaged received state for this cell.
    pub empirical_state: Option<MatrixRows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisReport {
    pub basis: usize,
    pub runs: u64,
    pub chi_square: f64,
    pub dof: usize,
    pub p_value: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n_runs: usize,
    pub family: Family,
    pub d: usize,
    pub cells: Vec<CellReport>,
    pub bases: Vec<BasisReport>,
    pub max_trace_distance: f64,
    /// Largest `trace_distance / se` over tested cells.
    pub max_trace_distance_sigmas: f64,
    /// Chi-square statistic summed over bases.
    pub frequency_chi_square: f64,
    /// Per-basis significance level after Bonferroni correction.
    pub frequency_alpha: f64,
    /// All announced states and frequencies are reproduced.
    pub consistent: bool,
    pub witness: WitnessReport,
    /// `Steering` only when `consistent` and the witness certifies.
    pub verdict: Verdict,
}

#[derive(Clone)]
struct CellAcc {
    count: u64,
    sum: Vec<C64>,
    sq: Vec<f64>,
}

/// Aggregates `records` against Alice's announcement.
pub fn verify(records: &[RunRecord], announced: &Announcement) -> Result<VerificationReport> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no runs to verify".into()));
    }
    let n_bases = announced.bases.len();
    if announced.ensembles.len() != n_bases {
        return Err(Error::InvalidArgument("one announced ensemble per basis required".into()));
    }
    let d = announced.bases.first().map(|b| b.dim()).ok_or(Error::MissingBasis(0))?;
    if let Some(r) = records.iter().find(|r| r.basis >= n_bases) {
        return Err(Error::MissingBasis(r.basis));
    }
    if let Some(r) = records.iter().find(|r| r.outcome >= announced.ensembles[r.basis].len()) {
        return Err(Error::InvalidArgument(format!("outcome {} out of range", r.outcome)));
    }
    let frames: Vec<ProjectiveBasis> = announced
        .bases
        .iter()
        .map(|b| announced.family.bob_frame(b))
        .collect();
    let frame_vecs: Vec<Vec<StateVector>> = frames
        .iter()
        .map(|f| (0..d).map(|a| f.vector(a)).collect())
        .collect();

    let n_out = d;
    let mut cells = vec![
        CellAcc {
            count: 0,
            sum: vec![C64::new(0.0, 0.0); d * d],
            sq: vec![0.0; d * d],
        };
        n_bases * n_out
    ];
    let mut witness = Moments::default();
    for r in records {
        let cell = &mut cells[r.basis * n_out + r.outcome];
        cell.count += 1;
        for i in 0..d {
            for j in 0..d {
                let z = r.state.entry(i, j);
                cell.sum[i * d + j] += z;
                cell.sq[i * d + j] += z.norm_sqr();
            }
        }
        witness.push(r.state.expectation(&frame_vecs[r.basis][r.outcome]));
    }

    let alpha = 2.0 * THREE_SIGMA_TAIL / n_bases as f64;
    let mut cell_reports = Vec::with_capacity(cells.len());
    let mut basis_reports = Vec::with_capacity(n_bases);
    let mut max_td = 0.0f64;
    let mut max_sig = 0.0f64;
    let mut chi_total = 0.0;
    let mut consistent = true;
    for b in 0..n_bases {
        let ens = &announced.ensembles[b];
        let probs = ens.probabilities();
        let counts: Vec<u64> = (0..n_out).map(|a| cells[b * n_out + a].count).collect();
        let runs: u64 = counts.iter().sum();
        for a in 0..n_out {
            let acc = &cells[b * n_out + a];
            let mut report = CellReport {
                basis: b,
                outcome: a,
                count: acc.count,
                frequency: if runs > 0 { acc.count as f64 / runs as f64 } else { 0.0 },
                expected_frequency: probs[a],
                trace_distance: None,
                trace_distance_se: None,
                consistent: true,
                empirical_state: None,
            };
            if acc.count > 0 {
                let n = acc.count as f64;
                let mean = ComplexMatrix::from_fn(d, d, |i, j| acc.sum[i * d + j] / n);
                report.empirical_state = Some(to_rows(&mean));
                match ens.normalized(a) {
                    None => report.consistent = false,
                    Some(target) if acc.count >= MIN_CELL_RUNS => {
                        let var_sum: f64 = (0..d * d)
                            .map(|k| {
                                let m2 = acc.sq[k] / n;
                                let mu = (acc.sum[k] / n).norm_sqr();
                                (m2 - mu).max(0.0) / (n - 1.0)
                            })
                            .sum();
                        let se = 0.5 * (d as f64).sqrt() * var_sum.sqrt();
                        let td = qcore::trace_distance(&mean, &target)?;
                        report.consistent = td <= TRACE_DISTANCE_SIGMAS * se + TRACE_DISTANCE_FLOOR;
                        max_td = max_td.max(td);
                        if se > 0.0 {
                            max_sig = max_sig.max(td / se);
                        }
                        report.trace_distance = Some(td);
                        report.trace_distance_se = Some(se);
                    }
                    Some(_) => {}
                }
            }
            consistent &= report.consistent;
            cell_reports.push(report);
        }
        let (chi, dof) = stats::chi_square(&counts, &probs);
        let p_value = if runs == 0 { 1.0 } else { stats::chi_square_p_value(chi, dof) };
        let ok = p_value > alpha;
        consistent &= ok;
        if chi.is_finite() {
            chi_total += chi;
        } else {
            chi_total = f64::INFINITY;
        }
        basis_reports.push(BasisReport {
            basis: b,
            runs,
            chi_square: chi,
            dof,
            p_value,
            consistent: ok,
        });
    }

    let witness = WitnessReport::evaluate(
        announced.family,
        d,
        witness.mean(),
        witness.std_error(),
        records.len(),
    );
    let verdict = if consistent && witness.verdict == Verdict::Steering {
        Verdict::Steering
    } else {
        Verdict::NoSteeringDetected
    };
    Ok(VerificationReport {
        n_runs: records.len(),
        family: announced.family,
        d,
        cells: cell_reports,
        bases: basis_reports,
        max_trace_distance: max_td,
        max_trace_distance_sigmas: max_sig,
        frequency_chi_square: chi_total,
        frequency_alpha: alpha,
        consistent,
        witness,
        verdict,
    })
}

/// Bob's run-averaged unconditioned state for each basis on the menu.
pub fn bob_average_by_basis(records: &[RunRecord], n_bases: usize, d: usize) -> Vec<(u64, ComplexMatrix)> {
    let mut out = vec![(0u64, ComplexMatrix::zeros(d, d)); n_bases];
    for r in records {
        let (n, m) = &mut out[r.basis];
        *n += 1;
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] += r.state.entry(i, j);
            }
        }
    }
    for (n, m) in out.iter_mut() {
        if *n > 0 {
            m.unscale_mut(*n as f64);
        }
    }
    out
}

/// Honest or cheating play against a family claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Honest,
    Cheat,
}

/// End-to-end simulation: Bob's default menu, Alice announcing the true
/// ensembles of `spec`, and either honest play or the family's optimal LHS
/// model.
pub fn simulate(
    spec: &FamilySpec,
    mode: Mode,
    n_runs: usize,
    seed: u64,
    options: ProtocolOptions,
) -> Result<VerificationReport> {
    let bases = default_bases(spec.d(), DEFAULT_RANDOM_BASES, seed);
    let alice = match mode {
        Mode::Honest => AliceAgent::Honest(*spec),
        Mode::Cheat => AliceAgent::Cheating(LhsEnsemble::optimal(spec.family(), spec.d())),
    };
    let records = run_protocol_with(&alice, &bases, n_runs, seed, options)?;
    verify(&records, &Announcement::for_state(spec, &bases)?)
}

/// Convenience re-export so callers need not reach into [`lhs`].
pub use lhs::eta_steer;
