//! Local-hidden-state models for Bob.
//!
//! An LHS model is an ensemble of hidden pure states `{℘_ξ, |ψ_ξ⟩}` together
//! with a response function `℘(a|A, ξ)` that tells a cheating Alice what to
//! announce. For Werner and isotropic states the optimal ensemble is the
//! Haar-uniform one, paired with "announce the least overlapping outcome"
//! (Werner) or "announce the most overlapping outcome" (isotropic). Those
//! models reproduce the true conditioned states exactly at the steering
//! threshold, which the Monte-Carlo estimators here make checkable.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, HaarSampler, StateVector, C64};
use crate::states::{self, ConditionedEnsemble, Family, FamilySpec, ProjectiveBasis};
use crate::stats::Moments;

/// Samples per parallel work unit. Fixed so results are independent of the
/// number of worker threads.
pub const MC_CHUNK: usize = 1 << 14;

/// Default Monte-Carlo sample count.
pub const DEFAULT_SAMPLES: usize = 1_000_000;

/// Minimum sample count accepted by the Monte-Carlo estimators.
pub const MIN_SAMPLES: usize = 10_000;

/// Number of standard errors a witness must clear to certify steering.
pub const WITNESS_SIGMAS: f64 = 3.0;

/// Floor on a witness standard error. Exact statistics (zero sample
/// variance) are still only resolved to floating-point accuracy.
pub const WITNESS_SE_FLOOR: f64 = 1e-12;

/// Harmonic number `H_d = Σ_{n=1}^{d} 1/n`.
pub fn harmonic(d: usize) -> f64 {
    (1..=d).map(|n| 1.0 / n as f64).sum()
}

/// Entanglement threshold `1/(d+1)` shared by both families.
pub fn eta_ent(d: usize) -> f64 {
    1.0 / (d as f64 + 1.0)
}

/// Steering threshold: `1 − 1/d` (Werner) or `(H_d − 1)/(d − 1)` (isotropic).
pub fn eta_steer(family: Family, d: usize) -> f64 {
    let df = d as f64;
    match family {
        Family::Werner => 1.0 - 1.0 / df,
        Family::Isotropic => (harmonic(d) - 1.0) / (df - 1.0),
    }
}

/// Upper bound on `η_Bell` for the two-qubit Werner state (CHSH).
pub const ETA_BELL_UPPER_D2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn check_dims(basis: &ProjectiveBasis, psi: &[C64]) -> Result<()> {
    if basis.dim() != psi.len() {
        return Err(Error::DimensionMismatch(format!(
            "basis of dimension {} with a state of dimension {}",
            basis.dim(),
            psi.len()
        )));
    }
    Ok(())
}

fn argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x < xs[best] {
            best = i;
        }
    }
    best
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// Outcome whose basis vector overlaps least with `psi`; ties go to the
/// smallest index.
pub fn response_werner(basis: &ProjectiveBasis, psi: &[C64]) -> Result<usize> {
    check_dims(basis, psi)?;
    let mut ov = vec![0.0; basis.dim()];
    basis.overlaps_into(psi, &mut ov);
    Ok(argmin(&ov))
}

/// Outcome whose basis vector overlaps most with `psi`; ties go to the
/// smallest index.
pub fn response_iso(basis: &ProjectiveBasis, psi: &[C64]) -> Result<usize> {
    check_dims(basis, psi)?;
    let mut ov = vec![0.0; basis.dim()];
    basis.overlaps_into(psi, &mut ov);
    Ok(argmax(&ov))
}

/// Index in `0..d!` of the permutation that sorts `xs` ascending (stable).
fn ordering_index(xs: &[f64]) -> usize {
    let d = xs.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]).then(i.cmp(&j)));
    // Lehmer code of `order`.
    let mut idx = 0;
    for i in 0..d {
        let smaller = order[i + 1..].iter().filter(|&&x| x < order[i]).count();
        idx = idx * (d - i) + smaller;
    }
    idx
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Deterministic response `℘(a|A, ψ)`: given Alice's basis and Bob's hidden
/// state, the outcome Alice announces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ResponseFunction {
    /// Least-overlap rule, optimal for Werner states.
    WernerMin,
    /// Most-overlap rule against the conjugate basis, optimal for isotropic
    /// states.
    IsoMax,
    /// Always the same outcome.
    Constant(usize),
    /// Outcome looked up from the ascending ordering of the overlaps
    /// `|⟨a|ψ⟩|²`; `table[k]` answers the `k`-th permutation (Lehmer order).
    RankTable(Vec<usize>),
}

impl ResponseFunction {
    pub fn optimal(family: Family) -> Self {
        match family {
            Family::Werner => ResponseFunction::WernerMin,
            Family::Isotropic => ResponseFunction::IsoMax,
        }
    }

    /// Uniformly random rank table for dimension `d`.
    pub fn random_table<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        ResponseFunction::RankTable((0..factorial(d)).map(|_| rng.random_range(0..d)).collect())
    }

    fn validate(&self, d: usize) -> Result<()> {
        match self {
            ResponseFunction::Constant(a) if *a >= d => Err(Error::InvalidEnsemble(format!(
                "constant outcome {a} out of range for d = {d}"
            ))),
            ResponseFunction::RankTable(t) if t.len() != factorial(d) || t.iter().any(|&a| a >= d) => {
                Err(Error::InvalidEnsemble(format!(
                    "rank table needs {} entries in 0..{d}",
                    factorial(d)
                )))
            }
            _ => Ok(()),
        }
    }

    /// Announced outcome. `scratch` must hold `basis.dim()` entries.
    pub fn respond(&self, basis: &ProjectiveBasis, psi: &[C64], scratch: &mut [f64]) -> usize {
        match self {
            ResponseFunction::WernerMin => {
                basis.overlaps_into(psi, scratch);
                argmin(scratch)
            }
            ResponseFunction::IsoMax => {
                basis.conjugate().overlaps_into(psi, scratch);
                argmax(scratch)
            }
            ResponseFunction::Constant(a) => *a,
            ResponseFunction::RankTable(table) => {
                basis.overlaps_into(psi, scratch);
                table[ordering_index(scratch)]
            }
        }
    }
}

/// Group-rotated origin of a symmetrized member: the response is evaluated
/// on the original hidden state against the back-rotated basis.
#[derive(Debug, Clone, PartialEq)]
struct Transport {
    alice_adjoint: ComplexMatrix,
    origin: StateVector,
}

/// One hidden state `|ψ_ξ⟩` with prior weight `℘_ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenMember {
    state: StateVector,
    weight: f64,
    transport: Option<Transport>,
}

impl HiddenMember {
    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

#[derive(Debug, Clone, PartialEq)]
enum HiddenSource {
    Haar { dim: usize },
    Members { members: Vec<HiddenMember>, cumulative: Vec<f64> },
}

/// Hidden-state ensemble plus response function.
#[derive(Debug, Clone, PartialEq)]
pub struct LhsEnsemble {
    source: HiddenSource,
    response: ResponseFunction,
}

/// A single draw from an [`LhsEnsemble`].
pub enum Draw<'a> {
    Fresh,
    Member(&'a HiddenMember),
}

impl LhsEnsemble {
    /// Haar-uniform hidden states with the given response.
    pub fn haar(dim: usize, response: ResponseFunction) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidEnsemble("dimension 0".into()));
        }
        response.validate(dim)?;
        Ok(Self {
            source: HiddenSource::Haar { dim },
            response,
        })
    }

    /// The covariant optimal ensemble of a family: Haar states with the
    /// family's optimal response.
    pub fn optimal(family: Family, d: usize) -> Self {
        Self::haar(d, ResponseFunction::optimal(family)).expect("valid dimension")
    }

    /// Explicit weighted list of pure hidden states.
    pub fn from_states(states: Vec<(StateVector, f64)>, response: ResponseFunction) -> Result<Self> {
        let members = states
            .into_iter()
            .map(|(state, weight)| HiddenMember {
                state,
                weight,
                transport: None,
            })
            .collect();
        Self::from_members(members, response)
    }

    fn from_members(members: Vec<HiddenMember>, response: ResponseFunction) -> Result<Self> {
        let dim = members
            .first()
            .map(|m| m.state.len())
            .ok_or_else(|| Error::InvalidEnsemble("no hidden states".into()))?;
        response.validate(dim)?;
        let mut total = 0.0;
        let mut cumulative = Vec::with_capacity(members.len());
        for m in &members {
            if m.state.len() != dim {
                return Err(Error::InvalidEnsemble("hidden states differ in dimension".into()));
            }
            if (m.state.norm() - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidEnsemble("hidden state is not normalized".into()));
            }
            if !(m.weight >= 0.0) {
                return Err(Error::InvalidEnsemble(format!("negative weight {}", m.weight)));
            }
            total += m.weight;
            cumulative.push(total);
        }
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        Ok(Self {
            source: HiddenSource::Members { members, cumulative },
            response,
        })
    }

    pub fn dim(&self) -> usize {
        match &self.source {
            HiddenSource::Haar { dim } => *dim,
            HiddenSource::Members { members, .. } => members[0].state.len(),
        }
    }

    pub fn response(&self) -> &ResponseFunction {
        &self.response
    }

    pub fn with_response(&self, response: ResponseFunction) -> Result<Self> {
        response.validate(self.dim())?;
        Ok(Self {
            source: self.source.clone(),
            response,
        })
    }

    pub fn is_haar(&self) -> bool {
        matches!(self.source, HiddenSource::Haar { .. })
    }

    /// Explicit members, or `None` for the Haar ensemble.
    pub fn members(&self) -> Option<&[HiddenMember]> {
        match &self.source {
            HiddenSource::Haar { .. } => None,
            HiddenSource::Members { members, .. } => Some(members),
        }
    }

    /// `Σ_ξ ℘_ξ |ψ_ξ⟩⟨ψ_ξ|`: Bob's unconditioned state under the model.
    pub fn average_state(&self) -> ComplexMatrix {
        let d = self.dim();
        match &self.source {
            HiddenSource::Haar { .. } => ComplexMatrix::identity(d, d).unscale(d as f64),
            HiddenSource::Members { members, .. } => members
                .iter()
                .fold(ComplexMatrix::zeros(d, d), |acc, m| {
                    acc + (&m.state * m.state.adjoint()).scale(m.weight)
                }),
        }
    }

    /// Draws a hidden state. For the Haar source it is written to `buf`.
    pub fn draw<'a>(&'a self, sampler: &mut HaarSampler, buf: &mut [C64]) -> Draw<'a> {
        match &self.source {
            HiddenSource::Haar { .. } => {
                sampler.fill_vector(buf);
                Draw::Fresh
            }
            HiddenSource::Members { members, cumulative } => {
                let total = *cumulative.last().expect("non-empty");
                let u: f64 = sampler.rng().random::<f64>() * total;
                let idx = cumulative.partition_point(|&c| c <= u).min(members.len() - 1);
                Draw::Member(&members[idx])
            }
        }
    }

    /// Bob's state for a draw.
    pub fn state_of<'a>(&self, draw: &Draw<'a>, buf: &'a [C64]) -> &'a [C64] {
        match draw {
            Draw::Fresh => buf,
            Draw::Member(m) => m.state.as_slice(),
        }
    }

    /// Alice's announcement for a draw when Bob asked for `basis`.
    pub fn respond(&self, basis: &ProjectiveBasis, draw: &Draw<'_>, buf: &[C64], scratch: &mut [f64]) -> usize {
        match draw {
            Draw::Fresh => self.response.respond(basis, buf, scratch),
            Draw::Member(m) => match &m.transport {
                None => self.response.respond(basis, m.state.as_slice(), scratch),
                Some(t) => {
                    let back = basis.transformed(&t.alice_adjoint);
                    self.response.respond(&back, t.origin.as_slice(), scratch)
                }
            },
        }
    }
}

/// Group-averaged ensemble: every member `ψ_ξ` is replaced by `n` rotated
/// copies `U_β(g)ψ_ξ` (weight `℘_ξ/n`) with the transported response
/// `℘*(a|A,(g,ξ)) = ℘(a|U_α(g)†AU_α(g), ξ)`. `action` selects the
/// representation: `U ⊗ U` for Werner, `U* ⊗ U` for isotropic.
///
/// A Haar source is first discretized into `n` sampled members.
pub fn symmetrize_ensemble(
    f: &LhsEnsemble,
    group_sampler: &mut HaarSampler,
    n: usize,
    action: Family,
) -> Result<LhsEnsemble> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one group element".into()));
    }
    let d = f.dim();
    if group_sampler.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "group sampler of dimension {} for ensemble of dimension {d}",
            group_sampler.dim()
        )));
    }
    let base: Vec<HiddenMember> = match &f.source {
        HiddenSource::Haar { .. } => (0..n)
            .map(|_| HiddenMember {
                state: group_sampler.haar_vector(),
                weight: 1.0 / n as f64,
                transport: None,
            })
            .collect(),
        HiddenSource::Members { members, .. } => members.clone(),
    };
    let mut out = Vec::with_capacity(n * base.len());
    for _ in 0..n {
        let u = group_sampler.haar_unitary();
        let u_alpha = action.alice_unitary(&u);
        for m in &base {
            // Compose with any earlier transport: the member's response is
            // already evaluated against a back-rotated basis.
            let (alice_adjoint, origin) = match &m.transport {
                None => (u_alpha.adjoint(), m.state.clone()),
                Some(t) => (&t.alice_adjoint * u_alpha.adjoint(), t.origin.clone()),
            };
            out.push(HiddenMember {
                state: &u * &m.state,
                weight: m.weight / n as f64,
                transport: Some(Transport {
                    alice_adjoint,
                    origin,
                }),
            });
        }
    }
    // Renormalize against rounding in the weights.
    let total: f64 = out.iter().map(|m| m.weight).sum();
    out.iter_mut().for_each(|m| m.weight /= total);
    LhsEnsemble::from_members(out, f.response.clone())
}

/// Runs `body` over `n` samples split into fixed chunks, each with its own
/// sampler stream, and returns the per-chunk results in chunk order.
pub(crate) fn monte_carlo<A, F>(n: usize, dim: usize, seed: u64, body: F) -> Vec<A>
where
    A: Send,
    F: Fn(&mut HaarSampler, usize) -> A + Sync,
{
    let chunks = n.div_ceil(MC_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let len = MC_CHUNK.min(n - k * MC_CHUNK);
            let mut sampler = HaarSampler::with_stream(dim, seed, k as u64);
            body(&mut sampler, len)
        })
        .collect()
}

fn check_samples(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "Monte-Carlo estimates need at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    Ok(())
}

/// Monte-Carlo estimate of `⟨ã|∫dμ_H(ψ) |ψ⟩⟨ψ| ℘(a|A,ψ)|ã⟩` for outcome
/// `a = 0` under the family's optimal response, with `ã` in the family's Bob
/// frame. Returns `(estimate, standard error)`; the exact values are `1/d³`
/// (Werner) and `H_d/d²` (isotropic).
pub fn lhs_overlap_bound(
    family: Family,
    d: usize,
    basis: &ProjectiveBasis,
    n_samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    check_samples(n_samples)?;
    if basis.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "basis of dimension {} for d = {d}",
            basis.dim()
        )));
    }
    let response = ResponseFunction::optimal(family);
    let frame = family.bob_frame(basis);
    let target = frame.vector(0);
    let parts = monte_carlo(n_samples, d, seed, |sampler, len| {
        let mut psi = vec![C64::new(0.0, 0.0); d];
        let mut scratch = vec![0.0; d];
        let mut m = Moments::default();
        for _ in 0..len {
            sampler.fill_vector(&mut psi);
            let x = if response.respond(basis, &psi, &mut scratch) == 0 {
                let amp: C64 = target.iter().zip(&psi).map(|(t, p)| t.conj() * p).sum();
                amp.norm_sqr()
            } else {
                0.0
            };
            m.push(x);
        }
        m
    });
    let mut total = Moments::default();
    parts.iter().for_each(|p| total.merge(p));
    Ok((total.mean(), total.std_error()))
}

/// Monte-Carlo reconstruction of the conditioned ensemble an LHS model
/// produces for Alice's measurement `basis`.
#[derive(Debug, Clone)]
pub struct LhsSimulation {
    pub ensemble: ConditionedEnsemble,
    /// Announcement counts per outcome.
    pub counts: Vec<u64>,
    /// Standard-error scale of the trace distance between each estimated
    /// `ρ̃_a` and its expectation: `½√d · (Σ_ij se_ij²)^{1/2}`, which bounds
    /// the expected trace norm of the sampling noise.
    pub trace_distance_se: Vec<f64>,
    pub n_samples: usize,
}

#[derive(Clone)]
struct CondAccumulator {
    counts: Vec<u64>,
    sums: Vec<Vec<C64>>,
    sq: Vec<Vec<f64>>,
}

impl CondAccumulator {
    fn new(d_out: usize, d: usize) -> Self {
        Self {
            counts: vec![0; d_out],
            sums: vec![vec![C64::new(0.0, 0.0); d * d]; d_out],
            sq: vec![vec![0.0; d * d]; d_out],
        }
    }

    fn push(&mut self, a: usize, psi: &[C64]) {
        let d = psi.len();
        self.counts[a] += 1;
        let (s, q) = (&mut self.sums[a], &mut self.sq[a]);
        for i in 0..d {
            for j in 0..d {
                let z = psi[i] * psi[j].conj();
                s[i * d + j] += z;
                q[i * d + j] += psi[i].norm_sqr() * psi[j].norm_sqr();
            }
        }
    }

    fn merge(&mut self, other: &Self) {
        for a in 0..self.counts.len() {
            self.counts[a] += other.counts[a];
            for (x, y) in self.sums[a].iter_mut().zip(&other.sums[a]) {
                *x += y;
            }
            for (x, y) in self.sq[a].iter_mut().zip(&other.sq[a]) {
                *x += y;
            }
        }
    }
}

pub fn simulate_lhs_conditioned(
    f: &LhsEnsemble,
    basis: &ProjectiveBasis,
    n_samples: usize,
    seed: u64,
) -> Result<LhsSimulation> {
    check_samples(n_samples)?;
    let d = f.dim();
    let d_out = basis.dim();
    let parts = monte_carlo(n_samples, d, seed, |sampler, len| {
        let mut acc = CondAccumulator::new(d_out, d);
        let mut buf = vec![C64::new(0.0, 0.0); d];
        let mut scratch = vec![0.0; d_out.max(d)];
        for _ in 0..len {
            let draw = f.draw(sampler, &mut buf);
            let a = f.respond(basis, &draw, &buf, &mut scratch[..d_out]);
            acc.push(a, f.state_of(&draw, &buf));
        }
        acc
    });
    let mut acc = CondAccumulator::new(d_out, d);
    parts.iter().for_each(|p| acc.merge(p));

    let n = n_samples as f64;
    let mut members = Vec::with_capacity(d_out);
    let mut se = Vec::with_capacity(d_out);
    for a in 0..d_out {
        let mean = ComplexMatrix::from_fn(d, d, |i, j| acc.sums[a][i * d + j] / n);
        let var_sum: f64 = (0..d * d)
            .map(|k| {
                let m2 = acc.sq[a][k] / n;
                let mu = (acc.sums[a][k] / n).norm_sqr();
                (m2 - mu).max(0.0) / (n - 1.0)
            })
            .sum();
        se.push(0.5 * (d as f64).sqrt() * var_sum.sqrt());
        members.push(mean);
    }
    Ok(LhsSimulation {
        ensemble: ConditionedEnsemble::from_members_unchecked(members),
        counts: acc.counts,
        trace_distance_se: se,
        n_samples,
    })
}

/// Which side of the LHS bound certifies steering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessDirection {
    CertifyBelow,
    CertifyAbove,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Steering,
    NoSteeringDetected,
}

/// Summed overlap witness `S = Σ_a ⟨ã|ρ̃_a|ã⟩` compared with the best value
/// any Haar-ensemble LHS model can reach: at least `1/d²` for Werner states,
/// at most `H_d/d` for isotropic states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub family: Family,
    pub d: usize,
    pub statistic: f64,
    pub lhs_bound: f64,
    pub direction: WitnessDirection,
    pub std_error: f64,
    pub n_samples: usize,
    pub verdict: Verdict,
}

/// LHS bound and certifying direction for the summed overlap witness.
pub fn witness_bound(family: Family, d: usize) -> (f64, WitnessDirection) {
    let df = d as f64;
    match family {
        Family::Werner => (1.0 / (df * df), WitnessDirection::CertifyBelow),
        Family::Isotropic => (harmonic(d) / df, WitnessDirection::CertifyAbove),
    }
}

impl WitnessReport {
    /// Builds the report; the standard error is floored at
    /// [`WITNESS_SE_FLOOR`].
    pub fn evaluate(family: Family, d: usize, statistic: f64, std_error: f64, n_samples: usize) -> Self {
        let (lhs_bound, direction) = witness_bound(family, d);
        let std_error = std_error.max(WITNESS_SE_FLOOR);
        let excess = match direction {
            WitnessDirection::CertifyBelow => lhs_bound - statistic,
            WitnessDirection::CertifyAbove => statistic - lhs_bound,
        };
        let verdict = if excess > WITNESS_SIGMAS * std_error {
            Verdict::Steering
        } else {
            Verdict::NoSteeringDetected
        };
        Self {
            family,
            d,
            statistic,
            lhs_bound,
            direction,
            std_error,
            n_samples,
            verdict,
        }
    }

    /// Signed violation in units of the standard error (positive means the
    /// statistic lies on the certifying side of the bound).
    pub fn sigmas(&self) -> f64 {
        let excess = match self.direction {
            WitnessDirection::CertifyBelow => self.lhs_bound - self.statistic,
            WitnessDirection::CertifyAbove => self.statistic - self.lhs_bound,
        };
        excess / self.std_error
    }
}

/// Witness computed from the true state, averaged over `n_bases` Haar-random
/// measurement bases for Alice.
pub fn steering_witness(spec: &FamilySpec, n_bases: usize, seed: u64) -> Result<WitnessReport> {
    if n_bases == 0 {
        return Err(Error::InvalidArgument("need at least one basis".into()));
    }
    let w = spec.state();
    let mut sampler = HaarSampler::new(spec.d(), seed);
    let mut m = Moments::default();
    for _ in 0..n_bases {
        let basis = ProjectiveBasis::haar_random(&mut sampler);
        let ens = states::conditioned_ensemble(&w, &basis)?;
        m.push(ens.summed_overlap(&spec.family().bob_frame(&basis)));
    }
    Ok(WitnessReport::evaluate(
        spec.family(),
        spec.d(),
        m.mean(),
        m.std_error(),
        n_bases,
    ))
}
