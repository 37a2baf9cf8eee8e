//! Exact density-matrix simulation of local operations and classical
//! communication: twirls, filters, recurrence distillation, majorization-based
//! pure-state conversion, teleportation, dense coding, swapping and the
//! channel-state correspondence.

use rand::Rng;

use crate::error::{arg, contract, Error, Result};
use crate::linalg::{
    c, embed, identity, operator_norm, partial_trace, partial_trace_matrix, partial_transpose, pauli,
    real_matrix, shannon, tensor_product, trace_of_product, CMatrix, DensityMatrix, Partition, PureState,
};
use crate::measures::{coherent_information, singlet_fraction};
use crate::separability::{check_reduction, Verdict};
use crate::states::{bell, dense_coding_pauli, isotropic, maxent, maxent_projector, random_pure, swap_operator, werner};
use crate::tol::Tolerances;

const CONTRACTION_SLACK: f64 = 1e-10;

fn square_sides(rho: &DensityMatrix) -> Result<usize> {
    match rho.dims() {
        [a, b] if a == b => Ok(*a),
        d => arg(format!("twirl needs a d⊗d state, got dimensions {d:?}")),
    }
}

/// Projection onto the U⊗U-invariant family with the same Tr(ρV).
pub fn twirl_werner(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let d = square_sides(rho)?;
    let overlap = trace_of_product(&swap_operator(d), rho.matrix()).re;
    werner(d, ((1.0 - overlap) / 2.0).clamp(0.0, 1.0))
}

/// Projection onto the U⊗U*-invariant family with the same Tr(ρP⁺).
pub fn twirl_isotropic(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let d = square_sides(rho)?;
    let f = trace_of_product(&maxent_projector(d), rho.matrix()).re;
    isotropic(d, f.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalFilter {
    a: CMatrix,
    b: CMatrix,
}

impl LocalFilter {
    pub fn new(a: CMatrix, b: CMatrix) -> Result<Self> {
        for (name, m) in [("A", &a), ("B", &b)] {
            if operator_norm(&(m.adjoint() * m)) > 1.0 + CONTRACTION_SLACK {
                return arg(format!("filter {name} is not a contraction"));
            }
        }
        Ok(LocalFilter { a, b })
    }

    /// Rescales so the larger of ‖A†A‖, ‖B†B‖ is one; the output state is
    /// unchanged and the success probability is as large as possible.
    pub fn normalized(a: CMatrix, b: CMatrix) -> Result<Self> {
        let na = operator_norm(&(a.adjoint() * &a));
        let nb = operator_norm(&(b.adjoint() * &b));
        if na == 0.0 || nb == 0.0 {
            return arg("filter has a zero factor");
        }
        LocalFilter::new(a / c(na.sqrt(), 0.0), b / c(nb.sqrt(), 0.0))
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn operator(&self) -> Result<CMatrix> {
        tensor_product(&self.a, &self.b)
    }
}

#[derive(Debug, Clone)]
pub struct FilterOutcome {
    pub state: DensityMatrix,
    pub probability: f64,
}

pub fn local_filter(rho: &DensityMatrix, f: &LocalFilter) -> Result<FilterOutcome> {
    let dims = rho.dims();
    if dims.len() != 2 || f.a.ncols() != dims[0] || f.b.ncols() != dims[1] {
        return arg(format!("filter shape does not fit dimensions {dims:?}"));
    }
    let k = f.operator()?;
    let out = &k * rho.matrix() * k.adjoint();
    let p = out.trace().re;
    if p < Tolerances::global().probability {
        return Err(Error::FilterFailure(p));
    }
    let state = DensityMatrix::new(out / c(p, 0.0), vec![f.a.nrows(), f.b.nrows()])?;
    Ok(FilterOutcome { state, probability: p })
}

/// A⊗I with A built from the most negative eigenvector of ρ^Γ, so that the
/// filtered state has singlet fraction above one half.
pub fn filter_from_ppt_violation(rho: &DensityMatrix) -> Result<LocalFilter> {
    if rho.dims() != [2, 2] {
        return arg("filter construction needs a two-qubit state");
    }
    let spec = crate::linalg::hermitian_spectrum(&partial_transpose(rho, &[1])?)?;
    let last = spec.values.len() - 1;
    if spec.values[last] >= -Tolerances::global().eig {
        return contract("partial transpose has no negative eigenvalue");
    }
    let v = spec.vectors.column(last);
    let m = CMatrix::from_fn(2, 2, |i, j| v[2 * i + j]);
    let flip = real_matrix(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    LocalFilter::normalized(flip * m.adjoint(), identity(2))
}

// ---------------------------------------------------------------------------
// recurrence distillation

/// Output fidelity of one recurrence round on an isotropic two-qubit input.
pub fn recurrence_map(f: f64) -> f64 {
    let g = 1.0 - f;
    (f * f + g * g / 9.0) / recurrence_success(f)
}

/// Probability that the two target outcomes agree.
pub fn recurrence_success(f: f64) -> f64 {
    let g = 1.0 - f;
    f * f + 2.0 * f * g / 3.0 + 5.0 * g * g / 9.0
}

fn cnot() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    for (row, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(row, col)] = c(1.0, 0.0);
    }
    m
}

#[derive(Debug, Clone)]
pub struct RecurrenceStep {
    pub state: DensityMatrix,
    pub p_success: f64,
}

/// Twirl, bilateral CNOT across two copies, target measurement, postselection
/// on equal outcomes and a final twirl, all on the exact 16-dimensional state.
pub fn recurrence_step_exact(rho: &DensityMatrix) -> Result<RecurrenceStep> {
    if rho.dims() != [2, 2] {
        return arg("recurrence needs a two-qubit state");
    }
    let input = twirl_isotropic(rho)?;
    let dims = [2, 2, 2, 2];
    let pair = input.tensor(&input)?;
    let gate = embed(&cnot(), &[0, 2], &dims)? * embed(&cnot(), &[1, 3], &dims)?;
    let evolved = &gate * pair.matrix() * gate.adjoint();
    let mut agree = CMatrix::zeros(4, 4);
    agree[(0, 0)] = c(1.0, 0.0);
    agree[(3, 3)] = c(1.0, 0.0);
    let keep = embed(&agree, &[2, 3], &dims)?;
    let kept = &keep * evolved * &keep;
    let p = kept.trace().re;
    if p < Tolerances::global().probability {
        return Err(Error::FilterFailure(p));
    }
    let (reduced, _) = partial_trace_matrix(&kept, &dims, &[0, 1])?;
    let state = DensityMatrix::new(reduced / c(p, 0.0), vec![2, 2])?;
    Ok(RecurrenceStep { state: twirl_isotropic(&state)?, p_success: p })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    pub fidelity: f64,
    pub p_success: f64,
    pub surviving_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistillationTrace {
    pub initial_fidelity: f64,
    pub rounds: Vec<RoundRecord>,
    /// Pairs left per input pair after the last round.
    pub final_yield_estimate: f64,
    pub reached_target: bool,
}

pub fn distill_recurrence(f0: f64, target: f64, max_rounds: usize, exact: bool) -> Result<DistillationTrace> {
    if !(0.0..=1.0).contains(&f0) || !(0.0..=1.0).contains(&target) {
        return arg("fidelities must lie in [0, 1]");
    }
    if f0 <= 0.5 {
        return Err(Error::NotDistillable(f0));
    }
    let mut rounds = Vec::new();
    let mut f = f0;
    let mut fraction = 1.0;
    while f < target && rounds.len() < max_rounds {
        let (next, p) = if exact {
            let step = recurrence_step_exact(&isotropic(2, f)?)?;
            (singlet_fraction(&step.state)?, step.p_success)
        } else {
            (recurrence_map(f), recurrence_success(f))
        };
        fraction *= p / 2.0;
        f = next;
        rounds.push(RoundRecord { fidelity: f, p_success: p, surviving_fraction: fraction });
    }
    Ok(DistillationTrace { initial_fidelity: f0, rounds, final_yield_estimate: fraction, reached_target: f >= target })
}

/// Hashing yield log₂√L − H(p) per pair for a Bell-diagonal distribution of
/// length L, clipped at zero.
pub fn hashing_rate(p: &[f64]) -> Result<f64> {
    let n = p.len();
    if n < 4 || !n.is_power_of_two() {
        return arg(format!("Bell-diagonal vector must have length 2^k ≥ 4, got {n}"));
    }
    if p.iter().any(|&x| !(x >= -Tolerances::global().probability)) {
        return arg("negative probability");
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > Tolerances::global().trace {
        return arg(format!("probabilities sum to {total}"));
    }
    let clipped: Vec<f64> = p.iter().map(|x| x.max(0.0)).collect();
    Ok((0.5 * (n as f64).log2() - shannon(&clipped)).max(0.0))
}

/// True when the reduction criterion is violated, which suffices for
/// distillability.
pub fn reduction_distillable(rho: &DensityMatrix) -> Result<bool> {
    let report = check_reduction(rho, &Partition::bipartition(&[0], rho.num_subsystems())?)?;
    Ok(report.verdict == Verdict::Entangled)
}

// ---------------------------------------------------------------------------
// pure-state conversion

const MAJORIZATION_SLACK: f64 = 1e-12;

fn schmidt_vector(lam: &[f64]) -> Result<Vec<f64>> {
    if lam.is_empty() || lam.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return arg("Schmidt probabilities must be finite and nonnegative");
    }
    let total: f64 = lam.iter().sum();
    if (total - 1.0).abs() > Tolerances::global().trace {
        return arg(format!("Schmidt probabilities sum to {total}"));
    }
    let mut v = lam.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

/// Tail sums E_k for both vectors, padded to a common length.
fn paired_tails(psi: &[f64], phi: &[f64]) -> Result<Vec<(f64, f64)>> {
    let (mut a, mut b) = (schmidt_vector(psi)?, schmidt_vector(phi)?);
    let n = a.len().max(b.len());
    a.resize(n, 0.0);
    b.resize(n, 0.0);
    Ok((0..n).map(|k| (a[k..].iter().sum(), b[k..].iter().sum())).collect())
}

/// Whether |ψ⟩ → |ϕ⟩ is possible with certainty by LOCC.
pub fn nielsen_can_transform(psi: &[f64], phi: &[f64]) -> Result<bool> {
    Ok(paired_tails(psi, phi)?.iter().all(|&(ep, ef)| ep >= ef - MAJORIZATION_SLACK))
}

/// Optimal success probability min_k E_k(ψ)/E_k(ϕ).
pub fn vidal_probability(psi: &[f64], phi: &[f64]) -> Result<f64> {
    let tails = paired_tails(psi, phi)?;
    if tails.iter().all(|&(ep, ef)| ep >= ef - MAJORIZATION_SLACK) {
        return Ok(1.0);
    }
    Ok(tails
        .iter()
        .filter(|&&(_, ef)| ef > MAJORIZATION_SLACK)
        .map(|&(ep, ef)| ep / ef)
        .fold(1.0, f64::min))
}

// ---------------------------------------------------------------------------
// teleportation, dense coding, swapping

/// Pauli on the second qubit that maximises overlap with ϕ⁺, and the rotated
/// state.
pub fn align_to_phi_plus(rho: &DensityMatrix) -> Result<(usize, DensityMatrix)> {
    if rho.dims() != [2, 2] {
        return arg("alignment needs a two-qubit state");
    }
    let target = maxent_projector(2);
    let mut best = (0, f64::NEG_INFINITY, rho.clone());
    for k in 0..4 {
        let rotated = rho.conjugate(&tensor_product(&identity(2), &pauli(k))?);
        let f = trace_of_product(&target, rotated.matrix()).re;
        if f > best.1 + 1e-14 {
            best = (k, f, rotated);
        }
    }
    Ok((best.0, best.2))
}

/// Bob's corrections, derived from the ideal ϕ⁺ resource: for outcome β_k on
/// (input, Alice) the map to Bob is U_k†/2.
fn teleport_corrections() -> Result<Vec<CMatrix>> {
    let phi = maxent(2)?;
    (0..4)
        .map(|k| {
            let beta = bell(k)?;
            let mut kraus = CMatrix::zeros(2, 2);
            for input in 0..2 {
                let ket = PureState::basis(&[input], vec![2])?.tensor(&phi)?;
                for out in 0..2 {
                    let mut amp = c(0.0, 0.0);
                    for ca in 0..4 {
                        amp += beta.amplitudes()[ca].conj() * ket.amplitudes()[ca * 2 + out];
                    }
                    kraus[(out, input)] = amp;
                }
            }
            Ok(kraus.adjoint() * c(2.0, 0.0))
        })
        .collect()
}

/// Average fidelity of the teleported state over Bell outcomes.
pub fn teleport_fidelity_for(input: &PureState, resource: &DensityMatrix) -> Result<f64> {
    if input.dims() != [2] || resource.dims() != [2, 2] {
        return arg("teleportation needs a qubit input and a two-qubit resource");
    }
    let corrections = teleport_corrections()?;
    let joint = input.density().tensor(resource)?;
    let target = input.density();
    let mut fidelity = 0.0;
    for (k, u) in corrections.iter().enumerate() {
        let proj = embed(&bell(k)?.density().into_matrix(), &[0, 1], &[2, 2, 2])?;
        let (bob, _) = partial_trace_matrix(&(&proj * joint.matrix() * &proj), &[2, 2, 2], &[2])?;
        fidelity += trace_of_product(&(u * bob * u.adjoint()), target.matrix()).re;
    }
    Ok(fidelity)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TeleportMode {
    /// Resource twirled to isotropic form; one input suffices.
    Analytic,
    /// Average over the six eigenstates of X, Y and Z.
    Axial,
    /// Average over Haar-random inputs.
    Haar { samples: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportReport {
    pub avg_fidelity: f64,
    /// Singlet fraction of the aligned resource.
    pub singlet_fraction: f64,
    pub predicted: f64,
    /// Pauli applied to Bob's half to align the resource with ϕ⁺.
    pub frame: usize,
}

fn axial_states() -> Result<Vec<PureState>> {
    let h = 0.5f64.sqrt();
    [
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(1.0, 0.0)],
        [c(h, 0.0), c(h, 0.0)],
        [c(h, 0.0), c(-h, 0.0)],
        [c(h, 0.0), c(0.0, h)],
        [c(h, 0.0), c(0.0, -h)],
    ]
    .into_iter()
    .map(|v| PureState::new(crate::linalg::CVector::from_column_slice(&v), vec![2]))
    .collect()
}

pub fn simulate_teleportation<R: Rng + ?Sized>(resource: &DensityMatrix, mode: TeleportMode, rng: &mut R) -> Result<TeleportReport> {
    let (frame, aligned) = align_to_phi_plus(resource)?;
    let f = singlet_fraction(&aligned)?;
    let avg_fidelity = match mode {
        TeleportMode::Analytic => {
            let twirled = twirl_isotropic(&aligned)?;
            teleport_fidelity_for(&PureState::basis(&[0], vec![2])?, &twirled)?
        }
        TeleportMode::Axial => {
            let inputs = axial_states()?;
            let total = inputs.iter().map(|s| teleport_fidelity_for(s, &aligned)).sum::<Result<f64>>()?;
            total / inputs.len() as f64
        }
        TeleportMode::Haar { samples } => {
            if samples == 0 {
                return arg("need at least one Haar sample");
            }
            let mut total = 0.0;
            for _ in 0..samples {
                total += teleport_fidelity_for(&random_pure(&[2], rng)?, &aligned)?;
            }
            total / samples as f64
        }
    };
    Ok(TeleportReport { avg_fidelity, singlet_fraction: f, predicted: (2.0 * f + 1.0) / 3.0, frame })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseCodingRecord {
    /// Largest |⟨e_j|e_k⟩| over distinct encoded states.
    pub max_overlap: f64,
    /// Rows: message sent; columns: Bell outcome decoded.
    pub confusion: [[f64; 4]; 4],
    pub success_probability: f64,
    pub bits: f64,
}

pub fn simulate_dense_coding() -> Result<DenseCodingRecord> {
    let phi = maxent(2)?;
    let encoded: Vec<PureState> = (0..4)
        .map(|k| phi.apply(&tensor_product(&dense_coding_pauli(k), &identity(2))?))
        .collect::<Result<_>>()?;
    let mut max_overlap: f64 = 0.0;
    for j in 0..4 {
        for k in 0..j {
            max_overlap = max_overlap.max(encoded[j].inner(&encoded[k]).norm());
        }
    }
    let basis: Vec<PureState> = (0..4).map(bell).collect::<Result<_>>()?;
    let mut confusion = [[0.0; 4]; 4];
    for (row, e) in confusion.iter_mut().zip(&encoded) {
        for (cell, b) in row.iter_mut().zip(&basis) {
            *cell = b.inner(e).norm_sqr();
        }
    }
    // decode each message as its most likely outcome
    let success_probability = confusion.iter().map(|r| r.iter().copied().fold(0.0, f64::max)).sum::<f64>() / 4.0;
    let column: Vec<f64> = (0..4).map(|j| confusion.iter().map(|r| r[j]).sum::<f64>() / 4.0).collect();
    let conditional: f64 = confusion.iter().map(|r| shannon(r)).sum::<f64>() / 4.0;
    Ok(DenseCodingRecord { max_overlap, confusion, success_probability, bits: shannon(&column) - conditional })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapOutcome {
    pub probability: f64,
    /// Largest Bell-state weight of the uncorrected AD state.
    pub bell_weight: f64,
    /// Pauli on D after the correction.
    pub correction: usize,
    pub corrected_fidelity: f64,
}

/// Bell measurement on B, C of ϕ⁺_AB ⊗ ϕ⁺_CD.
pub fn simulate_swapping() -> Result<Vec<SwapOutcome>> {
    let phi = maxent(2)?;
    let joint = phi.tensor(&phi)?.density();
    let dims = [2, 2, 2, 2];
    (0..4)
        .map(|k| {
            let proj = embed(&bell(k)?.density().into_matrix(), &[1, 2], &dims)?;
            let kept = &proj * joint.matrix() * &proj;
            let p = kept.trace().re;
            let (ad, _) = partial_trace_matrix(&kept, &dims, &[0, 3])?;
            let ad = DensityMatrix::new(ad / c(p, 0.0), vec![2, 2])?;
            let bell_weight = (0..4)
                .map(|j| Ok(trace_of_product(&bell(j)?.density().into_matrix(), ad.matrix()).re))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let (correction, aligned) = align_to_phi_plus(&ad)?;
            Ok(SwapOutcome { probability: p, bell_weight, correction, corrected_fidelity: singlet_fraction(&aligned)? })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// channels

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    ops: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::Argument("channel needs at least one Kraus operator".into()))?;
        let (d_out, d_in) = first.shape();
        if ops.iter().any(|v| v.shape() != (d_out, d_in)) {
            return arg("Kraus operators differ in shape");
        }
        let sum = ops.iter().fold(CMatrix::zeros(d_in, d_in), |acc, v| acc + v.adjoint() * v);
        let defect = (sum - identity(d_in)).norm();
        if defect > CONTRACTION_SLACK {
            return arg(format!("Kraus operators are not trace preserving (defect {defect:e})"));
        }
        Ok(KrausChannel { ops })
    }

    pub fn identity(d: usize) -> Self {
        KrausChannel { ops: vec![identity(d)] }
    }

    /// ρ ↦ pρ + (1 − p)ZρZ.
    pub fn phase(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return arg(format!("p = {p} outside [0, 1]"));
        }
        KrausChannel::new(vec![identity(2) * c(p.sqrt(), 0.0), pauli(3) * c((1.0 - p).sqrt(), 0.0)])
    }

    /// ρ ↦ Tr(ρ) I/d.
    pub fn fully_depolarizing(d: usize) -> Result<Self> {
        let scale = c(1.0 / (d as f64).sqrt(), 0.0);
        let ops = (0..d * d)
            .map(|ij| {
                let mut m = CMatrix::zeros(d, d);
                m[(ij / d, ij % d)] = scale;
                m
            })
            .collect();
        KrausChannel::new(ops)
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn input_dim(&self) -> usize {
        self.ops[0].ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.ops[0].nrows()
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        self.ops.iter().fold(CMatrix::zeros(self.output_dim(), self.output_dim()), |acc, v| acc + v * rho * v.adjoint())
    }
}

/// (I ⊗ Λ)(P⁺).
pub fn channel_to_state(ch: &KrausChannel) -> Result<DensityMatrix> {
    let d = ch.input_dim();
    let p = maxent_projector(d);
    let mut out = CMatrix::zeros(d * ch.output_dim(), d * ch.output_dim());
    for v in ch.operators() {
        let lift = tensor_product(&identity(d), v)?;
        out += &lift * &p * lift.adjoint();
    }
    DensityMatrix::new(out, vec![d, ch.output_dim()])
}

/// S(B) − S(AB) across the first cut.
pub fn state_coherent_info(rho: &DensityMatrix) -> Result<f64> {
    coherent_information(rho, &Partition::bipartition(&[0], rho.num_subsystems())?)
}

/// Left reduction of a channel state; equals I/d by construction.
pub fn channel_state_marginal(rho: &DensityMatrix) -> Result<DensityMatrix> {
    partial_trace(rho, &[0])
}
