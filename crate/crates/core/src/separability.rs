//! Necessary separability criteria, witnesses and the combined battery.
//!
//! Every check returns a [`CriterionReport`]. A passing check is
//! `Inconclusive` unless a sufficiency result applies: PPT on 2⊗2 and 2⊗3,
//! Schmidt rank one for pure states, and the closed-form rule for the
//! GHZ-diagonal family of [`crate::states::dur_cirac`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{arg, contract, Error, Result};
use crate::linalg::{
    bipartite_view, c, eigvalsh, hermitian_spectrum, identity, partial_trace, partial_transpose, permute_indices,
    realign, renyi_entropy, schmidt, tensor_product, trace_norm, CMatrix, CVector, DensityMatrix, Partition,
    PureState,
};
use crate::nonlocality::{chsh_operator, ChshSettings};
use crate::states::{dur_cirac_vector, maxent_projector, random_product_pure, swap_operator, DurCiracWeights, State};
use crate::tol::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Entangled,
    Separable,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Entangled => "ENTANGLED",
            Verdict::Separable => "SEPARABLE",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Which side of the threshold signals entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fires {
    Below,
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessKind {
    /// Swap operator on d⊗d.
    Swap(usize),
    /// I/d − |Φ⁺⟩⟨Φ⁺| on d⊗d.
    Fidelity(usize),
    /// 2·I − B_CHSH for the given settings.
    Chsh(ChshSettings),
    Custom(CMatrix),
}

impl WitnessKind {
    pub fn token(&self) -> String {
        match self {
            WitnessKind::Swap(_) => "swap".into(),
            WitnessKind::Fidelity(_) => "fidelity".into(),
            WitnessKind::Chsh(_) => "chsh".into(),
            WitnessKind::Custom(_) => "custom".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PositiveMap {
    Choi,
    /// Breuer–Hall map with the given antisymmetric unitary; `None` uses
    /// antidiag(1, −1, 1, −1, …).
    BreuerHall(Option<CMatrix>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Criterion {
    Ppt,
    Reduction,
    Choi,
    BreuerHall,
    Realignment,
    Permutation,
    Majorization,
    Entropic(f64),
    Det2q,
    Witness(String),
    SchmidtRank,
    DurCirac,
}

impl Criterion {
    /// Position in report ordering.
    fn rank(&self) -> usize {
        match self {
            Criterion::SchmidtRank => 0,
            Criterion::DurCirac => 1,
            Criterion::Ppt => 2,
            Criterion::Det2q => 3,
            Criterion::Reduction => 4,
            Criterion::Choi => 5,
            Criterion::BreuerHall => 6,
            Criterion::Realignment => 7,
            Criterion::Permutation => 8,
            Criterion::Majorization => 9,
            Criterion::Entropic(_) => 10,
            Criterion::Witness(_) => 11,
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Ppt => f.write_str("ppt"),
            Criterion::Reduction => f.write_str("reduction"),
            Criterion::Choi => f.write_str("choi"),
            Criterion::BreuerHall => f.write_str("breuer"),
            Criterion::Realignment => f.write_str("realign"),
            Criterion::Permutation => f.write_str("permute"),
            Criterion::Majorization => f.write_str("majorization"),
            Criterion::Entropic(a) if a.is_infinite() => f.write_str("entropic:inf"),
            Criterion::Entropic(a) => write!(f, "entropic:{a}"),
            Criterion::Det2q => f.write_str("det2q"),
            Criterion::Witness(k) => write!(f, "witness:{k}"),
            Criterion::SchmidtRank => f.write_str("schmidt"),
            Criterion::DurCirac => f.write_str("dur-cirac"),
        }
    }
}

/// Where a criterion was applied.
#[derive(Debug, Clone, PartialEq)]
pub enum Scope {
    Cut(Partition),
    Permutation(Vec<usize>),
    Whole,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Cut(p) => write!(f, "{p}"),
            Scope::Permutation(p) => {
                let s: Vec<String> = p.iter().map(|i| i.to_string()).collect();
                write!(f, "perm[{}]", s.join(","))
            }
            Scope::Whole => f.write_str("all"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub scope: Scope,
    pub verdict: Verdict,
    pub evidence: f64,
    pub threshold: f64,
    pub fires: Fires,
    pub note: Option<String>,
    /// Eigenvector behind a negative eigenvalue, when there is one.
    pub witness_vector: Option<CVector>,
}

impl CriterionReport {
    pub fn new(criterion: Criterion, scope: Scope, evidence: f64, threshold: f64, fires: Fires, sufficient: bool) -> Self {
        let violated = match fires {
            Fires::Below => evidence < threshold,
            Fires::Above => evidence > threshold,
        };
        let verdict = if violated {
            Verdict::Entangled
        } else if sufficient {
            Verdict::Separable
        } else {
            Verdict::Inconclusive
        };
        CriterionReport { criterion, scope, verdict, evidence, threshold, fires, note: None, witness_vector: None }
    }

}

fn two_party(rho: &DensityMatrix, split: &Partition) -> Result<DensityMatrix> {
    bipartite_view(rho, split)
}

fn ppt_sufficient(dims: &[usize]) -> bool {
    matches!(dims, [2, 2] | [2, 3] | [3, 2])
}

/// Minimum eigenvalue of ρ^Γ with Γ on the right part of `split`.
pub fn check_ppt(rho: &DensityMatrix, split: &Partition) -> Result<CriterionReport> {
    let ab = two_party(rho, split)?;
    let spec = hermitian_spectrum(&partial_transpose(&ab, &[1])?)?;
    let last = spec.values.len() - 1;
    let min = spec.values[last];
    let mut r = CriterionReport::new(
        Criterion::Ppt,
        Scope::Cut(split.clone()),
        min,
        -tol().eig,
        Fires::Below,
        ppt_sufficient(ab.dims()),
    );
    if r.verdict == Verdict::Entangled {
        r.witness_vector = Some(spec.vectors.column(last).into_owned());
    }
    Ok(r)
}

/// Worse of λ_min(ρ_A ⊗ I − ρ) and λ_min(I ⊗ ρ_B − ρ). Equivalent to PPT
/// when one side is a qubit, hence conclusive wherever PPT is.
pub fn check_reduction(rho: &DensityMatrix, split: &Partition) -> Result<CriterionReport> {
    let ab = two_party(rho, split)?;
    let (da, db) = (ab.dims()[0], ab.dims()[1]);
    let ra = partial_trace(&ab, &[0])?;
    let rb = partial_trace(&ab, &[1])?;
    let left = tensor_product(ra.matrix(), &identity(db))? - ab.matrix();
    let right = tensor_product(&identity(da), rb.matrix())? - ab.matrix();
    let min = eigvalsh(&left)?.last().copied().unwrap_or(0.0).min(eigvalsh(&right)?.last().copied().unwrap_or(0.0));
    Ok(CriterionReport::new(Criterion::Reduction, Scope::Cut(split.clone()), min, -tol().eig, Fires::Below, ppt_sufficient(ab.dims())))
}

/// antidiag(1, −1, 1, −1, …): row i holds (−1)^i in column d−1−i.
pub fn default_antisymmetric_unitary(d: usize) -> Result<CMatrix> {
    if d % 2 != 0 || d == 0 {
        return arg(format!("Breuer–Hall map needs even dimension, got {d}"));
    }
    let mut u = CMatrix::zeros(d, d);
    for i in 0..d {
        u[(i, d - 1 - i)] = c(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    Ok(u)
}

fn choi_map(x: &CMatrix) -> CMatrix {
    let mut y = -x.clone();
    y[(0, 0)] = x[(0, 0)] + x[(2, 2)];
    y[(1, 1)] = x[(1, 1)] + x[(0, 0)];
    y[(2, 2)] = x[(2, 2)] + x[(1, 1)];
    y
}

fn breuer_hall_map(x: &CMatrix, u: &CMatrix) -> CMatrix {
    let d = x.nrows();
    identity(d) * x.trace() - x - u * x.transpose() * u.adjoint()
}

/// (I ⊗ Λ)(M) for a map acting on blocks of the second factor.
fn apply_on_second(m: &CMatrix, da: usize, db: usize, map: impl Fn(&CMatrix) -> CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(da * db, da * db);
    for i in 0..da {
        for j in 0..da {
            let block = m.view((i * db, j * db), (db, db)).into_owned();
            out.view_mut((i * db, j * db), (db, db)).copy_from(&map(&block));
        }
    }
    out
}

pub fn apply_positive_map(rho: &DensityMatrix, split: &Partition, map: &PositiveMap) -> Result<CMatrix> {
    let ab = two_party(rho, split)?;
    let (da, db) = (ab.dims()[0], ab.dims()[1]);
    match map {
        PositiveMap::Choi => {
            if db != 3 {
                return arg(format!("Choi map acts on a qutrit, second factor has dimension {db}"));
            }
            Ok(apply_on_second(ab.matrix(), da, db, choi_map))
        }
        PositiveMap::BreuerHall(u) => {
            let u = match u {
                Some(u) => {
                    if u.nrows() != db || u.ncols() != db {
                        return arg("unitary size does not match second factor");
                    }
                    if (u.transpose() + u).norm() > 1e-10 {
                        return arg("Breuer–Hall unitary must be antisymmetric");
                    }
                    if (u * u.adjoint() - identity(db)).norm() > 1e-10 {
                        return arg("Breuer–Hall operator must be unitary");
                    }
                    u.clone()
                }
                None => default_antisymmetric_unitary(db)?,
            };
            Ok(apply_on_second(ab.matrix(), da, db, |x| breuer_hall_map(x, &u)))
        }
    }
}

/// Minimum eigenvalue of (I ⊗ Λ)(ρ).
pub fn check_map(rho: &DensityMatrix, split: &Partition, map: &PositiveMap) -> Result<CriterionReport> {
    let image = apply_positive_map(rho, split, map)?;
    let spec = hermitian_spectrum(&image)?;
    let last = spec.values.len() - 1;
    let criterion = match map {
        PositiveMap::Choi => Criterion::Choi,
        PositiveMap::BreuerHall(_) => Criterion::BreuerHall,
    };
    let mut r = CriterionReport::new(criterion, Scope::Cut(split.clone()), spec.values[last], -tol().eig, Fires::Below, false);
    if r.verdict == Verdict::Entangled {
        r.witness_vector = Some(spec.vectors.column(last).into_owned());
    }
    Ok(r)
}

/// ‖R(ρ)‖₁ − 1.
pub fn check_realignment(rho: &DensityMatrix, split: &Partition) -> Result<CriterionReport> {
    let ab = two_party(rho, split)?;
    let excess = trace_norm(&realign(&ab)?) - 1.0;
    Ok(CriterionReport::new(Criterion::Realignment, Scope::Cut(split.clone()), excess, tol().eig, Fires::Above, false))
}

/// ‖R_π(ρ)‖₁ − 1 for a permutation of the 2n index slots.
pub fn check_permutation(rho: &DensityMatrix, perm: &[usize]) -> Result<CriterionReport> {
    let excess = trace_norm(&permute_indices(rho, perm)?) - 1.0;
    Ok(CriterionReport::new(Criterion::Permutation, Scope::Permutation(perm.to_vec()), excess, tol().eig, Fires::Above, false))
}

/// One representative per class of index permutations with distinct trace
/// norms. Within-row and within-column reorderings and the global transpose
/// leave singular values unchanged, so a class is fixed by the unordered pair
/// {row slots, column slots}. The identity class is omitted.
pub fn permutation_classes(n: usize) -> Vec<Vec<usize>> {
    let slots = 2 * n;
    let mut out = Vec::new();
    for mask in 0usize..(1 << slots) {
        if mask.count_ones() as usize != n || mask & 1 == 0 {
            continue;
        }
        let rows: Vec<usize> = (0..slots).filter(|s| mask >> s & 1 == 1).collect();
        if rows == (0..n).collect::<Vec<_>>() {
            continue;
        }
        let cols = (0..slots).filter(|s| mask >> s & 1 == 0);
        out.push(rows.iter().copied().chain(cols).collect());
    }
    out
}

fn spectrum_of(rho: &DensityMatrix) -> Vec<f64> {
    rho.eigenvalues().into_iter().map(|v| v.max(0.0)).collect()
}

/// Largest excess of a partial sum of λ↓(global) over the same partial sum of
/// λ↓(local), zero-padded.
fn majorization_excess(global: &[f64], local: &[f64]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    let (mut sg, mut sl) = (0.0, 0.0);
    for k in 0..global.len() {
        sg += global[k];
        sl += local.get(k).copied().unwrap_or(0.0);
        worst = worst.max(sg - sl);
    }
    worst
}

/// λ(ρ) ≺ λ(ρ_A) and λ(ρ) ≺ λ(ρ_B).
pub fn check_majorization(rho: &DensityMatrix, split: &Partition) -> Result<CriterionReport> {
    let ab = two_party(rho, split)?;
    let g = spectrum_of(&ab);
    let a = spectrum_of(&partial_trace(&ab, &[0])?);
    let b = spectrum_of(&partial_trace(&ab, &[1])?);
    let excess = majorization_excess(&g, &a).max(majorization_excess(&g, &b));
    Ok(CriterionReport::new(Criterion::Majorization, Scope::Cut(split.clone()), excess, tol().eig, Fires::Above, false))
}

/// max(S_α(A), S_α(B)) − S_α(AB).
pub fn check_entropic(rho: &DensityMatrix, split: &Partition, alpha: f64) -> Result<CriterionReport> {
    let ab = two_party(rho, split)?;
    let s_ab = renyi_entropy(&ab, alpha)?;
    let s_a = renyi_entropy(&partial_trace(&ab, &[0])?, alpha)?;
    let s_b = renyi_entropy(&partial_trace(&ab, &[1])?, alpha)?;
    let excess = s_a.max(s_b) - s_ab;
    Ok(CriterionReport::new(Criterion::Entropic(alpha), Scope::Cut(split.clone()), excess, tol().entropy, Fires::Above, false))
}

/// det(ρ^Γ) for two qubits; negative exactly when the state is entangled.
pub fn check_two_qubit_det(rho: &DensityMatrix) -> Result<CriterionReport> {
    if rho.dims() != [2, 2] {
        return arg(format!("determinant test needs a two-qubit state, got dimensions {:?}", rho.dims()));
    }
    let det = partial_transpose(rho, &[1])?.determinant().re;
    let split = Partition::bipartition(&[0], 2)?;
    Ok(CriterionReport::new(Criterion::Det2q, Scope::Cut(split), det, -tol().det, Fires::Below, true))
}

// ---------------------------------------------------------------------------
// witnesses

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessOperator {
    pub matrix: CMatrix,
    pub kind: WitnessKind,
    pub dims: Vec<usize>,
}

pub fn make_witness(kind: WitnessKind) -> Result<WitnessOperator> {
    let (matrix, dims) = match &kind {
        WitnessKind::Swap(d) => {
            if *d < 2 {
                return arg("swap witness needs d >= 2");
            }
            (swap_operator(*d), vec![*d, *d])
        }
        WitnessKind::Fidelity(d) => {
            if *d < 2 {
                return arg("fidelity witness needs d >= 2");
            }
            (identity(d * d) * c(1.0 / *d as f64, 0.0) - maxent_projector(*d), vec![*d, *d])
        }
        WitnessKind::Chsh(settings) => (identity(4) * c(2.0, 0.0) - chsh_operator(settings)?, vec![2, 2]),
        WitnessKind::Custom(m) => {
            if crate::linalg::max_hermitian_defect(m) > tol().herm {
                return contract("witness must be Hermitian");
            }
            let d = (m.nrows() as f64).sqrt().round() as usize;
            if d * d != m.nrows() {
                return arg("custom witness must act on d⊗d");
            }
            (m.clone(), vec![d, d])
        }
    };
    Ok(WitnessOperator { matrix, kind, dims })
}

/// Tr(W ρ).
pub fn evaluate_witness(w: &WitnessOperator, rho: &DensityMatrix) -> Result<f64> {
    if rho.side() != w.matrix.nrows() {
        return arg("witness and state sizes differ");
    }
    Ok(crate::linalg::trace_of_product(&w.matrix, rho.matrix()).re)
}

pub fn check_witness(w: &WitnessOperator, rho: &DensityMatrix) -> Result<CriterionReport> {
    let value = evaluate_witness(w, rho)?;
    let split = Partition::bipartition(&[0], 2)?;
    Ok(CriterionReport::new(Criterion::Witness(w.kind.token()), Scope::Cut(split), value, -tol().eig, Fires::Below, false))
}

/// Sanity data for a witness: its smallest eigenvalue and the smallest
/// expectation found over sampled and grid product states.
#[derive(Debug, Clone, Copy)]
pub struct WitnessCheck {
    pub min_eigenvalue: f64,
    pub min_product_expectation: f64,
}

impl WitnessCheck {
    pub fn is_valid(&self) -> bool {
        self.min_eigenvalue < -tol().eig && self.min_product_expectation >= -tol().eig
    }
}

fn grid_vectors(d: usize) -> Vec<CVector> {
    let mut out = Vec::new();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        let mut v = CVector::zeros(d);
        v[i] = c(1.0, 0.0);
        out.push(v);
        for j in i + 1..d {
            for phase in [c(s, 0.0), c(-s, 0.0), c(0.0, s), c(0.0, -s)] {
                let mut v = CVector::zeros(d);
                v[i] = c(s, 0.0);
                v[j] = phase;
                out.push(v);
            }
        }
    }
    out
}

pub fn validate_witness<R: Rng + ?Sized>(w: &WitnessOperator, samples: usize, rng: &mut R) -> Result<WitnessCheck> {
    let min_eigenvalue = eigvalsh(&w.matrix)?.last().copied().unwrap_or(0.0);
    let expect = |psi: &CVector| (psi.adjoint() * &w.matrix * psi)[(0, 0)].re;
    let mut min_product = f64::INFINITY;
    let (da, db) = (w.dims[0], w.dims[1]);
    for a in grid_vectors(da) {
        for b in grid_vectors(db) {
            min_product = min_product.min(expect(&a.kronecker(&b)));
        }
    }
    for _ in 0..samples {
        let psi = random_product_pure(&w.dims, rng)?;
        min_product = min_product.min(expect(psi.amplitudes()));
    }
    Ok(WitnessCheck { min_eigenvalue, min_product_expectation: min_product })
}

pub fn schmidt_rank(psi: &PureState, split: &Partition) -> Result<usize> {
    Ok(schmidt(psi, split)?.rank)
}

// ---------------------------------------------------------------------------
// GHZ-diagonal family recognition

/// Recovers the family weights if `rho` is (numerically) a member.
pub fn recognize_dur_cirac(rho: &DensityMatrix) -> Option<DurCiracWeights> {
    let m = rho.num_subsystems();
    if m < 2 || rho.dims().iter().any(|&d| d != 2) {
        return None;
    }
    let weight = |v: &CVector| (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
    let plus = weight(&dur_cirac_vector(m, 0, 1.0));
    let minus = weight(&dur_cirac_vector(m, 0, -1.0));
    if plus < minus {
        return None;
    }
    let mut others = Vec::new();
    let mut rebuilt = CMatrix::zeros(rho.side(), rho.side());
    let proj = |v: CVector| &v * v.adjoint();
    rebuilt += proj(dur_cirac_vector(m, 0, 1.0)) * c(plus, 0.0);
    rebuilt += proj(dur_cirac_vector(m, 0, -1.0)) * c(minus, 0.0);
    for k in 1..(1 << (m - 1)) {
        let lp = weight(&dur_cirac_vector(m, k, 1.0));
        let lm = weight(&dur_cirac_vector(m, k, -1.0));
        if (lp - lm).abs() > 1e-10 {
            return None;
        }
        let l = 0.5 * (lp + lm);
        rebuilt += (proj(dur_cirac_vector(m, k, 1.0)) + proj(dur_cirac_vector(m, k, -1.0))) * c(l, 0.0);
        others.push(l.max(0.0));
    }
    if (rebuilt - rho.matrix()).norm() > 1e-10 {
        return None;
    }
    let total = plus + minus + 2.0 * others.iter().sum::<f64>();
    let others = others.into_iter().map(|l| l / total).collect();
    DurCiracWeights::new(m, plus.max(0.0) / total, minus.max(0.0) / total, others).ok()
}

/// Closed-form verdict for one cut of a family member.
pub fn check_dur_cirac(w: &DurCiracWeights, split: &Partition) -> Result<CriterionReport> {
    let k = w
        .index_of_cut(split.left())
        .ok_or_else(|| Error::Argument(format!("{split} is not a bipartition of {} qubits", w.qubits)))?;
    let slack = w.weight(k) - w.delta() / 2.0;
    Ok(CriterionReport::new(Criterion::DurCirac, Scope::Cut(split.clone()), slack, 0.0, Fires::Below, true))
}

// ---------------------------------------------------------------------------
// battery

/// A criterion selectable by name.
#[derive(Debug, Clone, PartialEq)]
pub enum CriterionKind {
    Ppt,
    Reduction,
    Choi,
    Breuer,
    Realign,
    Permute,
    Majorization,
    Entropic(f64),
    Det2q,
    Witness(String),
}

impl CriterionKind {
    /// Everything that applies generically.
    pub fn defaults() -> Vec<CriterionKind> {
        use CriterionKind::*;
        vec![
            Ppt,
            Det2q,
            Reduction,
            Choi,
            Breuer,
            Realign,
            Permute,
            Majorization,
            Entropic(1.0),
            Entropic(2.0),
            Entropic(f64::INFINITY),
            Witness("swap".into()),
            Witness("fidelity".into()),
        ]
    }
}

impl FromStr for CriterionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use CriterionKind::*;
        Ok(match s {
            "ppt" => Ppt,
            "reduction" => Reduction,
            "choi" => Choi,
            "breuer" => Breuer,
            "realign" => Realign,
            "permute" => Permute,
            "majorization" => Majorization,
            "det2q" => Det2q,
            _ => {
                if let Some(a) = s.strip_prefix("entropic:") {
                    let alpha = match a {
                        "inf" | "infinity" => f64::INFINITY,
                        _ => a.parse::<f64>().map_err(|_| Error::Argument(format!("bad entropic order {a:?}")))?,
                    };
                    if !(alpha >= 0.0) {
                        return arg("entropic order must be nonnegative");
                    }
                    Entropic(alpha)
                } else if let Some(k) = s.strip_prefix("witness:") {
                    if !matches!(k, "swap" | "fidelity") {
                        return arg(format!("unknown witness {k:?}; expected swap or fidelity"));
                    }
                    Witness(k.to_string())
                } else {
                    return arg(format!("unknown criterion {s:?}"));
                }
            }
        })
    }
}

#[derive(Debug, Clone)]
pub struct BatteryResult {
    pub reports: Vec<CriterionReport>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl BatteryResult {
    pub fn fired(&self) -> impl Iterator<Item = &CriterionReport> {
        self.reports.iter().filter(|r| r.verdict == Verdict::Entangled)
    }
}

fn applicable(kind: &CriterionKind, dims: &[usize]) -> bool {
    match kind {
        CriterionKind::Det2q => dims == [2, 2],
        CriterionKind::Choi => dims[1] == 3,
        CriterionKind::Breuer => dims[1] % 2 == 0,
        CriterionKind::Witness(_) => dims[0] == dims[1],
        _ => true,
    }
}

fn run_on_cut(kind: &CriterionKind, rho: &DensityMatrix, split: &Partition) -> Result<Option<CriterionReport>> {
    let dims: Vec<usize> = [split.left(), split.right()]
        .iter()
        .map(|part| part.iter().map(|&i| rho.dims()[i]).product())
        .collect();
    if !applicable(kind, &dims) {
        return Ok(None);
    }
    let report = match kind {
        CriterionKind::Ppt => check_ppt(rho, split)?,
        CriterionKind::Reduction => check_reduction(rho, split)?,
        CriterionKind::Choi => check_map(rho, split, &PositiveMap::Choi)?,
        CriterionKind::Breuer => check_map(rho, split, &PositiveMap::BreuerHall(None))?,
        CriterionKind::Realign => check_realignment(rho, split)?,
        CriterionKind::Majorization => check_majorization(rho, split)?,
        CriterionKind::Entropic(a) => check_entropic(rho, split, *a)?,
        CriterionKind::Det2q => {
            let mut r = check_two_qubit_det(&bipartite_view(rho, split)?)?;
            r.scope = Scope::Cut(split.clone());
            r
        }
        CriterionKind::Witness(k) => {
            let kind = if k == "swap" { WitnessKind::Swap(dims[0]) } else { WitnessKind::Fidelity(dims[0]) };
            let mut r = check_witness(&make_witness(kind)?, &bipartite_view(rho, split)?)?;
            r.scope = Scope::Cut(split.clone());
            r
        }
        CriterionKind::Permute => return Ok(None),
    };
    Ok(Some(report))
}

fn sort_reports(reports: &mut [CriterionReport]) {
    reports.sort_by(|a, b| {
        a.criterion
            .rank()
            .cmp(&b.criterion.rank())
            .then_with(|| {
                let (x, y) = match (&a.criterion, &b.criterion) {
                    (Criterion::Entropic(x), Criterion::Entropic(y)) => (*x, *y),
                    _ => (0.0, 0.0),
                };
                x.total_cmp(&y)
            })
            .then_with(|| a.criterion.to_string().cmp(&b.criterion.to_string()))
            .then_with(|| a.scope.to_string().cmp(&b.scope.to_string()))
    });
}

/// Runs the selected criteria over `partitions` (all bipartitions when
/// `None`) and combines the verdicts.
pub fn battery(state: &State, criteria: &[CriterionKind], partitions: Option<&[Partition]>) -> Result<BatteryResult> {
    let n = state.dims().len();
    if n < 2 {
        return arg("separability needs at least two subsystems");
    }
    let cuts: Vec<Partition> = match partitions {
        Some(p) => p.to_vec(),
        None => Partition::all_bipartitions(n),
    };
    for cut in &cuts {
        if !cut.is_bipartition() || cut.num_subsystems() != n {
            return arg(format!("{cut} is not a bipartition of {n} subsystems"));
        }
    }
    let mut reports = Vec::new();
    let mut notes = Vec::new();

    if let State::Pure(psi) = state {
        let mut product_everywhere = true;
        for cut in &cuts {
            let rank = schmidt_rank(psi, cut)?;
            product_everywhere &= rank == 1;
            let mut r = CriterionReport::new(Criterion::SchmidtRank, Scope::Cut(cut.clone()), rank as f64, 1.0, Fires::Above, true);
            r.note = Some(format!("Schmidt rank {rank}"));
            reports.push(r);
        }
        let all_cuts = cuts.len() == Partition::all_bipartitions(n).len();
        let verdict = if !product_everywhere {
            Verdict::Entangled
        } else if all_cuts {
            Verdict::Separable
        } else {
            // product across the requested cuts only
            if n == 2 { Verdict::Separable } else { Verdict::Inconclusive }
        };
        sort_reports(&mut reports);
        return Ok(BatteryResult { reports, verdict, notes });
    }

    let rho = state.density();
    for kind in criteria {
        for cut in &cuts {
            if let Some(r) = run_on_cut(kind, &rho, cut)? {
                reports.push(r);
            }
        }
    }
    if n == 3 && criteria.contains(&CriterionKind::Permute) {
        for perm in permutation_classes(n) {
            reports.push(check_permutation(&rho, &perm)?);
        }
    }

    let mut separable = false;
    if let Some(w) = recognize_dur_cirac(&rho) {
        let mut all = true;
        for cut in &cuts {
            let r = check_dur_cirac(&w, cut)?;
            all &= r.verdict == Verdict::Separable;
            reports.push(r);
        }
        if all && cuts.len() == Partition::all_bipartitions(n).len() {
            separable = true;
            notes.push("GHZ-diagonal family: separable across every cut, hence fully separable".into());
        }
    }
    if n == 2 {
        separable |= reports
            .iter()
            .any(|r| r.verdict == Verdict::Separable && matches!(r.criterion, Criterion::Ppt | Criterion::Reduction | Criterion::Det2q));
    } else {
        for r in reports
            .iter_mut()
            .filter(|r| r.verdict == Verdict::Separable && matches!(r.criterion, Criterion::Ppt | Criterion::Reduction))
        {
            r.note = Some("separable across this cut only".into());
        }
    }

    sort_reports(&mut reports);
    let entangled = reports.iter().any(|r| r.verdict == Verdict::Entangled);
    let verdict = if entangled {
        Verdict::Entangled
    } else if separable {
        Verdict::Separable
    } else {
        Verdict::Inconclusive
    };
    if verdict == Verdict::Inconclusive {
        notes.push("no criterion fired; entanglement, if present, is beyond this battery".into());
    }
    Ok(BatteryResult { reports, verdict, notes })
}
