//! Closed-form entanglement measures and lower bounds.

use std::str::FromStr;

use crate::error::{arg, Error, Result};
use crate::linalg::{
    binary_entropy, bipartite_view, c, partial_trace, partial_transpose, pauli, realign,
    schmidt, shannon, singular_values, sqrt_psd, tensor_product, trace_norm, trace_of_product, CMatrix,
    DensityMatrix, Partition, PureState,
};
use crate::states::{bell, maxent_projector, swap_operator, symmetry_projector, werner, State};

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureValue {
    pub measure: String,
    /// One entry for scalar measures, several for monotone families.
    pub values: Vec<f64>,
    /// False when the number is only a bound.
    pub exact: bool,
}

impl MeasureValue {
    fn scalar(measure: impl Into<String>, value: f64, exact: bool) -> Self {
        MeasureValue { measure: measure.into(), values: vec![value], exact }
    }

    pub fn value(&self) -> f64 {
        self.values[0]
    }
}

fn schmidt_probabilities(psi: &PureState, split: &Partition) -> Result<Vec<f64>> {
    Ok(schmidt(psi, split)?.probabilities())
}

/// von Neumann entropy of either reduction, in bits.
pub fn entropy_of_entanglement(psi: &PureState, split: &Partition) -> Result<f64> {
    Ok(shannon(&schmidt_probabilities(psi, split)?))
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return arg(format!("two-qubit measure applied to dimensions {:?}", rho.dims()));
    }
    Ok(())
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence_2q(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let yy = tensor_product(&pauli(2), &pauli(2))?;
    let flipped = &yy * rho.matrix().map(|z| z.conj()) * &yy;
    let s = singular_values(&(sqrt_psd(rho.matrix())? * sqrt_psd(&flipped)?));
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// H((1 + √(1 − C²)) / 2).
pub fn eof_from_concurrence(conc: f64) -> f64 {
    let x = (1.0 + (1.0 - conc * conc).max(0.0).sqrt()) / 2.0;
    binary_entropy(x)
}

pub fn eof_2q(rho: &DensityMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence_2q(rho)?))
}

/// √(2(1 − Tr ρ_B²)).
pub fn concurrence_pure(psi: &PureState, split: &Partition) -> Result<f64> {
    let p = schmidt_probabilities(psi, split)?;
    let purity: f64 = p.iter().map(|x| x * x).sum();
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

/// Concurrence of a mixed state whose range contains only pure states of
/// one fixed concurrence; `None` when the range is not of that kind.
pub fn concurrence_constant_range(rho: &DensityMatrix, split: &Partition) -> Result<Option<f64>> {
    let ab = bipartite_view(rho, split)?;
    let (da, db) = (ab.dims()[0], ab.dims()[1]);
    let spec = crate::linalg::hermitian_spectrum(ab.matrix())?;
    let r = spec.values.iter().filter(|&&v| v > crate::tol::Tolerances::global().rank).count();
    if r == 0 || r > 16 {
        return Ok(None);
    }
    let basis = spec.vectors.columns(0, r).into_owned();
    // 4 P⁻_{AA'} ⊗ P⁻_{BB'} on the ordering (A, B, A', B')
    let anti_a = symmetry_projector(da, -1.0);
    let anti_b = symmetry_projector(db, -1.0);
    let q = tensor_product(&anti_a, &anti_b)?;
    let q = crate::linalg::permute_subsystems(&q, &[da, da, db, db], &[0, 2, 1, 3]) * c(4.0, 0.0);
    let lift = tensor_product(&basis, &basis)?;
    let compressed = lift.adjoint() * q * &lift;
    let sym = symmetry_projector(r, 1.0);
    let restricted = &sym * compressed * &sym;
    let sym_dim = (r * (r + 1) / 2) as f64;
    let level = restricted.trace().re / sym_dim;
    if (restricted - &sym * c(level, 0.0)).norm() > 1e-9 {
        return Ok(None);
    }
    Ok(Some(level.max(0.0).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceBounds {
    pub norm_bound: f64,
    pub two_copy_bound: f64,
}

/// Two-copy operator 2P⁺⊗P⁻ + 2P⁻⊗P⁻ − 4P⁻⊗P⁻ on (A, A', B, B').
fn two_copy_witness(da: usize, db: usize) -> Result<CMatrix> {
    let (sa, aa) = (symmetry_projector(da, 1.0), symmetry_projector(da, -1.0));
    let ab = symmetry_projector(db, -1.0);
    let w = tensor_product(&sa, &ab)? * c(2.0, 0.0) + tensor_product(&aa, &ab)? * c(2.0, 0.0)
        - tensor_product(&aa, &ab)? * c(4.0, 0.0);
    Ok(w)
}

pub fn concurrence_lower_bounds(rho: &DensityMatrix, split: &Partition) -> Result<ConcurrenceBounds> {
    let ab = bipartite_view(rho, split)?;
    let (da, db) = (ab.dims()[0], ab.dims()[1]);
    let m = da.min(db) as f64;
    let pt = trace_norm(&partial_transpose(&ab, &[1])?);
    let re = trace_norm(&realign(&ab)?);
    let norm_bound = ((2.0 / (m * (m - 1.0))).sqrt() * (pt.max(re) - 1.0)).max(0.0);

    let two = ab.tensor(&ab)?;
    // ρ⊗ρ is ordered (A, B, A', B'); the witness wants (A, A', B, B')
    let reordered = crate::linalg::permute_subsystems(two.matrix(), two.dims(), &[0, 2, 1, 3]);
    let value = trace_of_product(&two_copy_witness(da, db)?, &reordered).re;
    Ok(ConcurrenceBounds { norm_bound, two_copy_bound: (-value).max(0.0) })
}

/// (‖ρ^Γ‖₁ − 1) / 2.
pub fn negativity(rho: &DensityMatrix, split: &Partition) -> Result<f64> {
    let ab = bipartite_view(rho, split)?;
    Ok(((trace_norm(&partial_transpose(&ab, &[1])?) - 1.0) / 2.0).max(0.0))
}

/// log₂ ‖ρ^Γ‖₁.
pub fn log_negativity(rho: &DensityMatrix, split: &Partition) -> Result<f64> {
    let ab = bipartite_view(rho, split)?;
    Ok(trace_norm(&partial_transpose(&ab, &[1])?).log2().max(0.0))
}

fn equal_sides(rho: &DensityMatrix) -> Result<usize> {
    match rho.dims() {
        [a, b] if a == b => Ok(*a),
        d => arg(format!("needs a d⊗d state, got dimensions {d:?}")),
    }
}

/// Tr(ρ P⁺_d).
pub fn singlet_fraction(rho: &DensityMatrix) -> Result<f64> {
    let d = equal_sides(rho)?;
    Ok(trace_of_product(&maxent_projector(d), rho.matrix()).re)
}

pub fn teleport_fidelity_from_fraction(f: f64, d: usize) -> f64 {
    let d = d as f64;
    (d * f + 1.0) / (d + 1.0)
}

/// (dF + 1)/(d + 1).
pub fn teleport_fidelity(rho: &DensityMatrix) -> Result<f64> {
    let d = equal_sides(rho)?;
    Ok(teleport_fidelity_from_fraction(singlet_fraction(rho)?, d))
}

/// E_k = Σ_{i≥k} λ_i for k = 1..min(d_A, d_B), λ nonincreasing.
pub fn vidal_monotones_of(lambda: &[f64], d: usize) -> Vec<f64> {
    let mut l = lambda.to_vec();
    l.resize(d.max(l.len()), 0.0);
    (0..d).map(|k| l[k..].iter().sum()).collect()
}

pub fn vidal_monotones(psi: &PureState, split: &Partition) -> Result<Vec<f64>> {
    let p = schmidt_probabilities(psi, split)?;
    Ok(vidal_monotones_of(&p, p.len()))
}

/// Elementary symmetric polynomial of degree `p` in the Schmidt probabilities.
pub fn tau_of(lambda: &[f64], p: usize) -> f64 {
    let mut e = vec![0.0; p + 1];
    e[0] = 1.0;
    for &l in lambda {
        for k in (1..=p).rev() {
            e[k] += e[k - 1] * l;
        }
    }
    e[p]
}

pub fn tau_measure(psi: &PureState, split: &Partition, p: usize) -> Result<f64> {
    if p == 0 {
        return arg("τ order must be at least 1");
    }
    Ok(tau_of(&schmidt_probabilities(psi, split)?, p))
}

fn require_three_qubits(psi: &PureState) -> Result<()> {
    if psi.dims() != [2, 2, 2] {
        return arg(format!("three-qubit measure applied to dimensions {:?}", psi.dims()));
    }
    Ok(())
}

/// C²(A:BC) − C²(AB) − C²(AC).
pub fn three_tangle(psi: &PureState) -> Result<f64> {
    require_three_qubits(psi)?;
    let rho = psi.density();
    let a_bc = concurrence_pure(psi, &Partition::bipartition(&[0], 3)?)?.powi(2);
    let ab = concurrence_2q(&partial_trace(&rho, &[0, 1])?)?.powi(2);
    let ac = concurrence_2q(&partial_trace(&rho, &[0, 2])?)?.powi(2);
    let tau = a_bc - ab - ac;
    if tau < -1e-6 {
        return Err(Error::Numerical(format!("three-tangle {tau:e} is negative")));
    }
    Ok(tau.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlocClass {
    Product,
    /// The named qubit factors out; the other two are entangled.
    BisepA,
    BisepB,
    BisepC,
    WClass,
    GhzClass,
}

impl std::fmt::Display for SlocClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SlocClass::Product => "PRODUCT",
            SlocClass::BisepA => "BISEP_A",
            SlocClass::BisepB => "BISEP_B",
            SlocClass::BisepC => "BISEP_C",
            SlocClass::WClass => "W_CLASS",
            SlocClass::GhzClass => "GHZ_CLASS",
        })
    }
}

pub const SLOCC_TANGLE_THRESHOLD: f64 = 1e-8;

pub fn slocc_class_3q(psi: &PureState) -> Result<SlocClass> {
    require_three_qubits(psi)?;
    let ranks: Vec<usize> = (0..3)
        .map(|q| Ok(schmidt(psi, &Partition::bipartition(&[q], 3)?)?.rank))
        .collect::<Result<_>>()?;
    Ok(match ranks.as_slice() {
        [1, 1, 1] => SlocClass::Product,
        [1, _, _] => SlocClass::BisepA,
        [_, 1, _] => SlocClass::BisepB,
        [_, _, 1] => SlocClass::BisepC,
        _ => {
            if three_tangle(psi)? > SLOCC_TANGLE_THRESHOLD {
                SlocClass::GhzClass
            } else {
                SlocClass::WClass
            }
        }
    })
}

/// Regularised relative entropy of entanglement of the d⊗d Werner state
/// with antisymmetric weight `p`.
pub fn werner_relent_reference(d: usize, p: f64) -> Result<f64> {
    if d < 2 {
        return arg("d must be at least 2");
    }
    if !(0.0..=1.0).contains(&p) {
        return arg(format!("p = {p} outside [0, 1]"));
    }
    let df = d as f64;
    Ok(if p <= 0.5 {
        0.0
    } else if d == 2 || p <= 0.5 + 1.0 / df {
        1.0 - binary_entropy(p)
    } else {
        ((df - 2.0) / df).log2() + p * ((df + 2.0) / (df - 2.0)).log2()
    })
}

/// S(ρ_B) − S(ρ_AB).
pub fn coherent_information(rho: &DensityMatrix, split: &Partition) -> Result<f64> {
    let ab = bipartite_view(rho, split)?;
    let b = partial_trace(&ab, &[1])?;
    Ok(crate::linalg::von_neumann_entropy(&b) - crate::linalg::von_neumann_entropy(&ab))
}

/// Bell-basis weights of a two-qubit state in dense-coding order.
pub fn bell_weights(rho: &DensityMatrix) -> Result<[f64; 4]> {
    require_two_qubits(rho)?;
    let mut w = [0.0; 4];
    for (k, slot) in w.iter_mut().enumerate() {
        let v = bell(k)?;
        *slot = (v.amplitudes().adjoint() * rho.matrix() * v.amplitudes())[(0, 0)].re;
    }
    Ok(w)
}

/// Distillable entanglement 1 − S(ρ) of a mixture of two Bell states; other
/// inputs are rejected.
pub fn distillable_two_bell_mixture(rho: &DensityMatrix) -> Result<f64> {
    let w = bell_weights(rho)?;
    let mut rebuilt = CMatrix::zeros(4, 4);
    for (k, &wk) in w.iter().enumerate() {
        let v = bell(k)?;
        rebuilt += v.amplitudes() * v.amplitudes().adjoint() * c(wk, 0.0);
    }
    let support = w.iter().filter(|&&x| x > 1e-12).count();
    if (rebuilt - rho.matrix()).norm() > 1e-9 || support > 2 {
        return arg("state is not a mixture of two Bell states");
    }
    Ok(1.0 - shannon(&w))
}

/// Werner weight p if `rho` is a d⊗d Werner state.
pub fn recognize_werner(rho: &DensityMatrix) -> Option<(usize, f64)> {
    let d = equal_sides(rho).ok()?;
    let p = ((1.0 - trace_of_product(&swap_operator(d), rho.matrix()).re) / 2.0).clamp(0.0, 1.0);
    let w = werner(d, p).ok()?;
    ((w.matrix() - rho.matrix()).norm() < 1e-9).then_some((d, p))
}

// ---------------------------------------------------------------------------
// token dispatch

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureKind {
    EntropyOfEntanglement,
    Concurrence,
    Eof,
    Negativity,
    LogNegativity,
    SingletFraction,
    TeleportFidelity,
    VidalMonotones,
    Tau(usize),
    ThreeTangle,
    CoherentInformation,
    WernerRelativeEntropy,
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use MeasureKind::*;
        Ok(match s {
            "ee" => EntropyOfEntanglement,
            "conc" => Concurrence,
            "eof" => Eof,
            "neg" => Negativity,
            "logneg" => LogNegativity,
            "fsing" => SingletFraction,
            "ftel" => TeleportFidelity,
            "ek" => VidalMonotones,
            "tangle3" => ThreeTangle,
            "coh" => CoherentInformation,
            "relent-werner" => WernerRelativeEntropy,
            _ => match s.strip_prefix("tau:") {
                Some(p) => Tau(p.parse().map_err(|_| Error::Argument(format!("bad τ order {p:?}")))?),
                None => return arg(format!("unknown measure {s:?}")),
            },
        })
    }
}

impl MeasureKind {
    pub fn token(&self) -> String {
        use MeasureKind::*;
        match self {
            EntropyOfEntanglement => "ee".into(),
            Concurrence => "conc".into(),
            Eof => "eof".into(),
            Negativity => "neg".into(),
            LogNegativity => "logneg".into(),
            SingletFraction => "fsing".into(),
            TeleportFidelity => "ftel".into(),
            VidalMonotones => "ek".into(),
            Tau(p) => format!("tau:{p}"),
            ThreeTangle => "tangle3".into(),
            CoherentInformation => "coh".into(),
            WernerRelativeEntropy => "relent-werner".into(),
        }
    }
}

fn need_pure<'a>(state: &'a State, what: &str) -> Result<&'a PureState> {
    state.as_pure().ok_or_else(|| Error::Argument(format!("{what} needs a pure state")))
}

pub fn evaluate_measure(kind: &MeasureKind, state: &State, split: &Partition) -> Result<MeasureValue> {
    use MeasureKind::*;
    let token = kind.token();
    let view = || bipartite_view(&state.density(), split);
    Ok(match kind {
        EntropyOfEntanglement => MeasureValue::scalar(token, entropy_of_entanglement(need_pure(state, "ee")?, split)?, true),
        Concurrence => {
            if let Some(psi) = state.as_pure() {
                MeasureValue::scalar(token, concurrence_pure(psi, split)?, true)
            } else {
                let ab = view()?;
                if ab.dims() == [2, 2] {
                    MeasureValue::scalar(token, concurrence_2q(&ab)?, true)
                } else if let Some(v) = concurrence_constant_range(&ab, &Partition::bipartition(&[0], 2)?)? {
                    MeasureValue::scalar(token, v, true)
                } else {
                    let b = concurrence_lower_bounds(&ab, &Partition::bipartition(&[0], 2)?)?;
                    MeasureValue::scalar(token, b.norm_bound.max(b.two_copy_bound), false)
                }
            }
        }
        Eof => {
            if let Some(psi) = state.as_pure() {
                MeasureValue::scalar(token, entropy_of_entanglement(psi, split)?, true)
            } else {
                MeasureValue::scalar(token, eof_2q(&view()?)?, true)
            }
        }
        Negativity => MeasureValue::scalar(token, negativity(&state.density(), split)?, true),
        LogNegativity => MeasureValue::scalar(token, log_negativity(&state.density(), split)?, true),
        SingletFraction => MeasureValue::scalar(token, singlet_fraction(&view()?)?, true),
        TeleportFidelity => MeasureValue::scalar(token, teleport_fidelity(&view()?)?, true),
        VidalMonotones => MeasureValue { measure: token, values: vidal_monotones(need_pure(state, "ek")?, split)?, exact: true },
        Tau(p) => MeasureValue::scalar(token, tau_measure(need_pure(state, "tau")?, split, *p)?, true),
        ThreeTangle => MeasureValue::scalar(token, three_tangle(need_pure(state, "tangle3")?)?, true),
        CoherentInformation => MeasureValue::scalar(token, coherent_information(&state.density(), split)?, true),
        WernerRelativeEntropy => {
            let (d, p) = recognize_werner(&view()?).ok_or_else(|| Error::Argument("state is not a Werner state".into()))?;
            MeasureValue::scalar(token, werner_relent_reference(d, p)?, true)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::states::{aharonov, ghz, maxent, noisy_singlet, random_pure, random_separable, singlet, w_state};
    use approx::assert_abs_diff_eq;

    fn ab() -> Partition {
        Partition::bipartition(&[0], 2).unwrap()
    }

    fn a_bc() -> Partition {
        Partition::bipartition(&[0], 3).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(entropy_of_entanglement(&maxent(2).unwrap(), &ab()).unwrap(), 1.0, epsilon = 1e-12);
        let prod = PureState::basis(&[0, 1], vec![2, 2]).unwrap();
        assert_abs_diff_eq!(entropy_of_entanglement(&prod, &ab()).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(entropy_of_entanglement(&ghz(3, 2).unwrap(), &a_bc()).unwrap(), 1.0, epsilon = 1e-12);
    }

    /// (3p − 1)/2 from the Bell-diagonal eigenvalue formula.
    #[test]
    fn concurrence_of_noisy_singlet() {
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let rho = noisy_singlet(p).unwrap();
            let w = bell_weights(&rho).unwrap();
            let top = w.iter().copied().fold(0.0, f64::max);
            let oracle = (2.0 * top - 1.0).max(0.0);
            assert_abs_diff_eq!(oracle, ((3.0 * p - 1.0) / 2.0).max(0.0), epsilon = 1e-12);
            assert_abs_diff_eq!(concurrence_2q(&rho).unwrap(), oracle, epsilon = 1e-9);
        }
    }

    #[test]
    fn concurrence_and_eof_extremes() {
        assert_abs_diff_eq!(concurrence_2q(&singlet().density()).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(eof_from_concurrence(1.0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eof_from_concurrence(0.0), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eof_2q(&werner(2, 1.0).unwrap()).unwrap(), 1.0, epsilon = 1e-9);
        let sep = random_separable(&[2, 2], 3, &mut seeded(2)).unwrap();
        assert_abs_diff_eq!(concurrence_2q(&sep).unwrap(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn w_state_pair_concurrence() {
        let rho = partial_trace(&w_state(3).unwrap().density(), &[0, 1]).unwrap();
        assert_abs_diff_eq!(concurrence_2q(&rho).unwrap(), 2.0 / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn pure_concurrence_examples() {
        assert_abs_diff_eq!(concurrence_pure(&maxent(2).unwrap(), &ab()).unwrap(), 1.0, epsilon = 1e-12);
        let prod = PureState::basis(&[1, 1], vec![2, 2]).unwrap();
        assert_abs_diff_eq!(concurrence_pure(&prod, &ab()).unwrap(), 0.0, epsilon = 1e-12);
        // each single-qutrit reduction of the antisymmetric state is I/3
        let c = concurrence_pure(&aharonov(), &a_bc()).unwrap();
        assert_abs_diff_eq!(c * c, 4.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_range_concurrence() {
        let rho = partial_trace(&aharonov().density(), &[0, 1]).unwrap();
        let c = concurrence_constant_range(&rho, &ab()).unwrap().unwrap();
        assert_abs_diff_eq!(c, 1.0, epsilon = 1e-9);
        assert!(concurrence_constant_range(&noisy_singlet(0.8).unwrap(), &ab()).unwrap().is_none());
        let s = concurrence_constant_range(&singlet().density(), &ab()).unwrap().unwrap();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn concurrence_bounds() {
        let b = concurrence_lower_bounds(&maxent(2).unwrap().density(), &ab()).unwrap();
        assert_abs_diff_eq!(b.norm_bound, 1.0, epsilon = 1e-12);
        let sep = random_separable(&[3, 3], 4, &mut seeded(3)).unwrap();
        let b = concurrence_lower_bounds(&sep, &ab()).unwrap();
        assert_eq!(b.norm_bound, 0.0);
        assert_eq!(b.two_copy_bound, 0.0);
        let mut rng = seeded(9);
        for _ in 0..20 {
            let psi = random_pure(&[3, 3], &mut rng).unwrap();
            let conc = concurrence_pure(&psi, &ab()).unwrap();
            let b = concurrence_lower_bounds(&psi.density(), &ab()).unwrap();
            assert!(b.norm_bound <= conc + 1e-9);
            assert!(b.two_copy_bound <= conc + 1e-9);
        }
    }

    #[test]
    fn negativity_examples() {
        let s = singlet().density();
        assert_abs_diff_eq!(negativity(&s, &ab()).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(log_negativity(&s, &ab()).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(negativity(&noisy_singlet(0.2).unwrap(), &ab()).unwrap(), 0.0, epsilon = 1e-12);
        let two = maxent(2).unwrap().tensor(&maxent(2).unwrap()).unwrap().density();
        let split = Partition::bipartition(&[0, 2], 4).unwrap();
        assert_abs_diff_eq!(log_negativity(&two, &split).unwrap(), 2.0, epsilon = 1e-10);
    }

    #[test]
    fn fidelity_examples() {
        let phi = maxent(2).unwrap().density();
        assert_abs_diff_eq!(singlet_fraction(&phi).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(teleport_fidelity(&phi).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(teleport_fidelity_from_fraction(0.5, 2), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(teleport_fidelity_from_fraction(0.75, 2), 5.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn vidal_and_tau_examples() {
        let e = vidal_monotones(&maxent(2).unwrap(), &ab()).unwrap();
        assert_abs_diff_eq!(e[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e[1], 0.5, epsilon = 1e-12);
        let prod = PureState::basis(&[0, 0], vec![2, 2]).unwrap();
        let e = vidal_monotones(&prod, &ab()).unwrap();
        assert_abs_diff_eq!(e[1], 0.0, epsilon = 1e-12);
        let psi = random_pure(&[4, 4], &mut seeded(1)).unwrap();
        let e = vidal_monotones(&psi, &ab()).unwrap();
        assert!(e.windows(2).all(|w| w[0] >= w[1]));
        assert_abs_diff_eq!(tau_measure(&psi, &ab(), 1).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(tau_measure(&maxent(2).unwrap(), &ab(), 2).unwrap(), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(tau_measure(&maxent(2).unwrap(), &ab(), 3).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn tangle_examples() {
        assert_abs_diff_eq!(three_tangle(&ghz(3, 2).unwrap()).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(three_tangle(&w_state(3).unwrap()).unwrap(), 0.0, epsilon = 1e-9);
        let zero = PureState::basis(&[0, 0, 0], vec![2, 2, 2]).unwrap();
        assert_abs_diff_eq!(three_tangle(&zero).unwrap(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn slocc_examples() {
        assert_eq!(slocc_class_3q(&ghz(3, 2).unwrap()).unwrap(), SlocClass::GhzClass);
        assert_eq!(slocc_class_3q(&w_state(3).unwrap()).unwrap(), SlocClass::WClass);
        let bisep = maxent(2).unwrap().tensor(&PureState::basis(&[0], vec![2]).unwrap()).unwrap();
        assert_eq!(slocc_class_3q(&bisep).unwrap(), SlocClass::BisepC);
        let zero = PureState::basis(&[0, 0, 0], vec![2, 2, 2]).unwrap();
        assert_eq!(slocc_class_3q(&zero).unwrap(), SlocClass::Product);
    }

    #[test]
    fn werner_relative_entropy_branches() {
        assert_abs_diff_eq!(werner_relent_reference(3, 0.5).unwrap(), 0.0, epsilon = 1e-15);
        for d in [3usize, 4, 6] {
            let p = 0.5 + 1.0 / d as f64;
            let df = d as f64;
            let upper = ((df - 2.0) / df).log2() + p * ((df + 2.0) / (df - 2.0)).log2();
            assert_abs_diff_eq!(1.0 - binary_entropy(p), upper, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(werner_relent_reference(2, 1.0).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn coherent_information_examples() {
        assert_abs_diff_eq!(coherent_information(&maxent(2).unwrap().density(), &ab()).unwrap(), 1.0, epsilon = 1e-12);
        let mm = DensityMatrix::maximally_mixed(&[2, 2]).unwrap();
        assert_abs_diff_eq!(coherent_information(&mm, &ab()).unwrap(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_bell_mixture_guard() {
        let p = 0.8;
        let m = bell(3).unwrap().density().into_matrix() * c(p, 0.0) + bell(1).unwrap().density().into_matrix() * c(1.0 - p, 0.0);
        let rho = DensityMatrix::new(m, vec![2, 2]).unwrap();
        assert_abs_diff_eq!(distillable_two_bell_mixture(&rho).unwrap(), 1.0 - binary_entropy(p), epsilon = 1e-12);
        assert!(distillable_two_bell_mixture(&noisy_singlet(0.5).unwrap()).is_err());
    }

    #[test]
    fn measure_tokens() {
        for t in ["ee", "conc", "eof", "neg", "logneg", "fsing", "ftel", "ek", "tau:2", "tangle3", "coh", "relent-werner"] {
            let k: MeasureKind = t.parse().unwrap();
            assert_eq!(k.token(), t);
        }
        let v = evaluate_measure(&MeasureKind::WernerRelativeEntropy, &State::Mixed(werner(3, 0.9).unwrap()), &ab()).unwrap();
        assert!(v.value() > 0.0);
    }
}
