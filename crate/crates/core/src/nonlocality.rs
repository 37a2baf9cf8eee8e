//! Correlation tensors and Bell-type tests.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{arg, contract, Result};
use crate::linalg::{
    c, eigvalsh, embed, expectation, hermitian_spectrum, partial_trace, pauli, tensor_all, CMatrix,
    DensityMatrix, Partition, PureState,
};

/// Numerical slack for Bell bounds.
pub const BELL_SLACK: f64 = 1e-9;

pub type Vec3 = [f64; 3];

fn norm3(v: &Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn check_unit(v: &Vec3) -> Result<()> {
    if (norm3(v) - 1.0).abs() > 1e-12 {
        return arg(format!("measurement direction {v:?} is not a unit vector"));
    }
    Ok(())
}

/// a·σ.
pub fn spin_observable(a: &Vec3) -> CMatrix {
    pauli(1) * c(a[0], 0.0) + pauli(2) * c(a[1], 0.0) + pauli(3) * c(a[2], 0.0)
}

pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v: Vec3 = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let n = norm3(&v);
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

// ---------------------------------------------------------------------------
// correlation tensor

/// Pauli expansion coefficients t_{i₁…iₙ} = Tr(ρ σ_{i₁} ⊗ … ⊗ σ_{iₙ}),
/// index 0 being the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    pub qubits: usize,
    /// Base-4 flat storage, first qubit most significant.
    pub components: Vec<f64>,
}

impl CorrelationTensor {
    pub fn get(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.qubits);
        self.components[idx.iter().fold(0, |acc, &i| acc * 4 + i)]
    }

    /// The 3×3 block t_{ij}, i, j ≥ 1, of a two-qubit tensor.
    pub fn correlation_matrix(&self) -> nalgebra::Matrix3<f64> {
        assert_eq!(self.qubits, 2);
        nalgebra::Matrix3::from_fn(|i, j| self.get(&[i + 1, j + 1]))
    }
}

fn qubit_count(rho: &DensityMatrix) -> Result<usize> {
    if rho.dims().iter().any(|&d| d != 2) {
        return arg(format!("expected qubits, got dimensions {:?}", rho.dims()));
    }
    Ok(rho.num_subsystems())
}

pub fn correlation_tensor(rho: &DensityMatrix) -> Result<CorrelationTensor> {
    let n = qubit_count(rho)?;
    if n > 6 {
        return arg("correlation tensor limited to six qubits");
    }
    let paulis: Vec<CMatrix> = (0..4).map(pauli).collect();
    let mut components = Vec::with_capacity(1 << (2 * n));
    for flat in 0..(1usize << (2 * n)) {
        let factors: Vec<CMatrix> = (0..n).map(|q| paulis[(flat >> (2 * (n - 1 - q))) & 3].clone()).collect();
        components.push(expectation(&tensor_all(&factors)?, rho));
    }
    Ok(CorrelationTensor { qubits: n, components })
}

// ---------------------------------------------------------------------------
// CHSH

/// Two measurement directions per side: A₁, A₂ for Alice, B₁, B₂ for Bob.
#[derive(Debug, Clone, PartialEq)]
pub struct ChshSettings {
    pub a1: Vec3,
    pub a2: Vec3,
    pub b1: Vec3,
    pub b2: Vec3,
}

impl ChshSettings {
    pub fn new(a1: Vec3, a2: Vec3, b1: Vec3, b2: Vec3) -> Result<Self> {
        for v in [&a1, &a2, &b1, &b2] {
            check_unit(v)?;
        }
        Ok(ChshSettings { a1, a2, b1, b2 })
    }

    /// Settings reaching 2√2 on the singlet.
    pub fn optimal_singlet() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ChshSettings { a1: [0.0, 0.0, -1.0], a2: [-1.0, 0.0, 0.0], b1: [s, 0.0, s], b2: [-s, 0.0, s] }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        ChshSettings { a1: random_direction(rng), a2: random_direction(rng), b1: random_direction(rng), b2: random_direction(rng) }
    }
}

/// A₁⊗(B₁+B₂) + A₂⊗(B₁−B₂).
pub fn chsh_operator(s: &ChshSettings) -> Result<CMatrix> {
    for v in [&s.a1, &s.a2, &s.b1, &s.b2] {
        check_unit(v)?;
    }
    let (a1, a2) = (spin_observable(&s.a1), spin_observable(&s.a2));
    let (b1, b2) = (spin_observable(&s.b1), spin_observable(&s.b2));
    Ok(a1.kronecker(&(&b1 + &b2)) + a2.kronecker(&(&b1 - &b2)))
}

fn two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return arg(format!("expected two qubits, got dimensions {:?}", rho.dims()));
    }
    Ok(())
}

/// Tr(B_CHSH ρ).
pub fn bell_chsh_value(rho: &DensityMatrix, s: &ChshSettings) -> Result<f64> {
    two_qubit(rho)?;
    Ok(expectation(&chsh_operator(s)?, rho))
}

/// Sum of the two largest eigenvalues of TᵀT.
pub fn chsh_m(rho: &DensityMatrix) -> Result<f64> {
    two_qubit(rho)?;
    let t = correlation_tensor(rho)?.correlation_matrix();
    let mut ev: Vec<f64> = (t.transpose() * t).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev[0] + ev[1])
}

/// √max(0, √M − 1).
pub fn chsh_b(rho: &DensityMatrix) -> Result<f64> {
    Ok((chsh_m(rho)?.sqrt() - 1.0).max(0.0).sqrt())
}

fn any_orthogonal(v: &Vec3) -> Vec3 {
    let pick = if v[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot = pick[0] * v[0] + pick[1] * v[1] + pick[2] * v[2];
    let w = [pick[0] - dot * v[0], pick[1] - dot * v[1], pick[2] - dot * v[2]];
    let n = norm3(&w);
    [w[0] / n, w[1] / n, w[2] / n]
}

/// Settings attaining 2√M, built from the top two eigenvectors of TᵀT.
pub fn optimal_chsh_settings(rho: &DensityMatrix) -> Result<ChshSettings> {
    two_qubit(rho)?;
    let t = correlation_tensor(rho)?.correlation_matrix();
    let eig = (t.transpose() * t).symmetric_eigen();
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let e1 = eig.eigenvectors.column(order[0]).into_owned();
    let e2 = eig.eigenvectors.column(order[1]).into_owned();
    let (mu1, mu2) = (eig.eigenvalues[order[0]].max(0.0), eig.eigenvalues[order[1]].max(0.0));
    let theta = if mu1 > 0.0 { (mu2 / mu1).sqrt().atan() } else { std::f64::consts::FRAC_PI_4 };
    let to3 = |v: nalgebra::Vector3<f64>| [v[0], v[1], v[2]];
    let b1 = e1 * theta.cos() + e2 * theta.sin();
    let b2 = e1 * theta.cos() - e2 * theta.sin();
    let unit_or = |v: nalgebra::Vector3<f64>, fallback: Vec3| {
        let n = v.norm();
        if n > 1e-12 {
            to3(v / n)
        } else {
            fallback
        }
    };
    let a1 = unit_or(t * e1, to3(e1));
    let a2 = unit_or(t * e2, any_orthogonal(&a1));
    ChshSettings::new(a1, a2, to3(b1), to3(b2))
}

// ---------------------------------------------------------------------------
// WWZB

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WwzbResult {
    pub lhs: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Σ_s |Σ_k (−1)^{⟨k,s⟩} E(k)| ≤ 2ⁿ. `table[k]` holds E(k) for the setting
/// string k, first party in the most significant bit.
pub fn wwzb_check(table: &[f64], n: usize) -> Result<WwzbResult> {
    if n == 0 || n > 6 {
        return arg("WWZB test supports 1 to 6 parties");
    }
    if table.len() != 1 << n {
        return arg(format!("correlation table needs {} entries, got {}", 1 << n, table.len()));
    }
    let lhs: f64 = (0..1usize << n)
        .map(|s| {
            (0..1usize << n)
                .map(|k| if (k & s).count_ones() % 2 == 0 { table[k] } else { -table[k] })
                .sum::<f64>()
                .abs()
        })
        .sum();
    let bound = (1u64 << n) as f64;
    Ok(WwzbResult { lhs, bound, pass: lhs <= bound + BELL_SLACK })
}

/// E(k) = Tr(ρ ⊗ⱼ aⱼ(kⱼ)·σ) for every setting string; `settings[j]` holds the
/// two directions of party j.
pub fn correlation_table(rho: &DensityMatrix, settings: &[[Vec3; 2]]) -> Result<Vec<f64>> {
    let n = qubit_count(rho)?;
    if settings.len() != n {
        return arg("one pair of directions per qubit required");
    }
    let obs: Vec<[CMatrix; 2]> = settings
        .iter()
        .map(|pair| {
            check_unit(&pair[0])?;
            check_unit(&pair[1])?;
            Ok([spin_observable(&pair[0]), spin_observable(&pair[1])])
        })
        .collect::<Result<_>>()?;
    (0..1usize << n)
        .map(|k| {
            let factors: Vec<CMatrix> = (0..n).map(|j| obs[j][(k >> (n - 1 - j)) & 1].clone()).collect();
            Ok(expectation(&tensor_all(&factors)?, rho))
        })
        .collect()
}

/// Local frame for one party: `axes` are orthonormal rows in R³, only the
/// first two are used; `weights` is a unit vector in R².
#[derive(Debug, Clone, PartialEq)]
pub struct TensorFrame {
    pub axes: [Vec3; 3],
    pub weights: [f64; 2],
}

impl TensorFrame {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let u = random_direction(rng);
        let v = any_orthogonal(&u);
        let theta: f64 = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
        let w = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
        // rotate v about u by a random angle so frames are not biased
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let v2 = [
            v[0] * phi.cos() + w[0] * phi.sin(),
            v[1] * phi.cos() + w[1] * phi.sin(),
            v[2] * phi.cos() + w[2] * phi.sin(),
        ];
        let w2 = [u[1] * v2[2] - u[2] * v2[1], u[2] * v2[0] - u[0] * v2[2], u[0] * v2[1] - u[1] * v2[0]];
        TensorFrame { axes: [u, v2, w2], weights: [theta.cos(), theta.sin()] }
    }
}

/// T^mod = Σ_{i∈{1,2}ⁿ} Π c_{i} |t'_{i}| with t' the correlation tensor in the
/// given local frames; LHV models satisfy T^mod ≤ 1.
pub fn wwzb_tensor_value(t: &CorrelationTensor, frames: &[TensorFrame]) -> Result<f64> {
    let n = t.qubits;
    if frames.len() != n {
        return arg("one frame per qubit required");
    }
    for f in frames {
        if (f.weights[0].hypot(f.weights[1]) - 1.0).abs() > 1e-12 {
            return arg("frame weights must form a unit vector");
        }
    }
    let mut total = 0.0;
    for choice in 0..1usize << n {
        // rotated component along axes[i_j] for each party
        let axes: Vec<&Vec3> = (0..n).map(|j| &frames[j].axes[(choice >> (n - 1 - j)) & 1]).collect();
        let mut comp = 0.0;
        for flat in 0..3usize.pow(n as u32) {
            let mut coeff = 1.0;
            let mut idx = vec![0; n];
            let mut rest = flat;
            for j in (0..n).rev() {
                let d = rest % 3;
                rest /= 3;
                idx[j] = d + 1;
                coeff *= axes[j][d];
            }
            if coeff != 0.0 {
                comp += coeff * t.get(&idx);
            }
        }
        let weight: f64 = (0..n).map(|j| frames[j].weights[(choice >> (n - 1 - j)) & 1]).product();
        total += weight * comp.abs();
    }
    Ok(total)
}

pub fn wwzb_tensor_check(t: &CorrelationTensor, frames: &[TensorFrame]) -> Result<bool> {
    Ok(wwzb_tensor_value(t, frames)? <= 1.0 + BELL_SLACK)
}

// ---------------------------------------------------------------------------
// all-versus-nothing operator

/// The nine-term operator on (A pol, A path, B pol, B path).
pub fn avn_operator() -> CMatrix {
    let dims = [2, 2, 2, 2];
    let on = |op: usize, site: usize| embed(&pauli(op), &[site], &dims).expect("fixed sizes");
    let (x, z) = (1, 3);
    let (za, zpa, xa, xpa) = (on(z, 0), on(z, 1), on(x, 0), on(x, 1));
    let (zb, zpb, xb, xpb) = (on(z, 2), on(z, 3), on(x, 2), on(x, 3));
    -(&za * &zb) - &zpa * &zpb - &xa * &xb - &xpa * &xpb
        + &za * &zpa * &zb * &zpb
        + &xa * &xpa * &xb * &xpb
        + &za * &xpa * &zb * &xpb
        + &xa * &zpa * &xb * &zpb
        - (&za * &zpa) * (&xa * &xpa) * (&zb * &xpb) * (&xb * &zpb)
}

/// ⟨O⟩; the local-realistic bound is 7.
pub fn ghz_avn_value(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != [2, 2, 2, 2] {
        return arg("all-versus-nothing test needs (2⊗2)⊗(2⊗2)");
    }
    Ok(expectation(&avn_operator(), rho))
}

pub const AVN_LOCAL_BOUND: f64 = 7.0;

// ---------------------------------------------------------------------------
// CHSH monogamy

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TonerResult {
    pub v_ab: f64,
    pub v_ac: f64,
    pub sum: f64,
    pub pass: bool,
}

/// |⟨B_AB⟩| + |⟨B_AC⟩| ≤ 4. Alice measures the same pair in both tests, so
/// both settings must agree on `a1`, `a2`.
pub fn toner_monogamy(rho: &DensityMatrix, ab: &ChshSettings, ac: &ChshSettings) -> Result<TonerResult> {
    if rho.dims() != [2, 2, 2] {
        return arg("monogamy test needs three qubits");
    }
    if ab.a1 != ac.a1 || ab.a2 != ac.a2 {
        return contract("Alice must use the same two observables towards B and C");
    }
    let v_ab = bell_chsh_value(&partial_trace(rho, &[0, 1])?, ab)?;
    let v_ac = bell_chsh_value(&partial_trace(rho, &[0, 2])?, ac)?;
    let sum = v_ab.abs() + v_ac.abs();
    Ok(TonerResult { v_ab, v_ac, sum, pass: sum <= 4.0 + BELL_SLACK })
}

/// Largest expectation of a Hermitian operator over product states of the
/// given cut, estimated by alternating optimisation from random starts.
pub fn max_over_products<R: Rng + ?Sized>(
    op: &CMatrix,
    dims: &[usize],
    split: &Partition,
    starts: usize,
    rng: &mut R,
) -> Result<f64> {
    let order: Vec<usize> = split.parts().iter().flatten().copied().collect();
    let m = crate::linalg::permute_subsystems(op, dims, &order);
    let da: usize = split.left().iter().map(|&i| dims[i]).product();
    let db: usize = split.right().iter().map(|&i| dims[i]).product();
    let mut best = f64::NEG_INFINITY;
    for _ in 0..starts {
        let mut b = crate::states::random_pure(&[db], rng)?.amplitudes().clone();
        let mut value = f64::NEG_INFINITY;
        for _ in 0..200 {
            let eff_a = contract_side(&m, &b, da, db, false);
            let sa = hermitian_spectrum(&eff_a)?;
            let a = sa.vectors.column(0).into_owned();
            let eff_b = contract_side(&m, &a, da, db, true);
            let sb = hermitian_spectrum(&eff_b)?;
            b = sb.vectors.column(0).into_owned();
            let new = sb.values[0];
            if (new - value).abs() < 1e-13 {
                value = new;
                break;
            }
            value = new;
        }
        best = best.max(value);
    }
    Ok(best)
}

/// ⟨v| M |v⟩ partially contracted on one side of da⊗db.
fn contract_side(m: &CMatrix, v: &crate::CVector, da: usize, db: usize, keep_right: bool) -> CMatrix {
    if keep_right {
        let mut out = CMatrix::zeros(db, db);
        for i in 0..da {
            for j in 0..da {
                let w = v[i].conj() * v[j];
                if w.norm() == 0.0 {
                    continue;
                }
                out += m.view((i * db, j * db), (db, db)) * w;
            }
        }
        out
    } else {
        CMatrix::from_fn(da, da, |i, j| {
            let block = m.view((i * db, j * db), (db, db));
            (v.adjoint() * block * v)[(0, 0)]
        })
    }
}

/// Largest eigenvalue of a Hermitian operator, the quantum maximum.
pub fn max_eigenvalue(op: &CMatrix) -> Result<f64> {
    Ok(eigvalsh(op)?[0])
}

/// Random state that is a product between the two photons, each photon
/// carrying an arbitrary two-qubit state.
pub fn random_photon_product<R: Rng + ?Sized>(rng: &mut R) -> Result<PureState> {
    crate::states::random_product_pure(&[4, 4], rng)?.with_dims(vec![2, 2, 2, 2])
}
