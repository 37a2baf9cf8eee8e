//! Named states and seeded random-state generators.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{arg, Error, Result};
use crate::linalg::{
    c, hermitian_spectrum, identity, pauli, permute_tensor, side_of, tensor_all, tensor_product, CMatrix, CVector,
    DensityMatrix, PureState, ONE, ZERO,
};

/// Either kind of state. Pure states are kept as vectors until a density
/// matrix is needed.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.density(),
            State::Mixed(m) => m.clone(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        match self {
            State::Pure(p) => p.dims(),
            State::Mixed(m) => m.dims(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            State::Pure(p) => Some(p),
            State::Mixed(_) => None,
        }
    }
}

impl From<PureState> for State {
    fn from(p: PureState) -> Self {
        State::Pure(p)
    }
}

impl From<DensityMatrix> for State {
    fn from(m: DensityMatrix) -> Self {
        State::Mixed(m)
    }
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        arg(format!("{name} = {x} outside [0, 1]"))
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return arg(format!("local dimension must be at least 2, got {d}"));
    }
    Ok(())
}

fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

// ---------------------------------------------------------------------------
// pure families

/// Bell states in dense-coding order: 0 ψ⁻, 1 ϕ⁻, 2 ψ⁺, 3 ϕ⁺.
pub fn bell(k: usize) -> Result<PureState> {
    let amps: [f64; 4] = match k {
        0 => [0.0, 1.0, -1.0, 0.0],
        1 => [1.0, 0.0, 0.0, -1.0],
        2 => [0.0, 1.0, 1.0, 0.0],
        3 => [1.0, 0.0, 0.0, 1.0],
        _ => return arg(format!("Bell index {k} not in 0..=3")),
    };
    PureState::from_real(&amps, vec![2, 2])
}

pub fn singlet() -> PureState {
    bell(0).expect("valid index")
}

/// Σᵢ |ii⟩ / √d.
pub fn maxent(d: usize) -> Result<PureState> {
    check_dim(d)?;
    let mut amps = vec![0.0; d * d];
    for i in 0..d {
        amps[i * d + i] = 1.0;
    }
    PureState::from_real(&amps, vec![d, d])
}

/// Σᵢ |i…i⟩ / √d on `n` subsystems.
pub fn ghz(n: usize, d: usize) -> Result<PureState> {
    check_dim(d)?;
    if n < 2 {
        return arg("GHZ state needs at least two subsystems");
    }
    let dims = vec![d; n];
    let side = side_of(&dims)?;
    let step = (side - 1) / (d - 1);
    let mut amps = vec![0.0; side];
    for i in 0..d {
        amps[i * step] = 1.0;
    }
    PureState::from_real(&amps, dims)
}

/// Equal superposition of the `n` single-excitation qubit states.
pub fn w_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return arg("W state needs at least two qubits");
    }
    let dims = vec![2; n];
    let side = side_of(&dims)?;
    let mut amps = vec![0.0; side];
    for q in 0..n {
        amps[1 << (n - 1 - q)] = 1.0;
    }
    PureState::from_real(&amps, dims)
}

/// Totally antisymmetric state of three qutrits.
pub fn aharonov() -> PureState {
    let mut amps = vec![0.0; 27];
    for (perm, sign) in [([0, 1, 2], 1.0), ([1, 2, 0], 1.0), ([2, 0, 1], 1.0), ([0, 2, 1], -1.0), ([2, 1, 0], -1.0), ([1, 0, 2], -1.0)] {
        amps[perm[0] * 9 + perm[1] * 3 + perm[2]] = sign;
    }
    PureState::from_real(&amps, vec![3, 3, 3]).expect("fixed state")
}

/// Two photons, each carrying a polarisation and a path qubit, in a singlet
/// on both degrees of freedom. Factor order: A pol, A path, B pol, B path.
pub fn avn_hyper() -> PureState {
    let pair = singlet().tensor(&singlet()).expect("small");
    // pair is ordered (A pol, B pol, A path, B path)
    permute_pure(&pair, &[0, 2, 1, 3])
}

/// Reorders the factors of a pure state: new factor `k` is old factor `order[k]`.
pub fn permute_pure(psi: &PureState, order: &[usize]) -> PureState {
    let dims = psi.dims();
    let mut shape = dims.to_vec();
    shape.push(1);
    let mut perm = order.to_vec();
    perm.push(dims.len());
    let col = CMatrix::from_column_slice(psi.amplitudes().len(), 1, psi.amplitudes().as_slice());
    let out = permute_tensor(&col, &shape, dims.len(), &perm, dims.len());
    let new_dims = order.iter().map(|&o| dims[o]).collect();
    PureState::new(CVector::from_column_slice(out.as_slice()), new_dims).expect("permutation preserves norm")
}

// ---------------------------------------------------------------------------
// operators used to build the invariant families

/// The swap V|ij⟩ = |ji⟩ on d⊗d.
pub fn swap_operator(d: usize) -> CMatrix {
    let mut v = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            v[(j * d + i, i * d + j)] = ONE;
        }
    }
    v
}

/// Projector onto the symmetric (`sign = 1`) or antisymmetric (`sign = -1`)
/// subspace of d⊗d.
pub fn symmetry_projector(d: usize, sign: f64) -> CMatrix {
    (identity(d * d) + swap_operator(d) * c(sign, 0.0)) * c(0.5, 0.0)
}

/// |Φ⁺⟩⟨Φ⁺| on d⊗d.
pub fn maxent_projector(d: usize) -> CMatrix {
    projector(maxent(d).expect("d >= 2").amplitudes())
}

// ---------------------------------------------------------------------------
// mixed families

/// U⊗U-invariant state with weight `p` on the antisymmetric subspace.
/// Tr(W V) = 1 - 2p.
pub fn werner(d: usize, p: f64) -> Result<DensityMatrix> {
    check_dim(d)?;
    check_unit("p", p)?;
    let df = d as f64;
    let sym = symmetry_projector(d, 1.0) * c((1.0 - p) * 2.0 / (df * df + df), 0.0);
    let anti = symmetry_projector(d, -1.0) * c(p * 2.0 / (df * df - df), 0.0);
    DensityMatrix::new(sym + anti, vec![d, d])
}

/// p |ψ⁻⟩⟨ψ⁻| + (1 - p) I/4.
pub fn noisy_singlet(p: f64) -> Result<DensityMatrix> {
    check_unit("p", p)?;
    let m = projector(singlet().amplitudes()) * c(p, 0.0) + identity(4) * c((1.0 - p) / 4.0, 0.0);
    DensityMatrix::new(m, vec![2, 2])
}

/// U⊗U*-invariant state with singlet fraction `f`.
pub fn isotropic(d: usize, f: f64) -> Result<DensityMatrix> {
    check_dim(d)?;
    check_unit("F", f)?;
    let d2 = (d * d) as f64;
    let m = identity(d * d) * c((1.0 - f) / (d2 - 1.0), 0.0) + maxent_projector(d) * c((f * d2 - 1.0) / (d2 - 1.0), 0.0);
    DensityMatrix::new(m, vec![d, d])
}

/// Equal mixture of Bell-pair products |Ψᵢ⟩⟨Ψᵢ|_AB ⊗ |Ψᵢ⟩⟨Ψᵢ|_CD.
pub fn smolin() -> DensityMatrix {
    let mut m = CMatrix::zeros(16, 16);
    for k in 0..4 {
        let p = projector(bell(k).expect("valid").amplitudes());
        m += tensor_product(&p, &p).expect("small") * c(0.25, 0.0);
    }
    DensityMatrix::new(m, vec![2; 4]).expect("valid state")
}

/// The 3⊗3 PPT entangled state with parameter `a` in (0, 1).
pub fn chessboard(a: f64) -> Result<DensityMatrix> {
    if !(a > 0.0 && a < 1.0) {
        return arg(format!("a = {a} outside (0, 1)"));
    }
    let mut m = DMatrix::<f64>::zeros(9, 9);
    for i in 0..9 {
        m[(i, i)] = a;
    }
    for &i in &[0, 4, 8] {
        for &j in &[0, 4, 8] {
            m[(i, j)] = a;
        }
    }
    let diag = (1.0 + a) / 2.0;
    let off = (1.0 - a * a).sqrt() / 2.0;
    m[(6, 6)] = diag;
    m[(8, 8)] = diag;
    m[(6, 8)] = off;
    m[(8, 6)] = off;
    let m = m.map(|x| c(x / (8.0 * a + 1.0), 0.0));
    DensityMatrix::new(m, vec![3, 3])
}

/// Weights of the m-qubit GHZ-diagonal family. `others[k-1]` is the weight
/// λ_k of the pair |Ψ_k^±⟩, where the bits of `k` (most significant first)
/// are the values of qubits 0..m-2.
#[derive(Debug, Clone, PartialEq)]
pub struct DurCiracWeights {
    pub qubits: usize,
    pub plus: f64,
    pub minus: f64,
    pub others: Vec<f64>,
}

impl DurCiracWeights {
    pub fn new(qubits: usize, plus: f64, minus: f64, others: Vec<f64>) -> Result<Self> {
        if qubits < 2 || qubits > 12 {
            return arg(format!("qubit count {qubits} outside 2..=12"));
        }
        if others.len() != (1 << (qubits - 1)) - 1 {
            return arg(format!("expected {} weights λ_k, got {}", (1 << (qubits - 1)) - 1, others.len()));
        }
        if plus < 0.0 || minus < 0.0 || others.iter().any(|&l| l < 0.0) {
            return arg("weights must be nonnegative");
        }
        if plus < minus {
            return arg("λ0+ must not be below λ0-");
        }
        let total = plus + minus + 2.0 * others.iter().sum::<f64>();
        if (total - 1.0).abs() > 1e-9 {
            return arg(format!("weights sum to {total}, expected 1"));
        }
        Ok(DurCiracWeights { qubits, plus, minus, others })
    }

    pub fn delta(&self) -> f64 {
        self.plus - self.minus
    }

    /// λ_k for `k` in 1..2^(m-1).
    pub fn weight(&self, k: usize) -> f64 {
        self.others[k - 1]
    }

    /// Subsystems in the part without the last qubit for index `k`.
    pub fn split_part(&self, k: usize) -> Vec<usize> {
        let m = self.qubits;
        (0..m - 1).filter(|&i| k >> (m - 2 - i) & 1 == 1).collect()
    }

    /// Index `k` whose cut separates exactly `part` from the rest, if any.
    pub fn index_of_cut(&self, part: &[usize]) -> Option<usize> {
        let m = self.qubits;
        let last = m - 1;
        let without_last: Vec<usize> = if part.contains(&last) {
            (0..m).filter(|i| !part.contains(i)).collect()
        } else {
            part.to_vec()
        };
        if without_last.is_empty() || without_last.len() == m {
            return None;
        }
        Some(without_last.iter().map(|&i| 1usize << (m - 2 - i)).sum())
    }

    /// Closed-form rule: separable across cut `k` iff λ_k ≥ Δ/2.
    pub fn separable_across(&self, k: usize) -> bool {
        self.weight(k) >= self.delta() / 2.0
    }
}

pub(crate) fn dur_cirac_vector(m: usize, k: usize, sign: f64) -> CVector {
    let side = 1usize << m;
    let mut v = CVector::zeros(side);
    let low = k << 1;
    let high = ((!k) & ((1 << (m - 1)) - 1)) << 1 | 1;
    v[low] = c(FRAC_1_SQRT_2, 0.0);
    v[high] = c(sign * FRAC_1_SQRT_2, 0.0);
    v
}

pub fn dur_cirac(w: &DurCiracWeights) -> Result<DensityMatrix> {
    let m = w.qubits;
    let side = side_of(&vec![2; m])?;
    let mut rho = CMatrix::zeros(side, side);
    rho += projector(&dur_cirac_vector(m, 0, 1.0)) * c(w.plus, 0.0);
    rho += projector(&dur_cirac_vector(m, 0, -1.0)) * c(w.minus, 0.0);
    for k in 1..(1 << (m - 1)) {
        let l = c(w.weight(k), 0.0);
        rho += projector(&dur_cirac_vector(m, k, 1.0)) * l;
        rho += projector(&dur_cirac_vector(m, k, -1.0)) * l;
    }
    DensityMatrix::new(rho, vec![2; m])
}

/// The four product vectors of the three-qubit Shift basis.
pub fn upb_shift_vectors() -> Vec<CVector> {
    let s = FRAC_1_SQRT_2;
    let zero = [ONE, ZERO];
    let one = [ZERO, ONE];
    let plus = [c(s, 0.0), c(s, 0.0)];
    let minus = [c(s, 0.0), c(-s, 0.0)];
    let prod = |a: [crate::C64; 2], b: [crate::C64; 2], d: [crate::C64; 2]| {
        let v = |x: [crate::C64; 2]| CVector::from_column_slice(&x);
        v(a).kronecker(&v(b)).kronecker(&v(d))
    };
    vec![prod(zero, zero, zero), prod(plus, one, minus), prod(one, minus, plus), prod(minus, plus, one)]
}

/// Normalised projector onto the complement of the Shift basis.
pub fn upb_shift() -> DensityMatrix {
    let mut p = CMatrix::zeros(8, 8);
    for v in upb_shift_vectors() {
        p += projector(&v);
    }
    DensityMatrix::new((identity(8) - p) * c(0.25, 0.0), vec![2, 2, 2]).expect("valid state")
}

// ---------------------------------------------------------------------------
// random states

fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    CVector::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

/// Haar-random pure state.
pub fn random_pure<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<PureState> {
    let side = side_of(dims)?;
    PureState::normalized(gaussian_vector(side, rng), dims.to_vec())
}

/// Reduction of a Haar-random pure state on `dims ⊗ rank`.
pub fn random_density<R: Rng + ?Sized>(dims: &[usize], rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let side = side_of(dims)?;
    if rank == 0 {
        return arg("rank must be positive");
    }
    if rank > crate::tol::Tolerances::global().max_side {
        return Err(Error::Size(format!("ancilla rank {rank} too large")));
    }
    // rows of g are system indices, columns ancilla indices
    let g = CMatrix::from_fn(side, rank, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    });
    let m = &g * g.adjoint();
    DensityMatrix::from_unnormalized(m, dims.to_vec())
}

/// Haar-random unitary (QR of a Ginibre matrix with phase fix).
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..d {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { ONE };
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Haar-random product of local unitaries, one per subsystem.
pub fn random_local_unitary<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<CMatrix> {
    let factors: Vec<CMatrix> = dims.iter().map(|&d| random_unitary(d, rng)).collect();
    tensor_all(&factors)
}

/// Haar-random fully product pure state.
pub fn random_product_pure<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<PureState> {
    let mut psi = random_pure(&dims[..1], rng)?;
    for &d in &dims[1..] {
        psi = psi.tensor(&random_pure(&[d], rng)?)?;
    }
    Ok(psi)
}

/// Random convex mixture of `terms` fully product pure states.
pub fn random_separable<R: Rng + ?Sized>(dims: &[usize], terms: usize, rng: &mut R) -> Result<DensityMatrix> {
    let side = side_of(dims)?;
    if terms == 0 {
        return arg("need at least one term");
    }
    let mut m = CMatrix::zeros(side, side);
    let mut total = 0.0;
    for _ in 0..terms {
        let w: f64 = rng.sample(Exp1);
        let psi = random_product_pure(dims, rng)?;
        m += projector(psi.amplitudes()) * c(w, 0.0);
        total += w;
    }
    DensityMatrix::new(m / c(total, 0.0), dims.to_vec())
}

/// Purification on `dims ⊗ side`, the ancilla appended as the last factor.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let spec = hermitian_spectrum(rho.matrix())?;
    let side = rho.side();
    let mut amps = CVector::zeros(side * side);
    for (k, &lambda) in spec.values.iter().enumerate() {
        let weight = lambda.max(0.0).sqrt();
        if weight == 0.0 {
            continue;
        }
        let mut ancilla = CVector::zeros(side);
        ancilla[k] = ONE;
        amps += spec.vectors.column(k).kronecker(&ancilla) * c(weight, 0.0);
    }
    let mut dims = rho.dims().to_vec();
    dims.push(side);
    PureState::normalized(amps, dims)
}

// ---------------------------------------------------------------------------
// recipes

/// Every named construction, addressable by name and parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum StateRecipe {
    Bell(usize),
    Maxent(usize),
    Ghz { n: usize, d: usize },
    W(usize),
    Werner { d: usize, p: f64 },
    NoisySinglet(f64),
    Isotropic { d: usize, f: f64 },
    Smolin,
    Chessboard(f64),
    DurCirac(DurCiracWeights),
    UpbShift,
    Aharonov,
    AvnHyper,
    RandomPure { dims: Vec<usize>, seed: u64 },
    RandomDensity { dims: Vec<usize>, rank: usize, seed: u64 },
    RandomSeparable { dims: Vec<usize>, terms: usize, seed: u64 },
}

impl StateRecipe {
    pub fn build(&self) -> Result<State> {
        use StateRecipe::*;
        Ok(match self {
            Bell(k) => bell(*k)?.into(),
            Maxent(d) => maxent(*d)?.into(),
            Ghz { n, d } => ghz(*n, *d)?.into(),
            W(n) => w_state(*n)?.into(),
            Werner { d, p } => werner(*d, *p)?.into(),
            NoisySinglet(p) => noisy_singlet(*p)?.into(),
            Isotropic { d, f } => isotropic(*d, *f)?.into(),
            Smolin => smolin().into(),
            Chessboard(a) => chessboard(*a)?.into(),
            DurCirac(w) => dur_cirac(w)?.into(),
            UpbShift => upb_shift().into(),
            Aharonov => aharonov().into(),
            AvnHyper => avn_hyper().into(),
            RandomPure { dims, seed } => random_pure(dims, &mut crate::rng::seeded(*seed))?.into(),
            RandomDensity { dims, rank, seed } => random_density(dims, *rank, &mut crate::rng::seeded(*seed))?.into(),
            RandomSeparable { dims, terms, seed } => {
                random_separable(dims, *terms, &mut crate::rng::seeded(*seed))?.into()
            }
        })
    }

    pub fn name(&self) -> &'static str {
        use StateRecipe::*;
        match self {
            Bell(_) => "bell",
            Maxent(_) => "maxent",
            Ghz { .. } => "ghz",
            W(_) => "w",
            Werner { .. } => "werner",
            NoisySinglet(_) => "noisy-singlet",
            Isotropic { .. } => "isotropic",
            Smolin => "smolin",
            Chessboard(_) => "chessboard",
            DurCirac(_) => "dur-cirac",
            UpbShift => "upb-shift",
            Aharonov => "aharonov",
            AvnHyper => "avn",
            RandomPure { .. } => "random-pure",
            RandomDensity { .. } => "random-density",
            RandomSeparable { .. } => "random-separable",
        }
    }
}

/// Applies σ_k on the first qubit of a two-qubit state (σ₃ here is the real
/// matrix [[0,-1],[1,0]] so that the images of ψ⁻ are real).
pub fn dense_coding_pauli(k: usize) -> CMatrix {
    match k {
        0 => pauli(0),
        1 => pauli(1),
        2 => pauli(3),
        3 => crate::linalg::real_matrix(2, 2, &[0.0, -1.0, 1.0, 0.0]),
        _ => panic!("dense coding index {k} out of range"),
    }
}
