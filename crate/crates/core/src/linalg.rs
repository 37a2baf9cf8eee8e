//! Dense complex linear algebra over tensor-product spaces.
//!
//! Subsystem order is little-endian in the sense used throughout the crate:
//! subsystem 0 is the leftmost tensor factor, so its digit is the most
//! significant one in a flat basis index.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{arg, contract, Error, Result};
use crate::tol::tol;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds a matrix from row-major real entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols);
    CMatrix::from_fn(rows, cols, |i, j| c(entries[i * cols + j], 0.0))
}

pub fn pauli(k: usize) -> CMatrix {
    match k {
        0 => identity(2),
        1 => real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]),
        2 => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        3 => real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]),
        _ => panic!("pauli index {k} out of range"),
    }
}

/// Product of subsystem dimensions, checked against the configured side cap.
pub fn side_of(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return arg("empty dimension list");
    }
    let mut side: usize = 1;
    for &d in dims {
        if d == 0 {
            return arg("zero subsystem dimension");
        }
        side = side
            .checked_mul(d)
            .filter(|&s| s <= tol().max_side)
            .ok_or_else(|| Error::Size(format!("dimensions {dims:?} exceed side {}", tol().max_side)))?;
    }
    Ok(side)
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * shape[k + 1];
    }
    s
}

pub fn max_hermitian_defect(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().sum()
}

/// Tr(A B) without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn expectation(op: &CMatrix, rho: &DensityMatrix) -> f64 {
    trace_of_product(op, rho.matrix()).re
}

// ---------------------------------------------------------------------------
// states

/// A Hermitian, unit-trace, positive semidefinite matrix together with the
/// dimensions of its tensor factors.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates every state invariant and stores the Hermitian part.
    pub fn new(mat: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let side = side_of(&dims)?;
        if mat.nrows() != side || mat.ncols() != side {
            return arg(format!("matrix is {}x{}, dimensions {dims:?} need side {side}", mat.nrows(), mat.ncols()));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return arg("non-finite matrix entry");
        }
        let t = tol();
        let defect = max_hermitian_defect(&mat);
        if defect > t.herm {
            return contract(format!("matrix is not Hermitian (defect {defect:e})"));
        }
        let tr = trace(&mat);
        if (tr - ONE).norm() > t.trace {
            return contract(format!("trace {tr} differs from 1"));
        }
        let mat = hermitian_part(&mat);
        let min = eigvalsh(&mat)?.last().copied().unwrap_or(0.0);
        if min < -t.eig {
            return contract(format!("negative eigenvalue {min:e}"));
        }
        Ok(DensityMatrix { mat, dims })
    }

    /// Skips validation. Callers guarantee the invariants hold.
    pub fn new_unchecked(mat: CMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(mat.nrows(), dims.iter().product::<usize>());
        DensityMatrix { mat, dims }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityMatrix { mat: &psi.amps * psi.amps.adjoint(), dims: psi.dims.clone() }
    }

    pub fn maximally_mixed(dims: &[usize]) -> Result<Self> {
        let side = side_of(dims)?;
        Ok(DensityMatrix { mat: identity(side) * c(1.0 / side as f64, 0.0), dims: dims.to_vec() })
    }

    /// Normalises a positive operator to unit trace.
    pub fn from_unnormalized(mat: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let tr = trace(&mat).re;
        if !(tr > 0.0) {
            return contract("operator has non-positive trace");
        }
        DensityMatrix::new(mat / c(tr, 0.0), dims)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn side(&self) -> usize {
        self.mat.nrows()
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn purity(&self) -> f64 {
        trace_of_product(&self.mat, &self.mat).re
    }

    /// Eigenvalues in nonincreasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh(&self.mat).expect("density matrix is Hermitian")
    }

    pub fn is_pure(&self) -> bool {
        (self.purity() - 1.0).abs() < 10.0 * tol().trace
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Ok(DensityMatrix { mat: tensor_product(&self.mat, &other.mat)?, dims })
    }

    /// U ρ U† for a unitary acting on the whole space.
    pub fn conjugate(&self, u: &CMatrix) -> DensityMatrix {
        DensityMatrix { mat: hermitian_part(&(u * &self.mat * u.adjoint())), dims: self.dims.clone() }
    }

    pub fn with_dims(&self, dims: Vec<usize>) -> Result<DensityMatrix> {
        if side_of(&dims)? != self.side() {
            return arg(format!("dimensions {dims:?} do not match side {}", self.side()));
        }
        Ok(DensityMatrix { mat: self.mat.clone(), dims })
    }
}

/// A normalised amplitude vector together with subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: CVector,
    dims: Vec<usize>,
}

impl PureState {
    pub fn new(amps: CVector, dims: Vec<usize>) -> Result<Self> {
        let side = side_of(&dims)?;
        if amps.len() != side {
            return arg(format!("{} amplitudes, dimensions {dims:?} need {side}", amps.len()));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > tol().trace {
            return contract(format!("state norm {norm} differs from 1"));
        }
        Ok(PureState { amps, dims })
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(amps: CVector, dims: Vec<usize>) -> Result<Self> {
        let norm = amps.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return arg("cannot normalise a zero or non-finite vector");
        }
        PureState::new(amps / c(norm, 0.0), dims)
    }

    pub fn from_real(amps: &[f64], dims: Vec<usize>) -> Result<Self> {
        PureState::normalized(CVector::from_iterator(amps.len(), amps.iter().map(|&x| c(x, 0.0))), dims)
    }

    /// Basis state with the given digits, one per subsystem.
    pub fn basis(digits: &[usize], dims: Vec<usize>) -> Result<Self> {
        let side = side_of(&dims)?;
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(d, n)| d >= n) {
            return arg(format!("digits {digits:?} invalid for dimensions {dims:?}"));
        }
        let st = strides(&dims);
        let idx: usize = digits.iter().zip(&st).map(|(d, s)| d * s).sum();
        let mut amps = CVector::zeros(side);
        amps[idx] = ONE;
        Ok(PureState { amps, dims })
    }

    /// Reinterprets the factor structure without touching amplitudes.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<PureState> {
        if side_of(&dims)? != self.amps.len() {
            return arg(format!("dimensions {dims:?} do not match {} amplitudes", self.amps.len()));
        }
        Ok(PureState { amps: self.amps.clone(), dims })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        side_of(&dims)?;
        Ok(PureState { amps: self.amps.kronecker(&other.amps), dims })
    }

    pub fn apply(&self, u: &CMatrix) -> Result<PureState> {
        if u.ncols() != self.amps.len() || u.nrows() != self.amps.len() {
            return arg("operator size does not match state");
        }
        PureState::normalized(u * &self.amps, self.dims.clone())
    }
}

// ---------------------------------------------------------------------------
// partitions

/// A partition of subsystem indices into disjoint nonempty groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(mut parts: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for part in parts.iter_mut() {
            if part.is_empty() {
                return arg("empty part in partition");
            }
            part.sort_unstable();
            for &i in part.iter() {
                if i >= n || seen[i] {
                    return arg(format!("subsystem {i} out of range or repeated"));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return arg("partition does not cover every subsystem");
        }
        Ok(Partition { parts })
    }

    /// `left | complement` over `n` subsystems.
    pub fn bipartition(left: &[usize], n: usize) -> Result<Self> {
        let right: Vec<usize> = (0..n).filter(|i| !left.contains(i)).collect();
        Partition::new(vec![left.to_vec(), right], n)
    }

    /// All 2^(n-1) - 1 bipartitions, the left part always holding subsystem 0.
    pub fn all_bipartitions(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        if n < 2 {
            return out;
        }
        for mask in 0..(1usize << (n - 1)) {
            // bit j of mask puts subsystem j+1 on the left
            let left: Vec<usize> = std::iter::once(0).chain((1..n).filter(|i| mask >> (i - 1) & 1 == 1)).collect();
            if left.len() < n {
                out.push(Partition::bipartition(&left, n).expect("valid by construction"));
            }
        }
        out
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn is_bipartition(&self) -> bool {
        self.parts.len() == 2
    }

    pub fn left(&self) -> &[usize] {
        &self.parts[0]
    }

    pub fn right(&self) -> &[usize] {
        &self.parts[1]
    }

    pub fn num_subsystems(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    fn order(&self) -> Vec<usize> {
        self.parts.iter().flatten().copied().collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self
            .parts
            .iter()
            .map(|p| p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", s.join("|"))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `0|1,2`. The subsystem count is inferred from the largest index.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for chunk in s.split('|') {
            let part: std::result::Result<Vec<usize>, _> =
                chunk.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse::<usize>()).collect();
            parts.push(part.map_err(|e| Error::Argument(format!("bad partition {s:?}: {e}")))?);
        }
        let n = parts.iter().flatten().max().map_or(0, |m| m + 1);
        Partition::new(parts, n)
    }
}

// ---------------------------------------------------------------------------
// tensor reshuffling

/// Kronecker product with a side cap.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let side = a.nrows().checked_mul(b.nrows()).filter(|&s| s <= tol().max_side);
    let cols = a.ncols().checked_mul(b.ncols()).filter(|&s| s <= tol().max_side);
    if side.is_none() || cols.is_none() {
        return Err(Error::Size(format!("tensor product exceeds side {}", tol().max_side)));
    }
    Ok(a.kronecker(b))
}

pub fn tensor_all(factors: &[CMatrix]) -> Result<CMatrix> {
    let mut acc = CMatrix::identity(1, 1);
    for f in factors {
        acc = tensor_product(&acc, f)?;
    }
    Ok(acc)
}

/// Operator `op` acting on the listed subsystems (in that order), identity
/// elsewhere.
pub fn embed(op: &CMatrix, targets: &[usize], dims: &[usize]) -> Result<CMatrix> {
    let n = dims.len();
    let tdim: usize = targets.iter().map(|&t| dims[t]).product();
    if op.nrows() != tdim || op.ncols() != tdim {
        return arg("operator size does not match target subsystems");
    }
    let rest: Vec<usize> = (0..n).filter(|i| !targets.contains(i)).collect();
    let rest_dim: usize = rest.iter().map(|&r| dims[r]).product();
    let full = tensor_product(op, &identity(rest_dim))?;
    // full acts on order [targets..., rest...]; move it back to natural order
    let order: Vec<usize> = targets.iter().chain(rest.iter()).copied().collect();
    let permuted_dims: Vec<usize> = order.iter().map(|&i| dims[i]).collect();
    let mut inverse = vec![0; n];
    for (pos, &sub) in order.iter().enumerate() {
        inverse[sub] = pos;
    }
    Ok(permute_subsystems(&full, &permuted_dims, &inverse))
}

/// General index reshuffle. `shape` lists the slot sizes of the input, the
/// first `in_rows` slots forming the row index. Output slot `k` is input
/// slot `perm[k]`; the first `out_rows` output slots form the row index.
pub fn permute_tensor(m: &CMatrix, shape: &[usize], in_rows: usize, perm: &[usize], out_rows: usize) -> CMatrix {
    let slots = shape.len();
    assert_eq!(perm.len(), slots);
    let out_shape: Vec<usize> = perm.iter().map(|&p| shape[p]).collect();
    let nrows: usize = out_shape[..out_rows].iter().product();
    let ncols: usize = out_shape[out_rows..].iter().product();
    let ostr_r = strides(&out_shape[..out_rows]);
    let ostr_c = strides(&out_shape[out_rows..]);
    // where each input slot lands: (goes to row?, stride)
    let mut dest = vec![(true, 0usize); slots];
    for (k, &p) in perm.iter().enumerate() {
        dest[p] = if k < out_rows { (true, ostr_r[k]) } else { (false, ostr_c[k - out_rows]) };
    }
    let contributions = |range: std::ops::Range<usize>| -> Vec<(usize, usize)> {
        let sub = &shape[range.clone()];
        let total: usize = sub.iter().product();
        let st = strides(sub);
        (0..total)
            .map(|idx| {
                let (mut r, mut c) = (0, 0);
                for (off, slot) in range.clone().enumerate() {
                    let digit = (idx / st[off]) % sub[off];
                    let (to_row, s) = dest[slot];
                    if to_row {
                        r += digit * s;
                    } else {
                        c += digit * s;
                    }
                }
                (r, c)
            })
            .collect()
    };
    let row_c = contributions(0..in_rows);
    let col_c = contributions(in_rows..slots);
    let mut out = CMatrix::zeros(nrows, ncols);
    for (i, &(ri, ci)) in row_c.iter().enumerate() {
        for (j, &(rj, cj)) in col_c.iter().enumerate() {
            out[(ri + rj, ci + cj)] = m[(i, j)];
        }
    }
    out
}

fn square_shape(dims: &[usize]) -> Vec<usize> {
    dims.iter().chain(dims.iter()).copied().collect()
}

/// Reorders tensor factors: new factor `k` is old factor `order[k]`.
pub fn permute_subsystems(m: &CMatrix, dims: &[usize], order: &[usize]) -> CMatrix {
    let n = dims.len();
    let perm: Vec<usize> = order.iter().copied().chain(order.iter().map(|&o| o + n)).collect();
    permute_tensor(m, &square_shape(dims), n, &perm, n)
}

/// Applies an arbitrary permutation of the 2n matrix index slots
/// `(r_0..r_{n-1}, c_0..c_{n-1})`; the first n output slots index rows.
pub fn permute_indices(rho: &DensityMatrix, perm: &[usize]) -> Result<CMatrix> {
    let n = rho.num_subsystems();
    let mut check = perm.to_vec();
    check.sort_unstable();
    if check != (0..2 * n).collect::<Vec<_>>() {
        return arg(format!("{perm:?} is not a permutation of 0..{}", 2 * n));
    }
    Ok(permute_tensor(rho.matrix(), &square_shape(rho.dims()), n, perm, n))
}

pub fn partial_transpose_matrix(m: &CMatrix, dims: &[usize], subsystems: &[usize]) -> Result<CMatrix> {
    let n = dims.len();
    let mut perm: Vec<usize> = (0..2 * n).collect();
    for &s in subsystems {
        if s >= n {
            return arg(format!("subsystem {s} out of range"));
        }
        perm.swap(s, s + n);
    }
    Ok(permute_tensor(m, &square_shape(dims), n, &perm, n))
}

/// Transposes the listed tensor factors in the product basis.
pub fn partial_transpose(rho: &DensityMatrix, subsystems: &[usize]) -> Result<CMatrix> {
    partial_transpose_matrix(rho.matrix(), rho.dims(), subsystems)
}

pub fn partial_trace_matrix(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<(CMatrix, Vec<usize>)> {
    let n = dims.len();
    if keep.is_empty() {
        return arg("partial trace must keep at least one subsystem");
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k >= n) {
        return arg(format!("keep set {keep:?} out of range for {n} subsystems"));
    }
    let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    let st = strides(dims);
    let offsets = |subs: &[usize]| -> Vec<usize> {
        let sub_dims: Vec<usize> = subs.iter().map(|&s| dims[s]).collect();
        let total: usize = sub_dims.iter().product();
        let sub_st = strides(&sub_dims);
        (0..total)
            .map(|idx| subs.iter().enumerate().map(|(k, &s)| ((idx / sub_st[k]) % sub_dims[k]) * st[s]).sum())
            .collect()
    };
    let ko = offsets(&keep);
    let to = offsets(&traced);
    let mut out = CMatrix::zeros(ko.len(), ko.len());
    for (a, &oa) in ko.iter().enumerate() {
        for (b, &ob) in ko.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &to {
                acc += m[(oa + t, ob + t)];
            }
            out[(a, b)] = acc;
        }
    }
    let kept_dims = keep.iter().map(|&k| dims[k]).collect();
    Ok((out, kept_dims))
}

/// Reduced state on `keep` (returned in ascending subsystem order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let (m, dims) = partial_trace_matrix(rho.matrix(), rho.dims(), keep)?;
    Ok(DensityMatrix::new_unchecked(m, dims))
}

/// Regroups the state as a bipartite `d_left ⊗ d_right` system.
pub fn bipartite_view(rho: &DensityMatrix, split: &Partition) -> Result<DensityMatrix> {
    if !split.is_bipartition() || split.num_subsystems() != rho.num_subsystems() {
        return arg(format!("{split} is not a bipartition of {} subsystems", rho.num_subsystems()));
    }
    let order = split.order();
    let m = permute_subsystems(rho.matrix(), rho.dims(), &order);
    let da: usize = split.left().iter().map(|&i| rho.dims()[i]).product();
    let db: usize = split.right().iter().map(|&i| rho.dims()[i]).product();
    Ok(DensityMatrix::new_unchecked(m, vec![da, db]))
}

/// Amplitudes regrouped as a `d_left × d_right` coefficient matrix.
pub fn coefficient_matrix(psi: &PureState, split: &Partition) -> Result<CMatrix> {
    if !split.is_bipartition() || split.num_subsystems() != psi.dims().len() {
        return arg(format!("{split} is not a bipartition of {} subsystems", psi.dims().len()));
    }
    let dims = psi.dims();
    let order = split.order();
    let shape: Vec<usize> = dims.to_vec();
    let col = CMatrix::from_column_slice(psi.amps.len(), 1, psi.amps.as_slice());
    // treat the vector as a tensor with all slots on the row side
    let mut full_shape = shape.clone();
    full_shape.push(1);
    let mut perm = order.clone();
    perm.push(dims.len());
    let nleft = split.left().len();
    Ok(permute_tensor(&col, &full_shape, dims.len(), &perm, nleft))
}

/// Realignment of a bipartite matrix: the entry at row `(i, i')`, column
/// `(j, j')` is `ρ_{(i,j),(i',j')}`.
pub fn realign(rho: &DensityMatrix) -> Result<CMatrix> {
    if rho.num_subsystems() != 2 {
        return arg("realignment needs a bipartite state; regroup with bipartite_view first");
    }
    Ok(permute_tensor(rho.matrix(), &square_shape(rho.dims()), 2, &[0, 2, 1, 3], 2))
}

// ---------------------------------------------------------------------------
// spectra

/// Eigen-decomposition of a Hermitian matrix, values nonincreasing.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, matching `values`.
    pub vectors: CMatrix,
}

fn check_hermitian(m: &CMatrix) -> Result<CMatrix> {
    if m.nrows() != m.ncols() {
        return contract(format!("{}x{} matrix is not square", m.nrows(), m.ncols()));
    }
    let defect = max_hermitian_defect(m);
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if defect > tol().herm * scale {
        return contract(format!("matrix is not Hermitian (defect {defect:e})"));
    }
    Ok(hermitian_part(m))
}

/// Sorted by descending value; ties keep ascending original index.
fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    idx
}

pub fn hermitian_spectrum(m: &CMatrix) -> Result<Spectrum> {
    let h = check_hermitian(m)?;
    let eig = SymmetricEigen::new(h);
    let order = sorted_order(eig.eigenvalues.as_slice());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, k| eig.eigenvectors[(r, order[k])]);
    Ok(Spectrum { values, vectors })
}

/// Eigenvalues of a Hermitian matrix, nonincreasing.
pub fn eigvalsh(m: &CMatrix) -> Result<Vec<f64>> {
    let h = check_hermitian(m)?;
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    Ok(eigvalsh(m)?.last().copied().unwrap_or(0.0))
}

/// Singular values, nonincreasing.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// ‖M‖₁ = Tr √(M M†).
pub fn trace_norm(m: &CMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let s = hermitian_spectrum(m)?;
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &v) in s.values.iter().enumerate() {
        let col = s.vectors.column(k);
        out += (&col * col.adjoint()) * c(f(v), 0.0);
    }
    Ok(out)
}

/// Positive square root of a positive semidefinite matrix (negative noise is
/// clipped).
pub fn sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    hermitian_function(m, |v| v.max(0.0).sqrt())
}

// ---------------------------------------------------------------------------
// Schmidt decomposition and entropies

#[derive(Debug, Clone)]
pub struct SchmidtData {
    /// Nonincreasing, nonnegative, squares summing to one.
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<CVector>,
    pub right_basis: Vec<CVector>,
    pub rank: usize,
}

impl SchmidtData {
    /// Squared coefficients, i.e. the spectrum of either reduction.
    pub fn probabilities(&self) -> Vec<f64> {
        self.coefficients.iter().map(|a| a * a).collect()
    }
}

pub fn schmidt(psi: &PureState, split: &Partition) -> Result<SchmidtData> {
    let m = coefficient_matrix(psi, split)?;
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested");
    let v_t = svd.v_t.expect("requested");
    let order = sorted_order(svd.singular_values.as_slice());
    let coefficients: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let left_basis: Vec<CVector> = order.iter().map(|&i| u.column(i).into_owned()).collect();
    // M = U S V†, so the right vectors are the rows of V† read as kets
    let right_basis: Vec<CVector> = order.iter().map(|&i| v_t.row(i).transpose().into_owned()).collect();
    let rank = coefficients.iter().filter(|&&a| a > tol().rank).count();

    let mut rebuilt = CMatrix::zeros(m.nrows(), m.ncols());
    for ((a, e), f) in coefficients.iter().zip(&left_basis).zip(&right_basis) {
        rebuilt += (e * f.transpose()) * c(*a, 0.0);
    }
    let err = (&rebuilt - &m).norm();
    if err > tol().reconstruction {
        return Err(Error::Numerical(format!("Schmidt reconstruction error {err:e}")));
    }
    Ok(SchmidtData { coefficients, left_basis, right_basis, rank })
}

/// Clips eigenvalue noise in `[-τ_eig, 0)` to zero.
pub fn clip_spectrum(values: &[f64]) -> Vec<f64> {
    values.iter().map(|&v| if v < 0.0 { 0.0 } else { v }).collect()
}

/// Rényi entropy of a probability vector in bits.
pub fn renyi_of_probabilities(p: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) {
        return arg(format!("Rényi order must be nonnegative, got {alpha}"));
    }
    let p = clip_spectrum(p);
    let value = if alpha == 0.0 {
        (p.iter().filter(|&&x| x > tol().rank).count() as f64).log2()
    } else if (alpha - 1.0).abs() < 1e-12 {
        shannon(&p)
    } else if alpha.is_infinite() {
        -p.iter().copied().fold(0.0, f64::max).log2()
    } else {
        let s: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(alpha)).sum();
        s.log2() / (1.0 - alpha)
    };
    Ok(value.max(0.0))
}

/// −Σ p log₂ p with 0·log 0 = 0.
pub fn shannon(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

pub fn binary_entropy(x: f64) -> f64 {
    shannon(&[x, 1.0 - x])
}

pub fn renyi_entropy(rho: &DensityMatrix, alpha: f64) -> Result<f64> {
    renyi_of_probabilities(&rho.eigenvalues(), alpha)
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon(&clip_spectrum(&rho.eigenvalues()))
}
