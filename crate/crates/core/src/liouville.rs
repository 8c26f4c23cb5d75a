//! Liouville space of `n` qudits: operators, the normalized Hilbert-Schmidt
//! inner product, the Pauli / Heisenberg-Weyl operator basis and the
//! permutation representations on both the Hilbert and the Liouville space.
//!
//! The inner product is `⟨A, B⟩ = d⁻ⁿ tr(A† B)`, so the identity has unit
//! norm. Letter strings index the operator basis: for `d = 2` the letters
//! `0, 1, 2, 3` are `I, X, Y, Z`; for `d > 2` letter `a·d + b` is the clock-shift
//! operator `Xᵃ Zᵇ`. Strings are ordered lexicographically with qudit 1 the
//! most significant letter, matching the Kronecker product order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::permutation::Permutation;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default cap on the Liouville dimension `d²ⁿ`.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// The Liouville dimension cap, `SCHUR_DFS_MAX_DIM` or [`DEFAULT_MAX_DIM`].
pub fn max_liouville_dim() -> usize {
    std::env::var("SCHUR_DFS_MAX_DIM")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

/// `d²ⁿ`, checked against the size guard.
pub fn liouville_dim(d: usize, n: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("local dimension d={d} must be at least 2")));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("qudit count n must be at least 1".into()));
    }
    let limit = max_liouville_dim();
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim.saturating_mul(d * d);
        if dim > limit {
            return Err(Error::SizeLimit { dim, limit });
        }
    }
    Ok(dim)
}

/// Kronecker product of a list of matrices (first factor most significant).
pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors.iter().fold(CMatrix::from_element(1, 1, ONE), |acc, f| acc.kronecker(f))
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// An operator on `n` qudits of local dimension `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuditOperator {
    d: usize,
    n: usize,
    matrix: CMatrix,
}

impl QuditOperator {
    pub fn new(d: usize, n: usize, matrix: CMatrix) -> Result<Self> {
        let dim = d.checked_pow(n as u32).ok_or_else(|| Error::InvalidArgument("dimension overflow".into()))?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, expected {dim}x{dim} for d={d}, n={n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("operator has non-finite entries".into()));
        }
        Ok(Self { d, n, matrix })
    }

    pub fn identity(d: usize, n: usize) -> Self {
        let dim = d.pow(n as u32);
        Self { d, n, matrix: CMatrix::identity(dim, dim) }
    }

    pub fn zeros(d: usize, n: usize) -> Self {
        let dim = d.pow(n as u32);
        Self { d, n, matrix: CMatrix::zeros(dim, dim) }
    }

    /// Tensor product of single-qudit operators, qudit 1 first.
    pub fn tensor(d: usize, locals: &[CMatrix]) -> Result<Self> {
        if let Some(bad) = locals.iter().find(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::DimensionMismatch(format!(
                "local factor is {}x{}, expected {d}x{d}",
                bad.nrows(),
                bad.ncols()
            )));
        }
        Self::new(d, locals.len(), kron_all(locals))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dagger(&self) -> Self {
        Self { d: self.d, n: self.n, matrix: self.matrix.adjoint() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { d: self.d, n: self.n, matrix: &self.matrix * s }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `max |A - A†|`.
    pub fn hermiticity_error(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "operators on (d={}, n={}) and (d={}, n={})",
                self.d, self.n, other.d, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self { d: self.d, n: self.n, matrix: &self.matrix + &other.matrix })
    }
}

/// Normalized Hilbert-Schmidt inner product `d⁻ⁿ tr(a† b)`.
pub fn hs_inner(a: &QuditOperator, b: &QuditOperator) -> Result<Complex64> {
    a.check_compatible(b)?;
    Ok(hs_inner_unchecked(a.d, a.n, &a.matrix, &b.matrix))
}

pub(crate) fn hs_inner_unchecked(d: usize, n: usize, a: &CMatrix, b: &CMatrix) -> Complex64 {
    let s: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    s / (d.pow(n as u32) as f64)
}

/// A single-qudit letter as a monomial matrix: column `c` has its only
/// nonzero entry `value[c]` in row `row[c]`.
#[derive(Clone, Debug)]
struct Monomial {
    row: Vec<usize>,
    value: Vec<Complex64>,
}

fn single_qudit_letters(d: usize) -> Vec<Monomial> {
    if d == 2 {
        let i = Complex64::i();
        return vec![
            Monomial { row: vec![0, 1], value: vec![ONE, ONE] },
            Monomial { row: vec![1, 0], value: vec![ONE, ONE] },
            Monomial { row: vec![1, 0], value: vec![i, -i] },
            Monomial { row: vec![0, 1], value: vec![ONE, -ONE] },
        ];
    }
    let omega = |k: usize| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k % d) as f64 / d as f64);
    let mut out = Vec::with_capacity(d * d);
    for shift in 0..d {
        for clock in 0..d {
            // X^shift Z^clock |j> = ω^{clock·j} |j + shift>
            out.push(Monomial {
                row: (0..d).map(|j| (j + shift) % d).collect(),
                value: (0..d).map(|j| omega(clock * j)).collect(),
            });
        }
    }
    out
}

/// Orthonormal operator basis of `𝓛(𝓗_d^{⊗n})`, indexed by letter strings.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    d: usize,
    n: usize,
    // per element, per column: (row, value)
    rows: Vec<Vec<usize>>,
    values: Vec<Vec<Complex64>>,
}

/// Tensor basis of Pauli (`d = 2`) or clock-shift (`d > 2`) strings.
pub fn operator_basis(d: usize, n: usize) -> Result<OperatorBasis> {
    let big = liouville_dim(d, n)?;
    let hdim = d.pow(n as u32);
    let letters = single_qudit_letters(d);
    let q = d * d;
    let mut rows = Vec::with_capacity(big);
    let mut values = Vec::with_capacity(big);
    for a in 0..big {
        let label = index_to_letters(a, q, n);
        let mut r = vec![0usize; hdim];
        let mut v = vec![ONE; hdim];
        for col in 0..hdim {
            let cdigits = index_to_letters(col, d, n);
            let mut row = 0;
            let mut val = ONE;
            for (k, &l) in label.iter().enumerate() {
                let m = &letters[l];
                row = row * d + m.row[cdigits[k]];
                val *= m.value[cdigits[k]];
            }
            r[col] = row;
            v[col] = val;
        }
        rows.push(r);
        values.push(v);
    }
    Ok(OperatorBasis { d, n, rows, values })
}

/// Digits of `index` in base `base`, most significant first, `n` digits.
pub fn index_to_letters(mut index: usize, base: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = index % base;
        index /= base;
    }
    out
}

pub fn letters_to_index(letters: &[usize], base: usize) -> usize {
    letters.iter().fold(0, |acc, &l| acc * base + l)
}

impl OperatorBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of elements, `d²ⁿ`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn label(&self, a: usize) -> Vec<usize> {
        index_to_letters(a, self.d * self.d, self.n)
    }

    pub fn labels(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|a| self.label(a)).collect()
    }

    pub fn index_of(&self, letters: &[usize]) -> Result<usize> {
        let q = self.d * self.d;
        if letters.len() != self.n || letters.iter().any(|&l| l >= q) {
            return Err(Error::InvalidArgument(format!("letter string {letters:?} for d={}, n={}", self.d, self.n)));
        }
        Ok(letters_to_index(letters, q))
    }

    /// Dense matrix of element `a`.
    pub fn element(&self, a: usize) -> QuditOperator {
        let hdim = self.rows[a].len();
        let mut m = CMatrix::zeros(hdim, hdim);
        for col in 0..hdim {
            m[(self.rows[a][col], col)] = self.values[a][col];
        }
        QuditOperator { d: self.d, n: self.n, matrix: m }
    }

    pub fn elements(&self) -> Vec<QuditOperator> {
        (0..self.len()).map(|a| self.element(a)).collect()
    }

    /// `⟨B_a, M⟩` without materializing `B_a`.
    pub(crate) fn coefficient(&self, a: usize, m: &CMatrix) -> Complex64 {
        let s: Complex64 = self.rows[a]
            .iter()
            .zip(&self.values[a])
            .enumerate()
            .map(|(col, (&row, v))| v.conj() * m[(row, col)])
            .sum();
        s / (self.rows[a].len() as f64)
    }

    /// `B_a · M` for a dense `M`.
    pub(crate) fn left_multiply(&self, a: usize, m: &CMatrix) -> CMatrix {
        let hdim = m.nrows();
        let mut out = CMatrix::zeros(hdim, m.ncols());
        for k in 0..hdim {
            let (row, v) = (self.rows[a][k], self.values[a][k]);
            for c in 0..m.ncols() {
                out[(row, c)] += v * m[(k, c)];
            }
        }
        out
    }

    /// `M · B_a` for a dense `M`.
    pub(crate) fn right_multiply(&self, m: &CMatrix, a: usize) -> CMatrix {
        let hdim = m.ncols();
        let mut out = CMatrix::zeros(m.nrows(), hdim);
        for col in 0..hdim {
            let (k, v) = (self.rows[a][col], self.values[a][col]);
            for r in 0..m.nrows() {
                out[(r, col)] += m[(r, k)] * v;
            }
        }
        out
    }

    fn check(&self, op: &QuditOperator) -> Result<()> {
        if op.d != self.d || op.n != self.n {
            return Err(Error::DimensionMismatch(format!(
                "operator on (d={}, n={}) with basis for (d={}, n={})",
                op.d, op.n, self.d, self.n
            )));
        }
        Ok(())
    }
}

/// Coordinates of `op` in `basis`: component `a` is `⟨B_a, op⟩`.
pub fn vectorize(op: &QuditOperator, basis: &OperatorBasis) -> Result<CVector> {
    basis.check(op)?;
    Ok(vectorize_matrix(&op.matrix, basis))
}

pub(crate) fn vectorize_matrix(m: &CMatrix, basis: &OperatorBasis) -> CVector {
    CVector::from_iterator(basis.len(), (0..basis.len()).map(|a| basis.coefficient(a, m)))
}

/// `Σ_a v[a] B_a`.
pub fn devectorize(v: &CVector, basis: &OperatorBasis) -> Result<QuditOperator> {
    if v.len() != basis.len() {
        return Err(Error::DimensionMismatch(format!("vector of length {} for basis of size {}", v.len(), basis.len())));
    }
    let hdim = basis.d.pow(basis.n as u32);
    let mut m = CMatrix::zeros(hdim, hdim);
    for (a, &c) in v.iter().enumerate() {
        if c == ZERO {
            continue;
        }
        for col in 0..hdim {
            m[(basis.rows[a][col], col)] += c * basis.values[a][col];
        }
    }
    Ok(QuditOperator { d: basis.d, n: basis.n, matrix: m })
}

/// A permutation of the tensor factors acting on the Hilbert space (`π̂`)
/// and on the Liouville space (`𝒮_π(ρ) = π̂ ρ π̂†`) in the operator basis.
///
/// Both are stored as index maps: basis state `k` goes to `images[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationRep {
    pub d: usize,
    pub n: usize,
    pub pi: Permutation,
    pub hilbert_images: Vec<usize>,
    pub liouville_images: Vec<usize>,
}

/// Index map of a letter permutation on strings of length `n` over `base` letters.
pub fn permutation_images(pi: &Permutation, base: usize, n: usize) -> Vec<usize> {
    let total = base.pow(n as u32);
    (0..total)
        .map(|k| letters_to_index(&pi.permute_positions(&index_to_letters(k, base, n)), base))
        .collect()
}

pub fn perm_rep(pi: &Permutation, d: usize, n: usize, basis: &OperatorBasis) -> Result<PermutationRep> {
    if pi.len() != n {
        return Err(Error::DimensionMismatch(format!("permutation of {} items acting on {n} qudits", pi.len())));
    }
    if basis.d != d || basis.n != n {
        return Err(Error::DimensionMismatch("basis does not match (d, n)".into()));
    }
    Ok(PermutationRep {
        d,
        n,
        pi: pi.clone(),
        hilbert_images: permutation_images(pi, d, n),
        liouville_images: permutation_images(pi, d * d, n),
    })
}

fn images_to_matrix(images: &[usize]) -> CMatrix {
    let mut m = CMatrix::zeros(images.len(), images.len());
    for (k, &img) in images.iter().enumerate() {
        m[(img, k)] = ONE;
    }
    m
}

impl PermutationRep {
    pub fn hilbert_matrix(&self) -> CMatrix {
        images_to_matrix(&self.hilbert_images)
    }

    pub fn liouville_matrix(&self) -> CMatrix {
        images_to_matrix(&self.liouville_images)
    }

    /// `π̂ A π̂†`.
    pub fn conjugate(&self, a: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(a.nrows(), a.ncols());
        for c in 0..a.ncols() {
            for r in 0..a.nrows() {
                out[(self.hilbert_images[r], self.hilbert_images[c])] = a[(r, c)];
            }
        }
        out
    }

    /// `𝒮_π v` on a Liouville vector.
    pub fn apply_liouville(&self, v: &CVector) -> CVector {
        let mut out = CVector::zeros(v.len());
        for (k, &img) in self.liouville_images.iter().enumerate() {
            out[img] = v[k];
        }
        out
    }

    /// `max |[π̂, A]|`.
    pub fn commutator_norm(&self, a: &CMatrix) -> f64 {
        max_abs(&(self.conjugate(a) - a))
    }

    /// `max |[𝒮_π, Γ]|` for a superoperator matrix `Γ`.
    pub fn superoperator_commutator_norm(&self, gamma: &CMatrix) -> f64 {
        // 𝒮 Γ 𝒮⁻¹ - Γ
        let mut worst: f64 = 0.0;
        for c in 0..gamma.ncols() {
            for r in 0..gamma.nrows() {
                let moved = gamma[(r, c)];
                let here = gamma[(self.liouville_images[r], self.liouville_images[c])];
                worst = worst.max((moved - here).norm());
            }
        }
        worst
    }
}
