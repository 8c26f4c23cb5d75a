//! Kraus channels and Lindbladians, their superoperator matrices, and
//! permutation-symmetry certificates.
//!
//! A channel is *strongly* symmetric when every Kraus (jump) operator commutes
//! with every qudit permutation, and *weakly* symmetric when a permutation
//! only mixes the operators among themselves,
//! `π̂ F_ν π̂† = Σ_μ F_μ U(π)_{μν}` with `U(π)` unitary. Only the `n - 1`
//! adjacent transpositions are checked; they generate `S_n` and both
//! conditions are closed under products.

use std::collections::BTreeMap;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liouville::{
    hs_inner, hs_inner_unchecked, max_abs, perm_rep, permutation_images, vectorize_matrix, CMatrix, OperatorBasis,
    PermutationRep, QuditOperator,
};
use crate::permutation::Permutation;

/// Closure `Σ F†F = I` tolerance.
pub const CLOSURE_TOL: f64 = 1e-10;
/// Strong-symmetry commutator tolerance.
pub const COMMUTATOR_TOL: f64 = 1e-10;
/// Weak-symmetry residual and unitarity tolerance.
pub const CERTIFICATE_TOL: f64 = 1e-8;
/// Hermiticity / PSD tolerance.
pub const HERMITIAN_TOL: f64 = 1e-12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn closure_error(ops: &[QuditOperator], d: usize, n: usize) -> f64 {
    let dim = d.pow(n as u32);
    let sum = ops.iter().fold(CMatrix::zeros(dim, dim), |acc, f| acc + f.matrix().adjoint() * f.matrix());
    max_abs(&(sum - CMatrix::identity(dim, dim)))
}

fn check_ops(d: usize, n: usize, ops: &[QuditOperator]) -> Result<()> {
    if let Some(bad) = ops.iter().find(|f| f.d() != d || f.n() != n) {
        return Err(Error::DimensionMismatch(format!(
            "operator on (d={}, n={}) in a channel on (d={d}, n={n})",
            bad.d(),
            bad.n()
        )));
    }
    Ok(())
}

/// A trace-preserving channel `ρ ↦ Σ_μ F_μ ρ F_μ†`.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    d: usize,
    n: usize,
    kraus_ops: Vec<QuditOperator>,
}

impl KrausChannel {
    /// Validates closure within [`CLOSURE_TOL`]. Kraus operators need not be
    /// mutually orthogonal; see [`KrausChannel::orthogonality_error`].
    pub fn new(d: usize, n: usize, kraus_ops: Vec<QuditOperator>) -> Result<Self> {
        if kraus_ops.is_empty() {
            return Err(Error::InvariantViolation("a Kraus channel needs at least one operator".into()));
        }
        check_ops(d, n, &kraus_ops)?;
        let err = closure_error(&kraus_ops, d, n);
        if err > CLOSURE_TOL {
            return Err(Error::InvariantViolation(format!("Kraus closure Σ F†F = I violated by {err:e}")));
        }
        Ok(Self { d, n, kraus_ops })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kraus_ops(&self) -> &[QuditOperator] {
        &self.kraus_ops
    }

    /// `max |Σ F†F - I|`.
    pub fn closure_error(&self) -> f64 {
        closure_error(&self.kraus_ops, self.d, self.n)
    }

    /// Largest off-diagonal `|⟨F_μ, F_ν⟩|`.
    pub fn orthogonality_error(&self) -> f64 {
        off_diagonal_overlap(&self.kraus_ops)
    }

    /// `𝓕(ρ)`.
    pub fn apply(&self, rho: &QuditOperator) -> Result<QuditOperator> {
        check_ops(self.d, self.n, std::slice::from_ref(rho))?;
        let dim = rho.dim();
        let out = self
            .kraus_ops
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, f| acc + f.matrix() * rho.matrix() * f.matrix().adjoint());
        QuditOperator::new(self.d, self.n, out)
    }
}

fn off_diagonal_overlap(ops: &[QuditOperator]) -> f64 {
    let mut worst: f64 = 0.0;
    for (a, fa) in ops.iter().enumerate() {
        for fb in &ops[a + 1..] {
            worst = worst.max(hs_inner(fa, fb).map(|z| z.norm()).unwrap_or(f64::INFINITY));
        }
    }
    worst
}

/// Generator `ρ ↦ -i[H, ρ] + Σ_μ (L_μ ρ L_μ† - ½{L_μ†L_μ, ρ})`.
///
/// Jump operators carry their rates (`√γ L`).
#[derive(Clone, Debug)]
pub struct Lindbladian {
    d: usize,
    n: usize,
    hamiltonian: QuditOperator,
    jump_ops: Vec<QuditOperator>,
}

impl Lindbladian {
    /// Requires a Hermitian `H` and traceless, mutually orthogonal jumps.
    pub fn new(d: usize, n: usize, hamiltonian: QuditOperator, jump_ops: Vec<QuditOperator>) -> Result<Self> {
        check_ops(d, n, std::slice::from_ref(&hamiltonian))?;
        check_ops(d, n, &jump_ops)?;
        let herm = hamiltonian.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvariantViolation(format!("Hamiltonian is not Hermitian (deviation {herm:e})")));
        }
        let id = QuditOperator::identity(d, n);
        for (k, l) in jump_ops.iter().enumerate() {
            let tr = hs_inner(&id, l)?.norm();
            if tr > CLOSURE_TOL {
                return Err(Error::InvariantViolation(format!("jump operator {k} is not traceless (|tr|/dim = {tr:e})")));
            }
        }
        let overlap = off_diagonal_overlap(&jump_ops);
        if overlap > CLOSURE_TOL {
            return Err(Error::InvariantViolation(format!("jump operators are not mutually orthogonal (overlap {overlap:e})")));
        }
        Ok(Self { d, n, hamiltonian, jump_ops })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hamiltonian(&self) -> &QuditOperator {
        &self.hamiltonian
    }

    pub fn jump_ops(&self) -> &[QuditOperator] {
        &self.jump_ops
    }

    /// `𝓛(ρ)`.
    pub fn apply(&self, rho: &QuditOperator) -> Result<QuditOperator> {
        check_ops(self.d, self.n, std::slice::from_ref(rho))?;
        let r = rho.matrix();
        let h = self.hamiltonian.matrix();
        let mut out = (h * r - r * h) * Complex64::new(0.0, -1.0);
        for l in &self.jump_ops {
            let l = l.matrix();
            let ll = l.adjoint() * l;
            out += l * r * l.adjoint() - (&ll * r + r * &ll) * Complex64::new(0.5, 0.0);
        }
        QuditOperator::new(self.d, self.n, out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuperOperatorKind {
    Channel,
    Generator,
}

/// Dense matrix of a superoperator in the [`OperatorBasis`] for `(d, n)`:
/// entry `(a, b)` is `⟨B_a, 𝓕(B_b)⟩`.
#[derive(Clone, Debug)]
pub struct SuperOperatorMatrix {
    pub d: usize,
    pub n: usize,
    pub matrix: CMatrix,
    pub kind: SuperOperatorKind,
}

impl SuperOperatorMatrix {
    pub fn identity(d: usize, n: usize) -> Self {
        let dim = (d * d).pow(n as u32);
        Self { d, n, matrix: CMatrix::identity(dim, dim), kind: SuperOperatorKind::Channel }
    }

    /// Deviation of the identity-letter row from its required value: the unit
    /// row for a trace-preserving channel, zero for a generator.
    pub fn identity_row_error(&self) -> f64 {
        let row = self.matrix.row(0);
        row.iter()
            .enumerate()
            .map(|(b, z)| {
                let want = if self.kind == SuperOperatorKind::Channel && b == 0 { ONE } else { Complex64::new(0.0, 0.0) };
                (z - want).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

fn check_basis(d: usize, n: usize, basis: &OperatorBasis) -> Result<()> {
    if basis.d() != d || basis.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "basis for (d={}, n={}) used with a channel on (d={d}, n={n})",
            basis.d(),
            basis.n()
        )));
    }
    Ok(())
}

pub fn kraus_superop(channel: &KrausChannel, basis: &OperatorBasis) -> Result<SuperOperatorMatrix> {
    check_basis(channel.d, channel.n, basis)?;
    let dim = basis.len();
    let hdim = channel.d.pow(channel.n as u32);
    let mut matrix = CMatrix::zeros(dim, dim);
    let daggers: Vec<CMatrix> = channel.kraus_ops.iter().map(|f| f.matrix().adjoint()).collect();
    for b in 0..dim {
        let mut image = CMatrix::zeros(hdim, hdim);
        for (f, fd) in channel.kraus_ops.iter().zip(&daggers) {
            image += basis.right_multiply(f.matrix(), b) * fd;
        }
        matrix.set_column(b, &vectorize_matrix(&image, basis));
    }
    Ok(SuperOperatorMatrix { d: channel.d, n: channel.n, matrix, kind: SuperOperatorKind::Channel })
}

pub fn lindblad_superop(lind: &Lindbladian, basis: &OperatorBasis) -> Result<SuperOperatorMatrix> {
    check_basis(lind.d, lind.n, basis)?;
    let dim = basis.len();
    let hdim = lind.d.pow(lind.n as u32);
    let h = lind.hamiltonian.matrix();
    let mut anti = CMatrix::zeros(hdim, hdim);
    for l in &lind.jump_ops {
        anti += l.matrix().adjoint() * l.matrix();
    }
    // B ↦ -i(HB - BH) - ½(KB + BK), K = Σ L†L
    let left = h * Complex64::new(0.0, -1.0) - &anti * Complex64::new(0.5, 0.0);
    let right = h * Complex64::new(0.0, 1.0) - &anti * Complex64::new(0.5, 0.0);
    let daggers: Vec<CMatrix> = lind.jump_ops.iter().map(|l| l.matrix().adjoint()).collect();
    let mut matrix = CMatrix::zeros(dim, dim);
    for b in 0..dim {
        let mut image = basis.right_multiply(&left, b) + basis.left_multiply(b, &right);
        for (l, ld) in lind.jump_ops.iter().zip(&daggers) {
            image += basis.right_multiply(l.matrix(), b) * ld;
        }
        matrix.set_column(b, &vectorize_matrix(&image, basis));
    }
    Ok(SuperOperatorMatrix { d: lind.d, n: lind.n, matrix, kind: SuperOperatorKind::Generator })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Strong,
    Weak,
    None,
}

impl std::fmt::Display for Symmetry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Symmetry::Strong => "strong",
            Symmetry::Weak => "weak",
            Symmetry::None => "none",
        })
    }
}

/// Evidence for one adjacent transposition `s_i`.
#[derive(Clone, Debug)]
pub struct GeneratorCertificate {
    /// 1-based `i` of `s_i = (i, i+1)`.
    pub transposition: usize,
    /// `U(s_i)` on the operator index space.
    pub unitary: CMatrix,
    /// `max_μ max |[F_μ, π̂]|`.
    pub commutator_norm: f64,
    /// `max_ν max |π̂ F_ν π̂† - Σ_μ F_μ U_{μν}|`.
    pub residual: f64,
    /// `max |U†U - I|`.
    pub unitarity_error: f64,
}

#[derive(Clone, Debug)]
pub struct SymmetryCertificate {
    pub classification: Symmetry,
    pub generators: Vec<GeneratorCertificate>,
    /// `max_i max |π̂ H π̂† - H|` for Lindbladians.
    pub hamiltonian_residual: Option<f64>,
    /// Indices of the operators entering `U`; operators with zero norm are skipped.
    pub active_operators: Vec<usize>,
}

impl SymmetryCertificate {
    pub fn max_commutator_norm(&self) -> f64 {
        self.generators.iter().map(|g| g.commutator_norm).fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.generators.iter().map(|g| g.residual).fold(0.0, f64::max)
    }

    pub fn max_unitarity_error(&self) -> f64 {
        self.generators.iter().map(|g| g.unitarity_error).fold(0.0, f64::max)
    }
}

/// Solve `π̂ F_ν π̂† = Σ_μ F_μ U_{μν}` through the Gram system `G U = B`,
/// `G_{μν} = ⟨F_μ, F_ν⟩`, `B_{μν} = ⟨F_μ, π̂ F_ν π̂†⟩`. Returns `(U, residual)`.
/// For orthogonal operators this is `U_{μν} = B_{μν} / ⟨F_μ, F_μ⟩`.
pub fn solve_mixing_matrix(ops: &[QuditOperator], rep: &PermutationRep) -> Result<(CMatrix, f64)> {
    let k = ops.len();
    if k == 0 {
        return Ok((CMatrix::zeros(0, 0), 0.0));
    }
    let (d, n) = (ops[0].d(), ops[0].n());
    let moved: Vec<CMatrix> = ops.iter().map(|f| rep.conjugate(f.matrix())).collect();
    let gram = CMatrix::from_fn(k, k, |a, b| hs_inner_unchecked(d, n, ops[a].matrix(), ops[b].matrix()));
    let rhs = CMatrix::from_fn(k, k, |a, b| hs_inner_unchecked(d, n, ops[a].matrix(), &moved[b]));
    let scale = gram.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pinv = gram
        .pseudo_inverse(1e-12 * scale.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::InternalConsistency(format!("Gram pseudo-inverse failed: {e}")))?;
    let u = pinv * rhs;
    let mut residual: f64 = 0.0;
    for nu in 0..k {
        let mut recon = moved[nu].clone();
        for mu in 0..k {
            recon -= ops[mu].matrix() * u[(mu, nu)];
        }
        residual = residual.max(max_abs(&recon));
    }
    Ok((u, residual))
}

fn classify_operators(d: usize, n: usize, ops: &[QuditOperator], hamiltonian: Option<&QuditOperator>) -> Result<SymmetryCertificate> {
    let active_operators: Vec<usize> =
        (0..ops.len()).filter(|&k| ops[k].matrix().iter().any(|z| z.norm() > 1e-14)).collect();
    let active: Vec<QuditOperator> = active_operators.iter().map(|&k| ops[k].clone()).collect();
    crate::liouville::liouville_dim(d, n)?;

    let mut generators = Vec::new();
    let mut hamiltonian_residual = hamiltonian.map(|_| 0.0f64);
    for i in 1..n {
        let pi = Permutation::adjacent(n, i)?;
        let rep = hilbert_rep(&pi, d, n);
        if let (Some(h), Some(res)) = (hamiltonian, hamiltonian_residual.as_mut()) {
            *res = res.max(rep.commutator_norm(h.matrix()));
        }
        let commutator_norm = active.iter().map(|f| rep.commutator_norm(f.matrix())).fold(0.0, f64::max);
        let (unitary, residual) = solve_mixing_matrix(&active, &rep)?;
        let k = unitary.nrows();
        let unitarity_error = max_abs(&(unitary.adjoint() * &unitary - CMatrix::identity(k, k)));
        generators.push(GeneratorCertificate { transposition: i, unitary, commutator_norm, residual, unitarity_error });
    }

    let ham_ok = hamiltonian_residual.is_none_or(|r| r < COMMUTATOR_TOL);
    let strong = ham_ok && generators.iter().all(|g| g.commutator_norm < COMMUTATOR_TOL);
    let weak = ham_ok
        && generators.iter().all(|g| g.residual < CERTIFICATE_TOL && g.unitarity_error < CERTIFICATE_TOL);
    let classification = if strong {
        Symmetry::Strong
    } else if weak {
        Symmetry::Weak
    } else {
        Symmetry::None
    };
    Ok(SymmetryCertificate { classification, generators, hamiltonian_residual, active_operators })
}

/// Hilbert-space permutation without building an operator basis.
pub(crate) fn hilbert_rep(pi: &Permutation, d: usize, n: usize) -> PermutationRep {
    PermutationRep {
        d,
        n,
        pi: pi.clone(),
        hilbert_images: permutation_images(pi, d, n),
        liouville_images: Vec::new(),
    }
}

pub fn classify_kraus_symmetry(channel: &KrausChannel) -> Result<SymmetryCertificate> {
    classify_operators(channel.d, channel.n, &channel.kraus_ops, None)
}

/// As [`classify_kraus_symmetry`] over the jump operators, additionally
/// requiring `π̂ H π̂† = H`.
pub fn classify_lindblad_symmetry(lind: &Lindbladian) -> Result<SymmetryCertificate> {
    classify_operators(lind.d, lind.n, &lind.jump_ops, Some(&lind.hamiltonian))
}

/// `max_i max |[𝒮_{s_i}, Γ]|` over adjacent transpositions.
pub fn superop_commutator_norm(gamma: &SuperOperatorMatrix, basis: &OperatorBasis) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 1..gamma.n {
        let rep = perm_rep(&Permutation::adjacent(gamma.n, i)?, gamma.d, gamma.n, basis)?;
        worst = worst.max(rep.superoperator_commutator_norm(&gamma.matrix));
    }
    Ok(worst)
}

/// A single-qudit operator with a type label.
#[derive(Clone, Debug)]
pub struct LocalOperator {
    pub label: String,
    pub matrix: CMatrix,
}

impl LocalOperator {
    pub fn new(label: impl Into<String>, matrix: CMatrix) -> Self {
        Self { label: label.into(), matrix }
    }
}

/// Every distinct tensor arrangement of the labelled single-qudit operators
/// in `pattern` (the `S_n` orbit), in lexicographic order of label positions
/// in `single_ops`.
pub fn symmetrize_local_kraus(single_ops: &[LocalOperator], pattern: &[&str], n: usize) -> Result<Vec<QuditOperator>> {
    if pattern.len() != n {
        return Err(Error::InvalidArgument(format!("pattern of length {} for n={n}", pattern.len())));
    }
    let d = single_ops
        .first()
        .map(|o| o.matrix.nrows())
        .ok_or_else(|| Error::InvalidArgument("no single-qudit operators".into()))?;
    if let Some(bad) = single_ops.iter().find(|o| o.matrix.nrows() != d || o.matrix.ncols() != d) {
        return Err(Error::DimensionMismatch(format!("local operator '{}' is not {d}x{d}", bad.label)));
    }
    let mut idx: Vec<usize> = pattern
        .iter()
        .map(|l| {
            single_ops
                .iter()
                .position(|o| o.label == *l)
                .ok_or_else(|| Error::InvalidArgument(format!("pattern label '{l}' has no operator")))
        })
        .collect::<Result<_>>()?;
    idx.sort_unstable();
    let mut out = Vec::new();
    loop {
        let factors: Vec<CMatrix> = idx.iter().map(|&k| single_ops[k].matrix.clone()).collect();
        out.push(QuditOperator::tensor(d, &factors)?);
        // next distinct multiset permutation
        let Some(k) = (0..n.saturating_sub(1)).rev().find(|&k| idx[k] < idx[k + 1]) else {
            break;
        };
        let l = (k + 1..n).rev().find(|&l| idx[k] < idx[l]).unwrap();
        idx.swap(k, l);
        idx[k + 1..].reverse();
    }
    Ok(out)
}

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Eigenvalues in `[-1e-12, 0)` are clamped to zero.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    let deviation = max_abs(&(m - m.adjoint()));
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -HERMITIAN_TOL {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
    }
    let roots = eig.eigenvalues.map(|x| Complex64::new(x.max(0.0).sqrt(), 0.0));
    let v = &eig.eigenvectors;
    Ok(v * CMatrix::from_diagonal(&roots) * v.adjoint())
}

/// A channel model of either kind.
#[derive(Clone, Debug)]
pub enum ChannelModel {
    Kraus(KrausChannel),
    Lindblad(Lindbladian),
}

impl ChannelModel {
    pub fn d(&self) -> usize {
        match self {
            ChannelModel::Kraus(c) => c.d,
            ChannelModel::Lindblad(l) => l.d,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            ChannelModel::Kraus(c) => c.n,
            ChannelModel::Lindblad(l) => l.n,
        }
    }

    pub fn kind(&self) -> SuperOperatorKind {
        match self {
            ChannelModel::Kraus(_) => SuperOperatorKind::Channel,
            ChannelModel::Lindblad(_) => SuperOperatorKind::Generator,
        }
    }

    pub fn superop(&self, basis: &OperatorBasis) -> Result<SuperOperatorMatrix> {
        match self {
            ChannelModel::Kraus(c) => kraus_superop(c, basis),
            ChannelModel::Lindblad(l) => lindblad_superop(l, basis),
        }
    }

    pub fn classify(&self) -> Result<SymmetryCertificate> {
        match self {
            ChannelModel::Kraus(c) => classify_kraus_symmetry(c),
            ChannelModel::Lindblad(l) => classify_lindblad_symmetry(l),
        }
    }

    pub fn operators(&self) -> &[QuditOperator] {
        match self {
            ChannelModel::Kraus(c) => c.kraus_ops(),
            ChannelModel::Lindblad(l) => l.jump_ops(),
        }
    }
}

/// Amplitude-damping Kraus pair `f₀ = diag(1, √(1-p))`, `f₁ = √p |0⟩⟨1|`.
pub fn amplitude_damping(p: f64) -> (CMatrix, CMatrix) {
    let c = |x: f64| Complex64::new(x, 0.0);
    let f0 = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c((1.0 - p).sqrt())]);
    let f1 = CMatrix::from_row_slice(2, 2, &[c(0.0), c(p.sqrt()), c(0.0), c(0.0)]);
    (f0, f1)
}

/// Lowering operator `ℓ = |0⟩⟨1|`.
pub fn lowering() -> CMatrix {
    let c = |x: f64| Complex64::new(x, 0.0);
    CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)])
}

fn pauli_x() -> CMatrix {
    let c = |x: f64| Complex64::new(x, 0.0);
    CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

fn pauli_z() -> CMatrix {
    let c = |x: f64| Complex64::new(x, 0.0);
    CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
}

/// `op` on the qubits in `sites`, identity elsewhere.
fn on_sites(n: usize, sites: &[usize], op: &CMatrix) -> QuditOperator {
    let factors: Vec<CMatrix> =
        (0..n).map(|k| if sites.contains(&k) { op.clone() } else { CMatrix::identity(2, 2) }).collect();
    QuditOperator::tensor(2, &factors).expect("qubit factors")
}

/// Transverse-field Ising Hamiltonian `Σ_i h_i X_i + J Σ_{i<j} Z_i Z_j`.
/// Uniform `h_i` makes it permutation invariant.
pub fn ising_hamiltonian(fields: &[f64], coupling: f64) -> QuditOperator {
    let n = fields.len();
    let mut h = QuditOperator::zeros(2, n);
    for (i, &hx) in fields.iter().enumerate() {
        h = h.add(&on_sites(n, &[i], &pauli_x()).scale(Complex64::new(hx, 0.0))).unwrap();
    }
    for i in 0..n {
        for j in i + 1..n {
            let zz = on_sites(n, &[i, j], &pauli_z());
            h = h.add(&zz.scale(Complex64::new(coupling, 0.0))).unwrap();
        }
    }
    h
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Sum over all `k`-subsets of sites of `a` on the subset and `b` elsewhere.
fn orbit_sum(n: usize, k: usize, a: &CMatrix, b: &CMatrix) -> QuditOperator {
    subsets(n, k)
        .iter()
        .map(|s| {
            let f: Vec<CMatrix> = (0..n).map(|i| if s.contains(&i) { a.clone() } else { b.clone() }).collect();
            QuditOperator::tensor(2, &f).unwrap()
        })
        .reduce(|x, y| x.add(&y).unwrap())
        .unwrap_or_else(|| QuditOperator::zeros(2, n))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn nonzero(ops: Vec<QuditOperator>) -> Vec<QuditOperator> {
    ops.into_iter().filter(|o| o.matrix().iter().any(|z| *z != Complex64::new(0.0, 0.0))).collect()
}

fn complete(n: usize, ops: Vec<QuditOperator>) -> Result<Vec<QuditOperator>> {
    let dim = 1usize << n;
    let rest = ops.iter().fold(CMatrix::identity(dim, dim), |acc, f| acc - f.matrix().adjoint() * f.matrix());
    let completion = psd_sqrt(&rest)?;
    let mut ops = ops;
    ops.push(QuditOperator::new(2, n, completion)?);
    Ok(ops)
}

/// The qubit amplitude-damping example families. Operators that come out
/// exactly zero (e.g. `f₁` at `p = 0`) are dropped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "snake_case")]
pub enum ExampleChannel {
    /// `{f₀^{⊗n}, f₁^{⊗n}, √(I - Σ F†F)}`: strong.
    CollectiveDamping { p: f64 },
    /// `G_k = C(n,k)^{-1/2} Σ_{|S|=k} f₁^{S} f₀^{rest}` for `k = 1..n-1`,
    /// completed by `√(I - Σ G†G)`: strong.
    SymmetrizedDamping { p: f64 },
    /// `n^{-1/2} f_j` on one qubit at a time: weak.
    SingleQubitDamping { p: f64 },
    /// All `2ⁿ` products of `f₀, f₁`: weak.
    IndependentDamping { p: f64 },
    /// `{f₀ ⊗ I…, f₁ ⊗ I…}` on qubit 1 only: not symmetric.
    FirstQubitDamping { p: f64 },
    /// `√γ₁ ℓ` on each qubit with the uniform Ising Hamiltonian: weak.
    LocalDecay { gamma1: f64, h_x: f64, j: f64 },
    /// `√γ₂ ℓ⊗ℓ` on each pair of qubits with the Ising Hamiltonian: weak.
    PairDecay { gamma2: f64, h_x: f64, j: f64 },
    /// `√γ₃ Σ_i ℓ_i`, `√γ₄ Σ_{i<j} ℓ_iℓ_j`, `√γ₅ ℓ^{⊗n}` with the Ising Hamiltonian: strong.
    CollectiveDecay { gamma3: f64, gamma4: f64, gamma5: f64, h_x: f64, j: f64 },
    /// Ising Hamiltonian without jumps.
    Ising { h_x: f64, j: f64 },
}

impl ExampleChannel {
    pub const NAMES: [&'static str; 9] = [
        "collective_damping",
        "symmetrized_damping",
        "single_qubit_damping",
        "independent_damping",
        "first_qubit_damping",
        "local_decay",
        "pair_decay",
        "collective_decay",
        "ising",
    ];

    /// Parse a name and parameter map. `h_x` and `j` default to 1.
    pub fn from_params(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let mut used: Vec<&str> = Vec::new();
        let mut get = |key: &'static str, default: Option<f64>| -> Result<f64> {
            used.push(key);
            match (params.get(key), default) {
                (Some(&v), _) => Ok(v),
                (None, Some(v)) => Ok(v),
                (None, None) => Err(Error::InvalidParameter { name: key.into(), reason: "missing".into() }),
            }
        };
        let ch = match name {
            "collective_damping" => ExampleChannel::CollectiveDamping { p: get("p", None)? },
            "symmetrized_damping" => ExampleChannel::SymmetrizedDamping { p: get("p", None)? },
            "single_qubit_damping" => ExampleChannel::SingleQubitDamping { p: get("p", None)? },
            "independent_damping" => ExampleChannel::IndependentDamping { p: get("p", None)? },
            "first_qubit_damping" => ExampleChannel::FirstQubitDamping { p: get("p", None)? },
            "local_decay" => ExampleChannel::LocalDecay {
                gamma1: get("gamma1", None)?,
                h_x: get("h_x", Some(1.0))?,
                j: get("j", Some(1.0))?,
            },
            "pair_decay" => ExampleChannel::PairDecay {
                gamma2: get("gamma2", None)?,
                h_x: get("h_x", Some(1.0))?,
                j: get("j", Some(1.0))?,
            },
            "collective_decay" => ExampleChannel::CollectiveDecay {
                gamma3: get("gamma3", None)?,
                gamma4: get("gamma4", None)?,
                gamma5: get("gamma5", None)?,
                h_x: get("h_x", Some(1.0))?,
                j: get("j", Some(1.0))?,
            },
            "ising" => ExampleChannel::Ising { h_x: get("h_x", Some(1.0))?, j: get("j", Some(1.0))? },
            other => return Err(Error::UnknownChannel(other.into())),
        };
        if let Some(extra) = params.keys().find(|k| !used.contains(&k.as_str())) {
            return Err(Error::InvalidParameter {
                name: extra.clone(),
                reason: format!("not a parameter of '{name}'"),
            });
        }
        Ok(ch)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExampleChannel::CollectiveDamping { .. } => "collective_damping",
            ExampleChannel::SymmetrizedDamping { .. } => "symmetrized_damping",
            ExampleChannel::SingleQubitDamping { .. } => "single_qubit_damping",
            ExampleChannel::IndependentDamping { .. } => "independent_damping",
            ExampleChannel::FirstQubitDamping { .. } => "first_qubit_damping",
            ExampleChannel::LocalDecay { .. } => "local_decay",
            ExampleChannel::PairDecay { .. } => "pair_decay",
            ExampleChannel::CollectiveDecay { .. } => "collective_decay",
            ExampleChannel::Ising { .. } => "ising",
        }
    }

    pub fn kind(&self) -> SuperOperatorKind {
        match self {
            ExampleChannel::CollectiveDamping { .. }
            | ExampleChannel::SymmetrizedDamping { .. }
            | ExampleChannel::SingleQubitDamping { .. }
            | ExampleChannel::IndependentDamping { .. }
            | ExampleChannel::FirstQubitDamping { .. } => SuperOperatorKind::Channel,
            _ => SuperOperatorKind::Generator,
        }
    }

    /// Normalization convention of the operator set, for reports.
    pub fn normalization_note(&self) -> Option<&'static str> {
        match self {
            ExampleChannel::SymmetrizedDamping { .. } => {
                Some("each orbit sum G_k scaled by 1/sqrt(C(n,k)); completion by psd_sqrt(I - sum G^dag G)")
            }
            ExampleChannel::SingleQubitDamping { .. } => Some("each single-qubit operator scaled by 1/sqrt(n)"),
            _ => None,
        }
    }

    fn check_probability(p: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter { name: "p".into(), reason: format!("{p} is outside [0, 1]") });
        }
        Ok(())
    }

    fn check_rate(name: &str, g: f64) -> Result<()> {
        if !(g >= 0.0 && g.is_finite()) {
            return Err(Error::InvalidParameter { name: name.into(), reason: format!("rate {g} must be finite and >= 0") });
        }
        Ok(())
    }

    /// Build the model on `n` qubits.
    pub fn build(&self, n: usize) -> Result<ChannelModel> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        crate::liouville::liouville_dim(2, n)?;
        let c = |x: f64| Complex64::new(x, 0.0);
        let kraus = |ops: Vec<QuditOperator>| -> Result<ChannelModel> {
            Ok(ChannelModel::Kraus(KrausChannel::new(2, n, nonzero(ops))?))
        };
        let lindblad = |h_x: f64, j: f64, jumps: Vec<QuditOperator>| -> Result<ChannelModel> {
            if !h_x.is_finite() || !j.is_finite() {
                return Err(Error::InvalidParameter { name: "h_x/j".into(), reason: "must be finite".into() });
            }
            Ok(ChannelModel::Lindblad(Lindbladian::new(2, n, ising_hamiltonian(&vec![h_x; n], j), nonzero(jumps))?))
        };
        match *self {
            ExampleChannel::CollectiveDamping { p } => {
                Self::check_probability(p)?;
                let (f0, f1) = amplitude_damping(p);
                let ops = vec![
                    QuditOperator::tensor(2, &vec![f0; n])?,
                    QuditOperator::tensor(2, &vec![f1; n])?,
                ];
                kraus(complete(n, nonzero(ops))?)
            }
            ExampleChannel::SymmetrizedDamping { p } => {
                Self::check_probability(p)?;
                let (f0, f1) = amplitude_damping(p);
                let ops: Vec<QuditOperator> =
                    (1..n).map(|k| orbit_sum(n, k, &f1, &f0).scale(c(1.0 / binomial(n, k).sqrt()))).collect();
                kraus(complete(n, nonzero(ops))?)
            }
            ExampleChannel::SingleQubitDamping { p } => {
                Self::check_probability(p)?;
                let (f0, f1) = amplitude_damping(p);
                let s = c(1.0 / (n as f64).sqrt());
                let mut ops = Vec::new();
                for f in [&f0, &f1] {
                    for i in 0..n {
                        ops.push(on_sites(n, &[i], f).scale(s));
                    }
                }
                kraus(ops)
            }
            ExampleChannel::IndependentDamping { p } => {
                Self::check_probability(p)?;
                let (f0, f1) = amplitude_damping(p);
                let locals = [LocalOperator::new("f0", f0), LocalOperator::new("f1", f1)];
                let mut ops = Vec::new();
                for k in 0..=n {
                    let pattern: Vec<&str> = (0..n).map(|i| if i < n - k { "f0" } else { "f1" }).collect();
                    ops.extend(symmetrize_local_kraus(&locals, &pattern, n)?);
                }
                kraus(ops)
            }
            ExampleChannel::FirstQubitDamping { p } => {
                Self::check_probability(p)?;
                let (f0, f1) = amplitude_damping(p);
                kraus(vec![on_sites(n, &[0], &f0), on_sites(n, &[0], &f1)])
            }
            ExampleChannel::LocalDecay { gamma1, h_x, j } => {
                Self::check_rate("gamma1", gamma1)?;
                let l = lowering() * c(gamma1.sqrt());
                lindblad(h_x, j, (0..n).map(|i| on_sites(n, &[i], &l)).collect())
            }
            ExampleChannel::PairDecay { gamma2, h_x, j } => {
                Self::check_rate("gamma2", gamma2)?;
                let jumps = subsets(n, 2)
                    .iter()
                    .map(|s| on_sites(n, s, &lowering()).scale(c(gamma2.sqrt())))
                    .collect();
                lindblad(h_x, j, jumps)
            }
            ExampleChannel::CollectiveDecay { gamma3, gamma4, gamma5, h_x, j } => {
                Self::check_rate("gamma3", gamma3)?;
                Self::check_rate("gamma4", gamma4)?;
                Self::check_rate("gamma5", gamma5)?;
                let id = CMatrix::identity(2, 2);
                let mut jumps = vec![orbit_sum(n, 1, &lowering(), &id).scale(c(gamma3.sqrt()))];
                if n >= 2 {
                    jumps.push(orbit_sum(n, 2, &lowering(), &id).scale(c(gamma4.sqrt())));
                }
                if n >= 3 {
                    jumps.push(QuditOperator::tensor(2, &vec![lowering(); n])?.scale(c(gamma5.sqrt())));
                }
                lindblad(h_x, j, jumps)
            }
            ExampleChannel::Ising { h_x, j } => lindblad(h_x, j, Vec::new()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::{operator_basis, vectorize};

    fn diag(v: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0))))
    }

    #[test]
    fn psd_sqrt_examples() {
        let id = CMatrix::identity(3, 3);
        assert!(max_abs(&(psd_sqrt(&id).unwrap() - &id)) < 1e-14);
        assert!(max_abs(&(psd_sqrt(&diag(&[4.0, 1.0])).unwrap() - diag(&[2.0, 1.0]))) < 1e-14);
        assert!(matches!(psd_sqrt(&diag(&[1.0, -0.1])), Err(Error::NotPositiveSemidefinite { .. })));
        let mut bad = CMatrix::identity(2, 2);
        bad[(0, 1)] = Complex64::new(0.5, 0.0);
        assert!(matches!(psd_sqrt(&bad), Err(Error::NotHermitian { .. })));
        assert!(psd_sqrt(&diag(&[1.0, -1e-13])).is_ok());
    }

    #[test]
    fn identity_channel_superop() {
        let ch = KrausChannel::new(2, 2, vec![QuditOperator::identity(2, 2)]).unwrap();
        let basis = operator_basis(2, 2).unwrap();
        let g = kraus_superop(&ch, &basis).unwrap();
        assert!(max_abs(&(&g.matrix - CMatrix::identity(16, 16))) < 1e-14);
        assert!(g.identity_row_error() < 1e-14);
    }

    #[test]
    fn full_damping_maps_excited_to_ground() {
        let (f0, f1) = amplitude_damping(1.0);
        let ch = KrausChannel::new(
            2,
            1,
            vec![QuditOperator::new(2, 1, f0).unwrap(), QuditOperator::new(2, 1, f1).unwrap()],
        )
        .unwrap();
        let basis = operator_basis(2, 1).unwrap();
        let g = kraus_superop(&ch, &basis).unwrap();
        let excited = QuditOperator::new(2, 1, diag(&[0.0, 1.0])).unwrap();
        let ground = QuditOperator::new(2, 1, diag(&[1.0, 0.0])).unwrap();
        let out = &g.matrix * vectorize(&excited, &basis).unwrap();
        let want = vectorize(&ground, &basis).unwrap();
        assert!((out - want).norm() < 1e-14);
    }

    #[test]
    fn rejects_non_trace_preserving() {
        let (f0, _) = amplitude_damping(0.3);
        assert!(matches!(
            KrausChannel::new(2, 1, vec![QuditOperator::new(2, 1, f0).unwrap()]),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn lindblad_zero_and_rotation() {
        let basis = operator_basis(2, 1).unwrap();
        let zero = Lindbladian::new(2, 1, QuditOperator::zeros(2, 1), vec![]).unwrap();
        assert!(max_abs(&lindblad_superop(&zero, &basis).unwrap().matrix) < 1e-15);

        let z = QuditOperator::new(2, 1, pauli_z()).unwrap();
        let rot = lindblad_superop(&Lindbladian::new(2, 1, z, vec![]).unwrap(), &basis).unwrap();
        // -i[Z, X] = 2Y, -i[Z, Y] = -2X
        let m = &rot.matrix;
        assert!((m[(2, 1)] - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        assert!((m[(1, 2)] - Complex64::new(-2.0, 0.0)).norm() < 1e-14);
        for k in 0..4 {
            assert!(m[(0, k)].norm() < 1e-15 && m[(3, k)].norm() < 1e-15);
            assert!(m[(k, 0)].norm() < 1e-15 && m[(k, 3)].norm() < 1e-15);
        }
        assert!(m.iter().all(|z| z.im.abs() < 1e-15));
    }

    #[test]
    fn single_decay_rate() {
        // ρ = |1><1| = (I - Z)/2; the Z component relaxes at rate γ
        let gamma: f64 = 0.7;
        let l = QuditOperator::new(2, 1, lowering() * Complex64::new(gamma.sqrt(), 0.0)).unwrap();
        let lind = Lindbladian::new(2, 1, QuditOperator::zeros(2, 1), vec![l]).unwrap();
        let basis = operator_basis(2, 1).unwrap();
        let g = lindblad_superop(&lind, &basis).unwrap();
        assert!((g.matrix[(3, 3)] - Complex64::new(-gamma, 0.0)).norm() < 1e-14);
        assert!(g.identity_row_error() < 1e-14);
    }

    #[test]
    fn lindblad_rejects_bad_inputs() {
        let mut h = CMatrix::zeros(2, 2);
        h[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(Lindbladian::new(2, 1, QuditOperator::new(2, 1, h).unwrap(), vec![]).is_err());
        let traceful = QuditOperator::identity(2, 1);
        assert!(Lindbladian::new(2, 1, QuditOperator::zeros(2, 1), vec![traceful]).is_err());
        let l = QuditOperator::new(2, 1, lowering()).unwrap();
        assert!(Lindbladian::new(2, 1, QuditOperator::zeros(2, 1), vec![l.clone(), l]).is_err());
    }

    #[test]
    fn symmetrize_patterns() {
        let (f0, f1) = amplitude_damping(0.3);
        let locals = [LocalOperator::new("f0", f0.clone()), LocalOperator::new("f1", f1.clone())];
        let ops = symmetrize_local_kraus(&locals, &["f0", "f0", "f1"], 3).unwrap();
        assert_eq!(ops.len(), 3);
        let first = crate::liouville::kron_all(&[f0.clone(), f0.clone(), f1.clone()]);
        let last = crate::liouville::kron_all(&[f1.clone(), f0.clone(), f0.clone()]);
        assert_eq!(ops[0].matrix(), &first);
        assert_eq!(ops[2].matrix(), &last);
        assert_eq!(symmetrize_local_kraus(&locals, &["f0"; 3], 3).unwrap().len(), 1);
        assert_eq!(symmetrize_local_kraus(&locals, &["f0", "f1"], 2).unwrap().len(), 2);
        assert!(symmetrize_local_kraus(&locals, &["f0", "f1"], 3).is_err());
        assert!(symmetrize_local_kraus(&locals, &["f0", "g"], 2).is_err());
    }

    #[test]
    fn example_classifications() {
        let cases = [
            (ExampleChannel::CollectiveDamping { p: 0.3 }, Symmetry::Strong),
            (ExampleChannel::SymmetrizedDamping { p: 0.3 }, Symmetry::Strong),
            (ExampleChannel::SingleQubitDamping { p: 0.3 }, Symmetry::Weak),
            (ExampleChannel::IndependentDamping { p: 0.3 }, Symmetry::Weak),
            (ExampleChannel::FirstQubitDamping { p: 0.3 }, Symmetry::None),
            (ExampleChannel::LocalDecay { gamma1: 1.0, h_x: 1.0, j: 1.0 }, Symmetry::Weak),
            (ExampleChannel::PairDecay { gamma2: 1.0, h_x: 1.0, j: 1.0 }, Symmetry::Weak),
            (
                ExampleChannel::CollectiveDecay { gamma3: 1.0, gamma4: 0.5, gamma5: 1.0, h_x: 1.0, j: 1.0 },
                Symmetry::Strong,
            ),
        ];
        for (ex, want) in cases {
            let model = ex.build(3).unwrap();
            assert_eq!(model.classify().unwrap().classification, want, "{}", ex.name());
        }
        let independent = ExampleChannel::IndependentDamping { p: 0.3 }.build(3).unwrap();
        assert_eq!(independent.operators().len(), 8);
    }

    #[test]
    fn nonuniform_field_breaks_symmetry() {
        let h = ising_hamiltonian(&[1.0, 0.0, 0.0], 1.0);
        let jumps = vec![orbit_sum(3, 1, &lowering(), &CMatrix::identity(2, 2))];
        let lind = Lindbladian::new(2, 3, h, jumps).unwrap();
        let cert = classify_lindblad_symmetry(&lind).unwrap();
        assert_eq!(cert.classification, Symmetry::None);
        assert!(cert.hamiltonian_residual.unwrap() > 0.5);
    }

    #[test]
    fn parameter_parsing() {
        let mut params = BTreeMap::new();
        params.insert("p".to_string(), 0.3);
        assert_eq!(
            ExampleChannel::from_params("collective_damping", &params).unwrap(),
            ExampleChannel::CollectiveDamping { p: 0.3 }
        );
        assert!(matches!(ExampleChannel::from_params("nope", &params), Err(Error::UnknownChannel(_))));
        assert!(ExampleChannel::from_params("local_decay", &params).is_err());
        params.insert("gamma1_2".to_string(), 0.3);
        assert!(ExampleChannel::from_params("collective_damping", &params).is_err());
        assert!(ExampleChannel::CollectiveDamping { p: 1.5 }.build(3).is_err());
        assert!(ExampleChannel::LocalDecay { gamma1: -1.0, h_x: 1.0, j: 1.0 }.build(3).is_err());
    }
}
