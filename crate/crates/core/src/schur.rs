//! The super-Schur basis of the Liouville space.
//!
//! Operators on `n` qudits are vectors in `(ℂ^{d²})^{⊗n}` through the letter
//! basis of [`crate::liouville`]. The symmetric group permutes letters, and
//! the basis built here splits that space into sectors `𝒴^λ ⊗ 𝒲^λ`.
//!
//! Construction uses group-algebra matrix units
//!
//! ```text
//! P^λ_{y,y'} = (d_λ / n!) Σ_π D^λ(π)_{y,y'} 𝒮_π
//! ```
//!
//! with `D^λ` in Young's orthogonal form. For the reference tableau `y0` (the
//! row-filling one) an orthonormal basis of `range P^λ_{y0,y0}` is found one
//! weight class at a time; every other tableau sector is the image under the
//! isometry `P^λ_{y,y0}`. All twin copies are therefore aligned and the
//! permutation superoperators act as `D^λ(π) ⊗ I` in every sector.
//!
//! Every matrix involved is real, so columns are stored as real sparse
//! vectors over letter strings.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    partitions, standard_tableaux, weight_vectors, weyl_dimension, Partition, StandardTableau,
    WeightVector,
};
use crate::error::{Error, Result};
use crate::liouville::{index_to_letters, liouville_dim, max_abs, permutation_images, CMatrix};
use crate::permutation::Permutation;

/// Largest `n` for which all `n!` group elements are enumerated.
pub const MAX_SYMMETRIC_DEGREE: usize = 8;

/// Gram-Schmidt acceptance threshold.
pub const RANK_TOL: f64 = 1e-8;
/// Orthonormality assertion for the finished basis.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Young's orthogonal form of `s_i = (i, i+1)`, 1-based `i`, in the standard
/// tableau basis of `shape` (ordered as [`standard_tableaux`]).
pub fn young_orthogonal_generator(shape: &Partition, i: usize) -> Result<DMatrix<f64>> {
    let n = shape.n();
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange(format!("generator s_{i} for n={n}")));
    }
    let tableaux = standard_tableaux(shape);
    Ok(generator_matrix(&tableaux, i))
}

fn generator_matrix(tableaux: &[StandardTableau], i: usize) -> DMatrix<f64> {
    let dim = tableaux.len();
    let mut m = DMatrix::zeros(dim, dim);
    for (a, t) in tableaux.iter().enumerate() {
        // axial distance from i to i+1
        let r = (t.content(i + 1).unwrap() - t.content(i).unwrap()) as f64;
        m[(a, a)] = 1.0 / r;
        if let Some(swapped) = t.swap_adjacent(i) {
            let b = tableaux.iter().position(|u| *u == swapped).expect("swapped tableau is standard");
            m[(b, a)] = (1.0 - 1.0 / (r * r)).sqrt();
        }
    }
    m
}

/// `D^λ(π)` for every `π ∈ S_n`.
#[derive(Clone, Debug)]
pub struct IrrepMatrices {
    pub shape: Partition,
    pub n: usize,
    // indexed by Permutation::rank
    matrices: Vec<DMatrix<f64>>,
}

impl IrrepMatrices {
    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn get(&self, pi: &Permutation) -> &DMatrix<f64> {
        &self.matrices[pi.rank()]
    }

    /// Matrices in lexicographic order of permutations.
    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.matrices
    }

    pub fn character(&self, pi: &Permutation) -> f64 {
        self.get(pi).trace()
    }
}

/// Extend the generators to all of `S_n` by breadth-first composition
/// `D(s_i ∘ π) = D(s_i) D(π)`.
pub fn irrep_matrices(shape: &Partition, n: usize) -> Result<IrrepMatrices> {
    if shape.n() != n {
        return Err(Error::InvalidArgument(format!("shape {shape} does not partition {n}")));
    }
    if n > MAX_SYMMETRIC_DEGREE {
        return Err(Error::SizeLimit { dim: n, limit: MAX_SYMMETRIC_DEGREE });
    }
    let tableaux = standard_tableaux(shape);
    let dim = tableaux.len();
    let gens: Vec<(Permutation, DMatrix<f64>)> = (1..n)
        .map(|i| (Permutation::adjacent(n, i).unwrap(), generator_matrix(&tableaux, i)))
        .collect();
    let total: usize = (1..=n).product();
    let mut slots: Vec<Option<DMatrix<f64>>> = vec![None; total];
    let id = Permutation::identity(n);
    slots[id.rank()] = Some(DMatrix::identity(dim, dim));
    let mut queue = std::collections::VecDeque::from([id]);
    while let Some(pi) = queue.pop_front() {
        let current = slots[pi.rank()].clone().unwrap();
        for (s, gm) in &gens {
            let next = s.compose(&pi);
            let r = next.rank();
            if slots[r].is_none() {
                slots[r] = Some(gm * &current);
                queue.push_back(next);
            }
        }
    }
    Ok(IrrepMatrices { shape: shape.clone(), n, matrices: slots.into_iter().map(Option::unwrap).collect() })
}

/// Dense matrix unit `P^λ_{y,y0}` on the `d²ⁿ`-dimensional Liouville space.
pub fn matrix_unit(shape: &Partition, y: usize, y0: usize, d: usize, n: usize) -> Result<CMatrix> {
    let dim = liouville_dim(d, n)?;
    let irreps = irrep_matrices(shape, n)?;
    let dl = irreps.dim();
    if y >= dl || y0 >= dl {
        return Err(Error::IndexOutOfRange(format!("tableau index ({y}, {y0}) for shape {shape} of dimension {dl}")));
    }
    let norm = dl as f64 / irreps.matrices.len() as f64;
    let mut out = CMatrix::zeros(dim, dim);
    for (pi, dm) in Permutation::all(n).iter().zip(&irreps.matrices) {
        let c = dm[(y, y0)] * norm;
        if c == 0.0 {
            continue;
        }
        for (k, img) in permutation_images(pi, d * d, n).into_iter().enumerate() {
            out[(img, k)] += Complex64::new(c, 0.0);
        }
    }
    Ok(out)
}

/// Label of one super-Schur basis column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnLabel {
    pub lambda: Partition,
    /// Standard tableau index (protected factor).
    pub y: usize,
    pub weight: WeightVector,
    /// Index within the weight class.
    pub w_within: usize,
    /// Running multiplicity index within the sector, `0..m_λ`.
    pub w_index: usize,
}

/// Layout of one `λ` sector: columns `offset + y·m_λ + w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sector {
    pub shape: Partition,
    /// `d_λ`, number of standard tableaux.
    pub syt_dim: usize,
    /// `m_λ`, number of semistandard tableaux over `d²` letters.
    pub weyl_dim: usize,
    pub offset: usize,
}

impl Sector {
    pub fn size(&self) -> usize {
        self.syt_dim * self.weyl_dim
    }

    pub fn column(&self, y: usize, w: usize) -> usize {
        self.offset + y * self.weyl_dim + w
    }
}

/// Real sparse column over letter-string indices, sorted by index.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseColumn {
    pub entries: Vec<(usize, f64)>,
}

/// A `y0`-sector vector in the local coordinates of its weight class.
struct ReferenceVector {
    key: Vec<usize>,
    members: Vec<usize>,
    within: usize,
    amplitudes: Vec<f64>,
}

/// The labeled orthonormal super-Schur basis.
#[derive(Debug)]
pub struct SuperSchurBasis {
    d: usize,
    n: usize,
    sectors: Vec<Sector>,
    labels: Vec<ColumnLabel>,
    columns: Vec<SparseColumn>,
    irreps: Vec<IrrepMatrices>,
    unitary: OnceLock<CMatrix>,
}

/// Build the super-Schur basis for `n` qudits of dimension `d`.
pub fn super_schur_basis(d: usize, n: usize) -> Result<SuperSchurBasis> {
    let dim = liouville_dim(d, n)?;
    if n > MAX_SYMMETRIC_DEGREE {
        return Err(Error::SizeLimit { dim: n, limit: MAX_SYMMETRIC_DEGREE });
    }
    let q = d * d;
    let perms = Permutation::all(n);
    let images: Vec<Vec<usize>> = perms.iter().map(|pi| permutation_images(pi, q, n)).collect();

    // weight classes keyed by sorted letter string; members in lex order
    let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for k in 0..dim {
        let mut letters = index_to_letters(k, q, n);
        letters.sort_unstable();
        classes.entry(letters).or_default().push(k);
    }

    let mut sectors = Vec::new();
    let mut labels = Vec::with_capacity(dim);
    let mut columns = Vec::with_capacity(dim);
    let mut irreps = Vec::new();
    let mut offset = 0;

    for shape in partitions(n, n.min(q)) {
        let irr = irrep_matrices(&shape, n)?;
        let dl = irr.dim();
        let ml = weyl_dimension(&shape, q) as usize;
        let kostka: BTreeMap<Vec<usize>, usize> =
            weight_vectors(&shape, q).into_iter().map(|(w, m)| (w.sorted_letters(), m as usize)).collect();
        let norm = dl as f64 / perms.len() as f64;
        let coeffs = |y: usize| -> Vec<f64> { irr.matrices.iter().map(|m| m[(y, 0)] * norm).collect() };
        let c0 = coeffs(0);

        // reference sector, local coordinates per weight class
        let mut reference: Vec<ReferenceVector> = Vec::new();
        for (key, members) in &classes {
            let expected = kostka.get(key).copied().unwrap_or(0);
            if expected == 0 {
                continue;
            }
            let local = |g: usize| members.binary_search(&g).expect("permutation preserves weight");
            let mut accepted: Vec<Vec<f64>> = Vec::new();
            for &s in members {
                let mut v = vec![0.0; members.len()];
                for (c, img) in c0.iter().zip(&images) {
                    if *c != 0.0 {
                        v[local(img[s])] += c;
                    }
                }
                for _ in 0..2 {
                    for a in &accepted {
                        let dot: f64 = a.iter().zip(&v).map(|(x, y)| x * y).sum();
                        v.iter_mut().zip(a).for_each(|(x, y)| *x -= dot * y);
                    }
                }
                let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if nrm > RANK_TOL {
                    v.iter_mut().for_each(|x| *x /= nrm);
                    accepted.push(v);
                }
            }
            if accepted.len() != expected {
                return Err(Error::InternalConsistency(format!(
                    "sector {shape}, weight {key:?}: rank {} but Kostka number {expected}",
                    accepted.len()
                )));
            }
            for (within, mut v) in accepted.into_iter().enumerate() {
                if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
                    if *first < 0.0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                }
                reference.push(ReferenceVector { key: key.clone(), members: members.clone(), within, amplitudes: v });
            }
        }
        if reference.len() != ml {
            return Err(Error::InternalConsistency(format!(
                "sector {shape}: {} reference vectors, expected {ml}",
                reference.len()
            )));
        }

        for y in 0..dl {
            let cy = if y == 0 { None } else { Some(coeffs(y)) };
            for (w_index, ReferenceVector { key, members, within, amplitudes: v }) in reference.iter().enumerate() {
                let mut entries: Vec<(usize, f64)> = match &cy {
                    None => members.iter().zip(v).map(|(&g, &x)| (g, x)).collect(),
                    Some(cy) => {
                        let mut out = vec![0.0; members.len()];
                        let local = |g: usize| members.binary_search(&g).unwrap();
                        for (c, img) in cy.iter().zip(&images) {
                            if *c == 0.0 {
                                continue;
                            }
                            for (&g, &x) in members.iter().zip(v) {
                                out[local(img[g])] += c * x;
                            }
                        }
                        members.iter().zip(out).map(|(&g, x)| (g, x)).collect()
                    }
                };
                entries.retain(|(_, x)| x.abs() > 1e-15);
                columns.push(SparseColumn { entries });
                labels.push(ColumnLabel {
                    lambda: shape.clone(),
                    y,
                    weight: WeightVector::of_letters(key, q),
                    w_within: *within,
                    w_index,
                });
            }
        }
        sectors.push(Sector { shape: shape.clone(), syt_dim: dl, weyl_dim: ml, offset });
        offset += dl * ml;
        irreps.push(irr);
    }

    if offset != dim {
        return Err(Error::InternalConsistency(format!("{offset} columns for Liouville dimension {dim}")));
    }
    let basis = SuperSchurBasis { d, n, sectors, labels, columns, irreps, unitary: OnceLock::new() };
    let err = basis.orthonormality_error();
    if err > UNITARITY_TOL {
        return Err(Error::InternalConsistency(format!("basis orthonormality error {err:e}")));
    }
    Ok(basis)
}

impl SuperSchurBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn sector(&self, shape: &Partition) -> Option<&Sector> {
        self.sectors.iter().find(|s| &s.shape == shape)
    }

    pub fn labels(&self) -> &[ColumnLabel] {
        &self.labels
    }

    pub fn columns(&self) -> &[SparseColumn] {
        &self.columns
    }

    /// `D^λ` for the sector at position `idx` in [`Self::sectors`].
    pub fn irrep(&self, idx: usize) -> &IrrepMatrices {
        &self.irreps[idx]
    }

    /// Dense unitary whose columns are the basis vectors.
    pub fn unitary(&self) -> &CMatrix {
        self.unitary.get_or_init(|| {
            let dim = self.dim();
            let mut u = CMatrix::zeros(dim, dim);
            for (j, col) in self.columns.iter().enumerate() {
                for &(i, x) in &col.entries {
                    u[(i, j)] = Complex64::new(x, 0.0);
                }
            }
            u
        })
    }

    /// `max |U†U - I|`, computed per weight class (columns of different
    /// weights have disjoint support).
    pub fn orthonormality_error(&self) -> f64 {
        let mut by_weight: BTreeMap<&WeightVector, Vec<usize>> = BTreeMap::new();
        for (j, l) in self.labels.iter().enumerate() {
            by_weight.entry(&l.weight).or_default().push(j);
        }
        let mut dense = vec![0.0; self.dim()];
        let mut worst: f64 = 0.0;
        for cols in by_weight.values() {
            for (a, &ja) in cols.iter().enumerate() {
                for &(i, x) in &self.columns[ja].entries {
                    dense[i] = x;
                }
                for &jb in &cols[a..] {
                    let dot: f64 = self.columns[jb].entries.iter().map(|&(i, x)| dense[i] * x).sum();
                    let want = if ja == jb { 1.0 } else { 0.0 };
                    worst = worst.max((dot - want).abs());
                }
                for &(i, _) in &self.columns[ja].entries {
                    dense[i] = 0.0;
                }
            }
        }
        worst
    }

    /// Column permutation from the `(λ, Y, W)` layout to `(λ, W, Y)`:
    /// entry `k` of the result is the `(λ, Y, W)` column placed at position `k`.
    pub fn weyl_major_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.dim());
        for s in &self.sectors {
            for w in 0..s.weyl_dim {
                for y in 0..s.syt_dim {
                    order.push(s.column(y, w));
                }
            }
        }
        order
    }

    /// `⊕_λ D^λ(π) ⊗ I_{m_λ}` in the `(λ, Y, W)` layout.
    pub fn predicted_permutation(&self, pi: &Permutation) -> CMatrix {
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for (s, irr) in self.sectors.iter().zip(&self.irreps) {
            let dm = irr.get(pi);
            for y in 0..s.syt_dim {
                for y2 in 0..s.syt_dim {
                    for w in 0..s.weyl_dim {
                        out[(s.column(y, w), s.column(y2, w))] = Complex64::new(dm[(y, y2)], 0.0);
                    }
                }
            }
        }
        out
    }
}

/// `U† 𝒮_π U` with its deviation from `⊕_λ D^λ(π) ⊗ I_{m_λ}`.
#[derive(Clone, Debug)]
pub struct PermutationInSchur {
    pub matrix: CMatrix,
    pub deviation: f64,
}

pub fn permutation_in_schur(pi: &Permutation, basis: &SuperSchurBasis) -> Result<PermutationInSchur> {
    if pi.len() != basis.n {
        return Err(Error::DimensionMismatch(format!("permutation of {} items for n={}", pi.len(), basis.n)));
    }
    let images = permutation_images(pi, basis.d * basis.d, basis.n);
    let u = basis.unitary();
    let dim = basis.dim();
    // rows of 𝒮_π U are rows of U moved by the image map
    let mut su = CMatrix::zeros(dim, dim);
    for (k, &img) in images.iter().enumerate() {
        su.set_row(img, &u.row(k));
    }
    let matrix = u.adjoint() * su;
    let deviation = max_abs(&(&matrix - basis.predicted_permutation(pi)));
    Ok(PermutationInSchur { matrix, deviation })
}
