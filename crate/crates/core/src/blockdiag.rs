//! Block diagonalization in the super-Schur basis and decoherence-free
//! subsystem reports.
//!
//! In the Schur frame a permutation-symmetric superoperator is
//! `⊕_λ I_{d_λ} ⊗ Γ^λ`: one `m_λ × m_λ` block per standard tableau, all twins
//! equal. The numbers that measure how far a given matrix is from that shape
//! (`leakage` outside the diagonal blocks, `twin_deviation` between copies)
//! are always reported, never thresholded here.
//!
//! Time evolution integrates `ρ̇ = 𝓛ρ`, i.e. `exp(tΓ)` without a factor of `i`.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{SuperOperatorKind, SuperOperatorMatrix, Symmetry, SymmetryCertificate};
use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::liouville::{max_abs, CMatrix};
use crate::linalg::expm;
use crate::schur::SuperSchurBasis;

/// Default tolerance for structure decisions.
pub const DEFAULT_TOL: f64 = 1e-8;

/// `U† Γ U` with rows and columns in `(λ, Y, W)` order.
pub fn to_schur_frame(gamma: &SuperOperatorMatrix, basis: &SuperSchurBasis) -> Result<CMatrix> {
    if gamma.d != basis.d() || gamma.n != basis.n() || gamma.dim() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "superoperator on (d={}, n={}) with Schur basis for (d={}, n={})",
            gamma.d,
            gamma.n,
            basis.d(),
            basis.n()
        )));
    }
    let u = basis.unitary();
    Ok(u.adjoint() * &gamma.matrix * u)
}

/// The `(λ, Y)` diagonal blocks of one sector.
#[derive(Clone, Debug)]
pub struct SectorBlocks {
    pub shape: Partition,
    pub syt_dim: usize,
    pub weyl_dim: usize,
    pub offset: usize,
    /// One `m_λ × m_λ` block per standard tableau.
    pub blocks: Vec<CMatrix>,
    /// `max_{Y,Y'} max |block(Y) - block(Y')|`.
    pub twin_deviation: f64,
}

#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub d: usize,
    pub n: usize,
    pub kind: SuperOperatorKind,
    pub tol: f64,
    /// Full matrix in the Schur frame.
    pub frame: CMatrix,
    pub sectors: Vec<SectorBlocks>,
    /// Largest entry outside every `(λ, Y)` diagonal block.
    pub leakage: f64,
}

fn twin_deviation(blocks: &[CMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for (a, ba) in blocks.iter().enumerate() {
        for bb in &blocks[a + 1..] {
            worst = worst.max(max_abs(&(ba - bb)));
        }
    }
    worst
}

fn block_ids(basis: &SuperSchurBasis) -> Vec<usize> {
    let mut ids = Vec::with_capacity(basis.dim());
    let mut next = 0;
    for s in basis.sectors() {
        for _ in 0..s.syt_dim {
            ids.extend(std::iter::repeat_n(next, s.weyl_dim));
            next += 1;
        }
    }
    ids
}

fn split_frame(frame: &CMatrix, basis: &SuperSchurBasis) -> (Vec<SectorBlocks>, f64) {
    let ids = block_ids(basis);
    let mut leakage: f64 = 0.0;
    for c in 0..frame.ncols() {
        for r in 0..frame.nrows() {
            if ids[r] != ids[c] {
                leakage = leakage.max(frame[(r, c)].norm());
            }
        }
    }
    let sectors = basis
        .sectors()
        .iter()
        .map(|s| {
            let blocks: Vec<CMatrix> = (0..s.syt_dim)
                .map(|y| frame.view((s.column(y, 0), s.column(y, 0)), (s.weyl_dim, s.weyl_dim)).into_owned())
                .collect();
            SectorBlocks {
                shape: s.shape.clone(),
                syt_dim: s.syt_dim,
                weyl_dim: s.weyl_dim,
                offset: s.offset,
                twin_deviation: twin_deviation(&blocks),
                blocks,
            }
        })
        .collect();
    (sectors, leakage)
}

/// Extract the diagonal blocks and the structure diagnostics.
pub fn decompose(gamma: &SuperOperatorMatrix, basis: &SuperSchurBasis, tol: f64) -> Result<BlockDecomposition> {
    let frame = to_schur_frame(gamma, basis)?;
    decompose_frame(frame, gamma.kind, basis, tol)
}

/// As [`decompose`] for a matrix already in the Schur frame.
pub fn decompose_frame(
    frame: CMatrix,
    kind: SuperOperatorKind,
    basis: &SuperSchurBasis,
    tol: f64,
) -> Result<BlockDecomposition> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    if frame.nrows() != basis.dim() || frame.ncols() != basis.dim() {
        return Err(Error::DimensionMismatch(format!("{}x{} frame for basis of size {}", frame.nrows(), frame.ncols(), basis.dim())));
    }
    let (sectors, leakage) = split_frame(&frame, basis);
    Ok(BlockDecomposition { d: basis.d(), n: basis.n(), kind, tol, frame, sectors, leakage })
}

impl BlockDecomposition {
    pub fn max_twin_deviation(&self) -> f64 {
        self.sectors.iter().map(|s| s.twin_deviation).fold(0.0, f64::max)
    }

    pub fn sector(&self, shape: &Partition) -> Option<&SectorBlocks> {
        self.sectors.iter().find(|s| &s.shape == shape)
    }

    /// `⊕_{λ,Y} block(λ, Y)` in the Schur frame.
    pub fn block_diagonal(&self) -> CMatrix {
        let dim = self.sectors.iter().map(|s| s.syt_dim * s.weyl_dim).sum();
        let mut out = CMatrix::zeros(dim, dim);
        for s in &self.sectors {
            for (y, b) in s.blocks.iter().enumerate() {
                let start = s.offset + y * s.weyl_dim;
                out.view_mut((start, start), (s.weyl_dim, s.weyl_dim)).copy_from(b);
            }
        }
        out
    }

    /// `U (⊕ blocks) U†` back in the operator basis.
    pub fn reassemble(&self, basis: &SuperSchurBasis) -> Result<CMatrix> {
        if basis.d() != self.d || basis.n() != self.n {
            return Err(Error::DimensionMismatch("basis does not match decomposition".into()));
        }
        let u = basis.unitary();
        Ok(u * self.block_diagonal() * u.adjoint())
    }
}

/// One sector of a decoherence-free subsystem report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfsSector {
    pub lambda: Partition,
    /// `d_λ`: dimension of the factor the channel acts trivially on.
    pub protected_dim: usize,
    /// `m_λ`: dimension of the factor carrying the noise.
    pub noisy_dim: usize,
    pub twin_deviation: f64,
    /// `protected_dim ≥ 2` and both leakage and twin deviation below `tol`.
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfsReport {
    pub classification: Symmetry,
    pub tol: f64,
    pub leakage: f64,
    pub sectors: Vec<DfsSector>,
}

impl DfsReport {
    pub fn flagged(&self) -> impl Iterator<Item = &DfsSector> {
        self.sectors.iter().filter(|s| s.flagged)
    }
}

pub fn dfs_report(decomp: &BlockDecomposition, cert: &SymmetryCertificate) -> DfsReport {
    let sectors = decomp
        .sectors
        .iter()
        .map(|s| DfsSector {
            lambda: s.shape.clone(),
            protected_dim: s.syt_dim,
            noisy_dim: s.weyl_dim,
            twin_deviation: s.twin_deviation,
            flagged: s.syt_dim >= 2 && decomp.leakage < decomp.tol && s.twin_deviation < decomp.tol,
        })
        .collect();
    DfsReport { classification: cert.classification, tol: decomp.tol, leakage: decomp.leakage, sectors }
}

/// `exp(t·block)` for every `(λ, Y)` block of a generator.
///
/// Refuses when the generator leaks outside its blocks by more than the
/// decomposition tolerance.
pub fn blockwise_exp(decomp: &BlockDecomposition, t: f64) -> Result<BlockDecomposition> {
    if decomp.kind != SuperOperatorKind::Generator {
        return Err(Error::InvalidArgument("blockwise exponential needs a generator".into()));
    }
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time {t} is not finite")));
    }
    if decomp.leakage > decomp.tol {
        return Err(Error::StructureViolation { leakage: decomp.leakage, tol: decomp.tol });
    }
    let scale = Complex64::new(t, 0.0);
    let sectors: Vec<SectorBlocks> = decomp
        .sectors
        .iter()
        .map(|s| {
            let blocks: Vec<CMatrix> = s.blocks.iter().map(|b| expm(&(b * scale))).collect();
            SectorBlocks { twin_deviation: twin_deviation(&blocks), blocks, ..s.clone() }
        })
        .collect();
    let mut out = BlockDecomposition {
        d: decomp.d,
        n: decomp.n,
        kind: SuperOperatorKind::Channel,
        tol: decomp.tol,
        frame: CMatrix::zeros(0, 0),
        sectors,
        leakage: 0.0,
    };
    out.frame = out.block_diagonal();
    Ok(out)
}

/// Check that every tableau row of every sector with `d_λ ≥ 2` is transformed
/// by the same map.
///
/// For random coefficient matrices `C` (rows `Y`, columns `W`) placed in the
/// sector, the frame matrix must produce `C·Aᵀ` in the sector and nothing
/// elsewhere, with `A` the block of the first tableau. Returns the largest
/// deviation over trials and sectors.
pub fn protection_check(decomp: &BlockDecomposition, trials: usize, seed: u64) -> Result<f64> {
    let eligible: Vec<&SectorBlocks> = decomp.sectors.iter().filter(|s| s.syt_dim >= 2).collect();
    if eligible.is_empty() {
        return Err(Error::NoProtectedSector);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = decomp.frame.nrows();
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        for s in &eligible {
            let (dl, ml) = (s.syt_dim, s.weyl_dim);
            let coeffs = CMatrix::from_fn(dl, ml, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let mut x = DVector::zeros(dim);
            for y in 0..dl {
                for w in 0..ml {
                    x[s.offset + y * ml + w] = coeffs[(y, w)];
                }
            }
            let out = &decomp.frame * x;
            let predicted = &coeffs * s.blocks[0].transpose();
            let mut expected = DVector::zeros(dim);
            for y in 0..dl {
                for w in 0..ml {
                    expected[s.offset + y * ml + w] = predicted[(y, w)];
                }
            }
            let dev = (out - expected).iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}
