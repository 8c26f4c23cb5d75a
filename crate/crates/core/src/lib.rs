//! Permutation-symmetric structure of open quantum systems on `n` qudits.
//!
//! The Liouville space of `n` qudits of dimension `d` is treated as the
//! tensor power `(ℂ^{d²})^{⊗n}` through an orthonormal operator basis. Qudit
//! permutations act on it by permuting letters, and Schur-Weyl duality splits
//! it into sectors `𝒴^λ ⊗ 𝒲^λ` labelled by partitions `λ` of `n`. A
//! permutation-symmetric channel or Lindbladian acts as the identity on every
//! `𝒴^λ`; sectors with `dim 𝒴^λ ≥ 2` are decoherence-free subsystems.
//!
//! Modules, bottom up:
//!
//! - [`combinatorics`]: partitions, standard tableaux, Kostka multiplicities
//! - [`liouville`]: operator basis, Hilbert-Schmidt product, permutation reps
//! - [`schur`]: Young's orthogonal form and the super-Schur basis
//! - [`channels`]: Kraus channels, Lindbladians, symmetry certificates
//! - [`blockdiag`]: Schur-frame block structure, DFS reports, blockwise `exp`
//! - [`io`]: channel-spec and basis file formats

pub mod blockdiag;
pub mod channels;
pub mod combinatorics;
pub mod error;
pub mod io;
pub mod linalg;
pub mod liouville;
pub mod permutation;
pub mod schur;

pub use blockdiag::{
    blockwise_exp, decompose, dfs_report, protection_check, to_schur_frame, BlockDecomposition, DfsReport, DfsSector,
    SectorBlocks,
};
pub use channels::{
    classify_kraus_symmetry, classify_lindblad_symmetry, kraus_superop, lindblad_superop, psd_sqrt,
    symmetrize_local_kraus, ChannelModel, ExampleChannel, KrausChannel, Lindbladian, LocalOperator, SuperOperatorKind,
    SuperOperatorMatrix, Symmetry, SymmetryCertificate,
};
pub use combinatorics::{
    count_irreps, count_partitions_k_rows, partitions, standard_tableaux, syt_dimension, weight_vectors,
    weyl_dimension, Partition, StandardTableau, WeightVector,
};
pub use error::{Error, Result};
pub use liouville::{
    devectorize, hs_inner, operator_basis, perm_rep, vectorize, CMatrix, CVector, OperatorBasis, PermutationRep,
    QuditOperator,
};
pub use permutation::Permutation;
pub use schur::{
    irrep_matrices, matrix_unit, permutation_in_schur, super_schur_basis, young_orthogonal_generator, IrrepMatrices,
    SuperSchurBasis,
};
