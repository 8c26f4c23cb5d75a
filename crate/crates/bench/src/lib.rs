//! Benchmark fixtures shared by the `pipeline` bench.

use schur_dfs::blockdiag::DEFAULT_TOL;
use schur_dfs::{decompose, operator_basis, super_schur_basis, BlockDecomposition, ExampleChannel, SuperOperatorMatrix, SuperSchurBasis};

/// Weakly symmetric local-decay Lindbladian on `n` qubits, its super-Schur
/// basis and block decomposition.
pub fn local_decay_fixture(n: usize) -> (SuperOperatorMatrix, SuperSchurBasis, BlockDecomposition) {
    let model = ExampleChannel::LocalDecay { gamma1: 1.0, h_x: 1.0, j: 1.0 }.build(n).expect("valid example");
    let gamma = model.superop(&operator_basis(2, n).expect("size guard")).expect("superoperator");
    let basis = super_schur_basis(2, n).expect("basis");
    let decomp = decompose(&gamma, &basis, DEFAULT_TOL).expect("decomposition");
    (gamma, basis, decomp)
}
