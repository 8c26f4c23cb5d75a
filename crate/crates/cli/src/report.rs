//! Machine-readable report documents.

use std::path::Path;

use serde::Serialize;

use crate::Failure;
use schur_dfs::channels::{SymmetryCertificate, CERTIFICATE_TOL, COMMUTATOR_TOL};
use schur_dfs::{DfsReport, ExampleChannel, Partition, Symmetry};

/// A measured number together with the bound it is compared against.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Measured {
    pub value: f64,
    pub tol: f64,
    pub ok: bool,
}

impl Measured {
    pub fn below(value: f64, tol: f64) -> Self {
        Self { value, tol, ok: value < tol }
    }

    pub fn above(value: f64, tol: f64) -> Self {
        Self { value, tol, ok: value > tol }
    }
}

#[derive(Debug, Serialize)]
pub struct SectorRow {
    pub lambda: Partition,
    pub syt_dim: u64,
    pub weyl_dim: u64,
    pub product: u64,
}

#[derive(Debug, Serialize)]
pub struct RowCount {
    pub rows: usize,
    pub count: u64,
}

#[derive(Debug, Serialize)]
pub struct DecomposeReport {
    pub n: usize,
    pub d: usize,
    pub sectors: Vec<SectorRow>,
    pub total: u64,
    pub expected_total: u64,
    pub irrep_count: u64,
    pub partitions_by_rows: Vec<RowCount>,
}

#[derive(Debug, Serialize)]
pub struct InputEcho {
    pub d: usize,
    pub n: usize,
    pub kind: &'static str,
    pub builder: Option<ExampleChannel>,
    pub operator_count: usize,
    pub normalization_note: Option<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct GeneratorRow {
    pub transposition: usize,
    pub commutator_norm: f64,
    pub residual: f64,
    pub unitarity_error: f64,
}

#[derive(Debug, Serialize)]
pub struct CertificateReport {
    pub classification: Symmetry,
    pub max_commutator_norm: Measured,
    pub max_residual: Measured,
    pub max_unitarity_error: Measured,
    pub hamiltonian_residual: Option<Measured>,
    pub generators: Vec<GeneratorRow>,
}

impl CertificateReport {
    pub fn new(cert: &SymmetryCertificate) -> Self {
        Self {
            classification: cert.classification,
            max_commutator_norm: Measured::below(cert.max_commutator_norm(), COMMUTATOR_TOL),
            max_residual: Measured::below(cert.max_residual(), CERTIFICATE_TOL),
            max_unitarity_error: Measured::below(cert.max_unitarity_error(), CERTIFICATE_TOL),
            hamiltonian_residual: cert.hamiltonian_residual.map(|r| Measured::below(r, COMMUTATOR_TOL)),
            generators: cert
                .generators
                .iter()
                .map(|g| GeneratorRow {
                    transposition: g.transposition,
                    commutator_norm: g.commutator_norm,
                    residual: g.residual,
                    unitarity_error: g.unitarity_error,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BlockRow {
    pub lambda: Partition,
    pub protected_dim: usize,
    pub noisy_dim: usize,
    pub block_count: usize,
    pub twin_deviation: Measured,
}

#[derive(Debug, Serialize)]
pub struct ProtectionReport {
    pub trials: usize,
    pub seed: u64,
    /// `None` when no sector has `d_λ ≥ 2`.
    pub max_deviation: Option<Measured>,
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub input: InputEcho,
    /// `max |Σ F†F - I|` for channels; `max` over the trace row for generators.
    pub trace_preservation_error: Measured,
    pub certificate: CertificateReport,
    pub superoperator_commutator_norm: Measured,
    pub basis_orthonormality_error: Measured,
    pub blocks: Vec<BlockRow>,
    pub leakage: Measured,
    pub dfs: DfsReport,
    pub protection: ProtectionReport,
}

#[derive(Debug, Serialize)]
pub struct BlockNorms {
    pub lambda: Partition,
    /// Frobenius norm of each `(λ, Y)` block of `exp(tΓ)`.
    pub block_norms: Vec<f64>,
    pub twin_deviation: f64,
}

#[derive(Debug, Serialize)]
pub struct TimeSlice {
    pub t: f64,
    pub sectors: Vec<BlockNorms>,
    pub dense_deviation: Option<Measured>,
}

#[derive(Debug, Serialize)]
pub struct EvolveReport {
    pub input: InputEcho,
    pub leakage: Measured,
    pub times: Vec<TimeSlice>,
}

#[derive(Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub measured: Vec<(String, Measured)>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub level: &'static str,
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(format!("serialize: {e}")))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}
