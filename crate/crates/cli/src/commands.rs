use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use schur_dfs::channels::{superop_commutator_norm, ChannelModel, CLOSURE_TOL};
use schur_dfs::combinatorics::count_partitions_k_rows;
use schur_dfs::io::{parse_channel_spec, write_basis, ChannelSpec, SpecSource};
use schur_dfs::schur::UNITARITY_TOL;
use schur_dfs::{
    blockwise_exp, count_irreps, decompose as decompose_superop, dfs_report, operator_basis, partitions,
    protection_check, super_schur_basis, syt_dimension, weyl_dimension, BlockDecomposition, Error, SuperOperatorKind,
};

use crate::report::*;
use crate::Failure;

pub const PROTECTION_TRIALS: usize = 8;
pub const DENSE_TOL: f64 = 1e-8;

fn max_abs(m: &schur_dfs::CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--tol must be positive, got {tol}")))
    }
}

fn parts(p: &schur_dfs::Partition) -> String {
    p.to_string()
}

pub fn decompose(n: usize, d: usize, out: Option<&Path>) -> Result<(), Failure> {
    if n < 1 || d < 2 {
        return Err(Failure::Usage(format!("need --n >= 1 and --d >= 2, got n={n} d={d}")));
    }
    let q = d * d;
    let expected_total = (q as u64)
        .checked_pow(n as u32)
        .filter(|_| n <= 20)
        .ok_or_else(|| Failure::Input(format!("(d^2)^n overflows for n={n} d={d}")))?;
    let sectors: Vec<SectorRow> = partitions(n, q)
        .into_iter()
        .map(|lambda| {
            let syt_dim = syt_dimension(&lambda);
            let weyl_dim = weyl_dimension(&lambda, q);
            SectorRow { lambda, syt_dim, weyl_dim, product: syt_dim * weyl_dim }
        })
        .collect();
    let total = sectors.iter().map(|s| s.product).sum();
    let report = DecomposeReport {
        n,
        d,
        total,
        expected_total,
        irrep_count: count_irreps(n, d),
        partitions_by_rows: (1..=n.min(q)).map(|k| RowCount { rows: k, count: count_partitions_k_rows(n, k) }).collect(),
        sectors,
    };

    println!("n={n} d={d}: Liouville space (C^{q})^{n}");
    println!("{:<16} {:>10} {:>12} {:>14}", "lambda", "syt_dim", "weyl_dim", "product");
    for s in &report.sectors {
        println!("{:<16} {:>10} {:>12} {:>14}", parts(&s.lambda), s.syt_dim, s.weyl_dim, s.product);
    }
    let status = if total == expected_total { "ok" } else { "MISMATCH" };
    println!("total {total} (expected (d^2)^n = {expected_total}) {status}");
    let counts: Vec<String> = report.partitions_by_rows.iter().map(|r| format!("p_{}({n})={}", r.rows, r.count)).collect();
    println!("irrep count {}: {}", report.irrep_count, counts.join(" "));
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    if total != expected_total {
        return Err(Failure::Internal(format!("dimension sum {total} != {expected_total}")));
    }
    Ok(())
}

pub fn schur_basis(n: usize, d: usize, out: &Path) -> Result<(), Failure> {
    if n < 1 || d < 2 {
        return Err(Failure::Usage(format!("need --n >= 1 and --d >= 2, got n={n} d={d}")));
    }
    let start = Instant::now();
    let basis = super_schur_basis(d, n)?;
    let built = start.elapsed();
    let err = basis.orthonormality_error();
    if err >= UNITARITY_TOL {
        return Err(Failure::Internal(format!("basis orthonormality error {err:e} >= {UNITARITY_TOL:e}")));
    }
    std::fs::write(out, write_basis(&basis)).map_err(|e| Failure::Input(format!("cannot write {}: {e}", out.display())))?;
    println!("super-Schur basis d={d} n={n}: {} columns", basis.dim());
    for s in basis.sectors() {
        println!("  lambda={:<12} d_lambda={:<4} m_lambda={:<6} columns {}..{}", parts(&s.shape), s.syt_dim, s.weyl_dim, s.offset, s.offset + s.size());
    }
    println!("orthonormality error {err:.3e} (tol {UNITARITY_TOL:e})");
    println!("wrote {} in {:.3}s", out.display(), built.as_secs_f64());
    Ok(())
}

fn load_spec(path: &Path) -> Result<ChannelSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_channel_spec(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn echo(spec: &ChannelSpec, model: &ChannelModel) -> InputEcho {
    let builder = match &spec.source {
        SpecSource::Builder(b) => Some(b.clone()),
        SpecSource::Explicit { .. } => None,
    };
    InputEcho {
        d: spec.d,
        n: spec.n,
        kind: match spec.kind {
            SuperOperatorKind::Channel => "kraus",
            SuperOperatorKind::Generator => "lindblad",
        },
        normalization_note: builder.as_ref().and_then(|b| b.normalization_note()),
        builder,
        operator_count: model.operators().len(),
    }
}

fn echo_line(input: &InputEcho) -> String {
    let source = match &input.builder {
        Some(b) => serde_json::to_string(b).unwrap_or_default(),
        None => "explicit operators".into(),
    };
    format!("input: d={} n={} kind={} operators={} ({source})", input.d, input.n, input.kind, input.operator_count)
}

fn block_rows(decomp: &BlockDecomposition) -> Vec<BlockRow> {
    decomp
        .sectors
        .iter()
        .map(|s| BlockRow {
            lambda: s.shape.clone(),
            protected_dim: s.syt_dim,
            noisy_dim: s.weyl_dim,
            block_count: s.blocks.len(),
            twin_deviation: Measured::below(s.twin_deviation, decomp.tol),
        })
        .collect()
}

pub fn analyze(spec_path: &Path, tol: f64, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    check_tol(tol)?;
    let t0 = Instant::now();
    let spec = load_spec(spec_path)?;
    let model = spec.build()?;
    let input = echo(&spec, &model);
    let t_parse = t0.elapsed();

    let obasis = operator_basis(spec.d, spec.n)?;
    let gamma = model.superop(&obasis)?;
    let trace_error = match &model {
        ChannelModel::Kraus(k) => k.closure_error(),
        ChannelModel::Lindblad(_) => gamma.identity_row_error(),
    };
    let cert = model.classify()?;
    let commutator = superop_commutator_norm(&gamma, &obasis)?;
    let t_classify = t0.elapsed();

    let basis = super_schur_basis(spec.d, spec.n)?;
    let ortho = basis.orthonormality_error();
    if ortho >= UNITARITY_TOL {
        return Err(Failure::Internal(format!("basis orthonormality error {ortho:e}")));
    }
    let decomp = decompose_superop(&gamma, &basis, tol)?;
    let dfs = dfs_report(&decomp, &cert);
    let protection = match protection_check(&decomp, PROTECTION_TRIALS, seed) {
        Ok(dev) => Some(Measured::below(dev, tol)),
        Err(Error::NoProtectedSector) => None,
        Err(e) => return Err(e.into()),
    };
    let t_total = t0.elapsed();

    let report = AnalysisReport {
        input,
        trace_preservation_error: Measured::below(trace_error, CLOSURE_TOL),
        certificate: CertificateReport::new(&cert),
        superoperator_commutator_norm: Measured::below(commutator, schur_dfs::channels::COMMUTATOR_TOL),
        basis_orthonormality_error: Measured::below(ortho, UNITARITY_TOL),
        blocks: block_rows(&decomp),
        leakage: Measured::below(decomp.leakage, tol),
        dfs,
        protection: ProtectionReport { trials: PROTECTION_TRIALS, seed, max_deviation: protection },
    };

    println!("{}", echo_line(&report.input));
    if let Some(note) = report.input.normalization_note {
        println!("normalization: {note}");
    }
    let c = &report.certificate;
    println!("classification: {}", c.classification);
    println!(
        "  max commutator {:.3e} (tol {:e}), certificate residual {:.3e} (tol {:e}), unitarity error {:.3e}",
        c.max_commutator_norm.value,
        c.max_commutator_norm.tol,
        c.max_residual.value,
        c.max_residual.tol,
        c.max_unitarity_error.value
    );
    if let Some(h) = c.hamiltonian_residual {
        println!("  hamiltonian residual {:.3e} (tol {:e})", h.value, h.tol);
    }
    println!("trace preservation error {:.3e} (tol {:e})", trace_error, CLOSURE_TOL);
    println!("superoperator commutator norm {:.3e}", commutator);
    println!("blocks (tol {tol:e}):");
    println!("  {:<12} {:>8} {:>8} {:>7} {:>14}  dfs", "lambda", "d_lambda", "m_lambda", "blocks", "twin_dev");
    for (b, s) in report.blocks.iter().zip(&report.dfs.sectors) {
        println!(
            "  {:<12} {:>8} {:>8} {:>7} {:>14.3e}  {}",
            parts(&b.lambda),
            b.protected_dim,
            b.noisy_dim,
            b.block_count,
            b.twin_deviation.value,
            if s.flagged { "yes" } else { "-" }
        );
    }
    println!("leakage {:.3e} (tol {tol:e})", decomp.leakage);
    match protection {
        Some(m) => println!("protection check: max deviation {:.3e} over {PROTECTION_TRIALS} trials (seed {seed})", m.value),
        None => println!("protection check: no sector with d_lambda >= 2"),
    }
    println!(
        "timings: parse {:.3}s, classify {:.3}s, total {:.3}s",
        t_parse.as_secs_f64(),
        (t_classify - t_parse).as_secs_f64(),
        t_total.as_secs_f64()
    );
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    Ok(())
}

pub fn evolve(spec_path: &Path, times: &[f64], tol: f64, verify_dense: bool, out: Option<&Path>) -> Result<(), Failure> {
    check_tol(tol)?;
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(Failure::Usage(format!("time {t} is not finite")));
    }
    let t0 = Instant::now();
    let spec = load_spec(spec_path)?;
    if spec.kind != SuperOperatorKind::Generator {
        return Err(Failure::Input(format!("{}: evolve needs kind \"lindblad\"", spec_path.display())));
    }
    let model = spec.build()?;
    let input = echo(&spec, &model);
    let gamma = model.superop(&operator_basis(spec.d, spec.n)?)?;
    let basis = super_schur_basis(spec.d, spec.n)?;
    let decomp = decompose_superop(&gamma, &basis, tol)?;
    if decomp.leakage > tol {
        return Err(Failure::Invariant(format!(
            "generator is not block diagonal in the Schur frame: leakage {:.3e} > tol {tol:e}; refusing blockwise evolution",
            decomp.leakage
        )));
    }

    println!("{}", echo_line(&input));
    println!("leakage {:.3e} (tol {tol:e})", decomp.leakage);
    let mut slices = Vec::with_capacity(times.len());
    let mut worst_dense: f64 = 0.0;
    for &t in times {
        let evolved = blockwise_exp(&decomp, t)?;
        let sectors: Vec<BlockNorms> = evolved
            .sectors
            .iter()
            .map(|s| BlockNorms {
                lambda: s.shape.clone(),
                block_norms: s.blocks.iter().map(|b| b.norm()).collect(),
                twin_deviation: s.twin_deviation,
            })
            .collect();
        let dense_deviation = if verify_dense {
            let dense = (&gamma.matrix * Complex64::new(t, 0.0)).exp();
            let dev = max_abs(&(evolved.reassemble(&basis)? - dense));
            worst_dense = worst_dense.max(dev);
            Some(Measured::below(dev, DENSE_TOL))
        } else {
            None
        };
        println!("t = {t}");
        for s in &sectors {
            let norms: Vec<String> = s.block_norms.iter().map(|x| format!("{x:.6}")).collect();
            println!("  lambda={:<12} block norms [{}] twin_dev {:.3e}", parts(&s.lambda), norms.join(", "), s.twin_deviation);
        }
        if let Some(m) = dense_deviation {
            println!("  dense deviation {:.3e} (tol {:e})", m.value, m.tol);
        }
        slices.push(TimeSlice { t, sectors, dense_deviation });
    }
    println!("timings: total {:.3}s", t0.elapsed().as_secs_f64());
    let report = EvolveReport { input, leakage: Measured::below(decomp.leakage, tol), times: slices };
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    if worst_dense >= DENSE_TOL {
        return Err(Failure::Internal(format!("blockwise exponential deviates from dense by {worst_dense:e}")));
    }
    Ok(())
}
