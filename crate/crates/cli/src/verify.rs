//! Built-in invariant suites for `schur-dfs verify`.

use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use schur_dfs::blockdiag::{decompose_frame, DEFAULT_TOL};
use schur_dfs::channels::ChannelModel;
use schur_dfs::combinatorics::WeightVector;
use schur_dfs::liouville::letters_to_index;
use schur_dfs::{
    blockwise_exp, decompose, operator_basis, partitions, permutation_in_schur, protection_check, super_schur_basis,
    syt_dimension, weyl_dimension, CMatrix, ExampleChannel, Partition, Permutation, SuperOperatorKind,
    SuperSchurBasis, Symmetry,
};

use crate::report::{write_json, Measured, SuiteResult, VerifyReport};
use crate::{Failure, Level};

type Measurements = Vec<(String, Measured)>;
type SuiteOutcome = Result<Measurements, schur_dfs::Error>;

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Example channels with the symmetry they are expected to have.
pub fn example_table() -> Vec<(ExampleChannel, Symmetry)> {
    let mut v = Vec::new();
    for p in [0.1, 0.5, 0.9] {
        v.push((ExampleChannel::CollectiveDamping { p }, Symmetry::Strong));
        v.push((ExampleChannel::SymmetrizedDamping { p }, Symmetry::Strong));
        v.push((ExampleChannel::SingleQubitDamping { p }, Symmetry::Weak));
        v.push((ExampleChannel::IndependentDamping { p }, Symmetry::Weak));
        v.push((ExampleChannel::FirstQubitDamping { p }, Symmetry::None));
    }
    for g in [0.5, 1.0] {
        v.push((ExampleChannel::LocalDecay { gamma1: g, h_x: 1.0, j: 1.0 }, Symmetry::Weak));
        v.push((ExampleChannel::PairDecay { gamma2: g, h_x: 1.0, j: 1.0 }, Symmetry::Weak));
        v.push((ExampleChannel::CollectiveDecay { gamma3: g, gamma4: g, gamma5: g, h_x: 1.0, j: 1.0 }, Symmetry::Strong));
    }
    v
}

fn sizes(level: Level) -> Vec<(usize, usize)> {
    let mut v = vec![(2, 1), (2, 2), (2, 3)];
    if level == Level::Full {
        v.extend([(2, 4), (3, 2)]);
    }
    v
}

fn qubit_counts(level: Level) -> Vec<usize> {
    match level {
        Level::Fast => vec![3],
        Level::Full => vec![3, 4],
    }
}

fn dimension_sums() -> SuiteOutcome {
    let mut worst = 0u64;
    for n in 1..=6 {
        for d in 1..=3usize {
            let q = d * d;
            let sum: u64 = partitions(n, q).iter().map(|p| syt_dimension(p) * weyl_dimension(p, q)).sum();
            worst = worst.max(sum.abs_diff((q as u64).pow(n as u32)));
        }
    }
    Ok(vec![("max |sum d_lambda m_lambda - (d^2)^n|".into(), Measured::below(worst as f64, 0.5))])
}

fn unitarity(level: Level, bases: &mut Vec<SuperSchurBasis>) -> SuiteOutcome {
    let mut out = Vec::new();
    for (d, n) in sizes(level) {
        let basis = super_schur_basis(d, n)?;
        out.push((format!("d={d} n={n} max|U^dag U - I|"), Measured::below(basis.orthonormality_error(), 1e-10)));
        bases.push(basis);
    }
    Ok(out)
}

fn equivariance(bases: &[SuperSchurBasis]) -> SuiteOutcome {
    let mut out = Vec::new();
    for basis in bases {
        let n = basis.n();
        let mut worst: f64 = 0.0;
        for i in 1..n {
            worst = worst.max(permutation_in_schur(&Permutation::adjacent(n, i)?, basis)?.deviation);
        }
        out.push((format!("d={} n={n} max|U^dag S U - (+) D(x)I|", basis.d()), Measured::below(worst, 1e-10)));
    }
    Ok(out)
}

/// Distance from `√(2/3)|112⟩ − √(1/6)|121⟩ − √(1/6)|211⟩` to the closest
/// `{2,1}` column of weight `(0,2,1,0)`, up to sign.
pub fn reference_vector_deviation(basis: &SuperSchurBasis) -> f64 {
    let target = [
        (letters_to_index(&[1, 1, 2], 4), (2.0f64 / 3.0).sqrt()),
        (letters_to_index(&[1, 2, 1], 4), -(1.0f64 / 6.0).sqrt()),
        (letters_to_index(&[2, 1, 1], 4), -(1.0f64 / 6.0).sqrt()),
    ];
    let lambda = Partition::new(vec![2, 1]).expect("valid shape");
    let weight = WeightVector::new(vec![0, 2, 1, 0]);
    let mut best = f64::INFINITY;
    for (label, col) in basis.labels().iter().zip(basis.columns()) {
        if label.lambda != lambda || label.weight != weight {
            continue;
        }
        for sign in [1.0, -1.0] {
            let mut dense = vec![0.0; basis.dim()];
            for &(i, x) in &col.entries {
                dense[i] = sign * x;
            }
            for &(i, x) in &target {
                dense[i] -= x;
            }
            best = best.min(dense.iter().map(|x| x.abs()).fold(0.0, f64::max));
        }
    }
    best
}

fn reference_vector() -> SuiteOutcome {
    let basis = super_schur_basis(2, 3)?;
    Ok(vec![("closest column deviation".into(), Measured::below(reference_vector_deviation(&basis), 1e-10))])
}

fn classification(level: Level) -> SuiteOutcome {
    let mut out = Vec::new();
    for n in qubit_counts(level) {
        let mut mismatches = 0;
        let mut residual: f64 = 0.0;
        for (ex, want) in example_table() {
            let cert = ex.build(n)?.classify()?;
            if cert.classification != want {
                mismatches += 1;
            }
            if want != Symmetry::None {
                residual = residual.max(cert.max_residual()).max(cert.max_unitarity_error());
            }
        }
        out.push((format!("n={n} misclassified examples"), Measured::below(mismatches as f64, 0.5)));
        out.push((format!("n={n} max certificate residual"), Measured::below(residual, 1e-8)));
    }
    Ok(out)
}

fn closure(level: Level) -> SuiteOutcome {
    let mut worst: f64 = 0.0;
    for n in 1..=*qubit_counts(level).last().unwrap() {
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            for ex in [ExampleChannel::CollectiveDamping { p }, ExampleChannel::SymmetrizedDamping { p }] {
                if let ChannelModel::Kraus(ch) = ex.build(n)? {
                    worst = worst.max(ch.closure_error());
                }
            }
        }
    }
    Ok(vec![("max|sum F^dag F - I|".into(), Measured::below(worst, 1e-12))])
}

fn symmetric_decompositions(n: usize, basis: &SuperSchurBasis) -> Result<Vec<(ExampleChannel, schur_dfs::BlockDecomposition)>, schur_dfs::Error> {
    let obasis = operator_basis(2, n)?;
    let mut out = Vec::new();
    for (ex, want) in example_table() {
        if want == Symmetry::None {
            continue;
        }
        let gamma = ex.build(n)?.superop(&obasis)?;
        out.push((ex, decompose(&gamma, basis, DEFAULT_TOL)?));
    }
    Ok(out)
}

fn twin_blocks(level: Level, seed: u64) -> SuiteOutcome {
    let mut out = Vec::new();
    for n in qubit_counts(level) {
        let basis = super_schur_basis(2, n)?;
        let decs = symmetric_decompositions(n, &basis)?;
        let leakage = decs.iter().map(|(_, d)| d.leakage).fold(0.0, f64::max);
        let twin = decs.iter().map(|(_, d)| d.max_twin_deviation()).fold(0.0, f64::max);
        let mut protection: f64 = 0.0;
        for (_, d) in &decs {
            protection = protection.max(protection_check(d, 3, seed)?);
        }
        out.push((format!("n={n} max leakage"), Measured::below(leakage, 1e-10)));
        out.push((format!("n={n} max twin deviation"), Measured::below(twin, 1e-10)));
        out.push((format!("n={n} max protection deviation"), Measured::below(protection, 1e-10)));
        if n == 3 {
            // negative control: couple the two {2,1} tableau rows
            let (_, d) = &decs[0];
            let s = d.sector(&Partition::new(vec![2, 1])?).expect("sector present");
            let mut frame = d.frame.clone();
            frame[(s.offset, s.offset + s.weyl_dim)] = Complex64::new(0.1, 0.0);
            let bad = decompose_frame(frame, d.kind, &basis, DEFAULT_TOL)?;
            out.push(("perturbed control protection deviation".into(), Measured::above(protection_check(&bad, 3, seed)?, 1e-3)));
        }
    }
    Ok(out)
}

fn blockwise_exponential(level: Level) -> SuiteOutcome {
    let mut out = Vec::new();
    for n in qubit_counts(level) {
        let basis = super_schur_basis(2, n)?;
        let mut worst: f64 = 0.0;
        for (ex, dec) in symmetric_decompositions(n, &basis)? {
            if ex.kind() != SuperOperatorKind::Generator {
                continue;
            }
            let gamma = basis.unitary() * &dec.frame * basis.unitary().adjoint();
            for t in [0.1, 1.0] {
                let ours = blockwise_exp(&dec, t)?.reassemble(&basis)?;
                let dense = (&gamma * Complex64::new(t, 0.0)).exp();
                worst = worst.max(max_abs(&(ours - dense)));
            }
        }
        out.push((format!("n={n} max|blockwise - dense exp|"), Measured::below(worst, 1e-8)));
    }
    Ok(out)
}

pub fn run(level: Level, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let level_name = match level {
        Level::Fast => "fast",
        Level::Full => "full",
    };
    let mut results = Vec::new();
    let mut record = |name: &str, outcome: SuiteOutcome, start: Instant| {
        let result = match outcome {
            Ok(measured) => SuiteResult { name: name.into(), passed: measured.iter().all(|(_, m)| m.ok), measured },
            Err(e) => {
                eprintln!("suite {name} errored: {e}");
                SuiteResult { name: name.into(), passed: false, measured: Vec::new() }
            }
        };
        println!("{} {name} ({:.2}s)", if result.passed { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
        for (label, m) in &result.measured {
            let cmp = if m.ok { "ok" } else { "FAILED" };
            println!("    {label}: {:.3e} (bound {:e}) {cmp}", m.value, m.tol);
        }
        results.push(result);
    };

    let mut bases = Vec::new();
    let t = Instant::now();
    record("schur-weyl dimension sum", dimension_sums(), t);
    let t = Instant::now();
    record("basis unitarity", unitarity(level, &mut bases), t);
    let t = Instant::now();
    record("equivariance", equivariance(&bases), t);
    let t = Instant::now();
    record("reference basis vector", reference_vector(), t);
    let t = Instant::now();
    record("symmetry classification", classification(level), t);
    let t = Instant::now();
    record("kraus closure", closure(level), t);
    let t = Instant::now();
    record("twin-block equality", twin_blocks(level, seed), t);
    let t = Instant::now();
    record("blockwise exponential", blockwise_exponential(level), t);

    let passed = results.iter().all(|r| r.passed);
    println!("{} suites, {} failed", results.len(), results.iter().filter(|r| !r.passed).count());
    if let Some(path) = out {
        write_json(path, &VerifyReport { level: level_name, seed, suites: results, passed })?;
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Internal("verification failed".into()))
    }
}
