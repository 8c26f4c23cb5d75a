//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schur_dfs::blockdiag::{decompose_frame, DEFAULT_TOL};
use schur_dfs::channels::{superop_commutator_norm, ChannelModel};
use schur_dfs::combinatorics::WeightVector;
use schur_dfs::liouville::letters_to_index;
use schur_dfs::{
    blockwise_exp, decompose, dfs_report, kraus_superop, operator_basis, partitions, permutation_in_schur, protection_check,
    psd_sqrt, super_schur_basis, syt_dimension, weyl_dimension, CMatrix, ExampleChannel, KrausChannel, Partition,
    Permutation, QuditOperator, Symmetry,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn examples() -> Vec<(ExampleChannel, Symmetry)> {
    let mut v = Vec::new();
    for p in [0.1, 0.5, 0.9] {
        v.push((ExampleChannel::CollectiveDamping { p }, Symmetry::Strong));
        v.push((ExampleChannel::SymmetrizedDamping { p }, Symmetry::Strong));
        v.push((ExampleChannel::SingleQubitDamping { p }, Symmetry::Weak));
        v.push((ExampleChannel::IndependentDamping { p }, Symmetry::Weak));
    }
    for g in [0.5, 1.0] {
        v.push((ExampleChannel::LocalDecay { gamma1: g, h_x: 1.0, j: 1.0 }, Symmetry::Weak));
        v.push((ExampleChannel::PairDecay { gamma2: g, h_x: 1.0, j: 1.0 }, Symmetry::Weak));
        v.push((ExampleChannel::CollectiveDecay { gamma3: g, gamma4: g, gamma5: g, h_x: 1.0, j: 1.0 }, Symmetry::Strong));
    }
    v
}

fn criterion_1() -> Outcome {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let out = dir.path().join("d.json");
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_schur-dfs"))
        .args(["decompose", "--n", "3", "--d", "2", "--out"])
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !status.status.success() {
        return Err(format!("exit {:?}", status.status.code()));
    }
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let rows: Vec<(u64, u64)> = v["sectors"]
        .as_array()
        .ok_or("no sectors")?
        .iter()
        .map(|r| (r["syt_dim"].as_u64().unwrap_or(0), r["weyl_dim"].as_u64().unwrap_or(0)))
        .collect();
    let counts: Vec<u64> = v["partitions_by_rows"].as_array().ok_or("no counts")?.iter().map(|r| r["count"].as_u64().unwrap_or(0)).collect();
    let ok = rows == [(1, 20), (2, 20), (1, 4)] && v["total"] == 64 && counts == [1, 1, 1] && elapsed < Duration::from_secs(1);
    check(ok, format!("rows {rows:?}, total {}, p_k(3) {counts:?}, {:.3}s", v["total"], elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let basis = super_schur_basis(2, 3).map_err(|e| e.to_string())?;
    let target = [
        (letters_to_index(&[1, 1, 2], 4), (2.0f64 / 3.0).sqrt()),
        (letters_to_index(&[1, 2, 1], 4), -(1.0f64 / 6.0).sqrt()),
        (letters_to_index(&[2, 1, 1], 4), -(1.0f64 / 6.0).sqrt()),
    ];
    let lambda = Partition::new(vec![2, 1]).unwrap();
    let weight = WeightVector::new(vec![0, 2, 1, 0]);
    let u = basis.unitary();
    let mut best = (f64::INFINITY, 0);
    for (j, l) in basis.labels().iter().enumerate() {
        if l.lambda != lambda || l.weight != weight {
            continue;
        }
        for sign in [1.0, -1.0] {
            let mut want = vec![0.0; 64];
            for &(i, x) in &target {
                want[i] = x;
            }
            let dev = (0..64).map(|i| (sign * u[(i, j)].re - want[i]).abs()).fold(0.0, f64::max);
            if dev < best.0 {
                best = (dev, l.y);
            }
        }
    }
    check(best.0 < 1e-10, format!("closest column in tableau sector Y={} deviates by {:.2e}", best.1, best.0))
}

fn criterion_3() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (d, n) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2)] {
        let start = Instant::now();
        let basis = super_schur_basis(d, n).map_err(|e| e.to_string())?;
        let u = basis.unitary();
        let unitarity = max_abs(&(u.adjoint() * u - CMatrix::identity(basis.dim(), basis.dim())));
        let mut equiv: f64 = 0.0;
        for i in 1..n {
            let pi = Permutation::adjacent(n, i).unwrap();
            equiv = equiv.max(permutation_in_schur(&pi, &basis).map_err(|e| e.to_string())?.deviation);
        }
        let secs = start.elapsed().as_secs_f64();
        ok &= unitarity < 1e-10 && equiv < 1e-10 && secs < 60.0;
        details.push(format!("d={d} n={n}: {unitarity:.1e}/{equiv:.1e} in {secs:.2}s"));
    }
    check(ok, format!("unitarity/equivariance {}", details.join(", ")))
}

fn criterion_4() -> Outcome {
    let n = 3;
    let mut wrong = Vec::new();
    let mut residual: f64 = 0.0;
    let table = examples().into_iter().chain([0.1, 0.5, 0.9].map(|p| (ExampleChannel::FirstQubitDamping { p }, Symmetry::None)));
    let mut count = 0;
    for (ex, want) in table {
        let cert = ex.build(n).and_then(|m| m.classify()).map_err(|e| e.to_string())?;
        count += 1;
        if cert.classification != want {
            wrong.push(format!("{} got {}", ex.name(), cert.classification));
        }
        if want != Symmetry::None {
            residual = residual.max(cert.max_residual()).max(cert.max_unitarity_error());
        }
    }
    check(wrong.is_empty() && residual < 1e-8, format!("{count} cases, mismatches {wrong:?}, max residual {residual:.1e}"))
}

fn criterion_5() -> Outcome {
    let basis = super_schur_basis(2, 3).map_err(|e| e.to_string())?;
    let obasis = operator_basis(2, 3).map_err(|e| e.to_string())?;
    let lambda = Partition::new(vec![2, 1]).unwrap();
    let (mut leak, mut twin): (f64, f64) = (0.0, 0.0);
    let mut bad_flags = Vec::new();
    for (ex, _) in examples() {
        let model = ex.build(3).map_err(|e| e.to_string())?;
        let gamma = model.superop(&obasis).map_err(|e| e.to_string())?;
        let dec = decompose(&gamma, &basis, DEFAULT_TOL).map_err(|e| e.to_string())?;
        leak = leak.max(dec.leakage);
        twin = twin.max(dec.sector(&lambda).map(|s| s.twin_deviation).unwrap_or(f64::INFINITY));
        let report = dfs_report(&dec, &model.classify().map_err(|e| e.to_string())?);
        let flagged: Vec<_> = report.flagged().map(|s| (s.lambda.clone(), s.protected_dim)).collect();
        if flagged != [(lambda.clone(), 2)] {
            bad_flags.push(ex.name());
        }
    }
    check(
        leak < 1e-10 && twin < 1e-10 && bad_flags.is_empty(),
        format!("max leakage {leak:.1e}, max {{2,1}} twin deviation {twin:.1e}, wrong DFS flags {bad_flags:?}"),
    )
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=5 {
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            for ex in [ExampleChannel::CollectiveDamping { p }, ExampleChannel::SymmetrizedDamping { p }] {
                let ChannelModel::Kraus(ch) = ex.build(n).map_err(|e| e.to_string())? else { unreachable!() };
                let dim = 1 << n;
                let sum = ch.kraus_ops().iter().fold(CMatrix::zeros(dim, dim), |acc, f| acc + f.matrix().adjoint() * f.matrix());
                worst = worst.max(max_abs(&(sum - CMatrix::identity(dim, dim))));
            }
        }
    }
    check(worst < 1e-12, format!("max |sum F^dag F - I| = {worst:.1e} over n <= 5, p in 0..1 step 0.05"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let basis = super_schur_basis(2, 3).map_err(|e| e.to_string())?;
    let model = ExampleChannel::LocalDecay { gamma1: 1.0, h_x: 1.0, j: 1.0 }.build(3).map_err(|e| e.to_string())?;
    let gamma = model.superop(&operator_basis(2, 3).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let dec = decompose(&gamma, &basis, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let mut devs = Vec::new();
    for t in [0.1, 1.0] {
        let ours = blockwise_exp(&dec, t).and_then(|e| e.reassemble(&basis)).map_err(|e| e.to_string())?;
        let dense = (&gamma.matrix * c(t)).exp();
        devs.push(max_abs(&(ours - dense)));
    }
    let secs = start.elapsed().as_secs_f64();
    let worst = devs.iter().copied().fold(0.0, f64::max);
    check(worst < 1e-8 && secs < 10.0, format!("deviation at t=0.1,1.0: {:.1e}, {:.1e}; {secs:.2}s", devs[0], devs[1]))
}

fn random_local_channel(rng: &mut ChaCha8Rng) -> Vec<CMatrix> {
    let ms: Vec<CMatrix> = (0..2)
        .map(|_| CMatrix::from_fn(2, 2, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    let s = ms.iter().fold(CMatrix::zeros(2, 2), |acc, m| acc + m.adjoint() * m);
    let s = (&s + s.adjoint()) * c(0.5);
    let inv_root = psd_sqrt(&s).unwrap().try_inverse().unwrap();
    ms.iter().map(|m| m * &inv_root).collect()
}

fn on_site(a: &CMatrix, site: usize, n: usize) -> QuditOperator {
    let factors: Vec<CMatrix> = (0..n).map(|k| if k == site { a.clone() } else { CMatrix::identity(2, 2) }).collect();
    QuditOperator::tensor(2, &factors).unwrap()
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;

    // (a) dimension sums
    let mut worst = 0u64;
    for n in 1..=6 {
        for d in 1..=3usize {
            let q = d * d;
            let sum: u64 = partitions(n, q).iter().map(|p| syt_dimension(p) * weyl_dimension(p, q)).sum();
            worst = worst.max(sum.abs_diff((q as u64).pow(n as u32)));
        }
    }
    ok &= worst == 0;
    parts.push(format!("(a) max dimension-sum error {worst}"));

    // (b) n=2 sectors against the (anti)symmetrizers
    let basis = super_schur_basis(2, 2).map_err(|e| e.to_string())?;
    let swap = schur_dfs::perm_rep(&Permutation::adjacent(2, 1).unwrap(), 2, 2, &operator_basis(2, 2).unwrap())
        .map_err(|e| e.to_string())?
        .liouville_matrix();
    let id = CMatrix::identity(16, 16);
    let projectors = [(&id + &swap) * c(0.5), (&id - &swap) * c(0.5)];
    let u = basis.unitary();
    let mut span_err: f64 = 0.0;
    let mut sizes = Vec::new();
    for (s, p) in basis.sectors().iter().zip(&projectors) {
        let cols = u.columns(s.offset, s.size());
        span_err = span_err.max(max_abs(&(cols * cols.adjoint() - p)));
        sizes.push((s.size(), p.trace().re.round() as usize));
    }
    let sizes_ok = sizes == [(10, 10), (6, 6)];
    ok &= sizes_ok && span_err < 1e-10;
    parts.push(format!("(b) sizes {sizes:?} span error {span_err:.1e}"));

    // (c) leakage and superoperator commutator agree as predicates
    let mut rng = ChaCha8Rng::seed_from_u64(20240501);
    let mut disagreements = 0;
    let mut symmetric = 0;
    let total = 24;
    for trial in 0..total {
        let n = 2 + trial % 2;
        let local = random_local_channel(&mut rng);
        let ops: Vec<QuditOperator> = if trial < 20 {
            let s = c(1.0 / (n as f64).sqrt());
            (0..n).flat_map(|i| local.iter().map(move |a| on_site(a, i, n).scale(s))).collect()
        } else {
            local.iter().map(|a| on_site(a, 0, n)).collect()
        };
        let ch = KrausChannel::new(2, n, ops).map_err(|e| e.to_string())?;
        let ob = operator_basis(2, n).unwrap();
        let gamma = kraus_superop(&ch, &ob).map_err(|e| e.to_string())?;
        let sb = super_schur_basis(2, n).unwrap();
        let leak = decompose(&gamma, &sb, DEFAULT_TOL).map_err(|e| e.to_string())?.leakage < 1e-10;
        let comm = superop_commutator_norm(&gamma, &ob).map_err(|e| e.to_string())? < 1e-10;
        if leak != comm {
            disagreements += 1;
        }
        if trial < 20 && leak && comm {
            symmetric += 1;
        }
    }
    ok &= disagreements == 0 && symmetric == 20;
    parts.push(format!("(c) {symmetric}/20 symmetric, {disagreements} disagreements over {total}"));

    // (d) protection check
    let basis = super_schur_basis(2, 3).unwrap();
    let obasis = operator_basis(2, 3).unwrap();
    let mut positive: f64 = 0.0;
    let mut first = None;
    for (ex, _) in examples() {
        let gamma = ex.build(3).and_then(|m| m.superop(&obasis)).map_err(|e| e.to_string())?;
        let dec = decompose(&gamma, &basis, DEFAULT_TOL).map_err(|e| e.to_string())?;
        positive = positive.max(protection_check(&dec, 5, 7).map_err(|e| e.to_string())?);
        first.get_or_insert(dec);
    }
    let dec = first.unwrap();
    let s = dec.sector(&Partition::new(vec![2, 1]).unwrap()).unwrap();
    let mut frame = dec.frame.clone();
    frame[(s.offset, s.offset + s.weyl_dim)] = c(0.1);
    let bad = decompose_frame(frame, dec.kind, &basis, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let negative = protection_check(&bad, 5, 7).map_err(|e| e.to_string())?;
    ok &= positive < 1e-10 && negative > 1e-3;
    parts.push(format!("(d) symmetric {positive:.1e}, perturbed {negative:.1e}"));

    check(ok, parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("decomposition counts", criterion_1),
        ("reference basis vector", criterion_2),
        ("unitarity and equivariance", criterion_3),
        ("symmetry classification table", criterion_4),
        ("block structure and DFS flags", criterion_5),
        ("Kraus closure", criterion_6),
        ("blockwise exponential", criterion_7),
        ("property and oracle suite", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
