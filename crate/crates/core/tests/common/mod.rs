#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schur_dfs::{psd_sqrt, CMatrix, QuditOperator};

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    DMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Random single-qudit Kraus set `A_k = M_k S^{-1/2}` with `S = Σ M†M`.
pub fn random_local_channel(rng: &mut ChaCha8Rng, d: usize, count: usize) -> Vec<CMatrix> {
    let ms: Vec<CMatrix> = (0..count).map(|_| random_matrix(rng, d)).collect();
    let s = ms.iter().fold(CMatrix::zeros(d, d), |acc, m| acc + m.adjoint() * m);
    let s = (&s + s.adjoint()) * c(0.5);
    let inv_root = psd_sqrt(&s).unwrap().try_inverse().unwrap();
    ms.iter().map(|m| m * &inv_root).collect()
}

/// `op` acting on qudit `site` of `n`.
pub fn on_site(op: &CMatrix, site: usize, n: usize) -> QuditOperator {
    let d = op.nrows();
    let factors: Vec<CMatrix> = (0..n).map(|k| if k == site { op.clone() } else { CMatrix::identity(d, d) }).collect();
    QuditOperator::tensor(d, &factors).unwrap()
}

/// `{n^{-1/2} A_k on site i}`: permutations shuffle the operators among each other.
pub fn weakly_symmetrized(local: &[CMatrix], n: usize) -> Vec<QuditOperator> {
    let s = c(1.0 / (n as f64).sqrt());
    (0..n).flat_map(|i| local.iter().map(move |a| on_site(a, i, n).scale(s))).collect()
}

/// Hermitian density-like matrix with unit trace.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let a = random_matrix(rng, dim);
    let rho = &a * a.adjoint();
    let tr = rho.trace();
    rho / tr
}
