#![allow(dead_code)]

use nyspca_core::simgen::standard_normal;
use nyspca_core::Mat;

pub fn orthonormalize(m: &Mat) -> Mat {
    let (r, c) = m.shape();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(c);
    for j in 0..c {
        let mut v = m.column(j);
        for _ in 0..2 {
            for q in &cols {
                let dot: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= dot * qi);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        cols.push(v.iter().map(|x| x / norm).collect());
    }
    Mat::from_fn(r, c, |i, j| cols[j][i])
}

pub fn random_orthogonal(d: usize, seed: u64) -> Mat {
    orthonormalize(&standard_normal(d, d, seed))
}

/// `U·diag(sigmas)·Vᵀ` with random orthonormal factors.
pub fn low_rank(n: usize, p: usize, sigmas: &[f64], seed: u64) -> Mat {
    let k = sigmas.len();
    let u = orthonormalize(&standard_normal(n, k, seed));
    let v = orthonormalize(&standard_normal(p, k, seed ^ 0x5bd1_e995));
    u.scale_columns(sigmas).matmul_t(&v)
}

/// Singular values log-spaced from 1 down to `1/kappa`.
pub fn log_spaced(k: usize, kappa: f64) -> Vec<f64> {
    (0..k)
        .map(|i| if k == 1 { 1.0 } else { kappa.powf(-(i as f64) / (k - 1) as f64) })
        .collect()
}

pub fn random_nnd(q: usize, rank: usize, seed: u64) -> Mat {
    let b = standard_normal(q, rank, seed);
    let a = b.matmul_t(&b);
    a.add(&a.transpose()).scale(0.5)
}
