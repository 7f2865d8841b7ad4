//! Fixtures and independent oracles for unit tests.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::mat::Mat;

pub fn gaussian(n: usize, p: usize, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Mat::from_fn(n, p, |_, _| StandardNormal.sample(&mut rng))
}

/// `B·Bᵀ` with `B` a `q × rank` Gaussian, symmetrized exactly.
pub fn random_nnd(q: usize, rank: usize, seed: u64) -> Mat {
    let b = gaussian(q, rank, seed);
    let a = b.matmul_t(&b);
    a.add(&a.transpose()).scale(0.5)
}

/// Gram–Schmidt (twice) on the columns of `m`.
pub fn orthonormalize(m: &Mat) -> Mat {
    let (r, c) = m.shape();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(c);
    for j in 0..c {
        let mut v = m.column(j);
        for _ in 0..2 {
            for q in &cols {
                let dot: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= dot * qi;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        cols.push(v.iter().map(|x| x / norm).collect());
    }
    Mat::from_fn(r, c, |i, j| cols[j][i])
}

/// `U·diag(sigmas)·Vᵀ` with random orthonormal `U`, `V`.
pub fn low_rank(n: usize, p: usize, sigmas: &[f64], seed: u64) -> Mat {
    let k = sigmas.len();
    let u = orthonormalize(&gaussian(n, k, seed));
    let v = orthonormalize(&gaussian(p, k, seed.wrapping_add(0x9e37)));
    u.scale_columns(sigmas).matmul_t(&v)
}

/// `max |QᵀQ − I|`.
pub fn orthonormality_error(q: &Mat) -> f64 {
    q.t_matmul(q).sub(&Mat::identity(q.cols())).max_abs()
}

/// Cyclic Jacobi eigensolver for symmetric matrices. Eigenvalues sorted
/// descending with matching eigenvector columns.
pub fn jacobi_eigh(a: &Mat) -> (Vec<f64>, Mat) {
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Mat::identity(n);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += m.get(i, j) * m.get(i, j);
                }
            }
        }
        if off < 1e-30 * (1.0 + m.frobenius_norm().powi(2)) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(j, j).partial_cmp(&m.get(i, i)).unwrap());
    let vals = order.iter().map(|&i| m.get(i, i)).collect();
    (vals, v.select_columns(&order))
}

/// Orthogonal projector onto the span of the columns of `b` (full column
/// rank assumed), via Gram–Schmidt.
pub fn naive_projector(b: &Mat) -> Mat {
    let q = orthonormalize(b);
    q.matmul_t(&q)
}
