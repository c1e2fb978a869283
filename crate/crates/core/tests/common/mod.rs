//! Independent reference computations shared by the integration tests. Nothing
//! here goes through the crate's partial trace or eigensolver.

#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64;
use qcorr_core::DensityOperator;

/// Reduced operator by explicit summation over basis indices; qubit 0 is the
/// most significant bit.
pub fn oracle_reduce(rho: &DensityOperator, keep: &[usize]) -> Vec<Vec<Complex64>> {
    let n = rho.n_qubits();
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let place = |kept_bits: usize, traced_bits: usize| -> usize {
        let mut idx = 0;
        for (pos, &q) in keep.iter().enumerate() {
            let bit = kept_bits >> (keep.len() - 1 - pos) & 1;
            idx |= bit << (n - 1 - q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            let bit = traced_bits >> (traced.len() - 1 - pos) & 1;
            idx |= bit << (n - 1 - q);
        }
        idx
    };
    let dk = 1 << keep.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); dk]; dk];
    for i in 0..dk {
        for j in 0..dk {
            for t in 0..1usize << traced.len() {
                out[i][j] += rho.matrix().get(place(i, t), place(j, t));
            }
        }
    }
    out
}

/// Entropy via cyclic Jacobi on the real symmetric embedding `[[A, -B], [B, A]]`,
/// whose spectrum is that of `A + iB` with every value doubled.
pub fn oracle_entropy(m: &[Vec<Complex64>]) -> f64 {
    let d = m.len();
    let n = 2 * d;
    let mut a = vec![vec![0.0f64; n]; n];
    for i in 0..d {
        for j in 0..d {
            a[i][j] = m[i][j].re;
            a[i + d][j + d] = m[i][j].re;
            a[i][j + d] = -m[i][j].im;
            a[i + d][j] = m[i][j].im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let s: f64 = (0..n)
        .map(|i| a[i][i])
        .filter(|&p| p > 1e-15)
        .map(|p| -p * p.ln())
        .sum();
    s / 2.0
}

/// `S(alpha) + S(beta) - S` from explicit reductions.
pub fn oracle_index(rho: &DensityOperator, alpha: &[usize], beta: &[usize]) -> f64 {
    let all: Vec<usize> = (0..rho.n_qubits()).collect();
    let s = oracle_entropy(&oracle_reduce(rho, &all));
    (oracle_entropy(&oracle_reduce(rho, alpha)) + oracle_entropy(&oracle_reduce(rho, beta)) - s).max(0.0)
}
