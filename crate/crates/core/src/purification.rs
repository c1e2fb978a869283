//! Purification cost and explicit spectral purifications.

use std::f64::consts::LN_2;

use num_complex::Complex64;

use crate::correlation::total_correlation;
use crate::error::{Error, Result};
use crate::qlinalg::{self, ComplexMatrix, HERMITIAN_TOL};
use crate::qstates::{to_density, DensityOperator, PureState, HARD_MAX_QUBITS};

/// Eigenvalues at or below this count as zero when taking the rank.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Eigenvalues closer than this are treated as degenerate when ordering.
const DEGENERACY_TOL: f64 = 1e-12;

/// Components smaller than this are skipped when locating the phase anchor.
const ANCHOR_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct PurificationResult {
    pub system_qubits: usize,
    pub ancilla_qubits: usize,
    /// System qubits first, ancilla register appended.
    pub purified: PureState,
    /// Trace distance between the ancilla-traced purification and the input.
    pub residual: f64,
}

/// Number of eigenvalues above `threshold`.
pub fn spectral_rank(rho: &DensityOperator, threshold: f64) -> usize {
    rho.spectrum().iter().filter(|&&v| v > threshold).count()
}

/// `ceil(log2(rank))`: ancilla qubits needed to purify `rho`.
pub fn min_purifying_qubits(rho: &DensityOperator) -> usize {
    ancilla_for_rank(spectral_rank(rho, RANK_THRESHOLD))
}

fn ancilla_for_rank(rank: usize) -> usize {
    rank.max(1).next_power_of_two().trailing_zeros() as usize
}

/// Index of the first component with modulus above [`ANCHOR_TOL`].
fn anchor(v: &[Complex64]) -> usize {
    v.iter().position(|z| z.norm() > ANCHOR_TOL).unwrap_or(0)
}

/// `sum_i sqrt(lambda_i) |e_i> ⊗ |i>` over the nonzero spectrum.
///
/// Eigenpairs are taken in descending eigenvalue order; degenerate pairs are
/// ordered by the position of their first nonzero component, and every
/// eigenvector is rotated so that component is real and positive.
pub fn purify(rho: &DensityOperator) -> Result<PurificationResult> {
    let n = rho.n_qubits();
    let dec = qlinalg::hermitian_eigen(rho.matrix(), HERMITIAN_TOL)?;
    let mut pairs: Vec<(f64, Vec<Complex64>)> = dec
        .values
        .into_iter()
        .zip(dec.vectors)
        .filter(|(v, _)| *v > RANK_THRESHOLD)
        .map(|(v, mut vec)| {
            let a = vec[anchor(&vec)];
            let phase = if a.norm() > 0.0 {
                a.conj() / a.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            vec.iter_mut().for_each(|z| *z *= phase);
            (v, vec)
        })
        .collect();
    if pairs.is_empty() {
        return Err(Error::Argument(
            "operator has no eigenvalue above the rank threshold".into(),
        ));
    }
    pairs.sort_by(|(la, _), (lb, _)| lb.total_cmp(la));
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end - 1].0 - pairs[end].0 <= DEGENERACY_TOL {
            end += 1;
        }
        pairs[start..end].sort_by_key(|(_, v)| anchor(v));
        start = end;
    }

    let ancilla = ancilla_for_rank(pairs.len());
    if n + ancilla > HARD_MAX_QUBITS {
        return Err(Error::Size(format!(
            "purifying {n} qubits needs {ancilla} more, beyond {HARD_MAX_QUBITS}"
        )));
    }
    let weight_sum: f64 = pairs.iter().map(|(v, _)| v).sum();
    let anc_dim = 1usize << ancilla;
    let mut amps = vec![Complex64::new(0.0, 0.0); (1usize << n) * anc_dim];
    for (i, (lambda, vec)) in pairs.iter().enumerate() {
        let w = (lambda / weight_sum).sqrt();
        for (s, z) in vec.iter().enumerate() {
            amps[s * anc_dim + i] = z * w;
        }
    }
    let purified = PureState::with_tolerance(n + ancilla, amps, 1e-8)?;

    let system: Vec<usize> = (0..n).collect();
    let back = qlinalg::partial_trace_pure(purified.amplitudes(), n + ancilla, &system)?;
    let residual = trace_distance(&back, rho.matrix())?;
    Ok(PurificationResult {
        system_qubits: n,
        ancilla_qubits: ancilla,
        purified,
        residual,
    })
}

/// `(1/2) sum |eig(a - b)|`.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let diff: Vec<Complex64> = a.entries().iter().zip(b.entries()).map(|(x, y)| x - y).collect();
    let diff = ComplexMatrix::new(a.dim(), diff)?;
    let spec = qlinalg::hermitian_eigenvalues(&diff, HERMITIAN_TOL)?;
    Ok(0.5 * spec.values.iter().map(|v| v.abs()).sum::<f64>())
}

/// Whether the purified state reaches the maximum `(n + k) ln 2`.
pub fn is_maximally_correlated_purification(r: &PurificationResult) -> bool {
    let n = r.system_qubits + r.ancilla_qubits;
    let total = total_correlation(&to_density(&r.purified));
    (total - n as f64 * LN_2).abs() <= 1e-8
}
