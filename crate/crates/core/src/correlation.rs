//! Entropy and correlation functionals. All quantities are in nats.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::qstates::DensityOperator;

/// Eigenvalues below this contribute nothing to an entropy.
pub const EIGEN_FLOOR: f64 = 1e-15;

/// Slack allowed on inequalities and region boundaries.
pub const BOUND_TOL: f64 = 1e-9;

/// Maximum entropy of a single qubit.
pub const QUBIT_MAX_ENTROPY: f64 = LN_2;

/// `-sum p ln p` over a spectrum, skipping entries below [`EIGEN_FLOOR`].
pub fn spectrum_entropy(values: &[f64]) -> f64 {
    let s: f64 = values.iter().filter(|&&p| p > EIGEN_FLOOR).map(|&p| -p * p.ln()).sum();
    s.max(0.0)
}

pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    spectrum_entropy(rho.spectrum())
}

/// Entropy of the reduced operator on `subset`.
pub fn subset_entropy(rho: &DensityOperator, subset: &[usize]) -> Result<f64> {
    if subset.len() == rho.n_qubits() {
        // Still validates the indices.
        crate::qlinalg::SubsetLayout::new(rho.n_qubits(), subset)?;
        return Ok(von_neumann_entropy(rho));
    }
    Ok(von_neumann_entropy(&rho.reduce(subset)?))
}

/// `S_k` for every qubit `k`.
pub fn single_qubit_entropies(rho: &DensityOperator) -> Vec<f64> {
    (0..rho.n_qubits())
        .map(|k| {
            let r = rho.reduce(&[k]).expect("qubit index in range");
            von_neumann_entropy(&r)
        })
        .collect()
}

/// `sum_k S_k - S` before clamping; may be a rounding hair below zero.
pub fn total_correlation_unclamped(rho: &DensityOperator) -> f64 {
    single_qubit_entropies(rho).iter().sum::<f64>() - von_neumann_entropy(rho)
}

/// Information content of all correlations among the qubits of `rho`.
pub fn total_correlation(rho: &DensityOperator) -> f64 {
    total_correlation_unclamped(rho).max(0.0)
}

/// `S(rho_alpha) + S(rho_beta) - S(rho)` across `part`.
pub fn index_of_correlation(rho: &DensityOperator, part: &Partition) -> Result<f64> {
    part.check_covers(rho.n_qubits())?;
    let s_alpha = subset_entropy(rho, part.alpha())?;
    let s_beta = subset_entropy(rho, part.beta())?;
    Ok((s_alpha + s_beta - von_neumann_entropy(rho)).max(0.0))
}

/// `N S_max` for `N` qubits.
pub fn max_total_correlation(n_qubits: usize) -> f64 {
    n_qubits as f64 * QUBIT_MAX_ENTROPY
}

/// Upper bounds on the correlation content given subsystem entropies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    /// Sum of all entropies except the largest.
    pub classical_upper: f64,
    /// Sum of all entropies.
    pub quantum_upper: f64,
    /// Largest entropy; bounds the quantum/classical difference.
    pub gap_bound: f64,
    /// Whether the supplying state satisfied Araki-Lieb on every checked cut.
    pub araki_lieb_ok: bool,
}

pub fn correlation_bounds(subsystem_entropies: &[f64]) -> Result<BoundsReport> {
    if let Some(bad) = subsystem_entropies.iter().find(|&&s| s.is_nan() || s < 0.0) {
        return Err(Error::Argument(format!("subsystem entropy {bad} is negative")));
    }
    let quantum_upper: f64 = subsystem_entropies.iter().sum();
    let gap_bound = subsystem_entropies.iter().copied().fold(0.0, f64::max);
    Ok(BoundsReport {
        classical_upper: quantum_upper - gap_bound,
        quantum_upper,
        gap_bound,
        araki_lieb_ok: true,
    })
}

/// Where a correlation strength sits relative to the maximal subsystem
/// entropies `S~`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// `0 <= I <= inf S~`: some classical state has this strength.
    Classical,
    /// `inf S~ < I <= 2 inf S~`: reachable only by quantum states.
    Quantum,
    /// Above `2 inf S~`.
    Unattainable,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Region::Classical => "classical",
            Region::Quantum => "quantum",
            Region::Unattainable => "unattainable",
        })
    }
}

/// Region test using the smallest maximal entropy as the threshold. The
/// lower boundary itself counts as classical.
pub fn classify_region(value: f64, max_entropies: &[f64]) -> Result<Region> {
    if max_entropies.is_empty() {
        return Err(Error::Argument("no maximal entropies supplied".into()));
    }
    if let Some(bad) = max_entropies.iter().find(|&&s| s.is_nan() || s <= 0.0) {
        return Err(Error::Argument(format!("maximal entropy {bad} must be positive")));
    }
    if value.is_nan() || value < -BOUND_TOL {
        return Err(Error::Argument(format!("correlation value {value} is negative")));
    }
    let inf = max_entropies.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(if value <= inf + BOUND_TOL {
        Region::Classical
    } else if value <= 2.0 * inf + BOUND_TOL {
        Region::Quantum
    } else {
        Region::Unattainable
    })
}

/// Outcome of `|S_A - S_B| <= S <= S_A + S_B` on one bipartition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArakiLieb {
    pub holds: bool,
    /// `S - |S_A - S_B|`
    pub lower_slack: f64,
    /// `S_A + S_B - S`
    pub upper_slack: f64,
    pub s_alpha: f64,
    pub s_beta: f64,
    pub s_total: f64,
}

pub fn araki_lieb_check(rho: &DensityOperator, part: &Partition) -> Result<ArakiLieb> {
    part.check_covers(rho.n_qubits())?;
    let s_alpha = subset_entropy(rho, part.alpha())?;
    let s_beta = subset_entropy(rho, part.beta())?;
    let s_total = von_neumann_entropy(rho);
    let lower_slack = s_total - (s_alpha - s_beta).abs();
    let upper_slack = s_alpha + s_beta - s_total;
    Ok(ArakiLieb {
        holds: lower_slack >= -BOUND_TOL && upper_slack >= -BOUND_TOL,
        lower_slack,
        upper_slack,
        s_alpha,
        s_beta,
        s_total,
    })
}
