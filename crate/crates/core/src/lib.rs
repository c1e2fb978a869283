//! Information content of correlations in multi-qubit states.
//!
//! The total correlation `I(N) = sum_k S_k - S` of an `N`-qubit operator is
//! split across any bipartition into internal correlation on each side and
//! the external index of correlation between the sides. The crate also
//! classifies correlation strengths into classical and quantum regions and
//! computes how many ancilla qubits a reduced state needs to be purified.
//!
//! Entropies are natural-log (nats) throughout.

pub mod correlation;
pub mod error;
pub mod partitions;
pub mod purification;
pub mod qlinalg;
pub mod qstates;
pub mod random;
pub mod report;

pub use correlation::{
    araki_lieb_check, classify_region, correlation_bounds, index_of_correlation, max_total_correlation,
    total_correlation, von_neumann_entropy, ArakiLieb, BoundsReport, Region,
};
pub use error::{Error, Result, ValidationError};
pub use partitions::{
    decompose, enumerate_bipartitions, is_product_across, pure_state_decomposition_identities, tradeoff_delta,
    CorrelationAnalysis, Decomposition, Partition,
};
pub use purification::{
    is_maximally_correlated_purification, min_purifying_qubits, purify, spectral_rank, PurificationResult,
};
pub use qlinalg::{hermitian_eigenvalues, kron, partial_trace, permute_qubits, ComplexMatrix, EigenSpectrum};
pub use qstates::{
    bell_product, ghz, ghz_block_product, to_density, uniform_entangled, validate_density, DensityOperator, PureState,
    StateLimits,
};
