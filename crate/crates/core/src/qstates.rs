//! Named multi-qubit states and density operators.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result, ValidationError};
use crate::qlinalg::{self, ComplexMatrix, HERMITIAN_TOL};

/// Default largest register any constructor will build (dense dim 4096).
pub const DEFAULT_MAX_QUBITS: usize = 12;

/// Largest register whose density operator fits in [`qlinalg::MAX_ENTRIES`].
pub const HARD_MAX_QUBITS: usize = 12;

/// Tolerance on `sum |amplitude|^2 = 1`.
pub const NORM_TOL: f64 = 1e-10;

/// Tolerance used by [`validate_density`] for trace and positivity.
pub const DENSITY_TOL: f64 = 1e-10;

/// Normalized amplitude vector over `2^n_qubits` basis kets.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(n_qubits, &amplitudes)?;
        let norm_sqr = norm_sqr(&amplitudes);
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(ValidationError::Normalization { norm_sqr }.into());
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Accepts amplitudes whose squared norm is within `tol` of 1 and
    /// rescales them when they fall outside the strict [`NORM_TOL`] band.
    pub fn with_tolerance(n_qubits: usize, mut amplitudes: Vec<Complex64>, tol: f64) -> Result<Self> {
        Self::check_shape(n_qubits, &amplitudes)?;
        let norm_sqr = norm_sqr(&amplitudes);
        if (norm_sqr - 1.0).abs() > tol {
            return Err(ValidationError::Normalization { norm_sqr }.into());
        }
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            let scale = norm_sqr.sqrt().recip();
            amplitudes.iter_mut().for_each(|a| *a *= scale);
        }
        Ok(Self { n_qubits, amplitudes })
    }

    fn check_shape(n_qubits: usize, amplitudes: &[Complex64]) -> Result<()> {
        if n_qubits == 0 {
            return Err(Error::Argument("a state needs at least one qubit".into()));
        }
        if n_qubits > HARD_MAX_QUBITS {
            return Err(Error::Size(format!(
                "{n_qubits} qubits is beyond any dense representation"
            )));
        }
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::Schema(format!(
                "{} amplitudes given for {n_qubits} qubits (expected {})",
                amplitudes.len(),
                1usize << n_qubits
            )));
        }
        if let Some(index) = amplitudes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(ValidationError::NonFinite { index }.into());
        }
        Ok(())
    }

    /// Skips validation; callers guarantee length and norm.
    pub(crate) fn from_raw_unchecked(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self { n_qubits, amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Tensor product `self ⊗ other`; `other`'s qubits are appended.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let n = self.n_qubits + other.n_qubits;
        if n > HARD_MAX_QUBITS {
            return Err(Error::Size(format!("{n} qubits is beyond any dense representation")));
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(Self::from_raw_unchecked(n, amplitudes))
    }
}

fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|z| z.norm_sqr()).sum()
}

/// Hermitian, unit-trace, positive semidefinite operator on `n_qubits` qubits.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    n_qubits: usize,
    matrix: ComplexMatrix,
    spectrum: OnceLock<Vec<f64>>,
}

impl PartialEq for DensityOperator {
    fn eq(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits && self.matrix == other.matrix
    }
}

impl DensityOperator {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigenvalues in ascending order with small negative noise clamped to 0.
    pub fn spectrum(&self) -> &[f64] {
        self.spectrum.get_or_init(|| {
            // Construction guarantees Hermiticity within HERMITIAN_TOL.
            let s = qlinalg::hermitian_eigenvalues(&self.matrix, HERMITIAN_TOL)
                .expect("density operator is Hermitian by construction");
            s.values.into_iter().map(|v| v.max(0.0)).collect()
        })
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        self.matrix.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Reduced operator on `keep`.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityOperator> {
        let m = qlinalg::partial_trace(&self.matrix, self.n_qubits, keep)?;
        Ok(DensityOperator {
            n_qubits: keep.len(),
            matrix: m.symmetrized(),
            spectrum: OnceLock::new(),
        })
    }

    /// Trusted wrapper for operators produced by trace-preserving maps of a
    /// valid operator (partial traces, tensor products).
    pub(crate) fn from_trusted(n_qubits: usize, matrix: ComplexMatrix) -> Self {
        Self {
            n_qubits,
            matrix: matrix.symmetrized(),
            spectrum: OnceLock::new(),
        }
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        let m = qlinalg::kron(&self.matrix, &other.matrix)?;
        Ok(Self::from_trusted(self.n_qubits + other.n_qubits, m))
    }
}

/// `|s><s|`.
pub fn to_density(s: &PureState) -> DensityOperator {
    DensityOperator {
        n_qubits: s.n_qubits,
        matrix: ComplexMatrix::outer(&s.amplitudes),
        spectrum: OnceLock::new(),
    }
}

/// Checks the density-operator invariants and wraps `m`.
pub fn validate_density(m: ComplexMatrix, n_qubits: usize) -> Result<DensityOperator> {
    if n_qubits == 0 || n_qubits > HARD_MAX_QUBITS || m.dim() != 1 << n_qubits {
        return Err(Error::Shape(format!(
            "{0}x{0} matrix does not describe {n_qubits} qubits",
            m.dim()
        )));
    }
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(ValidationError::NotHermitian { deviation }.into());
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > DENSITY_TOL {
        return Err(ValidationError::Trace { trace }.into());
    }
    let m = m.symmetrized();
    let spectrum = qlinalg::hermitian_eigenvalues(&m, HERMITIAN_TOL)?;
    let min_eigenvalue = spectrum.values.first().copied().unwrap_or(0.0);
    if min_eigenvalue < -DENSITY_TOL {
        return Err(ValidationError::Positivity { min_eigenvalue }.into());
    }
    let clamped: Vec<f64> = spectrum.values.into_iter().map(|v| v.max(0.0)).collect();
    Ok(DensityOperator {
        n_qubits,
        matrix: m,
        spectrum: OnceLock::from(clamped),
    })
}

/// Size limit applied by the named-state constructors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateLimits {
    pub max_qubits: usize,
}

impl Default for StateLimits {
    fn default() -> Self {
        Self {
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl StateLimits {
    pub fn new(max_qubits: usize) -> Self {
        Self { max_qubits }
    }

    fn check(&self, n_qubits: usize) -> Result<()> {
        let limit = self.max_qubits.min(HARD_MAX_QUBITS);
        if n_qubits > limit {
            return Err(Error::Size(format!("{n_qubits} qubits exceeds the limit of {limit}")));
        }
        Ok(())
    }

    /// `(|0...0> + |1...1>) / sqrt(2)` on `n` qubits.
    pub fn ghz(&self, n: usize) -> Result<PureState> {
        if n < 2 {
            return Err(Error::Argument(format!("GHZ state needs at least 2 qubits, got {n}")));
        }
        self.check(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        amps[(1 << n) - 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Ok(PureState::from_raw_unchecked(n, amps))
    }

    /// `2^{-n/2} sum_s |s, s>` on `2 n_per_side` qubits.
    pub fn uniform_entangled(&self, n_per_side: usize) -> Result<PureState> {
        if n_per_side == 0 {
            return Err(Error::Argument("uniform entangled state needs n_per_side >= 1".into()));
        }
        let n = n_per_side
            .checked_mul(2)
            .ok_or_else(|| Error::Size("qubit count overflow".into()))?;
        self.check(n)?;
        let side = 1usize << n_per_side;
        // 2^{-n/2} built from exact powers of two and 1/sqrt(2)
        let mut w = 0.5f64.powi((n_per_side / 2) as i32);
        if n_per_side % 2 == 1 {
            w *= FRAC_1_SQRT_2;
        }
        let weight = Complex64::new(w, 0.0);
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for s in 0..side {
            amps[(s << n_per_side) | s] = weight;
        }
        Ok(PureState::from_raw_unchecked(n, amps))
    }

    /// `pairs` independent Bell pairs, qubit order a1 b1 a2 b2 ...
    pub fn bell_product(&self, pairs: usize) -> Result<PureState> {
        if pairs == 0 {
            return Err(Error::Argument("bell_product needs at least one pair".into()));
        }
        let n = pairs.saturating_mul(2);
        self.check(n)?;
        let mut w = 0.5f64.powi((pairs / 2) as i32);
        if pairs % 2 == 1 {
            w *= FRAC_1_SQRT_2;
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        // Each pair contributes |00> or |11>: spread the bits of `s` into both slots.
        for s in 0..1usize << pairs {
            let label = (0..pairs).fold(0, |acc, k| if s >> k & 1 == 1 { acc | 0b11 << (2 * k) } else { acc });
            amps[label] = Complex64::new(w, 0.0);
        }
        Ok(PureState::from_raw_unchecked(n, amps))
    }

    /// Two `n_per_block`-qubit GHZ blocks; block alpha is qubits `0..n_per_block`.
    pub fn ghz_block_product(&self, n_per_block: usize) -> Result<PureState> {
        if n_per_block < 2 {
            return Err(Error::Argument(format!(
                "GHZ blocks need at least 2 qubits each, got {n_per_block}"
            )));
        }
        let n = n_per_block.saturating_mul(2);
        self.check(n)?;
        let ones = (1usize << n_per_block) - 1;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for label in [0, ones, ones << n_per_block, (ones << n_per_block) | ones] {
            amps[label] = Complex64::new(0.5, 0.0);
        }
        Ok(PureState::from_raw_unchecked(n, amps))
    }
}

pub fn ghz(n: usize) -> Result<PureState> {
    StateLimits::default().ghz(n)
}

pub fn uniform_entangled(n_per_side: usize) -> Result<PureState> {
    StateLimits::default().uniform_entangled(n_per_side)
}

pub fn bell_product(pairs: usize) -> Result<PureState> {
    StateLimits::default().bell_product(pairs)
}

pub fn ghz_block_product(n_per_block: usize) -> Result<PureState> {
    StateLimits::default().ghz_block_product(n_per_block)
}
