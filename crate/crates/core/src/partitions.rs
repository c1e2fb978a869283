//! Bipartitions of a qubit register and the internal/external split of the
//! total correlation.

use std::f64::consts::LN_2;
use std::fmt;

use serde::Serialize;

use crate::correlation::{self, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::qlinalg::{self, SubsetLayout};
use crate::qstates::{to_density, DensityOperator, PureState};

/// Tolerance on the additivity identity and the closed-form checks.
pub const IDENTITY_TOL: f64 = 1e-8;

/// Default entrywise tolerance for [`is_product_across`].
pub const PRODUCT_TOL: f64 = 1e-9;

/// Purity `Tr rho^2` above `1 - PURE_TOL` counts as a pure total state.
const PURE_TOL: f64 = 1e-12;

/// Two disjoint, nonempty, sorted qubit sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    alpha: Vec<usize>,
    beta: Vec<usize>,
}

impl Partition {
    pub fn new(mut alpha: Vec<usize>, mut beta: Vec<usize>) -> Result<Self> {
        alpha.sort_unstable();
        beta.sort_unstable();
        if alpha.is_empty() || beta.is_empty() {
            return Err(Error::Partition("both sides must be nonempty".into()));
        }
        if alpha.windows(2).chain(beta.windows(2)).any(|w| w[0] == w[1]) {
            return Err(Error::Partition("a qubit is listed twice on one side".into()));
        }
        if let Some(q) = alpha.iter().find(|q| beta.binary_search(q).is_ok()) {
            return Err(Error::Partition(format!("qubit {q} is on both sides")));
        }
        Ok(Self { alpha, beta })
    }

    /// `alpha` against the rest of an `n_qubits` register.
    pub fn from_alpha(n_qubits: usize, alpha: Vec<usize>) -> Result<Self> {
        if let Some(&index) = alpha.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::Index { index, n_qubits });
        }
        let beta = (0..n_qubits).filter(|q| !alpha.contains(q)).collect();
        Self::new(alpha, beta)
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn beta(&self) -> &[usize] {
        &self.beta
    }

    pub fn n_qubits(&self) -> usize {
        self.alpha.len() + self.beta.len()
    }

    /// Same cut with the side holding qubit 0 as `alpha`.
    pub fn canonical(&self) -> Self {
        if self.alpha.contains(&0) {
            self.clone()
        } else {
            self.swapped()
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }

    /// Errors unless the two sides cover exactly `0..n_qubits`.
    pub fn check_covers(&self, n_qubits: usize) -> Result<()> {
        let covers = self.n_qubits() == n_qubits && self.alpha.iter().chain(&self.beta).all(|&q| q < n_qubits);
        if covers {
            Ok(())
        } else {
            Err(Error::Partition(format!("{self} does not cover {n_qubits} qubits")))
        }
    }
}

impl fmt::Display for Partition {
    /// Letters `a, b, ...` for registers up to 26 qubits, otherwise indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |qs: &[usize]| -> String {
            if self.n_qubits() <= 26 {
                qs.iter().map(|&q| (b'a' + q as u8) as char).collect()
            } else {
                qs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            }
        };
        write!(f, "{}|{}", side(&self.alpha), side(&self.beta))
    }
}

/// `I(N) = I_int(alpha) + I_int(beta) + I_ext(alpha, beta)` for one partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decomposition {
    pub internal_alpha: f64,
    pub internal_beta: f64,
    pub external: f64,
    pub total: f64,
}

impl Decomposition {
    /// `|internal_alpha + internal_beta + external - total|`
    pub fn additivity_error(&self) -> f64 {
        (self.internal_alpha + self.internal_beta + self.external - self.total).abs()
    }
}

/// Caches the entropies shared by every partition of one operator.
///
/// For a pure total state the two sides of any cut have equal entropy, so
/// only the smaller side is ever diagonalized.
pub struct CorrelationAnalysis<'a> {
    source: Source<'a>,
    single: Vec<f64>,
    total_entropy: f64,
    pure: bool,
}

enum Source<'a> {
    Dense(&'a DensityOperator),
    /// Reductions are taken straight from the amplitudes; the full operator
    /// is never formed.
    Pure(&'a PureState),
}

impl<'a> CorrelationAnalysis<'a> {
    pub fn new(rho: &'a DensityOperator) -> Self {
        let single = correlation::single_qubit_entropies(rho);
        let total_entropy = von_neumann_entropy(rho);
        let pure = rho.purity() >= 1.0 - PURE_TOL;
        Self {
            source: Source::Dense(rho),
            single,
            total_entropy,
            pure,
        }
    }

    /// Analysis of `|psi><psi|` without building the `4^N`-entry operator.
    pub fn for_pure_state(state: &'a PureState) -> Result<Self> {
        let mut a = Self {
            source: Source::Pure(state),
            single: Vec::new(),
            total_entropy: 0.0,
            pure: true,
        };
        a.single = (0..state.n_qubits())
            .map(|q| a.reduced(&[q]).map(|r| von_neumann_entropy(&r)))
            .collect::<Result<_>>()?;
        Ok(a)
    }

    fn n_qubits(&self) -> usize {
        match self.source {
            Source::Dense(rho) => rho.n_qubits(),
            Source::Pure(s) => s.n_qubits(),
        }
    }

    fn reduced(&self, subset: &[usize]) -> Result<DensityOperator> {
        match self.source {
            Source::Dense(rho) => rho.reduce(subset),
            Source::Pure(s) => {
                let m = qlinalg::partial_trace_pure(s.amplitudes(), s.n_qubits(), subset)?;
                Ok(DensityOperator::from_trusted(subset.len(), m))
            }
        }
    }

    /// Product test across `part`. Dense operators are compared entrywise
    /// against `rho_alpha ⊗ rho_beta`; a pure state is a product exactly when
    /// its smaller side is pure, so there `1 - Tr rho_small^2 <= tol` is used.
    pub fn is_product_across(&self, part: &Partition, tol: f64) -> Result<bool> {
        match self.source {
            Source::Dense(rho) => is_product_across(rho, part, tol),
            Source::Pure(_) => {
                part.check_covers(self.n_qubits())?;
                let small = if part.alpha.len() <= part.beta.len() {
                    &part.alpha
                } else {
                    &part.beta
                };
                Ok(1.0 - self.reduced(small)?.purity() <= tol)
            }
        }
    }

    pub fn single_qubit_entropies(&self) -> &[f64] {
        &self.single
    }

    pub fn total_entropy(&self) -> f64 {
        self.total_entropy
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    /// `sum_k S_k - S`, clamped at 0.
    pub fn total(&self) -> f64 {
        (self.single.iter().sum::<f64>() - self.total_entropy).max(0.0)
    }

    fn entropy_of(&self, subset: &[usize]) -> Result<f64> {
        match subset.len() {
            1 => Ok(self.single[subset[0]]),
            n if n == self.n_qubits() => Ok(self.total_entropy),
            _ => Ok(von_neumann_entropy(&self.reduced(subset)?)),
        }
    }

    /// `(S(rho_alpha), S(rho_beta))`.
    pub fn side_entropies(&self, part: &Partition) -> Result<(f64, f64)> {
        part.check_covers(self.n_qubits())?;
        if self.pure {
            let small = if part.alpha.len() <= part.beta.len() {
                &part.alpha
            } else {
                &part.beta
            };
            let s = self.entropy_of(small)?;
            return Ok((s, s));
        }
        Ok((self.entropy_of(&part.alpha)?, self.entropy_of(&part.beta)?))
    }

    pub fn decompose(&self, part: &Partition) -> Result<Decomposition> {
        let (s_alpha, s_beta) = self.side_entropies(part)?;
        let sum = |qs: &[usize]| qs.iter().map(|&q| self.single[q]).sum::<f64>();
        Ok(Decomposition {
            internal_alpha: (sum(&part.alpha) - s_alpha).max(0.0),
            internal_beta: (sum(&part.beta) - s_beta).max(0.0),
            external: (s_alpha + s_beta - self.total_entropy).max(0.0),
            total: self.total(),
        })
    }
}

pub fn decompose(rho: &DensityOperator, part: &Partition) -> Result<Decomposition> {
    CorrelationAnalysis::new(rho).decompose(part)
}

/// Decomposes a maximally correlated pure state across an equal cut and
/// checks `I_ext = 2 S(alpha)` and `I_int = n ln 2 - S(alpha)` on both sides.
pub fn pure_state_decomposition_identities(s: &PureState, part: &Partition) -> Result<Decomposition> {
    part.check_covers(s.n_qubits())?;
    let n = part.alpha().len();
    if part.beta().len() != n {
        return Err(Error::Partition(format!("{part} is not an equal split")));
    }
    let rho = to_density(s);
    let analysis = CorrelationAnalysis::new(&rho);
    let max_total = 2.0 * n as f64 * LN_2;
    if (analysis.total() - max_total).abs() > IDENTITY_TOL {
        return Err(Error::Precondition(format!(
            "total correlation {} is not the maximum {max_total}",
            analysis.total()
        )));
    }
    if let Some((k, s)) = analysis
        .single_qubit_entropies()
        .iter()
        .enumerate()
        .find(|(_, s)| (*s - LN_2).abs() > IDENTITY_TOL)
    {
        return Err(Error::Precondition(format!("qubit {k} has entropy {s}, not ln 2")));
    }
    let d = analysis.decompose(part)?;
    let s_alpha = von_neumann_entropy(&rho.reduce(part.alpha())?);
    let internal = n as f64 * LN_2 - s_alpha;
    if (d.external - 2.0 * s_alpha).abs() > IDENTITY_TOL {
        return Err(Error::Precondition(format!(
            "I_ext = 2 S(alpha) violated: {} vs {}",
            d.external,
            2.0 * s_alpha
        )));
    }
    if (d.internal_alpha - internal).abs() > IDENTITY_TOL {
        return Err(Error::Precondition(format!(
            "I_int(alpha) = n ln 2 - S(alpha) violated: {} vs {internal}",
            d.internal_alpha
        )));
    }
    if (d.internal_beta - internal).abs() > IDENTITY_TOL {
        return Err(Error::Precondition(format!(
            "I_int(beta) = n ln 2 - S(alpha) violated: {} vs {internal}",
            d.internal_beta
        )));
    }
    Ok(d)
}

/// Every unordered bipartition once, with qubit 0 on the `alpha` side.
///
/// With `side_size = Some(k)` only cuts into parts of sizes `k` and `n - k`
/// are listed. Ordering is by `|alpha|`, then lexicographic on `alpha`.
pub fn enumerate_bipartitions(n_qubits: usize, side_size: Option<usize>) -> Result<Vec<Partition>> {
    if n_qubits < 2 || n_qubits >= usize::BITS as usize {
        return Err(Error::Argument(format!("cannot bipartition {n_qubits} qubits")));
    }
    let sizes: Vec<usize> = match side_size {
        None => (1..n_qubits).collect(),
        Some(k) if k >= 1 && k < n_qubits => {
            let mut v = vec![k, n_qubits - k];
            v.sort_unstable();
            v.dedup();
            v
        }
        Some(k) => {
            return Err(Error::Argument(format!(
                "side size {k} must be between 1 and {}",
                n_qubits - 1
            )))
        }
    };
    let mut out = Vec::new();
    for size in sizes {
        for rest in combinations(n_qubits - 1, size - 1) {
            let alpha: Vec<usize> = std::iter::once(0).chain(rest.into_iter().map(|q| q + 1)).collect();
            out.push(Partition::from_alpha(n_qubits, alpha)?);
        }
    }
    Ok(out)
}

/// k-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(current.clone());
        // advance the rightmost index that still has room
        let Some(i) = (0..k).rev().find(|&i| current[i] < n - k + i) else {
            return out;
        };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Whether `rho = rho_alpha ⊗ rho_beta` entrywise within `tol`.
pub fn is_product_across(rho: &DensityOperator, part: &Partition, tol: f64) -> Result<bool> {
    let n = rho.n_qubits();
    part.check_covers(n)?;
    let rho_a = rho.reduce(part.alpha())?;
    let rho_b = rho.reduce(part.beta())?;
    let la = SubsetLayout::new(n, part.alpha())?;
    let lb = SubsetLayout::new(n, part.beta())?;
    let m = rho.matrix();
    for (ar, &aro) in la.keep_offsets.iter().enumerate() {
        for (br, &bro) in lb.keep_offsets.iter().enumerate() {
            let row = aro | bro;
            for (ac, &aco) in la.keep_offsets.iter().enumerate() {
                let a = rho_a.matrix().get(ar, ac);
                for (bc, &bco) in lb.keep_offsets.iter().enumerate() {
                    let product = a * rho_b.matrix().get(br, bc);
                    if (m.get(row, aco | bco) - product).norm() > tol {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Common value of `[I1_int(a) + I1_int(b)] - [I2_int(a) + I2_int(b)]` and
/// `I2_ext - I1_ext` for two decompositions with equal totals.
pub fn tradeoff_delta(d1: &Decomposition, d2: &Decomposition) -> Result<f64> {
    if (d1.total - d2.total).abs() > IDENTITY_TOL {
        return Err(Error::Precondition(format!(
            "totals differ: {} vs {}",
            d1.total, d2.total
        )));
    }
    let internal = (d1.internal_alpha + d1.internal_beta) - (d2.internal_alpha + d2.internal_beta);
    let external = d2.external - d1.external;
    if (internal - external).abs() > IDENTITY_TOL {
        return Err(Error::Precondition(format!(
            "internal change {internal} and external change {external} disagree"
        )));
    }
    Ok(internal)
}
