//! Dense complex linear algebra for qubit registers.
//!
//! Basis labels follow the ket convention `|q0 q1 ... q(N-1)>`: qubit 0 is the
//! leftmost symbol and the most significant bit of the amplitude index.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qstates::PureState;

/// Largest number of entries any dense matrix may hold (a 4096 x 4096 operator).
pub const MAX_ENTRIES: usize = 1 << 24;

/// Default absolute Hermiticity tolerance.
pub const HERMITIAN_TOL: f64 = 1e-10;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("matrix dimension must be positive".into()));
        }
        let len = dim
            .checked_mul(dim)
            .filter(|&l| l <= MAX_ENTRIES)
            .ok_or_else(|| Error::Size(format!("{dim}x{dim} matrix exceeds {MAX_ENTRIES} entries")))?;
        if entries.len() != len {
            return Err(Error::Shape(format!(
                "expected {len} entries for dimension {dim}, got {}",
                entries.len()
            )));
        }
        if let Some(index) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(crate::error::ValidationError::NonFinite { index }.into());
        }
        Ok(Self { dim, entries })
    }

    /// Builds from row-major real and imaginary parts.
    pub fn from_parts(dim: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::Shape("real and imaginary parts differ in length".into()));
        }
        let entries = re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        Self::new(dim, entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C_ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = C_ONE;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * dim + i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|v><v|` for an amplitude vector `v`.
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in v {
            entries.extend(v.iter().map(|b| a * b.conj()));
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Shape(format!(
                "cannot multiply {0}x{0} by {1}x{1}",
                self.dim, other.dim
            )));
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let row = &mut out.entries[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == C_ZERO {
                    continue;
                }
                for (o, b) in row.iter_mut().zip(&other.entries[k * n..(k + 1) * n]) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |m(i,j) - conj(m(j,i))|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// (m + m†) / 2
    pub fn symmetrized(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            out.entries[i * n + i] = Complex64::new(self.get(i, i).re, 0.0);
            for j in (i + 1)..n {
                let z = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
                out.entries[i * n + j] = z;
                out.entries[j * n + i] = z.conj();
            }
        }
        out
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a
        .dim
        .checked_mul(b.dim)
        .filter(|d| d.checked_mul(*d).is_some_and(|l| l <= MAX_ENTRIES))
        .ok_or_else(|| {
            Error::Size(format!(
                "kron of {}x{} and {}x{} exceeds {MAX_ENTRIES} entries",
                a.dim, a.dim, b.dim, b.dim
            ))
        })?;
    let mut entries = vec![C_ZERO; dim * dim];
    for i in 0..a.dim {
        for k in 0..b.dim {
            let row = &mut entries[(i * b.dim + k) * dim..(i * b.dim + k + 1) * dim];
            for j in 0..a.dim {
                let aij = a.get(i, j);
                let out = &mut row[j * b.dim..(j + 1) * b.dim];
                for (o, bkl) in out.iter_mut().zip(&b.entries[k * b.dim..(k + 1) * b.dim]) {
                    *o = aij * bkl;
                }
            }
        }
    }
    Ok(ComplexMatrix { dim, entries })
}

/// Eigenvalues of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    /// Ascending.
    pub values: Vec<f64>,
    /// Off-diagonal Frobenius norm left after diagonalization.
    pub residual: f64,
}

/// Eigenvalues with orthonormal eigenvectors; `vectors[i]` belongs to `values[i]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
    pub residual: f64,
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<EigenSpectrum> {
    let (values, _, residual) = hermitian_solve(m, tol, false)?;
    Ok(EigenSpectrum { values, residual })
}

pub fn hermitian_eigen(m: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    let (values, vectors, residual) = hermitian_solve(m, tol, true)?;
    Ok(EigenDecomposition {
        values,
        vectors,
        residual,
    })
}

struct Reflector {
    tau: f64,
    v: Vec<Complex64>,
}

fn hermitian_solve(m: &ComplexMatrix, tol: f64, want_vectors: bool) -> Result<(Vec<f64>, Vec<Vec<Complex64>>, f64)> {
    let deviation = m.hermiticity_deviation();
    if deviation > tol {
        return Err(Error::Shape(format!(
            "matrix is not Hermitian within {tol:e} (deviation {deviation:e})"
        )));
    }
    let n = m.dim;
    let mut a = m.symmetrized().entries;
    let reflectors = tridiagonalize(&mut a, n, want_vectors);

    let mut diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let sub: Vec<Complex64> = (0..n.saturating_sub(1)).map(|i| a[(i + 1) * n + i]).collect();
    // Diagonal unitary that makes the subdiagonal real and nonnegative.
    let mut phases = vec![C_ONE; n];
    let mut off = vec![0.0; n];
    for (j, e) in sub.iter().enumerate() {
        let r = e.norm();
        off[j] = r;
        phases[j + 1] = if r > 0.0 { phases[j] * (e / r) } else { phases[j] };
    }

    let mut z = want_vectors.then(|| {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        z
    });
    tridiagonal_ql(&mut diag, &mut off, z.as_deref_mut(), n)?;
    let residual = (2.0 * off.iter().map(|e| e * e).sum::<f64>()).sqrt();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();

    let vectors = match z {
        None => Vec::new(),
        Some(z) => order
            .iter()
            .map(|&col| {
                // Row `col` of z holds the eigenvector of the real tridiagonal.
                let mut y: Vec<Complex64> = (0..n).map(|k| phases[k] * z[col * n + k]).collect();
                for (k, refl) in reflectors.iter().enumerate().rev() {
                    apply_reflector(refl, &mut y[k + 1..]);
                }
                y
            })
            .collect(),
    };
    Ok((values, vectors, residual))
}

fn apply_reflector(refl: &Reflector, y: &mut [Complex64]) {
    if refl.tau == 0.0 {
        return;
    }
    let dot: Complex64 = refl.v.iter().zip(y.iter()).map(|(v, y)| v.conj() * y).sum();
    let s = dot * refl.tau;
    for (y, v) in y.iter_mut().zip(&refl.v) {
        *y -= v * s;
    }
}

/// Householder reduction of a Hermitian matrix (row-major, in place) to
/// tridiagonal form. Reflector `k` acts on indices `k+1..n`.
fn tridiagonalize(a: &mut [Complex64], n: usize, keep_reflectors: bool) -> Vec<Reflector> {
    let mut reflectors = Vec::new();
    let mut p = vec![C_ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[i * n + k]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail_norm = v[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if xnorm == 0.0 || tail_norm == 0.0 {
            if keep_reflectors {
                reflectors.push(Reflector { tau: 0.0, v });
            }
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C_ONE };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let tau = 2.0 / v.iter().map(|z| z.norm_sqr()).sum::<f64>();

        // p = tau * B v over the trailing block B.
        let off = k + 1;
        let p = &mut p[..m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &a[(off + i) * n + off..(off + i) * n + n];
            let s: Complex64 = row.iter().zip(&v).map(|(b, v)| b * v).sum();
            *pi = s * tau;
        }
        let vp: Complex64 = v.iter().zip(p.iter()).map(|(v, p)| v.conj() * p).sum();
        let half = 0.5 * tau * vp.re;
        for (pi, vi) in p.iter_mut().zip(&v) {
            *pi -= vi * half;
        }
        // B -= v w† + w v†
        for i in 0..m {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a[(off + i) * n + off..(off + i) * n + n];
            for ((b, vj), wj) in row.iter_mut().zip(&v).zip(p.iter()) {
                *b -= vi * wj.conj() + wi * vj.conj();
            }
        }
        a[off * n + k] = alpha;
        a[k * n + off] = alpha.conj();
        for i in (off + 1)..n {
            a[i * n + k] = C_ZERO;
            a[k * n + i] = C_ZERO;
        }
        if keep_reflectors {
            reflectors.push(Reflector { tau, v });
        }
    }
    reflectors
}

/// Implicit QL iterations on a real symmetric tridiagonal matrix with
/// diagonal `d` and superdiagonal `e` (`e[n-1]` unused). Eigenvectors, when
/// requested, accumulate in the rows of `z`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>, n: usize) -> Result<()> {
    const MAX_ITER: usize = 60;
    if n > 0 {
        e[n - 1] = 0.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(Error::Argument(format!(
                    "eigenvalue iteration did not converge at index {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let f = *b;
                        *b = s * *a + c * f;
                        *a = c * *a - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Validated, sorted qubit subset and the bit masks needed to scatter
/// subset-local indices back into full register indices.
pub(crate) struct SubsetLayout {
    /// Full-register offset of each kept-subsystem basis index.
    pub keep_offsets: Vec<usize>,
    /// Full-register offset of each traced-subsystem basis index.
    pub trace_offsets: Vec<usize>,
}

impl SubsetLayout {
    pub fn new(n_qubits: usize, keep: &[usize]) -> Result<Self> {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        if let Some(&index) = sorted.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::Index { index, n_qubits });
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Argument(format!("duplicate qubit in subset {keep:?}")));
        }
        let traced: Vec<usize> = (0..n_qubits).filter(|q| sorted.binary_search(q).is_err()).collect();
        Ok(Self {
            keep_offsets: scatter_offsets(n_qubits, &sorted),
            trace_offsets: scatter_offsets(n_qubits, &traced),
        })
    }
}

/// For each local index over `qubits` (first listed qubit most significant),
/// the corresponding bit pattern in an `n_qubits` register.
fn scatter_offsets(n_qubits: usize, qubits: &[usize]) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|local| {
            qubits.iter().enumerate().fold(0, |acc, (j, &q)| {
                if (local >> (k - 1 - j)) & 1 == 1 {
                    acc | (1 << (n_qubits - 1 - q))
                } else {
                    acc
                }
            })
        })
        .collect()
}

/// Reduced operator on `keep` (taken in ascending qubit order).
pub fn partial_trace(m: &ComplexMatrix, n_qubits: usize, keep: &[usize]) -> Result<ComplexMatrix> {
    if n_qubits >= usize::BITS as usize || m.dim != 1 << n_qubits {
        return Err(Error::Shape(format!(
            "matrix dimension {} does not match {n_qubits} qubits",
            m.dim
        )));
    }
    let layout = SubsetLayout::new(n_qubits, keep)?;
    let dk = layout.keep_offsets.len();
    let n = m.dim;
    let mut out = ComplexMatrix::zeros(dk);
    for (r, &ro) in layout.keep_offsets.iter().enumerate() {
        for (c, &co) in layout.keep_offsets.iter().enumerate() {
            let mut acc = C_ZERO;
            for &t in &layout.trace_offsets {
                acc += m.entries[(ro | t) * n + (co | t)];
            }
            out.entries[r * dk + c] = acc;
        }
    }
    Ok(out)
}

/// Reduced operator of the pure state `|psi><psi|` on `keep`, computed from
/// the amplitudes without forming the full density matrix.
pub fn partial_trace_pure(amplitudes: &[Complex64], n_qubits: usize, keep: &[usize]) -> Result<ComplexMatrix> {
    if n_qubits >= usize::BITS as usize || amplitudes.len() != 1 << n_qubits {
        return Err(Error::Shape(format!(
            "{} amplitudes do not match {n_qubits} qubits",
            amplitudes.len()
        )));
    }
    let layout = SubsetLayout::new(n_qubits, keep)?;
    let rows: Vec<Vec<Complex64>> = layout
        .keep_offsets
        .iter()
        .map(|&ko| layout.trace_offsets.iter().map(|&t| amplitudes[ko | t]).collect())
        .collect();
    let dk = rows.len();
    let mut out = ComplexMatrix::zeros(dk);
    for r in 0..dk {
        for c in r..dk {
            let z: Complex64 = rows[r].iter().zip(&rows[c]).map(|(a, b)| a * b.conj()).sum();
            out.entries[r * dk + c] = z;
            out.entries[c * dk + r] = z.conj();
        }
    }
    Ok(out)
}

fn check_permutation(perm: &[usize], n_qubits: usize) -> Result<()> {
    if perm.len() != n_qubits {
        return Err(Error::Argument(format!(
            "permutation has {} entries for {n_qubits} qubits",
            perm.len()
        )));
    }
    let mut seen = vec![false; n_qubits];
    for &p in perm {
        if p >= n_qubits || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Argument(format!(
                "{perm:?} is not a permutation of 0..{n_qubits}"
            )));
        }
    }
    Ok(())
}

/// Relabels qubits: the qubit at position `i` moves to position `perm[i]`.
pub fn permute_qubits(state: &PureState, perm: &[usize]) -> Result<PureState> {
    let n = state.n_qubits();
    check_permutation(perm, n)?;
    let amps = state.amplitudes();
    let mut out = vec![C_ZERO; amps.len()];
    for (label, &amp) in amps.iter().enumerate() {
        let mut target = 0usize;
        for (i, &p) in perm.iter().enumerate() {
            if (label >> (n - 1 - i)) & 1 == 1 {
                target |= 1 << (n - 1 - p);
            }
        }
        out[target] = amp;
    }
    Ok(PureState::from_raw_unchecked(n, out))
}

/// Inverse of a qubit permutation.
pub fn invert_permutation(perm: &[usize]) -> Result<Vec<usize>> {
    check_permutation(perm, perm.len())?;
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    Ok(inv)
}
