//! Random states and unitaries for property checks and sampling.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::qlinalg::ComplexMatrix;
use crate::qstates::{DensityOperator, PureState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Random Hermitian matrix with Gaussian entries.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let entries = (0..dim * dim).map(|_| gaussian(rng)).collect();
    ComplexMatrix::new(dim, entries)
        .expect("finite Gaussian entries")
        .symmetrized()
}

/// Haar-random pure state.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> PureState {
    let mut amps: Vec<Complex64> = (0..1usize << n_qubits).map(|_| gaussian(rng)).collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    PureState::new(n_qubits, amps).expect("normalized")
}

/// Density operator `G G† / Tr(G G†)` for a square Ginibre matrix `G`
/// (full rank almost surely).
pub fn density<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> DensityOperator {
    let dim = 1usize << n_qubits;
    let g = ComplexMatrix::new(dim, (0..dim * dim).map(|_| gaussian(rng)).collect()).expect("finite");
    let gg = g.matmul(&g.adjoint()).expect("square");
    let tr = gg.trace().re;
    DensityOperator::from_trusted(n_qubits, gg.scale(Complex64::new(tr.recip(), 0.0)))
}

/// Density operator of rank `rank` (mixture of `rank` random pure states).
pub fn density_with_rank<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize, rank: usize) -> DensityOperator {
    let dim = 1usize << n_qubits;
    let mut acc = ComplexMatrix::zeros(dim);
    let weights: Vec<f64> = (0..rank).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let psi = pure_state(rng, n_qubits);
        let proj = ComplexMatrix::outer(psi.amplitudes()).scale(Complex64::new(w / total, 0.0));
        let summed: Vec<Complex64> = acc.entries().iter().zip(proj.entries()).map(|(a, b)| a + b).collect();
        acc = ComplexMatrix::new(dim, summed).expect("finite");
    }
    DensityOperator::from_trusted(n_qubits, acc)
}

/// Haar-random 2x2 unitary (Gram-Schmidt on a Ginibre matrix).
pub fn unitary2<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let mut a = [gaussian(rng), gaussian(rng)];
    let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    a.iter_mut().for_each(|z| *z /= na);
    let mut b = [gaussian(rng), gaussian(rng)];
    let proj = a[0].conj() * b[0] + a[1].conj() * b[1];
    b[0] -= proj * a[0];
    b[1] -= proj * a[1];
    let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
    b.iter_mut().for_each(|z| *z /= nb);
    // columns a and b
    ComplexMatrix::new(2, vec![a[0], b[0], a[1], b[1]]).expect("finite")
}

/// `U rho U†` with `U = u_0 ⊗ u_1 ⊗ ... ⊗ u_{n-1}`.
pub fn conjugate_local(rho: &DensityOperator, unitaries: &[ComplexMatrix]) -> DensityOperator {
    assert_eq!(unitaries.len(), rho.n_qubits(), "one unitary per qubit");
    let mut u = unitaries[0].clone();
    for next in &unitaries[1..] {
        u = crate::qlinalg::kron(&u, next).expect("within size limit");
    }
    let m = u
        .matmul(rho.matrix())
        .and_then(|m| m.matmul(&u.adjoint()))
        .expect("matching dimensions");
    DensityOperator::from_trusted(rho.n_qubits(), m)
}
