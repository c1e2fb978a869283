use std::f64::consts::LN_2;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcorr_core::correlation::{subset_entropy, total_correlation_unclamped};
use qcorr_core::qlinalg::{hermitian_eigen, invert_permutation};
use qcorr_core::qstates::validate_density;
use qcorr_core::{
    bell_product, decompose, enumerate_bipartitions, ghz, hermitian_eigenvalues, is_product_across, kron,
    min_purifying_qubits, partial_trace, permute_qubits, purify, random, spectral_rank, to_density, total_correlation,
    uniform_entangled, von_neumann_entropy, ComplexMatrix, CorrelationAnalysis, DensityOperator, Partition, PureState,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.matmul(b).unwrap().trace()
}

/// Matrix with entries k/8 + i m/8 for small integers k, m.
fn dyadic<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let entries = (0..dim * dim)
        .map(|_| {
            Complex64::new(
                rng.random_range(-16i32..=16) as f64 / 8.0,
                rng.random_range(-16i32..=16) as f64 / 8.0,
            )
        })
        .collect();
    ComplexMatrix::new(dim, entries).unwrap()
}

fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.random_range(0..=i));
    }
    p
}

fn random_local_conjugation<R: Rng>(rng: &mut R, rho: &DensityOperator) -> DensityOperator {
    let us: Vec<_> = (0..rho.n_qubits()).map(|_| random::unitary2(rng)).collect();
    random::conjugate_local(rho, &us)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kron_is_associative_and_multiplies_traces(seed: u64, da in 1usize..5, db in 1usize..4, dc in 1usize..4) {
        let mut r = rng(seed);
        // Dyadic entries keep every product exact, so the regrouping must be bit-identical.
        let (a, b, c) = (dyadic(&mut r, da), dyadic(&mut r, db), dyadic(&mut r, dc));
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.entries(), right.entries());

        let (a, b, c) = (random::hermitian(&mut r, da), random::hermitian(&mut r, db), random::hermitian(&mut r, dc));
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        for (x, y) in left.entries().iter().zip(right.entries()) {
            prop_assert!((x - y).norm() <= 4.0 * f64::EPSILON * x.norm().max(y.norm()));
        }
        let t = kron(&a, &b).unwrap().trace();
        prop_assert!((t - a.trace() * b.trace()).norm() <= 1e-12 * (1.0 + t.norm()));
    }

    #[test]
    fn tracing_out_everything_leaves_the_trace(seed: u64, n in 1usize..5) {
        let rho = random::density(&mut rng(seed), n);
        let scalar = partial_trace(rho.matrix(), n, &[]).unwrap();
        prop_assert_eq!(scalar.dim(), 1);
        prop_assert!((scalar.get(0, 0) - rho.matrix().trace()).norm() <= 1e-12);
    }

    #[test]
    fn partial_trace_recovers_left_factor(seed: u64, na in 1usize..3, nb in 1usize..3) {
        let mut r = rng(seed);
        let (a, b) = (random::density(&mut r, na), random::density(&mut r, nb));
        let joint = kron(a.matrix(), b.matrix()).unwrap();
        let left: Vec<usize> = (0..na).collect();
        let back = partial_trace(&joint, na + nb, &left).unwrap();
        prop_assert!(back.max_abs_diff(a.matrix()) <= 1e-12);
        let t = back.trace();
        prop_assert!((t.re - 1.0).abs() <= 1e-12 && t.im.abs() <= 1e-12);
        prop_assert!(back.hermiticity_deviation() <= 1e-12);
    }

    #[test]
    fn eigenvalues_match_trace_invariants(seed: u64, dim in 1usize..=64) {
        let m = random::hermitian(&mut rng(seed), dim);
        let spec = hermitian_eigenvalues(&m, 1e-10).unwrap();
        prop_assert!(spec.values.windows(2).all(|w| w[0] <= w[1]));
        let sum: f64 = spec.values.iter().sum();
        let sum_sq: f64 = spec.values.iter().map(|v| v * v).sum();
        prop_assert!((sum - m.trace().re).abs() <= 1e-9);
        prop_assert!((sum_sq - trace_product(&m, &m).re).abs() <= 1e-9 * (1.0 + sum_sq));
        prop_assert!(spec.residual <= 1e-12 * m.frobenius_norm().max(1.0));
    }

    #[test]
    fn unit_trace_spectra_sum_to_one(seed: u64, n in 1usize..5) {
        let rho = random::density(&mut rng(seed), n);
        let spec = hermitian_eigenvalues(rho.matrix(), 1e-10).unwrap();
        prop_assert!((spec.values.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn eigenvectors_reconstruct_the_matrix(seed: u64, dim in 1usize..=24) {
        let m = random::hermitian(&mut rng(seed), dim);
        let dec = hermitian_eigen(&m, 1e-10).unwrap();
        let mut acc = ComplexMatrix::zeros(dim);
        for (lambda, v) in dec.values.iter().zip(&dec.vectors) {
            let p = ComplexMatrix::outer(v);
            for i in 0..dim {
                for j in 0..dim {
                    acc.set(i, j, acc.get(i, j) + p.get(i, j) * lambda);
                }
            }
        }
        prop_assert!(acc.max_abs_diff(&m) <= 1e-9 * (1.0 + m.frobenius_norm()));
    }

    #[test]
    fn permutation_then_inverse_is_bit_exact(seed: u64, n in 1usize..7) {
        let mut r = rng(seed);
        let s = random::pure_state(&mut r, n);
        let perm = random_permutation(&mut r, n);
        let there = permute_qubits(&s, &perm).unwrap();
        let back = permute_qubits(&there, &invert_permutation(&perm).unwrap()).unwrap();
        prop_assert_eq!(back.amplitudes(), s.amplitudes());
        // Amplitudes are moved, never recomputed.
        let key = |z: &Complex64| (z.re.to_bits(), z.im.to_bits());
        let mut moved: Vec<_> = there.amplitudes().iter().map(key).collect();
        let mut orig: Vec<_> = s.amplitudes().iter().map(key).collect();
        moved.sort_unstable();
        orig.sort_unstable();
        prop_assert_eq!(moved, orig);
    }

    #[test]
    fn total_correlation_is_additive(seed: u64, na in 1usize..=3, nb in 1usize..=3) {
        let mut r = rng(seed);
        let (a, b) = (random::density(&mut r, na), random::density(&mut r, nb));
        let joint = a.tensor(&b).unwrap();
        let err = total_correlation(&joint) - total_correlation(&a) - total_correlation(&b);
        prop_assert!(err.abs() <= 1e-8, "error {}", err);
    }

    #[test]
    fn total_correlation_is_nonnegative(seed: u64, n in 1usize..=4, rank in 1usize..=16) {
        let mut r = rng(seed);
        let rho = random::density_with_rank(&mut r, n, rank.min(1 << n));
        prop_assert!(total_correlation_unclamped(&rho) >= -1e-9);
    }

    #[test]
    fn local_unitaries_preserve_total_correlation(seed: u64, n in 1usize..=4) {
        let mut r = rng(seed);
        let rho = random::density(&mut r, n);
        let turned = random_local_conjugation(&mut r, &rho);
        prop_assert!((total_correlation(&turned) - total_correlation(&rho)).abs() <= 1e-8);
    }

    #[test]
    fn pure_states_have_equal_side_entropies(seed: u64, n in 2usize..=6) {
        let rho = to_density(&random::pure_state(&mut rng(seed), n));
        for p in enumerate_bipartitions(n, None).unwrap() {
            let (a, b) = (subset_entropy(&rho, p.alpha()).unwrap(), subset_entropy(&rho, p.beta()).unwrap());
            prop_assert!((a - b).abs() <= 1e-9, "{}: {} vs {}", p, a, b);
        }
    }

    #[test]
    fn decomposition_total_is_partition_independent(seed: u64, n in 2usize..=4, rank in 1usize..=16) {
        let rho = random::density_with_rank(&mut rng(seed), n, rank.min(1 << n));
        let total = total_correlation(&rho);
        for p in enumerate_bipartitions(n, None).unwrap() {
            let d = decompose(&rho, &p).unwrap();
            prop_assert!((d.total - total).abs() <= 1e-8);
            prop_assert!(d.additivity_error() <= 1e-8);
        }
    }

    #[test]
    fn external_is_invariant_under_within_side_permutations(seed: u64, n in 2usize..=5) {
        let mut r = rng(seed);
        let s = random::pure_state(&mut r, n);
        let alpha_len = r.random_range(1..n);
        let part = Partition::new((0..alpha_len).collect(), (alpha_len..n).collect()).unwrap();
        let mut perm: Vec<usize> = Vec::with_capacity(n);
        let pa = random_permutation(&mut r, alpha_len);
        let pb = random_permutation(&mut r, n - alpha_len);
        perm.extend(pa);
        perm.extend(pb.iter().map(|q| q + alpha_len));
        let moved = permute_qubits(&s, &perm).unwrap();
        let before = decompose(&to_density(&s), &part).unwrap().external;
        let after = decompose(&to_density(&moved), &part).unwrap().external;
        prop_assert!((before - after).abs() <= 1e-9);
    }

    #[test]
    fn zero_external_iff_product_for_pure_states(seed: u64, n in 2usize..=4, make_product: bool) {
        let mut r = rng(seed);
        let alpha_len = r.random_range(1..n);
        let s = if make_product {
            let a = random::pure_state(&mut r, alpha_len);
            let b = random::pure_state(&mut r, n - alpha_len);
            a.tensor(&b).unwrap()
        } else {
            random::pure_state(&mut r, n)
        };
        let perm = random_permutation(&mut r, n);
        let s = permute_qubits(&s, &perm).unwrap();
        let alpha: Vec<usize> = (0..alpha_len).map(|q| perm[q]).collect();
        let part = Partition::from_alpha(n, alpha).unwrap();
        let rho = to_density(&s);
        let external = decompose(&rho, &part).unwrap().external;
        let product = is_product_across(&rho, &part, 1e-9).unwrap();
        prop_assert_eq!(external <= 1e-9, product, "external {}", external);
        prop_assert_eq!(product, make_product);
    }

    #[test]
    fn pure_state_analysis_matches_dense(seed: u64, n in 2usize..=5, make_product: bool) {
        let mut r = rng(seed);
        let s = if make_product {
            let k = r.random_range(1..n);
            random::pure_state(&mut r, k).tensor(&random::pure_state(&mut r, n - k)).unwrap()
        } else {
            random::pure_state(&mut r, n)
        };
        let rho = to_density(&s);
        let dense = CorrelationAnalysis::new(&rho);
        let fast = CorrelationAnalysis::for_pure_state(&s).unwrap();
        for p in enumerate_bipartitions(n, None).unwrap() {
            let (a, b) = (dense.decompose(&p).unwrap(), fast.decompose(&p).unwrap());
            prop_assert!((a.external - b.external).abs() <= 1e-9);
            prop_assert!((a.internal_alpha - b.internal_alpha).abs() <= 1e-9);
            prop_assert!((a.internal_beta - b.internal_beta).abs() <= 1e-9);
            prop_assert_eq!(dense.is_product_across(&p, 1e-9).unwrap(), fast.is_product_across(&p, 1e-9).unwrap(), "{}", p);
        }
    }

    #[test]
    fn internal_plus_side_entropy_is_maximal(seed: u64, which in 0usize..3) {
        let mut r = rng(seed);
        let s: PureState = match which {
            0 => ghz(4).unwrap(),
            1 => uniform_entangled(2).unwrap(),
            _ => bell_product(2).unwrap(),
        };
        let rho = random_local_conjugation(&mut r, &to_density(&s));
        for p in enumerate_bipartitions(4, None).unwrap() {
            let d = decompose(&rho, &p).unwrap();
            let s_alpha = subset_entropy(&rho, p.alpha()).unwrap();
            let want = p.alpha().len() as f64 * LN_2;
            prop_assert!((d.internal_alpha + s_alpha - want).abs() <= 1e-8, "{}", p);
        }
    }

    #[test]
    fn purification_round_trips(seed: u64, n in 1usize..=3, rank in 1usize..=8) {
        let rho = random::density_with_rank(&mut rng(seed), n, rank.min(1 << n));
        let res = purify(&rho).unwrap();
        prop_assert!(res.residual <= 1e-9);
        prop_assert_eq!(res.ancilla_qubits, min_purifying_qubits(&rho));
        let system: Vec<usize> = (0..n).collect();
        let ancilla: Vec<usize> = (n..n + res.ancilla_qubits).collect();
        let whole = to_density(&res.purified);
        prop_assert!(whole.reduce(&system).unwrap().matrix().max_abs_diff(rho.matrix()) <= 1e-9);
        if !ancilla.is_empty() {
            let s_anc = subset_entropy(&whole, &ancilla).unwrap();
            prop_assert!((s_anc - von_neumann_entropy(&rho)).abs() <= 1e-8);
        }
    }

    #[test]
    fn one_ancilla_exactly_at_rank_two(seed: u64, n in 1usize..=3, rank in 1usize..=8) {
        let rho = random::density_with_rank(&mut rng(seed), n, rank.min(1 << n));
        let rank = spectral_rank(&rho, 1e-10);
        prop_assert_eq!(min_purifying_qubits(&rho) == 1, rank == 2);
    }

    #[test]
    fn random_operators_validate(seed: u64, n in 1usize..=4) {
        let rho = random::density(&mut rng(seed), n);
        prop_assert!(validate_density(rho.matrix().clone(), n).is_ok());
    }
}

#[test]
fn named_constructors_validate() {
    let states = [
        ghz(2).unwrap(),
        ghz(5).unwrap(),
        uniform_entangled(1).unwrap(),
        uniform_entangled(3).unwrap(),
        bell_product(3).unwrap(),
        qcorr_core::ghz_block_product(3).unwrap(),
    ];
    for s in &states {
        let rho = to_density(s);
        let checked = validate_density(rho.matrix().clone(), s.n_qubits()).unwrap();
        assert!(von_neumann_entropy(&checked) <= 1e-9);
    }
}
