//! Property-based invariants of the linear-algebra kernels and the
//! conjugation / certificate machinery.

use cso_core::conjugation::{apply_conjugation, c_real_basis, inner_product_defect, random_conjugation, verify_conjugation};
use cso_core::matcore::{eig_general, hermitian_eig, operator_norm, svd};
use cso_core::models::{conjugate_by_unitary, random_cso};
use cso_core::random::{complex_gaussian, ginibre, haar_unitary, rng_from_seed};
use cso_core::symmetry::c_symmetry_residual;
use cso_core::{CMatrix, C64};
use proptest::prelude::*;

fn sample(n: usize, seed: u64) -> CMatrix {
    ginibre(n, &mut rng_from_seed(seed))
}

fn vector(n: usize, seed: u64) -> Vec<C64> {
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| complex_gaussian(&mut rng)).collect()
}

fn norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operator_norm_is_unitarily_invariant(n in 1usize..9, seed in any::<u64>()) {
        let a = sample(n, seed);
        let u = haar_unitary(n, &mut rng_from_seed(seed ^ 1));
        let v = haar_unitary(n, &mut rng_from_seed(seed ^ 2));
        let moved = &(&u * &a) * &v;
        let (x, y) = (operator_norm(&a).unwrap(), operator_norm(&moved).unwrap());
        prop_assert!((x - y).abs() <= 1e-12 * x.max(1.0));
    }

    #[test]
    fn operator_norm_brackets(n in 1usize..9, seed in any::<u64>()) {
        let a = sample(n, seed);
        let op = operator_norm(&a).unwrap();
        let fro = a.frobenius_norm();
        prop_assert!(op <= fro * (1.0 + 1e-12));
        prop_assert!(fro <= (n as f64).sqrt() * op * (1.0 + 1e-12));
        prop_assert!(a.max_abs() <= op * (1.0 + 1e-12));
    }

    #[test]
    fn svd_reconstructs(n in 1usize..9, seed in any::<u64>()) {
        let a = sample(n, seed);
        let r = svd(&a).unwrap();
        let rebuilt = &(&r.u * &CMatrix::diag_real(&r.sigma)) * &r.v.adjoint();
        prop_assert!((&rebuilt - &a).frobenius_norm() <= 1e-12 * a.frobenius_norm().max(1.0));
        prop_assert!(r.u.unitarity_residual() <= 1e-12 * n as f64);
        prop_assert!(r.sigma.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn trace_is_eigenvalue_sum(n in 1usize..9, seed in any::<u64>()) {
        let a = sample(n, seed);
        let sum: C64 = eig_general(&a).unwrap().iter().sum();
        prop_assert!((sum - a.trace()).norm() <= 1e-10 * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn eigenvalues_survive_similarity(n in 1usize..7, seed in any::<u64>()) {
        let a = sample(n, seed);
        let u = haar_unitary(n, &mut rng_from_seed(seed ^ 3));
        let b = &(&u * &a) * &u.adjoint();
        let ea = eig_general(&a).unwrap();
        let eb = eig_general(&b).unwrap();
        // Symmetric matching distance: each eigenvalue has a partner.
        for (x, ys) in [(&ea, &eb), (&eb, &ea)] {
            for z in x {
                let d = ys.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(d <= 1e-8 * a.frobenius_norm().max(1.0), "{z} unmatched");
            }
        }
    }

    #[test]
    fn hermitian_eig_diagonalizes(n in 1usize..9, seed in any::<u64>()) {
        let g = sample(n, seed);
        let h = (&g + &g.adjoint()).scale_real(0.5);
        let e = hermitian_eig(&h).unwrap();
        let d = &(&e.vectors.adjoint() * &h) * &e.vectors;
        prop_assert!(d.off_diagonal_norm() <= 1e-12 * h.frobenius_norm().max(1.0));
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn conjugation_laws(n in 1usize..17, seed in any::<u64>()) {
        let c = random_conjugation(n, seed);
        let check = verify_conjugation(c.s());
        prop_assert!(check.symmetry_residual <= 1e-10 * n as f64);
        prop_assert!(check.unitarity_residual <= 1e-10 * n as f64);

        let x = vector(n, seed ^ 4);
        let y = vector(n, seed ^ 5);
        let back = apply_conjugation(&c, &apply_conjugation(&c, &x).unwrap()).unwrap();
        let diff: Vec<C64> = back.iter().zip(&x).map(|(a, b)| a - b).collect();
        prop_assert!(norm(&diff) <= 1e-12 * norm(&x));
        // Isometric and conjugate-linear: <Cx, Cy> = conj(<x, y>).
        prop_assert!(inner_product_defect(&c, &x, &y).unwrap() <= 1e-12 * norm(&x) * norm(&y));
        let basis = c_real_basis(&c).unwrap();
        prop_assert!(basis.fixedness_residual(&c) <= 1e-9);
        prop_assert!(basis.takagi_residual(&c) <= 1e-9);
    }

    #[test]
    fn certificate_is_covariant(n in 1usize..8, seed in any::<u64>()) {
        let (t, c) = random_cso(n, seed);
        let u = haar_unitary(n, &mut rng_from_seed(seed ^ 6));
        let (t2, c2) = conjugate_by_unitary(&t, &c, &u).unwrap();
        let before = c_symmetry_residual(&t, &c).unwrap();
        let after = c_symmetry_residual(&t2, &c2).unwrap();
        prop_assert!(before <= 1e-10);
        prop_assert!((before - after).abs() <= 1e-9);
    }
}
