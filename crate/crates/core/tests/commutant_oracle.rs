//! Commutant dimension against an independent dense Gaussian-elimination
//! rank of the same constraint system.

mod common;

use common::{corpus, oracle_dimension};
use cso_core::commutant::{commutant_dimension, reducing_projection, Reduction, DEFAULT_COMMUTANT_TOL};
use cso_core::models::{jordan_block, random_cso, random_reducible_cso};
use cso_core::random::{derive_seed, haar_unitary, rng_from_seed};
use cso_core::{CMatrix, C64};
#[test]
fn kronecker_svd_matches_elimination() {
    let corpus = corpus();
    assert_eq!(corpus.len(), 50);
    for (i, t) in corpus.iter().enumerate() {
        let report = commutant_dimension(t, DEFAULT_COMMUTANT_TOL).unwrap();
        assert!(!report.ambiguous, "matrix {i} ambiguous (gap {})", report.gap);
        assert_eq!(report.dimension, oracle_dimension(t), "matrix {i}: {t:?}");
    }
}

#[test]
fn jordan_blocks_are_irreducible() {
    for n in 2..=10 {
        let (t, _) = jordan_block(n, C64::new(0.0, 0.0));
        let report = commutant_dimension(&t, DEFAULT_COMMUTANT_TOL).unwrap();
        assert_eq!(report.dimension, 1, "J_{n}(0)");
        if n <= 5 {
            assert_eq!(oracle_dimension(&t), 1);
        }
    }
}

#[test]
fn identity_commutant_is_everything() {
    for n in 1..=5 {
        assert_eq!(commutant_dimension(&CMatrix::identity(n), DEFAULT_COMMUTANT_TOL).unwrap().dimension, n * n);
    }
}

#[test]
fn basis_elements_satisfy_the_constraints() {
    for t in corpus() {
        let report = commutant_dimension(&t, DEFAULT_COMMUTANT_TOL).unwrap();
        let t_star = t.adjoint();
        for x in &report.basis {
            let res = x.commutator(&t).frobenius_norm() + x.commutator(&t_star).frobenius_norm();
            assert!(res <= 1e-7 * (1.0 + t.frobenius_norm()) * x.frobenius_norm());
        }
    }
}

#[test]
fn reducing_projections_are_projections() {
    for seed in 0..20u64 {
        let n = 2 + (seed % 7) as usize;
        let (t, _, _, _) = random_reducible_cso(n, derive_seed(64, seed));
        let Reduction::Found(p) = reducing_projection(&t, DEFAULT_COMMUTANT_TOL).unwrap() else {
            panic!("seed {seed}: reducible sample without projection");
        };
        assert!((&(&p * &p) - &p).frobenius_norm() <= 1e-8);
        assert!((&p - &p.adjoint()).frobenius_norm() <= 1e-8);
        let rank = p.trace().re.round() as usize;
        assert!((1..n).contains(&rank));
        assert!((&(&p * &t) - &(&t * &p)).frobenius_norm() <= 1e-7 * (1.0 + t.frobenius_norm()));
    }
}

#[test]
fn dimension_is_unitarily_invariant() {
    for seed in 0..100u64 {
        let n = 1 + (seed % 8) as usize;
        let t = match seed % 3 {
            0 => random_cso(n, seed).0,
            1 if n >= 2 => random_reducible_cso(n, seed).0,
            _ => jordan_block(n, C64::new(1.0, 1.0)).0,
        };
        let u = haar_unitary(n, &mut rng_from_seed(derive_seed(65, seed)));
        let moved = &(&u * &t) * &u.adjoint();
        let a = commutant_dimension(&t, DEFAULT_COMMUTANT_TOL).unwrap().dimension;
        let b = commutant_dimension(&moved, DEFAULT_COMMUTANT_TOL).unwrap().dimension;
        assert_eq!(a, b, "seed {seed}");
    }
}
