//! Builders and seeded samplers for the operator classes under study.

mod binormal;
mod shift;

pub use binormal::{
    binormal_conjugation, binormal_matrix, block_certificates, random_binormal_spec, simultaneous_diagonalize,
    BinormalDecomposition, BinormalSpec,
};
pub use shift::{weighted_shift, ShiftKind, WeightedShiftSpec};

use crate::conjugation::{canonical_conjugation, flip_conjugation, Conjugation};
use crate::error::{CsoError, Result};
use crate::matcore::{hermitian_eig, CMatrix, C64};
use crate::random::{derive_seed, gaussian, haar_unitary, real_symmetric_gaussian, rng_from_seed};

const NORMALITY_TOL: f64 = 1e-9;
const COMMUTING_TOL: f64 = 1e-9;
const POSITIVITY_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;
const SQUARE_NORMAL_TOL: f64 = 1e-8;

/// `U·(A + iB)·U*` with real symmetric Gaussian `A`, `B` and Haar `U`,
/// together with its witness `S = U·Uᵀ`.
pub fn random_cso(n: usize, seed: u64) -> (CMatrix, Conjugation) {
    assert!(n >= 1, "dimension must be positive");
    let mut rng = rng_from_seed(seed);
    let a = real_symmetric_gaussian(n, &mut rng);
    let b = real_symmetric_gaussian(n, &mut rng);
    let m = CMatrix::from_fn(n, |i, j| C64::new(a[i][j], b[i][j]));
    let u = haar_unitary(n, &mut rng);
    let t = &(&u * &m) * &u.adjoint();
    let s = &u * &u.transpose();
    (t, Conjugation::from_trusted((&s + &s.transpose()).scale_real(0.5)))
}

/// `λI + J` with ones on the superdiagonal, symmetric for the flip.
pub fn jordan_block(n: usize, lambda: C64) -> (CMatrix, Conjugation) {
    assert!(n >= 1, "dimension must be positive");
    let t = &CMatrix::identity(n).scale(lambda) + &CMatrix::shift(n, false);
    let c = if n == 1 { canonical_conjugation(1) } else { flip_conjugation(n) };
    (t, c)
}

/// Block-diagonal direct sum. The conjugation is the direct sum of the
/// parts' conjugations when every part has one.
pub fn direct_sum(parts: &[CMatrix], conjs: &[Option<Conjugation>]) -> Result<(CMatrix, Option<Conjugation>)> {
    if parts.is_empty() {
        return Err(CsoError::InvalidSpec("direct sum needs at least one part".into()));
    }
    if conjs.len() != parts.len() {
        return Err(CsoError::InvalidSpec(format!(
            "{} parts but {} conjugation slots",
            parts.len(),
            conjs.len()
        )));
    }
    for (p, c) in parts.iter().zip(conjs) {
        if let Some(c) = c {
            p.ensure_same_dim(c.s())?;
        }
    }
    let t = CMatrix::block_diag(parts);
    let c = conjs
        .iter()
        .map(|c| c.as_ref().map(|c| c.s().clone()))
        .collect::<Option<Vec<_>>>()
        .map(|ss| Conjugation::from_trusted(CMatrix::block_diag(&ss)));
    Ok((t, c))
}

/// `(u·t·u*, S′ = u·S·uᵀ)`: the C-symmetry residual is preserved.
pub fn conjugate_by_unitary(t: &CMatrix, c: &Conjugation, u: &CMatrix) -> Result<(CMatrix, Conjugation)> {
    t.ensure_same_dim(u)?;
    t.ensure_same_dim(c.s())?;
    let residual = u.unitarity_residual();
    if residual > UNITARY_TOL * u.n() as f64 {
        return Err(CsoError::NotUnitary(residual));
    }
    let t2 = &(u * t) * &u.adjoint();
    let s = &(u * c.s()) * &u.transpose();
    Ok((t2, Conjugation::from_trusted((&s + &s.transpose()).scale_real(0.5))))
}

/// `U·(A ⊕ B)·U*` for independent random CSOs `A`, `B` (sizes split at
/// random) and Haar `U`. Returns the matrix, its conjugation, the size of
/// `A`, and `U`, so the block projection `U·(I ⊕ 0)·U*` is recoverable.
pub fn random_reducible_cso(n: usize, seed: u64) -> (CMatrix, Conjugation, usize, CMatrix) {
    assert!(n >= 2, "a reducible sample needs n ≥ 2");
    let mut rng = rng_from_seed(seed);
    let split = 1 + (gaussian(&mut rng).abs() * n as f64) as usize % (n - 1);
    let (a, ca) = random_cso(split, derive_seed(seed, 1));
    let (b, cb) = random_cso(n - split, derive_seed(seed, 2));
    let (t, c) = direct_sum(&[a, b], &[Some(ca), Some(cb)]).expect("two nonempty parts");
    let u = haar_unitary(n, &mut rng);
    let (t, c) = conjugate_by_unitary(&t, &c.expect("both parts carry conjugations"), &u)
        .expect("Haar sample is unitary");
    (t, c, split, u)
}

fn check_normal(m: &CMatrix, index: usize) -> Result<()> {
    let scale = m.frobenius_norm();
    if m.normality_residual() > NORMALITY_TOL * scale * scale {
        return Err(CsoError::NotNormal(index));
    }
    Ok(())
}

fn check_commuting(a: &CMatrix, b: &CMatrix, pair: (usize, usize)) -> Result<()> {
    if a.commutator(b).frobenius_norm() > COMMUTING_TOL * a.frobenius_norm() * b.frobenius_norm() {
        return Err(CsoError::NotCommuting(pair.0, pair.1));
    }
    Ok(())
}

/// `N ⊕ [[A, B], [0, −A]]` with `N`, `A` normal and `B ⪰ 0` commuting with
/// `A`; its square `N² ⊕ (A² ⊕ A²)` is normal. `nrm` may be omitted.
pub fn sqrt_normal_matrix(nrm: Option<&CMatrix>, a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.ensure_same_dim(b)?;
    if let Some(nrm) = nrm {
        nrm.ensure_finite()?;
        check_normal(nrm, 0)?;
    }
    a.ensure_finite()?;
    b.ensure_finite()?;
    check_normal(a, 1)?;
    let b_norm = b.frobenius_norm();
    if (b - &b.adjoint()).frobenius_norm() > POSITIVITY_TOL * b_norm {
        return Err(CsoError::NotPositive(f64::NAN));
    }
    if b.n() > 0 {
        let min_eig = hermitian_eig(b)?.values[0];
        if min_eig < -POSITIVITY_TOL * b_norm {
            return Err(CsoError::NotPositive(min_eig));
        }
    }
    check_commuting(a, b, (1, 2))?;

    let k = a.n();
    let mut r = CMatrix::zeros(2 * k);
    for i in 0..k {
        for j in 0..k {
            r[(i, j)] = a[(i, j)];
            r[(i, k + j)] = b[(i, j)];
            r[(k + i, k + j)] = -a[(i, j)];
        }
    }
    let t = match nrm {
        Some(nrm) => CMatrix::block_diag(&[nrm.clone(), r]),
        None => r,
    };
    let t2 = &t * &t;
    if t2.normality_residual() > SQUARE_NORMAL_TOL * (1.0 + t.frobenius_norm()).powi(4) {
        return Err(CsoError::NotNormal(0));
    }
    Ok(t)
}

/// A conjugation for [`sqrt_normal_matrix`]: the normal summand is
/// symmetric in its eigenbasis, and the `2×2` block part is binormal.
pub fn sqrt_normal_conjugation(nrm: Option<&CMatrix>, a: &CMatrix, b: &CMatrix) -> Result<Conjugation> {
    let k = a.n();
    let spec = BinormalSpec::new(vec![a.clone(), b.clone(), CMatrix::zeros(k), a.scale_real(-1.0)])?;
    let block = binormal_conjugation(&binormal_matrix(&spec)?)?;
    match nrm {
        Some(nrm) if nrm.n() > 0 => {
            let v = simultaneous_diagonalize(std::slice::from_ref(nrm))?;
            let s = &v * &v.transpose();
            let normal = Conjugation::from_trusted((&s + &s.transpose()).scale_real(0.5));
            Ok(Conjugation::from_trusted(CMatrix::block_diag(&[normal.s().clone(), block.s().clone()])))
        }
        _ => Ok(block),
    }
}

/// Seeded inputs for [`sqrt_normal_matrix`]: a normal `N` of size
/// `n_normal` (possibly 0) and commuting `A` normal, `B ⪰ 0` of size `k`.
pub fn random_sqrt_normal_inputs(n_normal: usize, k: usize, seed: u64) -> (Option<CMatrix>, CMatrix, CMatrix) {
    assert!(k >= 1, "block size must be positive");
    let mut rng = rng_from_seed(seed);
    let nrm = (n_normal > 0).then(|| {
        let w = haar_unitary(n_normal, &mut rng);
        let d: Vec<C64> = (0..n_normal).map(|_| C64::new(gaussian(&mut rng), gaussian(&mut rng))).collect();
        &(&w * &CMatrix::diag(&d)) * &w.adjoint()
    });
    let v = haar_unitary(k, &mut rng);
    let da: Vec<C64> = (0..k).map(|_| C64::new(gaussian(&mut rng), gaussian(&mut rng))).collect();
    let db: Vec<f64> = (0..k).map(|_| gaussian(&mut rng).abs()).collect();
    let a = &(&v * &CMatrix::diag(&da)) * &v.adjoint();
    let b = {
        let m = &(&v * &CMatrix::diag_real(&db)) * &v.adjoint();
        (&m + &m.adjoint()).scale_real(0.5)
    };
    (nrm, a, b)
}
