//! Commutant of `{T, T*}` and irreducibility.
//!
//! The commutant is the null space of the stacked linear map
//! `X ↦ (XT − TX, XT* − T*X)`, assembled as a `2n² × n²` matrix
//! (the Kronecker blocks `Tᵀ⊗I − I⊗T` and `T̄⊗I − I⊗T*` in row-major
//! vectorization) and read off its singular values.

use serde::Serialize;

use crate::error::{CsoError, Result};
use crate::matcore::{hermitian_eig, rect_right_singular, rect_singular_values, CMatrix, C64, I, ZERO};

pub const DEFAULT_COMMUTANT_TOL: f64 = 1e-8;
/// Retained/discarded singular-value ratio below which the numerical
/// dimension is flagged as ambiguous.
pub const MIN_GAP_RATIO: f64 = 10.0;

const COMMUTATION_TOL: f64 = 1e-7;

#[derive(Clone, Debug, Serialize)]
pub struct CommutantReport {
    /// Numerical dimension of `{X : XT = TX, XT* = T*X}`.
    pub dimension: usize,
    /// Frobenius-orthonormal basis of the commutant (empty when only the
    /// summary was requested).
    #[serde(skip)]
    pub basis: Vec<CMatrix>,
    /// Smallest retained over largest discarded singular value; infinite
    /// when the split is exact. Serialized as `null` in that case.
    pub gap: f64,
    /// `gap < MIN_GAP_RATIO`.
    pub ambiguous: bool,
}

impl CommutantReport {
    /// Fails with `NumericalAmbiguity` when the dimension is not well
    /// separated.
    pub fn ensure_unambiguous(&self) -> Result<()> {
        if self.ambiguous {
            Err(CsoError::NumericalAmbiguity(format!(
                "commutant dimension {} has singular-value gap ratio {:.3e} < {MIN_GAP_RATIO}",
                self.dimension, self.gap
            )))
        } else {
            Ok(())
        }
    }
}

/// Columns of the stacked constraint operator, one per matrix unit `E_ab`
/// (row-major index `a·n + b`).
fn constraint_columns(t: &CMatrix) -> Vec<Vec<C64>> {
    let n = t.n();
    let t_star = t.adjoint();
    let mut cols = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut col = vec![ZERO; 2 * n * n];
            for (block, m) in [t, &t_star].into_iter().enumerate() {
                let out = &mut col[block * n * n..(block + 1) * n * n];
                // E_ab·M = e_a ⊗ (row b of M)
                for j in 0..n {
                    out[a * n + j] += m[(b, j)];
                }
                // M·E_ab = (column a of M) ⊗ e_b
                for i in 0..n {
                    out[i * n + b] -= m[(i, a)];
                }
            }
            cols.push(col);
        }
    }
    cols
}

fn split(sigma: &[f64], tol: f64) -> (usize, f64) {
    let threshold = tol * sigma[0].max(1.0);
    let dimension = sigma.iter().filter(|&&s| s <= threshold).count();
    let rank = sigma.len() - dimension;
    let gap = if rank == 0 {
        f64::INFINITY
    } else {
        let retained = sigma[rank - 1];
        let discarded = sigma[rank];
        if discarded == 0.0 {
            f64::INFINITY
        } else {
            retained / discarded
        }
    };
    (dimension, gap)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CsoError::InvalidTolerance(tol))
    }
}

/// Numerical commutant of `{T, T*}` with an orthonormal basis.
///
/// Ambiguity (gap ratio below 10) is reported in the returned value, not
/// as an error; see [`CommutantReport::ensure_unambiguous`].
pub fn commutant_dimension(t: &CMatrix, tol: f64) -> Result<CommutantReport> {
    check_tol(tol)?;
    t.ensure_finite()?;
    let n = t.n();
    let (sigma, vecs) = rect_right_singular(constraint_columns(t), 2 * n * n)?;
    let (dimension, gap) = split(&sigma, tol);
    let basis = vecs[sigma.len() - dimension..]
        .iter()
        .map(|v| CMatrix::new(n, v.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CommutantReport {
        dimension,
        basis,
        gap,
        ambiguous: gap < MIN_GAP_RATIO,
    })
}

/// Dimension and gap only; skips the basis (about half the work).
pub fn commutant_summary(t: &CMatrix, tol: f64) -> Result<CommutantReport> {
    check_tol(tol)?;
    t.ensure_finite()?;
    let n = t.n();
    let sigma = rect_singular_values(constraint_columns(t), 2 * n * n)?;
    let (dimension, gap) = split(&sigma, tol);
    Ok(CommutantReport {
        dimension,
        basis: Vec::new(),
        gap,
        ambiguous: gap < MIN_GAP_RATIO,
    })
}

/// `true` iff the commutant of `{T, T*}` is the scalars.
pub fn is_irreducible(t: &CMatrix, tol: f64) -> Result<bool> {
    let report = commutant_summary(t, tol)?;
    report.ensure_unambiguous()?;
    Ok(report.dimension == 1)
}

#[derive(Clone, Debug)]
pub enum Reduction {
    /// A nontrivial orthogonal projection commuting with `T`.
    Found(CMatrix),
    NoneExists,
}

/// Extracts a nontrivial reducing projection when the commutant is larger
/// than the scalars.
///
/// Hermitian elements `X + X*` and `i(X − X*)` of the commutant are
/// spectrally split; their spectral projections stay in the commutant. The
/// split is placed in the widest gap of the (traceless) spectrum, which is
/// always a genuine gap between distinct eigenvalue clusters.
pub fn reducing_projection(t: &CMatrix, tol: f64) -> Result<Reduction> {
    let report = commutant_dimension(t, tol)?;
    report.ensure_unambiguous()?;
    if report.dimension <= 1 {
        return Ok(Reduction::NoneExists);
    }
    let n = t.n();
    let bound = COMMUTATION_TOL * (1.0 + t.frobenius_norm());
    for x in &report.basis {
        let x_star = x.adjoint();
        for h in [&*x + &x_star, (x - &x_star).scale(I)] {
            if let Some(p) = split_hermitian(&h)? {
                if (&(&p * t) - &(t * &p)).frobenius_norm() <= bound {
                    return Ok(Reduction::Found(p));
                }
            }
        }
    }
    let _ = n;
    Err(CsoError::NumericalAmbiguity(
        "commutant larger than the scalars but no element yields a reducing projection".into(),
    ))
}

/// Spectral projection of a Hermitian `h` onto the eigenvalues above its
/// widest spectral gap, or `None` if `h` is numerically scalar.
fn split_hermitian(h: &CMatrix) -> Result<Option<CMatrix>> {
    let n = h.n();
    let shift = h.trace() / n as f64;
    let h0 = h - &CMatrix::identity(n).scale(shift);
    let scale = h.frobenius_norm().max(1e-300);
    if h0.frobenius_norm() <= 1e-6 * scale {
        return Ok(None);
    }
    let eig = hermitian_eig(&h0)?;
    let (cut, width) = eig
        .values
        .windows(2)
        .enumerate()
        .map(|(i, w)| (i + 1, w[1] - w[0]))
        .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    if width <= 1e-6 * scale {
        return Ok(None);
    }
    let cols: Vec<Vec<C64>> = (cut..n).map(|j| eig.vectors.column(j)).collect();
    let p = CMatrix::from_fn(n, |i, k| cols.iter().map(|v| v[i] * v[k].conj()).sum());
    Ok(Some(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_commutes_with_everything() {
        let r = commutant_dimension(&CMatrix::identity(3), DEFAULT_COMMUTANT_TOL).unwrap();
        assert_eq!(r.dimension, 9);
        assert_eq!(r.basis.len(), 9);
        assert!(!r.ambiguous);
    }

    #[test]
    fn distinct_diagonal() {
        let t = CMatrix::diag_real(&[1.0, 2.0]);
        let r = commutant_dimension(&t, DEFAULT_COMMUTANT_TOL).unwrap();
        assert_eq!(r.dimension, 2);
        assert!(!is_irreducible(&t, DEFAULT_COMMUTANT_TOL).unwrap());
        match reducing_projection(&t, DEFAULT_COMMUTANT_TOL).unwrap() {
            Reduction::Found(p) => {
                let d0 = CMatrix::diag_real(&[1.0, 0.0]);
                let d1 = CMatrix::diag_real(&[0.0, 1.0]);
                let e = (&p - &d0).frobenius_norm().min((&p - &d1).frobenius_norm());
                assert!(e < 1e-10, "{p:?}");
            }
            Reduction::NoneExists => panic!("diag(1,2) is reducible"),
        }
    }

    #[test]
    fn jordan_blocks_are_irreducible() {
        let j2 = CMatrix::shift(2, false);
        assert_eq!(commutant_dimension(&j2, DEFAULT_COMMUTANT_TOL).unwrap().dimension, 1);
        let j3 = CMatrix::shift(3, false);
        assert!(matches!(
            reducing_projection(&j3, DEFAULT_COMMUTANT_TOL).unwrap(),
            Reduction::NoneExists
        ));
    }

    #[test]
    fn one_by_one_is_irreducible() {
        let t = CMatrix::diag(&[C64::new(2.0, -1.0)]);
        assert!(is_irreducible(&t, DEFAULT_COMMUTANT_TOL).unwrap());
    }

    #[test]
    fn basis_elements_commute() {
        let t = CMatrix::block_diag(&[CMatrix::shift(2, false), CMatrix::diag_real(&[5.0])]);
        let r = commutant_dimension(&t, DEFAULT_COMMUTANT_TOL).unwrap();
        assert_eq!(r.dimension, 2);
        let t_star = t.adjoint();
        for x in &r.basis {
            let res = x.commutator(&t).frobenius_norm() + x.commutator(&t_star).frobenius_norm();
            assert!(res <= 1e-7 * (1.0 + t.frobenius_norm()) * x.frobenius_norm());
        }
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(commutant_dimension(&CMatrix::identity(2), 0.0).is_err());
        assert!(is_irreducible(&CMatrix::identity(2), f64::NAN).is_err());
    }
}
