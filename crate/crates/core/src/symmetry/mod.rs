//! C-symmetry certificates, conjugation search, and g-normality defects.

mod poly;

use serde::{Deserialize, Serialize};

use crate::conjugation::{canonical_conjugation, verify_conjugation, Conjugation, DEFAULT_CONJUGATION_TOL};
use crate::error::{CsoError, Result};
use crate::matcore::{frobenius_inner, hermitian_eig, rect_right_singular, svd, CMatrix, C64, ZERO};
use crate::random::{complex_gaussian, derive_seed, rng_from_seed};

pub use poly::{
    gnormal_defect, random_polynomials, standard_polynomials, trace_defect, word_eval, NcPolynomial,
    Term, MAX_WORD_LEN, STANDARD_SET_MAX_LEN, STANDARD_SET_SEED, STANDARD_SET_SIZE,
};

/// Largest relative residual accepted in a certificate.
pub const CERTIFICATE_TOL: f64 = 1e-8;

pub const DEFAULT_RESTARTS: usize = 8;
pub const DEFAULT_MAX_ITER: usize = 500;

const SEARCH_SEED: u64 = 0xC0_4A7E;
const NULL_SPACE_TOL: f64 = 1e-9;
const PROJECTION_TOL: f64 = 1e-10;
const PHASE_GRID: usize = 16;
const MIN_PHASE_GAP: f64 = 1e-6;
const EDGE_TOL: f64 = 1e-10;

/// `‖S·conj(T) − T*·S‖_F / max(1, ‖T‖_F)`, the `S`-form of `CTC = T*`.
pub fn c_symmetry_residual(t: &CMatrix, c: &Conjugation) -> Result<f64> {
    t.ensure_same_dim(c.s())?;
    let s = c.s();
    let lhs = s * &t.conj();
    let rhs = &t.adjoint() * s;
    Ok((&lhs - &rhs).frobenius_norm() / t.frobenius_norm().max(1.0))
}

/// A conjugation witnessing `CTC = T*`, with the residual it achieves.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CsoCertificate {
    pub conjugation: Conjugation,
    pub residual: f64,
}

impl CsoCertificate {
    /// Computes the residual of `c` for `t` and keeps it regardless of size.
    pub fn evaluate(t: &CMatrix, c: &Conjugation) -> Result<Self> {
        Ok(Self {
            conjugation: c.clone(),
            residual: c_symmetry_residual(t, c)?,
        })
    }

    pub fn is_accepted(&self) -> bool {
        self.residual <= CERTIFICATE_TOL
    }
}

/// Outcome of [`find_conjugation`]. `NotFound` is inconclusive: it does not
/// prove that `T` is not complex symmetric.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ConjugationSearch {
    Found(CsoCertificate),
    NotFound { best_residual: f64 },
}

impl ConjugationSearch {
    pub fn certificate(&self) -> Option<&CsoCertificate> {
        match self {
            Self::Found(c) => Some(c),
            Self::NotFound { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Self::Found(_))
    }
}

/// Searches for a conjugation making `t` complex symmetric.
///
/// Two strategies, cheapest first:
///
/// * Phase matching. Any conjugation for `T` also works for `e^{iθ}T` and
///   fixes its Hermitian and skew parts, so it maps each eigenvector of a
///   simple Hermitian part to a unimodular multiple of itself. Rephasing
///   that eigenbasis so the other part becomes real yields a basis in which
///   `T` is symmetric, when one exists.
/// * Alternating projections, for degenerate spectra. The constraint
///   `S·conj(T) = T*·S` is linear in `S`; its symmetric solutions form a
///   subspace `W`, and a unitary point of `W` is sought by alternating the
///   polar factor with projection onto `W` from `restarts` seeded starts.
pub fn find_conjugation(t: &CMatrix, restarts: usize, max_iter: usize) -> Result<ConjugationSearch> {
    find_conjugation_seeded(t, restarts, max_iter, SEARCH_SEED)
}

pub fn find_conjugation_seeded(
    t: &CMatrix,
    restarts: usize,
    max_iter: usize,
    seed: u64,
) -> Result<ConjugationSearch> {
    if restarts == 0 || max_iter == 0 {
        return Err(CsoError::InvalidSpec("restarts and max_iter must be at least 1".into()));
    }
    t.ensure_finite()?;
    let n = t.n();

    let canonical = CsoCertificate::evaluate(t, &canonical_conjugation(n))?;
    if canonical.is_accepted() {
        return Ok(ConjugationSearch::Found(canonical));
    }
    let mut best_residual = canonical.residual;

    if let Some(s) = phase_matched(t)? {
        let cert = CsoCertificate::evaluate(t, &Conjugation::from_trusted(s))?;
        if cert.is_accepted() {
            return Ok(ConjugationSearch::Found(cert));
        }
        best_residual = best_residual.min(cert.residual);
    }

    let scale = t.frobenius_norm();
    let tn = t.scale_real(1.0 / scale);
    let subspace = symmetric_solution_space(&tn)?;
    if subspace.is_empty() {
        return Ok(ConjugationSearch::NotFound { best_residual });
    }

    for restart in 0..restarts {
        let mut rng = rng_from_seed(derive_seed(seed, restart as u64));
        let coeffs: Vec<C64> = (0..subspace.len()).map(|_| complex_gaussian(&mut rng)).collect();
        let mut y = combine(&subspace, &coeffs);
        let start_norm = y.frobenius_norm();
        if start_norm == 0.0 {
            continue;
        }
        y = y.scale_real((n as f64).sqrt() / start_norm);

        for _ in 0..max_iter {
            let x = polar_factor(&y)?;
            let next = project(&subspace, &x);
            let gap = (&x - &next).frobenius_norm();
            let unitarity = next.unitarity_residual();
            y = next;
            if gap < PROJECTION_TOL && unitarity < PROJECTION_TOL {
                break;
            }
        }

        let candidate = polar_factor(&y)?;
        let s = (&candidate + &candidate.transpose()).scale_real(0.5);
        if !verify_conjugation(&s).is_valid(n, DEFAULT_CONJUGATION_TOL) {
            // Still record how close the symmetrized candidate came.
            let r = c_symmetry_residual(t, &Conjugation::from_trusted(s))?;
            best_residual = best_residual.min(r);
            continue;
        }
        let cert = CsoCertificate::evaluate(t, &Conjugation::from_trusted(s))?;
        if cert.is_accepted() {
            return Ok(ConjugationSearch::Found(cert));
        }
        best_residual = best_residual.min(cert.residual);
    }
    Ok(ConjugationSearch::NotFound { best_residual })
}

/// Candidate `S = V·Vᵀ` from a rephased eigenbasis `V` of the Hermitian part
/// of `e^{iθ}T`, with `θ` chosen on a fixed grid to maximize the smallest
/// eigenvalue gap. `None` when every rotation has a repeated eigenvalue.
fn phase_matched(t: &CMatrix) -> Result<Option<CMatrix>> {
    let n = t.n();
    let scale = t.frobenius_norm();
    if n < 2 || scale == 0.0 {
        return Ok(None);
    }
    let t_star = t.adjoint();
    let mut best: Option<(f64, C64)> = None;
    for k in 0..PHASE_GRID {
        let rot = C64::from_polar(1.0, std::f64::consts::PI * k as f64 / PHASE_GRID as f64);
        let h = (&t.scale(rot) + &t_star.scale(rot.conj())).scale_real(0.5);
        let values = hermitian_eig(&h)?.values;
        let gap = values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if best.is_none_or(|(g, _)| gap > g) {
            best = Some((gap, rot));
        }
    }
    let (gap, rot) = best.expect("grid is nonempty");
    if gap <= MIN_PHASE_GAP * scale {
        return Ok(None);
    }

    let h = (&t.scale(rot) + &t_star.scale(rot.conj())).scale_real(0.5);
    let k = (&t.scale(rot) - &t_star.scale(rot.conj())).scale(C64::new(0.0, -0.5));
    let u = hermitian_eig(&h)?.vectors;
    let m = &(&u.adjoint() * &k) * &u;

    // Maximum spanning tree on |m_ij|: p_j = p_i·conj(m_ij)/|m_ij| makes
    // conj(p_i)·m_ij·p_j real along every tree edge.
    let mut phase: Vec<Option<C64>> = vec![None; n];
    let edge_floor = EDGE_TOL * m.frobenius_norm();
    for _ in 0..n {
        let mut pick: Option<(f64, usize, usize)> = None;
        for i in (0..n).filter(|&i| phase[i].is_some()) {
            for j in (0..n).filter(|&j| phase[j].is_none()) {
                let w = m[(i, j)].norm();
                if w > edge_floor && pick.is_none_or(|(b, _, _)| w > b) {
                    pick = Some((w, i, j));
                }
            }
        }
        match pick {
            Some((w, i, j)) => phase[j] = Some(phase[i].unwrap() * m[(i, j)].conj() / w),
            None => {
                // New component (or first vertex): start it at phase one.
                let Some(root) = phase.iter().position(Option::is_none) else { break };
                phase[root] = Some(C64::new(1.0, 0.0));
            }
        }
    }
    let v = CMatrix::from_fn(n, |i, j| u[(i, j)] * phase[j].unwrap());
    let s = &v * &v.transpose();
    Ok(Some((&s + &s.transpose()).scale_real(0.5)))
}

/// Frobenius-orthonormal basis of `{S = Sᵀ : S·conj(T) = T*·S}`.
fn symmetric_solution_space(t: &CMatrix) -> Result<Vec<CMatrix>> {
    let n = t.n();
    let t_conj = t.conj();
    let t_star = t.adjoint();
    let sym_basis = symmetric_basis(n);

    // Image of each symmetric basis element under S ↦ S·conj(T) − T*·S.
    let cols: Vec<Vec<C64>> = sym_basis
        .iter()
        .map(|e| (&(e * &t_conj) - &(&t_star * e)).data().to_vec())
        .collect();
    let (sigma, vecs) = rect_right_singular(cols, n * n)?;
    let threshold = NULL_SPACE_TOL * sigma[0];
    Ok(sigma
        .iter()
        .zip(vecs)
        .filter(|(s, _)| **s <= threshold)
        .map(|(_, y)| combine(&sym_basis, &y))
        .collect())
}

/// `E_ii` and `(E_ij + E_ji)/√2`, orthonormal in the Frobenius product.
fn symmetric_basis(n: usize) -> Vec<CMatrix> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let mut e = CMatrix::zeros(n);
            if i == j {
                e[(i, i)] = C64::new(1.0, 0.0);
            } else {
                e[(i, j)] = C64::new(h, 0.0);
                e[(j, i)] = C64::new(h, 0.0);
            }
            out.push(e);
        }
    }
    out
}

fn combine(basis: &[CMatrix], coeffs: &[C64]) -> CMatrix {
    let n = basis[0].n();
    let mut acc = CMatrix::zeros(n);
    for (b, &c) in basis.iter().zip(coeffs) {
        if c == ZERO {
            continue;
        }
        acc = &acc + &b.scale(c);
    }
    acc
}

fn project(basis: &[CMatrix], x: &CMatrix) -> CMatrix {
    let coeffs: Vec<C64> = basis.iter().map(|b| frobenius_inner(b, x)).collect();
    combine(basis, &coeffs)
}

/// Nearest unitary in Frobenius norm: `U·V*` from the SVD.
pub(crate) fn polar_factor(a: &CMatrix) -> Result<CMatrix> {
    let r = svd(a)?;
    Ok(&r.u * &r.v.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugation::flip_conjugation;
    use crate::random::haar_unitary;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn residual_examples() {
        let d = CMatrix::diag(&[c(1.0, 1.0), c(2.0, 0.0)]);
        assert_eq!(c_symmetry_residual(&d, &canonical_conjugation(2)).unwrap(), 0.0);

        let j = CMatrix::shift(2, false);
        assert_eq!(c_symmetry_residual(&j, &flip_conjugation(2)).unwrap(), 0.0);
        let r = c_symmetry_residual(&j, &canonical_conjugation(2)).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);

        assert!(c_symmetry_residual(&j, &canonical_conjugation(3)).is_err());
    }

    #[test]
    fn symmetric_input_uses_canonical() {
        let t = CMatrix::from_rows(&[vec![c(1.0, 2.0), c(0.5, -1.0)], vec![c(0.5, -1.0), c(-3.0, 0.0)]])
            .unwrap();
        let found = find_conjugation(&t, 1, 10).unwrap();
        let cert = found.certificate().unwrap();
        assert_eq!(cert.residual, 0.0);
        assert_eq!(cert.conjugation.s(), &CMatrix::identity(2));
    }

    #[test]
    fn unitarily_rotated_symmetric_matrix_is_found() {
        let mut rng = rng_from_seed(42);
        let n = 4;
        let m = {
            let g = crate::random::ginibre(n, &mut rng);
            (&g + &g.transpose()).scale_real(0.5)
        };
        let u = haar_unitary(n, &mut rng);
        let t = &(&u * &m) * &u.adjoint();
        // Analytic witness s = U·Uᵀ.
        let witness = Conjugation::new(&u * &u.transpose()).unwrap();
        assert!(c_symmetry_residual(&t, &witness).unwrap() < 1e-13);

        let found = find_conjugation(&t, DEFAULT_RESTARTS, DEFAULT_MAX_ITER).unwrap();
        let cert = found.certificate().expect("rotated symmetric matrix must be found");
        assert!(cert.residual <= CERTIFICATE_TOL);
        assert!(verify_conjugation(cert.conjugation.s()).is_valid(n, DEFAULT_CONJUGATION_TOL));
    }

    #[test]
    fn zero_matrix_is_trivially_symmetric() {
        let found = find_conjugation(&CMatrix::zeros(3), 1, 1).unwrap();
        assert!(found.is_found());
    }

    #[test]
    fn rejects_zero_budgets() {
        assert!(find_conjugation(&CMatrix::identity(2), 0, 10).is_err());
        assert!(find_conjugation(&CMatrix::identity(2), 1, 0).is_err());
    }
}
