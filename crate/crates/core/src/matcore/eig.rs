use super::{CMatrix, C64};
use crate::error::{CsoError, Result};

const MAX_SWEEPS: usize = 40;
const HERMITIAN_TOL: f64 = 1e-10;
const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Spectral decomposition `A = V·diag(values)·V*` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix,
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Real symmetric input stays real throughout: every rotation phase is then
/// exactly `±1`, so the eigenvector matrix is real orthogonal.
pub fn hermitian_eig(a: &CMatrix) -> Result<EigenDecomposition> {
    a.ensure_finite()?;
    let n = a.n();
    let scale = a.frobenius_norm();
    let skew = (a - &a.adjoint()).frobenius_norm();
    if skew > HERMITIAN_TOL * scale {
        return Err(CsoError::NotHermitian {
            residual: skew / scale,
        });
    }
    let mut h = (a + &a.adjoint()).scale_real(0.5);
    let mut v = CMatrix::identity(n);

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if h.off_diagonal_norm() <= OFF_DIAGONAL_TOL * scale {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotate(&mut h, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(CsoError::NoConvergence {
            routine: "Hermitian Jacobi",
            limit: MAX_SWEEPS,
        });
    }

    let raw: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| raw[x].total_cmp(&raw[y]));
    let values = order.iter().map(|&i| raw[i]).collect();
    let vectors = CMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors })
}

/// One Jacobi rotation annihilating `h[p][q]`; `h ← G* h G`, `v ← v G`.
fn rotate(h: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = h[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let app = h[(p, p)].re;
    let aqq = h[(q, q)].re;
    // G = diag(1, e^{-iφ}) · [[c, s], [−s, c]] restricted to the (p, q) plane.
    let phase = (apq / abs).conj();
    let tau = (aqq - app) / (2.0 * abs);
    let t = if tau.abs() > 1e150 {
        0.5 / tau
    } else {
        let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
        sign / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    let n = h.n();
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -phase * s;
    let g_qq = phase * c;

    for k in 0..n {
        let hp = h[(k, p)];
        let hq = h[(k, q)];
        h[(k, p)] = hp * g_pp + hq * g_qp;
        h[(k, q)] = hp * g_pq + hq * g_qq;
        let vp = v[(k, p)];
        let vq = v[(k, q)];
        v[(k, p)] = vp * g_pp + vq * g_qp;
        v[(k, q)] = vp * g_pq + vq * g_qq;
    }
    for k in 0..n {
        let hp = h[(p, k)];
        let hq = h[(q, k)];
        h[(p, k)] = g_pp.conj() * hp + g_qp.conj() * hq;
        h[(q, k)] = g_pq.conj() * hp + g_qq.conj() * hq;
    }
    h[(p, q)] = C64::new(0.0, 0.0);
    h[(q, p)] = C64::new(0.0, 0.0);
    h[(p, p)] = C64::new(h[(p, p)].re, 0.0);
    h[(q, q)] = C64::new(h[(q, q)].re, 0.0);
}
