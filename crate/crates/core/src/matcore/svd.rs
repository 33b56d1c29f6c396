//! One-sided (Hestenes) Jacobi SVD.
//!
//! Columns are rotated pairwise until they are mutually orthogonal to a
//! relative tolerance; singular values are then the column norms. The
//! relative stopping rule is what keeps tiny singular values (and hence
//! kernels) accurate.

use super::qr::ColumnQr;
use super::{dot, norm2, orthogonalize_against, CMatrix, C64, ONE, ZERO};
use crate::error::{CsoError, Result};

const MAX_SWEEPS: usize = 80;

pub struct SvdResult {
    pub u: CMatrix,
    /// Singular values, descending.
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

fn norm_sq(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Orthogonalizes the columns of `g` in place, accumulating the right
/// rotations into `v` when given.
fn hestenes(g: &mut [Vec<C64>], mut v: Option<&mut [Vec<C64>]>) -> Result<()> {
    let k = g.len();
    if k < 2 {
        return Ok(());
    }
    let rows = g[0].len();
    let tol = f64::EPSILON * (rows as f64).sqrt().max(1.0);
    let mut norms: Vec<f64> = g.iter().map(|c| norm_sq(c)).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k - 1 {
            for q in p + 1..k {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&g[p], &g[q]);
                let abs = gamma.norm();
                if abs <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / abs).conj();
                let zeta = (beta - alpha) / (2.0 * abs);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(g, p, q, c, s, phase);
                if let Some(v) = v.as_deref_mut() {
                    rotate(v, p, q, c, s, phase);
                }
                norms[p] = norm_sq(&g[p]);
                norms[q] = norm_sq(&g[q]);
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(CsoError::NoConvergence {
        routine: "one-sided Jacobi SVD",
        limit: MAX_SWEEPS,
    })
}

/// `x_p ← c x_p − s·phase·x_q`, `x_q ← s x_p + c·phase·x_q`.
fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    let xp = &mut lo[p];
    let xq = &mut hi[0];
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bq = *b * phase;
        let ap = *a;
        *a = ap * c - bq * s;
        *b = ap * s + bq * c;
    }
}

fn descending_order(sigma: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    order
}

/// Full SVD `A = U·diag(σ)·V*` of a square matrix.
pub fn svd(a: &CMatrix) -> Result<SvdResult> {
    a.ensure_finite()?;
    let n = a.n();
    let mut g = a.columns();
    let mut v = CMatrix::identity(n).columns();
    hestenes(&mut g, Some(&mut v))?;

    let raw_sigma: Vec<f64> = g.iter().map(|c| norm2(c)).collect();
    let order = descending_order(&raw_sigma);
    let sigma: Vec<f64> = order.iter().map(|&j| raw_sigma[j]).collect();
    let sigma_max = sigma[0];

    let mut u_cols: Vec<Option<Vec<C64>>> = order
        .iter()
        .map(|&j| {
            let s = raw_sigma[j];
            if s > 0.0 && s > sigma_max * 1e-200 {
                Some(g[j].iter().map(|z| z / s).collect())
            } else {
                None
            }
        })
        .collect();
    complete_orthonormal(&mut u_cols, n);
    let u_cols: Vec<Vec<C64>> = u_cols.into_iter().map(Option::unwrap).collect();
    let v_cols: Vec<Vec<C64>> = order.iter().map(|&j| v[j].clone()).collect();
    Ok(SvdResult {
        u: CMatrix::from_columns(&u_cols),
        sigma,
        v: CMatrix::from_columns(&v_cols),
    })
}

/// Fills the `None` slots with unit vectors orthogonal to everything else.
fn complete_orthonormal(cols: &mut [Option<Vec<C64>>], n: usize) {
    for slot in 0..cols.len() {
        if cols[slot].is_some() {
            continue;
        }
        let known: Vec<Vec<C64>> = cols.iter().flatten().cloned().collect();
        let mut best: Option<(f64, Vec<C64>)> = None;
        for e in 0..n {
            let mut x = vec![ZERO; n];
            x[e] = ONE;
            orthogonalize_against(&mut x, &known);
            let nrm = norm2(&x);
            if best.as_ref().map_or(true, |(b, _)| nrm > *b) {
                best = Some((nrm, x));
            }
        }
        let (nrm, mut x) = best.expect("n >= 1");
        for z in x.iter_mut() {
            *z /= nrm;
        }
        cols[slot] = Some(x);
    }
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> Result<f64> {
    a.ensure_finite()?;
    let mut g = a.columns();
    hestenes(&mut g, None)?;
    Ok(g.iter().map(|c| norm2(c)).fold(0.0, f64::max))
}

/// Orthonormal basis of the numerical kernel: right singular vectors whose
/// singular values are at most `tol·max(1, σ₁)`.
pub fn null_space_basis(a: &CMatrix, tol: f64) -> Result<Vec<Vec<C64>>> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CsoError::InvalidTolerance(tol));
    }
    let res = svd(a)?;
    let threshold = tol * res.sigma[0].max(1.0);
    Ok(res
        .sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= threshold)
        .map(|(j, _)| res.v.column(j))
        .collect())
}

fn pad_rows(cols: &mut [Vec<C64>], rows: usize) -> usize {
    let k = cols.len();
    if rows < k {
        for c in cols.iter_mut() {
            c.resize(k, ZERO);
        }
        k
    } else {
        rows
    }
}

/// Singular values (descending) and right singular vectors of a general
/// `rows × cols` matrix given column-wise. A pivoted QR first shrinks tall
/// inputs to a square triangle so the Jacobi sweeps run on `cols × cols`.
pub(crate) fn rect_right_singular(
    mut cols: Vec<Vec<C64>>,
    rows: usize,
) -> Result<(Vec<f64>, Vec<Vec<C64>>)> {
    let k = cols.len();
    if cols.iter().flatten().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(CsoError::NonFinite);
    }
    let rows = pad_rows(&mut cols, rows);
    let qr = ColumnQr::new(cols, rows);
    let mut g = qr.r_cols;
    let mut v = (0..k)
        .map(|j| {
            let mut e = vec![ZERO; k];
            e[j] = ONE;
            e
        })
        .collect::<Vec<_>>();
    hestenes(&mut g, Some(&mut v))?;
    let raw: Vec<f64> = g.iter().map(|c| norm2(c)).collect();
    let order = descending_order(&raw);
    let sigma = order.iter().map(|&j| raw[j]).collect();
    // Undo the column pivoting: row perm[i] of V is row i of V_R.
    let vecs = order
        .iter()
        .map(|&j| {
            let mut out = vec![ZERO; k];
            for (i, &orig) in qr.perm.iter().enumerate() {
                out[orig] = v[j][i];
            }
            out
        })
        .collect();
    Ok((sigma, vecs))
}

/// Singular values only (descending) of a column-wise general matrix.
pub(crate) fn rect_singular_values(mut cols: Vec<Vec<C64>>, rows: usize) -> Result<Vec<f64>> {
    if cols.iter().flatten().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(CsoError::NonFinite);
    }
    let rows = pad_rows(&mut cols, rows);
    let mut g = ColumnQr::new(cols, rows).r_cols;
    hestenes(&mut g, None)?;
    let mut sigma: Vec<f64> = g.iter().map(|c| norm2(c)).collect();
    sigma.sort_by(|a, b| b.total_cmp(a));
    Ok(sigma)
}
