use super::{CMatrix, C64, ONE, ZERO};

/// Householder reflector that maps `x` onto a multiple of the first unit
/// vector. Returns `(v, beta, v_norm_sq)` with `H = I − 2 v v* / (v* v)`, or
/// `None` when `x` is already zero.
fn reflector(x: &[C64]) -> Option<(Vec<C64>, C64, f64)> {
    let alpha = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if alpha == 0.0 {
        return None;
    }
    let x0 = x[0];
    let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
    let beta = -phase * alpha;
    let mut v = x.to_vec();
    v[0] -= beta;
    let vv = 2.0 * alpha * (alpha + x0.norm());
    Some((v, beta, vv))
}

/// Applies `I − 2 v v*/vv` to `y[offset..]`.
fn apply_reflector(v: &[C64], vv: f64, y: &mut [C64], offset: usize) {
    let tail = &mut y[offset..];
    let proj: C64 = v.iter().zip(tail.iter()).map(|(a, b)| a.conj() * b).sum();
    let f = proj * (2.0 / vv);
    for (t, vi) in tail.iter_mut().zip(v) {
        *t -= f * vi;
    }
}

/// Triangular factor of a column-pivoted QR of a tall matrix given by its
/// columns: `A·Π = Q·R`. Only `R` and `Π` are kept.
pub(crate) struct ColumnQr {
    /// Columns of the `k × k` upper-triangular factor.
    pub r_cols: Vec<Vec<C64>>,
    /// `perm[j]` is the original index of pivoted column `j`.
    pub perm: Vec<usize>,
}

impl ColumnQr {
    pub fn new(mut cols: Vec<Vec<C64>>, rows: usize) -> Self {
        let k = cols.len();
        assert!(rows >= k, "pivoted QR expects a tall matrix");
        let mut perm: Vec<usize> = (0..k).collect();
        for step in 0..k {
            let (best, _) = (step..k)
                .map(|j| (j, cols[j][step..].iter().map(|z| z.norm_sqr()).sum::<f64>()))
                .fold((step, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            cols.swap(step, best);
            perm.swap(step, best);
            if let Some((v, beta, vv)) = reflector(&cols[step][step..]) {
                cols[step][step] = beta;
                for z in cols[step][step + 1..].iter_mut() {
                    *z = ZERO;
                }
                for col in cols.iter_mut().skip(step + 1) {
                    apply_reflector(&v, vv, col, step);
                }
            }
        }
        let r_cols = cols
            .into_iter()
            .map(|mut c| {
                c.truncate(k);
                c
            })
            .collect();
        Self { r_cols, perm }
    }
}

/// Unpivoted Householder QR of a square matrix, returning explicit `(Q, R)`.
pub(crate) fn householder_qr_full(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.n();
    let mut cols = a.columns();
    let mut reflectors = Vec::with_capacity(n);
    for step in 0..n {
        let refl = reflector(&cols[step][step..]);
        if let Some((v, beta, vv)) = &refl {
            cols[step][step] = *beta;
            for z in cols[step][step + 1..].iter_mut() {
                *z = ZERO;
            }
            for col in cols.iter_mut().skip(step + 1) {
                apply_reflector(v, *vv, col, step);
            }
        }
        reflectors.push(refl);
    }
    let r = CMatrix::from_columns(&cols);
    let mut q_cols = CMatrix::identity(n).columns();
    for (step, refl) in reflectors.iter().enumerate().rev() {
        if let Some((v, _, vv)) = refl {
            for col in q_cols.iter_mut() {
                apply_reflector(v, *vv, col, step);
            }
        }
    }
    (CMatrix::from_columns(&q_cols), r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_qr_reconstructs() {
        let a = CMatrix::from_fn(4, |i, j| C64::new((i * 3 + j) as f64 % 5.0 - 1.5, (i as f64) - j as f64 * 0.5));
        let (q, r) = householder_qr_full(&a);
        assert!(q.unitarity_residual() < 1e-13);
        assert!((&(&q * &r) - &a).frobenius_norm() < 1e-12 * a.frobenius_norm());
        for i in 0..4 {
            for j in 0..i {
                assert_eq!(r[(i, j)], ZERO);
            }
        }
    }

    #[test]
    fn pivoted_r_preserves_gram() {
        let cols: Vec<Vec<C64>> = (0..3)
            .map(|j| (0..5).map(|i| C64::new((i + j) as f64, (i * j) as f64 - 2.0)).collect())
            .collect();
        let qr = ColumnQr::new(cols.clone(), 5);
        for a in 0..3 {
            for b in 0..3 {
                let g: C64 = cols[qr.perm[a]].iter().zip(&cols[qr.perm[b]]).map(|(x, y)| x.conj() * y).sum();
                let h: C64 = qr.r_cols[a].iter().zip(&qr.r_cols[b]).map(|(x, y)| x.conj() * y).sum();
                assert!((g - h).norm() < 1e-11 * (1.0 + g.norm()));
            }
        }
    }
}
