use super::{CMatrix, C64, ZERO};
use crate::error::{CsoError, Result};

/// Eigenvalues of a general complex matrix, sorted lexicographically by
/// (real, imaginary).
///
/// Householder reduction to Hessenberg form followed by single-shift QR
/// with Wilkinson shifts; trailing 1×1 and 2×2 blocks are deflated and the
/// latter solved in closed form.
pub fn eig_general(a: &CMatrix) -> Result<Vec<C64>> {
    a.ensure_finite()?;
    let n = a.n();
    let mut h = hessenberg(a);
    let norm = a.frobenius_norm();
    let mut eigs = Vec::with_capacity(n);
    let cap = 100 * n;
    let mut iterations = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;

    loop {
        // Locate the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            let scale = if diag > 0.0 { diag } else { norm };
            if sub <= f64::EPSILON * scale {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            eigs.push(h[(hi, hi)]);
            since_deflation = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            eigs.push(l1);
            eigs.push(l2);
            since_deflation = 0;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            continue;
        }

        iterations += 1;
        since_deflation += 1;
        if iterations > cap {
            return Err(CsoError::NoConvergence {
                routine: "Hessenberg QR",
                limit: cap,
            });
        }
        let shift = if since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(&mut h, lo, hi, shift);
    }

    eigs.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(eigs)
}

/// Unitary reduction to upper Hessenberg form.
fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.n();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let mut v = x;
        v[0] += phase * alpha;
        let vv = 2.0 * alpha * (alpha + x0.norm());
        // Left: rows k+1.. of every column.
        for j in 0..n {
            let proj: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)]).sum();
            let f = proj * (2.0 / vv);
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= f * vi;
            }
        }
        // Right: columns k+1.. of every row.
        for i in 0..n {
            let proj: C64 = v.iter().enumerate().map(|(j, vj)| h[(i, k + 1 + j)] * vj).sum();
            let f = proj * (2.0 / vv);
            for (j, vj) in v.iter().enumerate() {
                h[(i, k + 1 + j)] -= f * vj.conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

/// Eigenvalues of `[[a, b], [c, d]]`.
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let mean = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let l1 = mean + disc;
    let l2 = mean - disc;
    // Recover the smaller root from the determinant to avoid cancellation.
    let det = a * d - b * c;
    if l1.norm() >= l2.norm() {
        let l2b = if l1.norm() > 0.0 { det / l1 } else { l2 };
        (l1, l2b)
    } else {
        let l1b = if l2.norm() > 0.0 { det / l2 } else { l1 };
        (l1b, l2)
    }
}

/// Eigenvalue of the trailing 2×2 block closer to its last diagonal entry.
fn wilkinson(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let (l1, l2) = eig2(a, b, c, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Explicitly shifted QR step on the active window `lo..=hi` via Givens
/// rotations. Entries outside the window do not affect its eigenvalues and
/// are left untouched.
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, shift: C64) {
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (C64::new(1.0, 0.0), ZERO)
        } else {
            (x / r, y / r)
        };
        // G* = [[c̄, s̄], [−s, c]] zeroes h[k+1][k].
        for j in k..=hi {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = c.conj() * a + s.conj() * b;
            h[(k + 1, j)] = -s * a + c * b;
        }
        rotations.push((k, c, s));
    }
    for (k, c, s) in rotations {
        let top = (k + 2).min(hi);
        for i in lo..=top {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * c + b * s;
            h[(i, k + 1)] = -a * s.conj() + b * c.conj();
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn diagonal() {
        let a = CMatrix::diag(&[C64::new(1.0, 2.0), C64::new(3.0, 0.0)]);
        let e = eig_general(&a).unwrap();
        assert_eq!(e, vec![C64::new(1.0, 2.0), C64::new(3.0, 0.0)]);
    }

    #[test]
    fn nilpotent_jordan() {
        let a = CMatrix::shift(2, false);
        let e = eig_general(&a).unwrap();
        assert!(e.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn two_by_two_closed_form() {
        let a = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.05, 0.0]]).unwrap();
        let e = eig_general(&a).unwrap();
        let r = 0.05f64.sqrt();
        assert!(close(e[0], C64::new(-r, 0.0), 1e-15));
        assert!(close(e[1], C64::new(r, 0.0), 1e-15));
    }

    #[test]
    fn companion_matrix_roots() {
        // Companion matrix of (x-1)(x-2)(x-3)(x+1+i)(x-0.5i).
        let roots = [
            C64::new(1.0, 0.0),
            C64::new(2.0, 0.0),
            C64::new(3.0, 0.0),
            C64::new(-1.0, -1.0),
            C64::new(0.0, 0.5),
        ];
        let mut coeffs = vec![C64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] += *c;
                next[i + 1] -= *c * r;
            }
            coeffs = next;
        }
        let n = roots.len();
        let a = CMatrix::from_fn(n, |i, j| {
            if i == 0 {
                -coeffs[j + 1]
            } else if i == j + 1 {
                C64::new(1.0, 0.0)
            } else {
                ZERO
            }
        });
        let e = eig_general(&a).unwrap();
        let mut expected = roots.to_vec();
        expected.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        for (x, y) in e.iter().zip(&expected) {
            assert!(close(*x, *y, 1e-9), "{x} vs {y}");
        }
    }
}
