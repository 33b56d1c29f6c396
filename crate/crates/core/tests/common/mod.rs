//! Independent commutant oracle and the shared 50-matrix corpus.

#![allow(dead_code)]

use cso_core::models::{direct_sum, jordan_block, random_cso, random_reducible_cso};
use cso_core::random::{derive_seed, haar_unitary, rng_from_seed};
use cso_core::{CMatrix, C64};

/// Plain triple-loop product, deliberately not using the crate's operators.
pub fn matmul(a: &[Vec<C64>], b: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn dense(t: &CMatrix) -> Vec<Vec<C64>> {
    (0..t.n()).map(|i| (0..t.n()).map(|j| t[(i, j)]).collect()).collect()
}

/// Rows: entries of `E·T − T·E` and `E·T* − T*·E`; columns: matrix units `E`.
pub fn constraint_system(t: &CMatrix) -> Vec<Vec<C64>> {
    let n = t.n();
    let td = dense(t);
    let ts: Vec<Vec<C64>> = (0..n).map(|i| (0..n).map(|j| td[j][i].conj()).collect()).collect();
    let mut rows = vec![vec![C64::new(0.0, 0.0); n * n]; 2 * n * n];
    for col in 0..n * n {
        let mut e = vec![vec![C64::new(0.0, 0.0); n]; n];
        e[col / n][col % n] = C64::new(1.0, 0.0);
        for (block, m) in [&td, &ts].into_iter().enumerate() {
            let lhs = matmul(&e, m);
            let rhs = matmul(m, &e);
            for i in 0..n {
                for j in 0..n {
                    rows[block * n * n + i * n + j][col] = lhs[i][j] - rhs[i][j];
                }
            }
        }
    }
    rows
}

/// Rank by Gaussian elimination with partial pivoting.
pub fn ge_rank(mut a: Vec<Vec<C64>>, tol: f64) -> usize {
    let rows = a.len();
    let cols = a[0].len();
    let scale = a.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let (pivot, best) = (rank..rows)
            .map(|r| (r, a[r][col].norm()))
            .fold((rank, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best <= tol * scale {
            continue;
        }
        a.swap(rank, pivot);
        for r in rank + 1..rows {
            let f = a[r][col] / a[rank][col];
            if f.norm() == 0.0 {
                continue;
            }
            for c in col..cols {
                let v = a[rank][c];
                a[r][c] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}

pub fn oracle_dimension(t: &CMatrix) -> usize {
    t.n() * t.n() - ge_rank(constraint_system(t), 1e-8)
}

pub fn corpus() -> Vec<CMatrix> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.push(CMatrix::identity(n));
        out.push(CMatrix::zeros(n));
        out.push(jordan_block(n, C64::new(0.3, -1.0)).0);
        out.push(random_cso(n, derive_seed(60, n as u64)).0);
        out.push(CMatrix::diag_real(&(0..n).map(|i| (i % 2) as f64).collect::<Vec<_>>()));
    }
    for n in 2..=5 {
        out.push(random_reducible_cso(n, derive_seed(61, n as u64)).0);
        let u = haar_unitary(n, &mut rng_from_seed(62 + n as u64));
        let d = CMatrix::diag_real(&(0..n).map(|i| i as f64).collect::<Vec<_>>());
        out.push(&(&u * &d) * &u.adjoint());
        out.push(CMatrix::shift(n, true).scale(C64::new(0.0, 2.0)));
    }
    for seed in 0..8u64 {
        let (a, _) = jordan_block(2, C64::new(seed as f64, 0.0));
        let (b, _) = random_cso(1 + (seed % 3) as usize, derive_seed(63, seed));
        out.push(direct_sum(&[a.clone(), b], &[None, None]).unwrap().0);
        if seed < 3 {
            out.push(direct_sum(&[a.clone(), a], &[None, None]).unwrap().0);
        }
    }
    // Normal with a repeated eigenvalue, and a scaled flip.
    let u = haar_unitary(4, &mut rng_from_seed(70));
    out.push(&(&u * &CMatrix::diag_real(&[1.0, 1.0, 2.0, -1.0])) * &u.adjoint());
    out.push(CMatrix::flip(3).scale(C64::new(1.0, 1.0)));
    out
}
