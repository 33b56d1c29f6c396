//! Dense complex matrix engine.
//!
//! Everything here is written against a single square type, [`CMatrix`], with
//! row-major storage. The decompositions (`hermitian_eig`, `svd`,
//! `eig_general`) are self-contained Jacobi/QR implementations sized for
//! matrices up to roughly n = 128.

mod eig;
mod qr;
mod schur;
mod svd;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CsoError, Result};

pub use eig::{hermitian_eig, EigenDecomposition};
pub use schur::eig_general;
pub use svd::{null_space_basis, operator_norm, svd, SvdResult};

pub(crate) use qr::householder_qr_full;
pub(crate) use svd::{rect_right_singular, rect_singular_values};

pub type C64 = Complex64;

/// Default relative tolerance for rank and kernel decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    /// Builds an `n × n` matrix from row-major entries, rejecting empty,
    /// mis-sized or non-finite input.
    pub fn new(n: usize, data: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(CsoError::Shape("dimension must be at least 1".into()));
        }
        if data.len() != n * n {
            return Err(CsoError::Shape(format!(
                "expected {} entries for n = {n}, found {}",
                n * n,
                data.len()
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(CsoError::NonFinite);
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(CsoError::Shape(format!(
                "row of length {} in a matrix with {n} rows",
                bad.len()
            )));
        }
        Self::new(n, rows.concat())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(n > 0, "CMatrix dimension must be positive");
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(values: &[C64]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { ZERO })
    }

    pub fn diag_real(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Antidiagonal ones: the matrix of the reversal permutation.
    pub fn flip(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i + j + 1 == n { ONE } else { ZERO })
    }

    /// Nilpotent shift `e_i ↦ e_{i+1}` (ones on the subdiagonal) when
    /// `lower`, otherwise ones on the superdiagonal.
    pub fn shift(n: usize, lower: bool) -> Self {
        Self::from_fn(n, |i, j| {
            let hit = if lower { i == j + 1 } else { j == i + 1 };
            if hit {
                ONE
            } else {
                ZERO
            }
        })
    }

    /// Builds a matrix from column vectors.
    pub fn from_columns(cols: &[Vec<C64>]) -> Self {
        let n = cols.len();
        assert!(cols.iter().all(|c| c.len() == n), "columns must have length n");
        Self::from_fn(n, |i, j| cols[j][i])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(CsoError::NonFinite)
        }
    }

    pub(crate) fn ensure_same_dim(&self, other: &CMatrix) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(CsoError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            })
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, alpha: C64) -> Self {
        self.map(|z| z * alpha)
    }

    pub fn scale_real(&self, alpha: f64) -> Self {
        self.map(|z| z * alpha)
    }

    /// Entrywise real part, as a complex matrix.
    pub fn real_part(&self) -> Self {
        self.map(|z| C64::new(z.re, 0.0))
    }

    /// Entrywise imaginary part, as a complex matrix with zero imaginary part.
    pub fn imag_part(&self) -> Self {
        self.map(|z| C64::new(z.im, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm of everything off the diagonal.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    pub fn commutator(&self, other: &CMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.n, "vector length must match dimension");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Unitarity defect `‖A·A* − I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        (&(self * &self.adjoint()) - &Self::identity(self.n)).frobenius_norm()
    }

    /// Normality defect `‖A·A* − A*·A‖_F`.
    pub fn normality_residual(&self) -> f64 {
        let a_star = self.adjoint();
        (&(self * &a_star) - &(&a_star * self)).frobenius_norm()
    }

    /// Block-diagonal direct sum of square blocks.
    pub fn block_diag(parts: &[CMatrix]) -> Self {
        let n: usize = parts.iter().map(CMatrix::n).sum();
        let mut out = Self::zeros(n);
        let mut offset = 0;
        for p in parts {
            for i in 0..p.n {
                for j in 0..p.n {
                    out[(offset + i, offset + j)] = p[(i, j)];
                }
            }
            offset += p.n;
        }
        out
    }

    /// Square sub-block starting at `(start, start)`.
    pub fn principal_block(&self, start: usize, size: usize) -> Self {
        Self::from_fn(size, |i, j| self[(start + i, start + j)])
    }

    /// Row-major entries as nested `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect()
    }

    pub fn from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|p| C64::new(p[0], p[1])).collect())
            .collect();
        Self::from_rows(&rows)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in add");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sub");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.map(|z| -z)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in mul");
        let n = self.n;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            let out = &mut data[i * n..(i + 1) * n];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, b) in out.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        CMatrix { n, data }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>+.4e}{:+.4e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    data: Vec<Vec<[f64; 2]>>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            n: self.n,
            data: self.to_pairs(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        if raw.data.len() != raw.n {
            return Err(D::Error::custom(format!(
                "field n = {} but data has {} rows",
                raw.n,
                raw.data.len()
            )));
        }
        CMatrix::from_pairs(&raw.data).map_err(D::Error::custom)
    }
}

// Vector helpers. `dot(x, y)` is conjugate-linear in `x`.

pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn normalize(x: &mut [C64]) -> f64 {
    let nrm = norm2(x);
    if nrm > 0.0 {
        for z in x.iter_mut() {
            *z /= nrm;
        }
    }
    nrm
}

/// Removes the components of `x` along each (orthonormal) vector in `basis`.
/// Two passes keep the result orthogonal to working precision.
pub(crate) fn orthogonalize_against(x: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, x);
            axpy(-c, b, x);
        }
    }
}

/// Frobenius inner product `tr(A* B)`.
pub fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    dot(a.data(), b.data())
}
