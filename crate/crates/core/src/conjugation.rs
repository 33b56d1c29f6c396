//! Conjugations: conjugate-linear, isometric involutions.
//!
//! In a fixed orthonormal basis every conjugation has the form
//! `C x = S·conj(x)` with `S` symmetric and unitary, so a [`Conjugation`] is
//! stored as that matrix. `C² = I` is `S·conj(S) = I`, which is exactly
//! symmetry plus unitarity.

use serde::{Deserialize, Serialize};

use crate::error::{CsoError, Result};
use crate::matcore::{dot, norm2, normalize, orthogonalize_against, CMatrix, C64, I, ONE, ZERO};
use crate::random::{complex_gaussian, haar_unitary, rng_from_seed};

/// Acceptance tolerance factor: residuals must be at most `tol·n`.
pub const DEFAULT_CONJUGATION_TOL: f64 = 1e-10;

const C_REAL_SEED: u64 = 0x5EED_C0DE;
const C_REAL_MAX_RETRIES: usize = 50;

/// A conjugation `x ↦ S·conj(x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CMatrix", into = "CMatrix")]
pub struct Conjugation {
    s: CMatrix,
}

impl Conjugation {
    /// Validates `s` with the default tolerance.
    pub fn new(s: CMatrix) -> Result<Self> {
        Self::with_tolerance(s, DEFAULT_CONJUGATION_TOL)
    }

    pub fn with_tolerance(s: CMatrix, tol: f64) -> Result<Self> {
        let check = verify_conjugation(&s);
        if check.is_valid(s.n(), tol) {
            Ok(Self { s })
        } else {
            Err(CsoError::InvalidConjugation {
                symmetry: check.symmetry_residual,
                unitarity: check.unitarity_residual,
            })
        }
    }

    pub(crate) fn from_trusted(s: CMatrix) -> Self {
        Self { s }
    }

    pub fn s(&self) -> &CMatrix {
        &self.s
    }

    pub fn n(&self) -> usize {
        self.s.n()
    }

    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.n() {
            return Err(CsoError::DimensionMismatch {
                expected: self.n(),
                found: x.len(),
            });
        }
        let xc: Vec<C64> = x.iter().map(|z| z.conj()).collect();
        Ok(self.s.mul_vec(&xc))
    }

    /// `C·X·C` for a linear map `X`, i.e. `S·conj(X)·S*`.
    pub fn conjugate_operator(&self, x: &CMatrix) -> CMatrix {
        &(&self.s * &x.conj()) * &self.s.adjoint()
    }
}

impl TryFrom<CMatrix> for Conjugation {
    type Error = CsoError;

    fn try_from(s: CMatrix) -> Result<Self> {
        Self::new(s)
    }
}

impl From<Conjugation> for CMatrix {
    fn from(c: Conjugation) -> CMatrix {
        c.s
    }
}

/// Entrywise conjugation, `S = I`.
pub fn canonical_conjugation(n: usize) -> Conjugation {
    Conjugation::from_trusted(CMatrix::identity(n))
}

/// Reversal composed with entrywise conjugation, `S` = antidiagonal ones.
pub fn flip_conjugation(n: usize) -> Conjugation {
    Conjugation::from_trusted(CMatrix::flip(n))
}

/// `S = U·Uᵀ` for a seeded Haar unitary `U`.
pub fn random_conjugation(n: usize, seed: u64) -> Conjugation {
    let u = haar_unitary(n, &mut rng_from_seed(seed));
    Conjugation::from_trusted(&u * &u.transpose())
}

pub fn apply_conjugation(c: &Conjugation, x: &[C64]) -> Result<Vec<C64>> {
    c.apply(x)
}

/// Frobenius residuals of the two conjugation axioms for a candidate `S`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConjugationCheck {
    /// `‖S − Sᵀ‖_F`
    pub symmetry_residual: f64,
    /// `‖S·S* − I‖_F`
    pub unitarity_residual: f64,
}

impl ConjugationCheck {
    pub fn is_valid(&self, n: usize, tol: f64) -> bool {
        let bound = tol * n as f64;
        self.symmetry_residual <= bound && self.unitarity_residual <= bound
    }
}

pub fn verify_conjugation(s: &CMatrix) -> ConjugationCheck {
    ConjugationCheck {
        symmetry_residual: (s - &s.transpose()).frobenius_norm(),
        unitarity_residual: s.unitarity_residual(),
    }
}

/// Orthonormal basis of vectors fixed by a conjugation.
#[derive(Clone, Debug)]
pub struct CRealBasis {
    /// Unitary whose columns `b_j` satisfy `C b_j = b_j`.
    pub u: CMatrix,
}

impl CRealBasis {
    /// `max_j ‖S·conj(b_j) − b_j‖₂`.
    pub fn fixedness_residual(&self, c: &Conjugation) -> f64 {
        let img = c.s() * &self.u.conj();
        (0..self.u.n())
            .map(|j| {
                let d: Vec<C64> = img.column(j).iter().zip(self.u.column(j)).map(|(a, b)| a - b).collect();
                norm2(&d)
            })
            .fold(0.0, f64::max)
    }

    /// `‖U·Uᵀ − S‖_F`: a C-real basis is a Takagi factor of `S`.
    pub fn takagi_residual(&self, c: &Conjugation) -> f64 {
        (&(&self.u * &self.u.transpose()) - c.s()).frobenius_norm()
    }
}

/// Builds a C-real orthonormal basis by greedy symmetrization.
///
/// Each step takes a unit vector `x` in the orthocomplement of the vectors
/// found so far (that complement is C-invariant) and keeps `x + Cx`, or
/// `i(x − Cx)` when the former is short. Candidates are the standard basis
/// vectors, best-projected first, so `S = I` yields the identity basis;
/// seeded random vectors are the fallback if a step degenerates.
pub fn c_real_basis(c: &Conjugation) -> Result<CRealBasis> {
    c_real_basis_seeded(c, C_REAL_SEED)
}

pub fn c_real_basis_seeded(c: &Conjugation, seed: u64) -> Result<CRealBasis> {
    let n = c.n();
    let mut rng = rng_from_seed(seed);
    let mut found: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut attempts = 0;

    while found.len() < n {
        let mut x = if attempts == 0 {
            best_standard_candidate(n, &found)
        } else {
            let mut r: Vec<C64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
            orthogonalize_against(&mut r, &found);
            r
        };
        if normalize(&mut x) < 1e-8 {
            attempts += 1;
            if attempts > C_REAL_MAX_RETRIES {
                return Err(CsoError::NumericalBreakdown { attempts });
            }
            continue;
        }
        let cx = c.apply(&x)?;
        let plus: Vec<C64> = x.iter().zip(&cx).map(|(a, b)| a + b).collect();
        let mut y = if norm2(&plus) >= 0.1 {
            plus
        } else {
            x.iter().zip(&cx).map(|(a, b)| I * (a - b)).collect()
        };
        // The projector onto a C-invariant subspace commutes with C, so
        // re-orthogonalizing keeps y fixed while cleaning up rounding.
        orthogonalize_against(&mut y, &found);
        if normalize(&mut y) < 0.5 {
            attempts += 1;
            if attempts > C_REAL_MAX_RETRIES {
                return Err(CsoError::NumericalBreakdown { attempts });
            }
            continue;
        }
        // Symmetrize once more against rounding: (y + Cy)/2 is exactly fixed.
        let cy = c.apply(&y)?;
        let mut y: Vec<C64> = y.iter().zip(&cy).map(|(a, b)| (a + b) * 0.5).collect();
        normalize(&mut y);
        found.push(y);
        attempts = 0;
    }
    Ok(CRealBasis {
        u: CMatrix::from_columns(&found),
    })
}

fn best_standard_candidate(n: usize, found: &[Vec<C64>]) -> Vec<C64> {
    let mut best: Option<(f64, Vec<C64>)> = None;
    for e in 0..n {
        let mut x = vec![ZERO; n];
        x[e] = ONE;
        orthogonalize_against(&mut x, found);
        let nrm = norm2(&x);
        // Strict improvement keeps the lowest index on ties.
        if best.as_ref().map_or(true, |(b, _)| nrm > *b + 1e-12) {
            best = Some((nrm, x));
        }
    }
    best.map(|(_, x)| x).unwrap_or_else(|| vec![ZERO; n])
}

/// `⟨Cx, Cy⟩` versus `conj⟨x, y⟩`: the antiunitary inner-product law.
pub fn inner_product_defect(c: &Conjugation, x: &[C64], y: &[C64]) -> Result<f64> {
    let cx = c.apply(x)?;
    let cy = c.apply(y)?;
    Ok((dot(&cx, &cy) - dot(x, y).conj()).norm())
}
