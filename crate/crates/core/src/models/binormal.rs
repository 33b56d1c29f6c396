//! Binormal block matrices `[[N₁₁, N₁₂], [N₂₁, N₂₂]]` with commuting normal
//! entries, and their splitting into `2×2` blocks.

use serde::{Deserialize, Serialize};

use super::{check_commuting, check_normal};
use crate::conjugation::Conjugation;
use crate::error::{CsoError, Result};
use crate::matcore::{hermitian_eig, CMatrix, C64, I, ZERO};
use crate::random::{complex_gaussian, derive_seed, gaussian, haar_unitary, rng_from_seed};
use crate::symmetry::{find_conjugation, ConjugationSearch, CsoCertificate, DEFAULT_MAX_ITER, DEFAULT_RESTARTS};

const CLUSTER_GAP: f64 = 1e-7;
const MAX_DEPTH: usize = 5;
const DIAGONAL_TOL: f64 = 1e-8;
const SCALAR_TOL: f64 = 1e-9;
const COMBINATION_SEED: u64 = 0xD1A6;

/// Four commuting normal `n×n` blocks in the order `N₁₁, N₁₂, N₂₁, N₂₂`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct BinormalSpec {
    blocks: Vec<CMatrix>,
}

#[derive(Deserialize)]
struct RawSpec {
    blocks: Vec<CMatrix>,
}

impl TryFrom<RawSpec> for BinormalSpec {
    type Error = CsoError;

    fn try_from(raw: RawSpec) -> Result<Self> {
        Self::new(raw.blocks)
    }
}

impl BinormalSpec {
    /// Checks shapes, normality and pairwise commutation.
    pub fn new(blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != 4 {
            return Err(CsoError::InvalidSpec(format!("expected 4 blocks, got {}", blocks.len())));
        }
        validate_family(&blocks)?;
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks[0].n()
    }
}

fn validate_family(mats: &[CMatrix]) -> Result<()> {
    for (i, m) in mats.iter().enumerate() {
        mats[0].ensure_same_dim(m)?;
        m.ensure_finite()?;
        check_normal(m, i)?;
    }
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            check_commuting(&mats[i], &mats[j], (i, j))?;
        }
    }
    Ok(())
}

/// A unitary `v` such that every `v*·M·v` is diagonal, for a family of
/// commuting normal matrices.
///
/// Diagonalizes a random real combination of the Hermitian and
/// skew-Hermitian parts, then recurses inside eigenvalue clusters with a
/// fresh combination.
pub fn simultaneous_diagonalize(mats: &[CMatrix]) -> Result<CMatrix> {
    if mats.is_empty() {
        return Err(CsoError::InvalidSpec("at least one matrix required".into()));
    }
    validate_family(mats)?;
    let n = mats[0].n();
    let parts: Vec<CMatrix> = mats
        .iter()
        .flat_map(|m| {
            let m_star = m.adjoint();
            [(m + &m_star).scale_real(0.5), (m - &m_star).scale(-0.5 * I)]
        })
        .filter(|h| h.frobenius_norm() > 0.0)
        .collect();

    let mut columns = Vec::with_capacity(n);
    let identity: Vec<Vec<C64>> = CMatrix::identity(n).columns();
    refine(&parts, identity, 0, COMBINATION_SEED, &mut columns)?;
    let v = CMatrix::from_columns(&columns);

    for m in mats {
        let d = &(&v.adjoint() * m) * &v;
        if d.off_diagonal_norm() > DIAGONAL_TOL * m.frobenius_norm() {
            return Err(CsoError::NumericalAmbiguity(
                "simultaneous diagonalization left off-diagonal mass".into(),
            ));
        }
    }
    Ok(v)
}

/// Restriction `B*·H·B` of `h` to the span of the orthonormal `basis`.
fn restrict(h: &CMatrix, basis: &[Vec<C64>]) -> CMatrix {
    let hb: Vec<Vec<C64>> = basis.iter().map(|b| h.mul_vec(b)).collect();
    CMatrix::from_fn(basis.len(), |i, j| {
        basis[i].iter().zip(&hb[j]).map(|(x, y)| x.conj() * y).sum()
    })
}

fn refine(parts: &[CMatrix], basis: Vec<Vec<C64>>, depth: usize, seed: u64, out: &mut Vec<Vec<C64>>) -> Result<()> {
    let k = basis.len();
    let restricted: Vec<CMatrix> = parts.iter().map(|h| restrict(h, &basis)).collect();
    let all_scalar = restricted.iter().zip(parts).all(|(r, h)| {
        let shift = r.trace() / k as f64;
        (r - &CMatrix::identity(k).scale(shift)).frobenius_norm() <= SCALAR_TOL * h.frobenius_norm()
    });
    if k == 1 || all_scalar || depth >= MAX_DEPTH {
        out.extend(basis);
        return Ok(());
    }

    let mut rng = rng_from_seed(seed);
    let mut combo = CMatrix::zeros(k);
    for (r, h) in restricted.iter().zip(parts) {
        combo = &combo + &r.scale_real(gaussian(&mut rng) / h.frobenius_norm());
    }
    let combo = (&combo + &combo.adjoint()).scale_real(0.5);
    let eig = hermitian_eig(&combo)?;
    let scale = combo.frobenius_norm().max(f64::MIN_POSITIVE);

    let lifted: Vec<Vec<C64>> = (0..k)
        .map(|j| {
            let w = eig.vectors.column(j);
            (0..basis[0].len())
                .map(|i| basis.iter().zip(&w).map(|(b, c)| b[i] * c).sum())
                .collect()
        })
        .collect();

    let mut start = 0;
    let mut cluster_index = 0;
    for end in 1..=k {
        if end == k || eig.values[end] - eig.values[end - 1] > CLUSTER_GAP * scale {
            let cluster = lifted[start..end].to_vec();
            let child_seed = derive_seed(seed, cluster_index);
            if cluster.len() == 1 {
                out.extend(cluster);
            } else {
                refine(parts, cluster, depth + 1, child_seed, out)?;
            }
            start = end;
            cluster_index += 1;
        }
    }
    Ok(())
}

/// The assembled `2n×2n` matrix and its splitting `wᴴ·t·w ≈ ⊕ᵢ blocks[i]`.
#[derive(Clone, Debug)]
pub struct BinormalDecomposition {
    pub t: CMatrix,
    /// `(v ⊕ v)` followed by the interleaving permutation.
    pub unitary: CMatrix,
    pub blocks: Vec<CMatrix>,
    /// `‖wᴴ·t·w − ⊕ blocks‖_F`.
    pub residual: f64,
}

/// Builds `[[N₁₁, N₁₂], [N₂₁, N₂₂]]` and splits it into `2×2` blocks
/// `[[λᵢ¹¹, λᵢ¹²], [λᵢ²¹, λᵢ²²]]` over a common eigenbasis.
pub fn binormal_matrix(spec: &BinormalSpec) -> Result<BinormalDecomposition> {
    let n = spec.n();
    let b = spec.blocks();
    let t = CMatrix::from_fn(2 * n, |i, j| b[2 * (i / n) + j / n][(i % n, j % n)]);
    let v = simultaneous_diagonalize(b)?;

    // Column 2i is v·e_i in the first copy, column 2i+1 in the second.
    let unitary = CMatrix::from_fn(2 * n, |i, j| {
        let (copy, col) = (j % 2, j / 2);
        if i / n == copy {
            v[(i % n, col)]
        } else {
            ZERO
        }
    });
    let split = &(&unitary.adjoint() * &t) * &unitary;
    let blocks: Vec<CMatrix> = (0..n).map(|i| split.principal_block(2 * i, 2)).collect();
    let residual = (&split - &CMatrix::block_diag(&blocks)).frobenius_norm();
    Ok(BinormalDecomposition {
        t,
        unitary,
        blocks,
        residual,
    })
}

/// Certificates for every `2×2` block, assembled into a conjugation for
/// the whole matrix via `S = w·(⊕ Sᵢ)·wᵀ`.
pub fn binormal_conjugation(decomp: &BinormalDecomposition) -> Result<Conjugation> {
    let certs = block_certificates(decomp)?;
    let s_blocks: Vec<CMatrix> = certs.iter().map(|c| c.conjugation.s().clone()).collect();
    let w = &decomp.unitary;
    let s = &(w * &CMatrix::block_diag(&s_blocks)) * &w.transpose();
    Ok(Conjugation::from_trusted((&s + &s.transpose()).scale_real(0.5)))
}

/// Runs the conjugation search on each `2×2` block.
pub fn block_certificates(decomp: &BinormalDecomposition) -> Result<Vec<CsoCertificate>> {
    decomp
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| match find_conjugation(b, DEFAULT_RESTARTS, DEFAULT_MAX_ITER)? {
            ConjugationSearch::Found(cert) => Ok(cert),
            ConjugationSearch::NotFound { best_residual } => Err(CsoError::NumericalAmbiguity(format!(
                "no conjugation found for block {i} (best residual {best_residual:.3e})"
            ))),
        })
        .collect()
}

/// Four commuting normal blocks `v·Dᵢⱼ·v*` with Gaussian diagonals; about a
/// third of the eigenvalue slots are repeated to exercise clustering.
pub fn random_binormal_spec(n: usize, seed: u64) -> BinormalSpec {
    assert!(n >= 1, "dimension must be positive");
    let mut rng = rng_from_seed(seed);
    let v = haar_unitary(n, &mut rng);
    let blocks = (0..4)
        .map(|_| {
            let mut d: Vec<C64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
            for i in 1..n {
                if gaussian(&mut rng) > 0.43 {
                    d[i] = d[i - 1];
                }
            }
            &(&v * &CMatrix::diag(&d)) * &v.adjoint()
        })
        .collect();
    BinormalSpec::new(blocks).expect("sampled blocks commute")
}
