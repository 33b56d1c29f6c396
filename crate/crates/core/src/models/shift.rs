//! Finite weighted shifts `T e_i = α_i e_{i+1}`.

use serde::{Deserialize, Serialize};

use crate::conjugation::Conjugation;
use crate::error::{CsoError, Result};
use crate::matcore::{CMatrix, C64, ONE};

const MODULUS_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftKind {
    Unilateral,
    /// Finite window of a bilateral shift. The matrix is the same; the label
    /// records that it only approximates the infinite operator.
    BilateralTruncation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedShiftSpec {
    /// `[re, im]` pairs.
    pub weights: Vec<[f64; 2]>,
    pub kind: ShiftKind,
    /// Claimed index `k` with `|α_{k−j}| = |α_j|`; checked when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry_index: Option<usize>,
}

impl WeightedShiftSpec {
    pub fn new(weights: &[C64], kind: ShiftKind) -> Self {
        Self {
            weights: weights.iter().map(|w| [w.re, w.im]).collect(),
            kind,
            symmetry_index: None,
        }
    }

    pub fn weights(&self) -> Vec<C64> {
        self.weights.iter().map(|&[re, im]| C64::new(re, im)).collect()
    }
}

fn same_modulus(a: C64, b: C64) -> bool {
    let (x, y) = (a.norm(), b.norm());
    (x - y).abs() <= MODULUS_TOL * x.max(y)
}

fn reflected_moduli_match(w: &[C64], k: usize) -> bool {
    (0..w.len()).filter(|&j| j <= k && k - j < w.len()).all(|j| same_modulus(w[k - j], w[j]))
}

/// The `(m+1)×(m+1)` shift with weights `α_0, …, α_{m−1}` and, when the
/// moduli are palindromic, a witness conjugation `S = flip·diag(d)`.
///
/// `S·conj(T) = T*·S` reduces to `d_{j+1}·conj(α_j) = d_j·conj(α_{m−1−j})`,
/// solved forward from `d_0 = 1`; palindromic moduli make every ratio
/// unimodular and `d` itself palindromic, so `S` is symmetric unitary.
pub fn weighted_shift(spec: &WeightedShiftSpec) -> Result<(CMatrix, Option<Conjugation>)> {
    let w = spec.weights();
    if w.is_empty() {
        return Err(CsoError::InvalidSpec("weights must be nonempty".into()));
    }
    if w.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
        return Err(CsoError::NonFinite);
    }
    let m = w.len();
    if let Some(k) = spec.symmetry_index {
        if !reflected_moduli_match(&w, k) {
            return Err(CsoError::InvalidSpec(format!("weight moduli are not symmetric about index {k}")));
        }
    }

    let n = m + 1;
    let mut t = CMatrix::zeros(n);
    for (i, &a) in w.iter().enumerate() {
        t[(i + 1, i)] = a;
    }
    if !reflected_moduli_match(&w, m - 1) {
        return Ok((t, None));
    }

    let mut d = vec![ONE; n];
    for j in 0..m {
        let (num, den) = (w[m - 1 - j].conj(), w[j].conj());
        let ratio = if den.norm() == 0.0 { ONE } else { num / den };
        // Renormalize so rounding cannot drift off the unit circle.
        let next = d[j] * ratio;
        d[j + 1] = next / next.norm();
    }
    let s = CMatrix::from_fn(n, |i, j| if i + j + 1 == n { d[j] } else { C64::new(0.0, 0.0) });
    let s = (&s + &s.transpose()).scale_real(0.5);
    Ok((t, Some(Conjugation::from_trusted(s))))
}
