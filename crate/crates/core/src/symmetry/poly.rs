//! Noncommutative polynomials in two letters and the g-normality defects.

use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CsoError, Result};
use crate::matcore::{operator_norm, CMatrix, C64};
use crate::random::{rng_from_seed, unit_disk};

pub const MAX_WORD_LEN: usize = 8;

/// Seed of the shipped standard polynomial set.
pub const STANDARD_SET_SEED: u64 = 0xC50;
pub const STANDARD_SET_SIZE: usize = 50;
/// Longest word in the standard set. Length 6 is the first length with a
/// binary word that is not cyclically equivalent to its reversal
/// (`zzwzww`); below that `trace_defect` vanishes for every matrix.
pub const STANDARD_SET_MAX_LEN: usize = 6;

const STANDARD_SET_JSON: &str = include_str!("../../data/standard_polys.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub re: f64,
    pub im: f64,
    /// Word over `{z, w}`; the empty word is the identity.
    pub word: String,
}

impl Term {
    pub fn new(coeff: C64, word: &str) -> Self {
        Self {
            re: coeff.re,
            im: coeff.im,
            word: word.to_string(),
        }
    }

    pub fn coeff(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

/// `Σ cₖ·wordₖ(z, w)` in free variables `z`, `w`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolynomial")]
pub struct NcPolynomial {
    terms: Vec<Term>,
}

#[derive(Deserialize)]
struct RawPolynomial {
    terms: Vec<Term>,
}

impl TryFrom<RawPolynomial> for NcPolynomial {
    type Error = CsoError;

    fn try_from(raw: RawPolynomial) -> Result<Self> {
        Self::new(raw.terms)
    }
}

impl NcPolynomial {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(CsoError::InvalidPolynomial("at least one term required".into()));
        }
        for t in &terms {
            if t.word.len() > MAX_WORD_LEN {
                return Err(CsoError::InvalidPolynomial(format!(
                    "word '{}' longer than {MAX_WORD_LEN}",
                    t.word
                )));
            }
            if let Some(bad) = t.word.chars().find(|&ch| ch != 'z' && ch != 'w') {
                return Err(CsoError::InvalidPolynomial(format!(
                    "letter '{bad}' outside {{z, w}}"
                )));
            }
            if !(t.re.is_finite() && t.im.is_finite()) {
                return Err(CsoError::InvalidPolynomial("non-finite coefficient".into()));
            }
        }
        Ok(Self { terms })
    }

    /// Single monomial with coefficient one.
    pub fn monomial(word: &str) -> Result<Self> {
        Self::new(vec![Term::new(C64::new(1.0, 0.0), word)])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.word.len()).max().unwrap_or(0)
    }

    /// `p̃`: every coefficient conjugated, words unchanged.
    pub fn conjugate_coefficients(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    re: t.re,
                    im: -t.im,
                    word: t.word.clone(),
                })
                .collect(),
        }
    }
}

/// Evaluates `p(first, second)`: `z ↦ first`, `w ↦ second`, words multiplied
/// left to right.
pub fn word_eval(p: &NcPolynomial, first: &CMatrix, second: &CMatrix) -> Result<CMatrix> {
    first.ensure_same_dim(second)?;
    let n = first.n();
    let mut acc = CMatrix::zeros(n);
    for term in p.terms() {
        let mut prod = CMatrix::identity(n);
        for letter in term.word.chars() {
            prod = if letter == 'z' { &prod * first } else { &prod * second };
        }
        acc = &acc + &prod.scale(term.coeff());
    }
    Ok(acc)
}

/// `max_p |‖p(T*,T)‖ − ‖p̃(T,T*)‖| / (1 + ‖p(T*,T)‖)`.
pub fn gnormal_defect(t: &CMatrix, polys: &[NcPolynomial]) -> Result<f64> {
    if polys.is_empty() {
        return Err(CsoError::InvalidPolynomial("empty polynomial list".into()));
    }
    let t_star = t.adjoint();
    let mut worst: f64 = 0.0;
    for p in polys {
        let lhs = operator_norm(&word_eval(p, &t_star, t)?)?;
        let rhs = operator_norm(&word_eval(&p.conjugate_coefficients(), t, &t_star)?)?;
        worst = worst.max((lhs - rhs).abs() / (1.0 + lhs));
    }
    Ok(worst)
}

/// `max_p |tr p̃(T,T*) − conj(tr p(T*,T))|`, zero for every complex
/// symmetric `T` since `C·p(T*,T)·C = p̃(T,T*)` and `tr(CXC) = conj(tr X)`.
pub fn trace_defect(t: &CMatrix, polys: &[NcPolynomial]) -> Result<f64> {
    if polys.is_empty() {
        return Err(CsoError::InvalidPolynomial("empty polynomial list".into()));
    }
    let t_star = t.adjoint();
    let mut worst: f64 = 0.0;
    for p in polys {
        let lhs = word_eval(&p.conjugate_coefficients(), t, &t_star)?.trace();
        let rhs = word_eval(p, &t_star, t)?.trace().conj();
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Seeded sampler: `count` polynomials with 1–5 terms, words of length
/// `1..=max_len` over `{z, w}`, coefficients uniform in the closed unit disk.
pub fn random_polynomials(seed: u64, count: usize, max_len: usize) -> Vec<NcPolynomial> {
    assert!((1..=MAX_WORD_LEN).contains(&max_len), "max_len out of range");
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| {
            let n_terms = rng.random_range(1..=5);
            let terms = (0..n_terms)
                .map(|_| {
                    let len = rng.random_range(1..=max_len);
                    let word: String = (0..len)
                        .map(|_| if rng.random::<bool>() { 'z' } else { 'w' })
                        .collect();
                    Term::new(unit_disk(&mut rng), &word)
                })
                .collect();
            NcPolynomial { terms }
        })
        .collect()
}

/// The shipped standard set (50 polynomials, seed `0xC50`).
pub fn standard_polynomials() -> &'static [NcPolynomial] {
    static SET: OnceLock<Vec<NcPolynomial>> = OnceLock::new();
    SET.get_or_init(|| {
        serde_json::from_str(STANDARD_SET_JSON).expect("shipped polynomial set must parse")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j2() -> CMatrix {
        CMatrix::shift(2, false)
    }

    #[test]
    fn shipped_set_matches_sampler() {
        let fresh = random_polynomials(STANDARD_SET_SEED, STANDARD_SET_SIZE, STANDARD_SET_MAX_LEN);
        assert_eq!(standard_polynomials(), fresh.as_slice());
    }

    #[test]
    fn word_eval_examples() {
        let t = j2();
        let p = NcPolynomial::monomial("zw").unwrap();
        // J = e1 ⊗ e2 (J e2 = e1), so J*J = diag(0, 1).
        let got = word_eval(&p, &t.adjoint(), &t).unwrap();
        assert_eq!(got, CMatrix::diag_real(&[0.0, 1.0]));
        assert_eq!(got, &t.adjoint() * &t);

        let p = NcPolynomial::monomial("").unwrap();
        assert_eq!(word_eval(&p, &t, &t).unwrap(), CMatrix::identity(2));

        let a = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![-3.0, 0.5]]).unwrap();
        let p = NcPolynomial::new(vec![
            Term::new(C64::new(2.0, 0.0), "z"),
            Term::new(C64::new(-1.0, 0.0), "w"),
        ])
        .unwrap();
        assert_eq!(word_eval(&p, &a, &a).unwrap(), a);

        assert!(word_eval(&p, &a, &CMatrix::identity(3)).is_err());
    }

    #[test]
    fn commutator_polynomial_on_jordan_block() {
        let p = NcPolynomial::new(vec![
            Term::new(C64::new(1.0, 0.0), "zw"),
            Term::new(C64::new(-1.0, 0.0), "wz"),
        ])
        .unwrap();
        assert!(gnormal_defect(&j2(), &[p]).unwrap() < 1e-15);
    }

    #[test]
    fn trace_defect_diagonal_example() {
        let t = CMatrix::diag(&[C64::new(0.0, 1.0), C64::new(0.0, -1.0)]);
        let p = NcPolynomial::monomial("zww").unwrap();
        assert!(trace_defect(&t, &[p]).unwrap() < 1e-15);
        let empty = NcPolynomial::monomial("").unwrap();
        assert_eq!(trace_defect(&t, &[empty]).unwrap(), 0.0);
    }

    #[test]
    fn normal_matrices_have_zero_defects() {
        let t = CMatrix::diag(&[C64::new(1.0, 2.0), C64::new(-0.5, 0.3), C64::new(0.0, -1.0)]);
        let polys = standard_polynomials();
        assert!(gnormal_defect(&t, polys).unwrap() < 1e-10);
        assert!(trace_defect(&t, polys).unwrap() < 1e-10);
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(NcPolynomial::new(vec![]).is_err());
        assert!(NcPolynomial::monomial("zzzzzzzzz").is_err());
        assert!(NcPolynomial::monomial("zx").is_err());
        assert!(gnormal_defect(&j2(), &[]).is_err());
        let bad = r#"{"terms":[{"re":1.0,"im":0.0,"word":"q"}]}"#;
        assert!(serde_json::from_str::<NcPolynomial>(bad).is_err());
    }

    #[test]
    fn json_form() {
        let p = NcPolynomial::new(vec![Term::new(C64::new(0.5, -1.0), "zww")]).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"terms":[{"re":0.5,"im":-1.0,"word":"zww"}]}"#);
        assert_eq!(serde_json::from_str::<NcPolynomial>(&text).unwrap(), p);
    }
}
