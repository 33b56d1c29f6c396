use thiserror::Error;

use crate::perturb::PerturbationResult;

pub type Result<T> = std::result::Result<T, CsoError>;

#[derive(Debug, Error)]
pub enum CsoError {
    #[error("matrix contains a NaN or infinite entry")]
    NonFinite,

    #[error("malformed matrix: {0}")]
    Shape(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("{routine} did not converge within {limit} iterations")]
    NoConvergence { routine: &'static str, limit: usize },

    #[error("invalid conjugation: symmetry residual {symmetry:.3e}, unitarity residual {unitarity:.3e}")]
    InvalidConjugation { symmetry: f64, unitarity: f64 },

    #[error("C-real basis construction stalled after {attempts} attempts")]
    NumericalBreakdown { attempts: usize },

    #[error("matrix is not C-symmetric for the supplied conjugation (residual {residual:.3e})")]
    NotCSymmetric { residual: f64 },

    #[error("eps = {eps:.3e} is below the rounding floor {floor:.3e}")]
    EpsTooSmall { eps: f64, floor: f64 },

    #[error("eps must be positive and finite, got {0}")]
    InvalidEps(f64),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("numerical ambiguity: {0}")]
    NumericalAmbiguity(String),

    #[error("point is spectral within tolerance but the numerical kernel is empty")]
    DegenerateKernel,

    #[error("retry budget exhausted while removing point #{index}")]
    BudgetExhausted {
        index: usize,
        partial: Box<PerturbationResult>,
    },

    #[error("matrices #{0} and #{1} do not commute")]
    NotCommuting(usize, usize),

    #[error("matrix #{0} is not normal")]
    NotNormal(usize),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
}
