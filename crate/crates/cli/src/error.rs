use std::path::PathBuf;

use cso_core::CsoError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] CsoError),
}

impl CliError {
    /// 2 for numerical trouble, 1 for everything the user can fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Core(
                CsoError::NumericalAmbiguity(_)
                | CsoError::BudgetExhausted { .. }
                | CsoError::DegenerateKernel
                | CsoError::NoConvergence { .. }
                | CsoError::NumericalBreakdown { .. },
            ) => 2,
            _ => 1,
        }
    }
}
