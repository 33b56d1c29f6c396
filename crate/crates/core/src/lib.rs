//! Complex symmetric matrices.
//!
//! A square matrix `T` is complex symmetric when `C·T·C = T*` for some
//! conjugation `C` (equivalently, `T` is unitarily similar to a symmetric
//! matrix). This crate certifies membership, decides irreducibility through
//! the commutant of `{T, T*}`, and builds small perturbations that preserve
//! complex symmetry while making `T` irreducible or removing spectral points.

pub mod commutant;
pub mod conjugation;
pub mod error;
pub mod matcore;
pub mod models;
pub mod perturb;
pub mod random;
pub mod symmetry;

pub use commutant::{commutant_dimension, is_irreducible, reducing_projection, CommutantReport, Reduction};
pub use conjugation::{c_real_basis, canonical_conjugation, flip_conjugation, random_conjugation, Conjugation};
pub use error::{CsoError, Result};
pub use matcore::{CMatrix, C64};
pub use perturb::{make_irreducible_cso, remove_point, remove_points, PerturbationResult};
pub use symmetry::{c_symmetry_residual, find_conjugation, ConjugationSearch, CsoCertificate};
