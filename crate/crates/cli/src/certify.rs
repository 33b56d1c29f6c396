use std::path::Path;

use cso_core::commutant::{commutant_summary, reducing_projection, Reduction};
use cso_core::matcore::{eig_general, operator_norm};
use cso_core::symmetry::{
    find_conjugation, gnormal_defect, standard_polynomials, trace_defect, ConjugationSearch, DEFAULT_MAX_ITER,
    DEFAULT_RESTARTS, STANDARD_SET_SEED, STANDARD_SET_SIZE,
};
use cso_core::CMatrix;
use serde::Serialize;

use crate::{read_matrix, CliError, Outcome};

/// Complex symmetric matrices have `gnormal_defect` at rounding level.
pub(crate) const GNORMAL_BOUND: f64 = 1e-8;

/// Rounding-level bound on `trace_defect` for complex symmetric `t`.
pub(crate) fn trace_bound(n: usize, norm: f64) -> f64 {
    1e-10 * n as f64 * (1.0 + norm).powi(4)
}

#[derive(Serialize)]
struct PolynomialSet {
    seed: u64,
    size: usize,
}

#[derive(Serialize)]
struct CommutantSummary {
    dimension: usize,
    gap: f64,
    ambiguous: bool,
}

#[derive(Serialize)]
struct CertifyReport {
    command: &'static str,
    n: usize,
    tol: f64,
    search: ConjugationSearch,
    polynomial_set: PolynomialSet,
    trace_defect: f64,
    trace_bound: f64,
    gnormal_defect: f64,
    /// Why the matrix cannot be complex symmetric, when the defects prove it.
    obstruction: Option<String>,
    commutant: CommutantSummary,
    /// `null` when the commutant dimension is ambiguous.
    irreducible: Option<bool>,
    reducing_projection: Option<CMatrix>,
    spectrum: Vec<[f64; 2]>,
}

pub(crate) fn run(file: &Path, tol: f64) -> Result<Outcome, CliError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Input(format!("--tol must be positive, got {tol}")));
    }
    let t = read_matrix(file)?;
    let n = t.n();
    if n == 0 {
        return Err(CliError::Input("empty matrix".into()));
    }

    let search = find_conjugation(&t, DEFAULT_RESTARTS, DEFAULT_MAX_ITER)?;
    let polys = standard_polynomials();
    let tdef = trace_defect(&t, polys)?;
    let gdef = gnormal_defect(&t, polys)?;
    let bound = trace_bound(n, operator_norm(&t)?);
    let obstruction = if !search.is_found() && tdef > bound {
        Some(format!(
            "trace_defect {tdef:.3e} exceeds {bound:.3e}; complex symmetric matrices have trace_defect 0"
        ))
    } else if !search.is_found() && gdef > GNORMAL_BOUND {
        Some(format!("gnormal_defect {gdef:.3e} exceeds {GNORMAL_BOUND:.0e}; not g-normal"))
    } else {
        None
    };

    let commutant = commutant_summary(&t, tol)?;
    let (irreducible, projection) = if commutant.ambiguous {
        (None, None)
    } else if commutant.dimension == 1 {
        (Some(true), None)
    } else {
        match reducing_projection(&t, tol)? {
            Reduction::Found(p) => (Some(false), Some(p)),
            Reduction::NoneExists => (Some(false), None),
        }
    };

    let report = CertifyReport {
        command: "certify",
        n,
        tol,
        search,
        polynomial_set: PolynomialSet {
            seed: STANDARD_SET_SEED,
            size: STANDARD_SET_SIZE,
        },
        trace_defect: tdef,
        trace_bound: bound,
        gnormal_defect: gdef,
        obstruction,
        commutant: CommutantSummary {
            dimension: commutant.dimension,
            gap: commutant.gap,
            ambiguous: commutant.ambiguous,
        },
        irreducible,
        reducing_projection: projection,
        spectrum: eig_general(&t)?.iter().map(|z| [z.re, z.im]).collect(),
    };
    Outcome::new(&report, !commutant.ambiguous)
}
