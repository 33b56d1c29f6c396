use cso_core::commutant::{commutant_summary, DEFAULT_COMMUTANT_TOL};
use cso_core::perturb::{make_irreducible_cso, remove_point, remove_points};
use cso_core::{CsoError, PerturbationResult};
use serde::Serialize;

use crate::{read_conjugation, read_matrix, CliError, Outcome, PerturbAction};

#[derive(Serialize)]
struct PerturbReport<'a> {
    command: &'static str,
    eps: f64,
    result: &'a PerturbationResult,
    /// Irreducibility of `T + K` (irreducible mode only; `null` if ambiguous).
    #[serde(skip_serializing_if = "Option::is_none")]
    irreducible: Option<Option<bool>>,
    /// Removal that ran out of retries; `result` holds the partial state.
    #[serde(skip_serializing_if = "Option::is_none")]
    exhausted_at: Option<usize>,
}

pub(crate) fn run(action: &PerturbAction) -> Result<Outcome, CliError> {
    match action {
        PerturbAction::Irreducible { file, conj, eps } => {
            let t = read_matrix(file)?;
            let c = read_conjugation(conj)?;
            let result = make_irreducible_cso(&t, &c, *eps)?;
            let commutant = commutant_summary(&result.perturbed, DEFAULT_COMMUTANT_TOL)?;
            let irreducible = (!commutant.ambiguous).then_some(commutant.dimension == 1);
            let ok = result.norm_bound < *eps && result.certificate.is_accepted() && irreducible == Some(true);
            Outcome::new(
                &PerturbReport {
                    command: "perturb irreducible",
                    eps: *eps,
                    result: &result,
                    irreducible: Some(irreducible),
                    exhausted_at: None,
                },
                ok,
            )
        }
        PerturbAction::Remove { file, conj, lambdas, eps } => {
            let t = read_matrix(file)?;
            let c = read_conjugation(conj)?;
            let attempt = match lambdas.as_slice() {
                [single] => remove_point(&t, &c, *single, *eps),
                many => remove_points(&t, &c, many, *eps),
            };
            let (result, exhausted_at) = match attempt {
                Ok(r) => (r, None),
                Err(CsoError::BudgetExhausted { index, partial }) => (*partial, Some(index)),
                Err(e) => return Err(e.into()),
            };
            let ok = exhausted_at.is_none() && result.norm_bound < *eps && result.certificate.is_accepted();
            Outcome::new(
                &PerturbReport {
                    command: "perturb remove",
                    eps: *eps,
                    result: &result,
                    irreducible: None,
                    exhausted_at,
                },
                ok,
            )
        }
    }
}
