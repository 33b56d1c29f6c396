//! Seeded batch experiments. Sample `i` draws everything from
//! `derive_seed(seed, i)`, so records do not depend on execution order.

use std::time::Instant;

use cso_core::commutant::commutant_summary;
use cso_core::matcore::operator_norm;
use cso_core::models::{random_cso, random_reducible_cso};
use cso_core::perturb::make_irreducible_cso;
use cso_core::random::{derive_seed, ginibre, rng_from_seed};
use cso_core::symmetry::{
    find_conjugation, gnormal_defect, standard_polynomials, trace_defect, CERTIFICATE_TOL, DEFAULT_MAX_ITER,
    DEFAULT_RESTARTS,
};
use cso_core::{CMatrix, Conjugation};
use serde::Serialize;

use crate::certify::{trace_bound, GNORMAL_BOUND};
use crate::{CliError, ExperimentArgs, Outcome};

const MAX_N: usize = 64;
const PROJECTION_TOL: f64 = 1e-7;
/// Trace defect that counts as clear evidence against complex symmetry.
const SEPARATION: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub n_range: [usize; 2],
    pub samples: usize,
    pub eps_grid: Vec<f64>,
    pub seed: u64,
    pub tol: f64,
    #[serde(skip)]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn from_args(args: &ExperimentArgs) -> Result<Self, CliError> {
        let cfg = Self {
            n_range: [args.n_min, args.n_max],
            samples: args.samples,
            eps_grid: args.eps.clone(),
            seed: args.seed,
            tol: args.tol,
            timing: args.timing,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let [lo, hi] = self.n_range;
        if lo < 1 || hi > MAX_N || lo > hi {
            return Err(CliError::Input(format!("n range [{lo}, {hi}] must lie within [1, {MAX_N}]")));
        }
        if self.samples < 1 {
            return Err(CliError::Input("samples must be at least 1".into()));
        }
        if self.eps_grid.is_empty() || self.eps_grid.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(CliError::Input("every eps must be positive and finite".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Input("tol must be positive and finite".into()));
        }
        Ok(())
    }

    fn dimension(&self, sample_seed: u64) -> usize {
        let [lo, hi] = self.n_range;
        lo + (derive_seed(sample_seed, 0) % (hi - lo + 1) as u64) as usize
    }
}

#[derive(Serialize)]
struct EpsRecord {
    eps: f64,
    norm_k: Option<f64>,
    residual: Option<f64>,
    commutant_dimension: Option<usize>,
    commutant_gap: Option<f64>,
    ambiguous: bool,
    irreducible: bool,
    /// `‖K‖ < eps`, residual within tolerance, and irreducible unless the
    /// ambiguity was flagged.
    contract_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn perturb_record(t: &CMatrix, c: &Conjugation, eps: f64, tol: f64) -> EpsRecord {
    let attempt = make_irreducible_cso(t, c, eps).and_then(|r| {
        let summary = commutant_summary(&r.perturbed, tol)?;
        Ok((r, summary))
    });
    match attempt {
        Ok((r, summary)) => {
            let irreducible = summary.dimension == 1 && !summary.ambiguous;
            let ok = r.norm_bound < eps && r.certificate.residual <= CERTIFICATE_TOL && (irreducible || summary.ambiguous);
            EpsRecord {
                eps,
                norm_k: Some(r.norm_bound),
                residual: Some(r.certificate.residual),
                commutant_dimension: Some(summary.dimension),
                commutant_gap: Some(summary.gap),
                ambiguous: summary.ambiguous,
                irreducible,
                contract_ok: ok,
                error: None,
            }
        }
        Err(e) => EpsRecord {
            eps,
            norm_k: None,
            residual: None,
            commutant_dimension: None,
            commutant_gap: None,
            ambiguous: false,
            irreducible: false,
            contract_ok: false,
            error: Some(e.to_string()),
        },
    }
}

#[derive(Serialize)]
struct DensitySample {
    index: usize,
    n: usize,
    random: Vec<EpsRecord>,
    /// `null` for `n = 1`, where nothing is reducible.
    reducible: Option<ReducibleArm>,
}

#[derive(Serialize)]
struct ReducibleArm {
    split: usize,
    block_projection_residual: f64,
    initial_commutant_dimension: usize,
    initially_reducible: bool,
    runs: Vec<EpsRecord>,
}

#[derive(Serialize, Default)]
struct ArmStats {
    runs: usize,
    irreducible: usize,
    ambiguous: usize,
    contract_violations: usize,
    success_rate: f64,
    max_norm_ratio: f64,
    all_norms_strict: bool,
    max_residual: f64,
}

impl ArmStats {
    fn from_records<'a>(records: impl Iterator<Item = &'a EpsRecord>) -> Self {
        let mut s = ArmStats {
            all_norms_strict: true,
            ..Default::default()
        };
        for r in records {
            s.runs += 1;
            s.irreducible += r.irreducible as usize;
            s.ambiguous += r.ambiguous as usize;
            s.contract_violations += !r.contract_ok as usize;
            match r.norm_k {
                Some(k) => {
                    s.max_norm_ratio = s.max_norm_ratio.max(k / r.eps);
                    s.all_norms_strict &= k < r.eps;
                }
                None => s.all_norms_strict = false,
            }
            s.max_residual = s.max_residual.max(r.residual.unwrap_or(f64::INFINITY));
        }
        s.success_rate = if s.runs == 0 { 0.0 } else { s.irreducible as f64 / s.runs as f64 };
        s
    }
}

#[derive(Serialize)]
struct DensityAggregate {
    random: ArmStats,
    reducible: ArmStats,
    reducible_inputs: usize,
    initially_reducible: usize,
}

#[derive(Serialize)]
struct DensityReport {
    command: &'static str,
    config: ExperimentConfig,
    samples: Vec<DensitySample>,
    aggregate: DensityAggregate,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_clock_seconds: Option<f64>,
}

/// For each sample: a random complex symmetric matrix and a reducible one
/// (`U(A ⊕ B)U*`), each perturbed to irreducibility at every eps.
pub fn density(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut samples = Vec::with_capacity(cfg.samples);
    for index in 0..cfg.samples {
        let s = derive_seed(cfg.seed, index as u64);
        let n = cfg.dimension(s);
        let (t, c) = random_cso(n, derive_seed(s, 1));
        let random = cfg.eps_grid.iter().map(|&e| perturb_record(&t, &c, e, cfg.tol)).collect();

        let reducible = if n >= 2 {
            let (t, c, split, u) = random_reducible_cso(n, derive_seed(s, 2));
            let mut d = vec![0.0; n];
            d[..split].iter_mut().for_each(|x| *x = 1.0);
            let p = &(&u * &CMatrix::diag_real(&d)) * &u.adjoint();
            let residual = (&(&p * &t) - &(&t * &p)).frobenius_norm();
            let dim = commutant_summary(&t, cfg.tol)?.dimension;
            Some(ReducibleArm {
                split,
                block_projection_residual: residual,
                initial_commutant_dimension: dim,
                initially_reducible: residual <= PROJECTION_TOL && dim > 1,
                runs: cfg.eps_grid.iter().map(|&e| perturb_record(&t, &c, e, cfg.tol)).collect(),
            })
        } else {
            None
        };
        samples.push(DensitySample {
            index,
            n,
            random,
            reducible,
        });
    }

    let arms: Vec<&ReducibleArm> = samples.iter().filter_map(|s| s.reducible.as_ref()).collect();
    let aggregate = DensityAggregate {
        random: ArmStats::from_records(samples.iter().flat_map(|s| &s.random)),
        reducible: ArmStats::from_records(arms.iter().flat_map(|a| &a.runs)),
        reducible_inputs: arms.len(),
        initially_reducible: arms.iter().filter(|a| a.initially_reducible).count(),
    };
    let ok = aggregate.random.contract_violations == 0
        && aggregate.reducible.contract_violations == 0
        && aggregate.initially_reducible == aggregate.reducible_inputs;
    let report = DensityReport {
        command: "experiment density",
        config: cfg.clone(),
        samples,
        aggregate,
        wall_clock_seconds: cfg.timing.then(|| start.elapsed().as_secs_f64()),
    };
    Outcome::new(&report, ok)
}

#[derive(Serialize)]
struct GnormalSample {
    index: usize,
    n: usize,
    cso: DefectRecord,
    /// Ginibre matrix of the same size, generically not complex symmetric.
    generic: DefectRecord,
}

#[derive(Serialize)]
struct DefectRecord {
    found: bool,
    search_residual: f64,
    gnormal_defect: f64,
    trace_defect: f64,
    trace_bound: f64,
}

fn defects(t: &CMatrix) -> Result<DefectRecord, CliError> {
    let polys = standard_polynomials();
    let search = find_conjugation(t, DEFAULT_RESTARTS, DEFAULT_MAX_ITER)?;
    let search_residual = match &search {
        cso_core::ConjugationSearch::Found(c) => c.residual,
        cso_core::ConjugationSearch::NotFound { best_residual } => *best_residual,
    };
    Ok(DefectRecord {
        found: search.is_found(),
        search_residual,
        gnormal_defect: gnormal_defect(t, polys)?,
        trace_defect: trace_defect(t, polys)?,
        trace_bound: trace_bound(t.n(), operator_norm(t)?),
    })
}

#[derive(Serialize)]
struct GnormalAggregate {
    cso_certified: usize,
    cso_within_bounds: usize,
    max_cso_gnormal_defect: f64,
    max_cso_trace_ratio: f64,
    generic_separated: usize,
    /// Generic samples with a large trace defect that were nevertheless
    /// certified: a contradiction.
    contradictions: usize,
}

#[derive(Serialize)]
struct GnormalReport {
    command: &'static str,
    config: ExperimentConfig,
    samples: Vec<GnormalSample>,
    aggregate: GnormalAggregate,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_clock_seconds: Option<f64>,
}

/// Defects of certified random complex symmetric matrices against generic
/// matrices of the same sizes.
pub fn gnormal(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut samples = Vec::with_capacity(cfg.samples);
    for index in 0..cfg.samples {
        let s = derive_seed(cfg.seed, index as u64);
        let n = cfg.dimension(s);
        let (t, _) = random_cso(n, derive_seed(s, 1));
        let g = ginibre(n, &mut rng_from_seed(derive_seed(s, 3)));
        samples.push(GnormalSample {
            index,
            n,
            cso: defects(&t)?,
            generic: defects(&g)?,
        });
    }
    let within = |r: &DefectRecord| r.found && r.gnormal_defect <= GNORMAL_BOUND && r.trace_defect <= r.trace_bound;
    let aggregate = GnormalAggregate {
        cso_certified: samples.iter().filter(|s| s.cso.found).count(),
        cso_within_bounds: samples.iter().filter(|s| within(&s.cso)).count(),
        max_cso_gnormal_defect: samples.iter().map(|s| s.cso.gnormal_defect).fold(0.0, f64::max),
        max_cso_trace_ratio: samples.iter().map(|s| s.cso.trace_defect / s.cso.trace_bound).fold(0.0, f64::max),
        generic_separated: samples
            .iter()
            .filter(|s| s.generic.trace_defect > SEPARATION && !s.generic.found)
            .count(),
        contradictions: samples
            .iter()
            .filter(|s| s.generic.trace_defect > s.generic.trace_bound && s.generic.found)
            .count(),
    };
    let ok = aggregate.cso_within_bounds == samples.len() && aggregate.contradictions == 0;
    let report = GnormalReport {
        command: "experiment gnormal",
        config: cfg.clone(),
        samples,
        aggregate,
        wall_clock_seconds: cfg.timing.then(|| start.elapsed().as_secs_f64()),
    };
    Outcome::new(&report, ok)
}
