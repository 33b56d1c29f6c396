//! Small-norm perturbations that keep complex symmetry: one that makes the
//! operator irreducible, and one that pushes chosen points out of the
//! spectrum.

use serde::Serialize;

use crate::commutant::{commutant_summary, DEFAULT_COMMUTANT_TOL};
use crate::conjugation::{c_real_basis, Conjugation};
use crate::error::{CsoError, Result};
use crate::matcore::{eig_general, hermitian_eig, null_space_basis, operator_norm, svd, CMatrix, C64, I};
use crate::symmetry::{c_symmetry_residual, CsoCertificate, CERTIFICATE_TOL};

/// Kernel threshold for spectral-point removal, relative to `max(1, σ₁)`.
pub const KERNEL_TOL: f64 = 1e-8;
/// `σ_min(T + K − λ₀)` must exceed this times `max(1, ‖T‖)`.
pub const INVERTIBILITY_FLOOR: f64 = 1e-10;
/// Halvings allowed per point in [`remove_points`].
pub const MAX_BUDGET_RETRIES: usize = 10;

const EPS_FLOOR_FACTOR: f64 = 1e3;
const DISTINCT_POINTS_TOL: f64 = 1e-8;

/// `K`, `T + K`, and the evidence that `T + K` is still complex symmetric.
#[derive(Clone, Debug)]
pub struct PerturbationResult {
    pub k: CMatrix,
    pub perturbed: CMatrix,
    pub certificate: CsoCertificate,
    /// `‖K‖` in operator norm.
    pub norm_bound: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum Diagnostics {
    Irreducible(IrreducibleDiagnostics),
    PointRemoval { steps: Vec<RemovalStep> },
}

#[derive(Clone, Debug, Serialize)]
pub struct IrreducibleDiagnostics {
    /// How the C-real frame was obtained.
    pub basis: String,
    /// Spread diagonal of the real part in that frame, ascending.
    pub a_values: Vec<f64>,
    pub fill_magnitude: f64,
    /// Entries of the imaginary part raised to the fill magnitude.
    pub filled_entries: usize,
    pub commutant_dimension: usize,
    /// `null` when the singular-value split is exact.
    pub commutant_gap: f64,
    pub ambiguous: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RemovalStep {
    pub lambda: [f64; 2],
    /// The `eps` handed to the single-point construction; `‖K‖` is half of it.
    pub budget: f64,
    pub kernel_dim: usize,
    /// `σ_min(T + K − λ)` after the step.
    pub sigma_min: f64,
    /// Achieved `σ_min` within 10× of the acceptance floor.
    pub near_floor: bool,
    /// `λ` was not in the spectrum, so nothing was added.
    pub no_op: bool,
    pub retries: usize,
}

impl Serialize for PerturbationResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            k: &'a CMatrix,
            perturbed: &'a CMatrix,
            conjugation_s: &'a CMatrix,
            residual: f64,
            norm_bound: f64,
            diagnostics: &'a Diagnostics,
        }
        View {
            k: &self.k,
            perturbed: &self.perturbed,
            conjugation_s: self.certificate.conjugation.s(),
            residual: self.certificate.residual,
            norm_bound: self.norm_bound,
            diagnostics: &self.diagnostics,
        }
        .serialize(serializer)
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(CsoError::InvalidEps(eps))
    }
}

fn check_symmetric(t: &CMatrix, c: &Conjugation) -> Result<()> {
    t.ensure_finite()?;
    let residual = c_symmetry_residual(t, c)?;
    if residual > CERTIFICATE_TOL {
        return Err(CsoError::NotCSymmetric { residual });
    }
    Ok(())
}

/// Perturbs a C-symmetric `t` by `K` with `‖K‖ < eps` so that `t + K` is
/// irreducible and still C-symmetric for the same `c`.
///
/// In a C-real frame `t` is a symmetric matrix `A + iB` with `A`, `B` real.
/// After rotating so that `A` is diagonal, the diagonal is spread to be
/// strictly increasing (at most `eps/4`) and every entry of `B` is pushed
/// to magnitude at least `eps/(5n²)` (at most `eps/5` in total). A diagonal
/// real part with distinct entries plus an imaginary part without zero
/// entries leaves only scalars in the commutant.
pub fn make_irreducible_cso(t: &CMatrix, c: &Conjugation, eps: f64) -> Result<PerturbationResult> {
    check_eps(eps)?;
    check_symmetric(t, c)?;
    let n = t.n();
    let floor = EPS_FLOOR_FACTOR * f64::EPSILON * (1.0 + operator_norm(t)?);
    if eps < floor {
        return Err(CsoError::EpsTooSmall { eps, floor });
    }

    let u = c_real_basis(c)?.u;
    let t0 = &(&u.adjoint() * t) * &u;
    let asym = (&t0 - &t0.transpose()).frobenius_norm();
    if asym > CERTIFICATE_TOL * (1.0 + t.frobenius_norm()) {
        return Err(CsoError::NotCSymmetric { residual: asym });
    }
    let t0 = (&t0 + &t0.transpose()).scale_real(0.5);

    let eig = hermitian_eig(&t0.real_part())?;
    let q = eig.vectors.real_part();
    let b1 = {
        let b = &(&q.transpose() * &t0.imag_part()) * &q;
        (&b + &b.transpose()).scale_real(0.5)
    };

    let spread = eps / (4.0 * n as f64);
    let a_values: Vec<f64> = eig.values.iter().enumerate().map(|(j, d)| d + j as f64 * spread).collect();
    let fill = eps / (5.0 * (n * n) as f64);

    let mut k_basis = CMatrix::diag_real(
        &a_values.iter().zip(&eig.values).map(|(a, d)| a - d).collect::<Vec<_>>(),
    );
    let mut filled_entries = 0;
    for j in 0..n {
        for k in j..n {
            let b = b1[(j, k)].re;
            if b.abs() < fill {
                let target = if b < 0.0 { -fill } else { fill };
                let delta = I * (target - b);
                k_basis[(j, k)] += delta;
                if j != k {
                    k_basis[(k, j)] += delta;
                    filled_entries += 2;
                } else {
                    filled_entries += 1;
                }
            }
        }
    }

    let frame = &u * &q;
    let k = &(&frame * &k_basis) * &frame.adjoint();
    let perturbed = t + &k;
    let certificate = CsoCertificate::evaluate(&perturbed, c)?;
    let norm_bound = operator_norm(&k)?;
    let commutant = commutant_summary(&perturbed, DEFAULT_COMMUTANT_TOL)?;

    Ok(PerturbationResult {
        k,
        perturbed,
        certificate,
        norm_bound,
        diagnostics: Diagnostics::Irreducible(IrreducibleDiagnostics {
            basis: "c_real".into(),
            a_values,
            fill_magnitude: fill,
            filled_entries,
            commutant_dimension: commutant.dimension,
            commutant_gap: commutant.gap,
            ambiguous: commutant.ambiguous,
        }),
    })
}

fn sigma_min(m: &CMatrix) -> Result<f64> {
    Ok(svd(m)?.sigma.last().copied().unwrap_or(0.0))
}

fn shifted(t: &CMatrix, lambda: C64) -> CMatrix {
    t - &CMatrix::identity(t.n()).scale(lambda)
}

/// Adds `K = (eps/2)·Σᵢ (C eᵢ)⊗eᵢ` over an orthonormal basis `{eᵢ}` of
/// `ker(t − λ₀)`, which makes `λ₀` a resolvent point while keeping
/// C-symmetry: `C` maps that kernel onto the orthocomplement of the range.
///
/// If `λ₀` is not in the spectrum, `K = 0` and the step is flagged `no_op`.
pub fn remove_point(t: &CMatrix, c: &Conjugation, lambda0: C64, eps: f64) -> Result<PerturbationResult> {
    check_eps(eps)?;
    check_symmetric(t, c)?;
    if !(lambda0.re.is_finite() && lambda0.im.is_finite()) {
        return Err(CsoError::NonFinite);
    }
    let (result, step) = remove_point_unchecked(t, c, lambda0, eps, operator_norm(t)?.max(1.0))?;
    Ok(PerturbationResult {
        diagnostics: Diagnostics::PointRemoval { steps: vec![step] },
        ..result
    })
}

fn remove_point_unchecked(
    t: &CMatrix,
    c: &Conjugation,
    lambda0: C64,
    eps: f64,
    scale: f64,
) -> Result<(PerturbationResult, RemovalStep)> {
    let n = t.n();
    let a = shifted(t, lambda0);
    let a_svd = svd(&a)?;
    let s_max = a_svd.sigma.first().copied().unwrap_or(0.0);
    let s_min = a_svd.sigma.last().copied().unwrap_or(0.0);
    let singular = s_min <= KERNEL_TOL * s_max.max(1.0);
    let near_eigenvalue = eig_general(t)?.iter().any(|mu| (mu - lambda0).norm() <= KERNEL_TOL * scale);

    let mut step = RemovalStep {
        lambda: [lambda0.re, lambda0.im],
        budget: eps,
        kernel_dim: 0,
        sigma_min: s_min,
        near_floor: false,
        no_op: false,
        retries: 0,
    };

    let k = if !singular && !near_eigenvalue {
        step.no_op = true;
        CMatrix::zeros(n)
    } else {
        let kernel = null_space_basis(&a, KERNEL_TOL)?;
        if kernel.is_empty() {
            return Err(CsoError::DegenerateKernel);
        }
        step.kernel_dim = kernel.len();
        let mut k = CMatrix::zeros(n);
        for e in &kernel {
            let ce = c.apply(e)?;
            let rank_one = CMatrix::from_fn(n, |i, j| ce[i] * e[j].conj());
            k = &k + &rank_one;
        }
        k.scale_real(eps / 2.0)
    };

    let perturbed = t + &k;
    let certificate = CsoCertificate::evaluate(&perturbed, c)?;
    let norm_bound = operator_norm(&k)?;
    if !step.no_op {
        step.sigma_min = sigma_min(&shifted(&perturbed, lambda0))?;
        let floor = INVERTIBILITY_FLOOR * scale;
        if step.sigma_min <= floor {
            return Err(CsoError::NumericalAmbiguity(format!(
                "σ_min after removal {:.3e} does not clear the floor {floor:.3e}",
                step.sigma_min
            )));
        }
        step.near_floor = step.sigma_min <= 10.0 * floor;
    }
    Ok((
        PerturbationResult {
            k,
            perturbed,
            certificate,
            norm_bound,
            diagnostics: Diagnostics::PointRemoval { steps: Vec::new() },
        },
        step,
    ))
}

/// Removes several points in turn with budgets `eps/2, eps/4, …` (so the
/// total `‖K‖ < eps/2`). After each step the earlier points are re-checked;
/// if one has crept back, that step's budget is halved and retried.
pub fn remove_points(t: &CMatrix, c: &Conjugation, lambdas: &[C64], eps: f64) -> Result<PerturbationResult> {
    check_eps(eps)?;
    check_symmetric(t, c)?;
    if lambdas.is_empty() {
        return Err(CsoError::InvalidSpec("at least one point required".into()));
    }
    for (i, a) in lambdas.iter().enumerate() {
        if !(a.re.is_finite() && a.im.is_finite()) {
            return Err(CsoError::NonFinite);
        }
        if lambdas[..i].iter().any(|b| (a - b).norm() <= DISTINCT_POINTS_TOL) {
            return Err(CsoError::InvalidSpec("points must be pairwise distinct".into()));
        }
    }
    let n = t.n();
    let scale = operator_norm(t)?.max(1.0);
    let floor = INVERTIBILITY_FLOOR * scale;

    let mut current = PerturbationResult {
        k: CMatrix::zeros(n),
        perturbed: t.clone(),
        certificate: CsoCertificate::evaluate(t, c)?,
        norm_bound: 0.0,
        diagnostics: Diagnostics::PointRemoval { steps: Vec::new() },
    };
    let mut steps = Vec::with_capacity(lambdas.len());

    for (index, &lambda) in lambdas.iter().enumerate() {
        let mut budget = eps / 2f64.powi(index as i32 + 1);
        let mut accepted = None;
        for retry in 0..=MAX_BUDGET_RETRIES {
            let attempt = remove_point_unchecked(&current.perturbed, c, lambda, budget, scale);
            if let Ok((next, mut step)) = attempt {
                let clear = lambdas[..index]
                    .iter()
                    .map(|&mu| sigma_min(&shifted(&next.perturbed, mu)))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .all(|s| s > floor);
                if clear {
                    step.retries = retry;
                    accepted = Some((next, step));
                    break;
                }
            }
            budget /= 2.0;
        }
        let Some((next, step)) = accepted else {
            current.diagnostics = Diagnostics::PointRemoval { steps };
            return Err(CsoError::BudgetExhausted {
                index,
                partial: Box::new(current),
            });
        };
        let k = &current.k + &next.k;
        current = PerturbationResult {
            norm_bound: operator_norm(&k)?,
            k,
            perturbed: next.perturbed,
            certificate: next.certificate,
            diagnostics: Diagnostics::PointRemoval { steps: Vec::new() },
        };
        steps.push(step);
    }
    current.diagnostics = Diagnostics::PointRemoval { steps };
    Ok(current)
}
