//! Decomposition of square order-3 tensors of rank `n <= r <= 4n/3`.

mod jennrich;
mod matching;

pub use jennrich::jennrich_decompose_with_budget;
pub use matching::{essentially_equal, Matching};

use rand::Rng;
use serde::Serialize;

use crate::bounds::{strassen_bound, strassen_bound_4slice};
use crate::error::{Error, Result};
use crate::extension::compute_extension;
use crate::field::RootField;
use crate::linalg::{inverse, Matrix};
use crate::random::{coefficient_range, draw_coefficients, DEFAULT_RETRY_BUDGET};
use crate::tensor::{assemble, Decomposition, RankOneTerm, Tensor3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    /// First-slice replacement `sum_k lambda_k T_k`.
    Combination,
    JennrichA,
    JennrichB,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RandomDraw {
    pub stage: Stage,
    pub values: Vec<i64>,
}

impl RandomDraw {
    pub fn new(stage: Stage, values: Vec<i64>) -> Self {
        Self { stage, values }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionResult<F> {
    pub decomposition: Decomposition<F>,
    /// A proven lower bound on the rank of the input.
    pub rank_certificate: usize,
    /// Every coefficient vector drawn, in order.
    pub randomness_log: Vec<RandomDraw>,
    /// Failed attempts across all stages.
    pub retries: usize,
    /// Why each failed attempt was abandoned.
    pub failures: Vec<String>,
    /// `(lambda_i, mu_i)` from the final diagonalisation, `lambda_i mu_i = 1`.
    pub eigenvalue_pairs: Vec<(F, F)>,
    /// The `lambda` that replaced the first slice, if any.
    pub combination: Option<Vec<i64>>,
    /// Largest bit size of any tensor, matrix or term produced on the way.
    pub max_bits: u64,
}

pub fn jennrich_decompose<F: RootField>(t: &Tensor3<F>, rng: &mut impl Rng) -> Result<DecompositionResult<F>> {
    jennrich_decompose_with_budget(t, rng, DEFAULT_RETRY_BUDGET)
}

fn check_scope<F: RootField>(t: &Tensor3<F>, r: usize) -> Result<()> {
    if !t.is_square() {
        return Err(Error::Unsupported(format!(
            "decomposition needs square slices, got {}x{}",
            t.m(),
            t.n()
        )));
    }
    if t.p() < 4 {
        return Err(Error::Unsupported(format!(
            "decomposition needs at least 4 slices, got {}",
            t.p()
        )));
    }
    let n = t.n();
    if r < n || 3 * r > 4 * n {
        return Err(Error::InvalidInput(format!(
            "rank {r} outside [n, 4n/3] for n = {n}"
        )));
    }
    Ok(())
}

/// Best available lower bound from the first three and four slices, with
/// `T_1` invertible.
pub(crate) fn rank_certificate<F: RootField>(t: &Tensor3<F>) -> Result<usize> {
    let three = strassen_bound(t, [0, 1, 2])?.bound;
    let four = strassen_bound_4slice(t, [0, 1, 2, 3])?.bound;
    Ok(three.max(four))
}

pub fn decompose_invertible_first<F: RootField>(
    t: &Tensor3<F>,
    r: usize,
    rng: &mut impl Rng,
) -> Result<DecompositionResult<F>> {
    decompose_invertible_first_with_budget(t, r, rng, DEFAULT_RETRY_BUDGET)
}

/// Needs `T_1` invertible and every `w_{i1} != 0`.
pub fn decompose_invertible_first_with_budget<F: RootField>(
    t: &Tensor3<F>,
    r: usize,
    rng: &mut impl Rng,
    budget: usize,
) -> Result<DecompositionResult<F>> {
    check_scope(t, r)?;
    let n = t.n();
    let t1 = t.slice(0);
    let t1_inv = inverse(t1)?;
    let a_list: Vec<Matrix<F>> = t.slices()[1..].iter().map(|s| &t1_inv * s).collect();
    let ext = compute_extension(&a_list, r)?;

    let mut lifted = vec![Matrix::identity(r)];
    lifted.extend(ext.zs().iter().cloned());
    let lifted = Tensor3::from_slices(r, r, lifted)?;
    let inner = jennrich_decompose_with_budget(&lifted, rng, budget)?;

    let terms = inner
        .decomposition
        .terms()
        .iter()
        .map(|term| {
            let head = &term.u[..n];
            let u = t1.apply(head).expect("length n");
            RankOneTerm::new(u, term.v[..n].to_vec(), term.w.clone())
        })
        .collect();
    let decomposition = Decomposition::new(t.format(), terms).map_err(|e| match e {
        Error::ZeroTerm { index } => Error::DegenerateInput(format!(
            "term {index} of the extended decomposition vanishes on the first n coordinates"
        )),
        other => other,
    })?;
    if assemble(&decomposition) != *t {
        return Err(Error::VerificationFailed("extracted terms do not reassemble the tensor".into()));
    }
    let max_bits = [
        t.max_bits(),
        a_list.iter().map(Matrix::max_bits).max().unwrap_or(0),
        ext.max_bits(),
        inner.max_bits,
        decomposition.max_bits(),
    ]
    .into_iter()
    .max()
    .unwrap_or(0);
    Ok(DecompositionResult {
        decomposition,
        rank_certificate: rank_certificate(t)?,
        randomness_log: inner.randomness_log,
        retries: inner.retries,
        failures: inner.failures,
        eigenvalue_pairs: inner.eigenvalue_pairs,
        combination: None,
        max_bits,
    })
}

pub fn decompose<F: RootField>(t: &Tensor3<F>, r: usize, rng: &mut impl Rng) -> Result<DecompositionResult<F>> {
    decompose_with_budget(t, r, rng, DEFAULT_RETRY_BUDGET)
}

/// Replaces `T_1` by a random `sum_k lambda_k T_k`, decomposes, and maps
/// the first weight coordinate back. Redraws `lambda` on recoverable
/// failures.
pub fn decompose_with_budget<F: RootField>(
    t: &Tensor3<F>,
    r: usize,
    rng: &mut impl Rng,
    budget: usize,
) -> Result<DecompositionResult<F>> {
    check_scope(t, r)?;
    let budget = budget.max(1);
    let range = coefficient_range(t.n(), t.p(), r);
    let mut log = Vec::new();
    let mut failures = Vec::new();
    let mut only_hypothesis = true;
    for _ in 0..budget {
        let lambda = draw_coefficients(rng, t.p(), range);
        log.push(RandomDraw::new(Stage::Combination, lambda.clone()));
        let lambda_f: Vec<F> = lambda.iter().map(|&x| F::from_i64(x)).collect();
        let replaced = t.replace_first_slice(&lambda_f)?;
        let outcome = decompose_invertible_first_with_budget(&replaced, r, rng, budget);
        let mut inner = match outcome {
            Ok(inner) => inner,
            Err(e) => {
                match e {
                    Error::HypothesisViolated(_) => {}
                    Error::Singular
                    | Error::DegenerateInput(_)
                    | Error::InconsistentSystem(_)
                    | Error::RetryBudgetExhausted { .. }
                    | Error::VerificationFailed(_) => only_hypothesis = false,
                    other => return Err(other),
                }
                failures.push(e.to_string());
                continue;
            }
        };
        log.append(&mut inner.randomness_log);
        failures.append(&mut inner.failures);

        // w_{i1} = (w'_{i1} - sum_{k>=2} lambda_k w'_{ik}) / lambda_1
        let terms = inner
            .decomposition
            .into_terms()
            .into_iter()
            .map(|mut term| {
                let rest = term.w[1..]
                    .iter()
                    .zip(&lambda_f[1..])
                    .fold(F::zero(), |acc, (w, l)| acc + w.clone() * l.clone());
                term.w[0] = (term.w[0].clone() - rest) / lambda_f[0].clone();
                term
            })
            .collect();
        let decomposition = match Decomposition::new(t.format(), terms) {
            Ok(d) if assemble(&d) == *t => d,
            _ => {
                only_hypothesis = false;
                failures.push(Error::VerificationFailed("output does not reassemble the input".into()).to_string());
                continue;
            }
        };
        return Ok(DecompositionResult {
            max_bits: inner.max_bits.max(decomposition.max_bits()),
            decomposition,
            rank_certificate: inner.rank_certificate,
            retries: failures.len(),
            randomness_log: log,
            failures,
            eigenvalue_pairs: inner.eigenvalue_pairs,
            combination: Some(lambda),
        });
    }
    let last = failures.last().cloned().unwrap_or_default();
    if only_hypothesis {
        Err(Error::HypothesisViolated(format!("on all {budget} combinations; last: {last}")))
    } else {
        Err(Error::RetryBudgetExhausted { budget, last })
    }
}

/// Tries `r = n, n + 1, ...` up to `4n/3` and returns the first success.
/// Best effort: a failure at the true rank is not distinguished from a
/// wrong rank.
pub fn decompose_scan<F: RootField>(
    t: &Tensor3<F>,
    rng: &mut impl Rng,
    budget: usize,
) -> Result<DecompositionResult<F>> {
    let n = t.n();
    let mut last = None;
    for r in n..=(4 * n / 3) {
        match decompose_with_budget(t, r, rng, budget) {
            Ok(result) => return Ok(result),
            Err(e @ (Error::Unsupported(_) | Error::InvalidInput(_))) => return Err(e),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::InvalidInput("empty rank range".into())))
}
