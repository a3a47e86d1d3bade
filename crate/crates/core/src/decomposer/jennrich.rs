use rand::Rng;

use super::{DecompositionResult, RandomDraw, Stage};
use crate::error::{Error, Result};
use crate::field::RootField;
use crate::linalg::{inverse, solve, Matrix, Solution};
use crate::random::{coefficient_range, draw_coefficients};
use crate::spectral::eigen;
use crate::tensor::{Decomposition, RankOneTerm, Tensor3};

/// Outcome of one attempt: a decomposition or the reason to redraw.
enum Attempt<F> {
    Done(Decomposition<F>, Vec<(F, F)>),
    Redraw(String),
}

fn attempt<F: RootField>(t: &Tensor3<F>, a: &[i64], b: &[i64]) -> Result<Attempt<F>> {
    let n = t.n();
    let to_field = |c: &[i64]| c.iter().map(|&x| F::from_i64(x)).collect::<Vec<F>>();
    let ta = t.combine_slices(&to_field(a))?;
    let tb = t.combine_slices(&to_field(b))?;
    let (Ok(ta_inv), Ok(tb_inv)) = (inverse(&ta), inverse(&tb)) else {
        return Ok(Attempt::Redraw("random slice combination is singular".into()));
    };

    // T^(a) (T^(b))^{-1} = U^T D_a D_b^{-1} U^{-T}: eigenvectors u_i.
    let left = eigen(&(&ta * &tb_inv))?;
    // ((T^(a))^{-1} T^(b))^T = V^T D_b D_a^{-1} V^{-T}: eigenvectors v_i.
    let right = eigen(&(&ta_inv * &tb).transpose())?;
    if !left.is_simple() || !right.is_simple() {
        return Ok(Attempt::Redraw(format!(
            "eigenvalues are not {n} distinct rationals"
        )));
    }

    let mut us = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    let mut pairs = Vec::with_capacity(n);
    for (lambda, u) in &left.eigenpairs {
        let target = lambda.inv();
        let Some((mu, v)) = right.eigenpairs.iter().find(|(mu, _)| *mu == target) else {
            return Ok(Attempt::Redraw("eigenvalues do not pair up reciprocally".into()));
        };
        us.push(u.clone());
        vs.push(v.clone());
        pairs.push((lambda.clone(), mu.clone()));
    }

    // T_k = U^T diag(x) V: one n^2 x n system shared by all slices.
    let system = Matrix::from_fn(n * n, n, |row, i| us[i][row / n].clone() * vs[i][row % n].clone());
    let rhs = Matrix::from_fn(n * n, t.p(), |row, k| t.get(row / n, row % n, k).clone());
    let weights = match solve(&system, &rhs)? {
        Solution::Unique(x) => x,
        Solution::Inconsistent => {
            return Ok(Attempt::Redraw(format!("slices are not combinations of the {n} eigen-terms")))
        }
        Solution::Underdetermined { .. } => {
            return Ok(Attempt::Redraw("eigen-terms are linearly dependent".into()))
        }
    };
    let terms: Vec<RankOneTerm<F>> = (0..n)
        .map(|i| RankOneTerm::new(us[i].clone(), vs[i].clone(), weights.row(i).to_vec()))
        .collect();
    match Decomposition::new(t.format(), terms) {
        Ok(d) => Ok(Attempt::Done(d, pairs)),
        Err(Error::ZeroTerm { index }) => Ok(Attempt::Redraw(format!("term {index} has zero weight"))),
        Err(e) => Err(e),
    }
}

/// Rank-`n` decomposition of an `n x n x p` tensor by simultaneous
/// diagonalisation of two random slice combinations.
pub fn jennrich_decompose_with_budget<F: RootField>(
    t: &Tensor3<F>,
    rng: &mut impl Rng,
    budget: usize,
) -> Result<DecompositionResult<F>> {
    if !t.is_square() {
        return Err(Error::Unsupported("simultaneous diagonalisation needs square slices".into()));
    }
    if t.p() == 0 {
        return Err(Error::InvalidInput("tensor has no slices".into()));
    }
    let n = t.n();
    let range = coefficient_range(n, t.p(), n);
    let mut log = Vec::new();
    let mut failures = Vec::new();
    for _ in 0..budget.max(1) {
        let a = draw_coefficients(rng, t.p(), range);
        let b = draw_coefficients(rng, t.p(), range);
        log.push(RandomDraw::new(Stage::JennrichA, a.clone()));
        log.push(RandomDraw::new(Stage::JennrichB, b.clone()));
        match attempt(t, &a, &b)? {
            Attempt::Done(decomposition, eigenvalue_pairs) => {
                let max_bits = decomposition.max_bits().max(t.max_bits());
                return Ok(DecompositionResult {
                    rank_certificate: n,
                    retries: failures.len(),
                    randomness_log: log,
                    failures,
                    eigenvalue_pairs,
                    combination: None,
                    max_bits,
                    decomposition,
                });
            }
            Attempt::Redraw(reason) => failures.push(reason),
        }
    }
    Err(Error::RetryBudgetExhausted {
        budget: budget.max(1),
        last: failures.pop().unwrap_or_default(),
    })
}
