//! Rank lower bounds from commutators, the rank-equals-n test and the
//! commutator-dimension hypotheses that drive extension recovery.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, RootField};
use crate::linalg::{image, inverse, Matrix, Subspace};
use crate::random::{coefficient_range, draw_coefficients, DEFAULT_RETRY_BUDGET};
use crate::spectral::simultaneous_diag_check;
use crate::tensor::Tensor3;

fn require_square<F: Field>(t: &Tensor3<F>) -> Result<()> {
    if !t.is_square() {
        return Err(Error::Unsupported(format!(
            "rank bounds need square slices, got {}x{}",
            t.m(),
            t.n()
        )));
    }
    Ok(())
}

fn check_indices<F: Field>(t: &Tensor3<F>, indices: &[usize]) -> Result<()> {
    if let Some(&bad) = indices.iter().find(|&&i| i >= t.p()) {
        return Err(Error::InvalidInput(format!(
            "slice index {bad} out of range for {} slices",
            t.p()
        )));
    }
    let distinct: BTreeSet<_> = indices.iter().collect();
    if distinct.len() != indices.len() {
        return Err(Error::InvalidInput("slice indices must be distinct".into()));
    }
    Ok(())
}

/// `n + ceil(rank(T_b T_a^{-1} T_c - T_c T_a^{-1} T_b) / 2)` with its witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrassenBound {
    pub bound: usize,
    pub commutator_rank: usize,
    /// Set when the commutator rank is odd, which generic inputs never give.
    pub odd_rank: bool,
    pub slices: [usize; 3],
}

pub fn strassen_bound<F: Field>(t: &Tensor3<F>, slices: [usize; 3]) -> Result<StrassenBound> {
    require_square(t)?;
    check_indices(t, &slices)?;
    let [a, b, c] = slices;
    let inv = inverse(t.slice(a))?;
    let left = &(t.slice(b) * &inv) * t.slice(c);
    let right = &(t.slice(c) * &inv) * t.slice(b);
    let commutator_rank = crate::linalg::rank(&(&left - &right));
    Ok(StrassenBound {
        bound: t.n() + commutator_rank.div_ceil(2),
        commutator_rank,
        odd_rank: commutator_rank % 2 == 1,
        slices,
    })
}

/// `n + ceil(d / 3)` with `d = dim(Im[A_b, A_c] + Im[A_b, A_d])`,
/// `A_k = T_a^{-1} T_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourSliceBound {
    pub bound: usize,
    pub sum_dim: usize,
    pub slices: [usize; 4],
}

pub fn strassen_bound_4slice<F: Field>(t: &Tensor3<F>, slices: [usize; 4]) -> Result<FourSliceBound> {
    require_square(t)?;
    check_indices(t, &slices)?;
    let [a, b, c, d] = slices;
    let inv = inverse(t.slice(a))?;
    let ab = &inv * t.slice(b);
    let ac = &inv * t.slice(c);
    let ad = &inv * t.slice(d);
    let sum = image(&ab.commutator(&ac)?).sum(&image(&ab.commutator(&ad)?))?;
    Ok(FourSliceBound {
        bound: t.n() + sum.dim().div_ceil(3),
        sum_dim: sum.dim(),
        slices,
    })
}

/// An invertible element of the slice span together with its coefficients.
#[derive(Debug, Clone)]
pub struct SpanElement<F> {
    pub coefficients: Vec<i64>,
    pub matrix: Matrix<F>,
    pub inverse: Matrix<F>,
    pub attempts: usize,
}

/// Tries `T_1`, then random combinations with coefficients in
/// `{1, ..., 8 n p r}`.
pub fn find_invertible_span_element<F: Field>(
    t: &Tensor3<F>,
    r: usize,
    rng: &mut impl Rng,
    budget: usize,
) -> Result<SpanElement<F>> {
    require_square(t)?;
    if t.p() == 0 {
        return Err(Error::InvalidInput("tensor has no slices".into()));
    }
    let mut coefficients = vec![0; t.p()];
    coefficients[0] = 1;
    let range = coefficient_range(t.n(), t.p(), r);
    for attempt in 0..=budget {
        if attempt > 0 {
            coefficients = draw_coefficients(rng, t.p(), range);
        }
        let f: Vec<F> = coefficients.iter().map(|&c| F::from_i64(c)).collect();
        let matrix = t.combine_slices(&f)?;
        if let Ok(inv) = inverse(&matrix) {
            return Ok(SpanElement {
                coefficients,
                matrix,
                inverse: inv,
                attempts: attempt + 1,
            });
        }
    }
    Err(Error::NoInvertibleSpanElement {
        attempts: budget + 1,
    })
}

/// True iff `Z^{-1} T_k` is a commuting family of diagonalisable matrices
/// for an invertible span element `Z`; equivalently the tensor has rank at
/// most `n` with independent `u`'s and `v`'s.
pub fn rank_equals_n_test<F: RootField>(t: &Tensor3<F>, rng: &mut impl Rng) -> Result<bool> {
    let z = find_invertible_span_element(t, t.n(), rng, DEFAULT_RETRY_BUDGET)?;
    let family: Vec<Matrix<F>> = t.slices().iter().map(|s| &z.inverse * s).collect();
    simultaneous_diag_check(&family)
}

/// Measured dimensions behind the hypotheses `(H_klm)` for a tuple
/// `A_0, ..., A_{q-1}`. Indices are positions in that tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub n: usize,
    pub r: usize,
    /// `dim Im[A_k, A_l]` for `k < l`.
    pub pair_dims: BTreeMap<(usize, usize), usize>,
    /// `dim(Im[A_k, A_l] + Im[A_k, A_m])` keyed `(k, l, m)` with `l < m`.
    pub triple_dims: BTreeMap<(usize, usize, usize), usize>,
    /// Triples `k < l < m` for which `(H_klm)` holds.
    pub satisfied_triples: BTreeSet<(usize, usize, usize)>,
    /// For every `l != 0` some `m` with `(H_0lm)`, and at least three
    /// matrices.
    pub chain_ok: bool,
}

impl HypothesisReport {
    pub fn excess(&self) -> usize {
        self.r - self.n
    }

    pub fn pair_dim(&self, k: usize, l: usize) -> Option<usize> {
        self.pair_dims.get(&(k.min(l), k.max(l))).copied()
    }

    pub fn triple_dim(&self, k: usize, l: usize, m: usize) -> Option<usize> {
        self.triple_dims.get(&(k, l.min(m), l.max(m))).copied()
    }

    pub fn is_satisfied(&self, k: usize, l: usize, m: usize) -> bool {
        let mut idx = [k, l, m];
        idx.sort_unstable();
        self.satisfied_triples.contains(&(idx[0], idx[1], idx[2]))
    }

    /// Lexicographically smallest satisfied triple containing `k`.
    pub fn triple_containing(&self, k: usize) -> Option<(usize, usize, usize)> {
        self.satisfied_triples
            .iter()
            .copied()
            .find(|&(a, b, c)| a == k || b == k || c == k)
    }

    /// Human-readable reason why `chain_ok` fails.
    pub fn chain_failure(&self) -> Option<String> {
        if self.chain_ok {
            return None;
        }
        let q = self.pair_dims.keys().map(|&(_, l)| l + 1).max().unwrap_or(1);
        if q < 3 {
            return Some(format!("need at least 3 matrices, got {q}"));
        }
        let s = self.excess();
        for l in 1..q {
            if !(1..q).any(|m| m != l && self.is_satisfied(0, l, m)) {
                let detail: Vec<String> = (1..q)
                    .filter(|&m| m != l)
                    .map(|m| {
                        let mut idx = [0, l, m];
                        idx.sort_unstable();
                        let [a, b, c] = idx;
                        format!(
                            "triple ({a},{b},{c}): pair dims [{}, {}, {}] (want {}), sum dims [{}, {}, {}] (want {})",
                            self.pair_dim(a, b).unwrap_or(0),
                            self.pair_dim(a, c).unwrap_or(0),
                            self.pair_dim(b, c).unwrap_or(0),
                            2 * s,
                            self.triple_dim(a, b, c).unwrap_or(0),
                            self.triple_dim(b, a, c).unwrap_or(0),
                            self.triple_dim(c, a, b).unwrap_or(0),
                            3 * s
                        )
                    })
                    .collect();
                return Some(format!("no satisfied triple (0,{l},m); {}", detail.join("; ")));
            }
        }
        Some("chain pattern not met".into())
    }
}

/// Commutator images `Im[A_k, A_l]` for `k < l`.
pub(crate) fn commutator_images<F: Field>(
    mats: &[Matrix<F>],
) -> Result<BTreeMap<(usize, usize), Subspace<F>>> {
    let mut images = BTreeMap::new();
    for k in 0..mats.len() {
        for l in k + 1..mats.len() {
            images.insert((k, l), image(&mats[k].commutator(&mats[l])?));
        }
    }
    Ok(images)
}

pub fn hypothesis_check<F: Field>(mats: &[Matrix<F>], r: usize) -> Result<HypothesisReport> {
    let n = mats.first().map_or(0, Matrix::rows);
    if mats.iter().any(|m| m.shape() != (n, n)) {
        return Err(Error::dims("hypothesis check needs square matrices of one size"));
    }
    if r < n {
        return Err(Error::InvalidInput(format!("target rank {r} is below the size {n}")));
    }
    let s = r - n;
    let q = mats.len();
    let images = commutator_images(mats)?;
    let get = |k: usize, l: usize| &images[&(k.min(l), k.max(l))];

    let pair_dims: BTreeMap<_, _> = images.iter().map(|(&key, sp)| (key, sp.dim())).collect();
    let mut triple_dims = BTreeMap::new();
    for k in 0..q {
        for l in 0..q {
            for m in l + 1..q {
                if k == l || k == m {
                    continue;
                }
                triple_dims.insert((k, l, m), get(k, l).sum(get(k, m))?.dim());
            }
        }
    }

    let mut satisfied_triples = BTreeSet::new();
    for k in 0..q {
        for l in k + 1..q {
            for m in l + 1..q {
                let pairs_ok = [(k, l), (k, m), (l, m)]
                    .iter()
                    .all(|key| pair_dims[key] == 2 * s);
                let sums_ok = [(k, l, m), (l, k, m), (m, k, l)]
                    .iter()
                    .all(|key| triple_dims[key] == 3 * s);
                if pairs_ok && sums_ok {
                    satisfied_triples.insert((k, l, m));
                }
            }
        }
    }

    let mut report = HypothesisReport {
        n,
        r,
        pair_dims,
        triple_dims,
        satisfied_triples,
        chain_ok: false,
    };
    report.chain_ok =
        q >= 3 && (1..q).all(|l| (1..q).any(|m| m != l && report.is_satisfied(0, l, m)));
    Ok(report)
}
