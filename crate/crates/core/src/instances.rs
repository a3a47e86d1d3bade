//! Planted instances with known decompositions, and the padding gadget that
//! raises tensor rank by exactly `m + n`.

use num_traits::Zero;
use rand::Rng;

use crate::bounds::hypothesis_check;
use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::linalg::{inverse, is_invertible, is_zero_vector, Matrix};
use crate::random::{draw_symmetric, seeded};
use crate::tensor::{assemble, Decomposition, RankOneTerm, Tensor3};

pub const DEFAULT_COEFF_BOUND: i64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlantParams {
    pub n: usize,
    pub r: usize,
    pub p: usize,
    pub coeff_bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedInstance<F> {
    pub tensor: Tensor3<F>,
    pub plant: Decomposition<F>,
    pub seed: u64,
    pub params: PlantParams,
    /// Draws rejected before this one was accepted.
    pub resamples: usize,
}

fn check_params(n: usize, r: usize, p: usize, coeff_bound: i64) -> Result<()> {
    if n == 0 || p == 0 {
        return Err(Error::InvalidInput(format!("need n >= 1 and p >= 1, got n = {n}, p = {p}")));
    }
    if r < n {
        return Err(Error::InvalidInput(format!("need r >= n, got r = {r}, n = {n}")));
    }
    if coeff_bound < 1 {
        return Err(Error::InvalidInput("coefficient bound must be positive".into()));
    }
    Ok(())
}

fn draw_vector(rng: &mut impl Rng, len: usize, bound: i64) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = draw_symmetric(rng, len, bound).into_iter().map(Rational::from_i64).collect();
        if !is_zero_vector(&v) {
            return v;
        }
    }
}

fn draw_plant(rng: &mut impl Rng, n: usize, r: usize, p: usize, bound: i64) -> Decomposition<Rational> {
    let terms = (0..r)
        .map(|_| {
            let u = draw_vector(rng, n, bound);
            let v = draw_vector(rng, n, bound);
            let w = draw_vector(rng, p, bound);
            RankOneTerm::new(u, v, w)
        })
        .collect();
    Decomposition::new((n, n, p), terms).expect("factors are nonzero")
}

/// `r` random terms with integer entries in `[-coeff_bound, coeff_bound]`.
/// Zero factors are redrawn.
pub fn generate_planted(n: usize, r: usize, p: usize, seed: u64, coeff_bound: i64) -> Result<PlantedInstance<Rational>> {
    check_params(n, r, p, coeff_bound)?;
    let mut rng = seeded(seed);
    let plant = draw_plant(&mut rng, n, r, p, coeff_bound);
    Ok(PlantedInstance {
        tensor: assemble(&plant),
        plant,
        seed,
        params: PlantParams { n, r, p, coeff_bound },
        resamples: 0,
    })
}

/// Why a planted draw is not in general position, if it is not.
///
/// Checked: every slice invertible, every `w_{i1} != 0`, and when `p >= 4`
/// every hypothesis triple for `A_i = T_1^{-1} T_{i+1}`.
pub fn genericity_defect(instance: &PlantedInstance<Rational>) -> Result<Option<String>> {
    let t = &instance.tensor;
    if let Some(k) = t.slices().iter().position(|s| !is_invertible(s)) {
        return Ok(Some(format!("slice {k} is singular")));
    }
    if let Some(i) = instance.plant.terms().iter().position(|term| term.w[0].is_zero()) {
        return Ok(Some(format!("w_{i} has zero first coordinate")));
    }
    let (n, r, p) = (instance.params.n, instance.params.r, t.p());
    if p >= 4 {
        let t1_inv = inverse(t.slice(0))?;
        let a_list: Vec<_> = t.slices()[1..].iter().map(|s| &t1_inv * s).collect();
        let report = hypothesis_check(&a_list, r)?;
        let q = a_list.len();
        let all = q * (q - 1) * (q - 2) / 6;
        if report.satisfied_triples.len() != all || !report.chain_ok {
            return Ok(Some(format!(
                "{} of {all} hypothesis triples hold for n = {n}, r = {r}",
                report.satisfied_triples.len()
            )));
        }
    }
    Ok(None)
}

/// Like [`generate_planted`] but redraws, from the same seeded stream,
/// until [`genericity_defect`] finds nothing.
pub fn generate_generic_planted(
    n: usize,
    r: usize,
    p: usize,
    seed: u64,
    coeff_bound: i64,
    budget: usize,
) -> Result<PlantedInstance<Rational>> {
    check_params(n, r, p, coeff_bound)?;
    let mut rng = seeded(seed);
    let mut last = String::new();
    for resamples in 0..budget.max(1) {
        let plant = draw_plant(&mut rng, n, r, p, coeff_bound);
        let instance = PlantedInstance {
            tensor: assemble(&plant),
            plant,
            seed,
            params: PlantParams { n, r, p, coeff_bound },
            resamples,
        };
        match genericity_defect(&instance)? {
            None => return Ok(instance),
            Some(reason) => last = reason,
        }
    }
    Err(Error::RetryBudgetExhausted {
        budget: budget.max(1),
        last,
    })
}

/// Top-left `n x n` blocks of `Z_k = R^{-1} D_k R` for a random integer
/// `R` and random diagonal `D_k` with `D_1 = I_r`.
///
/// The plant has `u_i` = column `i` of the first `n` rows of `R^{-1}` and
/// `v_i` = row `i` of the first `n` columns of `R`. The full `Z_k` are
/// returned alongside.
pub fn generate_conjugated(
    n: usize,
    r: usize,
    p: usize,
    seed: u64,
    coeff_bound: i64,
) -> Result<(PlantedInstance<Rational>, Vec<Matrix<Rational>>)> {
    check_params(n, r, p, coeff_bound)?;
    let mut rng = seeded(seed);
    let mut resamples = 0;
    loop {
        let entries: Vec<Rational> = draw_symmetric(&mut rng, r * r, coeff_bound)
            .into_iter()
            .map(Rational::from_i64)
            .collect();
        let rm = Matrix::new(r, r, entries)?;
        let mut diagonals = vec![vec![Rational::from_i64(1); r]];
        for _ in 1..p {
            diagonals.push(draw_symmetric(&mut rng, r, coeff_bound).into_iter().map(Rational::from_i64).collect());
        }
        let Ok(rm_inv) = inverse(&rm) else {
            resamples += 1;
            continue;
        };
        let terms: Vec<RankOneTerm<Rational>> = (0..r)
            .map(|i| {
                let u: Vec<Rational> = (0..n).map(|a| rm_inv.get(a, i).clone()).collect();
                let v: Vec<Rational> = (0..n).map(|b| rm.get(i, b).clone()).collect();
                let w: Vec<Rational> = diagonals.iter().map(|d| d[i].clone()).collect();
                RankOneTerm::new(u, v, w)
            })
            .collect();
        let Ok(plant) = Decomposition::new((n, n, p), terms) else {
            resamples += 1;
            continue;
        };
        let zs: Vec<Matrix<Rational>> = diagonals
            .iter()
            .map(|d| &(&rm_inv * &Matrix::diag(d)) * &rm)
            .collect();
        let instance = PlantedInstance {
            tensor: assemble(&plant),
            plant,
            seed,
            params: PlantParams { n, r, p, coeff_bound },
            resamples,
        };
        return Ok((instance, zs));
    }
}

/// `A_i = [[0, T_i], [0, 0]]` of size `m + n`; all products `A_i A_j`
/// vanish.
pub fn pad_hardness_gadget<F: Field>(t: &Tensor3<F>) -> Vec<Matrix<F>> {
    let size = t.m() + t.n();
    t.slices()
        .iter()
        .map(|s| {
            let mut a = Matrix::zeros(size, size);
            a.set_block(0, t.m(), s);
            a
        })
        .collect()
}

/// Slices `(I_{m+n}, A_1, ..., A_p)` with the `A_i` from
/// [`pad_hardness_gadget`]. Its rank is `rank(T) + m + n`.
pub fn shitov_tensor<F: Field>(t: &Tensor3<F>) -> Tensor3<F> {
    let size = t.m() + t.n();
    let mut slices = vec![Matrix::identity(size)];
    slices.extend(pad_hardness_gadget(t));
    Tensor3::from_slices(size, size, slices).expect("square slices of one size")
}

/// Decomposition of [`shitov_tensor`] from one of `T`: each term becomes
/// `(u; 0) ⊗ (0; v) ⊗ (1; w)`, and `m + n` terms `e_j ⊗ row_j(I - N) ⊗ e_1`
/// complete the first slice, `N` being the first slice of the padded terms.
pub fn padded_decomposition<F: Field>(d: &Decomposition<F>) -> Decomposition<F> {
    let (m, n, p) = d.format();
    let size = m + n;
    let mut terms: Vec<RankOneTerm<F>> = d
        .terms()
        .iter()
        .map(|t| {
            let mut u = t.u.clone();
            u.resize(size, F::zero());
            let mut v = vec![F::zero(); m];
            v.extend(t.v.iter().cloned());
            let mut w = vec![F::one()];
            w.extend(t.w.iter().cloned());
            RankOneTerm::new(u, v, w)
        })
        .collect();
    let mut residual: Matrix<F> = Matrix::identity(size);
    for t in &terms {
        for (i, ui) in t.u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, vj) in t.v.iter().enumerate() {
                let entry = residual.get(i, j).clone() - ui.clone() * vj.clone();
                residual.set(i, j, entry);
            }
        }
    }
    let mut e1 = vec![F::zero(); p + 1];
    e1[0] = F::one();
    for j in 0..size {
        let mut e = vec![F::zero(); size];
        e[j] = F::one();
        terms.push(RankOneTerm::new(e, residual.row(j).to_vec(), e1.clone()));
    }
    Decomposition::new((size, size, p + 1), terms).expect("padded terms are nonzero")
}
