//! Integer kernels behind the rational hot paths. Each clears denominators,
//! works in `BigInt` without gcd reductions, and converts back once.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::field::Rational;
use crate::linalg::Matrix;

fn lcm_of<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, q| {
        if q.denom().is_one() {
            acc
        } else {
            acc.lcm(q.denom())
        }
    })
}

fn scaled(q: &Rational, den: &BigInt) -> BigInt {
    if q.denom().is_one() {
        q.numer() * den
    } else {
        q.numer() * (den / q.denom())
    }
}

const PRIME: u64 = (1 << 61) - 1;

fn residue(x: &BigInt) -> u64 {
    x.mod_floor(&BigInt::from(PRIME)).to_u64().expect("residue fits in u64")
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Indices of rows that are independent on the first `limit` columns
/// modulo a large prime, in ascending order.
fn independent_rows_mod(a: &[Vec<BigInt>], limit: usize) -> Vec<usize> {
    let mut rows: Vec<(usize, Vec<u64>)> = a
        .iter()
        .enumerate()
        .map(|(i, row)| (i, row[..limit].iter().map(residue).collect()))
        .collect();
    let mut chosen = Vec::new();
    let mut r = 0;
    for c in 0..limit {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].1[c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = pow_mod(rows[r].1[c], PRIME - 2);
        let pivot: Vec<u64> = rows[r].1.iter().map(|&x| mul_mod(x, inv)).collect();
        for (_, row) in rows.iter_mut().skip(r + 1) {
            let factor = row[c];
            if factor == 0 {
                continue;
            }
            for j in c..limit {
                row[j] = (row[j] + PRIME - mul_mod(factor, pivot[j])) % PRIME;
            }
        }
        chosen.push(rows[r].0);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Fraction-free Gauss-Jordan on integer rows. Returns the pivot columns
/// and the final pivot `d`; row `k` of the rref is `a[k] / d`.
fn bareiss(a: &mut [Vec<BigInt>], limit: usize) -> (Vec<usize>, BigInt) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut previous = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit.min(cols) {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| a[i][c].bits()) else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = std::mem::take(&mut a[r]);
        let pivot = pivot_row[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = std::mem::take(&mut row[c]);
            for (j, x) in row.iter_mut().enumerate() {
                if j == c {
                    continue;
                }
                let mut value = &pivot * &*x;
                if !factor.is_zero() && !pivot_row[j].is_zero() {
                    value -= &factor * &pivot_row[j];
                }
                *x = if previous.is_one() { value } else { value / &previous };
            }
        }
        a[r] = pivot_row;
        previous = pivot;
        pivots.push(c);
        r += 1;
    }
    (pivots, previous)
}

fn write_back(m: &mut Matrix<Rational>, a: Vec<Vec<BigInt>>, den: &BigInt) {
    for (i, row) in a.into_iter().enumerate() {
        for (j, x) in row.into_iter().enumerate() {
            let q = if x.is_zero() { Rational::zero() } else { Rational::new(x, den.clone()) };
            m.set(i, j, q);
        }
    }
}

/// Gauss-Jordan elimination over the integers.
///
/// Rows are cleared of denominators. A maximal set of rows independent
/// modulo a large prime is reduced fraction-free: for every pivot `(k, c)`
/// each other row becomes `(a_kc a_ij - a_ic a_kj) / previous_pivot`,
/// exact because every entry stays a minor. The remaining rows are then
/// reduced against the result and must vanish on the first `limit`
/// columns; otherwise the whole matrix is reduced directly.
///
/// Rows past the rank hold what is left of the dependent rows. They are
/// zero on the first `limit` columns, and zero everywhere exactly when the
/// augmented columns are consistent.
pub(crate) fn eliminate(m: &mut Matrix<Rational>, limit: usize) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let limit = limit.min(cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let row = m.row(i);
            let den = lcm_of(row);
            row.iter().map(|q| scaled(q, &den)).collect()
        })
        .collect();
    let chosen = independent_rows_mod(&a, limit);
    if chosen.len() < rows {
        let mut top: Vec<Vec<BigInt>> = chosen.iter().map(|&i| a[i].clone()).collect();
        let (pivots, d) = bareiss(&mut top, limit);
        if pivots.len() == chosen.len() {
            let rest: Vec<Vec<BigInt>> = (0..rows)
                .filter(|i| chosen.binary_search(i).is_err())
                .map(|i| {
                    let row = &a[i];
                    (0..cols)
                        .map(|j| {
                            let mut acc = &row[j] * &d;
                            for (k, &pc) in pivots.iter().enumerate() {
                                if !row[pc].is_zero() && !top[k][j].is_zero() {
                                    acc -= &row[pc] * &top[k][j];
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            if rest.iter().all(|row| row[..limit].iter().all(Zero::is_zero)) {
                top.extend(rest);
                write_back(m, top, &d);
                return pivots;
            }
        }
    }
    let (pivots, d) = bareiss(&mut a, limit);
    write_back(m, a, &d);
    pivots
}

/// Product via one common denominator per row of `a` and column of `b`.
pub(crate) fn multiply(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Matrix<Rational> {
    let (rows, inner, cols) = (a.rows(), a.cols(), b.cols());
    let row_dens: Vec<BigInt> = (0..rows).map(|i| lcm_of(a.row(i))).collect();
    let col_dens: Vec<BigInt> = (0..cols)
        .map(|j| lcm_of((0..inner).map(|k| b.get(k, j))))
        .collect();
    let na: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| a.row(i).iter().map(|q| scaled(q, &row_dens[i])).collect())
        .collect();
    let nb: Vec<Vec<BigInt>> = (0..inner)
        .map(|k| (0..cols).map(|j| scaled(b.get(k, j), &col_dens[j])).collect())
        .collect();
    Matrix::from_fn(rows, cols, |i, j| {
        let mut acc = BigInt::zero();
        for k in 0..inner {
            if !na[i][k].is_zero() && !nb[k][j].is_zero() {
                acc += &na[i][k] * &nb[k][j];
            }
        }
        if acc.is_zero() {
            Rational::zero()
        } else {
            Rational::new(acc, &row_dens[i] * &col_dens[j])
        }
    })
}

fn int_product(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..n {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc += &a[i][k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Faddeev-LeVerrier on `N = d M` over the integers, then
/// `chi_M(x) = d^{-n} chi_N(d x)`.
pub(crate) fn char_poly(m: &Matrix<Rational>) -> Vec<Rational> {
    let n = m.rows();
    let d = lcm_of(m.entries());
    let big: Vec<Vec<BigInt>> = (0..n)
        .map(|i| m.row(i).iter().map(|q| scaled(q, &d)).collect())
        .collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut aux = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        aux = int_product(&big, &aux);
        for (i, row) in aux.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let prod = int_product(&big, &aux);
        let trace: BigInt = (0..n).map(|i| &prod[i][i]).sum();
        coeffs[n - k] = -(trace / BigInt::from(k));
    }
    let mut scale = BigInt::one();
    let mut out = vec![Rational::zero(); n + 1];
    for j in (0..=n).rev() {
        out[j] = Rational::new(coeffs[j].clone(), scale.clone());
        scale *= &d;
    }
    out
}
