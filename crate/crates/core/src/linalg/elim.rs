//! Gauss-Jordan elimination and everything built directly on it.

use crate::error::{Error, Result};
use crate::field::Field;

use super::matrix::Matrix;
use super::subspace::Subspace;

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// columns. Only the first `limit` columns are eligible as pivots; row
/// operations still act on every column, which lets callers carry an
/// augmented block along.
///
/// Among the nonzero candidates of a column the pivot with the smallest
/// bit size is chosen. The rref itself is unique, so this only affects the
/// size of intermediate values.
pub(crate) fn gauss_jordan<F: Field>(m: &mut Matrix<F>, limit: usize) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit.min(cols) {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !m.get(i, c).is_zero())
            .min_by_key(|&i| m.get(i, c).bit_size())
        else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m.get(r, c).inv();
        for j in c..cols {
            let x = m.get(r, j).clone() * inv.clone();
            m.set(r, j, x);
        }
        let pivot_row: Vec<F> = m.row(r).to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c).clone();
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                if pivot_row[j].is_zero() {
                    continue;
                }
                let x = m.get(i, j).clone() - factor.clone() * pivot_row[j].clone();
                m.set(i, j, x);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn reduce_in_place<F: Field>(m: &mut Matrix<F>, limit: usize) -> Vec<usize> {
    F::eliminate(m, limit)
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Field>(m: &Matrix<F>) -> (Matrix<F>, Vec<usize>) {
    let mut out = m.clone();
    let pivots = reduce_in_place(&mut out, m.cols());
    (out, pivots)
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    // Eliminating along the shorter side is cheaper and gives the same rank.
    if m.rows() > m.cols() {
        rref(&m.transpose()).1.len()
    } else {
        rref(m).1.len()
    }
}

pub fn is_invertible<F: Field>(m: &Matrix<F>) -> bool {
    m.is_square() && rank(m) == m.rows()
}

pub fn inverse<F: Field>(m: &Matrix<F>) -> Result<Matrix<F>> {
    if !m.is_square() {
        return Err(Error::dims("inverse of a non-square matrix"));
    }
    let n = m.rows();
    let mut aug = Matrix::hstack(&[m, &Matrix::identity(n)])?;
    let pivots = reduce_in_place(&mut aug, n);
    if pivots.len() < n {
        return Err(Error::Singular);
    }
    Ok(aug.submatrix(0, n, n, n))
}

/// Left inverse `L` with `L * m = I_cols`. Requires full column rank.
pub fn left_inverse<F: Field>(m: &Matrix<F>) -> Result<Matrix<F>> {
    let (rows, cols) = m.shape();
    let mut aug = Matrix::hstack(&[m, &Matrix::identity(rows)])?;
    let pivots = reduce_in_place(&mut aug, cols);
    if pivots.len() < cols {
        return Err(Error::RankDeficient(format!(
            "left inverse needs full column rank {cols}, got {}",
            pivots.len()
        )));
    }
    // The row operations E satisfy E m = [I; 0]; the leading rows of E
    // are a left inverse.
    Ok(aug.submatrix(0, cols, cols, rows))
}

/// Right inverse `R` with `m * R = I_rows`. Requires full row rank.
pub fn right_inverse<F: Field>(m: &Matrix<F>) -> Result<Matrix<F>> {
    left_inverse(&m.transpose())
        .map(|l| l.transpose())
        .map_err(|_| Error::RankDeficient(format!("right inverse needs full row rank {}", m.rows())))
}

/// Outcome of solving `A X = B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution<F> {
    Unique(Matrix<F>),
    /// A particular solution; every solution is it plus a kernel element
    /// in each column.
    Underdetermined {
        particular: Matrix<F>,
        kernel: Subspace<F>,
    },
    Inconsistent,
}

impl<F: Field> Solution<F> {
    /// Some solution, if the system is consistent.
    pub fn any(&self) -> Option<&Matrix<F>> {
        match self {
            Solution::Unique(x) | Solution::Underdetermined { particular: x, .. } => Some(x),
            Solution::Inconsistent => None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        !matches!(self, Solution::Inconsistent)
    }
}

/// Solves `A X = B` exactly; `B` may have several columns.
pub fn solve<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<Solution<F>> {
    if a.rows() != b.rows() {
        return Err(Error::dims(format!(
            "system has {} equations but right-hand side has {} rows",
            a.rows(),
            b.rows()
        )));
    }
    let n = a.cols();
    let mut aug = Matrix::hstack(&[a, b])?;
    let pivots = reduce_in_place(&mut aug, n);
    let rank = pivots.len();
    for i in rank..aug.rows() {
        if (n..aug.cols()).any(|j| !aug.get(i, j).is_zero()) {
            return Ok(Solution::Inconsistent);
        }
    }
    let mut x = Matrix::zeros(n, b.cols());
    for (i, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(pc, j, aug.get(i, n + j).clone());
        }
    }
    if rank == n {
        Ok(Solution::Unique(x))
    } else {
        Ok(Solution::Underdetermined {
            particular: x,
            kernel: kernel_from_rref(&aug, &pivots, n),
        })
    }
}

/// Solves `A x = b` for a single vector.
pub fn solve_vector<F: Field>(a: &Matrix<F>, b: &[F]) -> Result<Solution<F>> {
    solve(a, &Matrix::column_vector(b))
}

fn kernel_from_rref<F: Field>(reduced: &Matrix<F>, pivots: &[usize], n: usize) -> Subspace<F> {
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let vectors: Vec<Vec<F>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![F::zero(); n];
            v[f] = F::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -reduced.get(i, f).clone();
            }
            v
        })
        .collect();
    let basis = Matrix::from_columns(n, &vectors).expect("kernel vectors have length n");
    Subspace::from_independent_columns(basis)
}

/// Null space `{x : M x = 0}`.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    let (reduced, pivots) = rref(m);
    kernel_from_rref(&reduced, &pivots, m.cols())
}

/// Column space of `m`.
pub fn image<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    Subspace::span(m)
}

/// Row space of `m`, as a subspace of column vectors of length `m.cols()`.
pub fn row_space<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    Subspace::span(&m.transpose())
}
