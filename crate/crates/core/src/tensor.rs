//! Order-3 tensors stored as z-slices, rank-one terms and decompositions.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{is_zero_vector, rank, Matrix};

/// An `m x n x p` tensor held as `p` slices of shape `m x n`;
/// `T[i, j, k] = slices[k][i, j]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor3<F> {
    m: usize,
    n: usize,
    slices: Vec<Matrix<F>>,
}

impl<F: Field> Tensor3<F> {
    pub fn from_slices(m: usize, n: usize, slices: Vec<Matrix<F>>) -> Result<Self> {
        if let Some(bad) = slices.iter().position(|s| s.shape() != (m, n)) {
            return Err(Error::dims(format!(
                "slice {bad} has shape {:?}, expected ({m}, {n})",
                slices[bad].shape()
            )));
        }
        Ok(Self { m, n, slices })
    }

    pub fn zeros(m: usize, n: usize, p: usize) -> Self {
        Self {
            m,
            n,
            slices: vec![Matrix::zeros(m, n); p],
        }
    }

    pub fn format(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.slices.len())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.slices.len()
    }

    pub fn is_square(&self) -> bool {
        self.m == self.n
    }

    pub fn slices(&self) -> &[Matrix<F>] {
        &self.slices
    }

    pub fn slice(&self, k: usize) -> &Matrix<F> {
        &self.slices[k]
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &F {
        self.slices[k].get(i, j)
    }

    pub fn into_slices(self) -> Vec<Matrix<F>> {
        self.slices
    }

    pub fn max_bits(&self) -> u64 {
        self.slices.iter().map(Matrix::max_bits).max().unwrap_or(0)
    }

    /// Dimension of the span of the slices inside `F^{m n}`.
    pub fn slice_span_dim(&self) -> usize {
        let flat = Matrix::from_fn(self.p(), self.m * self.n, |k, idx| {
            self.slices[k].get(idx / self.n, idx % self.n).clone()
        });
        rank(&flat)
    }

    /// `sum_k coeffs[k] T_k`.
    pub fn combine_slices(&self, coeffs: &[F]) -> Result<Matrix<F>> {
        if coeffs.len() != self.p() {
            return Err(Error::dims(format!(
                "{} coefficients for {} slices",
                coeffs.len(),
                self.p()
            )));
        }
        let mut acc = Matrix::zeros(self.m, self.n);
        for (c, s) in coeffs.iter().zip(&self.slices) {
            if !c.is_zero() {
                acc = &acc + &s.scale(c);
            }
        }
        Ok(acc)
    }

    /// Replaces the first slice by `sum_k coeffs[k] T_k`.
    pub fn replace_first_slice(&self, coeffs: &[F]) -> Result<Self> {
        if self.p() == 0 {
            return Err(Error::dims("tensor has no slices"));
        }
        let combined = self.combine_slices(coeffs)?;
        let mut slices = self.slices.clone();
        slices[0] = combined;
        Ok(Self { slices, ..*self })
    }

    /// New tensor with `slice` in front of the existing ones.
    pub fn prepend_slice(&self, slice: Matrix<F>) -> Result<Self> {
        if slice.shape() != (self.m, self.n) {
            return Err(Error::dims("prepended slice has the wrong shape"));
        }
        let mut slices = Vec::with_capacity(self.p() + 1);
        slices.push(slice);
        slices.extend(self.slices.iter().cloned());
        Ok(Self { slices, ..*self })
    }

    /// Tensor with slices `A T_k`; `A` is `m' x m`.
    pub fn left_multiply_slices(&self, a: &Matrix<F>) -> Result<Self> {
        if a.cols() != self.m {
            return Err(Error::dims(format!(
                "left factor has {} columns, slices have {} rows",
                a.cols(),
                self.m
            )));
        }
        Ok(Self {
            m: a.rows(),
            n: self.n,
            slices: self.slices.iter().map(|s| a * s).collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.format() != other.format() {
            return Err(Error::dims("tensor formats differ"));
        }
        Ok(Self {
            slices: self
                .slices
                .iter()
                .zip(&other.slices)
                .map(|(a, b)| a + b)
                .collect(),
            ..*self
        })
    }
}

/// Exact entrywise equality (formats included).
pub fn tensors_equal<F: Field>(a: &Tensor3<F>, b: &Tensor3<F>) -> bool {
    a == b
}

/// `u ⊗ v ⊗ w` with all three factors nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankOneTerm<F> {
    pub u: Vec<F>,
    pub v: Vec<F>,
    pub w: Vec<F>,
}

impl<F: Field> RankOneTerm<F> {
    pub fn new(u: Vec<F>, v: Vec<F>, w: Vec<F>) -> Self {
        Self { u, v, w }
    }

    fn is_degenerate(&self) -> bool {
        is_zero_vector(&self.u) || is_zero_vector(&self.v) || is_zero_vector(&self.w)
    }

    pub fn max_bits(&self) -> u64 {
        self.u
            .iter()
            .chain(&self.v)
            .chain(&self.w)
            .map(Field::bit_size)
            .max()
            .unwrap_or(0)
    }
}

/// A list of rank-one terms for a target format `(m, n, p)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition<F> {
    format: (usize, usize, usize),
    terms: Vec<RankOneTerm<F>>,
}

impl<F: Field> Decomposition<F> {
    /// Rejects terms with a zero factor or the wrong lengths.
    pub fn new(format: (usize, usize, usize), terms: Vec<RankOneTerm<F>>) -> Result<Self> {
        let (m, n, p) = format;
        for (index, t) in terms.iter().enumerate() {
            if (t.u.len(), t.v.len(), t.w.len()) != (m, n, p) {
                return Err(Error::dims(format!(
                    "term {index} has lengths ({}, {}, {}), format is {format:?}",
                    t.u.len(),
                    t.v.len(),
                    t.w.len()
                )));
            }
            if t.is_degenerate() {
                return Err(Error::ZeroTerm { index });
            }
        }
        Ok(Self { format, terms })
    }

    pub fn empty(format: (usize, usize, usize)) -> Self {
        Self {
            format,
            terms: Vec::new(),
        }
    }

    pub fn format(&self) -> (usize, usize, usize) {
        self.format
    }

    pub fn terms(&self) -> &[RankOneTerm<F>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn into_terms(self) -> Vec<RankOneTerm<F>> {
        self.terms
    }

    /// Matrix with the `u_i` as rows (`r x m`).
    pub fn u_matrix(&self) -> Matrix<F> {
        Matrix::from_fn(self.len(), self.format.0, |i, j| self.terms[i].u[j].clone())
    }

    /// Matrix with the `v_i` as rows (`r x n`).
    pub fn v_matrix(&self) -> Matrix<F> {
        Matrix::from_fn(self.len(), self.format.1, |i, j| self.terms[i].v[j].clone())
    }

    /// Matrix with the `w_i` as rows (`r x p`).
    pub fn w_matrix(&self) -> Matrix<F> {
        Matrix::from_fn(self.len(), self.format.2, |i, j| self.terms[i].w[j].clone())
    }

    /// `D_k = diag(w_{1k}, ..., w_{rk})`.
    pub fn weight_diagonal(&self, k: usize) -> Matrix<F> {
        let d: Vec<F> = self.terms.iter().map(|t| t.w[k].clone()).collect();
        Matrix::diag(&d)
    }

    /// Union of the two term lists.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.format != other.format {
            return Err(Error::dims("decomposition formats differ"));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            format: self.format,
            terms,
        })
    }

    pub fn max_bits(&self) -> u64 {
        self.terms.iter().map(RankOneTerm::max_bits).max().unwrap_or(0)
    }
}

/// Tensor with slices `U^T D_k V`.
pub fn assemble<F: Field>(d: &Decomposition<F>) -> Tensor3<F> {
    let (m, n, p) = d.format();
    let ut = d.u_matrix().transpose();
    let v = d.v_matrix();
    let slices = (0..p)
        .map(|k| {
            if d.is_empty() {
                Matrix::zeros(m, n)
            } else {
                &(&ut * &d.weight_diagonal(k)) * &v
            }
        })
        .collect();
    Tensor3 { m, n, slices }
}
