use crate::error::{Error, Result};
use crate::field::Field;

use super::elim::{kernel, rank, rref};
use super::matrix::Matrix;

/// A linear subspace of `F^ambient_dim`, held by a canonical basis.
///
/// The basis is the transpose of the nonzero rows of `rref(B^T)` for any
/// spanning matrix `B`, so two subspaces are equal exactly when their
/// stored bases are identical.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace<F> {
    ambient_dim: usize,
    basis: Matrix<F>,
}

impl<F: Field> Subspace<F> {
    /// Column space of `spanning`.
    pub fn span(spanning: &Matrix<F>) -> Self {
        let (reduced, pivots) = rref(&spanning.transpose());
        let basis = reduced
            .submatrix(0, 0, pivots.len(), spanning.rows())
            .transpose();
        Self {
            ambient_dim: spanning.rows(),
            basis,
        }
    }

    pub(crate) fn from_independent_columns(basis: Matrix<F>) -> Self {
        Self::span(&basis)
    }

    pub fn from_vectors(ambient_dim: usize, vectors: &[Vec<F>]) -> Result<Self> {
        Ok(Self::span(&Matrix::from_columns(ambient_dim, vectors)?))
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::zeros(ambient_dim, 0),
        }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Canonical basis, one vector per column.
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<F>> {
        (0..self.dim()).map(|j| self.basis.column(j)).collect()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let aug = Matrix::hstack(&[&self.basis, &Matrix::column_vector(v)])
            .expect("heights agree");
        rank(&aug) == self.dim()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.sum_unchecked(other).dim() == self.dim()
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::dims(format!(
                "subspaces of F^{} and F^{}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }

    fn sum_unchecked(&self, other: &Self) -> Self {
        Self::span(&Matrix::hstack(&[&self.basis, &other.basis]).expect("heights agree"))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(self.sum_unchecked(other))
    }

    /// Set-theoretic intersection, via the kernel of `[B1 | -B2]`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Self::zero(self.ambient_dim));
        }
        let stacked = Matrix::hstack(&[&self.basis, &-&other.basis])?;
        let relations = kernel(&stacked);
        let coefficients = relations.basis().submatrix(0, 0, self.dim(), relations.dim());
        Ok(Self::span(&(&self.basis * &coefficients)))
    }
}

/// `intersect(S1, S2)`.
pub fn intersect<F: Field>(a: &Subspace<F>, b: &Subspace<F>) -> Result<Subspace<F>> {
    a.intersect(b)
}

/// `S1 + S2`.
pub fn sum_subspace<F: Field>(a: &Subspace<F>, b: &Subspace<F>) -> Result<Subspace<F>> {
    a.sum(b)
}

/// Equality of column spaces.
pub fn subspace_equal<F: Field>(a: &Subspace<F>, b: &Subspace<F>) -> Result<bool> {
    a.check_ambient(b)?;
    Ok(a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, Rational};

    fn e(n: usize, i: usize) -> Vec<Rational> {
        (0..n).map(|j| int((i == j) as i64)).collect()
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        let s1 = Subspace::from_vectors(3, &[e(3, 0), e(3, 1)]).unwrap();
        let s2 = Subspace::from_vectors(3, &[e(3, 1), e(3, 2)]).unwrap();
        let both = intersect(&s1, &s2).unwrap();
        assert_eq!(both, Subspace::from_vectors(3, &[e(3, 1)]).unwrap());
        assert_eq!(intersect(&s1, &s1).unwrap(), s1);
        assert!(intersect(&s1, &Subspace::zero(2)).is_err());
    }

    #[test]
    fn sums() {
        let s1 = Subspace::from_vectors(3, &[e(3, 0)]).unwrap();
        let s2 = Subspace::from_vectors(3, &[e(3, 1)]).unwrap();
        assert_eq!(sum_subspace(&s1, &s2).unwrap().dim(), 2);
        assert_eq!(sum_subspace(&s1, &Subspace::zero(3)).unwrap(), s1);
        assert!(sum_subspace(&s1, &Subspace::zero(4)).is_err());
    }

    #[test]
    fn equality_ignores_basis_choice() {
        let a = Subspace::from_vectors(2, &[vec![int(1), int(1)], vec![int(1), int(-1)]]).unwrap();
        assert_eq!(a, Subspace::whole(2));
        let b = Subspace::from_vectors(3, &[vec![int(2), int(4), int(6)]]).unwrap();
        let c = Subspace::from_vectors(3, &[vec![int(-1), int(-2), int(-3)]]).unwrap();
        assert!(subspace_equal(&b, &c).unwrap());
        assert!(b.contains(&[int(3), int(6), int(9)]));
        assert!(!b.contains(&[int(3), int(6), int(8)]));
    }
}
