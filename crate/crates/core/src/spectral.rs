//! Characteristic polynomials, eigenpairs in the base field and
//! (simultaneous) diagonalisability.

use crate::error::{Error, Result};
use crate::field::{Field, RootField};
use crate::linalg::{kernel, Matrix};

/// Eigenpairs of a square matrix whose eigenvalues lie in the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum<F> {
    /// One entry per basis vector of each eigenspace, eigenvalues ascending.
    /// Every vector has its first nonzero coordinate equal to 1.
    pub eigenpairs: Vec<(F, Vec<F>)>,
    /// True iff the eigenvectors form a basis of the whole space.
    pub complete: bool,
}

impl<F: Field> Spectrum<F> {
    pub fn eigenvalues(&self) -> Vec<F> {
        self.eigenpairs.iter().map(|(l, _)| l.clone()).collect()
    }

    /// True iff every eigenspace is one-dimensional and the spectrum is
    /// complete.
    pub fn is_simple(&self) -> bool {
        self.complete && self.eigenpairs.windows(2).all(|w| w[0].0 != w[1].0)
    }

    /// The eigenvectors as columns, in `eigenpairs` order.
    pub fn eigenvector_matrix(&self) -> Matrix<F> {
        let n = self.eigenpairs.first().map_or(0, |(_, v)| v.len());
        let columns: Vec<Vec<F>> = self.eigenpairs.iter().map(|(_, v)| v.clone()).collect();
        Matrix::from_columns(n, &columns).expect("eigenvectors share a length")
    }
}

/// Monic characteristic polynomial `det(x I - M)`, low-to-high.
pub fn char_poly<F: Field>(m: &Matrix<F>) -> Result<Vec<F>> {
    if !m.is_square() {
        return Err(Error::dims("characteristic polynomial of a non-square matrix"));
    }
    Ok(F::characteristic_polynomial(m))
}

/// The Faddeev-LeVerrier recurrence in the field itself. Needs
/// characteristic zero or larger than the matrix size.
pub(crate) fn faddeev_leverrier<F: Field>(m: &Matrix<F>) -> Vec<F> {
    let n = m.rows();
    let mut coeffs = vec![F::zero(); n + 1];
    coeffs[n] = F::one();
    let identity = Matrix::identity(n);
    let mut aux = Matrix::zeros(n, n);
    for k in 1..=n {
        aux = &(m * &aux) + &identity.scale(&coeffs[n - k + 1]);
        let trace = (m * &aux).trace();
        coeffs[n - k] = -(trace / F::from_i64(k as i64));
    }
    coeffs
}

/// Roots in the field with multiplicities; see [`RootField`].
pub fn field_roots<F: RootField>(poly: &[F]) -> Result<Vec<(F, usize)>> {
    F::polynomial_roots(poly)
}

/// Eigenpairs for every eigenvalue lying in the field.
pub fn eigen<F: RootField>(m: &Matrix<F>) -> Result<Spectrum<F>> {
    let poly = char_poly(m)?;
    let n = m.rows();
    let identity = Matrix::<F>::identity(n);
    let mut eigenpairs = Vec::new();
    for (lambda, _) in F::polynomial_roots(&poly)? {
        let shifted = m - &identity.scale(&lambda);
        for v in kernel(&shifted).basis_vectors() {
            eigenpairs.push((lambda.clone(), v));
        }
    }
    let complete = eigenpairs.len() == n;
    Ok(Spectrum {
        eigenpairs,
        complete,
    })
}

/// True iff `m` is diagonalisable over the field itself.
pub fn is_diagonalizable<F: RootField>(m: &Matrix<F>) -> Result<bool> {
    Ok(eigen(m)?.complete)
}

/// True iff the matrices pairwise commute and each is diagonalisable, i.e.
/// the family is simultaneously diagonalisable.
pub fn simultaneous_diag_check<F: RootField>(ms: &[Matrix<F>]) -> Result<bool> {
    let Some(first) = ms.first() else {
        return Ok(true);
    };
    if ms.iter().any(|m| !m.is_square() || m.shape() != first.shape()) {
        return Err(Error::dims("family members must be square of one size"));
    }
    for (i, a) in ms.iter().enumerate() {
        for b in &ms[i + 1..] {
            if !a.commutator(b)?.is_zero() {
                return Ok(false);
            }
        }
    }
    for m in ms {
        if !is_diagonalizable(m)? {
            return Ok(false);
        }
    }
    Ok(true)
}
