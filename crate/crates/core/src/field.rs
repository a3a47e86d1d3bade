//! Scalar abstraction for exact linear algebra.
//!
//! Every algorithm in this crate is written against [`Field`]: exact
//! arithmetic with a decidable zero test. [`RootField`] adds root finding
//! for polynomials, which is what the spectral layer needs. The only
//! shipped instantiation is [`Rational`].

use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{NumOps, One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// An exact field.
///
/// Equality must be exact; the elimination routines branch on `is_zero`.
pub trait Field:
    Clone + Debug + PartialEq + Eq + Ord + Zero + One + NumOps + Neg<Output = Self> + Send + Sync + 'static
{
    /// Storage size of the element in bits. Pivot selection minimises this.
    fn bit_size(&self) -> u64;

    fn from_i64(value: i64) -> Self;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    /// Gauss-Jordan elimination of `m` in place over its first `limit`
    /// columns, returning the pivot columns. Overrides must produce the
    /// same reduced form on those columns.
    fn eliminate(m: &mut Matrix<Self>, limit: usize) -> Vec<usize> {
        crate::linalg::gauss_jordan(m, limit)
    }

    /// `a * b` for conforming shapes.
    fn multiply(a: &Matrix<Self>, b: &Matrix<Self>) -> Matrix<Self> {
        crate::linalg::schoolbook_product(a, b)
    }

    /// Monic characteristic polynomial of a square matrix, low-to-high.
    fn characteristic_polynomial(m: &Matrix<Self>) -> Vec<Self> {
        crate::spectral::faddeev_leverrier(m)
    }
}

/// A field in which the roots of a univariate polynomial can be computed.
pub trait RootField: Field {
    /// Roots lying in the field, with multiplicities, sorted ascending.
    ///
    /// `coeffs` is low-to-high and must not be identically zero.
    fn polynomial_roots(coeffs: &[Self]) -> Result<Vec<(Self, usize)>>;
}

impl Field for Rational {
    fn bit_size(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }

    fn from_i64(value: i64) -> Self {
        Rational::from_integer(BigInt::from(value))
    }

    fn inv(&self) -> Self {
        self.recip()
    }

    fn eliminate(m: &mut Matrix<Self>, limit: usize) -> Vec<usize> {
        crate::integer::eliminate(m, limit)
    }

    fn multiply(a: &Matrix<Self>, b: &Matrix<Self>) -> Matrix<Self> {
        crate::integer::multiply(a, b)
    }

    fn characteristic_polynomial(m: &Matrix<Self>) -> Vec<Self> {
        crate::integer::char_poly(m)
    }
}

impl RootField for Rational {
    fn polynomial_roots(coeffs: &[Self]) -> Result<Vec<(Self, usize)>> {
        crate::roots::rational_roots(coeffs)
    }
}

/// Formats a rational as `"num/den"`, or `"num"` when the denominator is 1.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses the `"num/den"` / `"num"` form. Non-reduced input is accepted and
/// reduced; a zero denominator is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
        Some((num, den)) => {
            let num = BigInt::from_str(num).map_err(|_| bad())?;
            let den = BigInt::from_str(den).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn int(value: i64) -> Rational {
    Rational::from_i64(value)
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}
