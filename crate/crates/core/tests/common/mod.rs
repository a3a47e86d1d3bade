//! Shared strategies and test-only scalars.

#![allow(dead_code)]

use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use ctd_core::{Field, Matrix, Rational, RationalMatrix, RootField};
use num_traits::{One, Zero};
use proptest::prelude::*;

pub fn int(x: i64) -> Rational {
    Rational::from_i64(x)
}

pub fn ratio(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

/// Rationals with small numerators and denominators.
pub fn rational(bound: i64) -> impl Strategy<Value = Rational> {
    (-bound..=bound, 1i64..=3).prop_map(|(a, b)| ratio(a, b))
}

pub fn matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = RationalMatrix> {
    proptest::collection::vec(rational(bound), rows * cols)
        .prop_map(move |data| Matrix::new(rows, cols, data).unwrap())
}

/// `rows x cols` with rank at most `k`.
pub fn low_rank(rows: usize, cols: usize, k: usize, bound: i64) -> impl Strategy<Value = RationalMatrix> {
    (matrix(rows, k, bound), matrix(k, cols, bound)).prop_map(|(a, b)| &a * &b)
}

pub fn any_shape(max: usize) -> impl Strategy<Value = RationalMatrix> {
    (1..=max, 1..=max, 0..=max).prop_flat_map(|(r, c, k)| {
        prop_oneof![matrix(r, c, 6), low_rank(r, c, k.min(r).min(c), 4)]
    })
}

/// A matrix `P diag(d) P^{-1}` with integer eigenvalues `d`, some repeated.
pub fn diagonalizable(n: usize) -> impl Strategy<Value = (RationalMatrix, Vec<Rational>)> {
    (matrix(n, n, 5), proptest::collection::vec(-4i64..=4, n))
        .prop_filter_map("singular conjugator", |(p, d)| {
            let inv = ctd_core::linalg::inverse(&p).ok()?;
            let d: Vec<Rational> = d.into_iter().map(int).collect();
            Some((&(&p * &Matrix::diag(&d)) * &inv, d))
        })
}

/// The integers modulo a small prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp(pub u32);

pub const P: u32 = 1009;

impl Fp {
    pub fn new(x: i64) -> Self {
        Fp(x.rem_euclid(P as i64) as u32)
    }

    fn pow(self, mut e: u32) -> Self {
        let mut acc = Fp(1);
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        Fp((self.0 + o.0) % P)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        Fp((self.0 + P - o.0) % P)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        Fp(((self.0 as u64 * o.0 as u64) % P as u64) as u32)
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, o: Fp) -> Fp {
        assert!(o.0 != 0, "division by zero in GF(p)");
        self * o.pow(P - 2)
    }
}

impl Rem for Fp {
    type Output = Fp;
    fn rem(self, _: Fp) -> Fp {
        Fp(0)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp((P - self.0) % P)
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp(1)
    }
}

impl Field for Fp {
    fn bit_size(&self) -> u64 {
        32 - self.0.leading_zeros() as u64
    }

    fn from_i64(value: i64) -> Self {
        Fp::new(value)
    }
}

impl RootField for Fp {
    fn polynomial_roots(coeffs: &[Self]) -> ctd_core::Result<Vec<(Self, usize)>> {
        let mut f: Vec<Fp> = coeffs.to_vec();
        while f.last().is_some_and(Zero::is_zero) {
            f.pop();
        }
        if f.is_empty() {
            return Err(ctd_core::Error::ZeroPolynomial);
        }
        let mut out = Vec::new();
        for x in 0..P {
            let root = Fp(x);
            let mut mult = 0;
            loop {
                // synthetic division by (t - root)
                let mut q = vec![Fp(0); f.len().saturating_sub(1)];
                let mut acc = Fp(0);
                for k in (0..f.len()).rev() {
                    acc = acc * root + f[k];
                    if k > 0 {
                        q[k - 1] = acc;
                    }
                }
                if f.len() < 2 || !acc.is_zero() {
                    break;
                }
                f = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((root, mult));
            }
        }
        Ok(out)
    }
}

pub fn fp_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Fp>> {
    proptest::collection::vec(0..P, rows * cols)
        .prop_map(move |d| Matrix::new(rows, cols, d.into_iter().map(Fp).collect()).unwrap())
}

/// A rational that uses only the generic elimination, product and
/// characteristic polynomial, for checking the integer kernels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Plain(pub Rational);

macro_rules! forward {
    ($tr:ident, $f:ident) => {
        impl $tr for Plain {
            type Output = Plain;
            fn $f(self, o: Plain) -> Plain {
                Plain(self.0.$f(o.0))
            }
        }
    };
}

forward!(Add, add);
forward!(Sub, sub);
forward!(Mul, mul);
forward!(Div, div);
forward!(Rem, rem);

impl Neg for Plain {
    type Output = Plain;
    fn neg(self) -> Plain {
        Plain(-self.0)
    }
}

impl Zero for Plain {
    fn zero() -> Self {
        Plain(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Plain {
    fn one() -> Self {
        Plain(Rational::one())
    }
}

impl Field for Plain {
    fn bit_size(&self) -> u64 {
        self.0.bit_size()
    }

    fn from_i64(value: i64) -> Self {
        Plain(Rational::from_i64(value))
    }
}

impl RootField for Plain {
    fn polynomial_roots(coeffs: &[Self]) -> ctd_core::Result<Vec<(Self, usize)>> {
        let c: Vec<Rational> = coeffs.iter().map(|x| x.0.clone()).collect();
        Ok(ctd_core::rational_roots(&c)?.into_iter().map(|(r, m)| (Plain(r), m)).collect())
    }
}

pub fn to_plain(m: &RationalMatrix) -> Matrix<Plain> {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| Plain(m.get(i, j).clone()))
}

pub fn from_plain(m: &Matrix<Plain>) -> RationalMatrix {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).0.clone())
}

fn nonzero_vector(len: usize, bound: i64) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(rational(bound), len).prop_filter("zero vector", |v| v.iter().any(|x| !x.is_zero()))
}

pub fn term(m: usize, n: usize, p: usize) -> impl Strategy<Value = ctd_core::RationalTerm> {
    (nonzero_vector(m, 4), nonzero_vector(n, 4), nonzero_vector(p, 4))
        .prop_map(|(u, v, w)| ctd_core::RankOneTerm::new(u, v, w))
}

pub fn decomposition(m: usize, n: usize, p: usize, len: usize) -> impl Strategy<Value = ctd_core::RationalDecomposition> {
    proptest::collection::vec(term(m, n, p), len)
        .prop_map(move |terms| ctd_core::Decomposition::new((m, n, p), terms).unwrap())
}

pub fn any_decomposition() -> impl Strategy<Value = ctd_core::RationalDecomposition> {
    (1usize..=3, 1usize..=3, 1usize..=3, 0usize..=4).prop_flat_map(|(m, n, p, k)| decomposition(m, n, p, k))
}

/// A nonzero rescaling `(a, b, 1/(ab))` per term and a permutation.
pub fn relabeling(len: usize) -> impl Strategy<Value = (Vec<usize>, Vec<(Rational, Rational)>)> {
    let nonzero = || rational(5).prop_filter("zero scalar", |x| !x.is_zero());
    (
        Just((0..len).collect::<Vec<_>>()).prop_shuffle(),
        proptest::collection::vec((nonzero(), nonzero()), len),
    )
}

pub fn relabel(
    d: &ctd_core::RationalDecomposition,
    perm: &[usize],
    scales: &[(Rational, Rational)],
) -> ctd_core::RationalDecomposition {
    let terms = perm
        .iter()
        .map(|&i| {
            let t = &d.terms()[i];
            let (a, b) = &scales[i];
            let c = Rational::one() / (a * b);
            ctd_core::RankOneTerm::new(
                t.u.iter().map(|x| x * a).collect(),
                t.v.iter().map(|x| x * b).collect(),
                t.w.iter().map(|x| x * &c).collect(),
            )
        })
        .collect();
    ctd_core::Decomposition::new(d.format(), terms).unwrap()
}

pub fn invertible(n: usize) -> impl Strategy<Value = RationalMatrix> {
    matrix(n, n, 5).prop_filter("singular", ctd_core::linalg::is_invertible)
}

pub fn extension(n: usize, s: usize, len: usize) -> impl Strategy<Value = ctd_core::RationalExtension> {
    proptest::collection::vec(matrix(n + s, n + s, 5), len)
        .prop_map(move |zs| ctd_core::CommutingExtension::new(n, n + s, zs).unwrap())
}

pub fn pair_same_rows(max: usize) -> impl Strategy<Value = (RationalMatrix, RationalMatrix)> {
    (1..=max, 1..=max, 1..=max, 0..=max, 0..=max).prop_flat_map(|(n, a, b, ka, kb)| {
        (low_rank(n, a, ka.min(n).min(a), 3), low_rank(n, b, kb.min(n).min(b), 3))
    })
}

pub fn gauge_case() -> impl Strategy<Value = (ctd_core::RationalExtension, RationalMatrix, RationalMatrix)> {
    (1usize..=3, 1usize..=2, 1usize..=3)
        .prop_flat_map(|(n, s, len)| (extension(n, s, len), invertible(s), invertible(s)))
}

pub fn relabel_case() -> impl Strategy<
    Value = (
        ctd_core::RationalDecomposition,
        (Vec<usize>, Vec<(Rational, Rational)>),
        (Vec<usize>, Vec<(Rational, Rational)>),
    ),
> {
    any_decomposition().prop_flat_map(|d| {
        let k = d.len();
        (Just(d), relabeling(k), relabeling(k))
    })
}

/// Property bodies shared by the property suite and the acceptance run.
pub mod props {
    use super::*;
    use ctd_core::linalg::{image, inverse, kernel};
    use ctd_core::{eigen, essentially_equal, gauge_apply, GaugeMatrix, RationalDecomposition, RationalExtension};

    pub fn grassmann(a: &RationalMatrix, b: &RationalMatrix) -> Result<(), TestCaseError> {
        let (u, w) = (image(a), image(b));
        let sum = u.sum(&w).unwrap();
        let meet = u.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + w.dim());
        prop_assert!(sum.contains_subspace(&u) && sum.contains_subspace(&w));
        prop_assert!(u.contains_subspace(&meet) && w.contains_subspace(&meet));
        Ok(())
    }

    pub fn gauge_laws(
        ext: &RationalExtension,
        g: &RationalMatrix,
        h: &RationalMatrix,
    ) -> Result<(), TestCaseError> {
        let s = ext.excess();
        let gg = GaugeMatrix::new(g.clone()).unwrap();
        let hh = GaugeMatrix::new(h.clone()).unwrap();
        let gh = GaugeMatrix::new(g * h).unwrap();
        prop_assert_eq!(&gauge_apply(ext, &GaugeMatrix::identity(s)).unwrap(), ext);
        let stepwise = gauge_apply(&gauge_apply(ext, &gg).unwrap(), &hh).unwrap();
        prop_assert_eq!(&stepwise, &gauge_apply(ext, &gh).unwrap());
        let moved = gauge_apply(ext, &gg).unwrap();
        prop_assert_eq!(&gauge_apply(&moved, &gg.inverse()).unwrap(), ext);
        for i in 0..ext.len() {
            prop_assert_eq!(moved.a(i), ext.a(i));
        }
        Ok(())
    }

    pub fn equivalence_laws(
        d: &RationalDecomposition,
        first: &(Vec<usize>, Vec<(Rational, Rational)>),
        second: &(Vec<usize>, Vec<(Rational, Rational)>),
    ) -> Result<(), TestCaseError> {
        let d2 = relabel(d, &first.0, &first.1);
        let d3 = relabel(&d2, &second.0, &second.1);
        prop_assert!(essentially_equal(d, d).is_some());
        prop_assert!(essentially_equal(d, &d2).is_some());
        prop_assert!(essentially_equal(&d2, d).is_some());
        prop_assert!(essentially_equal(&d2, &d3).is_some());
        prop_assert!(essentially_equal(d, &d3).is_some());
        if let Some(m) = essentially_equal(d, &d2) {
            prop_assert_eq!(m.permutation.len(), d.len());
        }
        Ok(())
    }

    pub fn eigen_residuals(m: &RationalMatrix, diagonal: &[Rational]) -> Result<(), TestCaseError> {
        let spectrum = eigen(m).unwrap();
        prop_assert!(spectrum.complete);
        let mut expected = diagonal.to_vec();
        expected.sort();
        prop_assert_eq!(spectrum.eigenvalues(), expected);
        for (lambda, v) in &spectrum.eigenpairs {
            let mv = m.apply(v).unwrap();
            let lv: Vec<Rational> = v.iter().map(|x| x * lambda).collect();
            prop_assert_eq!(mv, lv);
            prop_assert!(v.iter().any(|x| !x.is_zero()));
        }
        let vecs = spectrum.eigenvector_matrix();
        prop_assert!(inverse(&vecs).is_ok());
        prop_assert_eq!(kernel(&vecs).dim(), 0);
        Ok(())
    }
}
