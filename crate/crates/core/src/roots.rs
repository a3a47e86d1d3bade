//! Rational roots of polynomials with rational coefficients.
//!
//! Coefficient vectors are low-to-high: `coeffs[k]` multiplies `x^k`.
//!
//! After clearing denominators and content, any root `p/q` in lowest terms
//! has `p | a_0` and `q | a_d`. Instead of enumerating those divisors
//! (which needs integer factorisation) the candidates are produced by
//! lifting the roots of the square-free part modulo a small prime to a
//! modulus above `2 |a_0| |a_d|` and reconstructing the unique fraction
//! within those bounds. Every candidate is then checked by exact
//! evaluation, so the output is exactly the set of rational roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{common_denominator, Field, Rational};

pub fn trim(coeffs: &[Rational]) -> Vec<Rational> {
    let mut out = coeffs.to_vec();
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

pub fn eval(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

fn derivative(coeffs: &[Rational]) -> Vec<Rational> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rational::from_i64(k as i64))
        .collect()
}

/// Polynomial long division; `divisor` must be nonzero after trimming.
pub fn div_rem(dividend: &[Rational], divisor: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let divisor = trim(divisor);
    let lead = divisor.last().expect("nonzero divisor").clone();
    let mut rem = trim(dividend);
    if rem.len() < divisor.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - divisor.len() + 1];
    while rem.len() >= divisor.len() {
        let shift = rem.len() - divisor.len();
        let factor = rem.last().unwrap().clone() / &lead;
        for (k, d) in divisor.iter().enumerate() {
            rem[shift + k] = &rem[shift + k] - &factor * d;
        }
        quot[shift] = factor;
        rem = trim(&rem);
    }
    (quot, rem)
}

fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = trim(a);
    let mut b = trim(b);
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Primitive integer polynomial proportional to `coeffs` (positive leading
/// coefficient).
fn primitive_integer(coeffs: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(coeffs);
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let sign = if ints.last().is_some_and(Signed::is_negative) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|c| c / &content * &sign).collect()
}

fn mod_u64(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

fn trim_mod(mut p: Vec<u64>) -> Vec<u64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn gcd_degree_mod(a: &[u64], b: &[u64], m: u64) -> usize {
    let mut a = trim_mod(a.to_vec());
    let mut b = trim_mod(b.to_vec());
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), m - 2, m);
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let factor = *a.last().unwrap() * inv % m;
            for (k, &d) in b.iter().enumerate() {
                a[shift + k] = (a[shift + k] + m - factor * d % m) % m;
            }
            a = trim_mod(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn eval_big(coeffs: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

/// Smallest nonnegative representative of `a^{-1} mod m`, if it exists.
fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// The fraction `a/b` with `|a| <= num_bound`, `0 < b <= den_bound` and
/// `a = b x mod m`. Unique when `m > 2 num_bound den_bound`.
fn reconstruct(x: &BigInt, m: &BigInt, num_bound: &BigInt, den_bound: &BigInt) -> Option<Rational> {
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > num_bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || &t1.abs() > den_bound {
        return None;
    }
    Some(Rational::new(r1, t1))
}

fn integer_derivative(g: &[BigInt]) -> Vec<BigInt> {
    g.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect()
}

/// Sufficient test for square-freeness over the rationals: `g` and `g'`
/// are coprime modulo one of a few primes not dividing the leading
/// coefficient.
fn is_square_free_mod_small_prime(g: &[BigInt]) -> bool {
    let lead = g.last().expect("nonzero polynomial");
    let dg = integer_derivative(g);
    (101u64..)
        .filter(|&l| is_prime(l))
        .take(8)
        .filter(|&l| mod_u64(lead, l) != 0)
        .any(|l| {
            let gm: Vec<u64> = g.iter().map(|c| mod_u64(c, l)).collect();
            let dgm: Vec<u64> = dg.iter().map(|c| mod_u64(c, l)).collect();
            gcd_degree_mod(&gm, &dgm, l) == 0
        })
}

/// Roots of a square-free primitive integer polynomial with nonzero
/// constant term.
fn simple_roots(g: &[BigInt]) -> Vec<Rational> {
    let degree = g.len() - 1;
    let lead = g[degree].abs();
    let constant = g[0].abs();
    let dg = integer_derivative(g);

    let prime = (101u64..)
        .filter(|&l| is_prime(l))
        .find(|&l| {
            if mod_u64(&lead, l) == 0 {
                return false;
            }
            let gm: Vec<u64> = g.iter().map(|c| mod_u64(c, l)).collect();
            let dgm: Vec<u64> = dg.iter().map(|c| mod_u64(c, l)).collect();
            gcd_degree_mod(&gm, &dgm, l) == 0
        })
        .expect("only finitely many primes divide the discriminant");

    let gm: Vec<u64> = g.iter().map(|c| mod_u64(c, prime)).collect();
    let residues: Vec<u64> = (0..prime)
        .filter(|&x| gm.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % prime) == 0)
        .collect();

    let target = BigInt::from(2) * &constant * &lead;
    let p = BigInt::from(prime);
    let mut found = Vec::new();
    for r in residues {
        let mut x = BigInt::from(r);
        let mut modulus = p.clone();
        let mut ok = true;
        while modulus <= target {
            modulus = &modulus * &modulus;
            let value = eval_big(g, &x, &modulus);
            let slope = eval_big(&dg, &x, &modulus);
            let Some(inv) = inverse_mod(&slope, &modulus) else {
                ok = false;
                break;
            };
            x = (x - value * inv).mod_floor(&modulus);
        }
        if !ok {
            continue;
        }
        if let Some(candidate) = reconstruct(&x, &modulus, &constant, &lead) {
            let coeffs: Vec<Rational> = g.iter().cloned().map(Rational::from_integer).collect();
            if eval(&coeffs, &candidate).is_zero() {
                found.push(candidate);
            }
        }
    }
    found
}

/// All rational roots with multiplicities, ascending.
pub fn rational_roots(coeffs: &[Rational]) -> Result<Vec<(Rational, usize)>> {
    let mut f = trim(coeffs);
    if f.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    let zeros = f.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.push((Rational::zero(), zeros));
        f.drain(..zeros);
    }
    if f.len() > 1 {
        let g = primitive_integer(&f);
        if is_square_free_mod_small_prime(&g) {
            out.extend(simple_roots(&g).into_iter().map(|root| (root, 1)));
            out.sort();
            return Ok(out);
        }
        let square_free = div_rem(&f, &gcd(&f, &derivative(&f))).0;
        for root in simple_roots(&primitive_integer(&square_free)) {
            let factor = vec![-root.clone(), Rational::one()];
            let mut multiplicity = 0;
            loop {
                let (q, r) = div_rem(&f, &factor);
                if !r.is_empty() {
                    break;
                }
                f = q;
                multiplicity += 1;
            }
            out.push((root, multiplicity));
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, ratio};

    fn poly(c: &[i64]) -> Vec<Rational> {
        c.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn simple_cases() {
        assert_eq!(
            rational_roots(&poly(&[2, -3, 1])).unwrap(),
            vec![(int(1), 1), (int(2), 1)]
        );
        assert!(rational_roots(&poly(&[1, 0, 1])).unwrap().is_empty());
        assert!(rational_roots(&poly(&[-2, 0, 1])).unwrap().is_empty());
        assert_eq!(rational_roots(&poly(&[0, 0, 0, 1])).unwrap(), vec![(int(0), 3)]);
        assert_eq!(rational_roots(&poly(&[0, 0])), Err(Error::ZeroPolynomial));
        assert!(rational_roots(&poly(&[7])).unwrap().is_empty());
    }

    #[test]
    fn multiplicities_and_fractions() {
        // (2x - 3)^2 (x + 5) (3x + 1)
        let mut p = vec![Rational::one()];
        for f in [poly(&[-3, 2]), poly(&[-3, 2]), poly(&[5, 1]), poly(&[1, 3])] {
            let mut q = vec![Rational::zero(); p.len() + 1];
            for (i, a) in p.iter().enumerate() {
                for (j, b) in f.iter().enumerate() {
                    q[i + j] = &q[i + j] + a * b;
                }
            }
            p = q;
        }
        assert_eq!(
            rational_roots(&p).unwrap(),
            vec![(int(-5), 1), (ratio(-1, 3), 1), (ratio(3, 2), 2)]
        );
    }

    #[test]
    fn large_roots() {
        let big = Rational::new(BigInt::from(10).pow(30) + 7, BigInt::from(3).pow(25));
        let small = ratio(-17, 1_000_003);
        // (x - big)(x - small)(x^2 + 1)
        let c0 = &big * &small;
        let c1 = -(&big + &small);
        let p = vec![
            c0.clone(),
            c1.clone(),
            Rational::one() + &c0,
            c1,
            Rational::one(),
        ];
        // (x^2 + 1)(x^2 + c1 x + c0) = x^4 + c1 x^3 + (1 + c0) x^2 + c1 x + c0
        assert_eq!(rational_roots(&p).unwrap(), vec![(small, 1), (big, 1)]);
    }
}
