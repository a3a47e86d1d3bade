mod common;

use common::{int, ratio};
use ctd_core::linalg::{
    image, intersect, inverse, is_invertible, kernel, left_inverse, rank, right_inverse, rref, solve, subspace_equal,
    sum_subspace,
};
use ctd_core::{
    generate_generic_planted, planted_extension, seeded, BaseTransform, Matrix, Rational, RationalMatrix,
    RationalSubspace,
};
use num_traits::Zero;
use rand::Rng;

type M = RationalMatrix;

/// Laplace expansion along the first row.
fn cofactor_det(m: &M) -> Rational {
    let n = m.rows();
    if n == 0 {
        return int(1);
    }
    let mut total = Rational::zero();
    for j in 0..n {
        if m.get(0, j).is_zero() {
            continue;
        }
        let minor = Matrix::from_fn(n - 1, n - 1, |a, b| m.get(a + 1, if b < j { b } else { b + 1 }).clone());
        let term = m.get(0, j) * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn random_rational_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> M {
    Matrix::from_fn(rows, cols, |_, _| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5)))
}

fn e(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|k| int((k == i) as i64)).collect()
}

#[test]
fn rref_small_cases() {
    let (r, p) = rref(&M::identity(3));
    assert_eq!((r, p), (M::identity(3), vec![0, 1, 2]));
    let (r, p) = rref(&M::from_i64_rows(&[&[1, 2], &[2, 4]]).unwrap());
    assert_eq!(r, M::from_i64_rows(&[&[1, 2], &[0, 0]]).unwrap());
    assert_eq!(p, vec![0]);
}

#[test]
fn random_invertible_has_full_pivots() {
    let mut rng = seeded(11);
    let mut seen = 0;
    while seen < 30 {
        let m = random_rational_matrix(&mut rng, 5, 5);
        let det = cofactor_det(&m);
        let pivots = rref(&m).1.len();
        if det.is_zero() {
            assert!(pivots < 5);
        } else {
            assert_eq!(pivots, 5);
            seen += 1;
        }
    }
    // a singular matrix built from a repeated row
    let mut m = random_rational_matrix(&mut rng, 5, 5);
    for j in 0..5 {
        let x = m.get(0, j) * int(3);
        m.set(4, j, x);
    }
    assert!(cofactor_det(&m).is_zero());
    assert!(rref(&m).1.len() < 5);
}

#[test]
fn inverse_kernel_and_one_sided() {
    let d = M::diag(&[int(2), int(3)]);
    assert_eq!(inverse(&d).unwrap(), M::diag(&[ratio(1, 2), ratio(1, 3)]));
    let k = kernel(&M::from_i64_rows(&[&[1, 1]]).unwrap());
    assert_eq!(k.dim(), 1);
    assert!(k.contains(&[int(1), int(-1)]));

    let tall = M::from_i64_rows(&[&[1, 0], &[2, 1], &[0, 3]]).unwrap();
    assert!((&left_inverse(&tall).unwrap() * &tall).is_identity());
    let wide = tall.transpose();
    assert!((&wide * &right_inverse(&wide).unwrap()).is_identity());
    assert!(left_inverse(&wide).is_err());
    assert!(!is_invertible(&tall));
}

#[test]
fn planted_solutions_solve_exactly() {
    let mut rng = seeded(3);
    for trial in 0..40 {
        let rows = 2 + trial % 6;
        let cols = 1 + (trial * 7) % 6;
        let a = random_rational_matrix(&mut rng, rows, cols);
        let x0 = random_rational_matrix(&mut rng, cols, 1);
        let b = &a * &x0;
        let sol = solve(&a, &b).unwrap();
        let x = sol.any().expect("consistent");
        assert_eq!(&a * x, b);
        if rank(&a) == cols {
            assert_eq!(x, &x0);
        }
    }
    let a = M::from_i64_rows(&[&[1, 1], &[1, 1]]).unwrap();
    let b = M::from_i64_rows(&[&[1], &[2]]).unwrap();
    assert!(!solve(&a, &b).unwrap().is_consistent());
}

#[test]
fn subspace_small_cases() {
    let s = |vs: &[Vec<Rational>]| RationalSubspace::from_vectors(3, vs).unwrap();
    let a = s(&[e(3, 0), e(3, 1)]);
    let b = s(&[e(3, 1), e(3, 2)]);
    assert!(subspace_equal(&intersect(&a, &b).unwrap(), &s(&[e(3, 1)])).unwrap());
    assert!(subspace_equal(&intersect(&a, &a).unwrap(), &a).unwrap());
    assert_eq!(sum_subspace(&s(&[e(3, 0)]), &s(&[e(3, 1)])).unwrap().dim(), 2);
    assert!(subspace_equal(&sum_subspace(&a, &RationalSubspace::zero(3)).unwrap(), &a).unwrap());
}

#[test]
fn commutator_images_match_planted_blocks() {
    for seed in 0..3 {
        let inst = generate_generic_planted(6, 8, 4, seed, 20, 32).unwrap();
        let t = &inst.tensor;
        let t1_inv = inverse(t.slice(0)).unwrap();
        let a: Vec<M> = t.slices()[1..].iter().map(|s| &t1_inv * s).collect();
        let oracle = planted_extension(&inst.plant, &BaseTransform::FirstSlice).unwrap().skip(1);
        for k in 0..3 {
            let (l, m) = match k {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let kl = image(&a[k].commutator(&a[l]).unwrap());
            let km = image(&a[k].commutator(&a[m]).unwrap());
            let meet = intersect(&kl, &km).unwrap();
            assert_eq!(meet.dim(), 2);
            assert!(subspace_equal(&meet, &image(&oracle.b(k))).unwrap());
            assert_eq!(sum_subspace(&kl, &km).unwrap().dim(), 6);
        }
    }
}
