mod common;

use common::*;
use ctd_core::linalg::{inverse, kernel, rank, rref, solve, Solution};
use ctd_core::{char_poly, Matrix, RationalMatrix};
use proptest::prelude::*;

fn tall_or_wide() -> impl Strategy<Value = RationalMatrix> {
    (1usize..=12, 1usize..=7, 0usize..=7).prop_flat_map(|(r, c, k)| {
        prop_oneof![matrix(r, c, 9), low_rank(r, c, k.min(r).min(c), 5)]
    })
}

fn same_solution(a: &Solution<ctd_core::Rational>, b: &Solution<Plain>) -> bool {
    match (a, b) {
        (Solution::Inconsistent, Solution::Inconsistent) => true,
        (Solution::Unique(x), Solution::Unique(y)) => *x == from_plain(y),
        (
            Solution::Underdetermined { particular: x, kernel: k },
            Solution::Underdetermined { particular: y, kernel: l },
        ) => *x == from_plain(y) && *k.basis() == from_plain(l.basis()),
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn elimination_matches_generic(m in tall_or_wide()) {
        let (fast, pivots) = rref(&m);
        let (slow, slow_pivots) = rref(&to_plain(&m));
        prop_assert_eq!(&pivots, &slow_pivots);
        prop_assert_eq!(fast, from_plain(&slow));
        prop_assert_eq!(rank(&m), pivots.len());
    }

    #[test]
    fn kernel_matches_generic(m in tall_or_wide()) {
        let fast = kernel(&m);
        prop_assert_eq!(fast.basis(), &from_plain(kernel(&to_plain(&m)).basis()));
    }

    #[test]
    fn solve_matches_generic(a in tall_or_wide(), extra in matrix(12, 2, 6), planted in any::<bool>()) {
        let b = if planted {
            &a * &extra.submatrix(0, 0, a.cols(), 2)
        } else {
            extra.submatrix(0, 0, a.rows(), 2)
        };
        let fast = solve(&a, &b).unwrap();
        let slow = solve(&to_plain(&a), &to_plain(&b)).unwrap();
        prop_assert!(same_solution(&fast, &slow), "{:?} vs {:?}", fast, slow);
        if planted {
            prop_assert!(fast.is_consistent());
        }
    }

    #[test]
    fn product_matches_generic((a, b) in (1usize..=6, 1usize..=6, 1usize..=6)
        .prop_flat_map(|(r, k, c)| (matrix(r, k, 9), matrix(k, c, 9))))
    {
        prop_assert_eq!(&a * &b, from_plain(&(&to_plain(&a) * &to_plain(&b))));
    }

    #[test]
    fn char_poly_matches_generic(m in (1usize..=6).prop_flat_map(|n| matrix(n, n, 9))) {
        let fast = char_poly(&m).unwrap();
        let slow: Vec<_> = char_poly(&to_plain(&m)).unwrap().into_iter().map(|x| x.0).collect();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn inverse_matches_generic(m in (1usize..=6).prop_flat_map(|n| matrix(n, n, 9))) {
        match (inverse(&m), inverse(&to_plain(&m))) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, from_plain(&y)),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "invertibility disagrees"),
        }
    }
}

#[test]
fn tall_inconsistent_system_is_detected() {
    // 10 equations in 2 unknowns with one contradictory row at the end
    let mut rows: Vec<Vec<i64>> = (0..10).map(|i| vec![i + 1, 2 * i - 3, 3 * i - 2]).collect();
    rows[9][2] += 1;
    let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap();
    let a = m.submatrix(0, 0, 10, 2);
    let b = m.submatrix(0, 2, 10, 1);
    assert!(!solve(&a, &b).unwrap().is_consistent());
    rows[9][2] -= 1;
    let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap();
    let sol = solve(&m.submatrix(0, 0, 10, 2), &m.submatrix(0, 2, 10, 1)).unwrap();
    assert_eq!(sol.any().unwrap(), &Matrix::from_i64_rows(&[&[1], &[1]]).unwrap());
}
