mod common;

use common::{int, ratio};
use ctd_core::{
    assemble, decompose, decompose_invertible_first, decompose_scan, decompose_with_budget, essentially_equal,
    generate_generic_planted, generate_planted, jennrich_decompose, jennrich_decompose_with_budget, seeded,
    tensors_equal, Decomposition, Error, RankOneTerm, Rational, RationalDecomposition, RationalTensor, Stage,
};
use num_traits::One;

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn plant(format: (usize, usize, usize), rows: &[(&[i64], &[i64], &[i64])]) -> RationalDecomposition {
    let terms = rows.iter().map(|(u, v, w)| RankOneTerm::new(ints(u), ints(v), ints(w))).collect();
    Decomposition::new(format, terms).unwrap()
}

/// Applies a matching to `d1` term by term and compares with `d2` exactly.
fn matching_transports(d1: &RationalDecomposition, d2: &RationalDecomposition) -> bool {
    let Some(m) = essentially_equal(d1, d2) else { return false };
    d1.terms().iter().enumerate().all(|(i, t)| {
        let (a, b, c) = &m.scalars[i];
        let target = &d2.terms()[m.permutation[i]];
        let scale = |v: &[Rational], s: &Rational| v.iter().map(|x| x * s).collect::<Vec<_>>();
        (a * b * c).is_one() && scale(&t.u, a) == target.u && scale(&t.v, b) == target.v && scale(&t.w, c) == target.w
    })
}

fn assert_recovers(t: &RationalTensor, expected: &RationalDecomposition, got: &RationalDecomposition) {
    assert!(tensors_equal(&assemble(got), t));
    assert!(matching_transports(got, expected));
}

#[test]
fn jennrich_on_diagonal_plant() {
    let d = plant(
        (3, 3, 2),
        &[(&[1, 0, 0], &[1, 0, 0], &[1, 2]), (&[0, 1, 0], &[0, 1, 0], &[3, -1]), (&[0, 0, 1], &[0, 0, 1], &[1, 5])],
    );
    let t = assemble(&d);
    let out = jennrich_decompose(&t, &mut seeded(0)).unwrap();
    assert_recovers(&t, &d, &out.decomposition);
    assert_eq!(out.rank_certificate, 3);
    assert!(out.eigenvalue_pairs.iter().all(|(l, m)| (l * m).is_one()));
    assert_eq!(out.randomness_log.len(), 2 * (out.retries + 1));
}

#[test]
fn jennrich_on_random_square_plants() {
    for seed in 0..5 {
        let inst = generate_planted(5, 5, 4, seed, 20).unwrap();
        let out = jennrich_decompose(&inst.tensor, &mut seeded(seed)).unwrap();
        assert_recovers(&inst.tensor, &inst.plant, &out.decomposition);
    }
}

#[test]
fn jennrich_fails_on_proportional_weights() {
    let d = plant(
        (2, 2, 3),
        &[(&[1, 0], &[1, 0], &[1, 2, 3]), (&[0, 1], &[0, 1], &[2, 4, 6])],
    );
    let err = jennrich_decompose_with_budget(&assemble(&d), &mut seeded(0), 4).unwrap_err();
    assert!(matches!(err, Error::RetryBudgetExhausted { budget: 4, .. }), "{err:?}");
}

#[test]
fn invertible_first_recovers_plant() {
    for seed in 0..3 {
        let inst = generate_generic_planted(6, 8, 4, seed, 20, 32).unwrap();
        let out = decompose_invertible_first(&inst.tensor, 8, &mut seeded(seed)).unwrap();
        assert_recovers(&inst.tensor, &inst.plant, &out.decomposition);
        assert_eq!(out.rank_certificate, 8);
        assert_eq!(out.combination, None);
    }
    let square = generate_planted(4, 4, 4, 5, 20).unwrap();
    let out = decompose_invertible_first(&square.tensor, 4, &mut seeded(5)).unwrap();
    assert_recovers(&square.tensor, &square.plant, &out.decomposition);
}

#[test]
fn general_decomposer_recovers_plant() {
    for (n, r, seed) in [(6, 8, 0), (6, 8, 1), (9, 12, 2), (3, 4, 3), (4, 5, 4)] {
        let inst = generate_generic_planted(n, r, 4, seed, 20, 32).unwrap();
        let out = decompose(&inst.tensor, r, &mut seeded(100 + seed)).unwrap();
        assert_recovers(&inst.tensor, &inst.plant, &out.decomposition);
        assert_eq!(out.rank_certificate, r);
        let lambda = out.combination.clone().unwrap();
        let top = 8 * (n * 4 * r) as i64;
        assert_eq!(lambda.len(), 4);
        assert!(lambda.iter().all(|&x| (1..=top).contains(&x)));
        assert_eq!(out.randomness_log[0].stage, Stage::Combination);
        let last = out.randomness_log.iter().rev().find(|d| d.stage == Stage::Combination).unwrap();
        assert_eq!(last.values, lambda);
        assert!(out.eigenvalue_pairs.iter().all(|(l, m)| (l * m).is_one()));
        assert!(out.max_bits >= inst.tensor.max_bits());
    }
}

#[test]
fn outputs_from_different_seeds_agree() {
    let inst = generate_generic_planted(6, 8, 5, 9, 20, 32).unwrap();
    let a = decompose(&inst.tensor, 8, &mut seeded(1)).unwrap();
    let b = decompose(&inst.tensor, 8, &mut seeded(2)).unwrap();
    assert_ne!(a.randomness_log, b.randomness_log);
    assert!(matching_transports(&a.decomposition, &b.decomposition));
}

#[test]
fn same_seed_is_deterministic() {
    let inst = generate_generic_planted(6, 8, 4, 4, 20, 32).unwrap();
    let a = decompose(&inst.tensor, 8, &mut seeded(77)).unwrap();
    let b = decompose(&inst.tensor, 8, &mut seeded(77)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn scope_errors() {
    let inst = generate_generic_planted(6, 8, 4, 0, 20, 32).unwrap();
    let mut rng = seeded(0);
    assert!(matches!(decompose(&inst.tensor, 5, &mut rng), Err(Error::InvalidInput(_))));
    assert!(matches!(decompose(&inst.tensor, 9, &mut rng), Err(Error::InvalidInput(_))));
    let three = generate_planted(6, 8, 3, 0, 20).unwrap();
    assert!(matches!(decompose(&three.tensor, 8, &mut rng), Err(Error::Unsupported(_))));
    let wide = RationalTensor::zeros(3, 4, 4);
    assert!(matches!(decompose(&wide, 3, &mut rng), Err(Error::Unsupported(_))));
}

#[test]
fn wrong_rank_exhausts_retries() {
    let inst = generate_generic_planted(6, 8, 4, 0, 20, 32).unwrap();
    let err = decompose_with_budget(&inst.tensor, 7, &mut seeded(0), 3).unwrap_err();
    assert!(
        matches!(err, Error::RetryBudgetExhausted { .. } | Error::HypothesisViolated(_)),
        "{err:?}"
    );
}

#[test]
fn scan_finds_the_rank() {
    let inst = generate_generic_planted(6, 7, 4, 2, 20, 32).unwrap();
    let out = decompose_scan(&inst.tensor, &mut seeded(2), 4).unwrap();
    assert_eq!(out.decomposition.len(), 7);
    assert_recovers(&inst.tensor, &inst.plant, &out.decomposition);
}

#[test]
fn essential_equality_small_cases() {
    let d = plant((2, 2, 2), &[(&[1, 2], &[3, 1], &[1, 1]), (&[0, 1], &[1, -1], &[2, 5])]);
    let scaled = Decomposition::new(
        (2, 2, 2),
        vec![
            RankOneTerm::new(ints(&[0, 1]), ints(&[1, -1]), ints(&[2, 5])),
            RankOneTerm::new(
                ints(&[2, 4]),
                ints(&[9, 3]),
                vec![ratio(1, 6), ratio(1, 6)],
            ),
        ],
    )
    .unwrap();
    let m = essentially_equal(&d, &scaled).unwrap();
    assert_eq!(m.permutation, vec![1, 0]);
    assert_eq!(m.scalars[0], (int(2), int(3), ratio(1, 6)));
    assert!(matching_transports(&d, &scaled));

    let doubled = Decomposition::new(
        (2, 2, 2),
        vec![RankOneTerm::new(ints(&[2, 4]), ints(&[3, 1]), ints(&[1, 1])), d.terms()[1].clone()],
    )
    .unwrap();
    assert!(essentially_equal(&d, &doubled).is_none());
    let shorter = Decomposition::new((2, 2, 2), vec![d.terms()[0].clone()]).unwrap();
    assert!(essentially_equal(&d, &shorter).is_none());
}
