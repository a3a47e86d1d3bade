use crate::field::Field;
use crate::tensor::{Decomposition, RankOneTerm};

/// Term `i` of the first decomposition equals term `permutation[i]` of the
/// second after scaling its factors by `scalars[i] = (alpha, beta, gamma)`,
/// with `alpha beta gamma = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching<F> {
    pub permutation: Vec<usize>,
    pub scalars: Vec<(F, F, F)>,
}

fn first_nonzero<F: Field>(v: &[F]) -> F {
    v.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(F::one)
}

struct Canonical<F> {
    form: (Vec<F>, Vec<F>, Vec<F>),
    lead_u: F,
    lead_v: F,
    index: usize,
}

/// `u` and `v` scaled to have leading coordinate 1, the factors moved
/// into `w`.
fn canonical<F: Field>(index: usize, t: &RankOneTerm<F>) -> Canonical<F> {
    let lead_u = first_nonzero(&t.u);
    let lead_v = first_nonzero(&t.v);
    let iu = lead_u.inv();
    let iv = lead_v.inv();
    let scale = lead_u.clone() * lead_v.clone();
    Canonical {
        form: (
            t.u.iter().map(|x| x.clone() * iu.clone()).collect(),
            t.v.iter().map(|x| x.clone() * iv.clone()).collect(),
            t.w.iter().map(|x| x.clone() * scale.clone()).collect(),
        ),
        lead_u,
        lead_v,
        index,
    }
}

/// Equality up to permutation of the terms and rescalings with product 1.
pub fn essentially_equal<F: Field>(d1: &Decomposition<F>, d2: &Decomposition<F>) -> Option<Matching<F>> {
    if d1.format() != d2.format() || d1.len() != d2.len() {
        return None;
    }
    let sorted = |d: &Decomposition<F>| {
        let mut c: Vec<Canonical<F>> = d.terms().iter().enumerate().map(|(i, t)| canonical(i, t)).collect();
        c.sort_by(|a, b| a.form.cmp(&b.form));
        c
    };
    let c1 = sorted(d1);
    let c2 = sorted(d2);
    if c1.iter().zip(&c2).any(|(a, b)| a.form != b.form) {
        return None;
    }
    let mut permutation = vec![0; d1.len()];
    let mut scalars = vec![(F::one(), F::one(), F::one()); d1.len()];
    for (a, b) in c1.iter().zip(&c2) {
        let alpha = b.lead_u.clone() / a.lead_u.clone();
        let beta = b.lead_v.clone() / a.lead_v.clone();
        let gamma = (alpha.clone() * beta.clone()).inv();
        permutation[a.index] = b.index;
        scalars[a.index] = (alpha, beta, gamma);
    }
    Some(Matching { permutation, scalars })
}
