//! Commuting extensions: a tuple of size-`r` pairwise commuting matrices
//! whose top-left `n x n` blocks are a given tuple.

use num_traits::Zero;
use serde::Serialize;

use crate::bounds::{commutator_images, hypothesis_check};
use crate::error::{Error, Result};
use crate::field::{Field, RootField};
use crate::linalg::{inverse, kernel, left_inverse, right_inverse, row_space, solve, Matrix, Solution};
use crate::spectral::is_diagonalizable;
use crate::tensor::Decomposition;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingExtension<F> {
    n: usize,
    r: usize,
    zs: Vec<Matrix<F>>,
}

impl<F: Field> CommutingExtension<F> {
    /// Checks shapes only; commutation is what [`verify_extension`] is for.
    pub fn new(n: usize, r: usize, zs: Vec<Matrix<F>>) -> Result<Self> {
        if r < n {
            return Err(Error::InvalidInput(format!("extension size {r} below base size {n}")));
        }
        if let Some(bad) = zs.iter().position(|z| z.shape() != (r, r)) {
            return Err(Error::dims(format!(
                "extension matrix {bad} is {:?}, expected {r}x{r}",
                zs[bad].shape()
            )));
        }
        Ok(Self { n, r, zs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn excess(&self) -> usize {
        self.r - self.n
    }

    pub fn len(&self) -> usize {
        self.zs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zs.is_empty()
    }

    pub fn zs(&self) -> &[Matrix<F>] {
        &self.zs
    }

    pub fn z(&self, i: usize) -> &Matrix<F> {
        &self.zs[i]
    }

    pub fn into_zs(self) -> Vec<Matrix<F>> {
        self.zs
    }

    pub fn a(&self, i: usize) -> Matrix<F> {
        self.zs[i].submatrix(0, 0, self.n, self.n)
    }

    pub fn b(&self, i: usize) -> Matrix<F> {
        self.zs[i].submatrix(0, self.n, self.n, self.excess())
    }

    pub fn c(&self, i: usize) -> Matrix<F> {
        self.zs[i].submatrix(self.n, 0, self.excess(), self.n)
    }

    pub fn d(&self, i: usize) -> Matrix<F> {
        self.zs[i].submatrix(self.n, self.n, self.excess(), self.excess())
    }

    /// Drops the first `k` matrices.
    pub fn skip(&self, k: usize) -> Self {
        Self {
            n: self.n,
            r: self.r,
            zs: self.zs[k.min(self.zs.len())..].to_vec(),
        }
    }

    pub fn max_bits(&self) -> u64 {
        self.zs.iter().map(Matrix::max_bits).max().unwrap_or(0)
    }
}

/// An invertible `(r-n) x (r-n)` matrix acting by conjugation with
/// `diag(I_n, M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeMatrix<F> {
    m: Matrix<F>,
    inverse: Matrix<F>,
}

impl<F: Field> GaugeMatrix<F> {
    pub fn new(m: Matrix<F>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::dims("gauge matrix must be square"));
        }
        let inverse = inverse(&m)?;
        Ok(Self { m, inverse })
    }

    pub fn identity(size: usize) -> Self {
        Self {
            m: Matrix::identity(size),
            inverse: Matrix::identity(size),
        }
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.m
    }

    pub fn inverse(&self) -> Self {
        Self {
            m: self.inverse.clone(),
            inverse: self.m.clone(),
        }
    }

    pub fn size(&self) -> usize {
        self.m.rows()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    /// Shapes agree and every top-left block equals its base matrix.
    pub top_left_ok: bool,
    pub commuting: bool,
    /// `None` when not requested.
    pub diagonalizable: Option<bool>,
    pub problems: Vec<String>,
}

impl ExtensionReport {
    pub fn passed(&self) -> bool {
        self.top_left_ok && self.commuting && self.diagonalizable != Some(false)
    }
}

/// Checks `ext` against `base`. Never fails; problems land in the report.
pub fn verify_extension<F: RootField>(
    base: &[Matrix<F>],
    ext: &CommutingExtension<F>,
    require_diagonalizable: bool,
) -> ExtensionReport {
    let mut report = structural_report(base, ext);
    if require_diagonalizable {
        let mut all = true;
        for (i, z) in ext.zs().iter().enumerate() {
            if !is_diagonalizable(z).unwrap_or(false) {
                report.problems.push(format!("Z_{i} is not diagonalizable"));
                all = false;
            }
        }
        report.diagonalizable = Some(all);
    }
    report
}

fn structural_report<F: Field>(base: &[Matrix<F>], ext: &CommutingExtension<F>) -> ExtensionReport {
    let mut problems = Vec::new();
    let mut top_left_ok = base.len() == ext.len();
    if !top_left_ok {
        problems.push(format!("{} base matrices but {} extension matrices", base.len(), ext.len()));
    }
    for (i, (a, _)) in base.iter().zip(ext.zs()).enumerate() {
        if a.shape() != (ext.n(), ext.n()) || *a != ext.a(i) {
            top_left_ok = false;
            problems.push(format!("top-left block of Z_{i} differs from A_{i}"));
        }
    }
    let mut commuting = true;
    for i in 0..ext.len() {
        for j in i + 1..ext.len() {
            if !ext.z(i).commutator(ext.z(j)).is_ok_and(|c| c.is_zero()) {
                commuting = false;
                problems.push(format!("Z_{i} and Z_{j} do not commute"));
            }
        }
    }
    ExtensionReport {
        top_left_ok,
        commuting,
        diagonalizable: None,
        problems,
    }
}

/// `Z -> diag(I, M)^{-1} Z diag(I, M)` applied to every matrix.
pub fn gauge_apply<F: Field>(ext: &CommutingExtension<F>, gauge: &GaugeMatrix<F>) -> Result<CommutingExtension<F>> {
    if gauge.size() != ext.excess() {
        return Err(Error::dims(format!(
            "gauge of size {} for an extension with r - n = {}",
            gauge.size(),
            ext.excess()
        )));
    }
    let zs = (0..ext.len())
        .map(|i| {
            Matrix::from_blocks(
                &ext.a(i),
                &(&ext.b(i) * &gauge.m),
                &(&gauge.inverse * &ext.c(i)),
                &(&(&gauge.inverse * &ext.d(i)) * &gauge.m),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    CommutingExtension::new(ext.n(), ext.r(), zs)
}

/// Matrix of the linear map `X -> P X Q` on row-major `vec(X)`.
fn sandwich<F: Field>(p: &Matrix<F>, q: &Matrix<F>) -> Matrix<F> {
    let (x_rows, x_cols) = (p.cols(), q.rows());
    Matrix::from_fn(p.rows() * q.cols(), x_rows * x_cols, |row, col| {
        let (a, b) = (row / q.cols(), row % q.cols());
        let (c, d) = (col / x_cols, col % x_cols);
        p.get(a, c).clone() * q.get(d, b).clone()
    })
}

fn flatten<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    Matrix::column_vector(m.entries())
}

fn unflatten<F: Field>(v: &[F], rows: usize, cols: usize) -> Matrix<F> {
    Matrix::new(rows, cols, v.to_vec()).expect("length rows * cols")
}

/// A gauge `M` with `gauge_apply(ext1, M) = ext2`, if one exists.
///
/// `B M = B'`, `C = M C'` and `D M = M D'` are linear in `M`; the system is
/// solved exactly and candidate solutions are checked for invertibility
/// and against every block.
pub fn gauge_equivalent<F: Field>(
    ext1: &CommutingExtension<F>,
    ext2: &CommutingExtension<F>,
) -> Option<GaugeMatrix<F>> {
    if ext1.n() != ext2.n() || ext1.r() != ext2.r() || ext1.len() != ext2.len() {
        return None;
    }
    if (0..ext1.len()).any(|i| ext1.a(i) != ext2.a(i)) {
        return None;
    }
    let s = ext1.excess();
    let check = |m: Matrix<F>| -> Option<GaugeMatrix<F>> {
        let gauge = GaugeMatrix::new(m).ok()?;
        (gauge_apply(ext1, &gauge).ok()? == *ext2).then_some(gauge)
    };
    if s == 0 {
        return check(Matrix::identity(0));
    }

    let identity = Matrix::<F>::identity(s);
    let mut blocks = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..ext1.len() {
        // B1 M = B2
        blocks.push(sandwich(&ext1.b(i), &identity));
        rhs.push(flatten(&ext2.b(i)));
        // M C2 = C1
        blocks.push(sandwich(&identity, &ext2.c(i)));
        rhs.push(flatten(&ext1.c(i)));
        // D1 M - M D2 = 0
        blocks.push(&sandwich(&ext1.d(i), &identity) - &sandwich(&identity, &ext2.d(i)));
        rhs.push(Matrix::zeros(s * s, 1));
    }
    let lhs = Matrix::vstack(&blocks.iter().collect::<Vec<_>>()).ok()?;
    let rhs = Matrix::vstack(&rhs.iter().collect::<Vec<_>>()).ok()?;
    match solve(&lhs, &rhs).ok()? {
        Solution::Inconsistent => None,
        Solution::Unique(x) => check(unflatten(&x.column(0), s, s)),
        Solution::Underdetermined { particular, kernel } => {
            // The solution set is an affine space; a nonzero polynomial
            // (the determinant) cannot vanish on all of these points.
            let base = particular.column(0);
            let directions = kernel.basis_vectors();
            let probes = s * directions.len() + 1;
            (0..=probes).find_map(|t| {
                let step = F::from_i64(t as i64);
                let mut x = base.clone();
                let mut weight = F::one();
                for dir in &directions {
                    weight = weight * step.clone();
                    for (xi, di) in x.iter_mut().zip(dir) {
                        *xi = xi.clone() + weight.clone() * di.clone();
                    }
                }
                check(unflatten(&x, s, s))
            })
        }
    }
}

/// Which span element normalises the planted extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseTransform<F> {
    /// `T_1`; the extension of `T_1` is then `I_r`.
    FirstSlice,
    /// `sum_k lambda_k T_k`.
    Combination(Vec<F>),
}

/// The diagonalisable commuting extension of `(A^{-1} T_1, ..., A^{-1} T_p)`
/// read off a known decomposition, where `A` is chosen by `transform`.
///
/// After rescaling so that `U^T V = I_n`, `V` is completed to an invertible
/// `V' = [V | B]` with `Im B = ker U^T`; then `U'^T = V'^{-1}` and
/// `Z_k = U'^T D_k V'`.
pub fn planted_extension<F: Field>(
    d: &Decomposition<F>,
    transform: &BaseTransform<F>,
) -> Result<CommutingExtension<F>> {
    let (m, n, p) = d.format();
    if m != n {
        return Err(Error::Unsupported("planted extension needs square slices".into()));
    }
    let r = d.len();
    if r < n {
        return Err(Error::NormalizationFailure(format!("{r} terms cannot span size {n}")));
    }
    let lambda: Vec<F> = match transform {
        BaseTransform::FirstSlice => {
            let mut e = vec![F::zero(); p];
            if p > 0 {
                e[0] = F::one();
            }
            e
        }
        BaseTransform::Combination(l) if l.len() == p => l.clone(),
        BaseTransform::Combination(l) => {
            return Err(Error::dims(format!("{} coefficients for {p} slices", l.len())))
        }
    };
    // w_i . lambda, the diagonal of D_A
    let scales: Vec<F> = d
        .terms()
        .iter()
        .map(|t| t.w.iter().zip(&lambda).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
        .collect();
    if let Some(i) = scales.iter().position(Zero::is_zero) {
        return Err(Error::NormalizationFailure(format!(
            "term {i} vanishes on the normalising combination"
        )));
    }
    let u = d.u_matrix();
    let v = d.v_matrix();
    let a = &(&u.transpose() * &Matrix::diag(&scales)) * &v;
    let a_inv = inverse(&a)
        .map_err(|_| Error::NormalizationFailure("normalising span element is singular".into()))?;
    // U~^T = A^{-1} U^T D_A, so U~^T V = I_n.
    let ut = &(&a_inv * &u.transpose()) * &Matrix::diag(&scales);
    let completion = kernel(&ut);
    let v_full = Matrix::hstack(&[&v, completion.basis()])?;
    let ut_full = inverse(&v_full).map_err(|_| Error::NormalizationFailure("completed V is singular".into()))?;
    let zs = (0..p)
        .map(|k| {
            let diag: Vec<F> = d
                .terms()
                .iter()
                .zip(&scales)
                .map(|(t, sc)| t.w[k].clone() / sc.clone())
                .collect();
            &(&ut_full * &Matrix::diag(&diag)) * &v_full
        })
        .collect();
    CommutingExtension::new(n, r, zs)
}

/// Recovers the size-`r` commuting extension of `As` from commutator
/// images.
///
/// With `s = r - n` and `[A_i, A_j] = B_j C_i - B_i C_j`:
/// `Im B_k` and `Row C_k` are intersections of commutator images (row
/// spaces); `B_0` is fixed to the canonical basis of `Im B_0`, which pins
/// the gauge; splitting `[A_0, A_j]` along `Im B_0 + Im B_j` gives `C_j`
/// and `B_j C_0`; the remaining pairs determine the unknown change of basis
/// of `C_0` linearly; finally all `D_i` solve one linear system and the
/// quadratic blocks are checked.
pub fn compute_extension<F: RootField>(a_list: &[Matrix<F>], r: usize) -> Result<CommutingExtension<F>> {
    let Some(first) = a_list.first() else {
        return Err(Error::InvalidInput("empty matrix tuple".into()));
    };
    let n = first.rows();
    if a_list.iter().any(|a| a.shape() != (n, n)) {
        return Err(Error::dims("extension input must be square matrices of one size"));
    }
    if r < n {
        return Err(Error::InvalidInput(format!("extension size {r} below base size {n}")));
    }
    if r == n {
        return trivial_extension(a_list);
    }
    let s = r - n;
    let q = a_list.len();

    let report = hypothesis_check(a_list, r)?;
    if let Some((&(k, l), &dim)) = report.pair_dims.iter().find(|(_, &dim)| dim > 2 * s) {
        return Err(Error::InconsistentSystem(format!(
            "rank of [A_{k}, A_{l}] is {dim} > 2(r - n) = {}, so no extension of size {r} exists",
            2 * s
        )));
    }
    if let Some((&(k, l, m), &dim)) = report.triple_dims.iter().find(|(_, &dim)| dim > 3 * s) {
        return Err(Error::InconsistentSystem(format!(
            "dim(Im[A_{k}, A_{l}] + Im[A_{k}, A_{m}]) is {dim} > 3(r - n) = {}, so no extension of size {r} exists",
            3 * s
        )));
    }
    if let Some(reason) = report.chain_failure() {
        return Err(Error::HypothesisViolated(reason));
    }

    let commutators: Vec<Vec<Option<Matrix<F>>>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| (i != j).then(|| a_list[i].commutator(&a_list[j]).expect("same shape")))
                .collect()
        })
        .collect();
    let comm = |i: usize, j: usize| commutators[i][j].as_ref().expect("distinct indices");
    let images = commutator_images(a_list)?;
    let image_of = |i: usize, j: usize| &images[&(i.min(j), i.max(j))];

    // Im B_k and Row C_k from a satisfied triple through k.
    let mut b_spaces = Vec::with_capacity(q);
    let mut c_spaces = Vec::with_capacity(q);
    for k in 0..q {
        let (x, y, z) = report
            .triple_containing(k)
            .ok_or_else(|| Error::HypothesisViolated(format!("no satisfied triple contains index {k}")))?;
        let others: Vec<usize> = [x, y, z].into_iter().filter(|&t| t != k).collect();
        let (l, m) = (others[0], others[1]);
        let b_space = image_of(k, l).intersect(image_of(k, m))?;
        let c_space = row_space(comm(k, l)).intersect(&row_space(comm(k, m)))?;
        for (name, space) in [("Im B", &b_space), ("Row C", &c_space)] {
            if space.dim() != s {
                return Err(Error::HypothesisViolated(format!(
                    "{name}_{k} has dimension {} instead of r - n = {s}",
                    space.dim()
                )));
            }
        }
        b_spaces.push(b_space);
        c_spaces.push(c_space);
    }

    let b0 = b_spaces[0].basis().clone();
    let q0 = c_spaces[0].basis().transpose();
    let q0_right = right_inverse(&q0)?;

    // Split [A_0, A_j] = B_j C_0 - B_0 C_j.
    let mut cs: Vec<Option<Matrix<F>>> = vec![None; q];
    let mut ns: Vec<Option<Matrix<F>>> = vec![None; q];
    for j in 1..q {
        let bj = b_spaces[j].basis();
        let joint = Matrix::hstack(&[&b0, bj])?;
        let coords = left_inverse(&joint).map_err(|_| {
            Error::HypothesisViolated(format!("Im B_0 and Im B_{j} are not independent"))
        })?;
        let x = comm(0, j);
        let split = &coords * x;
        if &joint * &split != *x {
            return Err(Error::InconsistentSystem(format!(
                "[A_0, A_{j}] leaves Im B_0 + Im B_{j}"
            )));
        }
        let along_b0 = split.submatrix(0, 0, s, n);
        let along_bj = split.submatrix(s, 0, s, n);
        cs[j] = Some(-&along_b0);
        let mj = bj * &along_bj;
        let nj = &mj * &q0_right;
        if &nj * &q0 != mj {
            return Err(Error::InconsistentSystem(format!(
                "B_{j} C_0 leaves the row space of C_0"
            )));
        }
        ns[j] = Some(nj);
    }

    // [A_j, A_k] = N_k W C_j - N_j W C_k, linear in W.
    let mut blocks = Vec::new();
    let mut rhs = Vec::new();
    for j in 1..q {
        for k in j + 1..q {
            let (nj, nk) = (ns[j].as_ref().unwrap(), ns[k].as_ref().unwrap());
            let (cj, ck) = (cs[j].as_ref().unwrap(), cs[k].as_ref().unwrap());
            blocks.push(&sandwich(nk, cj) - &sandwich(nj, ck));
            rhs.push(flatten(comm(j, k)));
        }
    }
    let lhs = Matrix::vstack(&blocks.iter().collect::<Vec<_>>())?;
    let rhs = Matrix::vstack(&rhs.iter().collect::<Vec<_>>())?;
    let w = match solve(&lhs, &rhs)? {
        Solution::Unique(x) => unflatten(&x.column(0), s, s),
        Solution::Underdetermined { kernel, .. } => {
            return Err(Error::DegenerateInput(format!(
                "the change of basis of C_0 is not determined ({} free parameters)",
                kernel.dim()
            )))
        }
        Solution::Inconsistent => {
            return Err(Error::InconsistentSystem(
                "commutators of the remaining pairs are incompatible".into(),
            ))
        }
    };
    let w_inv = inverse(&w)
        .map_err(|_| Error::InconsistentSystem("recovered change of basis is singular".into()))?;

    let mut bs = vec![b0];
    let mut cs_full = vec![&w_inv * &q0];
    for j in 1..q {
        bs.push(ns[j].as_ref().unwrap() * &w);
        cs_full.push(cs[j].take().unwrap());
    }

    let ds = recover_d_blocks(a_list, &bs, &cs_full)?;
    let zs = (0..q)
        .map(|i| Matrix::from_blocks(&a_list[i], &bs[i], &cs_full[i], &ds[i]))
        .collect::<Result<Vec<_>>>()?;
    let ext = CommutingExtension::new(n, r, zs)?;
    let report = structural_report(a_list, &ext);
    if !(report.top_left_ok && report.commuting) {
        return Err(Error::VerificationFailed(report.problems.join("; ")));
    }
    Ok(ext)
}

fn trivial_extension<F: RootField>(a_list: &[Matrix<F>]) -> Result<CommutingExtension<F>> {
    let n = a_list[0].rows();
    for i in 0..a_list.len() {
        for j in i + 1..a_list.len() {
            if !a_list[i].commutator(&a_list[j])?.is_zero() {
                return Err(Error::InconsistentSystem(format!(
                    "A_{i} and A_{j} do not commute, so no extension of size {n} exists"
                )));
            }
        }
    }
    for (i, a) in a_list.iter().enumerate() {
        if !is_diagonalizable(a)? {
            return Err(Error::HypothesisViolated(format!("A_{i} is not diagonalizable")));
        }
    }
    CommutingExtension::new(n, n, a_list.to_vec())
}

/// Solves, for all `i < j`,
/// `B_i D_j - B_j D_i = A_j B_i - A_i B_j` and
/// `D_i C_j - D_j C_i = C_j A_i - C_i A_j`, then checks
/// `C_i B_j + D_i D_j = C_j B_i + D_j D_i`.
fn recover_d_blocks<F: Field>(a_list: &[Matrix<F>], bs: &[Matrix<F>], cs: &[Matrix<F>]) -> Result<Vec<Matrix<F>>> {
    let q = a_list.len();
    let n = a_list[0].rows();
    let s = bs[0].cols();
    let block = s * s;
    let id_s = Matrix::<F>::identity(s);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..q {
        for j in i + 1..q {
            // top right: n x s equations
            let mut eq = Matrix::zeros(n * s, q * block);
            eq.set_block(0, j * block, &sandwich(&bs[i], &id_s));
            eq.set_block(0, i * block, &-&sandwich(&bs[j], &id_s));
            rows.push(eq);
            rhs.push(flatten(&(&(&a_list[j] * &bs[i]) - &(&a_list[i] * &bs[j]))));
            // bottom left: s x n equations
            let mut eq = Matrix::zeros(s * n, q * block);
            eq.set_block(0, i * block, &sandwich(&id_s, &cs[j]));
            eq.set_block(0, j * block, &-&sandwich(&id_s, &cs[i]));
            rows.push(eq);
            rhs.push(flatten(&(&(&cs[j] * &a_list[i]) - &(&cs[i] * &a_list[j]))));
        }
    }
    let lhs = Matrix::vstack(&rows.iter().collect::<Vec<_>>())?;
    let rhs = Matrix::vstack(&rhs.iter().collect::<Vec<_>>())?;
    let x = match solve(&lhs, &rhs)? {
        Solution::Unique(x) => x.column(0),
        Solution::Underdetermined { kernel, .. } => {
            return Err(Error::DegenerateInput(format!(
                "bottom-right blocks are not determined ({} free parameters)",
                kernel.dim()
            )))
        }
        Solution::Inconsistent => {
            return Err(Error::InconsistentSystem(
                "no bottom-right blocks satisfy the off-diagonal commutation equations".into(),
            ))
        }
    };
    let ds: Vec<Matrix<F>> = (0..q)
        .map(|i| unflatten(&x[i * block..(i + 1) * block], s, s))
        .collect();
    for i in 0..q {
        for j in i + 1..q {
            let lhs = &(&cs[i] * &bs[j]) + &(&ds[i] * &ds[j]);
            let rhs = &(&cs[j] * &bs[i]) + &(&ds[j] * &ds[i]);
            if lhs != rhs {
                return Err(Error::InconsistentSystem(format!(
                    "bottom-right block of [Z_{i}, Z_{j}] does not vanish"
                )));
            }
        }
    }
    Ok(ds)
}

/// `Z_i = [[A_i, -A_i], [A_i, -A_i]]`: a nilpotent commuting extension of
/// size `2n` of any tuple.
pub fn doubling_extension<F: Field>(a_list: &[Matrix<F>]) -> Result<CommutingExtension<F>> {
    let n = a_list.first().map_or(0, Matrix::rows);
    let zs = a_list
        .iter()
        .map(|a| {
            let neg = -a;
            Matrix::from_blocks(a, &neg, a, &neg)
        })
        .collect::<Result<Vec<_>>>()?;
    CommutingExtension::new(n, 2 * n, zs)
}
