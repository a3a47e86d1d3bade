//! Exact decomposition of overcomplete order-3 tensors.
//!
//! A square `n x n x p` tensor of rank `n <= r <= 4n/3` is decomposed by
//! lifting the matrices `T_1^{-1} T_k` to a commuting tuple of size `r` and
//! diagonalising it simultaneously. All arithmetic is exact; the algorithms
//! are generic over [`Field`] and shipped for [`Rational`].

pub mod bounds;
pub mod decomposer;
pub mod error;
pub mod extension;
pub mod field;
pub mod instances;
mod integer;
pub mod json;
pub mod linalg;
pub mod random;
pub mod roots;
pub mod spectral;
pub mod tensor;

pub use bounds::{
    find_invertible_span_element, hypothesis_check, rank_equals_n_test, strassen_bound, strassen_bound_4slice,
    FourSliceBound, HypothesisReport, SpanElement, StrassenBound,
};
pub use decomposer::{
    decompose, decompose_invertible_first, decompose_invertible_first_with_budget, decompose_scan,
    decompose_with_budget, essentially_equal, jennrich_decompose, jennrich_decompose_with_budget, DecompositionResult,
    Matching, RandomDraw, Stage,
};
pub use error::{Error, Result};
pub use extension::{
    compute_extension, doubling_extension, gauge_apply, gauge_equivalent, planted_extension, verify_extension,
    BaseTransform, CommutingExtension, ExtensionReport, GaugeMatrix,
};
pub use field::{format_rational, parse_rational, Field, Rational, RootField};
pub use instances::{
    generate_conjugated, generate_generic_planted, generate_planted, genericity_defect, pad_hardness_gadget,
    padded_decomposition, shitov_tensor, PlantParams, PlantedInstance, DEFAULT_COEFF_BOUND,
};
pub use linalg::{Matrix, Solution, Subspace};
pub use random::{seeded, SeededRng, DEFAULT_RETRY_BUDGET};
pub use roots::rational_roots;
pub use spectral::{char_poly, eigen, is_diagonalizable, simultaneous_diag_check, Spectrum};
pub use tensor::{assemble, tensors_equal, Decomposition, RankOneTerm, Tensor3};

pub type RationalMatrix = Matrix<Rational>;
pub type RationalSubspace = Subspace<Rational>;
pub type RationalTensor = Tensor3<Rational>;
pub type RationalTerm = RankOneTerm<Rational>;
pub type RationalDecomposition = Decomposition<Rational>;
pub type RationalSpectrum = Spectrum<Rational>;
pub type RationalExtension = CommutingExtension<Rational>;

/// Eigenpairs of a rational matrix for its rational eigenvalues.
pub fn eigen_rational(m: &RationalMatrix) -> Result<RationalSpectrum> {
    eigen(m)
}
