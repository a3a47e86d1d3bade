//! Exact dense linear algebra.

mod elim;
mod matrix;
mod subspace;

pub use elim::{
    image, inverse, is_invertible, kernel, left_inverse, rank, right_inverse, row_space, rref,
    solve, solve_vector, Solution,
};
pub use matrix::{dot, is_zero_vector, Matrix};
pub(crate) use elim::gauss_jordan;
pub(crate) use matrix::schoolbook_product;
pub use subspace::{intersect, subspace_equal, sum_subspace, Subspace};
