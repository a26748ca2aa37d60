//! Exact linear algebra over Q and over the dual numbers.

mod dense;
mod elim;
mod matrix;
mod rat;
mod scalar;

pub use dense::DMat;
pub use elim::{
    check_complex, cohomology, cohomology_dim, image, in_span, inverse, kernel, rank, solve, solve_matrix, Cohomology,
    Echelon, LinAlgError, Quotient, Rref,
};
pub use matrix::{RatMatrix, RowIter, DEFAULT_DENSITY_THRESHOLD};
pub use rat::{fmt_rat, from_qstr, one, parse_rat, rat, ratio, to_qstr, zero, ParseRatError, QStr, Rat};
pub use scalar::{flatten, join_dual, split_dual, unflatten, Dual, Scalar};
