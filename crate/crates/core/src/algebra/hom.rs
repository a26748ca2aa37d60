use std::fmt;
use std::sync::Arc;

use super::{AlgebraError, FinAlgebra};
use crate::exactla::{DMat, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomFailure {
    Shape { rows: usize, cols: usize },
    Unit,
    /// `f(e_i e_j) != f(e_i) f(e_j)`.
    Multiplicative(usize, usize),
}

impl fmt::Display for HomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomFailure::Shape { rows, cols } => write!(f, "matrix has shape {rows}x{cols}"),
            HomFailure::Unit => write!(f, "f(1) != 1"),
            HomFailure::Multiplicative(i, j) => write!(f, "f(e{i} e{j}) != f(e{i}) f(e{j})"),
        }
    }
}

/// First failure of the unital homomorphism axioms, if any.
pub fn check_hom<S: Scalar>(src: &FinAlgebra<S>, tgt: &FinAlgebra<S>, m: &DMat<S>) -> Option<HomFailure> {
    if m.rows() != tgt.dim() || m.cols() != src.dim() {
        return Some(HomFailure::Shape { rows: m.rows(), cols: m.cols() });
    }
    if m.mul_vec(src.unit()) != tgt.unit() {
        return Some(HomFailure::Unit);
    }
    let images: Vec<Vec<S>> = (0..src.dim()).map(|i| m.column(i)).collect();
    for i in 0..src.dim() {
        for j in 0..src.dim() {
            if m.mul_vec(src.product(i, j)) != tgt.mul(&images[i], &images[j]) {
                return Some(HomFailure::Multiplicative(i, j));
            }
        }
    }
    None
}

/// A unital algebra homomorphism, `matrix` acting on coordinate columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraHom<S> {
    pub source: Arc<FinAlgebra<S>>,
    pub target: Arc<FinAlgebra<S>>,
    pub matrix: DMat<S>,
}

impl<S: Scalar> AlgebraHom<S> {
    pub fn new(source: Arc<FinAlgebra<S>>, target: Arc<FinAlgebra<S>>, matrix: DMat<S>) -> Result<Self, AlgebraError> {
        if let Some(f) = check_hom(&source, &target, &matrix) {
            return Err(AlgebraError::NotAHom(f.to_string()));
        }
        Ok(AlgebraHom { source, target, matrix })
    }

    pub fn identity(a: Arc<FinAlgebra<S>>) -> Self {
        let m = DMat::identity(a.dim());
        AlgebraHom { source: a.clone(), target: a, matrix: m }
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &AlgebraHom<S>) -> Self {
        assert_eq!(first.target, self.source, "homomorphisms not composable");
        AlgebraHom { source: first.source.clone(), target: self.target.clone(), matrix: self.matrix.mul(&first.matrix) }
    }

    /// `f^op: A^op -> B^op`, the same linear map.
    pub fn opposite(&self) -> Self {
        AlgebraHom {
            source: Arc::new(self.source.opposite()),
            target: Arc::new(self.target.opposite()),
            matrix: self.matrix.clone(),
        }
    }
}
