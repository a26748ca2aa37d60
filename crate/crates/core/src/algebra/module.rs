use std::sync::Arc;

use num_traits::Zero;

use super::{AlgebraError, FinAlgebra};
use crate::exactla::{kernel, DMat, Quotient, Rat, RatMatrix};

/// A right module: `m · e_j = action[j] m` on coordinate columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinModule {
    pub algebra: Arc<FinAlgebra<Rat>>,
    dim: usize,
    action: Vec<RatMatrix>,
}

impl FinModule {
    pub fn new(algebra: Arc<FinAlgebra<Rat>>, dim: usize, action: Vec<RatMatrix>) -> Result<Self, AlgebraError> {
        let m = FinModule { algebra, dim, action };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let a = &self.algebra;
        if self.action.len() != a.dim() || self.action.iter().any(|r| r.shape() != (self.dim, self.dim)) {
            return Err(AlgebraError::ModuleAxiom("action matrices have the wrong count or shape".into()));
        }
        if self.act_matrix(a.unit()) != RatMatrix::identity(self.dim) {
            return Err(AlgebraError::ModuleAxiom("the unit does not act as the identity".into()));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                // (m e_i) e_j = m (e_i e_j)
                if self.action[j].mul(&self.action[i]) != self.act_matrix(a.product(i, j)) {
                    return Err(AlgebraError::ModuleAxiom(format!(
                        "(m {}) {} != m ({} {})",
                        a.names()[i],
                        a.names()[j],
                        a.names()[i],
                        a.names()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// `A` acting on itself by right multiplication.
    pub fn free(algebra: Arc<FinAlgebra<Rat>>) -> Self {
        let action = (0..algebra.dim()).map(|j| algebra.right_mult_q(&algebra.basis(j))).collect();
        FinModule { dim: algebra.dim(), algebra, action }
    }

    pub fn zero(algebra: Arc<FinAlgebra<Rat>>) -> Self {
        let action = vec![RatMatrix::zeros(0, 0); algebra.dim()];
        FinModule { algebra, dim: 0, action }
    }

    pub fn direct_sum(parts: &[FinModule]) -> Self {
        let algebra = parts[0].algebra.clone();
        let dim = parts.iter().map(|p| p.dim).sum();
        let action = (0..algebra.dim())
            .map(|j| RatMatrix::block_diag(&parts.iter().map(|p| p.action[j].clone()).collect::<Vec<_>>()))
            .collect();
        FinModule { algebra, dim, action }
    }

    /// Same action, new coordinates: `new = P^{-1} old P`.
    pub fn conjugate(&self, p: &RatMatrix, p_inv: &RatMatrix) -> Self {
        let action = self.action.iter().map(|r| p_inv.mul(r).mul(p)).collect();
        FinModule { algebra: self.algebra.clone(), dim: self.dim, action }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[RatMatrix] {
        &self.action
    }

    /// Matrix of `m ↦ m a`.
    pub fn act_matrix(&self, a: &[Rat]) -> RatMatrix {
        let mut entries = Vec::new();
        for (j, c) in a.iter().enumerate() {
            if !c.is_zero() {
                entries.extend(self.action[j].triplets().map(|(r, s, v)| (r, s, v * c)));
            }
        }
        RatMatrix::from_triplets(self.dim, self.dim, entries)
    }

    pub fn act(&self, m: &[Rat], a: &[Rat]) -> Vec<Rat> {
        self.act_matrix(a).mul_vec(m)
    }
}

/// Basis of `Hom_A(M, N)`; each column is a column-major `dim N x dim M` matrix.
pub fn hom_space(m: &FinModule, n: &FinModule) -> RatMatrix {
    let (dm, dn) = (m.dim(), n.dim());
    let mut eqs: Option<RatMatrix> = None;
    for j in 0..m.algebra.dim() {
        // F R^M_j - R^N_j F = 0
        let e = m.action[j].transpose().kron(&RatMatrix::identity(dn)).sub(&RatMatrix::identity(dm).kron(&n.action[j]));
        eqs = Some(match eqs {
            None => e,
            Some(prev) => prev.vstack(&e),
        });
    }
    kernel(&eqs.unwrap_or_else(|| RatMatrix::zeros(0, dm * dn)))
}

pub fn is_module_map(m: &FinModule, n: &FinModule, f: &RatMatrix) -> bool {
    f.shape() == (n.dim(), m.dim()) && (0..m.algebra.dim()).all(|j| f.mul(&m.action[j]) == n.action[j].mul(f))
}

/// `M ⊗_A B` for a right `A`-module `M` and a homomorphism `f: A -> B`.
///
/// Flat coordinates of `M ⊗_Q B` put `m_i ⊗ b_k` at `i * dim B + k`.
#[derive(Debug, Clone)]
pub struct TensorProduct {
    pub module: FinModule,
    pub quotient: Quotient,
}

impl TensorProduct {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn proj(&self) -> &RatMatrix {
        &self.quotient.proj
    }

    pub fn section(&self) -> &RatMatrix {
        &self.quotient.section
    }
}

pub fn tensor_over(m: &FinModule, f: &DMat<Rat>, b: &Arc<FinAlgebra<Rat>>) -> TensorProduct {
    let a = &m.algebra;
    let (dm, da, db) = (m.dim(), a.dim(), b.dim());
    assert_eq!((f.rows(), f.cols()), (db, da), "homomorphism has the wrong shape");
    let mut entries = Vec::new();
    let mut col = 0;
    for i in 0..dm {
        for j in 0..da {
            let ma: Vec<Rat> = m.action[j].column(i);
            let fa = f.column(j);
            for k in 0..db {
                for (r, c) in ma.iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((r * db + k, col, c.clone()));
                    }
                }
                for (l, c) in b.mul(&fa, &b.basis(k)).into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i * db + l, col, -c));
                    }
                }
                col += 1;
            }
        }
    }
    let rel = RatMatrix::from_triplets(dm * db, col, entries);
    let quotient = Quotient::new(&rel);
    let id_m = RatMatrix::identity(dm);
    let action = (0..db)
        .map(|l| quotient.proj.mul(&id_m.kron(&b.right_mult_q(&b.basis(l)))).mul(&quotient.section))
        .collect();
    let module = FinModule { algebra: b.clone(), dim: quotient.dim(), action };
    debug_assert!(module.validate().is_ok());
    TensorProduct { module, quotient }
}

/// A bimodule over a single algebra: `a · m · b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinBimodule {
    dim: usize,
    left: Vec<RatMatrix>,
    right: Vec<RatMatrix>,
}

impl FinBimodule {
    pub fn new(a: &FinAlgebra<Rat>, dim: usize, left: Vec<RatMatrix>, right: Vec<RatMatrix>) -> Result<Self, AlgebraError> {
        let b = FinBimodule { dim, left, right };
        let lm = FinModule::new(Arc::new(a.opposite()), dim, b.left.clone())
            .map_err(|e| AlgebraError::ModuleAxiom(format!("left action: {e}")))?;
        let rm = FinModule::new(Arc::new(a.clone()), dim, b.right.clone())
            .map_err(|e| AlgebraError::ModuleAxiom(format!("right action: {e}")))?;
        drop((lm, rm));
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                if b.left[i].mul(&b.right[j]) != b.right[j].mul(&b.left[i]) {
                    return Err(AlgebraError::ModuleAxiom("left and right actions do not commute".into()));
                }
            }
        }
        Ok(b)
    }

    /// `A` over itself.
    pub fn regular(a: &FinAlgebra<Rat>) -> Self {
        Self::along(a, &DMat::identity(a.dim()), a)
    }

    /// `B` as an `A`-bimodule through `f: A -> B`.
    pub fn along(a: &FinAlgebra<Rat>, f: &DMat<Rat>, b: &FinAlgebra<Rat>) -> Self {
        let imgs: Vec<Vec<Rat>> = (0..a.dim()).map(|j| f.column(j)).collect();
        FinBimodule {
            dim: b.dim(),
            left: imgs.iter().map(|x| b.left_mult_q(x)).collect(),
            right: imgs.iter().map(|x| b.right_mult_q(x)).collect(),
        }
    }

    /// The same space over `A^op`: left and right swap.
    pub fn opposite(&self) -> Self {
        FinBimodule { dim: self.dim, left: self.right.clone(), right: self.left.clone() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self, j: usize) -> &RatMatrix {
        &self.left[j]
    }

    pub fn right(&self, j: usize) -> &RatMatrix {
        &self.right[j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;

    fn augmentation() -> DMat<Rat> {
        DMat::from_rows(vec![vec![rat(1), rat(0)]])
    }

    #[test]
    fn tensor_with_identity_keeps_dimension() {
        let a = Arc::new(FinAlgebra::dual_numbers());
        let m = FinModule::free(a.clone());
        let t = tensor_over(&m, &DMat::identity(2), &a);
        assert_eq!(t.dim(), 2);
    }

    #[test]
    fn free_module_base_changes_to_target() {
        let a = Arc::new(FinAlgebra::dual_numbers());
        let q = Arc::new(FinAlgebra::rationals());
        let t = tensor_over(&FinModule::free(a), &augmentation(), &q);
        assert_eq!(t.dim(), 1);
    }

    #[test]
    fn simple_module_over_dual_numbers() {
        let a = Arc::new(FinAlgebra::dual_numbers());
        let q = Arc::new(FinAlgebra::rationals());
        let k = FinModule::new(a, 1, vec![RatMatrix::identity(1), RatMatrix::zeros(1, 1)]).unwrap();
        let t = tensor_over(&k, &augmentation(), &q);
        assert_eq!(t.dim(), 1);
        assert_eq!(t.module.action()[0], RatMatrix::identity(1));
    }

    #[test]
    fn bad_module_rejected() {
        let a = Arc::new(FinAlgebra::dual_numbers());
        // x acting invertibly violates x^2 = 0
        let r = FinModule::new(a, 1, vec![RatMatrix::identity(1), RatMatrix::identity(1)]);
        assert!(r.is_err());
    }

    #[test]
    fn endomorphisms_of_free_module() {
        let a = Arc::new(FinAlgebra::upper_triangular());
        let m = FinModule::free(a.clone());
        // End_A(A_A) = A
        assert_eq!(hom_space(&m, &m).cols(), 3);
        let b = FinBimodule::regular(&a);
        assert!(FinBimodule::new(&a, 3, b.left.clone(), b.right.clone()).is_ok());
    }
}
