use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use super::{tensor_over, FinAlgebra, FinModule};
use crate::exactla::{rank, solve, DMat, Rat, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlatEpiReport {
    /// `B ⊗_A B -> B` is bijective.
    pub epimorphism: bool,
    pub tensor_dim: usize,
    pub target_dim: usize,
    /// `B` is projective as a left `A`-module, so `- ⊗_A B` is exact.
    pub flat: bool,
}

/// Decides whether `f: A -> B` is an epimorphism of rings and whether `B`
/// is flat as a left `A`-module.
pub fn check_flat_epimorphism(a: &Arc<FinAlgebra<Rat>>, b: &Arc<FinAlgebra<Rat>>, f: &DMat<Rat>) -> FlatEpiReport {
    let (da, db) = (a.dim(), b.dim());
    let imgs: Vec<Vec<Rat>> = (0..da).map(|j| f.column(j)).collect();

    // B as a right A-module, then B ⊗_A B.
    let b_a = FinModule::new(a.clone(), db, imgs.iter().map(|x| b.right_mult_q(x)).collect())
        .expect("restriction of scalars is a module");
    let t = tensor_over(&b_a, f, b);
    let mut mu = Vec::new();
    for i in 0..db {
        for k in 0..db {
            for (l, c) in b.product(i, k).iter().enumerate() {
                if !c.is_zero() {
                    mu.push((l, i * db + k, c.clone()));
                }
            }
        }
    }
    let mu = RatMatrix::from_triplets(db, db * db, mu).mul(t.section());
    let epimorphism = t.dim() == db && rank(&mu) == db;

    // Splitting of π: A^n -> B, (x_l) ↦ Σ f(x_l) b_l, as left A-modules.
    let n = db;
    let big = n * da;
    let mut pi = Vec::new();
    for l in 0..n {
        for j in 0..da {
            for (r, c) in b.mul(&imgs[j], &b.basis(l)).into_iter().enumerate() {
                if !c.is_zero() {
                    pi.push((r, l * da + j, c));
                }
            }
        }
    }
    let pi = RatMatrix::from_triplets(db, big, pi);
    // unknown S (big x db), column-major vec
    let mut blocks: Vec<RatMatrix> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for j in 0..da {
        let lf = b.left_mult_q(&imgs[j]);
        let la = RatMatrix::block_diag(&vec![a.left_mult_q(&a.basis(j)); n]);
        // S lf - la S = 0
        blocks.push(lf.transpose().kron(&RatMatrix::identity(big)).sub(&RatMatrix::identity(db).kron(&la)));
        rhs.extend(std::iter::repeat_n(Rat::zero(), big * db));
    }
    // π S = I
    blocks.push(RatMatrix::identity(db).kron(&pi));
    for c in 0..db {
        for r in 0..db {
            rhs.push(if r == c { Rat::from_integer(1.into()) } else { Rat::zero() });
        }
    }
    let sys = blocks.iter().skip(1).fold(blocks[0].clone(), |acc, m| acc.vstack(m));
    let flat = solve(&sys, &rhs).is_some();

    FlatEpiReport { epimorphism, tensor_dim: t.dim(), target_dim: db, flat }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;

    #[test]
    fn identity_is_flat_epi() {
        let a = Arc::new(FinAlgebra::dual_numbers());
        let r = check_flat_epimorphism(&a, &a, &DMat::identity(2));
        assert!(r.epimorphism && r.flat);
    }

    #[test]
    fn augmentation_is_epi_not_flat() {
        let a = Arc::new(FinAlgebra::dual_numbers());
        let q = Arc::new(FinAlgebra::rationals());
        let r = check_flat_epimorphism(&a, &q, &DMat::from_rows(vec![vec![rat(1), rat(0)]]));
        assert!(r.epimorphism);
        assert!(!r.flat);
    }

    #[test]
    fn diagonal_is_not_epi() {
        let q = Arc::new(FinAlgebra::rationals());
        let qq = Arc::new(FinAlgebra::product_of(&[FinAlgebra::rationals(), FinAlgebra::rationals()]));
        let diag = DMat::from_columns(2, &[qq.unit().to_vec()]);
        let r = check_flat_epimorphism(&q, &qq, &diag);
        assert!(!r.epimorphism);
        assert_eq!(r.tensor_dim, 4);
        assert!(r.flat);
    }

    #[test]
    fn projection_from_product_is_flat_epi() {
        let qq = Arc::new(FinAlgebra::product_of(&[FinAlgebra::rationals(), FinAlgebra::rationals()]));
        let q = Arc::new(FinAlgebra::rationals());
        // basis of Q x Q is (1, e) with e = (0, 1); project to the first factor
        let p = DMat::from_rows(vec![vec![rat(1), rat(0)]]);
        assert!(crate::algebra::check_hom(&qq, &q, &p).is_none());
        let r = check_flat_epimorphism(&qq, &q, &p);
        assert!(r.epimorphism && r.flat);
    }
}
