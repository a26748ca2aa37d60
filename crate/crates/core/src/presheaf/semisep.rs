use serde::Serialize;

use super::TwistedPresheaf;
use crate::algebra::{check_flat_epimorphism, tensor_over, FinModule, FlatEpiReport};
use crate::exactla::{rank, Rat, RatMatrix};
use crate::fincat::MeetPoset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionCheck {
    pub arrow: String,
    pub report: FlatEpiReport,
}

/// `A(V) ⊗_{A(U)} A(W)` against `A(V ∩ W)` through `a ⊗ b ↦ a|·b|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionCheck {
    pub over: String,
    pub left: String,
    pub right: String,
    pub tensor_dim: usize,
    pub meet_dim: usize,
    pub map_well_defined: bool,
    pub map_bijective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemiSeparatedReport {
    pub restrictions: Vec<RestrictionCheck>,
    pub intersections: Vec<IntersectionCheck>,
}

impl SemiSeparatedReport {
    /// Every restriction is a flat epimorphism.
    pub fn condition_i(&self) -> bool {
        self.restrictions.iter().all(|r| r.report.epimorphism && r.report.flat)
    }

    /// Dimensions agree for every pair (abstract isomorphy as vector spaces).
    pub fn dimensions_match(&self) -> bool {
        self.intersections.iter().all(|c| c.tensor_dim == c.meet_dim)
    }

    /// The specific multiplication map is a well-defined bijection everywhere.
    pub fn condition_ii(&self) -> bool {
        self.intersections.iter().all(|c| c.map_well_defined && c.map_bijective)
    }
}

pub fn check_semi_separated(t: &TwistedPresheaf<Rat>, poset: &MeetPoset) -> SemiSeparatedReport {
    let c = t.base();
    let restrictions = c
        .morphism_ids()
        .filter(|&u| !c.is_identity(u))
        .map(|u| RestrictionCheck {
            arrow: c.mor_name(u).to_string(),
            report: check_flat_epimorphism(t.algebra(c.target(u)), t.algebra(c.source(u)), t.restriction(u)),
        })
        .collect();

    let mut intersections = Vec::new();
    for u in c.objects() {
        let below: Vec<usize> = c.objects().filter(|&x| poset.leq(x, u)).collect();
        for &v in &below {
            for &w in &below {
                let m = poset.meet(v, w);
                let (au, av, aw, am) = (t.algebra(u), t.algebra(v), t.algebra(w), t.algebra(m));
                let fv = t.restriction(poset.arrow(v, u).unwrap());
                let fw = t.restriction(poset.arrow(w, u).unwrap());
                let rv = t.restriction(poset.arrow(m, v).unwrap());
                let rw = t.restriction(poset.arrow(m, w).unwrap());
                let action = (0..au.dim()).map(|j| av.right_mult_q(&fv.column(j))).collect();
                let av_u = FinModule::new(au.clone(), av.dim(), action).expect("restriction of scalars");
                let tp = tensor_over(&av_u, fw, aw);
                let mut entries = Vec::new();
                for i in 0..av.dim() {
                    let a = rv.column(i);
                    for k in 0..aw.dim() {
                        let prod = am.mul(&a, &rw.column(k));
                        for (l, x) in prod.into_iter().enumerate() {
                            entries.push((l, i * aw.dim() + k, x));
                        }
                    }
                }
                let mu = RatMatrix::from_triplets(am.dim(), av.dim() * aw.dim(), entries);
                let induced = mu.mul(tp.section());
                let map_well_defined = induced.mul(tp.proj()) == mu;
                let map_bijective = map_well_defined && tp.dim() == am.dim() && rank(&induced) == am.dim();
                intersections.push(IntersectionCheck {
                    over: c.obj_name(u).into(),
                    left: c.obj_name(v).into(),
                    right: c.obj_name(w).into(),
                    tensor_dim: tp.dim(),
                    meet_dim: am.dim(),
                    map_well_defined,
                    map_bijective,
                });
            }
        }
    }
    SemiSeparatedReport { restrictions, intersections }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::FinAlgebra;
    use crate::exactla::{rat, DMat};
    use crate::fincat::FiniteCategory;
    use crate::presheaf::Presheaf;

    #[test]
    fn two_point_space_is_semi_separated() {
        // functions on {p, q} over the cover {p}, {q} plus the whole space:
        // A(X) = Q x Q, A({p}) = A({q}) = Q, A(∅) = 0 is avoided by meets in X
        let c = Arc::new(FiniteCategory::poset(&["X", "P"], &[("P", "X")]).unwrap());
        let qq = Arc::new(FinAlgebra::product_of(&[FinAlgebra::rationals(), FinAlgebra::rationals()]));
        let q = Arc::new(FinAlgebra::rationals());
        let algs = vec![q.clone(), qq.clone()];
        let res = c
            .morphism_ids()
            .map(|u| if c.is_identity(u) { DMat::identity(algs[c.source(u)].dim()) } else { DMat::from_rows(vec![vec![rat(1), rat(0)]]) })
            .collect();
        let p = Presheaf::new(c.clone(), algs, res).unwrap();
        let poset = MeetPoset::new(c).unwrap();
        let r = check_semi_separated(&p, &poset);
        assert!(r.condition_i());
        assert!(r.condition_ii());
    }

    #[test]
    fn dual_numbers_fail_flatness() {
        let p = crate::presheaf::tests::v_dual();
        let poset = MeetPoset::new(p.base().clone()).unwrap();
        let r = check_semi_separated(&p, &poset);
        assert!(!r.condition_i());
        assert!(r.dimensions_match());
    }
}
