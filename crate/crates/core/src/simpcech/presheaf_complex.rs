use std::sync::Arc;

use serde::Serialize;

use super::{ModPresheaf, SimpCechError};
use crate::exactla::{rank, Rat, RatMatrix};
use crate::fincat::{FiniteCategory, ObjId, SliceCategory, Simplex};
use crate::hochschild::sign;
use crate::presheaf::TwistedPresheaf;

/// `A^0 -> A^1 -> ...` with `A^n(U) = ∏_{σ ∈ N_n(U/U)} A(dσ)` and the
/// augmentation `ε: A -> A^0`.
#[derive(Debug, Clone)]
pub struct PresheafComplex {
    pub slices: Vec<SliceCategory>,
    /// `A^0, ..., A^{n_max + 1}`.
    pub levels: Vec<ModPresheaf>,
    /// `phi[n][U]: A^n(U) -> A^{n+1}(U)`.
    pub phi: Vec<Vec<RatMatrix>>,
    /// `epsilon[U]: A(U) -> A^0(U)`.
    pub epsilon: Vec<RatMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresheafComplexCheck {
    pub squares_to_zero: bool,
    /// Every `φ^n` commutes with the restrictions `ρ^{n,u}`.
    pub natural: bool,
    /// `(dim ker φ^{0,U}, dim A(U))` per object.
    pub kernel_dims: Vec<(usize, usize)>,
    pub epsilon_injective: bool,
    pub epsilon_onto_kernel: bool,
}

impl PresheafComplexCheck {
    pub fn passed(&self) -> bool {
        self.squares_to_zero
            && self.natural
            && self.epsilon_injective
            && self.epsilon_onto_kernel
            && self.kernel_dims.iter().all(|(k, a)| k == a)
    }
}

fn base_object(c: &FiniteCategory, sl: &SliceCategory, s: &Simplex) -> ObjId {
    sl.base_object(c, s.start)
}

fn layout(c: &FiniteCategory, a: &TwistedPresheaf<Rat>, sl: &SliceCategory, n: usize) -> (Vec<usize>, usize) {
    let mut offsets = Vec::new();
    let mut total = 0;
    for s in sl.category.nerve(n).iter() {
        offsets.push(total);
        total += a.algebra(base_object(c, sl, s)).dim();
    }
    (offsets, total)
}

/// `uσ` for `u: V -> U` and `σ` in the nerve of `V/V`.
fn push_forward(c: &FiniteCategory, u: usize, from: &SliceCategory, to: &SliceCategory, s: &Simplex) -> Simplex {
    let start = to.object_for(c.compose(u, from.arrow_of(s.start))).expect("composite lies over U");
    let arrows = s
        .arrows
        .iter()
        .map(|&m| {
            let v = from.arrow_of(from.category.target(m));
            to.morphism_for(from.base_arrow(m), c.compose(u, v)).expect("slice morphism exists")
        })
        .collect();
    Simplex { start, arrows }
}

/// Builds `A^0, ..., A^{n_max + 1}` with `φ^0, ..., φ^{n_max}` and `ε`.
pub fn presheaf_complex(a: &TwistedPresheaf<Rat>, n_max: usize) -> Result<PresheafComplex, SimpCechError> {
    let c: Arc<FiniteCategory> = a.base().clone();
    let slices: Vec<SliceCategory> = c.objects().map(|o| SliceCategory::new(&c, o)).collect();

    let mut levels = Vec::new();
    for n in 0..=n_max + 1 {
        let dims = c.objects().map(|o| layout(&c, a, &slices[o], n).1).collect();
        let mut maps = Vec::new();
        for u in c.morphism_ids() {
            let (v_obj, u_obj) = (c.source(u), c.target(u));
            let (from, to) = (&slices[v_obj], &slices[u_obj]);
            let (src_off, src_total) = layout(&c, a, to, n);
            let (tgt_off, tgt_total) = layout(&c, a, from, n);
            let to_nerve = to.category.nerve(n);
            let mut entries = Vec::new();
            for (k, s) in from.category.nerve(n).iter().enumerate() {
                let image = push_forward(&c, u, from, to, s);
                let j = to_nerve.position(&image).expect("pushed simplex lies in the nerve");
                for x in 0..a.algebra(base_object(&c, from, s)).dim() {
                    entries.push((tgt_off[k] + x, src_off[j] + x, Rat::from_integer(1.into())));
                }
            }
            maps.push(RatMatrix::from_triplets(tgt_total, src_total, entries));
        }
        levels.push(ModPresheaf::new(c.clone(), dims, maps)?);
    }

    let mut phi = Vec::new();
    for n in 0..=n_max {
        let per_object = c
            .objects()
            .map(|o| {
                let sl = &slices[o];
                let (src_off, src_total) = layout(&c, a, sl, n);
                let (tgt_off, tgt_total) = layout(&c, a, sl, n + 1);
                let lo = sl.category.nerve(n);
                let mut entries = Vec::new();
                for (k, s) in sl.category.nerve(n + 1).iter().enumerate() {
                    let dim = a.algebra(base_object(&c, sl, s)).dim();
                    for i in 0..=n + 1 {
                        let face = sl.category.face(s, i).expect("face in range");
                        let j = lo.position(&face).expect("face lies in the nerve");
                        if i == 0 {
                            let f = a.restriction(sl.base_arrow(s.arrows[0])).to_sparse();
                            for (r, cc, v) in f.triplets() {
                                entries.push((tgt_off[k] + r, src_off[j] + cc, v.clone()));
                            }
                        } else {
                            let sg = sign(i);
                            for x in 0..dim {
                                entries.push((tgt_off[k] + x, src_off[j] + x, sg.clone()));
                            }
                        }
                    }
                }
                RatMatrix::from_triplets(tgt_total, src_total, entries)
            })
            .collect();
        phi.push(per_object);
    }

    let epsilon = c
        .objects()
        .map(|o| {
            let sl = &slices[o];
            let (off, total) = layout(&c, a, sl, 0);
            let mut entries = Vec::new();
            for (k, s) in sl.category.nerve(0).iter().enumerate() {
                let f = a.restriction(sl.arrow_of(s.start)).to_sparse();
                for (r, cc, v) in f.triplets() {
                    entries.push((off[k] + r, cc, v.clone()));
                }
            }
            RatMatrix::from_triplets(total, a.algebra(o).dim(), entries)
        })
        .collect();

    Ok(PresheafComplex { slices, levels, phi, epsilon })
}

impl PresheafComplex {
    pub fn check(&self, a: &TwistedPresheaf<Rat>) -> PresheafComplexCheck {
        let c = a.base();
        let squares_to_zero = self.phi.windows(2).all(|w| c.objects().all(|o| w[1][o].mul(&w[0][o]).is_zero()));
        let natural = self.phi.iter().enumerate().all(|(n, ph)| {
            c.morphism_ids().all(|u| {
                let (v, uo) = (c.source(u), c.target(u));
                self.levels[n + 1].map(u).mul(&ph[uo]) == ph[v].mul(self.levels[n].map(u))
            })
        });
        let mut kernel_dims = Vec::new();
        let (mut inj, mut onto) = (true, true);
        for o in c.objects() {
            let phi0 = &self.phi[0][o];
            let ker = phi0.cols() - rank(phi0);
            kernel_dims.push((ker, a.algebra(o).dim()));
            let eps = &self.epsilon[o];
            inj &= rank(eps) == eps.cols();
            // im ε ⊆ ker φ^0 and equal dimensions
            onto &= phi0.mul(eps).is_zero() && rank(eps) == ker;
        }
        PresheafComplexCheck { squares_to_zero, natural, kernel_dims, epsilon_injective: inj, epsilon_onto_kernel: onto }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FinAlgebra;
    use crate::presheaf::Presheaf;

    #[test]
    fn one_object() {
        let c = Arc::new(FiniteCategory::terminal());
        let a = Presheaf::constant(c, FinAlgebra::dual_numbers());
        let pc = presheaf_complex(&a, 2).unwrap();
        assert_eq!(pc.levels[0].dim(0), 2);
        let chk = pc.check(&a);
        assert!(chk.passed(), "{chk:?}");
    }

    #[test]
    fn v_poset_levels() {
        let a = crate::presheaf::tests::v_dual();
        let pc = presheaf_complex(&a, 2).unwrap();
        let c = a.base();
        let u0 = c.object("U0").unwrap();
        // slice objects over U0: 1_U0 and U01 -> U0
        assert_eq!(pc.levels[0].dim(u0), 2 + 1);
        let chk = pc.check(&a);
        assert!(chk.passed(), "{chk:?}");
    }
}
