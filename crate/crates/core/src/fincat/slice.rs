use std::collections::HashMap;

use super::{CategorySpec, FiniteCategory, MorId, ObjId};

/// The slice `U/U`: objects are arrows `v: V -> U`, a morphism from
/// `w` to `v` is an arrow `a` with `v ∘ a = w`.
///
/// Slice objects are named after their arrow; the slice morphism given by
/// `a` with codomain `v` is named `a|v`.
#[derive(Debug, Clone)]
pub struct SliceCategory {
    pub category: FiniteCategory,
    pub over: ObjId,
    object_arrow: Vec<MorId>,
    morphism_arrow: Vec<MorId>,
    object_of_arrow: HashMap<MorId, ObjId>,
    morphism_of: HashMap<(MorId, MorId), MorId>,
}

impl SliceCategory {
    pub fn new(base: &FiniteCategory, over: ObjId) -> Self {
        let arrows = base.arrows_into(over);
        let obj_name = |v: MorId| base.mor_name(v).to_string();
        let mor_name = |a: MorId, v: MorId| format!("{}|{}", base.mor_name(a), base.mor_name(v));
        let mut spec = CategorySpec { objects: arrows.iter().map(|&v| obj_name(v)).collect(), ..Default::default() };
        let mut slice_mors: Vec<(MorId, MorId, MorId)> = Vec::new();
        for &v in &arrows {
            for a in base.arrows_into(base.source(v)) {
                let w = base.compose(v, a);
                slice_mors.push((a, w, v));
                let name = mor_name(a, v);
                if base.is_identity(a) {
                    spec.identities.insert(obj_name(v), name.clone());
                }
                spec.morphisms.push((name, obj_name(w), obj_name(v)));
            }
        }
        for &(b, _, x) in &slice_mors {
            for &(a, _, v) in &slice_mors {
                if base.target(a) == base.source(b) && base.compose(x, b) == v {
                    spec.composition.push((mor_name(b, x), mor_name(a, v), mor_name(base.compose(b, a), x)));
                }
            }
        }
        let category = FiniteCategory::new(spec).expect("slice of a valid category is valid");
        let object_arrow: Vec<MorId> = category.objects().map(|o| base.morphism(category.obj_name(o)).unwrap()).collect();
        let object_of_arrow = object_arrow.iter().enumerate().map(|(o, &v)| (v, o)).collect();
        let mut morphism_arrow = vec![0; category.num_morphisms()];
        let mut morphism_of = HashMap::new();
        for (a, _, v) in slice_mors {
            let id = category.morphism(&mor_name(a, v)).unwrap();
            morphism_arrow[id] = a;
            morphism_of.insert((a, v), id);
        }
        SliceCategory { category, over, object_arrow, morphism_arrow, object_of_arrow, morphism_of }
    }

    /// The arrow into `U` that a slice object stands for.
    pub fn arrow_of(&self, o: ObjId) -> MorId {
        self.object_arrow[o]
    }

    /// Underlying arrow of a slice morphism.
    pub fn base_arrow(&self, m: MorId) -> MorId {
        self.morphism_arrow[m]
    }

    pub fn object_for(&self, arrow: MorId) -> Option<ObjId> {
        self.object_of_arrow.get(&arrow).copied()
    }

    /// Slice morphism given by `a` with codomain the slice object of `v`.
    pub fn morphism_for(&self, a: MorId, v: MorId) -> Option<MorId> {
        self.morphism_of.get(&(a, v)).copied()
    }

    /// Base object underlying a slice object.
    pub fn base_object(&self, base: &FiniteCategory, o: ObjId) -> ObjId {
        base.source(self.object_arrow[o])
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::v_poset;
    use super::*;

    #[test]
    fn slice_over_top() {
        let c = v_poset();
        let u0 = c.object("U0").unwrap();
        let s = SliceCategory::new(&c, u0);
        assert_eq!(s.category.num_objects(), 2);
        // identities of both slice objects plus the inclusion
        assert_eq!(s.category.num_morphisms(), 3);
        let u = c.morphism("U01->U0").unwrap();
        let o = s.object_for(u).unwrap();
        assert_eq!(c.obj_name(s.base_object(&c, o)), "U01");
    }

    #[test]
    fn slice_of_bottom_is_terminal() {
        let c = v_poset();
        let s = SliceCategory::new(&c, c.object("U01").unwrap());
        assert_eq!(s.category.num_objects(), 1);
        assert_eq!(s.category.num_morphisms(), 1);
    }
}
