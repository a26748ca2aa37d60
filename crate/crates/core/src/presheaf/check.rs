use serde::Serialize;

use super::TwistedPresheaf;
use crate::algebra::{check_hom, HomFailure};
use crate::exactla::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Associativity,
    Unit,
    RestrictionUnit,
    RestrictionMultiplicative,
    TwistInvertible,
    ZInvertible,
    /// `c^{u,v} v*u*(a) = (uv)*(a) c^{u,v}`
    TwistConjugation,
    /// `z^U a = f^{1_U}(a) z^U`
    ZConjugation,
    /// `c^{u,vw} c^{v,w} = c^{uv,w} w*(c^{u,v})`
    Cocycle,
    /// `c^{u,1_V} z^V = 1`
    RightUnitTwist,
    /// `c^{1_U,u} u*(z^U) = 1`
    LeftUnitTwist,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    /// Names of the objects or morphisms involved.
    pub witnesses: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PresheafReport {
    pub failures: Vec<AxiomFailure>,
}

impl PresheafReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fails(&self, axiom: Axiom) -> bool {
        self.failures.iter().any(|f| f.axiom == axiom)
    }

    pub fn summary(&self) -> String {
        let parts: Vec<String> =
            self.failures.iter().map(|f| format!("{:?} at ({}): {}", f.axiom, f.witnesses.join(", "), f.detail)).collect();
        parts.join("; ")
    }
}

/// Evaluates every defining identity of a twisted presheaf on all objects,
/// composable pairs and triples, and on basis elements.
pub fn check_twisted_presheaf<S: Scalar>(t: &TwistedPresheaf<S>) -> PresheafReport {
    let c = t.base();
    let mut failures = Vec::new();
    let mut fail = |axiom, witnesses: Vec<String>, detail: String| failures.push(AxiomFailure { axiom, witnesses, detail });

    for o in c.objects() {
        let a = t.algebra(o);
        let on = c.obj_name(o).to_string();
        if let Some((i, j, k)) = a.associativity_failure() {
            let n = a.names();
            fail(Axiom::Associativity, vec![on.clone()], format!("({} {}) {} != {} ({} {})", n[i], n[j], n[k], n[i], n[j], n[k]));
        }
        if let Some(i) = a.unit_failure() {
            fail(Axiom::Unit, vec![on.clone()], format!("1 is not a unit for {}", a.names()[i]));
        }
        let z = t.z(o);
        if a.inverse(&z).is_none() {
            fail(Axiom::ZInvertible, vec![on.clone()], "z has no inverse".into());
        }
        let f1 = t.restriction(c.identity(o));
        for i in 0..a.dim() {
            let e = a.basis(i);
            if a.mul(&z, &e) != a.mul(&f1.mul_vec(&e), &z) {
                fail(Axiom::ZConjugation, vec![on.clone()], format!("fails on basis element {}", a.names()[i]));
                break;
            }
        }
    }

    for u in c.morphism_ids() {
        let (v_obj, u_obj) = (c.source(u), c.target(u));
        match check_hom(t.algebra(u_obj), t.algebra(v_obj), t.restriction(u)) {
            None => {}
            Some(HomFailure::Unit) => fail(Axiom::RestrictionUnit, vec![c.mor_name(u).into()], "f(1) != 1".into()),
            Some(e) => fail(Axiom::RestrictionMultiplicative, vec![c.mor_name(u).into()], e.to_string()),
        }
    }

    // pairs v: W -> V, u: V -> U
    for u in c.morphism_ids() {
        for v in c.arrows_into(c.source(u)) {
            let w_obj = c.source(v);
            let aw = t.algebra(w_obj);
            let au = t.algebra(c.target(u));
            let cuv = t.twist(u, v);
            let names = vec![c.mor_name(u).to_string(), c.mor_name(v).to_string()];
            if aw.inverse(&cuv).is_none() {
                fail(Axiom::TwistInvertible, names.clone(), "c has no inverse".into());
            }
            let uv = c.compose(u, v);
            let (fu, fv, fuv) = (t.restriction(u), t.restriction(v), t.restriction(uv));
            for i in 0..au.dim() {
                let e = au.basis(i);
                let lhs = aw.mul(&cuv, &fv.mul_vec(&fu.mul_vec(&e)));
                let rhs = aw.mul(&fuv.mul_vec(&e), &cuv);
                if lhs != rhs {
                    fail(Axiom::TwistConjugation, names.clone(), format!("fails on basis element {}", au.names()[i]));
                    break;
                }
            }
        }
    }

    // triples w: T -> W, v: W -> V, u: V -> U
    for u in c.morphism_ids() {
        for v in c.arrows_into(c.source(u)) {
            for w in c.arrows_into(c.source(v)) {
                let at = t.algebra(c.source(w));
                let lhs = at.mul(&t.twist(u, c.compose(v, w)), &t.twist(v, w));
                let rhs = at.mul(&t.twist(c.compose(u, v), w), &t.restriction(w).mul_vec(&t.twist(u, v)));
                if lhs != rhs {
                    fail(
                        Axiom::Cocycle,
                        vec![c.mor_name(u).into(), c.mor_name(v).into(), c.mor_name(w).into()],
                        "c^{u,vw} c^{v,w} != c^{uv,w} w*(c^{u,v})".into(),
                    );
                }
            }
        }
    }

    for u in c.morphism_ids() {
        let (v_obj, u_obj) = (c.source(u), c.target(u));
        let av = t.algebra(v_obj);
        let one = av.unit().to_vec();
        if av.mul(&t.twist(u, c.identity(v_obj)), &t.z(v_obj)) != one {
            fail(Axiom::RightUnitTwist, vec![c.mor_name(u).into()], "c^{u,1} z != 1".into());
        }
        let lhs = av.mul(&t.twist(c.identity(u_obj), u), &t.restriction(u).mul_vec(&t.z(u_obj)));
        if lhs != one {
            fail(Axiom::LeftUnitTwist, vec![c.mor_name(u).into()], "c^{1,u} u*(z) != 1".into());
        }
    }

    PresheafReport { failures }
}
