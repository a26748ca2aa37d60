use serde::Serialize;

use super::{PresheafError, TwistedPresheaf};
use crate::exactla::{DMat, Scalar};
use crate::fincat::MorId;

/// `(g, τ)`: a linear map `g^U: A(U) -> A'(U)` per object and an element
/// `τ^u ∈ A'(V)` per arrow `u: V -> U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedMorphism<S> {
    pub g: Vec<DMat<S>>,
    pub tau: Vec<Vec<S>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphismAxiom {
    /// `g m = m'(g ⊗ g)`
    Multiplicative,
    /// `g(1) = 1`
    Unital,
    TauInvertible,
    /// `g^V(u*(a)) τ^u = τ^u u'*(g^U(a))`
    Intertwining,
    /// `τ^{uv} c'^{u,v} = g^W(c^{u,v}) τ^v v'*(τ^u)`
    TwistCompatibility,
    /// `τ^{1_U} z'^U = g^U(z^U)`
    UnitCompatibility,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismFailure {
    pub axiom: MorphismAxiom,
    pub witnesses: Vec<String>,
}

impl<S: Scalar> TwistedMorphism<S> {
    pub fn identity(t: &TwistedPresheaf<S>) -> Self {
        let c = t.base();
        TwistedMorphism {
            g: c.objects().map(|o| DMat::identity(t.algebra(o).dim())).collect(),
            tau: c.morphism_ids().map(|u| t.algebra(c.source(u)).unit().to_vec()).collect(),
        }
    }

    pub fn tau(&self, u: MorId) -> &[S] {
        &self.tau[u]
    }
}

/// Evaluates conditions (1)-(5) of a morphism of twisted presheaves.
pub fn check_morphism<S: Scalar>(
    src: &TwistedPresheaf<S>,
    tgt: &TwistedPresheaf<S>,
    m: &TwistedMorphism<S>,
) -> Result<Vec<MorphismFailure>, PresheafError> {
    let c = src.base();
    if tgt.base() != c {
        return Err(PresheafError::Structure("morphism between presheaves on different categories".into()));
    }
    if m.g.len() != c.num_objects() || m.tau.len() != c.num_morphisms() {
        return Err(PresheafError::Structure("morphism has the wrong number of components".into()));
    }
    for o in c.objects() {
        let g = &m.g[o];
        if g.rows() != tgt.algebra(o).dim() || g.cols() != src.algebra(o).dim() {
            return Err(PresheafError::Structure(format!("g at {} has the wrong shape", c.obj_name(o))));
        }
    }
    for u in c.morphism_ids() {
        if m.tau[u].len() != tgt.algebra(c.source(u)).dim() {
            return Err(PresheafError::Structure(format!("tau at {} has the wrong length", c.mor_name(u))));
        }
    }

    let mut out = Vec::new();
    let mut fail = |axiom, w: Vec<&str>| out.push(MorphismFailure { axiom, witnesses: w.into_iter().map(String::from).collect() });

    for o in c.objects() {
        let (a, b, g) = (src.algebra(o), tgt.algebra(o), &m.g[o]);
        let name = c.obj_name(o);
        if g.mul_vec(a.unit()) != b.unit() {
            fail(MorphismAxiom::Unital, vec![name]);
        }
        let imgs: Vec<Vec<S>> = (0..a.dim()).map(|i| g.column(i)).collect();
        'outer: for i in 0..a.dim() {
            for j in 0..a.dim() {
                if g.mul_vec(a.product(i, j)) != b.mul(&imgs[i], &imgs[j]) {
                    fail(MorphismAxiom::Multiplicative, vec![name]);
                    break 'outer;
                }
            }
        }
        let lhs = b.mul(&m.tau[c.identity(o)], &tgt.z(o));
        if lhs != g.mul_vec(&src.z(o)) {
            fail(MorphismAxiom::UnitCompatibility, vec![name]);
        }
    }

    for u in c.morphism_ids() {
        let (v_obj, u_obj) = (c.source(u), c.target(u));
        let bv = tgt.algebra(v_obj);
        let tau = &m.tau[u];
        if bv.inverse(tau).is_none() {
            fail(MorphismAxiom::TauInvertible, vec![c.mor_name(u)]);
        }
        for i in 0..src.algebra(u_obj).dim() {
            let e = src.algebra(u_obj).basis(i);
            let lhs = bv.mul(&m.g[v_obj].mul_vec(&src.restriction(u).mul_vec(&e)), tau);
            let rhs = bv.mul(tau, &tgt.restriction(u).mul_vec(&m.g[u_obj].mul_vec(&e)));
            if lhs != rhs {
                fail(MorphismAxiom::Intertwining, vec![c.mor_name(u)]);
                break;
            }
        }
    }

    for u in c.morphism_ids() {
        for v in c.arrows_into(c.source(u)) {
            let w_obj = c.source(v);
            let bw = tgt.algebra(w_obj);
            let uv = c.compose(u, v);
            let lhs = bw.mul(&m.tau[uv], &tgt.twist(u, v));
            let rhs = bw.mul3(&m.g[w_obj].mul_vec(&src.twist(u, v)), &m.tau[v], &tgt.restriction(v).mul_vec(&m.tau[u]));
            if lhs != rhs {
                fail(MorphismAxiom::TwistCompatibility, vec![c.mor_name(u), c.mor_name(v)]);
            }
        }
    }
    Ok(out)
}
