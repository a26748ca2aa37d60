//! Presheaves and twisted presheaves of algebras on a finite category.
//!
//! For `u: V -> U` the restriction `f^u = u*` maps `A(U)` to `A(V)`. For a
//! composable pair `v: W -> V`, `u: V -> U` the twist `c^{u,v}` lives in
//! `A(W)`; the unit twist `z^U` lives in `A(U)`. Missing twists mean `1`.

mod check;
mod morphism;
mod semisep;

use std::collections::BTreeMap;
use std::ops::Deref;
use std::sync::Arc;

use crate::algebra::FinAlgebra;
use crate::exactla::{Dual, DMat, Rat, Scalar};
use crate::fincat::{FiniteCategory, MorId, ObjId};

pub use check::{check_twisted_presheaf, Axiom, AxiomFailure, PresheafReport};
pub use morphism::{check_morphism, MorphismAxiom, MorphismFailure, TwistedMorphism};
pub use semisep::{check_semi_separated, IntersectionCheck, SemiSeparatedReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresheafError {
    #[error("structure: {0}")]
    Structure(String),
    #[error("twisted presheaf axioms fail: {0}")]
    Invalid(String),
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("not a strict presheaf: {0}")]
    NotStrict(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedPresheaf<S> {
    base: Arc<FiniteCategory>,
    algebras: Vec<Arc<FinAlgebra<S>>>,
    restrictions: Vec<DMat<S>>,
    twists: BTreeMap<(MorId, MorId), Vec<S>>,
    z: BTreeMap<ObjId, Vec<S>>,
}

impl<S: Scalar> TwistedPresheaf<S> {
    /// Checks shapes only; see [`check_twisted_presheaf`] for the axioms.
    pub fn new(
        base: Arc<FiniteCategory>,
        algebras: Vec<Arc<FinAlgebra<S>>>,
        restrictions: Vec<DMat<S>>,
        twists: BTreeMap<(MorId, MorId), Vec<S>>,
        z: BTreeMap<ObjId, Vec<S>>,
    ) -> Result<Self, PresheafError> {
        if algebras.len() != base.num_objects() {
            return Err(PresheafError::Structure(format!(
                "{} algebras for {} objects",
                algebras.len(),
                base.num_objects()
            )));
        }
        if restrictions.len() != base.num_morphisms() {
            return Err(PresheafError::Structure(format!(
                "{} restrictions for {} morphisms",
                restrictions.len(),
                base.num_morphisms()
            )));
        }
        for u in base.morphism_ids() {
            let (src, tgt) = (base.source(u), base.target(u));
            let m = &restrictions[u];
            if m.rows() != algebras[src].dim() || m.cols() != algebras[tgt].dim() {
                return Err(PresheafError::Structure(format!(
                    "restriction along {} has shape {}x{}, expected {}x{}",
                    base.mor_name(u),
                    m.rows(),
                    m.cols(),
                    algebras[src].dim(),
                    algebras[tgt].dim()
                )));
            }
        }
        for (&(u, v), c) in &twists {
            if base.target(v) != base.source(u) {
                return Err(PresheafError::Structure(format!(
                    "twist on non-composable pair ({}, {})",
                    base.mor_name(u),
                    base.mor_name(v)
                )));
            }
            if c.len() != algebras[base.source(v)].dim() {
                return Err(PresheafError::Structure(format!(
                    "twist ({}, {}) has the wrong length",
                    base.mor_name(u),
                    base.mor_name(v)
                )));
            }
        }
        for (&o, x) in &z {
            if x.len() != algebras[o].dim() {
                return Err(PresheafError::Structure(format!("z at {} has the wrong length", base.obj_name(o))));
            }
        }
        let mut p = TwistedPresheaf { base, algebras, restrictions, twists, z };
        p.drop_trivial_twists();
        Ok(p)
    }

    fn drop_trivial_twists(&mut self) {
        let algebras = &self.algebras;
        let base = &self.base;
        self.twists.retain(|&(_, v), c| c.as_slice() != algebras[base.source(v)].unit());
        self.z.retain(|&o, x| x.as_slice() != algebras[o].unit());
    }

    /// `c = 1`, `z = 1`.
    pub fn untwisted(
        base: Arc<FiniteCategory>,
        algebras: Vec<Arc<FinAlgebra<S>>>,
        restrictions: Vec<DMat<S>>,
    ) -> Result<Self, PresheafError> {
        Self::new(base, algebras, restrictions, BTreeMap::new(), BTreeMap::new())
    }

    /// Every object gets `A`, every restriction is the identity.
    pub fn constant(base: Arc<FiniteCategory>, a: FinAlgebra<S>) -> Self {
        let a = Arc::new(a);
        let algebras = vec![a.clone(); base.num_objects()];
        let restrictions = vec![DMat::identity(a.dim()); base.num_morphisms()];
        Self::untwisted(base, algebras, restrictions).expect("constant presheaf is well formed")
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    pub fn algebra(&self, o: ObjId) -> &Arc<FinAlgebra<S>> {
        &self.algebras[o]
    }

    pub fn algebras(&self) -> &[Arc<FinAlgebra<S>>] {
        &self.algebras
    }

    pub fn restriction(&self, u: MorId) -> &DMat<S> {
        &self.restrictions[u]
    }

    pub fn restrictions(&self) -> &[DMat<S>] {
        &self.restrictions
    }

    /// `c^{u,v}`, defaulting to `1`.
    pub fn twist(&self, u: MorId, v: MorId) -> Vec<S> {
        self.twists
            .get(&(u, v))
            .cloned()
            .unwrap_or_else(|| self.algebras[self.base.source(v)].unit().to_vec())
    }

    /// Twists that differ from `1`.
    pub fn explicit_twists(&self) -> &BTreeMap<(MorId, MorId), Vec<S>> {
        &self.twists
    }

    pub fn z(&self, o: ObjId) -> Vec<S> {
        self.z.get(&o).cloned().unwrap_or_else(|| self.algebras[o].unit().to_vec())
    }

    pub fn explicit_z(&self) -> &BTreeMap<ObjId, Vec<S>> {
        &self.z
    }

    pub fn has_trivial_twists(&self) -> bool {
        self.twists.is_empty() && self.z.is_empty()
    }

    /// `f^σ = f^{u1} ∘ ... ∘ f^{up}: A(cσ) -> A(dσ)` for the chain of arrows.
    pub fn chain_restriction(&self, arrows: &[MorId]) -> DMat<S> {
        match arrows.split_first() {
            None => panic!("empty chain has no restriction"),
            Some((&u1, rest)) => rest.iter().fold(self.restrictions[u1].clone(), |acc, &u| acc.mul(&self.restrictions[u])),
        }
    }

    pub fn is_commutative(&self) -> bool {
        self.algebras.iter().all(|a| a.is_commutative())
    }

    /// `(A^op, m^op, f^op, c^{-1}, z^{-1})`.
    pub fn opposite_twisted(&self) -> Result<Self, PresheafError> {
        let algebras: Vec<Arc<FinAlgebra<S>>> = self.algebras.iter().map(|a| Arc::new(a.opposite())).collect();
        let mut twists = BTreeMap::new();
        for (&(u, v), c) in &self.twists {
            let w = self.base.source(v);
            let inv = self.algebras[w].inverse(c).ok_or_else(|| {
                PresheafError::NotInvertible(format!("c^({},{})", self.base.mor_name(u), self.base.mor_name(v)))
            })?;
            twists.insert((u, v), inv);
        }
        let mut z = BTreeMap::new();
        for (&o, x) in &self.z {
            let inv = self.algebras[o]
                .inverse(x)
                .ok_or_else(|| PresheafError::NotInvertible(format!("z^{}", self.base.obj_name(o))))?;
            z.insert(o, inv);
        }
        Ok(TwistedPresheaf { base: self.base.clone(), algebras, restrictions: self.restrictions.clone(), twists, z })
    }

    /// Whether every twist and every `z` is central; if so, the underlying
    /// ordinary presheaf with the twists forgotten.
    pub fn has_central_twists(&self) -> (bool, Option<TwistedPresheaf<S>>) {
        let central = self.twists.iter().all(|(&(_, v), c)| self.algebras[self.base.source(v)].is_central(c))
            && self.z.iter().all(|(&o, x)| self.algebras[o].is_central(x));
        if !central {
            return (false, None);
        }
        let under = TwistedPresheaf {
            base: self.base.clone(),
            algebras: self.algebras.clone(),
            restrictions: self.restrictions.clone(),
            twists: BTreeMap::new(),
            z: BTreeMap::new(),
        };
        (true, Some(under))
    }

    /// Restriction of scalars to Q, in the coordinates of [`crate::exactla::flatten`].
    pub fn to_q(&self) -> TwistedPresheaf<Rat> {
        use crate::exactla::flatten;
        let mut p = TwistedPresheaf {
            base: self.base.clone(),
            algebras: self.algebras.iter().map(|a| Arc::new(a.to_q_algebra())).collect(),
            restrictions: self.restrictions.iter().map(|m| DMat::from_sparse(&m.to_q())).collect(),
            twists: self.twists.iter().map(|(k, c)| (*k, flatten(c))).collect(),
            z: self.z.iter().map(|(k, x)| (*k, flatten(x))).collect(),
        };
        p.drop_trivial_twists();
        p
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> TwistedPresheaf<T> {
        TwistedPresheaf {
            base: self.base.clone(),
            algebras: self.algebras.iter().map(|a| Arc::new(a.map_scalars(f))).collect(),
            restrictions: self.restrictions.iter().map(|m| m.map(f)).collect(),
            twists: self.twists.iter().map(|(k, c)| (*k, c.iter().map(f).collect())).collect(),
            z: self.z.iter().map(|(k, x)| (*k, x.iter().map(f).collect())).collect(),
        }
    }
}

impl TwistedPresheaf<Rat> {
    /// Extension of scalars to Q[e].
    pub fn to_dual(&self) -> TwistedPresheaf<Dual> {
        self.map_scalars(|r| Dual::from_rat(r.clone()))
    }
}

/// A strict presheaf of Q-algebras: all twists trivial and every axiom
/// verified at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf(TwistedPresheaf<Rat>);

impl Presheaf {
    pub fn new(
        base: Arc<FiniteCategory>,
        algebras: Vec<Arc<FinAlgebra<Rat>>>,
        restrictions: Vec<DMat<Rat>>,
    ) -> Result<Self, PresheafError> {
        Self::from_twisted(TwistedPresheaf::untwisted(base, algebras, restrictions)?)
    }

    pub fn from_twisted(t: TwistedPresheaf<Rat>) -> Result<Self, PresheafError> {
        if !t.has_trivial_twists() {
            return Err(PresheafError::NotStrict("nontrivial twists".into()));
        }
        for a in t.algebras() {
            if a.unit_index().is_none() {
                return Err(PresheafError::Structure("unit of some algebra is not a basis vector".into()));
            }
        }
        let r = check_twisted_presheaf(&t);
        if !r.is_valid() {
            return Err(PresheafError::Invalid(r.summary()));
        }
        Ok(Presheaf(t))
    }

    pub fn constant(base: Arc<FiniteCategory>, a: FinAlgebra<Rat>) -> Self {
        Presheaf(TwistedPresheaf::constant(base, a))
    }

    pub fn as_twisted(&self) -> &TwistedPresheaf<Rat> {
        &self.0
    }

    pub fn into_twisted(self) -> TwistedPresheaf<Rat> {
        self.0
    }

    /// Objectwise opposite algebras, same restriction maps.
    pub fn opposite(&self) -> Presheaf {
        Presheaf(self.0.opposite_twisted().expect("trivial twists are invertible"))
    }
}

impl Deref for Presheaf {
    type Target = TwistedPresheaf<Rat>;
    fn deref(&self) -> &Self::Target {
        &self.0
    }
}
