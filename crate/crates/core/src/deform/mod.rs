//! First-order twisted deformations `(A[ε], m + m₁ε, f + f₁ε, 1 + c₁ε)` of a
//! strict presheaf built from degree-2 GS cochains, their equivalences,
//! opposites and, for commutative presheaves, their underlying presheaves.
//!
//! Every construction is checked twice: once by evaluating the twisted
//! presheaf (or morphism) axioms over Q[ε], once by the cochain conditions.
//! A disagreement between the two is reported as an error.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exactla::{solve, DMat, Dual, Rat, RatMatrix, Scalar};
use crate::fincat::Simplex;
use crate::gs::{hodge_split, GsCochain, GsComplex, GsError, Kind, DEFAULT_IDEMPOTENT_BOUND};
use crate::hochschild::{deform_algebra, tuples_with_slot, HCochain};
use crate::presheaf::{
    check_morphism, check_twisted_presheaf, MorphismFailure, Presheaf, PresheafError, PresheafReport, TwistedMorphism,
    TwistedPresheaf,
};

#[derive(Debug, Error)]
pub enum DeformError {
    #[error("not a normalized reduced cocycle: {}", join(.0))]
    NotACocycle(Vec<ComponentFailure>),
    #[error("axiom checker and cochain conditions disagree (checker: {checker}; cochain: {cochain})")]
    VerdictMismatch { checker: String, cochain: String },
    #[error("the algebra on {0} is not commutative")]
    NotCommutative(String),
    #[error("expected a cochain of degree {expected}, got {found}")]
    Degree { expected: usize, found: usize },
    #[error(transparent)]
    Gs(#[from] GsError),
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
}

fn join(fs: &[ComponentFailure]) -> String {
    fs.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; ")
}

/// The identity a cochain violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    /// `d_Hoch(m₁)` on an object.
    Associativity,
    /// `d_simp(m₁) − d_Hoch(f₁)` on an arrow.
    HomProperty,
    /// `−d_simp(f₁) + d_Hoch(c₁)` on a composable pair.
    TwistRelation,
    /// `d_simp(c₁)` on a composable triple.
    Cocycle,
    /// `m₁(a, 1)` or `m₁(1, a)` is nonzero.
    MultiplicationUnit,
    /// `f₁(1)` is nonzero.
    RestrictionUnit,
    /// `f₁` is nonzero on an identity arrow.
    IdentityRestriction,
    /// `c₁` is nonzero on a pair containing an identity.
    DegenerateTwist,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentFailure {
    pub component: Component,
    pub at: String,
}

impl fmt::Display for ComponentFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = &self.at;
        match self.component {
            Component::Associativity => write!(f, "associativity at {at}: d_Hoch(m₁) ≠ 0"),
            Component::HomProperty => write!(f, "hom-property at {at}: d_simp(m₁) − d_Hoch(f₁) ≠ 0"),
            Component::TwistRelation => write!(f, "f₁ deviation at {at}: −d_simp(f₁)+d_Hoch(c₁) ≠ 0"),
            Component::Cocycle => write!(f, "cocycle at {at}: d_simp(c₁) ≠ 0"),
            Component::MultiplicationUnit => write!(f, "m₁ not normalized at {at}"),
            Component::RestrictionUnit => write!(f, "f₁(1) ≠ 0 at {at}"),
            Component::IdentityRestriction => write!(f, "f₁ ≠ 0 on the identity {at}"),
            Component::DegenerateTwist => write!(f, "c₁ ≠ 0 on the degenerate pair {at}"),
        }
    }
}

/// A valid first-order deformation together with the cochain it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedDeformation {
    pub cocycle: GsCochain,
    pub presheaf: TwistedPresheaf<Dual>,
}

impl TwistedDeformation {
    /// The presheaf obtained by setting `ε = 0`.
    pub fn reduction(&self) -> TwistedPresheaf<Rat> {
        let t = self.presheaf.map_scalars(|x| x.re.clone());
        let (twists, z) = (t.explicit_twists().clone(), t.explicit_z().clone());
        TwistedPresheaf::new(t.base().clone(), t.algebras().to_vec(), t.restrictions().to_vec(), twists, z)
            .expect("shapes are inherited")
    }
}

/// Both verdicts on a candidate cochain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnosis {
    pub checker: PresheafReport,
    pub cochain: Vec<ComponentFailure>,
}

impl Diagnosis {
    pub fn checker_valid(&self) -> bool {
        self.checker.is_valid()
    }

    pub fn cochain_valid(&self) -> bool {
        self.cochain.is_empty()
    }

    pub fn agree(&self) -> bool {
        self.checker_valid() == self.cochain_valid()
    }
}

fn unit(a: &TwistedPresheaf<Rat>, o: usize) -> Vec<Dual> {
    a.algebra(o).unit().iter().map(|x| Dual::from_rat(x.clone())).collect()
}

fn simplex_at(cx: &GsComplex, arrows: &[usize]) -> Simplex {
    cx.presheaf().base().simplex(arrows).expect("composable arrows")
}

/// `(A[ε], m + m₁ε, f + f₁ε, 1 + c₁ε)` with `z = 1`; no axioms are checked.
pub fn deformed_presheaf(cx: &GsComplex, phi: &GsCochain) -> Result<TwistedPresheaf<Dual>, DeformError> {
    if phi.degree != 2 {
        return Err(DeformError::Degree { expected: 2, found: phi.degree });
    }
    cx.to_vec(phi)?;
    let a = cx.presheaf();
    let c = a.base();
    let algebras = c
        .objects()
        .map(|o| {
            let k = c.nerve(0).position(&Simplex::object(o)).expect("objects are 0-simplices");
            let m1 = HCochain { degree: 2, matrix: phi.part(0)[k].clone() };
            std::sync::Arc::new(deform_algebra(a.algebra(o), &m1))
        })
        .collect();
    let nerve1 = c.nerve(1);
    let restrictions = c
        .morphism_ids()
        .map(|u| {
            let k = nerve1.position(&simplex_at(cx, &[u])).expect("arrows are 1-simplices");
            let (f, f1) = (a.restriction(u), &phi.part(1)[k]);
            DMat::from_fn(f.rows(), f.cols(), |i, j| Dual::new(f.get(i, j).clone(), f1.get(i, j)))
        })
        .collect();
    let mut twists = std::collections::BTreeMap::new();
    for (s, c1) in c.nerve(2).iter().zip(phi.part(2)) {
        let (u1, u2) = (s.arrows[0], s.arrows[1]);
        let mut value = unit(a, c.source(u1));
        for (x, e) in value.iter_mut().zip(c1.column(0)) {
            x.eps = e;
        }
        twists.insert((u2, u1), value);
    }
    Ok(TwistedPresheaf::new(c.clone(), algebras, restrictions, twists, Default::default())?)
}

/// Normalization, reduction and `d_GS = 0`, each failure attributed to the
/// simplex where it occurs.
pub fn cochain_failures(cx: &GsComplex, phi: &GsCochain) -> Result<Vec<ComponentFailure>, DeformError> {
    if phi.degree != 2 {
        return Err(DeformError::Degree { expected: 2, found: phi.degree });
    }
    let a = cx.presheaf();
    let c = a.base();
    let mut out = Vec::new();
    let mut push = |component, s: &Simplex| out.push(ComponentFailure { component, at: c.simplex_name(s) });

    for (p, q) in [(0usize, 2usize), (1, 1)] {
        for (s, block) in c.nerve(p).iter().zip(phi.part(p)) {
            if p == 1 && c.is_degenerate(s) {
                if !block.is_zero() {
                    push(Component::IdentityRestriction, s);
                }
                continue;
            }
            let end = c.end(s);
            let d = a.algebra(end).dim();
            let one = a.algebra(end).unit_index().ok_or_else(|| GsError::UnitNotInBasis(c.obj_name(end).into()))?;
            let hits = tuples_with_slot(d, q, one);
            if block.triplets().any(|(_, t, _)| hits[t]) {
                push(if p == 0 { Component::MultiplicationUnit } else { Component::RestrictionUnit }, s);
            }
        }
    }
    for (s, block) in c.nerve(2).iter().zip(phi.part(2)) {
        if c.is_degenerate(s) && !block.is_zero() {
            push(Component::DegenerateTwist, s);
        }
    }
    let d = cx.d_gs(phi)?;
    let names = [Component::Associativity, Component::HomProperty, Component::TwistRelation, Component::Cocycle];
    for (p, component) in names.into_iter().enumerate() {
        for (s, block) in c.nerve(p).iter().zip(d.part(p)) {
            if !block.is_zero() {
                push(component, s);
            }
        }
    }
    Ok(out)
}

/// Runs the axiom checker on the deformed structure and the cochain tests.
pub fn diagnose(cx: &GsComplex, phi: &GsCochain) -> Result<Diagnosis, DeformError> {
    let t = deformed_presheaf(cx, phi)?;
    Ok(Diagnosis { checker: check_twisted_presheaf(&t), cochain: cochain_failures(cx, phi)? })
}

/// Builds the deformation of `φ` and checks it; fails with the violated
/// identities when `φ` is not a normalized reduced cocycle.
pub fn deform_in(cx: &GsComplex, phi: &GsCochain) -> Result<TwistedDeformation, DeformError> {
    let presheaf = deformed_presheaf(cx, phi)?;
    let checker = check_twisted_presheaf(&presheaf);
    let cochain = cochain_failures(cx, phi)?;
    match (checker.is_valid(), cochain.is_empty()) {
        (true, true) => Ok(TwistedDeformation { cocycle: phi.clone(), presheaf }),
        (false, false) => Err(DeformError::NotACocycle(cochain)),
        _ => Err(DeformError::VerdictMismatch { checker: checker.summary(), cochain: join(&cochain) }),
    }
}

pub fn deform(a: &Presheaf, phi: &GsCochain) -> Result<TwistedDeformation, DeformError> {
    deform_in(&GsComplex::new(a.as_twisted())?, phi)
}

/// `(g₁, −τ₁)` as a degree-1 cochain; `g1` is indexed by object, `tau1` by arrow.
pub fn equivalence_cochain(cx: &GsComplex, g1: &[RatMatrix], tau1: &[Vec<Rat>]) -> Result<GsCochain, DeformError> {
    let c = cx.presheaf().base();
    if g1.len() != c.num_objects() || tau1.len() != c.num_morphisms() {
        return Err(GsError::Shape("one g₁ block per object and one τ₁ per arrow".into()).into());
    }
    let part0 = c.nerve(0).iter().map(|s| g1[s.start].clone()).collect();
    let part1 = c
        .nerve(1)
        .iter()
        .map(|s| {
            let t = &tau1[s.arrows[0]];
            RatMatrix::from_triplets(t.len(), 1, t.iter().enumerate().map(|(i, x)| (i, 0, -x.clone())))
        })
        .collect();
    let psi = GsCochain { degree: 1, components: vec![part0, part1] };
    cx.to_vec(&psi)?;
    Ok(psi)
}

/// The inverse of [`equivalence_cochain`].
pub fn split_equivalence_cochain(cx: &GsComplex, psi: &GsCochain) -> (Vec<RatMatrix>, Vec<Vec<Rat>>) {
    let c = cx.presheaf().base();
    let mut g1 = vec![RatMatrix::zeros(0, 0); c.num_objects()];
    for (s, b) in c.nerve(0).iter().zip(psi.part(0)) {
        g1[s.start] = b.clone();
    }
    let mut tau1 = vec![Vec::new(); c.num_morphisms()];
    for (s, b) in c.nerve(1).iter().zip(psi.part(1)) {
        tau1[s.arrows[0]] = b.column(0).into_iter().map(|x| -x).collect();
    }
    (g1, tau1)
}

/// `d_GS(g₁, −τ₁)`.
pub fn coboundary(cx: &GsComplex, g1: &[RatMatrix], tau1: &[Vec<Rat>]) -> Result<GsCochain, DeformError> {
    Ok(cx.d_gs(&equivalence_cochain(cx, g1, tau1)?)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    /// Morphism axioms violated by `(1 + g₁ε, 1 + τ₁ε)` over Q[ε].
    pub morphism_failures: Vec<MorphismFailure>,
    /// `(g₁, −τ₁)` is normalized and reduced.
    pub normalized_reduced: bool,
    /// `d_GS(g₁, −τ₁) = φ − φ′`.
    pub cochain_equation: bool,
}

impl EquivalenceVerdict {
    pub fn isomorphism(&self) -> bool {
        self.morphism_failures.is_empty()
    }

    pub fn cochain_verdict(&self) -> bool {
        self.normalized_reduced && self.cochain_equation
    }

    pub fn agree(&self) -> bool {
        self.isomorphism() == self.cochain_verdict()
    }
}

/// Decides whether `(1 + g₁ε, 1 + τ₁ε): Ā -> Ā′` is an isomorphism, both
/// through the morphism axioms and through the cochain equation.
pub fn equivalence(
    cx: &GsComplex,
    def: &TwistedDeformation,
    def_p: &TwistedDeformation,
    g1: &[RatMatrix],
    tau1: &[Vec<Rat>],
) -> Result<EquivalenceVerdict, DeformError> {
    let psi = equivalence_cochain(cx, g1, tau1)?;
    let a = cx.presheaf();
    let c = a.base();
    let g = c
        .objects()
        .map(|o| {
            let d = a.algebra(o).dim();
            DMat::from_fn(d, d, |i, j| {
                let re = if i == j { Rat::from_integer(1.into()) } else { Rat::default() };
                Dual::new(re, g1[o].get(i, j))
            })
        })
        .collect();
    let tau = c
        .morphism_ids()
        .map(|u| {
            let mut t = unit(a, c.source(u));
            for (x, e) in t.iter_mut().zip(&tau1[u]) {
                x.eps = e.clone();
            }
            t
        })
        .collect();
    let morphism_failures = check_morphism(&def.presheaf, &def_p.presheaf, &TwistedMorphism { g, tau })?;

    let v = cx.to_vec(&psi)?;
    let mut inside = vec![false; v.len()];
    for k in cx.coords(Kind::NormalizedReduced, 1)? {
        inside[k] = true;
    }
    let normalized_reduced = v.iter().zip(&inside).all(|(x, &ok)| ok || x == &Rat::default());
    let diff: Vec<Rat> =
        cx.to_vec(&def.cocycle)?.into_iter().zip(cx.to_vec(&def_p.cocycle)?).map(|(x, y)| x - y).collect();
    let cochain_equation = cx.differential(1).mul_vec(&v) == diff;
    Ok(EquivalenceVerdict { morphism_failures, normalized_reduced, cochain_equation })
}

/// An exact solve for a normalized reduced `(g₁, −τ₁)` with
/// `d_GS(g₁, −τ₁) = φ − φ′`; `None` when the classes differ.
pub fn find_equivalence(
    cx: &GsComplex,
    def: &TwistedDeformation,
    def_p: &TwistedDeformation,
) -> Result<Option<(Vec<RatMatrix>, Vec<Vec<Rat>>)>, DeformError> {
    let d = cx.restricted_differential(Kind::NormalizedReduced, 1)?;
    let (x, y) = (cx.to_vec(&def.cocycle)?, cx.to_vec(&def_p.cocycle)?);
    let rhs: Vec<Rat> = cx.coords(Kind::NormalizedReduced, 2)?.into_iter().map(|k| &x[k] - &y[k]).collect();
    let Some(sol) = solve(&d, &rhs) else { return Ok(None) };
    let psi = cx.from_vec(1, &cx.embed(Kind::NormalizedReduced, 1, &sol)?)?;
    Ok(Some(split_equivalence_cochain(cx, &psi)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OppositeDeformation {
    /// The deformation of `A^op` by `(m₁*, f₁*, −c₁)`.
    pub deformation: TwistedDeformation,
    /// Whether it equals the opposite twisted presheaf of `Ā` exactly.
    pub matches_opposite: bool,
}

/// Deforms `A^op` by `φ^op` and compares with `Ā^op`.
pub fn opposite_deformation(cx: &GsComplex, def: &TwistedDeformation) -> Result<OppositeDeformation, DeformError> {
    let op = cx.opposite();
    let phi_op = cx.gs_op(&def.cocycle)?;
    let deformation = deform_in(&op, &phi_op)?;
    let matches_opposite = deformation.presheaf == def.presheaf.opposite_twisted()?;
    Ok(OppositeDeformation { deformation, matches_opposite })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralUnderlying {
    /// `Ā` with its twists forgotten.
    pub presheaf: TwistedPresheaf<Dual>,
    pub central_twists: bool,
    /// The underlying presheaf equals the deformation by `(m₁, f₁, 0)`.
    pub matches_truncated: bool,
    /// `(m₁, f₁)` is a normalized reduced cocycle of the truncated complex.
    pub truncated_cocycle: bool,
    /// `(m₁, f₁, 0)` is the sum of the Hodge components `r ≥ 1` of `φ`.
    pub hodge_matches: bool,
}

impl CentralUnderlying {
    pub fn passed(&self) -> bool {
        self.central_twists && self.matches_truncated && self.truncated_cocycle && self.hodge_matches
    }
}

/// The underlying presheaf of a deformation of a commutative presheaf.
pub fn central_underlying(cx: &GsComplex, def: &TwistedDeformation) -> Result<CentralUnderlying, DeformError> {
    let a = cx.presheaf();
    let c = a.base();
    if let Some(o) = c.objects().find(|&o| !a.algebra(o).is_commutative()) {
        return Err(DeformError::NotCommutative(c.obj_name(o).into()));
    }
    let (central_twists, under) = def.presheaf.has_central_twists();
    let mut truncated = def.cocycle.clone();
    for b in &mut truncated.components[2] {
        *b = RatMatrix::zeros(b.rows(), b.cols());
    }
    let plain = deformed_presheaf(cx, &truncated)?;
    let matches_truncated = under.as_ref() == Some(&plain);
    let presheaf = under.unwrap_or_else(|| plain.clone());

    let kind = Kind::TruncatedNormalizedReduced;
    let v = cx.to_vec(&truncated)?;
    let coords = cx.coords(kind, 2)?;
    let mut inside = vec![false; v.len()];
    for &k in &coords {
        inside[k] = true;
    }
    let in_subcomplex = v.iter().zip(&inside).all(|(x, &ok)| ok || x == &Rat::default());
    let restricted: Vec<Rat> = coords.iter().map(|&k| v[k].clone()).collect();
    let truncated_cocycle =
        in_subcomplex && cx.restricted_differential(kind, 2)?.mul_vec(&restricted).iter().all(|x| x == &Rat::default());

    let parts = hodge_split(cx, &def.cocycle, DEFAULT_IDEMPOTENT_BOUND)?;
    let mut upper = vec![Rat::default(); v.len()];
    for part in &parts[1..] {
        for (acc, x) in upper.iter_mut().zip(cx.to_vec(part)?) {
            *acc += x;
        }
    }
    let hodge_matches = upper == v;
    Ok(CentralUnderlying { presheaf, central_twists, matches_truncated, truncated_cocycle, hodge_matches })
}

/// Normalized reduced cocycle representatives of a basis of `H²`.
pub fn cocycle_basis(cx: &GsComplex) -> Result<Vec<GsCochain>, DeformError> {
    let h = cx.cohomology(2, Kind::NormalizedReduced)?;
    h.representatives
        .columns()
        .iter()
        .map(|col| Ok(cx.from_vec(2, &cx.embed(Kind::NormalizedReduced, 2, col)?)?))
        .collect()
}
