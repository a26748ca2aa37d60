//! Finite categories, their nerves, slices over an object, and finite posets
//! with binary meets.
//!
//! A morphism `u: V -> U` is read as "V sits inside U"; presheaves are
//! contravariant, so `u` induces a map from the value at `U` to the value at
//! `V`. Objects and morphisms are interned and numbered in lexicographic
//! order of their names, which fixes every enumeration order downstream.

mod meet;
mod nerve;
mod slice;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

pub use meet::MeetPoset;
pub use nerve::{NerveLevel, Simplex};
pub use slice::SliceCategory;

pub type ObjId = usize;
pub type MorId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CategoryError {
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unknown morphism {0:?}")]
    UnknownMorphism(String),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("no composite given for {g} after {f}")]
    MissingComposite { g: String, f: String },
    #[error("composite of {g} after {f} given as {gf} with wrong source or target")]
    BadComposite { g: String, f: String, gf: String },
    #[error("conflicting composites for {g} after {f}")]
    ConflictingComposite { g: String, f: String },
    #[error("composition not associative on ({h}, {g}, {f})")]
    NotAssociative { h: String, g: String, f: String },
    #[error("identity law fails for {0}")]
    IdentityLaw(String),
    #[error("relation is not a partial order: {0}")]
    NotAPoset(String),
    #[error("objects {0} and {1} have no meet")]
    MissingMeet(String, String),
    #[error("face index {index} out of range for a {degree}-simplex")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("morphisms {0} and {1} are not composable")]
    NotComposable(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub source: ObjId,
    pub target: ObjId,
}

/// Explicit description of a category before validation.
#[derive(Debug, Clone, Default)]
pub struct CategorySpec {
    pub objects: Vec<String>,
    /// `(name, source, target)`; identities are added as `1_<obj>` when absent.
    pub morphisms: Vec<(String, String, String)>,
    /// `(g, f, g∘f)` for composable non-identity pairs.
    pub composition: Vec<(String, String, String)>,
    /// Optional explicit identity per object.
    pub identities: BTreeMap<String, String>,
}

pub struct FiniteCategory {
    objects: Vec<String>,
    obj_index: HashMap<String, ObjId>,
    morphisms: Vec<Morphism>,
    mor_index: HashMap<String, MorId>,
    identity: Vec<MorId>,
    comp: Vec<Option<MorId>>,
    hom: HashMap<(ObjId, ObjId), Vec<MorId>>,
    nerve: RwLock<Vec<Arc<NerveLevel>>>,
}

impl Clone for FiniteCategory {
    fn clone(&self) -> Self {
        FiniteCategory {
            objects: self.objects.clone(),
            obj_index: self.obj_index.clone(),
            morphisms: self.morphisms.clone(),
            mor_index: self.mor_index.clone(),
            identity: self.identity.clone(),
            comp: self.comp.clone(),
            hom: self.hom.clone(),
            nerve: RwLock::new(Vec::new()),
        }
    }
}

impl std::fmt::Debug for FiniteCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteCategory")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms.iter().map(|m| &m.name).collect::<Vec<_>>())
            .finish()
    }
}

impl Eq for FiniteCategory {}

impl PartialEq for FiniteCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identity == other.identity
            && self.comp == other.comp
    }
}

pub fn identity_name(obj: &str) -> String {
    format!("1_{obj}")
}

pub fn inclusion_name(lesser: &str, greater: &str) -> String {
    format!("{lesser}->{greater}")
}

impl FiniteCategory {
    pub fn new(spec: CategorySpec) -> Result<Self, CategoryError> {
        let mut objects = spec.objects.clone();
        objects.sort();
        for w in objects.windows(2) {
            if w[0] == w[1] {
                return Err(CategoryError::DuplicateName(w[0].clone()));
            }
        }
        let obj_index: HashMap<String, ObjId> = objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        let obj = |n: &str| obj_index.get(n).copied().ok_or_else(|| CategoryError::UnknownObject(n.to_string()));

        let mut raw: Vec<(String, ObjId, ObjId)> = Vec::new();
        for (n, s, t) in &spec.morphisms {
            raw.push((n.clone(), obj(s)?, obj(t)?));
        }
        let mut id_names = Vec::new();
        for (i, o) in objects.iter().enumerate() {
            let name = spec.identities.get(o).cloned().unwrap_or_else(|| identity_name(o));
            match raw.iter().find(|m| m.0 == name) {
                Some(m) if m.1 != i || m.2 != i => return Err(CategoryError::IdentityLaw(name)),
                Some(_) => {}
                None => raw.push((name.clone(), i, i)),
            }
            id_names.push(name);
        }
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        for w in raw.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(CategoryError::DuplicateName(w[0].0.clone()));
            }
        }
        let morphisms: Vec<Morphism> =
            raw.into_iter().map(|(name, source, target)| Morphism { name, source, target }).collect();
        let mor_index: HashMap<String, MorId> =
            morphisms.iter().enumerate().map(|(i, m)| (m.name.clone(), i)).collect();
        let mor = |n: &str| mor_index.get(n).copied().ok_or_else(|| CategoryError::UnknownMorphism(n.to_string()));
        let identity: Vec<MorId> = id_names.iter().map(|n| mor_index[n]).collect();

        let n = morphisms.len();
        let mut comp: Vec<Option<MorId>> = vec![None; n * n];
        for f in 0..n {
            let (s, t) = (morphisms[f].source, morphisms[f].target);
            comp[identity[t] * n + f] = Some(f);
            comp[f * n + identity[s]] = Some(f);
        }
        for (g, f, gf) in &spec.composition {
            let (gi, fi, gfi) = (mor(g)?, mor(f)?, mor(gf)?);
            let (mg, mf, mgf) = (&morphisms[gi], &morphisms[fi], &morphisms[gfi]);
            if mf.target != mg.source {
                return Err(CategoryError::NotComposable(g.clone(), f.clone()));
            }
            if mgf.source != mf.source || mgf.target != mg.target {
                return Err(CategoryError::BadComposite { g: g.clone(), f: f.clone(), gf: gf.clone() });
            }
            match comp[gi * n + fi] {
                Some(x) if x != gfi => {
                    return Err(CategoryError::ConflictingComposite { g: g.clone(), f: f.clone() })
                }
                _ => comp[gi * n + fi] = Some(gfi),
            }
        }
        for g in 0..n {
            for f in 0..n {
                if morphisms[f].target == morphisms[g].source && comp[g * n + f].is_none() {
                    return Err(CategoryError::MissingComposite {
                        g: morphisms[g].name.clone(),
                        f: morphisms[f].name.clone(),
                    });
                }
            }
        }
        let mut hom: HashMap<(ObjId, ObjId), Vec<MorId>> = HashMap::new();
        for (i, m) in morphisms.iter().enumerate() {
            hom.entry((m.source, m.target)).or_default().push(i);
        }
        let cat = FiniteCategory {
            objects,
            obj_index,
            morphisms,
            mor_index,
            identity,
            comp,
            hom,
            nerve: RwLock::new(Vec::new()),
        };
        cat.verify_associative()?;
        Ok(cat)
    }

    fn verify_associative(&self) -> Result<(), CategoryError> {
        let n = self.morphisms.len();
        for f in 0..n {
            for g in self.arrows_out_of(self.morphisms[f].target) {
                for h in self.arrows_out_of(self.morphisms[g].target) {
                    let a = self.compose(h, self.compose(g, f));
                    let b = self.compose(self.compose(h, g), f);
                    if a != b {
                        return Err(CategoryError::NotAssociative {
                            h: self.mor_name(h).into(),
                            g: self.mor_name(g).into(),
                            f: self.mor_name(f).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The poset on `objects` generated by `relations`, each `(lesser, greater)`.
    /// The arrow `V -> U` is named `V->U`, identities `1_U`.
    pub fn poset(objects: &[&str], relations: &[(&str, &str)]) -> Result<Self, CategoryError> {
        let objs: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        let rels: Vec<(String, String)> = relations.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        Self::poset_owned(objs, rels)
    }

    pub fn poset_owned(objects: Vec<String>, relations: Vec<(String, String)>) -> Result<Self, CategoryError> {
        let set: BTreeSet<&String> = objects.iter().collect();
        for (a, b) in &relations {
            for x in [a, b] {
                if !set.contains(x) {
                    return Err(CategoryError::UnknownObject(x.clone()));
                }
            }
        }
        let idx: HashMap<&String, usize> = objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
        let k = objects.len();
        let mut le = vec![vec![false; k]; k];
        for i in 0..k {
            le[i][i] = true;
        }
        for (a, b) in &relations {
            le[idx[a]][idx[b]] = true;
        }
        for m in 0..k {
            for i in 0..k {
                if le[i][m] {
                    for j in 0..k {
                        if le[m][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                if i != j && le[i][j] && le[j][i] {
                    return Err(CategoryError::NotAPoset(format!("{} and {} are mutually below", objects[i], objects[j])));
                }
            }
        }
        let name = |i: usize, j: usize| {
            if i == j {
                identity_name(&objects[i])
            } else {
                inclusion_name(&objects[i], &objects[j])
            }
        };
        let mut spec = CategorySpec { objects: objects.clone(), ..Default::default() };
        for i in 0..k {
            for j in 0..k {
                if le[i][j] && i != j {
                    spec.morphisms.push((name(i, j), objects[i].clone(), objects[j].clone()));
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    if i != j && j != l && le[i][j] && le[j][l] {
                        spec.composition.push((name(j, l), name(i, j), name(i, l)));
                    }
                }
            }
        }
        Self::new(spec)
    }

    /// One object `*` with only its identity.
    pub fn terminal() -> Self {
        Self::poset(&["*"], &[]).expect("terminal category")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> {
        0..self.objects.len()
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = MorId> {
        0..self.morphisms.len()
    }

    pub fn obj_name(&self, o: ObjId) -> &str {
        &self.objects[o]
    }

    pub fn mor_name(&self, m: MorId) -> &str {
        &self.morphisms[m].name
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object(&self, name: &str) -> Result<ObjId, CategoryError> {
        self.obj_index.get(name).copied().ok_or_else(|| CategoryError::UnknownObject(name.to_string()))
    }

    pub fn morphism(&self, name: &str) -> Result<MorId, CategoryError> {
        self.mor_index.get(name).copied().ok_or_else(|| CategoryError::UnknownMorphism(name.to_string()))
    }

    pub fn source(&self, m: MorId) -> ObjId {
        self.morphisms[m].source
    }

    pub fn target(&self, m: MorId) -> ObjId {
        self.morphisms[m].target
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identity[o]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identity[self.morphisms[m].source] == m
    }

    /// `g ∘ f`, `f` applied first.
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        self.try_compose(g, f).unwrap_or_else(|| panic!("{} and {} are not composable", self.mor_name(g), self.mor_name(f)))
    }

    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.comp[g * self.morphisms.len() + f]
    }

    /// Morphisms with the given source, in id order.
    pub fn arrows_out_of(&self, o: ObjId) -> Vec<MorId> {
        (0..self.morphisms.len()).filter(|&m| self.morphisms[m].source == o).collect()
    }

    /// Morphisms with the given target, in id order.
    pub fn arrows_into(&self, o: ObjId) -> Vec<MorId> {
        (0..self.morphisms.len()).filter(|&m| self.morphisms[m].target == o).collect()
    }

    pub fn hom(&self, source: ObjId, target: ObjId) -> &[MorId] {
        self.hom.get(&(source, target)).map_or(&[], Vec::as_slice)
    }

    /// At most one arrow between any two objects and no cycles.
    pub fn is_poset(&self) -> bool {
        self.hom.iter().all(|(&(s, t), v)| v.len() == 1 && (s == t || self.hom(t, s).is_empty()))
    }
}
