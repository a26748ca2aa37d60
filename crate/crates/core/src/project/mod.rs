//! The self-contained JSON project file: one presheaf plus named cochains,
//! equivalences, modules and descent data that refer to it.
//!
//! Rationals are strings `"p/q"`. Every schema or cross-reference problem is
//! reported with the JSON pointer of the offending value.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::algebra::{FinAlgebra, FinModule};
use crate::descent::{free_datum, PreDescentDatum};
use crate::exactla::{from_qstr, DMat, QStr, Rat, RatMatrix};
use crate::fincat::{CategorySpec, FiniteCategory, MorId, ObjId, Simplex};
use crate::gs::{GsCochain, GsComplex};
use crate::presheaf::TwistedPresheaf;

#[cfg(test)]
mod tests;

pub const SCHEMA_VERSION: u32 = 1;

/// Names the construction of the Eulerian idempotents so that Hodge numbers
/// can be reproduced: Lagrange interpolation in the signed-shuffle operator.
pub const IDEMPOTENT_CONSTRUCTION: &str = "eulerian/lagrange-signed-shuffle/v1";

pub type Matrix = Vec<Vec<QStr>>;

/// A schema violation located by a JSON pointer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pointer}: {message}")]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl SchemaError {
    fn at(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        SchemaError { pointer: pointer.into(), message: message.into() }
    }
}

/// Escapes one reference token (`~` and `/`).
pub fn pointer_token(s: &str) -> String {
    s.replace('~', "~0").replace('/', "~1")
}

fn ptr(parts: &[&str]) -> String {
    parts.iter().map(|p| format!("/{}", pointer_token(p))).collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectFile {
    #[serde(default)]
    pub schema_version: Option<u32>,
    pub category: CategoryBlock,
    /// Algebra per object name.
    pub algebras: BTreeMap<String, AlgebraBlock>,
    /// `f^u` per morphism name, `dim A(source) × dim A(target)`; identities default to `1`.
    #[serde(default)]
    pub restrictions: BTreeMap<String, Matrix>,
    /// `c^{u,v}` keyed `"(u, v)"`; absent pairs are `1`.
    #[serde(default)]
    pub twists: BTreeMap<String, Vec<QStr>>,
    #[serde(default)]
    pub z: BTreeMap<String, Vec<QStr>>,
    #[serde(default)]
    pub cochains: BTreeMap<String, CochainBlock>,
    #[serde(default)]
    pub equivalences: BTreeMap<String, EquivalenceBlock>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleBlock>,
    #[serde(default)]
    pub data: BTreeMap<String, DatumBlock>,
}

/// Either a poset (`leq` pairs `[lesser, greater]`) or explicit morphisms
/// with a composition table.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryBlock {
    pub objects: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
    #[serde(default)]
    pub morphisms: Vec<MorphismBlock>,
    /// `[g, f, g∘f]`.
    #[serde(default)]
    pub composition: Vec<(String, String, String)>,
    #[serde(default)]
    pub identities: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismBlock {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// A preset (`Q`, `dual_numbers`, `upper_triangular`,
/// `truncated_polynomial` with `n`, `matrix` with `n`) or structure constants.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraBlock {
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub basis: Option<Vec<String>>,
    /// `[i, j, coefficients of e_i e_j]`; missing products are zero.
    #[serde(default)]
    pub mult: Option<Vec<(usize, usize, Vec<QStr>)>>,
    #[serde(default)]
    pub unit: Option<Vec<QStr>>,
}

/// A GS cochain of the given degree; unlisted blocks are zero.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainBlock {
    pub degree: usize,
    #[serde(default)]
    pub blocks: Vec<BlockEntry>,
}

/// The block at an object (`p = 0`) or at a chain of arrows.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockEntry {
    #[serde(default)]
    pub object: Option<String>,
    #[serde(default)]
    pub arrows: Option<Vec<String>>,
    pub matrix: Matrix,
}

/// `(1 + g₁ε, 1 + τ₁ε)`; unlisted entries are zero.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivalenceBlock {
    #[serde(default)]
    pub g1: BTreeMap<String, Matrix>,
    #[serde(default)]
    pub tau1: BTreeMap<String, Vec<QStr>>,
}

/// A module over the algebra at `object`: `free`, `zero`, or `dim` with one
/// action matrix per basis element.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleBlock {
    #[serde(default)]
    pub object: Option<String>,
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub action: Option<Vec<Matrix>>,
}

/// A pre-descent datum: the free datum (optionally with a trivialization
/// `t_u`), or modules per object with `φ_u` in the form `m ↦ φ_u(m ⊗ 1)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumBlock {
    #[serde(default)]
    pub free: bool,
    #[serde(default)]
    pub trivialization: BTreeMap<String, Vec<QStr>>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleBlock>,
    #[serde(default)]
    pub phi: BTreeMap<String, Matrix>,
}

/// A parsed and resolved project.
#[derive(Debug, Clone)]
pub struct Project {
    pub file: ProjectFile,
    pub presheaf: TwistedPresheaf<Rat>,
}

/// Turns a serde path into a JSON pointer.
fn path_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", pointer_token(key))),
            Segment::Enum { variant } => out.push_str(&format!("/{}", pointer_token(variant))),
            Segment::Unknown => {}
        }
    }
    out
}

fn matrix(m: &Matrix, rows: usize, cols: usize, at: &str) -> Result<RatMatrix, SchemaError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        let found = format!("{}x{}", m.len(), m.first().map_or(0, |r| r.len()));
        return Err(SchemaError::at(at, format!("expected a {rows}x{cols} matrix, found {found}")));
    }
    let entries = m.iter().enumerate().flat_map(|(i, r)| r.iter().enumerate().map(move |(j, x)| (i, j, x.0.clone())));
    Ok(RatMatrix::from_triplets(rows, cols, entries))
}

fn vector(v: &[QStr], len: usize, at: &str) -> Result<Vec<Rat>, SchemaError> {
    if v.len() != len {
        return Err(SchemaError::at(at, format!("expected {len} coefficients, found {}", v.len())));
    }
    Ok(from_qstr(v))
}

fn build_category(b: &CategoryBlock) -> Result<FiniteCategory, SchemaError> {
    let explicit = !b.morphisms.is_empty() || !b.composition.is_empty() || !b.identities.is_empty();
    let result = if explicit {
        if !b.leq.is_empty() {
            return Err(SchemaError::at("/category/leq", "give either leq or explicit morphisms, not both"));
        }
        FiniteCategory::new(CategorySpec {
            objects: b.objects.clone(),
            morphisms: b.morphisms.iter().map(|m| (m.name.clone(), m.source.clone(), m.target.clone())).collect(),
            composition: b.composition.clone(),
            identities: b.identities.clone(),
        })
    } else {
        FiniteCategory::poset_owned(b.objects.clone(), b.leq.clone())
    };
    result.map_err(|e| SchemaError::at("/category", e.to_string()))
}

fn build_algebra(b: &AlgebraBlock, at: &str) -> Result<FinAlgebra<Rat>, SchemaError> {
    if let Some(p) = &b.preset {
        if b.basis.is_some() || b.mult.is_some() || b.unit.is_some() {
            return Err(SchemaError::at(at, "a preset takes no basis, mult or unit"));
        }
        let need_n = || b.n.ok_or_else(|| SchemaError::at(format!("{at}/n"), format!("preset {p} needs n")));
        return match p.as_str() {
            "Q" | "rationals" => Ok(FinAlgebra::rationals()),
            "dual_numbers" => Ok(FinAlgebra::dual_numbers()),
            "upper_triangular" => Ok(FinAlgebra::upper_triangular()),
            "truncated_polynomial" => Ok(FinAlgebra::truncated_polynomial(need_n()?)),
            "matrix" => Ok(FinAlgebra::matrix_algebra(need_n()?)),
            other => Err(SchemaError::at(format!("{at}/preset"), format!("unknown preset {other:?}"))),
        };
    }
    let basis = b.basis.as_ref().ok_or_else(|| SchemaError::at(at, "missing basis (or preset)"))?;
    let d = basis.len();
    let unit = b.unit.as_ref().ok_or_else(|| SchemaError::at(at, "missing unit"))?;
    let unit = vector(unit, d, &format!("{at}/unit"))?;
    let mut products = Vec::new();
    for (k, (i, j, c)) in b.mult.iter().flatten().enumerate() {
        let here = format!("{at}/mult/{k}");
        if *i >= d || *j >= d {
            return Err(SchemaError::at(here, format!("basis index out of range for dimension {d}")));
        }
        products.push((*i, *j, vector(c, d, &format!("{here}/2"))?));
    }
    let names: Vec<&str> = basis.iter().map(String::as_str).collect();
    FinAlgebra::from_table(&names, &products, unit).map_err(|e| SchemaError::at(at, e.to_string()))
}

fn parse_pair(key: &str) -> Option<(&str, &str)> {
    let inner = key.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (u, v) = inner.split_once(',')?;
    Some((u.trim(), v.trim()))
}

impl Project {
    /// Parses and resolves a project; every failure carries a JSON pointer.
    pub fn from_json(text: &str) -> Result<Self, SchemaError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ProjectFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let pointer = path_pointer(e.path());
            SchemaError { pointer: if pointer.is_empty() { "/".into() } else { pointer }, message: e.inner().to_string() }
        })?;
        if let Some(v) = file.schema_version {
            if v != SCHEMA_VERSION {
                return Err(SchemaError::at("/schema_version", format!("unsupported version {v}, expected {SCHEMA_VERSION}")));
            }
        }
        let presheaf = Self::build_presheaf(&file)?;
        Ok(Project { file, presheaf })
    }

    fn build_presheaf(file: &ProjectFile) -> Result<TwistedPresheaf<Rat>, SchemaError> {
        let c = Arc::new(build_category(&file.category)?);
        for name in file.algebras.keys() {
            c.object(name).map_err(|e| SchemaError::at(ptr(&["algebras", name]), e.to_string()))?;
        }
        let mut algebras = Vec::new();
        for o in c.objects() {
            let name = c.obj_name(o);
            let b = file.algebras.get(name).ok_or_else(|| SchemaError::at("/algebras", format!("no algebra for {name}")))?;
            algebras.push(Arc::new(build_algebra(b, &ptr(&["algebras", name]))?));
        }
        for name in file.restrictions.keys() {
            c.morphism(name).map_err(|e| SchemaError::at(ptr(&["restrictions", name]), e.to_string()))?;
        }
        let mut restrictions = Vec::new();
        for u in c.morphism_ids() {
            let name = c.mor_name(u);
            let (rows, cols) = (algebras[c.source(u)].dim(), algebras[c.target(u)].dim());
            let m = match file.restrictions.get(name) {
                Some(m) => matrix(m, rows, cols, &ptr(&["restrictions", name]))?,
                None if c.is_identity(u) => RatMatrix::identity(rows),
                None => return Err(SchemaError::at("/restrictions", format!("no restriction for {name}"))),
            };
            restrictions.push(DMat::from_sparse(&m));
        }
        let mut twists = BTreeMap::new();
        for (key, coeffs) in &file.twists {
            let at = ptr(&["twists", key]);
            let (u, v) = parse_pair(key).ok_or_else(|| SchemaError::at(&at, "twist keys have the form \"(u, v)\""))?;
            let u = c.morphism(u).map_err(|e| SchemaError::at(&at, e.to_string()))?;
            let v = c.morphism(v).map_err(|e| SchemaError::at(&at, e.to_string()))?;
            if c.target(v) != c.source(u) {
                return Err(SchemaError::at(&at, "the pair is not composable"));
            }
            twists.insert((u, v), vector(coeffs, algebras[c.source(v)].dim(), &at)?);
        }
        let mut z = BTreeMap::new();
        for (name, coeffs) in &file.z {
            let at = ptr(&["z", name]);
            let o = c.object(name).map_err(|e| SchemaError::at(&at, e.to_string()))?;
            z.insert(o, vector(coeffs, algebras[o].dim(), &at)?);
        }
        TwistedPresheaf::new(c, algebras, restrictions, twists, z).map_err(|e| SchemaError::at("/", e.to_string()))
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        self.presheaf.base()
    }

    fn object_at(&self, name: &str, at: &str) -> Result<ObjId, SchemaError> {
        self.base().object(name).map_err(|e| SchemaError::at(at, e.to_string()))
    }

    fn morphism_at(&self, name: &str, at: &str) -> Result<MorId, SchemaError> {
        self.base().morphism(name).map_err(|e| SchemaError::at(at, e.to_string()))
    }

    /// The named cochain as a GS cochain of `cx`.
    pub fn cochain(&self, cx: &GsComplex, name: &str) -> Result<GsCochain, SchemaError> {
        let at = ptr(&["cochains", name]);
        let b = self.file.cochains.get(name).ok_or_else(|| SchemaError::at("/cochains", format!("no cochain named {name:?}")))?;
        let c = self.base();
        let mut out = cx.zero(b.degree);
        for (k, e) in b.blocks.iter().enumerate() {
            let here = format!("{at}/blocks/{k}");
            let s = match (&e.object, &e.arrows) {
                (Some(o), None) => Simplex::object(self.object_at(o, &format!("{here}/object"))?),
                (None, Some(arrows)) if !arrows.is_empty() => {
                    let ids = arrows
                        .iter()
                        .enumerate()
                        .map(|(i, a)| self.morphism_at(a, &format!("{here}/arrows/{i}")))
                        .collect::<Result<Vec<_>, _>>()?;
                    c.simplex(&ids).map_err(|e| SchemaError::at(format!("{here}/arrows"), e.to_string()))?
                }
                _ => return Err(SchemaError::at(here, "give exactly one of object or a non-empty arrows list")),
            };
            let p = s.degree();
            if p > b.degree {
                return Err(SchemaError::at(here, format!("a {p}-simplex does not occur in degree {}", b.degree)));
            }
            let (rows, cd) = cx.dims_of(&s);
            let cols = cd.pow((b.degree - p) as u32);
            let pos = c.nerve(p).position(&s).expect("simplices of the nerve are enumerated");
            out.components[p][pos] = matrix(&e.matrix, rows, cols, &format!("{here}/matrix"))?;
        }
        Ok(out)
    }

    /// `(g₁, τ₁)` indexed by object and by morphism.
    pub fn equivalence(&self, name: &str) -> Result<(Vec<RatMatrix>, Vec<Vec<Rat>>), SchemaError> {
        let at = ptr(&["equivalences", name]);
        let b = self
            .file
            .equivalences
            .get(name)
            .ok_or_else(|| SchemaError::at("/equivalences", format!("no equivalence named {name:?}")))?;
        let (t, c) = (&self.presheaf, self.base());
        let mut g1: Vec<RatMatrix> = c.objects().map(|o| RatMatrix::zeros(t.algebra(o).dim(), t.algebra(o).dim())).collect();
        for (o, m) in &b.g1 {
            let here = format!("{at}/g1/{}", pointer_token(o));
            let o = self.object_at(o, &here)?;
            let d = t.algebra(o).dim();
            g1[o] = matrix(m, d, d, &here)?;
        }
        let mut tau1: Vec<Vec<Rat>> = c.morphism_ids().map(|u| t.algebra(c.source(u)).zero_elem()).collect();
        for (u, v) in &b.tau1 {
            let here = format!("{at}/tau1/{}", pointer_token(u));
            let u = self.morphism_at(u, &here)?;
            tau1[u] = vector(v, t.algebra(c.source(u)).dim(), &here)?;
        }
        Ok((g1, tau1))
    }

    fn module_at(&self, b: &ModuleBlock, o: ObjId, at: &str) -> Result<FinModule, SchemaError> {
        let a = self.presheaf.algebra(o).clone();
        match b.preset.as_deref() {
            Some("free") => return Ok(FinModule::free(a)),
            Some("zero") => return Ok(FinModule::zero(a)),
            Some(other) => return Err(SchemaError::at(format!("{at}/preset"), format!("unknown module preset {other:?}"))),
            None => {}
        }
        let dim = b.dim.ok_or_else(|| SchemaError::at(at, "missing dim (or preset)"))?;
        let action = b.action.as_ref().ok_or_else(|| SchemaError::at(at, "missing action"))?;
        if action.len() != a.dim() {
            return Err(SchemaError::at(format!("{at}/action"), format!("expected {} action matrices", a.dim())));
        }
        let mats = action
            .iter()
            .enumerate()
            .map(|(j, m)| matrix(m, dim, dim, &format!("{at}/action/{j}")))
            .collect::<Result<Vec<_>, _>>()?;
        FinModule::new(a, dim, mats).map_err(|e| SchemaError::at(at, e.to_string()))
    }

    /// The named module and the object it lives over.
    pub fn module(&self, name: &str) -> Result<(ObjId, FinModule), SchemaError> {
        let at = ptr(&["modules", name]);
        let b = self.file.modules.get(name).ok_or_else(|| SchemaError::at("/modules", format!("no module named {name:?}")))?;
        let o = b.object.as_deref().ok_or_else(|| SchemaError::at(&at, "missing object"))?;
        let o = self.object_at(o, &format!("{at}/object"))?;
        Ok((o, self.module_at(b, o, &at)?))
    }

    /// The named pre-descent datum.
    pub fn datum(&self, name: &str) -> Result<PreDescentDatum, SchemaError> {
        let at = ptr(&["data", name]);
        let b = self.file.data.get(name).ok_or_else(|| SchemaError::at("/data", format!("no datum named {name:?}")))?;
        let (t, c) = (&self.presheaf, self.base());
        if b.free {
            if !b.modules.is_empty() || !b.phi.is_empty() {
                return Err(SchemaError::at(&at, "a free datum takes no modules or phi"));
            }
            if b.trivialization.is_empty() {
                return Ok(free_datum(t, None));
            }
            let mut tr: Vec<Vec<Rat>> = c.morphism_ids().map(|u| t.algebra(c.source(u)).unit().to_vec()).collect();
            for (u, v) in &b.trivialization {
                let here = format!("{at}/trivialization/{}", pointer_token(u));
                let u = self.morphism_at(u, &here)?;
                tr[u] = vector(v, t.algebra(c.source(u)).dim(), &here)?;
            }
            return Ok(free_datum(t, Some(&tr)));
        }
        if !b.trivialization.is_empty() {
            return Err(SchemaError::at(format!("{at}/trivialization"), "only a free datum takes a trivialization"));
        }
        let mut modules = Vec::new();
        for o in c.objects() {
            let name = c.obj_name(o);
            let mb = b.modules.get(name).ok_or_else(|| SchemaError::at(format!("{at}/modules"), format!("no module at {name}")))?;
            modules.push(self.module_at(mb, o, &format!("{at}/modules/{}", pointer_token(name)))?);
        }
        for k in b.modules.keys().chain(b.phi.keys()) {
            if c.object(k).is_err() && c.morphism(k).is_err() {
                return Err(SchemaError::at(&at, format!("unknown name {k:?}")));
            }
        }
        let mut phi = Vec::new();
        for u in c.morphism_ids() {
            let name = c.mor_name(u);
            let (rows, cols) = (modules[c.source(u)].dim(), modules[c.target(u)].dim());
            phi.push(match b.phi.get(name) {
                Some(m) => matrix(m, rows, cols, &format!("{at}/phi/{}", pointer_token(name)))?,
                None if c.is_identity(u) => RatMatrix::identity(rows),
                None => return Err(SchemaError::at(format!("{at}/phi"), format!("no phi for {name}"))),
            });
        }
        Ok(PreDescentDatum { modules, phi })
    }
}

fn qrow(v: &[Rat]) -> serde_json::Value {
    serde_json::Value::from(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn qmatrix(m: &RatMatrix) -> serde_json::Value {
    serde_json::Value::from((0..m.rows()).map(|i| qrow(&(0..m.cols()).map(|j| m.get(i, j)).collect::<Vec<_>>())).collect::<Vec<_>>())
}

/// The presheaf in project-file form, with an explicit composition table.
pub fn presheaf_json(t: &TwistedPresheaf<Rat>) -> serde_json::Value {
    use serde_json::{json, Map, Value};
    let c = t.base();
    let mut morphisms = Vec::new();
    let mut identities = Map::new();
    let mut composition = Vec::new();
    for u in c.morphism_ids() {
        if c.is_identity(u) {
            identities.insert(c.obj_name(c.source(u)).into(), c.mor_name(u).into());
        }
        morphisms.push(json!({"name": c.mor_name(u), "source": c.obj_name(c.source(u)), "target": c.obj_name(c.target(u))}));
        for v in c.morphism_ids() {
            if c.is_identity(u) || c.is_identity(v) {
                continue;
            }
            if let Some(w) = c.try_compose(u, v) {
                composition.push(json!([c.mor_name(u), c.mor_name(v), c.mor_name(w)]));
            }
        }
    }
    let mut algebras = Map::new();
    for o in c.objects() {
        let a = t.algebra(o);
        let mult: Vec<Value> = (0..a.dim())
            .flat_map(|i| (0..a.dim()).map(move |j| (i, j)))
            .filter(|&(i, j)| a.product(i, j).iter().any(|x| *x != Rat::default()))
            .map(|(i, j)| json!([i, j, qrow(a.product(i, j))]))
            .collect();
        algebras.insert(c.obj_name(o).into(), json!({"basis": a.names(), "mult": mult, "unit": qrow(a.unit())}));
    }
    let restrictions: Map<String, Value> =
        c.morphism_ids().map(|u| (c.mor_name(u).to_string(), qmatrix(&t.restriction(u).to_sparse()))).collect();
    let twists: Map<String, Value> = t
        .explicit_twists()
        .iter()
        .map(|(&(u, v), x)| (format!("({}, {})", c.mor_name(u), c.mor_name(v)), qrow(x)))
        .collect();
    let z: Map<String, Value> = t.explicit_z().iter().map(|(&o, x)| (c.obj_name(o).to_string(), qrow(x))).collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "category": {"objects": c.object_names(), "morphisms": morphisms, "composition": composition, "identities": identities},
        "algebras": algebras,
        "restrictions": restrictions,
        "twists": twists,
        "z": z,
    })
}

/// A cochain block in project-file form; zero blocks are omitted.
pub fn cochain_json(c: &FiniteCategory, theta: &GsCochain) -> serde_json::Value {
    use serde_json::json;
    let mut blocks = Vec::new();
    for (p, part) in theta.components.iter().enumerate() {
        for (s, b) in c.nerve(p).iter().zip(part) {
            if b.is_zero() {
                continue;
            }
            let mut e = if p == 0 {
                json!({"object": c.obj_name(s.start)})
            } else {
                json!({"arrows": s.arrows.iter().map(|&u| c.mor_name(u)).collect::<Vec<_>>()})
            };
            e["matrix"] = qmatrix(b);
            blocks.push(e);
        }
    }
    json!({"degree": theta.degree, "blocks": blocks})
}
