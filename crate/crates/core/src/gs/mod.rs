//! The Gerstenhaber-Schack double complex `C^{p,q}(A) = ∏_{σ ∈ N_p}
//! Hom(A(cσ)^{⊗q}, A(dσ))` of a strict presheaf of algebras.
//!
//! A degree-`n` cochain is flattened as `p = 0, ..., n` (with `q = n - p`),
//! then simplices in nerve order, then each block column by column.

mod hodge;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use hodge::{
    eulerian_idempotents, factor_through, hodge_report, hodge_split, shuffle_operator, tuple_action, FactorReport,
    FactorResult, GroupElement, HodgeComponent, HodgeDecomposition, HodgeReport, ACTION_CONVENTION,
    DEFAULT_IDEMPOTENT_BOUND,
};

use crate::algebra::FinBimodule;
use crate::exactla::{cohomology, rank, Cohomology, LinAlgError, Rat, RatMatrix};
use crate::fincat::{MorId, Simplex};
use crate::hochschild::{hochschild_differential, op_matrix, pow, tuples_with_slot};
use crate::presheaf::TwistedPresheaf;
use crate::simpcech::{ModPresheaf, SimpComplex};

#[derive(Debug, Error)]
pub enum GsError {
    #[error("the presheaf has non-trivial twists")]
    NotStrict,
    #[error("the algebra on {0} is not commutative")]
    NotCommutative(String),
    #[error("the unit of the algebra on {0} is not a basis vector")]
    UnitNotInBasis(String),
    #[error("{kind} coordinates are not closed under the differential in degree {degree}")]
    NotASubcomplex { kind: Kind, degree: usize },
    #[error("cohomology in degree {degree} differs between kinds: {found:?}")]
    KindsDisagree { degree: usize, found: Vec<(Kind, usize)> },
    #[error("idempotent check failed: {0}")]
    VerificationFailed(String),
    #[error("degree {n} exceeds the idempotent bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Which subcomplex of `C_GS` to compute with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Full,
    Normalized,
    NormalizedReduced,
    Truncated,
    TruncatedNormalizedReduced,
}

impl Kind {
    pub const ALL: [Kind; 5] =
        [Kind::Full, Kind::Normalized, Kind::NormalizedReduced, Kind::Truncated, Kind::TruncatedNormalizedReduced];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Full => "full",
            Kind::Normalized => "normalized",
            Kind::NormalizedReduced => "normalized_reduced",
            Kind::Truncated => "truncated",
            Kind::TruncatedNormalizedReduced => "truncated_normalized_reduced",
        }
    }

    fn normalized(self) -> bool {
        !matches!(self, Kind::Full | Kind::Truncated)
    }

    fn reduced(self) -> bool {
        matches!(self, Kind::NormalizedReduced | Kind::TruncatedNormalizedReduced)
    }

    fn truncated(self) -> bool {
        matches!(self, Kind::Truncated | Kind::TruncatedNormalizedReduced)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| format!("unknown complex kind '{s}'"))
    }
}

/// One `C^{p,q}` summand inside a flattened degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Part {
    pub p: usize,
    pub q: usize,
    pub offset: usize,
    pub len: usize,
}

/// A degree-`n` cochain: `components[p][k]` is the block of the `k`-th
/// simplex of `N_p`, a `dim A(dσ) × dim A(cσ)^{n-p}` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GsCochain {
    pub degree: usize,
    pub components: Vec<Vec<RatMatrix>>,
}

impl GsCochain {
    /// `θ_{p, n-p}`.
    pub fn part(&self, p: usize) -> &[RatMatrix] {
        &self.components[p]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(|b| b.is_zero())
    }
}

/// `C_GS(A)` of a strict presheaf, differentials assembled on demand.
pub struct GsComplex {
    a: TwistedPresheaf<Rat>,
    hoch: Mutex<HashMap<(MorId, usize), Arc<RatMatrix>>>,
}

impl fmt::Debug for GsComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GsComplex").field("objects", &self.a.base().num_objects()).finish()
    }
}

impl GsComplex {
    pub fn new(a: &TwistedPresheaf<Rat>) -> Result<Self, GsError> {
        if !a.has_trivial_twists() {
            return Err(GsError::NotStrict);
        }
        Ok(GsComplex { a: a.clone(), hoch: Mutex::new(HashMap::new()) })
    }

    pub fn presheaf(&self) -> &TwistedPresheaf<Rat> {
        &self.a
    }

    /// Row `q` of the double complex: `C_simp(A^{⊗q}, A)`.
    pub fn row(&self, q: usize) -> SimpComplex {
        SimpComplex::new(ModPresheaf::tensor_power(&self.a, q), ModPresheaf::underlying(&self.a)).expect("same base")
    }

    /// `(dim A(dσ), dim A(cσ))`.
    pub fn dims_of(&self, s: &Simplex) -> (usize, usize) {
        let c = self.a.base();
        (self.a.algebra(c.start(s)).dim(), self.a.algebra(c.end(s)).dim())
    }

    pub fn parts(&self, n: usize) -> Vec<Part> {
        let mut offset = 0;
        (0..=n)
            .map(|p| {
                let q = n - p;
                let len = self.row(q).cochain_dim(p);
                let part = Part { p, q, offset, len };
                offset += len;
                part
            })
            .collect()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.parts(n).iter().map(|x| x.len).sum()
    }

    /// The Hochschild differential of `A(cσ)` with values in `A(dσ)` via `f^σ`.
    pub fn hochschild_block(&self, s: &Simplex, q: usize) -> Arc<RatMatrix> {
        let c = self.a.base();
        let u = c.composite(s);
        let key = (u, q);
        if let Some(m) = self.hoch.lock().unwrap().get(&key) {
            return m.clone();
        }
        let (ac, ad) = (self.a.algebra(c.target(u)), self.a.algebra(c.source(u)));
        let bimod = FinBimodule::along(ac, self.a.restriction(u), ad);
        let left: Vec<RatMatrix> = (0..ac.dim()).map(|j| bimod.left(j).clone()).collect();
        let right: Vec<RatMatrix> = (0..ac.dim()).map(|j| bimod.right(j).clone()).collect();
        let m = Arc::new(hochschild_differential(ac, ad.dim(), &left, &right, q));
        self.hoch.lock().unwrap().insert(key, m.clone());
        m
    }

    /// `d_Hoch: C^{p,q} -> C^{p,q+1}`, block diagonal over `N_p`.
    pub fn d_hoch_part(&self, p: usize, q: usize) -> RatMatrix {
        let nerve = self.a.base().nerve(p);
        let blocks: Vec<RatMatrix> = nerve.iter().map(|s| (*self.hochschild_block(s, q)).clone()).collect();
        RatMatrix::block_diag(&blocks)
    }

    /// `d_simp: C^{p,q} -> C^{p+1,q}`.
    pub fn d_simp_part(&self, p: usize, q: usize) -> RatMatrix {
        self.row(q).differential(p)
    }

    /// `d^n_GS = (-1)^{n+1} d_simp + d_Hoch`.
    pub fn differential(&self, n: usize) -> RatMatrix {
        let (src, tgt) = (self.parts(n), self.parts(n + 1));
        let simp_sign = if n.is_multiple_of(2) { -Rat::from_integer(1.into()) } else { Rat::from_integer(1.into()) };
        let mut entries = Vec::new();
        for part in &src {
            let (p, q) = (part.p, part.q);
            let hoch_target = &tgt[p];
            for (r, c, v) in self.d_hoch_part(p, q).triplets() {
                entries.push((hoch_target.offset + r, part.offset + c, v.clone()));
            }
            let simp_target = &tgt[p + 1];
            for (r, c, v) in self.d_simp_part(p, q).triplets() {
                entries.push((simp_target.offset + r, part.offset + c, &simp_sign * v));
            }
        }
        RatMatrix::from_triplets(self.dim(n + 1), self.dim(n), entries)
    }

    /// Flat coordinates of the `kind` subcomplex in degree `n`.
    pub fn coords(&self, kind: Kind, n: usize) -> Result<Vec<usize>, GsError> {
        let c = self.a.base().clone();
        let mut out = Vec::new();
        for part in self.parts(n) {
            let (p, q) = (part.p, part.q);
            if kind.truncated() && q == 0 {
                continue;
            }
            let layout = self.row(q).layout(p);
            for (k, s) in c.nerve(p).iter().enumerate() {
                if kind.reduced() && p >= 1 && c.is_degenerate(s) {
                    continue;
                }
                let (m, dc) = self.dims_of(s);
                let base = part.offset + layout.offsets[k];
                let keep: Vec<bool> = if kind.normalized() && q > 0 {
                    let end = c.end(s);
                    let u = self.a.algebra(end).unit_index().ok_or_else(|| GsError::UnitNotInBasis(c.obj_name(end).into()))?;
                    tuples_with_slot(dc, q, u).into_iter().map(|x| !x).collect()
                } else {
                    vec![true; pow(dc, q)]
                };
                for (t, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
                    out.extend((0..m).map(|x| base + t * m + x));
                }
            }
        }
        Ok(out)
    }

    /// Selection matrix onto the `kind` coordinates.
    pub fn projector(&self, kind: Kind, n: usize) -> Result<RatMatrix, GsError> {
        let coords = self.coords(kind, n)?;
        let one = Rat::from_integer(1.into());
        Ok(RatMatrix::from_triplets(coords.len(), self.dim(n), coords.iter().enumerate().map(|(i, &c)| (i, c, one.clone()))))
    }

    /// `d^n` restricted to the `kind` subcomplex; fails if the coordinates
    /// are not carried into themselves.
    pub fn restricted_differential(&self, kind: Kind, n: usize) -> Result<RatMatrix, GsError> {
        let d = self.differential(n);
        let (src, tgt) = (self.coords(kind, n)?, self.coords(kind, n + 1)?);
        let cols = d.select_cols(&src);
        let mut inside = vec![false; d.rows()];
        for &t in &tgt {
            inside[t] = true;
        }
        if cols.triplets().any(|(r, _, _)| !inside[r]) {
            return Err(GsError::NotASubcomplex { kind, degree: n });
        }
        Ok(cols.select_rows(&tgt))
    }

    pub fn cohomology(&self, n: usize, kind: Kind) -> Result<Cohomology, GsError> {
        let d_in = match n.checked_sub(1) {
            Some(k) => self.restricted_differential(kind, k)?,
            None => RatMatrix::zeros(self.coords(kind, 0)?.len(), 0),
        };
        Ok(cohomology(&d_in, &self.restricted_differential(kind, n)?)?)
    }

    /// Embeds `kind` coordinates into the full degree-`n` space.
    pub fn embed(&self, kind: Kind, n: usize, v: &[Rat]) -> Result<Vec<Rat>, GsError> {
        let coords = self.coords(kind, n)?;
        let mut out = vec![Rat::default(); self.dim(n)];
        for (k, c) in coords.into_iter().enumerate() {
            out[c] = v[k].clone();
        }
        Ok(out)
    }

    pub fn zero(&self, n: usize) -> GsCochain {
        self.from_vec(n, &vec![Rat::default(); self.dim(n)]).expect("zero has the right length")
    }

    pub fn from_vec(&self, n: usize, v: &[Rat]) -> Result<GsCochain, GsError> {
        if v.len() != self.dim(n) {
            return Err(GsError::Shape(format!("degree {n} needs {} coordinates, got {}", self.dim(n), v.len())));
        }
        let components = self
            .parts(n)
            .into_iter()
            .map(|part| self.row(part.q).blocks(part.p, &v[part.offset..part.offset + part.len]))
            .collect();
        Ok(GsCochain { degree: n, components })
    }

    pub fn to_vec(&self, theta: &GsCochain) -> Result<Vec<Rat>, GsError> {
        let n = theta.degree;
        if theta.components.len() != n + 1 {
            return Err(GsError::Shape(format!("degree {n} needs {} components", n + 1)));
        }
        let mut out = Vec::with_capacity(self.dim(n));
        for part in self.parts(n) {
            let row = self.row(part.q);
            let blocks = &theta.components[part.p];
            let nerve = self.a.base().nerve(part.p);
            if blocks.len() != nerve.len() {
                return Err(GsError::Shape(format!("C^{{{},{}}} has {} simplices", part.p, part.q, nerve.len())));
            }
            for (s, b) in nerve.iter().zip(blocks) {
                if b.shape() != row.block_shape(s) {
                    return Err(GsError::Shape(format!("block of {} has shape {:?}", self.a.base().simplex_name(s), b.shape())));
                }
            }
            out.extend(row.flatten_blocks(part.p, blocks));
        }
        Ok(out)
    }

    pub fn d_gs(&self, theta: &GsCochain) -> Result<GsCochain, GsError> {
        let v = self.differential(theta.degree).mul_vec(&self.to_vec(theta)?);
        self.from_vec(theta.degree + 1, &v)
    }

    /// `θ ↦ θ^op`, blockwise `(-1)^{λ(q)}` times argument reversal.
    pub fn op_matrix(&self, n: usize) -> RatMatrix {
        let c = self.a.base();
        let blocks: Vec<RatMatrix> = self
            .parts(n)
            .iter()
            .flat_map(|part| {
                c.nerve(part.p)
                    .iter()
                    .map(|s| {
                        let (m, dc) = self.dims_of(s);
                        op_matrix(dc, m, part.q)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        RatMatrix::block_diag(&blocks)
    }

    /// The complex of `A^op`.
    pub fn opposite(&self) -> GsComplex {
        let op = self.a.opposite_twisted().expect("trivial twists are invertible");
        GsComplex { a: op, hoch: Mutex::new(HashMap::new()) }
    }

    pub fn gs_op(&self, theta: &GsCochain) -> Result<GsCochain, GsError> {
        let v = self.op_matrix(theta.degree).mul_vec(&self.to_vec(theta)?);
        self.from_vec(theta.degree, &v)
    }

    /// Whether `op` is a chain map `C_GS(A) -> C_GS(A^op)` into degree `n + 1`
    /// and squares to the identity in degree `n`.
    pub fn check_op(&self, n: usize) -> OpCheck {
        let op = self.opposite();
        let (o_n, o_n1) = (self.op_matrix(n), self.op_matrix(n + 1));
        OpCheck {
            degree: n,
            chain_map: o_n1.mul(&self.differential(n)) == op.differential(n).mul(&o_n),
            involution: op.op_matrix(n).mul(&o_n) == RatMatrix::identity(o_n.rows()),
        }
    }

    fn require_commutative(&self) -> Result<(), GsError> {
        let c = self.a.base();
        match c.objects().find(|&o| !self.a.algebra(o).is_commutative()) {
            Some(o) => Err(GsError::NotCommutative(c.obj_name(o).into())),
            None => Ok(()),
        }
    }

    /// Coordinates of the bottom row `q = 0`.
    fn bottom_coords(&self, n: usize) -> Vec<usize> {
        let bottom = &self.parts(n)[n];
        (bottom.offset..bottom.offset + bottom.len).collect()
    }
}

/// `op` on one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OpCheck {
    pub degree: usize,
    pub chain_map: bool,
    pub involution: bool,
}

/// Betti numbers of one degree for each requested kind.
#[derive(Debug, Clone, Serialize)]
pub struct GsReport {
    pub degree: usize,
    pub betti: usize,
    pub by_kind: Vec<(Kind, usize)>,
    /// Full-coordinate cocycles of the first kind whose classes form a basis.
    #[serde(skip)]
    pub representatives: Vec<Vec<Rat>>,
}

/// `H^n_GS(A)` for each kind in `kinds` (the first one supplies the
/// representatives). Full, normalized and normalized reduced cochains must
/// agree, and so must the two truncated kinds; `betti` is that of the first kind.
pub fn gs_cohomology(a: &TwistedPresheaf<Rat>, n: usize, kinds: &[Kind]) -> Result<GsReport, GsError> {
    let cx = GsComplex::new(a)?;
    gs_cohomology_of(&cx, n, kinds)
}

pub fn gs_cohomology_of(cx: &GsComplex, n: usize, kinds: &[Kind]) -> Result<GsReport, GsError> {
    let kinds = if kinds.is_empty() { &[Kind::Full][..] } else { kinds };
    let mut by_kind = Vec::new();
    let mut representatives = Vec::new();
    for (i, &kind) in kinds.iter().enumerate() {
        let h = cx.cohomology(n, kind)?;
        if i == 0 {
            representatives = h
                .representatives
                .columns()
                .iter()
                .map(|col| cx.embed(kind, n, col))
                .collect::<Result<_, _>>()?;
        }
        by_kind.push((kind, h.dim));
    }
    let disagree = |t: bool| {
        let mut family = by_kind.iter().filter(|(k, _)| k.truncated() == t);
        family.next().is_some_and(|(_, b)| family.any(|(_, c)| c != b))
    };
    if disagree(false) || disagree(true) {
        return Err(GsError::KindsDisagree { degree: n, found: by_kind });
    }
    Ok(GsReport { degree: n, betti: by_kind[0].1, by_kind, representatives })
}

/// `C_GS = C_tGS ⊕ C_simp` in one degree.
#[derive(Debug, Clone, Serialize)]
pub struct SplitDegree {
    pub degree: usize,
    pub total: usize,
    pub truncated: usize,
    pub bottom: usize,
    /// Projection onto the bottom row commutes with `d_GS`.
    pub projection_chain_map: bool,
    /// The bottom row is closed under `d_GS`.
    pub section_chain_map: bool,
}

impl SplitDegree {
    pub fn additive(&self) -> bool {
        self.total == self.truncated + self.bottom
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitReport {
    pub degrees: Vec<SplitDegree>,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.additive() && d.projection_chain_map && d.section_chain_map)
    }
}

/// Splits off the bottom row of a commutative presheaf in degrees `0..=n_max`.
pub fn split_commutative(a: &TwistedPresheaf<Rat>, n_max: usize) -> Result<SplitReport, GsError> {
    let cx = GsComplex::new(a)?;
    cx.require_commutative()?;
    let selector = |n: usize| {
        let coords = cx.bottom_coords(n);
        let one = Rat::from_integer(1.into());
        RatMatrix::from_triplets(coords.len(), cx.dim(n), coords.iter().enumerate().map(|(i, &c)| (i, c, one.clone())))
    };
    let mut degrees = Vec::new();
    for n in 0..=n_max {
        let d = cx.differential(n);
        let (p_n, p_n1) = (selector(n), selector(n + 1));
        let d_bottom = p_n1.mul(&d).mul(&p_n.transpose());
        let projection_chain_map = p_n1.mul(&d) == d_bottom.mul(&p_n);
        let section_chain_map = d.mul(&p_n.transpose()) == p_n1.transpose().mul(&d_bottom);
        let bottom_in = match n.checked_sub(1) {
            Some(k) => p_n.mul(&cx.differential(k)).mul(&selector(k).transpose()),
            None => RatMatrix::zeros(p_n.rows(), 0),
        };
        let bottom = p_n.rows() - rank(&d_bottom) - rank(&bottom_in);
        degrees.push(SplitDegree {
            degree: n,
            total: cx.cohomology(n, Kind::Full)?.dim,
            truncated: cx.cohomology(n, Kind::Truncated)?.dim,
            bottom,
            projection_chain_map,
            section_chain_map,
        });
    }
    Ok(SplitReport { degrees })
}
