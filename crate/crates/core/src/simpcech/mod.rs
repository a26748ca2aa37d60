//! Simplicial cohomology `C(G, F)` of a pair of presheaves of vector spaces,
//! the simplicial presheaf complex `A•`, and the alternating Cech complex on
//! a meet poset with the comparison maps `ι`, `π` and the homotopy `h`.

mod cech;
mod presheaf_complex;

use std::sync::Arc;

use num_traits::Zero;

use crate::exactla::{cohomology, Cohomology, DMat, LinAlgError, Rat, RatMatrix};
use crate::fincat::{FiniteCategory, MorId, ObjId, Simplex};
use crate::hochschild::sign;
use crate::presheaf::TwistedPresheaf;

pub use cech::{CechComplex, HomotopyCheck};
pub use presheaf_complex::{presheaf_complex, PresheafComplex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimpCechError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a functor: {0}")]
    NotFunctorial(String),
    #[error("{count} tuples exceed the enumeration bound {bound}")]
    TooManyTuples { count: usize, bound: usize },
    #[error("cochain is not {0}")]
    WrongSubspace(&'static str),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Category(#[from] crate::fincat::CategoryError),
}

/// A presheaf of finite-dimensional vector spaces: `F(U)` of dimension
/// `dims[U]` and `f^u: F(U) -> F(V)` for `u: V -> U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPresheaf {
    base: Arc<FiniteCategory>,
    dims: Vec<usize>,
    maps: Vec<RatMatrix>,
}

impl ModPresheaf {
    pub fn new(base: Arc<FiniteCategory>, dims: Vec<usize>, maps: Vec<RatMatrix>) -> Result<Self, SimpCechError> {
        if dims.len() != base.num_objects() || maps.len() != base.num_morphisms() {
            return Err(SimpCechError::Shape("one dimension per object and one map per arrow".into()));
        }
        for u in base.morphism_ids() {
            let want = (dims[base.source(u)], dims[base.target(u)]);
            if maps[u].shape() != want {
                return Err(SimpCechError::Shape(format!("map at {} is {:?}, expected {:?}", base.mor_name(u), maps[u].shape(), want)));
            }
        }
        let f = ModPresheaf { base, dims, maps };
        f.check_functorial()?;
        Ok(f)
    }

    fn check_functorial(&self) -> Result<(), SimpCechError> {
        let c = &self.base;
        for o in c.objects() {
            if self.maps[c.identity(o)] != RatMatrix::identity(self.dims[o]) {
                return Err(SimpCechError::NotFunctorial(format!("identity at {}", c.obj_name(o))));
            }
        }
        for u in c.morphism_ids() {
            for v in c.arrows_into(c.source(u)) {
                if self.maps[c.compose(u, v)] != self.maps[v].mul(&self.maps[u]) {
                    return Err(SimpCechError::NotFunctorial(format!("f^v f^u != f^uv at ({}, {})", c.mor_name(u), c.mor_name(v))));
                }
            }
        }
        Ok(())
    }

    /// The constant presheaf `k`.
    pub fn constant(base: Arc<FiniteCategory>) -> Self {
        let dims = vec![1; base.num_objects()];
        let maps = base.morphism_ids().map(|_| RatMatrix::identity(1)).collect();
        ModPresheaf { base, dims, maps }
    }

    /// `U ↦ A(U)^{⊗q}` with restrictions `(f^u)^{⊗q}`; requires `c = 1`.
    pub fn tensor_power(a: &TwistedPresheaf<Rat>, q: usize) -> Self {
        let base = a.base().clone();
        let dims = base.objects().map(|o| a.algebra(o).dim().pow(q as u32)).collect();
        let maps = base
            .morphism_ids()
            .map(|u| {
                let f = a.restriction(u).to_sparse();
                (0..q).fold(RatMatrix::identity(1), |acc, _| acc.kron(&f))
            })
            .collect();
        ModPresheaf { base, dims, maps }
    }

    /// The underlying presheaf of vector spaces of a presheaf of algebras.
    pub fn underlying(a: &TwistedPresheaf<Rat>) -> Self {
        Self::tensor_power(a, 1)
    }

    pub fn from_dense(base: Arc<FiniteCategory>, dims: Vec<usize>, maps: &[DMat<Rat>]) -> Result<Self, SimpCechError> {
        Self::new(base, dims, maps.iter().map(|m| m.to_sparse()).collect())
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    pub fn dim(&self, o: ObjId) -> usize {
        self.dims[o]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn map(&self, u: MorId) -> &RatMatrix {
        &self.maps[u]
    }
}

/// `C(G, F) = ∏_σ Hom(G(cσ), F(dσ))`, each block stored column by column.
#[derive(Debug, Clone)]
pub struct SimpComplex {
    g: ModPresheaf,
    f: ModPresheaf,
}

/// Offsets of the per-simplex blocks of one cochain space.
#[derive(Debug, Clone)]
pub struct BlockLayout {
    pub offsets: Vec<usize>,
    pub total: usize,
}

impl SimpComplex {
    pub fn new(g: ModPresheaf, f: ModPresheaf) -> Result<Self, SimpCechError> {
        if g.base != f.base {
            return Err(SimpCechError::Shape("presheaves on different categories".into()));
        }
        Ok(SimpComplex { g, f })
    }

    /// `C_simp(F) = C(k, F)`.
    pub fn of(f: ModPresheaf) -> Self {
        SimpComplex { g: ModPresheaf::constant(f.base.clone()), f }
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.f.base
    }

    pub fn source_presheaf(&self) -> &ModPresheaf {
        &self.g
    }

    pub fn target_presheaf(&self) -> &ModPresheaf {
        &self.f
    }

    /// `dim F(dσ) × dim G(cσ)`.
    pub fn block_shape(&self, s: &Simplex) -> (usize, usize) {
        let c = self.base();
        (self.f.dims[c.start(s)], self.g.dims[c.end(s)])
    }

    pub fn layout(&self, p: usize) -> BlockLayout {
        let nerve = self.base().nerve(p);
        let mut offsets = Vec::with_capacity(nerve.len());
        let mut total = 0;
        for s in nerve.iter() {
            offsets.push(total);
            let (r, c) = self.block_shape(s);
            total += r * c;
        }
        BlockLayout { offsets, total }
    }

    pub fn cochain_dim(&self, p: usize) -> usize {
        self.layout(p).total
    }

    /// `d_simp = Σ_{i=0}^{p+1} (-1)^i d_i : C^p -> C^{p+1}`.
    pub fn differential(&self, p: usize) -> RatMatrix {
        let c = self.base().clone();
        let (src, tgt) = (self.layout(p), self.layout(p + 1));
        let (lo, hi) = (c.nerve(p), c.nerve(p + 1));
        let mut entries = Vec::new();
        for (k, s) in hi.iter().enumerate() {
            let (fr, gc) = self.block_shape(s);
            let row0 = tgt.offsets[k];
            for i in 0..=p + 1 {
                let face = c.face(s, i).expect("face index in range");
                let col0 = src.offsets[lo.position(&face).expect("face lies in the nerve")];
                let sg = sign(i);
                if i == 0 {
                    // f^{u_1} ∘ φ^{∂_0 σ}; φ block is F(U_1) x G(cσ)
                    let fu = &self.f.maps[s.arrows[0]];
                    let inner = fu.cols();
                    for g in 0..gc {
                        for (a, b, v) in fu.triplets() {
                            entries.push((row0 + g * fr + a, col0 + g * inner + b, &sg * v));
                        }
                    }
                } else if i == p + 1 {
                    // φ^{∂_{p+1} σ} ∘ g^{u_{p+1}}; φ block is F(dσ) x G(U_p)
                    let gu = &self.g.maps[s.arrows[p]];
                    for (b, g, v) in gu.triplets() {
                        for a in 0..fr {
                            entries.push((row0 + g * fr + a, col0 + b * fr + a, &sg * v));
                        }
                    }
                } else {
                    for x in 0..fr * gc {
                        entries.push((row0 + x, col0 + x, sg.clone()));
                    }
                }
            }
        }
        RatMatrix::from_triplets(tgt.total, src.total, entries)
    }

    /// Coordinates supported on non-degenerate simplices (all of them for `p = 0`).
    pub fn reduced_coords(&self, p: usize) -> Vec<usize> {
        let c = self.base();
        let layout = self.layout(p);
        let mut out = Vec::new();
        for (k, s) in c.nerve(p).iter().enumerate() {
            if p == 0 || !c.is_degenerate(s) {
                let (r, cc) = self.block_shape(s);
                out.extend(layout.offsets[k]..layout.offsets[k] + r * cc);
            }
        }
        out
    }

    pub fn reduced_differential(&self, p: usize) -> RatMatrix {
        self.differential(p).select_rows(&self.reduced_coords(p + 1)).select_cols(&self.reduced_coords(p))
    }

    pub fn cohomology(&self, p: usize, reduced: bool) -> Result<Cohomology, SimpCechError> {
        let (d_in, d_out) = if reduced {
            let d_in = match p.checked_sub(1) {
                Some(k) => self.reduced_differential(k),
                None => RatMatrix::zeros(self.reduced_coords(0).len(), 0),
            };
            (d_in, self.reduced_differential(p))
        } else {
            let d_in = match p.checked_sub(1) {
                Some(k) => self.differential(k),
                None => RatMatrix::zeros(self.cochain_dim(0), 0),
            };
            (d_in, self.differential(p))
        };
        Ok(cohomology(&d_in, &d_out)?)
    }

    /// Per-simplex blocks of a flat cochain.
    pub fn blocks(&self, p: usize, v: &[Rat]) -> Vec<RatMatrix> {
        let layout = self.layout(p);
        self.base()
            .nerve(p)
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let (r, c) = self.block_shape(s);
                let o = layout.offsets[k];
                RatMatrix::from_triplets(
                    r,
                    c,
                    (0..r * c).filter(|x| !v[o + x].is_zero()).map(|x| (x % r, x / r, v[o + x].clone())),
                )
            })
            .collect()
    }

    /// Flattens per-simplex blocks.
    pub fn flatten_blocks(&self, p: usize, blocks: &[RatMatrix]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.cochain_dim(p)];
        let layout = self.layout(p);
        for (k, b) in blocks.iter().enumerate() {
            for (i, j, v) in b.triplets() {
                out[layout.offsets[k] + j * b.rows() + i] = v.clone();
            }
        }
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::FinAlgebra;
    use crate::exactla::rat;
    use crate::presheaf::Presheaf;

    pub(crate) fn v_poset() -> Arc<FiniteCategory> {
        Arc::new(FiniteCategory::poset(&["U0", "U1", "U01"], &[("U01", "U0"), ("U01", "U1")]).unwrap())
    }

    pub(crate) fn diamond() -> Arc<FiniteCategory> {
        Arc::new(
            FiniteCategory::poset(&["B", "M1", "M2", "T"], &[("B", "M1"), ("B", "M2"), ("M1", "T"), ("M2", "T")]).unwrap(),
        )
    }

    #[test]
    fn constant_v_poset_is_contractible() {
        let cx = SimpComplex::of(ModPresheaf::constant(v_poset()));
        let betti: Vec<usize> = (0..4).map(|p| cx.cohomology(p, false).unwrap().dim).collect();
        assert_eq!(betti, vec![1, 0, 0, 0]);
        let reduced: Vec<usize> = (0..4).map(|p| cx.cohomology(p, true).unwrap().dim).collect();
        assert_eq!(reduced, betti);
    }

    #[test]
    fn degree_zero_differences() {
        let c = v_poset();
        let cx = SimpComplex::of(ModPresheaf::constant(c.clone()));
        // x = (x_U0, x_U1, x_U01) in object order U0, U01, U1
        let order: Vec<&str> = c.objects().map(|o| c.obj_name(o)).collect();
        assert_eq!(order, vec!["U0", "U01", "U1"]);
        let x = vec![rat(5), rat(2), rat(7)];
        let dx = cx.differential(0).mul_vec(&x);
        for (k, s) in c.nerve(1).iter().enumerate() {
            let u = s.arrows[0];
            // (d x)^{u: V -> U} = x_U|_V - x_V
            let want = &x[c.target(u)] - &x[c.source(u)];
            assert_eq!(dx[k], want, "{}", c.mor_name(u));
        }
    }

    #[test]
    fn squares_to_zero_for_pairs() {
        let c = diamond();
        let a = Presheaf::constant(c.clone(), FinAlgebra::dual_numbers());
        for q in 0..3 {
            let cx = SimpComplex::new(ModPresheaf::tensor_power(&a, q), ModPresheaf::underlying(&a)).unwrap();
            for p in 0..3 {
                assert!(cx.differential(p + 1).mul(&cx.differential(p)).is_zero(), "q={q} p={p}");
            }
        }
    }

    #[test]
    fn identity_cochain_is_closed() {
        let p = crate::presheaf::tests::v_dual();
        let cx = SimpComplex::new(ModPresheaf::underlying(&p), ModPresheaf::underlying(&p)).unwrap();
        let c = cx.base().clone();
        let blocks: Vec<RatMatrix> = c.objects().map(|o| RatMatrix::identity(p.algebra(o).dim())).collect();
        let v = cx.flatten_blocks(0, &blocks);
        assert!(cx.differential(0).mul_vec(&v).iter().all(Zero::is_zero));
    }

    #[test]
    fn functoriality_checked() {
        let c = v_poset();
        let mut maps: Vec<RatMatrix> = c.morphism_ids().map(|_| RatMatrix::identity(1)).collect();
        let u = c.morphism("U01->U0").unwrap();
        maps[u] = RatMatrix::from_i64_rows(&[&[2]]);
        assert!(ModPresheaf::new(c.clone(), vec![1; 3], maps.clone()).is_ok());
        let one = c.identity(0);
        maps[one] = RatMatrix::from_i64_rows(&[&[3]]);
        assert!(matches!(ModPresheaf::new(c, vec![1; 3], maps), Err(SimpCechError::NotFunctorial(_))));
    }
}
