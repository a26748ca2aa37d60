use serde::Serialize;

use super::{DescentError, SAMPLE_NOTE};
use crate::algebra::{hom_space, tensor_over, FinModule, TensorProduct};
use crate::exactla::{kernel, rank, Rat, RatMatrix};
use crate::fincat::{ObjId, SliceCategory};
use crate::presheaf::TwistedPresheaf;

/// `M̃` on `U/U`: `M̃(u) = M ⊗_u A(V)` and `M̃(b) = 1_M ⊗ b*`.
#[derive(Debug, Clone)]
pub struct QPresheafObject {
    pub over: ObjId,
    pub module: FinModule,
    pub slice: SliceCategory,
    /// Indexed by slice object.
    pub values: Vec<TensorProduct>,
    /// Indexed by slice morphism `x -> y`, a map `M̃(y) -> M̃(x)`.
    pub transitions: Vec<RatMatrix>,
}

fn require_central(t: &TwistedPresheaf<Rat>) -> Result<(), DescentError> {
    if t.has_central_twists().0 {
        Ok(())
    } else {
        Err(DescentError::CentralityRequired)
    }
}

/// `Q^U(M)`.
pub fn q_functor(t: &TwistedPresheaf<Rat>, over: ObjId, m: &FinModule) -> Result<QPresheafObject, DescentError> {
    require_central(t)?;
    if m.algebra.dim() != t.algebra(over).dim() {
        return Err(DescentError::Shape("module over the wrong algebra".into()));
    }
    let c = t.base();
    let slice = SliceCategory::new(c, over);
    let sc = &slice.category;
    let values: Vec<TensorProduct> = sc
        .objects()
        .map(|o| {
            let u = slice.arrow_of(o);
            tensor_over(m, t.restriction(u), t.algebra(c.source(u)))
        })
        .collect();
    let transitions = sc
        .morphism_ids()
        .map(|s| {
            let (x, y) = (sc.source(s), sc.target(s));
            let fb = t.restriction(slice.base_arrow(s)).to_sparse();
            values[x].proj().mul(&RatMatrix::identity(m.dim()).kron(&fb)).mul(values[y].section())
        })
        .collect();
    Ok(QPresheafObject { over, module: m.clone(), slice, values, transitions })
}

impl QPresheafObject {
    pub fn dim_at(&self, o: ObjId) -> usize {
        self.values[o].dim()
    }

    /// Identities go to identities and composites to composites.
    pub fn is_functorial(&self) -> bool {
        let sc = &self.slice.category;
        let ids = sc.objects().all(|o| self.transitions[sc.identity(o)] == RatMatrix::identity(self.dim_at(o)));
        let comp = sc.morphism_ids().all(|s1| {
            sc.arrows_out_of(sc.target(s1))
                .into_iter()
                .all(|s2| self.transitions[sc.compose(s2, s1)] == self.transitions[s1].mul(&self.transitions[s2]))
        });
        ids && comp
    }

    /// Basis of natural transformations `self -> other` of presheaves of
    /// modules, as concatenated column-major blocks per slice object.
    pub fn hom_space(&self, other: &QPresheafObject) -> RatMatrix {
        let sc = &self.slice.category;
        let sizes: Vec<(usize, usize)> = sc.objects().map(|o| (other.dim_at(o), self.dim_at(o))).collect();
        let mut offset = vec![0];
        for (r, s) in &sizes {
            offset.push(offset.last().unwrap() + r * s);
        }
        let n = *offset.last().unwrap();
        let place = |m: RatMatrix, o: usize| {
            RatMatrix::from_triplets(m.rows(), n, m.triplets().map(|(r, k, v)| (r, offset[o] + k, v.clone())).collect::<Vec<_>>())
        };
        let mut eqs = RatMatrix::zeros(0, n);
        for o in sc.objects() {
            let (a, b) = (&self.values[o].module, &other.values[o].module);
            for j in 0..a.algebra.dim() {
                let e = a.action()[j]
                    .transpose()
                    .kron(&RatMatrix::identity(b.dim()))
                    .sub(&RatMatrix::identity(a.dim()).kron(&b.action()[j]));
                eqs = eqs.vstack(&place(e, o));
            }
        }
        for s in sc.morphism_ids() {
            let (x, y) = (sc.source(s), sc.target(s));
            // F^x M̃(s) − Ñ(s) F^y
            let lhs = self.transitions[s].transpose().kron(&RatMatrix::identity(other.dim_at(x)));
            let rhs = RatMatrix::identity(self.dim_at(y)).kron(&other.transitions[s]);
            eqs = eqs.vstack(&place(lhs, x).sub(&place(rhs, y)));
        }
        kernel(&eqs)
    }

    /// `Q^U(g) = (g ⊗ 1)` flattened as in [`QPresheafObject::hom_space`].
    pub fn lift(&self, other: &QPresheafObject, g: &RatMatrix) -> Vec<Rat> {
        let mut out = Vec::new();
        for o in self.slice.category.objects() {
            let db = self.values[o].module.algebra.dim();
            let f = other.values[o].proj().mul(&g.kron(&RatMatrix::identity(db))).mul(self.values[o].section());
            let rows = f.rows();
            let mut block = vec![Rat::default(); rows * f.cols()];
            for (r, k, v) in f.triplets() {
                block[k * rows + r] = v.clone();
            }
            out.extend(block);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HomDims {
    /// `dim Hom_{A(U)}(M, N)`.
    pub modules: usize,
    /// `dim Hom(M̃, Ñ)` as presheaves of modules.
    pub presheaves: usize,
    /// Rank of `g ↦ g ⊗ 1` on a basis of module maps.
    pub image_rank: usize,
}

impl HomDims {
    pub fn fully_faithful(&self) -> bool {
        self.modules == self.presheaves && self.image_rank == self.modules
    }
}

/// Compares the two hom spaces of a pair of modules over `A(U)`.
pub fn q_hom_dims(t: &TwistedPresheaf<Rat>, over: ObjId, m: &FinModule, n: &FinModule) -> Result<HomDims, DescentError> {
    let (qm, qn) = (q_functor(t, over, m)?, q_functor(t, over, n)?);
    let hm = hom_space(m, n);
    let hp = qm.hom_space(&qn);
    let lifted: Vec<Vec<Rat>> = hm
        .columns()
        .iter()
        .map(|col| {
            let g = RatMatrix::from_columns(n.dim(), &(0..m.dim()).map(|k| col[k * n.dim()..(k + 1) * n.dim()].to_vec()).collect::<Vec<_>>());
            qm.lift(&qn, &g)
        })
        .collect();
    let image_rank = if lifted.is_empty() { 0 } else { rank(&RatMatrix::from_columns(lifted[0].len(), &lifted)) };
    Ok(HomDims { modules: hm.cols(), presheaves: hp.cols(), image_rank })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PseudonaturalReport {
    /// Triples `(u, v, w)` times sample modules evaluated.
    pub checked: usize,
    pub failures: Vec<String>,
    /// Pairs `(1_U, w)` evaluated for the unit identity.
    pub unit_checked: usize,
    pub unit_failures: Vec<String>,
    pub note: &'static str,
}

impl PseudonaturalReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.unit_failures.is_empty()
    }
}

/// `proj(y ⊗ b)` in a tensor product `Y ⊗ B`.
fn pure(p: &TensorProduct, y: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let db = b.len();
    let mut flat = vec![Rat::default(); y.len() * db];
    for (i, yi) in y.iter().enumerate() {
        if *yi == Rat::default() {
            continue;
        }
        for (k, bk) in b.iter().enumerate() {
            flat[i * db + k] = yi * bk;
        }
    }
    p.proj().mul_vec(&flat)
}

fn unit_vec(n: usize, i: usize) -> Vec<Rat> {
    super::basis(n, i)
}

/// The map whose value on the flat basis element `(i, k)` of `src` is `f(i, k)`.
fn induced(src: &TensorProduct, tgt_dim: usize, db: usize, f: impl Fn(usize, usize) -> Vec<Rat>) -> RatMatrix {
    let mut cols = Vec::with_capacity(src.dim());
    for x in 0..src.dim() {
        let mut acc = vec![Rat::default(); tgt_dim];
        for (flat, _, s) in src.section().triplets().filter(|&(_, col, _)| col == x) {
            let (i, k) = (flat / db, flat % db);
            for (a, v) in acc.iter_mut().zip(f(i, k)) {
                *a += s * v;
            }
        }
        cols.push(acc);
    }
    RatMatrix::from_columns(tgt_dim, &cols)
}

/// Evaluates both sides of the pseudonaturality identity of `Q` on every
/// sample `(U, M)`, composable `u: V -> U`, `v: W -> V` and `w: T -> W`,
/// and the unit identity on every `w: T -> U`.
pub fn verify_pseudonatural(t: &TwistedPresheaf<Rat>, samples: &[(ObjId, FinModule)]) -> Result<PseudonaturalReport, DescentError> {
    require_central(t)?;
    let c = t.base();
    let alg = |o: ObjId| t.algebra(o);
    let (mut checked, mut failures, mut unit_checked, mut unit_failures) = (0, Vec::new(), 0, Vec::new());
    for (k, (uu, m)) in samples.iter().enumerate() {
        if m.algebra.dim() != alg(*uu).dim() {
            return Err(DescentError::Shape(format!("sample {k} is over the wrong algebra")));
        }
        for u in c.arrows_into(*uu) {
            let vv = c.source(u);
            let y1 = tensor_over(m, t.restriction(u), alg(vv));
            for v in c.arrows_into(vv) {
                let ww = c.source(v);
                let uv = c.compose(u, v);
                let cuv = t.twist(u, v);
                let p1 = tensor_over(m, t.restriction(uv), alg(ww));
                let z1 = tensor_over(&y1.module, t.restriction(v), alg(ww));
                for w in c.arrows_into(ww) {
                    let tt = c.source(w);
                    let (at, dt) = (alg(tt), alg(tt).dim());
                    let x = tensor_over(m, t.restriction(c.compose(uv, w)), at);
                    let y2 = tensor_over(&y1.module, t.restriction(c.compose(v, w)), at);
                    let z2 = tensor_over(&z1.module, t.restriction(w), at);
                    let p2 = tensor_over(&p1.module, t.restriction(w), at);
                    let one_v = alg(vv).unit().to_vec();
                    let one_w = alg(ww).unit().to_vec();
                    let wc = t.restriction(w).mul_vec(&cuv);
                    let dm = m.dim();

                    // m ⊗ a ↦ m ⊗ 1 ⊗ a w*(c^{u,v})
                    let lhs = induced(&x, p2.dim(), dt, |i, k| {
                        pure(&p2, &pure(&p1, &unit_vec(dm, i), &one_w), &at.mul(&at.basis(k), &wc))
                    });
                    // (can^{u,vw})^{-1}
                    let r1 = induced(&x, y2.dim(), dt, |i, k| pure(&y2, &pure(&y1, &unit_vec(dm, i), &one_v), &at.basis(k)));
                    // (can^{v,w})^{-1}
                    let r2 = induced(&y2, z2.dim(), dt, |p, k| {
                        pure(&z2, &pure(&z1, &unit_vec(y1.dim(), p), &one_w), &at.basis(k))
                    });
                    // Mod(c)^{u,v} ⊗ 1: m ⊗ a'' ⊗ a' ⊗ a ↦ m ⊗ c v*(a'') a' ⊗ a
                    let r3 = induced(&z2, p2.dim(), dt, |r, k| {
                        let mut acc = vec![Rat::default(); p2.dim()];
                        let dw = alg(ww).dim();
                        for (fz, _, s) in z1.section().triplets().filter(|&(_, col, _)| col == r) {
                            let (p, l) = (fz / dw, fz % dw);
                            let dv = alg(vv).dim();
                            for (fy, _, s2) in y1.section().triplets().filter(|&(_, col, _)| col == p) {
                                let (i, j) = (fy / dv, fy % dv);
                                let a2 = alg(ww).mul3(&cuv, &t.restriction(v).mul_vec(&alg(vv).basis(j)), &alg(ww).basis(l));
                                let val = pure(&p2, &pure(&p1, &unit_vec(dm, i), &a2), &at.basis(k));
                                for (a, x) in acc.iter_mut().zip(val) {
                                    *a += s * s2 * x;
                                }
                            }
                        }
                        acc
                    });
                    checked += 1;
                    if r3.mul(&r2).mul(&r1) != lhs {
                        failures.push(format!(
                            "sample {k} at ({}, {}, {})",
                            c.mor_name(u),
                            c.mor_name(v),
                            c.mor_name(w)
                        ));
                    }
                }
            }
        }
        // τ^{1_U} against Q^U(Mod(z)^U)
        let q1 = tensor_over(m, t.restriction(c.identity(*uu)), alg(*uu));
        let z = t.z(*uu);
        let one = alg(*uu).unit().to_vec();
        for w in c.arrows_into(*uu) {
            let tt = c.source(w);
            let (at, dt) = (alg(tt), alg(tt).dim());
            let x = tensor_over(m, t.restriction(w), at);
            let q2 = tensor_over(&q1.module, t.restriction(w), at);
            let lhs = induced(&x, q2.dim(), dt, |i, kk| pure(&q2, &pure(&q1, &unit_vec(m.dim(), i), &one), &at.basis(kk)));
            let rhs = induced(&x, q2.dim(), dt, |i, kk| pure(&q2, &pure(&q1, &unit_vec(m.dim(), i), &z), &at.basis(kk)));
            unit_checked += 1;
            if lhs != rhs {
                unit_failures.push(format!("sample {k} at {}", c.mor_name(w)));
            }
        }
    }
    Ok(PseudonaturalReport { checked, failures, unit_checked, unit_failures, note: SAMPLE_NOTE })
}
