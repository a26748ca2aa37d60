//! Descent data in the prestack of right modules over a twisted presheaf,
//! pointwise kernels and cokernels, and the quasi-coherent presheaf functor
//! `Q^U: M ↦ M̃` for presheaves with central twists.
//!
//! The categories involved are infinite; everything here is checked on
//! finite-dimensional modules, so every report speaks about a sample.
//!
//! A map `φ_u: M_U ⊗_u A(V) -> M_V` is stored through its restriction
//! `g_u(m) = φ_u(m ⊗ 1)`, a `dim M_V × dim M_U` matrix satisfying
//! `g_u(m b) = g_u(m) u*(b)`; then `φ_u(m ⊗ a) = g_u(m) a`.

mod qpresheaf;

use serde::Serialize;
use thiserror::Error;

pub use qpresheaf::{q_functor, q_hom_dims, verify_pseudonatural, HomDims, PseudonaturalReport, QPresheafObject};

use crate::algebra::{is_module_map, tensor_over, FinModule};
use crate::deform::TwistedDeformation;
use crate::exactla::{flatten, kernel, rank, solve, solve_matrix, Quotient, Rat, RatMatrix};
use crate::fincat::MorId;
use crate::presheaf::TwistedPresheaf;

/// Attached to every report: the verdicts cover the supplied modules only.
pub const SAMPLE_NOTE: &str = "verified on sample: finitely many finite-dimensional modules";

#[derive(Debug, Error)]
pub enum DescentError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("the twists are not central")]
    CentralityRequired,
    #[error("not a morphism of pre-descent data: {0}")]
    NotAMorphism(String),
    #[error("restriction along {morphism} is not exact here: dim of the restricted kernel is {restricted}, pointwise kernel has {pointwise}")]
    ExactnessFailure { morphism: String, restricted: usize, pointwise: usize },
    #[error("the induced datum is not a descent datum: {0}")]
    NotDescent(String),
}

/// `(M_U, φ_u)`; see the module docs for how `φ_u` is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreDescentDatum {
    pub modules: Vec<FinModule>,
    pub phi: Vec<RatMatrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Descent,
    PreDescent,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub classification: Classification,
    /// Arrows where `φ_u` is not balanced over `A(U)`.
    pub not_balanced: Vec<String>,
    /// Pairs `(u, v)` where `φ_v v*(φ_u) ≠ φ_{uv} Mod(c)^{u,v}`.
    pub incompatible: Vec<String>,
    /// Arrows where `φ_u` is not bijective.
    pub not_bijective: Vec<String>,
    pub note: &'static str,
}

fn shapes(t: &TwistedPresheaf<Rat>, d: &PreDescentDatum) -> Result<(), DescentError> {
    let c = t.base();
    if d.modules.len() != c.num_objects() || d.phi.len() != c.num_morphisms() {
        return Err(DescentError::Shape("one module per object and one map per arrow".into()));
    }
    for o in c.objects() {
        if d.modules[o].algebra.dim() != t.algebra(o).dim() {
            return Err(DescentError::Shape(format!("module on {} is over the wrong algebra", c.obj_name(o))));
        }
    }
    for u in c.morphism_ids() {
        let want = (d.modules[c.source(u)].dim(), d.modules[c.target(u)].dim());
        if d.phi[u].shape() != want {
            return Err(DescentError::Shape(format!("φ_{} has shape {:?}, expected {want:?}", c.mor_name(u), d.phi[u].shape())));
        }
    }
    Ok(())
}

fn basis(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::default(); n];
    v[i] = Rat::from_integer(1.into());
    v
}

/// `φ_u` on the coordinates of `M_U ⊗_u A(V)` from [`tensor_over`].
pub fn tensor_map(t: &TwistedPresheaf<Rat>, d: &PreDescentDatum, u: MorId) -> RatMatrix {
    let c = t.base();
    let (mu, mv) = (&d.modules[c.target(u)], &d.modules[c.source(u)]);
    let av = t.algebra(c.source(u));
    let tensor = tensor_over(mu, t.restriction(u), av);
    let mut cols = Vec::with_capacity(mu.dim() * av.dim());
    for i in 0..mu.dim() {
        let gm = d.phi[u].column(i);
        for k in 0..av.dim() {
            cols.push(mv.act(&gm, &av.basis(k)));
        }
    }
    RatMatrix::from_columns(mv.dim(), &cols).mul(tensor.section())
}

/// Balancedness, the twisted compatibility on every composable pair, and
/// bijectivity of every `φ_u`.
pub fn check_descent(t: &TwistedPresheaf<Rat>, d: &PreDescentDatum) -> Result<DescentReport, DescentError> {
    shapes(t, d)?;
    let c = t.base();
    let mut not_balanced = Vec::new();
    for u in c.morphism_ids() {
        let (au, f) = (t.algebra(c.target(u)), t.restriction(u));
        let (mu, mv) = (&d.modules[c.target(u)], &d.modules[c.source(u)]);
        let g = &d.phi[u];
        let ok = (0..au.dim()).all(|j| g.mul(&mu.action()[j]) == mv.act_matrix(&f.column(j)).mul(g));
        if !ok {
            not_balanced.push(c.mor_name(u).to_string());
        }
    }
    let mut incompatible = Vec::new();
    for v in c.morphism_ids() {
        for u in c.arrows_out_of(c.target(v)) {
            // m ⊗ a ⊗ b: φ_v(φ_u(m ⊗ a) ⊗ b) against φ_{uv}(m ⊗ c^{u,v} v*(a) b)
            let (vv, ww) = (c.source(u), c.source(v));
            let (av, aw) = (t.algebra(vv), t.algebra(ww));
            let (mu, mv, mw) = (&d.modules[c.target(u)], &d.modules[vv], &d.modules[ww]);
            let uv = c.compose(u, v);
            let twist = t.twist(u, v);
            let fv = t.restriction(v);
            let mut ok = true;
            'outer: for i in 0..mu.dim() {
                let gu = d.phi[u].column(i);
                let guv = d.phi[uv].column(i);
                for j in 0..av.dim() {
                    let left_inner = d.phi[v].mul_vec(&mv.act(&gu, &av.basis(j)));
                    let cva = aw.mul(&twist, &fv.mul_vec(&av.basis(j)));
                    for k in 0..aw.dim() {
                        let b = aw.basis(k);
                        if mw.act(&left_inner, &b) != mw.act(&guv, &aw.mul(&cva, &b)) {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if !ok {
                incompatible.push(format!("({}, {})", c.mor_name(u), c.mor_name(v)));
            }
        }
    }
    let mut not_bijective = Vec::new();
    if not_balanced.is_empty() {
        for u in c.morphism_ids() {
            let m = tensor_map(t, d, u);
            if m.rows() != m.cols() || rank(&m) != m.rows() {
                not_bijective.push(c.mor_name(u).to_string());
            }
        }
    }
    let classification = if !not_balanced.is_empty() || !incompatible.is_empty() {
        Classification::Invalid
    } else if not_bijective.is_empty() {
        Classification::Descent
    } else {
        Classification::PreDescent
    };
    Ok(DescentReport { classification, not_balanced, incompatible, not_bijective, note: SAMPLE_NOTE })
}

/// `M_U = A(U)` with `φ_u(m ⊗ a) = t_u u*(m) a`. The elements `t_u` must
/// satisfy `t_v v*(t_u) = t_{uv} c^{u,v}`; `None` means `t_u = 1`.
pub fn free_datum(t: &TwistedPresheaf<Rat>, trivialization: Option<&[Vec<Rat>]>) -> PreDescentDatum {
    let c = t.base();
    let modules = c.objects().map(|o| FinModule::free(t.algebra(o).clone())).collect();
    let phi = c
        .morphism_ids()
        .map(|u| {
            let av = t.algebra(c.source(u));
            let f = t.restriction(u).to_sparse();
            match trivialization {
                Some(tr) => av.left_mult_q(&tr[u]).mul(&f),
                None => f,
            }
        })
        .collect();
    PreDescentDatum { modules, phi }
}

/// First-order `t_u = 1 + t₁^u ε` trivializing the twists of a deformation,
/// in the Q coordinates of [`TwistedPresheaf::to_q`]; `None` if `c₁` is
/// not a simplicial coboundary.
pub fn first_order_trivialization(def: &TwistedDeformation) -> Option<Vec<Vec<Rat>>> {
    let t = &def.presheaf;
    let c = t.base();
    let dims: Vec<usize> = c.morphism_ids().map(|u| t.algebra(c.source(u)).dim()).collect();
    let mut offset = vec![0; dims.len() + 1];
    for (k, d) in dims.iter().enumerate() {
        offset[k + 1] = offset[k] + d;
    }
    // t₁^v + v*(t₁^u) − t₁^{uv} = c₁^{u,v}
    let (mut entries, mut rhs, mut row) = (Vec::new(), Vec::new(), 0);
    let nerve2 = c.nerve(2);
    for (s, c1) in nerve2.iter().zip(def.cocycle.part(2)) {
        let (v, u) = (s.arrows[0], s.arrows[1]);
        let uv = c.compose(u, v);
        let w = dims[v];
        let fv = t.restriction(v).map(|x| x.re.clone());
        for r in 0..w {
            entries.push((row + r, offset[v] + r, Rat::from_integer(1.into())));
            entries.push((row + r, offset[uv] + r, -Rat::from_integer(1.into())));
            for k in 0..dims[u] {
                entries.push((row + r, offset[u] + k, fv.get(r, k).clone()));
            }
            rhs.push(c1.get(r, 0));
        }
        row += w;
    }
    let m = RatMatrix::from_triplets(row, offset[dims.len()], entries);
    let sol = solve(&m, &rhs)?;
    Some(
        c.morphism_ids()
            .map(|u| {
                let unit = t.algebra(c.source(u)).unit().iter().map(|x| x.re.clone());
                let eps = sol[offset[u]..offset[u + 1]].iter().cloned();
                let mut v: Vec<Rat> = unit.collect();
                v.extend(eps);
                debug_assert_eq!(v.len(), flatten(t.algebra(c.source(u)).unit()).len());
                v
            })
            .collect(),
    )
}

/// `(g_U)`: module maps `M_U -> M'_U` with `g'_u g_U = g_V g_u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentMorphism {
    pub maps: Vec<RatMatrix>,
}

pub fn check_descent_morphism(
    t: &TwistedPresheaf<Rat>,
    src: &PreDescentDatum,
    tgt: &PreDescentDatum,
    g: &DescentMorphism,
) -> Result<(), DescentError> {
    let c = t.base();
    if g.maps.len() != c.num_objects() {
        return Err(DescentError::Shape("one map per object".into()));
    }
    for o in c.objects() {
        if !is_module_map(&src.modules[o], &tgt.modules[o], &g.maps[o]) {
            return Err(DescentError::NotAMorphism(format!("g_{} is not a module map", c.obj_name(o))));
        }
    }
    for u in c.morphism_ids() {
        let (vv, uu) = (c.source(u), c.target(u));
        if tgt.phi[u].mul(&g.maps[uu]) != g.maps[vv].mul(&src.phi[u]) {
            return Err(DescentError::NotAMorphism(format!("g does not commute with φ_{}", c.mor_name(u))));
        }
    }
    Ok(())
}

/// All morphisms `src -> tgt`, as a basis of concatenated column-major blocks.
pub fn morphism_space(t: &TwistedPresheaf<Rat>, src: &PreDescentDatum, tgt: &PreDescentDatum) -> RatMatrix {
    let c = t.base();
    let sizes: Vec<(usize, usize)> = c.objects().map(|o| (tgt.modules[o].dim(), src.modules[o].dim())).collect();
    let mut offset = vec![0];
    for (r, s) in &sizes {
        offset.push(offset.last().unwrap() + r * s);
    }
    let n = *offset.last().unwrap();
    let mut blocks: Vec<RatMatrix> = Vec::new();
    let place = |m: RatMatrix, o: usize| -> RatMatrix {
        RatMatrix::from_triplets(m.rows(), n, m.triplets().map(|(r, k, v)| (r, offset[o] + k, v.clone())).collect::<Vec<_>>())
    };
    for o in c.objects() {
        let (m, nn) = (&src.modules[o], &tgt.modules[o]);
        let (dm, dn) = (m.dim(), nn.dim());
        for j in 0..m.algebra.dim() {
            let e = m.action()[j].transpose().kron(&RatMatrix::identity(dn)).sub(&RatMatrix::identity(dm).kron(&nn.action()[j]));
            blocks.push(place(e, o));
        }
    }
    for u in c.morphism_ids() {
        let (vv, uu) = (c.source(u), c.target(u));
        // φ'_u g_U − g_V φ_u
        let a = RatMatrix::identity(src.modules[uu].dim()).kron(&tgt.phi[u]);
        let b = src.phi[u].transpose().kron(&RatMatrix::identity(tgt.modules[vv].dim()));
        blocks.push(place(a, uu).sub(&place(b, vv)));
    }
    let eqs = blocks.into_iter().fold(RatMatrix::zeros(0, n), |acc, b| acc.vstack(&b));
    kernel(&eqs)
}

/// Unflattens a column of [`morphism_space`].
pub fn morphism_from_vec(src: &PreDescentDatum, tgt: &PreDescentDatum, v: &[Rat]) -> DescentMorphism {
    let mut maps = Vec::new();
    let mut at = 0;
    for (m, n) in src.modules.iter().zip(&tgt.modules) {
        let (r, s) = (n.dim(), m.dim());
        let cols: Vec<Vec<Rat>> = (0..s).map(|k| v[at + k * r..at + (k + 1) * r].to_vec()).collect();
        maps.push(RatMatrix::from_columns(r, &cols));
        at += r * s;
    }
    DescentMorphism { maps }
}

fn submodule(m: &FinModule, k: &RatMatrix) -> FinModule {
    let action = m
        .action()
        .iter()
        .map(|r| solve_matrix(k, &r.mul(k)).expect("a kernel is a submodule"))
        .collect();
    FinModule::new(m.algebra.clone(), k.cols(), action).expect("restricted action")
}

fn require_descent(t: &TwistedPresheaf<Rat>, d: &PreDescentDatum) -> Result<(), DescentError> {
    let r = check_descent(t, d)?;
    match r.classification {
        Classification::Descent => Ok(()),
        _ => Err(DescentError::NotDescent(format!("{:?}: {:?} {:?}", r.classification, r.incompatible, r.not_bijective))),
    }
}

/// `(ker g_U)_U` with the induced maps, checked to be a descent datum.
pub fn pointwise_kernel(
    t: &TwistedPresheaf<Rat>,
    src: &PreDescentDatum,
    tgt: &PreDescentDatum,
    g: &DescentMorphism,
) -> Result<PreDescentDatum, DescentError> {
    check_descent_morphism(t, src, tgt, g)?;
    let c = t.base();
    let ks: Vec<RatMatrix> = c.objects().map(|o| kernel(&g.maps[o])).collect();
    let modules: Vec<FinModule> = c.objects().map(|o| submodule(&src.modules[o], &ks[o])).collect();
    let phi = c
        .morphism_ids()
        .map(|u| solve_matrix(&ks[c.source(u)], &src.phi[u].mul(&ks[c.target(u)])).expect("g_V g_u = g'_u g_U kills the kernel"))
        .collect();
    let datum = PreDescentDatum { modules, phi };
    for u in c.morphism_ids() {
        let m = tensor_map(t, &datum, u);
        if m.rows() != m.cols() || rank(&m) != m.rows() {
            return Err(DescentError::ExactnessFailure {
                morphism: c.mor_name(u).to_string(),
                restricted: m.cols(),
                pointwise: m.rows(),
            });
        }
    }
    require_descent(t, &datum)?;
    Ok(datum)
}

/// `(coker g_U)_U` with the induced maps, checked to be a descent datum.
pub fn pointwise_cokernel(
    t: &TwistedPresheaf<Rat>,
    src: &PreDescentDatum,
    tgt: &PreDescentDatum,
    g: &DescentMorphism,
) -> Result<PreDescentDatum, DescentError> {
    check_descent_morphism(t, src, tgt, g)?;
    let c = t.base();
    let qs: Vec<Quotient> = c.objects().map(|o| Quotient::new(&g.maps[o])).collect();
    let modules = c
        .objects()
        .map(|o| {
            let q = &qs[o];
            let m = &tgt.modules[o];
            let action = m.action().iter().map(|r| q.proj.mul(r).mul(&q.section)).collect();
            FinModule::new(m.algebra.clone(), q.dim(), action).expect("quotient action")
        })
        .collect();
    let phi = c
        .morphism_ids()
        .map(|u| qs[c.source(u)].proj.mul(&tgt.phi[u]).mul(&qs[c.target(u)].section))
        .collect();
    let datum = PreDescentDatum { modules, phi };
    for u in c.morphism_ids() {
        let m = tensor_map(t, &datum, u);
        if m.rows() != m.cols() || rank(&m) != m.rows() {
            return Err(DescentError::ExactnessFailure {
                morphism: c.mor_name(u).to_string(),
                restricted: m.cols(),
                pointwise: m.rows(),
            });
        }
    }
    require_descent(t, &datum)?;
    Ok(datum)
}

/// `⊕ D_i` objectwise.
pub fn direct_sum(parts: &[PreDescentDatum]) -> PreDescentDatum {
    let n = parts[0].modules.len();
    let modules = (0..n).map(|o| FinModule::direct_sum(&parts.iter().map(|p| p.modules[o].clone()).collect::<Vec<_>>())).collect();
    let phi = (0..parts[0].phi.len())
        .map(|u| RatMatrix::block_diag(&parts.iter().map(|p| p.phi[u].clone()).collect::<Vec<_>>()))
        .collect();
    PreDescentDatum { modules, phi }
}

/// The zero datum.
pub fn zero_datum(t: &TwistedPresheaf<Rat>) -> PreDescentDatum {
    let c = t.base();
    PreDescentDatum {
        modules: c.objects().map(|o| FinModule::zero(t.algebra(o).clone())).collect(),
        phi: c.morphism_ids().map(|_| RatMatrix::zeros(0, 0)).collect(),
    }
}
