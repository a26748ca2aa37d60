use std::collections::HashMap;

use num_traits::One;
use serde::Serialize;

use super::{ModPresheaf, SimpCechError, SimpComplex};
use crate::exactla::{cohomology, Cohomology, Rat, RatMatrix};
use crate::fincat::{MeetPoset, ObjId};
use crate::hochschild::{sign, tuple_index, tuple_of};
use crate::perm::{factorial, permutations, permute_tuple, sign as perm_sign, sort_with_sign};

/// `Č(F) = ∏_{τ ∈ U^{p+1}} F(∩τ)` with its alternating subcomplex.
///
/// Alternating cochains are stored by their values on strictly increasing
/// tuples of object ids.
#[derive(Debug, Clone)]
pub struct CechComplex {
    poset: MeetPoset,
    f: ModPresheaf,
    bound: usize,
}

/// Exact verification of the comparison identities in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomotopyCheck {
    pub degree: usize,
    pub iota_chain_map: bool,
    pub pi_chain_map: bool,
    pub pi_iota_identity: bool,
    /// `1 - ιπ = h d + d h` on alternating cochains.
    pub homotopy_identity: bool,
}

impl HomotopyCheck {
    pub fn passed(&self) -> bool {
        self.iota_chain_map && self.pi_chain_map && self.pi_iota_identity && self.homotopy_identity
    }
}

/// `θ_i(τ) = (∩_{j≥0} τ_j, ∩_{j≥1} τ_j, ..., ∩_{j≥i} τ_j, τ_i, ..., τ_p)`.
pub fn theta(poset: &MeetPoset, t: &[ObjId], i: usize) -> Vec<ObjId> {
    let mut out: Vec<ObjId> = (0..=i).map(|k| poset.meet_all(&t[k..])).collect();
    out.extend_from_slice(&t[i..]);
    out
}

/// Drops coordinate `i`.
pub fn drop_coordinate(t: &[ObjId], i: usize) -> Vec<ObjId> {
    let mut out = t.to_vec();
    out.remove(i);
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

struct AltLayout {
    tuples: Vec<Vec<ObjId>>,
    offsets: Vec<usize>,
    index: HashMap<Vec<ObjId>, usize>,
    total: usize,
}

impl CechComplex {
    pub const DEFAULT_BOUND: usize = 100_000;

    pub fn new(poset: MeetPoset, f: ModPresheaf) -> Result<Self, SimpCechError> {
        if poset.category().as_ref() != f.base().as_ref() {
            return Err(SimpCechError::Shape("presheaf and poset have different bases".into()));
        }
        Ok(CechComplex { poset, f, bound: Self::DEFAULT_BOUND })
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    pub fn poset(&self) -> &MeetPoset {
        &self.poset
    }

    pub fn presheaf(&self) -> &ModPresheaf {
        &self.f
    }

    /// The simplicial complex `C_simp(F)` on the same poset.
    pub fn simplicial(&self) -> SimpComplex {
        SimpComplex::of(self.f.clone())
    }

    fn n(&self) -> usize {
        self.poset.len()
    }

    fn full_layout(&self, p: usize) -> Result<(Vec<usize>, usize), SimpCechError> {
        let count = self.n().checked_pow(p as u32 + 1).unwrap_or(usize::MAX);
        if count > self.bound {
            return Err(SimpCechError::TooManyTuples { count, bound: self.bound });
        }
        let mut offsets = Vec::with_capacity(count);
        let mut total = 0;
        for t in 0..count {
            offsets.push(total);
            total += self.f.dim(self.poset.meet_all(&tuple_of(t, self.n(), p + 1)));
        }
        Ok((offsets, total))
    }

    fn alt_layout(&self, p: usize) -> AltLayout {
        let tuples = combinations(self.n(), p + 1);
        let mut offsets = Vec::new();
        let mut total = 0;
        for t in &tuples {
            offsets.push(total);
            total += self.f.dim(self.poset.meet_all(t));
        }
        let index = tuples.iter().cloned().enumerate().map(|(k, t)| (t, k)).collect();
        AltLayout { tuples, offsets, index, total }
    }

    pub fn full_dim(&self, p: usize) -> Result<usize, SimpCechError> {
        Ok(self.full_layout(p)?.1)
    }

    pub fn alternating_dim(&self, p: usize) -> usize {
        self.alt_layout(p).total
    }

    /// `(d ψ)^τ = Σ_i (-1)^i ψ^{∂_i τ}|_{∩τ}` on all tuples.
    pub fn full_differential(&self, p: usize) -> Result<RatMatrix, SimpCechError> {
        let (src_off, src_total) = self.full_layout(p)?;
        let (tgt_off, tgt_total) = self.full_layout(p + 1)?;
        let n = self.n();
        let mut entries = Vec::new();
        for (k, &row0) in tgt_off.iter().enumerate() {
            let t = tuple_of(k, n, p + 2);
            let m = self.poset.meet_all(&t);
            for i in 0..=p + 1 {
                let face = drop_coordinate(&t, i);
                let fm = self.poset.meet_all(&face);
                let res = self.f.map(self.poset.arrow(m, fm).expect("meet lies below"));
                let col0 = src_off[tuple_index(&face, n)];
                let sg = sign(i);
                for (a, b, v) in res.triplets() {
                    entries.push((row0 + a, col0 + b, &sg * v));
                }
            }
        }
        Ok(RatMatrix::from_triplets(tgt_total, src_total, entries))
    }

    /// `J`: alternating coordinates into all tuples, `ψ^{τ s} = (-1)^s ψ^τ`.
    pub fn embed_alternating(&self, p: usize) -> Result<RatMatrix, SimpCechError> {
        let (off, total) = self.full_layout(p)?;
        let alt = self.alt_layout(p);
        let mut entries = Vec::new();
        for (k, &row0) in off.iter().enumerate() {
            let t = tuple_of(k, self.n(), p + 1);
            if let Some((sorted, sg)) = sort_with_sign(&t) {
                let j = alt.index[&sorted];
                for x in 0..self.f.dim(self.poset.meet_all(&t)) {
                    entries.push((row0 + x, alt.offsets[j] + x, Rat::from_integer(sg.into())));
                }
            }
        }
        Ok(RatMatrix::from_triplets(total, alt.total, entries))
    }

    /// Restriction of full cochains to increasing tuples.
    fn extract_alternating(&self, p: usize) -> Result<RatMatrix, SimpCechError> {
        let (off, total) = self.full_layout(p)?;
        let alt = self.alt_layout(p);
        let mut entries = Vec::new();
        for (j, t) in alt.tuples.iter().enumerate() {
            let k = tuple_index(t, self.n());
            for x in 0..self.f.dim(self.poset.meet_all(t)) {
                entries.push((alt.offsets[j] + x, off[k] + x, Rat::one()));
            }
        }
        Ok(RatMatrix::from_triplets(alt.total, total, entries))
    }

    pub fn alternating_differential(&self, p: usize) -> Result<RatMatrix, SimpCechError> {
        let d = self.full_differential(p)?;
        Ok(self.extract_alternating(p + 1)?.mul(&d).mul(&self.embed_alternating(p)?))
    }

    pub fn cohomology(&self, p: usize, alternating: bool) -> Result<Cohomology, SimpCechError> {
        let (d_in, d_out) = if alternating {
            let d_in = match p.checked_sub(1) {
                Some(k) => self.alternating_differential(k)?,
                None => RatMatrix::zeros(self.alternating_dim(0), 0),
            };
            (d_in, self.alternating_differential(p)?)
        } else {
            let d_in = match p.checked_sub(1) {
                Some(k) => self.full_differential(k)?,
                None => RatMatrix::zeros(self.full_dim(0)?, 0),
            };
            (d_in, self.full_differential(p)?)
        };
        Ok(cohomology(&d_in, &d_out)?)
    }

    /// `ι(φ)^τ = Σ_{s ∈ S_{p+1}} (-1)^s φ^{bar(τ s)}`, from reduced simplicial
    /// coordinates to alternating coordinates.
    pub fn iota(&self, p: usize) -> RatMatrix {
        let simp = self.simplicial();
        let layout = simp.layout(p);
        let nerve = self.poset.category().nerve(p);
        let alt = self.alt_layout(p);
        let perms = permutations(p + 1);
        let mut entries = Vec::new();
        for (j, t) in alt.tuples.iter().enumerate() {
            let dim = self.f.dim(self.poset.meet_all(t));
            for s in &perms {
                let b = self.poset.bar(&permute_tuple(t, s));
                if p > 0 && self.poset.category().is_degenerate(&b) {
                    continue;
                }
                let col0 = layout.offsets[nerve.position(&b).expect("bar is a simplex")];
                let sg = Rat::from_integer(perm_sign(s).into());
                for x in 0..dim {
                    entries.push((alt.offsets[j] + x, col0 + x, sg.clone()));
                }
            }
        }
        let full = RatMatrix::from_triplets(alt.total, layout.total, entries);
        full.select_cols(&simp.reduced_coords(p))
    }

    /// `π(ψ)^σ = ψ^{σ̃}` into reduced simplicial coordinates.
    pub fn pi(&self, p: usize) -> RatMatrix {
        let simp = self.simplicial();
        let layout = simp.layout(p);
        let c = self.poset.category();
        let alt = self.alt_layout(p);
        let mut entries = Vec::new();
        for (k, s) in c.nerve(p).iter().enumerate() {
            let verts = self.poset.vertices(s);
            if let Some((sorted, sg)) = sort_with_sign(&verts) {
                let j = alt.index[&sorted];
                for x in 0..self.f.dim(c.start(s)) {
                    entries.push((layout.offsets[k] + x, alt.offsets[j] + x, Rat::from_integer(sg.into())));
                }
            }
        }
        let full = RatMatrix::from_triplets(layout.total, alt.total, entries);
        full.select_rows(&simp.reduced_coords(p))
    }

    /// `h^p(ψ)^τ = Σ_{i<p} (-1)^i/(p-i)! Σ_{s ∈ S_p} (-1)^s ψ^{θ_i(τ s)}`,
    /// alternating `p`-cochains to alternating `(p-1)`-cochains.
    pub fn homotopy(&self, p: usize) -> RatMatrix {
        assert!(p >= 1, "h is defined from degree 1");
        let src = self.alt_layout(p);
        let tgt = self.alt_layout(p - 1);
        let perms = permutations(p);
        let mut entries = Vec::new();
        for (j, t) in tgt.tuples.iter().enumerate() {
            let dim = self.f.dim(self.poset.meet_all(t));
            for i in 0..p {
                let coef = Rat::new(sign(i).numer().clone(), (factorial(p - i) as i64).into());
                for s in &perms {
                    let th = theta(&self.poset, &permute_tuple(t, s), i);
                    if let Some((sorted, sg)) = sort_with_sign(&th) {
                        let k = src.index[&sorted];
                        let v = &coef * Rat::from_integer((perm_sign(s) * sg).into());
                        for x in 0..dim {
                            entries.push((tgt.offsets[j] + x, src.offsets[k] + x, v.clone()));
                        }
                    }
                }
            }
        }
        RatMatrix::from_triplets(tgt.total, src.total, entries)
    }

    /// Checks the chain-map property of `ι` and `π`, `πι = 1` and
    /// `1 - ιπ = h d + d h` in degree `p`.
    pub fn check_homotopy(&self, p: usize) -> Result<HomotopyCheck, SimpCechError> {
        let simp = self.simplicial();
        let (iota, pi) = (self.iota(p), self.pi(p));
        let (iota1, pi1) = (self.iota(p + 1), self.pi(p + 1));
        let d_alt = self.alternating_differential(p)?;
        let d_red = simp.reduced_differential(p);
        let iota_chain_map = iota1.mul(&d_red) == d_alt.mul(&iota);
        let pi_chain_map = pi1.mul(&d_alt) == d_red.mul(&pi);
        let pi_iota_identity = pi.mul(&iota) == RatMatrix::identity(iota.cols());
        let lhs = RatMatrix::identity(pi.cols()).sub(&iota.mul(&pi));
        let mut rhs = self.homotopy(p + 1).mul(&d_alt);
        if p >= 1 {
            rhs = rhs.add(&self.alternating_differential(p - 1)?.mul(&self.homotopy(p)));
        }
        Ok(HomotopyCheck { degree: p, iota_chain_map, pi_chain_map, pi_iota_identity, homotopy_identity: lhs == rhs })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exactla::rat;
    use crate::fincat::FiniteCategory;
    use crate::simpcech::tests::{diamond, v_poset};

    fn constant(c: Arc<FiniteCategory>) -> CechComplex {
        CechComplex::new(MeetPoset::new(c.clone()).unwrap(), ModPresheaf::constant(c)).unwrap()
    }

    /// A non-constant presheaf on the diamond: `Q^2` on `T` and `M1`, `Q` on
    /// `M2` and `B`.
    fn diamond_presheaf() -> ModPresheaf {
        let c = diamond();
        let dims: Vec<usize> = c.objects().map(|o| if matches!(c.obj_name(o), "T" | "M1") { 2 } else { 1 }).collect();
        let maps = c
            .morphism_ids()
            .map(|u| {
                if c.is_identity(u) {
                    return RatMatrix::identity(dims[c.source(u)]);
                }
                match (c.obj_name(c.source(u)), c.obj_name(c.target(u))) {
                    ("M1", "T") => RatMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]),
                    ("M2", "T") => RatMatrix::from_i64_rows(&[&[1, 0]]),
                    ("B", "M1") => RatMatrix::from_i64_rows(&[&[1, -1]]),
                    ("B", "M2") => RatMatrix::from_i64_rows(&[&[1]]),
                    ("B", "T") => RatMatrix::from_i64_rows(&[&[1, 0]]),
                    _ => unreachable!(),
                }
            })
            .collect();
        ModPresheaf::new(c, dims, maps).unwrap_or_else(|e| panic!("{e}"))
    }

    #[test]
    fn single_point() {
        let c = Arc::new(FiniteCategory::poset(&["X"], &[]).unwrap());
        let cx = constant(c);
        assert_eq!(cx.cohomology(0, true).unwrap().dim, 1);
        assert_eq!(cx.cohomology(1, true).unwrap().dim, 0);
        assert_eq!(cx.cohomology(1, false).unwrap().dim, 0);
    }

    #[test]
    fn v_poset_full_and_alternating_agree() {
        let cx = constant(v_poset());
        for p in 0..3 {
            let alt = cx.cohomology(p, true).unwrap().dim;
            assert_eq!(alt, cx.cohomology(p, false).unwrap().dim);
            assert_eq!(alt, usize::from(p == 0));
        }
    }

    #[test]
    fn alternating_vanishes_on_repeats() {
        let cx = constant(v_poset());
        let j = cx.embed_alternating(1).unwrap();
        // tuple (0, 0) is coordinate 0
        assert!((0..j.cols()).all(|c| j.get(0, c) == rat(0)));
    }

    #[test]
    fn iota_on_an_edge() {
        let c = v_poset();
        let cx = constant(c.clone());
        let iota = cx.iota(1);
        let (u0, u1) = (c.object("U0").unwrap(), c.object("U1").unwrap());
        let nd: Vec<_> = c.nerve(1).iter().filter(|s| !c.is_degenerate(s)).cloned().collect();
        let to = |name: &str| nd.iter().position(|s| c.mor_name(s.arrows[0]) == name).unwrap();
        assert!(u0 < u1);
        let row = cx.alt_layout(1).index[&vec![u0, u1]];
        assert_eq!(iota.get(row, to("U01->U1")), rat(1));
        assert_eq!(iota.get(row, to("U01->U0")), rat(-1));
    }

    #[test]
    fn homotopy_identities() {
        for f in [ModPresheaf::constant(v_poset()), ModPresheaf::constant(diamond()), diamond_presheaf()] {
            let cx = CechComplex::new(MeetPoset::new(f.base().clone()).unwrap(), f).unwrap();
            for p in 0..4 {
                let chk = cx.check_homotopy(p).unwrap();
                assert!(chk.passed(), "{chk:?}");
                let simp = cx.simplicial().cohomology(p, true).unwrap().dim;
                assert_eq!(simp, cx.cohomology(p, true).unwrap().dim);
            }
        }
    }

    #[test]
    fn comparison_identities_on_all_tuples() {
        let poset = MeetPoset::new(diamond()).unwrap();
        let n = poset.len();
        for p in 1..3 {
            for k in 0..n.pow(p as u32 + 1) {
                let t = tuple_of(k, n, p + 1);
                for i in 1..=p {
                    assert_eq!(drop_coordinate(&theta(&poset, &t, i), 0), theta(&poset, &drop_coordinate(&t, 0), i - 1));
                    for j in 1..i {
                        let lhs = poset.delta(&theta(&poset, &t, i), j);
                        assert_eq!(lhs, theta(&poset, &poset.delta(&t, j), i - 1));
                    }
                }
                for i in 0..p {
                    assert_eq!(drop_coordinate(&theta(&poset, &t, i), i + 1), drop_coordinate(&theta(&poset, &t, i + 1), i + 1));
                }
                let bar = poset.vertices(&poset.bar(&t));
                assert_eq!(drop_coordinate(&theta(&poset, &t, p), p + 1), bar);
                for i in 0..=p {
                    for j in i + 1..=p + 1 {
                        let target = drop_coordinate(&theta(&poset, &t, i), i + 1);
                        let want = if (j - i - 1) % 2 == 0 { 1 } else { -1 };
                        let found = permutations(p + 1).into_iter().any(|s| {
                            perm_sign(&s) == want && drop_coordinate(&theta(&poset, &permute_tuple(&t, &s), i), j) == target
                        });
                        assert!(found, "item (3) at t={t:?} i={i} j={j}");
                    }
                }
            }
        }
    }
}
