use std::sync::Arc;

use super::{CategoryError, FiniteCategory, MorId, ObjId, Simplex};

/// A finite poset in which every pair has a greatest lower bound.
#[derive(Debug, Clone)]
pub struct MeetPoset {
    cat: Arc<FiniteCategory>,
    le: Vec<Vec<bool>>,
    meet: Vec<Vec<ObjId>>,
}

impl MeetPoset {
    pub fn new(cat: Arc<FiniteCategory>) -> Result<Self, CategoryError> {
        if !cat.is_poset() {
            return Err(CategoryError::NotAPoset("parallel or cyclic arrows".into()));
        }
        let n = cat.num_objects();
        let mut le = vec![vec![false; n]; n];
        for m in cat.morphism_ids() {
            le[cat.source(m)][cat.target(m)] = true;
        }
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<ObjId> = (0..n).filter(|&x| le[x][a] && le[x][b]).collect();
                let top = lower.iter().copied().find(|&m| lower.iter().all(|&x| le[x][m]));
                meet[a][b] = top.ok_or_else(|| {
                    CategoryError::MissingMeet(cat.obj_name(a).into(), cat.obj_name(b).into())
                })?;
            }
        }
        Ok(MeetPoset { cat, le, meet })
    }

    pub fn category(&self) -> &Arc<FiniteCategory> {
        &self.cat
    }

    pub fn len(&self) -> usize {
        self.le.len()
    }

    pub fn is_empty(&self) -> bool {
        self.le.is_empty()
    }

    pub fn leq(&self, a: ObjId, b: ObjId) -> bool {
        self.le[a][b]
    }

    pub fn meet(&self, a: ObjId, b: ObjId) -> ObjId {
        self.meet[a][b]
    }

    /// `∩τ` for a nonempty tuple.
    pub fn meet_all(&self, t: &[ObjId]) -> ObjId {
        let (first, rest) = t.split_first().expect("meet of an empty tuple");
        rest.iter().fold(*first, |acc, &x| self.meet[acc][x])
    }

    /// The unique arrow `a -> b` when `a <= b`.
    pub fn arrow(&self, a: ObjId, b: ObjId) -> Option<MorId> {
        self.cat.hom(a, b).first().copied()
    }

    /// Replace `(U_{i-1}, U_i)` by `U_{i-1} ∩ U_i`, for `1 <= i <= p`.
    pub fn delta(&self, t: &[ObjId], i: usize) -> Vec<ObjId> {
        assert!(i >= 1 && i < t.len(), "delta index out of range");
        let mut out = t[..i - 1].to_vec();
        out.push(self.meet(t[i - 1], t[i]));
        out.extend_from_slice(&t[i + 1..]);
        out
    }

    /// The chain `∩_{j>=0} U_j <= ∩_{j>=1} U_j <= ... <= U_p` as a simplex.
    pub fn bar(&self, t: &[ObjId]) -> Simplex {
        let p = t.len() - 1;
        let mut verts = vec![0; p + 1];
        verts[p] = t[p];
        for i in (0..p).rev() {
            verts[i] = self.meet(t[i], verts[i + 1]);
        }
        self.chain(&verts)
    }

    /// The simplex of a weakly increasing chain of objects.
    pub fn chain(&self, verts: &[ObjId]) -> Simplex {
        let arrows = verts
            .windows(2)
            .map(|w| self.arrow(w[0], w[1]).expect("chain must be increasing"))
            .collect();
        Simplex { start: verts[0], arrows }
    }

    /// Vertices of a simplex, forgetting the inclusions.
    pub fn vertices(&self, s: &Simplex) -> Vec<ObjId> {
        (0..=s.degree()).map(|k| self.cat.vertex(s, k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::v_poset;
    use super::*;

    #[test]
    fn v_meets() {
        let m = MeetPoset::new(Arc::new(v_poset())).unwrap();
        let c = m.category().clone();
        let (u0, u1, u01) = (c.object("U0").unwrap(), c.object("U1").unwrap(), c.object("U01").unwrap());
        assert_eq!(m.meet(u0, u1), u01);
        assert_eq!(m.meet(u0, u0), u0);
        assert_eq!(m.delta(&[u0, u1, u0], 1), vec![u01, u0]);
        let b = m.bar(&[u0, u1]);
        assert_eq!(m.vertices(&b), vec![u01, u1]);
    }

    #[test]
    fn missing_meet() {
        let c = FiniteCategory::poset(&["a", "b"], &[]).unwrap();
        assert!(matches!(MeetPoset::new(Arc::new(c)), Err(CategoryError::MissingMeet(..))));
    }
}
