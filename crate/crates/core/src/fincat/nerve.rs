use std::collections::HashMap;
use std::sync::Arc;

use super::{CategoryError, FiniteCategory, MorId, ObjId};

/// `U0 -u1-> U1 -> ... -up-> Up`; a 0-simplex is just `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub start: ObjId,
    pub arrows: Vec<MorId>,
}

impl Simplex {
    pub fn object(o: ObjId) -> Self {
        Simplex { start: o, arrows: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.arrows.len()
    }
}

/// All simplices of one degree, in lexicographic order, with a reverse index.
#[derive(Debug)]
pub struct NerveLevel {
    pub simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
}

impl NerveLevel {
    fn new(simplices: Vec<Simplex>) -> Self {
        let index = simplices.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        NerveLevel { simplices, index }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn position(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Simplex> {
        self.simplices.iter()
    }
}

impl FiniteCategory {
    /// The `p`-simplices, computed on first use and cached.
    pub fn nerve(&self, p: usize) -> Arc<NerveLevel> {
        if let Some(l) = self.nerve.read().unwrap().get(p) {
            return Arc::clone(l);
        }
        let mut cache = self.nerve.write().unwrap();
        while cache.len() <= p {
            let next = match cache.last() {
                None => self.objects().map(Simplex::object).collect(),
                Some(prev) => {
                    let mut out = Vec::new();
                    for s in prev.iter() {
                        let end = self.end(s);
                        for u in self.arrows_out_of(end) {
                            let mut arrows = s.arrows.clone();
                            arrows.push(u);
                            out.push(Simplex { start: s.start, arrows });
                        }
                    }
                    out
                }
            };
            cache.push(Arc::new(NerveLevel::new(next)));
        }
        Arc::clone(&cache[p])
    }

    /// `dσ`, the first object.
    pub fn start(&self, s: &Simplex) -> ObjId {
        s.start
    }

    /// `cσ`, the last object.
    pub fn end(&self, s: &Simplex) -> ObjId {
        s.arrows.last().map_or(s.start, |&u| self.target(u))
    }

    /// Object `U_k` of the chain.
    pub fn vertex(&self, s: &Simplex, k: usize) -> ObjId {
        if k == 0 {
            s.start
        } else {
            self.target(s.arrows[k - 1])
        }
    }

    /// `up ∘ ... ∘ u1 : dσ -> cσ`.
    pub fn composite(&self, s: &Simplex) -> MorId {
        s.arrows.iter().fold(self.identity(s.start), |acc, &u| self.compose(u, acc))
    }

    pub fn simplex(&self, arrows: &[MorId]) -> Result<Simplex, CategoryError> {
        for w in arrows.windows(2) {
            if self.target(w[0]) != self.source(w[1]) {
                return Err(CategoryError::NotComposable(self.mor_name(w[0]).into(), self.mor_name(w[1]).into()));
            }
        }
        let start = arrows.first().map(|&u| self.source(u)).unwrap_or(0);
        Ok(Simplex { start, arrows: arrows.to_vec() })
    }

    /// `∂_i σ` for `0 <= i <= p` on a `p`-simplex with `p >= 1`.
    pub fn face(&self, s: &Simplex, i: usize) -> Result<Simplex, CategoryError> {
        let p = s.degree();
        if p == 0 || i > p {
            return Err(CategoryError::IndexOutOfRange { index: i, degree: p });
        }
        let a = &s.arrows;
        Ok(if i == 0 {
            Simplex { start: self.target(a[0]), arrows: a[1..].to_vec() }
        } else if i == p {
            Simplex { start: s.start, arrows: a[..p - 1].to_vec() }
        } else {
            let mut arrows = a[..i - 1].to_vec();
            arrows.push(self.compose(a[i], a[i - 1]));
            arrows.extend_from_slice(&a[i + 1..]);
            Simplex { start: s.start, arrows }
        })
    }

    pub fn is_degenerate(&self, s: &Simplex) -> bool {
        s.arrows.iter().any(|&u| self.is_identity(u))
    }

    pub fn simplex_name(&self, s: &Simplex) -> String {
        if s.arrows.is_empty() {
            self.obj_name(s.start).to_string()
        } else {
            let names: Vec<&str> = s.arrows.iter().map(|&u| self.mor_name(u)).collect();
            format!("({})", names.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::v_poset;
    use super::*;

    #[test]
    fn v_poset_counts() {
        let c = v_poset();
        assert_eq!(c.nerve(0).len(), 3);
        assert_eq!(c.nerve(1).len(), 5);
        // sequences x0 <= x1 <= x2: 3 constant + 2 tops * 2 switch points
        assert_eq!(c.nerve(2).len(), 7);
    }

    #[test]
    fn terminal_has_one_degenerate_simplex_per_degree() {
        let c = FiniteCategory::terminal();
        let n2 = c.nerve(2);
        assert_eq!(n2.len(), 1);
        assert!(c.is_degenerate(&n2.simplices[0]));
    }

    #[test]
    fn faces_of_a_two_simplex() {
        let c = v_poset();
        let u = c.morphism("U01->U0").unwrap();
        let one = c.identity(c.object("U0").unwrap());
        let s = c.simplex(&[u, one]).unwrap();
        assert_eq!(c.face(&s, 1).unwrap().arrows, vec![u]);
        assert_eq!(c.face(&s, 0).unwrap().arrows, vec![one]);
        assert_eq!(c.face(&s, 2).unwrap().arrows, vec![u]);
        assert!(c.is_degenerate(&s));
        assert!(!c.is_degenerate(&c.simplex(&[u]).unwrap()));
        assert!(matches!(c.face(&s, 3), Err(CategoryError::IndexOutOfRange { .. })));
        assert!(c.face(&Simplex::object(0), 0).is_err());
    }

    #[test]
    fn nerve_is_lexicographic() {
        let c = v_poset();
        for p in 0..4 {
            let l = c.nerve(p);
            assert!(l.simplices.windows(2).all(|w| w[0] < w[1]));
            for (i, s) in l.iter().enumerate() {
                assert_eq!(l.position(s), Some(i));
            }
        }
    }
}
