//! Small presheaves used throughout the test suites and the CLI examples.

use std::sync::Arc;

use crate::algebra::FinAlgebra;
use crate::exactla::{rat, DMat, Rat};
use crate::fincat::FiniteCategory;
use crate::presheaf::{Presheaf, TwistedPresheaf};

/// `U01 ≤ U0, U1`.
pub fn v_poset() -> Arc<FiniteCategory> {
    Arc::new(FiniteCategory::poset(&["U0", "U1", "U01"], &[("U01", "U0"), ("U01", "U1")]).unwrap())
}

/// `B ≤ M1, M2 ≤ T` with `M1 ∧ M2 = B`.
pub fn diamond() -> Arc<FiniteCategory> {
    Arc::new(FiniteCategory::poset(&["B", "M1", "M2", "T"], &[("B", "M1"), ("B", "M2"), ("M1", "T"), ("M2", "T")]).unwrap())
}

/// One object carrying `Q[x]/(x^2)`.
pub fn point_dual() -> Presheaf {
    Presheaf::constant(Arc::new(FiniteCategory::terminal()), FinAlgebra::dual_numbers())
}

/// One object carrying upper-triangular `2x2` matrices.
pub fn point_upper_triangular() -> Presheaf {
    Presheaf::constant(Arc::new(FiniteCategory::terminal()), FinAlgebra::upper_triangular())
}

fn rows(r: &[&[i64]]) -> DMat<Rat> {
    DMat::from_rows(r.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect())
}

/// Builds a presheaf on a poset from per-object algebras and the
/// restriction matrices of the non-identity arrows, keyed by `(lesser, greater)`.
pub fn poset_presheaf(
    c: Arc<FiniteCategory>,
    algebras: &[(&str, FinAlgebra<Rat>)],
    restrictions: &[(&str, &str, DMat<Rat>)],
) -> Presheaf {
    let mut algs = vec![None; c.num_objects()];
    for (name, a) in algebras {
        algs[c.object(name).unwrap()] = Some(Arc::new(a.clone()));
    }
    let algs: Vec<_> = algs.into_iter().map(|a| a.expect("every object has an algebra")).collect();
    let res = c
        .morphism_ids()
        .map(|u| {
            if c.is_identity(u) {
                return DMat::identity(algs[c.source(u)].dim());
            }
            let (s, t) = (c.obj_name(c.source(u)), c.obj_name(c.target(u)));
            restrictions
                .iter()
                .find(|(a, b, _)| *a == s && *b == t)
                .map(|(_, _, m)| m.clone())
                .unwrap_or_else(|| panic!("no restriction for {s} -> {t}"))
        })
        .collect();
    Presheaf::new(c, algs, res).unwrap_or_else(|e| panic!("{e}"))
}

/// `A(U0) = A(U1) = Q[x]/(x^2)`, `A(U01) = Q`, `x ↦ 0`.
pub fn v_dual() -> Presheaf {
    let d = FinAlgebra::dual_numbers();
    poset_presheaf(
        v_poset(),
        &[("U0", d.clone()), ("U1", d), ("U01", FinAlgebra::rationals())],
        &[("U01", "U0", rows(&[&[1, 0]])), ("U01", "U1", rows(&[&[1, 0]]))],
    )
}

/// Upper-triangular matrices on `U0` and `U1`, restricted to `Q` along the
/// two diagonal characters.
pub fn v_upper_triangular() -> Presheaf {
    let t = FinAlgebra::upper_triangular();
    poset_presheaf(
        v_poset(),
        &[("U0", t.clone()), ("U1", t), ("U01", FinAlgebra::rationals())],
        // basis 1, e12, e22: e11 and e22 characters
        &[("U01", "U0", rows(&[&[1, 0, 0]])), ("U01", "U1", rows(&[&[1, 0, 1]]))],
    )
}

/// `Q[x]/(x^3)` on `T`, `Q[x]/(x^2)` on `M1` and `M2`, `Q` on `B`.
pub fn diamond_truncated() -> Presheaf {
    let two = FinAlgebra::dual_numbers();
    let quot = rows(&[&[1, 0, 0], &[0, 1, 0]]);
    poset_presheaf(
        diamond(),
        &[
            ("T", FinAlgebra::truncated_polynomial(3)),
            ("M1", two.clone()),
            ("M2", two),
            ("B", FinAlgebra::rationals()),
        ],
        &[
            ("M1", "T", quot.clone()),
            ("M2", "T", quot),
            ("B", "M1", rows(&[&[1, 0]])),
            ("B", "M2", rows(&[&[1, 0]])),
            ("B", "T", rows(&[&[1, 0, 0]])),
        ],
    )
}

/// `Q x Q` on `U0`, `Q[x]/(x^2)` on `U1`, `Q` on `U01`.
pub fn v_mixed() -> Presheaf {
    poset_presheaf(
        v_poset(),
        &[
            ("U0", FinAlgebra::product_of(&[FinAlgebra::rationals(), FinAlgebra::rationals()])),
            ("U1", FinAlgebra::dual_numbers()),
            ("U01", FinAlgebra::rationals()),
        ],
        // basis of Q x Q is 1, e_2: the first projection kills e_2
        &[("U01", "U0", rows(&[&[1, 0]])), ("U01", "U1", rows(&[&[1, 0]]))],
    )
}

/// The commutative fixtures.
pub fn commutative() -> Vec<(&'static str, Presheaf)> {
    vec![("point_dual", point_dual()), ("v_dual", v_dual()), ("v_mixed", v_mixed()), ("diamond", diamond_truncated())]
}

/// Every fixture.
pub fn all() -> Vec<(&'static str, Presheaf)> {
    let mut out = commutative();
    out.push(("point_upper_triangular", point_upper_triangular()));
    out.push(("v_upper_triangular", v_upper_triangular()));
    out
}

/// Constant `Q` on the diamond with `c^{M1->T, B->M1} = 2`.
pub fn diamond_twisted() -> TwistedPresheaf<Rat> {
    let c = diamond();
    let q = Presheaf::constant(c.clone(), FinAlgebra::rationals());
    let key = (c.morphism("M1->T").unwrap(), c.morphism("B->M1").unwrap());
    let twists = [(key, vec![rat(2)])].into_iter().collect();
    TwistedPresheaf::new(c, q.algebras().to_vec(), q.restrictions().to_vec(), twists, Default::default()).unwrap()
}

/// A trivialization of the twist of [`diamond_twisted`]: `t_{M1->T} = 2`.
pub fn diamond_twisted_trivialization() -> Vec<Vec<Rat>> {
    let c = diamond();
    c.morphism_ids().map(|u| vec![rat(if c.mor_name(u) == "M1->T" { 2 } else { 1 })]).collect()
}
