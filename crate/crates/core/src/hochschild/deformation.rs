use crate::algebra::{check_hom, FinAlgebra};
use crate::exactla::{DMat, Dual, Rat};

use super::HCochain;

/// `(A[ε], m + m₁ε)` with the unit of `A`; no axioms are checked.
pub fn deform_algebra(a: &FinAlgebra<Rat>, m1: &HCochain) -> FinAlgebra<Dual> {
    let d = a.dim();
    assert_eq!(m1.degree, 2, "an algebra deformation needs a 2-cochain");
    let eps = m1.to_vec();
    let mult = a
        .structure_constants()
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            // idx = (i*d + j)*d + k, and the coordinate of m₁ is (i*d + j)*d + k as well
            Dual::new(c.clone(), eps[idx].clone())
        })
        .collect();
    let unit = a.unit().iter().map(|x| Dual::new(x.clone(), Rat::default())).collect();
    let names = a.names().to_vec();
    debug_assert_eq!(eps.len(), d * d * d);
    FinAlgebra::new_unchecked(names, mult, unit).expect("shapes agree")
}

/// Whether `m + m₁ε` is associative with the undeformed unit.
pub fn is_algebra_deformation(a: &FinAlgebra<Rat>, m1: &HCochain) -> bool {
    let b = deform_algebra(a, m1);
    b.associativity_failure().is_none() && b.unit_failure().is_none()
}

/// Whether `1 + g₁ε: (A[ε], m + m₁ε) -> (A[ε], m + m₁'ε)` is a unital algebra map.
pub fn is_deformation_isomorphism(a: &FinAlgebra<Rat>, m1: &HCochain, m1p: &HCochain, g1: &HCochain) -> bool {
    let d = a.dim();
    let g = DMat::from_fn(d, d, |i, j| {
        let re = if i == j { Rat::from_integer(1.into()) } else { Rat::default() };
        Dual::new(re, g1.matrix.get(i, j))
    });
    check_hom(&deform_algebra(a, m1), &deform_algebra(a, m1p), &g).is_none()
}
