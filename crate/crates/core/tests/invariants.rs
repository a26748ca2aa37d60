use std::sync::Arc;

use gsd_core::algebra::FinAlgebra;
use gsd_core::exactla::{fmt_rat, parse_rat, ratio};
use gsd_core::fincat::FiniteCategory;
use gsd_core::fixtures;
use gsd_core::gs::{gs_cohomology, GsComplex, Kind};
use gsd_core::presheaf::{check_twisted_presheaf, Presheaf};
use gsd_core::project::{presheaf_json, Project};
use proptest::prelude::*;

fn algebra(k: usize) -> FinAlgebra<gsd_core::exactla::Rat> {
    match k {
        0 => FinAlgebra::rationals(),
        1 => FinAlgebra::dual_numbers(),
        2 => FinAlgebra::upper_triangular(),
        _ => FinAlgebra::product_of(&[FinAlgebra::rationals(), FinAlgebra::rationals()]),
    }
}

/// A constant presheaf on a chain `0 < 1 < ... < len-1`.
fn chain(len: usize, k: usize) -> Presheaf {
    let names: Vec<String> = (0..len).map(|i| format!("x{i}")).collect();
    let rels = (1..len).map(|i| (names[i - 1].clone(), names[i].clone())).collect();
    let c = FiniteCategory::poset_owned(names, rels).unwrap();
    Presheaf::constant(Arc::new(c), algebra(k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn d_gs_squares_to_zero_on_chains(len in 1usize..4, k in 0usize..4) {
        let a = chain(len, k);
        let cx = GsComplex::new(a.as_twisted()).unwrap();
        for n in 0..2 {
            prop_assert!(cx.differential(n + 1).mul(&cx.differential(n)).is_zero());
        }
    }

    #[test]
    fn constant_presheaves_on_chains_are_valid(len in 1usize..4, k in 0usize..4) {
        prop_assert!(check_twisted_presheaf(chain(len, k).as_twisted()).is_valid());
    }

    #[test]
    fn rationals_print_and_parse(p in -1000i64..1000, q in 1i64..1000) {
        let r = ratio(p, q);
        prop_assert_eq!(parse_rat(&fmt_rat(&r)).unwrap(), r);
    }
}

#[test]
fn kinds_agree_on_fixtures() {
    for (name, a) in fixtures::all() {
        for n in 0..=2 {
            let r = gs_cohomology(a.as_twisted(), n, &[Kind::Full, Kind::Normalized, Kind::NormalizedReduced])
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(r.by_kind.iter().all(|(_, b)| *b == r.betti), "{name}: {r:?}");
        }
    }
}

#[test]
fn a_constant_presheaf_on_a_chain_has_the_cohomology_of_its_algebra() {
    // the nerve of a chain is contractible
    for k in 0..4 {
        let point = chain(1, k);
        let longer = chain(3, k);
        for n in 0..=2 {
            let a = gs_cohomology(point.as_twisted(), n, &[Kind::Full]).unwrap().betti;
            let b = gs_cohomology(longer.as_twisted(), n, &[Kind::Full]).unwrap().betti;
            assert_eq!(a, b, "algebra {k}, degree {n}");
        }
    }
}

#[test]
fn project_files_reproduce_fixtures() {
    for (name, a) in fixtures::all() {
        let p = Project::from_json(&presheaf_json(a.as_twisted()).to_string()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(&p.presheaf, a.as_twisted(), "{name}");
    }
}
