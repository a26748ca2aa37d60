use serde_json::json;

use super::*;
use crate::descent::{check_descent, Classification};
use crate::exactla::rat;
use crate::fixtures;

fn v_dual_json() -> serde_json::Value {
    json!({
        "category": {"objects": ["U0", "U1", "U01"], "leq": [["U01", "U0"], ["U01", "U1"]]},
        "algebras": {
            "U0": {"preset": "dual_numbers"},
            "U1": {"basis": ["1", "x"], "mult": [[0, 0, ["1", "0"]], [0, 1, ["0", "1"]], [1, 0, ["0", "1"]]], "unit": ["1", "0"]},
            "U01": {"preset": "Q"}
        },
        "restrictions": {"U01->U0": [["1", "0"]], "U01->U1": [["1", "0"]]},
        "cochains": {
            "m": {"degree": 2, "blocks": [{"object": "U0", "matrix": [["0", "0", "0", "0"], ["0", "0", "0", "1/2"]]}]}
        },
        "modules": {"M": {"object": "U0", "preset": "free"}},
        "data": {"F": {"free": true}}
    })
}

fn load(v: serde_json::Value) -> Result<Project, SchemaError> {
    Project::from_json(&v.to_string())
}

fn err_at(v: serde_json::Value) -> String {
    load(v).unwrap_err().pointer
}

#[test]
fn poset_form_matches_fixture() {
    let p = load(v_dual_json()).unwrap();
    assert_eq!(&p.presheaf, fixtures::v_dual().as_twisted());
}

#[test]
fn fixtures_round_trip() {
    let mut all: Vec<(String, TwistedPresheaf<Rat>)> =
        fixtures::all().into_iter().map(|(n, a)| (n.to_string(), a.into_twisted())).collect();
    all.push(("diamond_twisted".into(), fixtures::diamond_twisted()));
    for (name, t) in all {
        let text = presheaf_json(&t).to_string();
        let p = Project::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(p.presheaf, t, "{name}");
    }
}

#[test]
fn cochain_blocks_land_in_place() {
    let p = load(v_dual_json()).unwrap();
    let cx = GsComplex::new(&p.presheaf).unwrap();
    let phi = p.cochain(&cx, "m").unwrap();
    let u0 = p.base().object("U0").unwrap();
    let k = p.base().nerve(0).position(&Simplex::object(u0)).unwrap();
    assert_eq!(phi.components[0][k].get(1, 3), crate::exactla::ratio(1, 2));
    assert_eq!(phi.components[0].iter().filter(|b| !b.is_zero()).count(), 1);
}

#[test]
fn modules_and_data_resolve() {
    let p = load(v_dual_json()).unwrap();
    let (o, m) = p.module("M").unwrap();
    assert_eq!((p.base().obj_name(o), m.dim()), ("U0", 2));
    let d = p.datum("F").unwrap();
    assert_eq!(check_descent(&p.presheaf, &d).unwrap().classification, Classification::Descent);
}

#[test]
fn explicit_datum() {
    let mut v = v_dual_json();
    v["data"]["G"] = json!({
        "modules": {"U0": {"preset": "free"}, "U1": {"preset": "free"}, "U01": {"preset": "free"}},
        "phi": {"U01->U0": [["1", "0"]], "U01->U1": [["1", "0"]]}
    });
    let p = load(v).unwrap();
    assert_eq!(p.datum("G").unwrap(), p.datum("F").unwrap());
}

#[test]
fn twisted_project() {
    let mut v = presheaf_json(&fixtures::diamond_twisted());
    v["data"] = json!({"T": {"free": true, "trivialization": {"M1->T": ["2"]}}});
    let p = load(v).unwrap();
    assert!(!p.presheaf.has_trivial_twists());
    assert_eq!(check_descent(&p.presheaf, &p.datum("T").unwrap()).unwrap().classification, Classification::Descent);
}

#[test]
fn equivalence_defaults_to_zero() {
    let mut v = v_dual_json();
    v["equivalences"] = json!({"E": {"tau1": {"U01->U0": ["3"]}}});
    let p = load(v).unwrap();
    let (g1, tau1) = p.equivalence("E").unwrap();
    assert!(g1.iter().all(|g| g.is_zero()));
    let u = p.base().morphism("U01->U0").unwrap();
    assert_eq!(tau1[u], vec![rat(3)]);
}

#[test]
fn schema_errors_carry_pointers() {
    let mut v = v_dual_json();
    v["algebras"]["U1"]["unit"] = json!(["1", "x"]);
    assert_eq!(err_at(v), "/algebras/U1/unit/1");

    let mut v = v_dual_json();
    v["restrictions"]["U01->U0"] = json!([["1"]]);
    assert_eq!(err_at(v), "/restrictions/U01->U0");

    let mut v = v_dual_json();
    v["extra"] = json!(1);
    assert_eq!(err_at(v), "/extra");

    let mut v = v_dual_json();
    v["category"]["objects"] = json!(["U0", "U1"]);
    assert_eq!(err_at(v), "/category");

    let mut v = v_dual_json();
    v["twists"] = json!({"U01->U0, U01->U1": ["1"]});
    assert_eq!(err_at(v), "/twists/U01->U0, U01->U1");

    let mut v = v_dual_json();
    v["twists"] = json!({"(U01->U0, U01->U1)": ["1"]});
    assert!(load(v).unwrap_err().message.contains("not composable"));

    let mut v = v_dual_json();
    v["algebras"]["U0"] = json!({"preset": "octonions"});
    assert_eq!(err_at(v), "/algebras/U0/preset");

    let mut v = v_dual_json();
    v["schema_version"] = json!(7);
    assert_eq!(err_at(v), "/schema_version");

    let mut v = v_dual_json();
    v["cochains"]["m"]["degree"] = json!("two");
    assert_eq!(err_at(v), "/cochains/m/degree");
}

#[test]
fn reference_errors_carry_pointers() {
    let mut v = v_dual_json();
    v["cochains"]["bad"] = json!({"degree": 2, "blocks": [{"arrows": ["U01->U0", "nope"], "matrix": []}]});
    v["cochains"]["wide"] = json!({"degree": 2, "blocks": [{"arrows": ["U01->U0"], "matrix": [["1"]]}]});
    v["equivalences"] = json!({"E": {"g1": {"W": [["1"]]}}});
    v["data"]["D"] = json!({"modules": {"U0": {"preset": "free"}}});
    let p = load(v).unwrap();
    let cx = GsComplex::new(&p.presheaf).unwrap();
    assert_eq!(p.cochain(&cx, "bad").unwrap_err().pointer, "/cochains/bad/blocks/0/arrows/1");
    assert_eq!(p.cochain(&cx, "wide").unwrap_err().pointer, "/cochains/wide/blocks/0/matrix");
    assert_eq!(p.cochain(&cx, "missing").unwrap_err().pointer, "/cochains");
    assert_eq!(p.equivalence("E").unwrap_err().pointer, "/equivalences/E/g1/W");
    assert_eq!(p.datum("D").unwrap_err().pointer, "/data/D/modules");
}

#[test]
fn pointer_escaping() {
    assert_eq!(pointer_token("a/b~c"), "a~1b~0c");
}

#[test]
fn cochains_round_trip() {
    let a = fixtures::v_dual();
    let cx = GsComplex::new(a.as_twisted()).unwrap();
    let mut v = presheaf_json(a.as_twisted());
    let basis = crate::deform::cocycle_basis(&cx).unwrap();
    v["cochains"] = json!({"phi": cochain_json(a.base(), &basis[0])});
    let p = load(v).unwrap();
    assert_eq!(p.cochain(&cx, "phi").unwrap(), basis[0]);
}
