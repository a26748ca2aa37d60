use std::path::{Path, PathBuf};
use std::process::Command;

use gsd_core::deform::{cocycle_basis, split_equivalence_cochain};
use gsd_core::exactla::{rat, Rat, RatMatrix};
use gsd_core::fincat::Simplex;
use gsd_core::fixtures;
use gsd_core::gs::{gs_cohomology, GsComplex, Kind};
use gsd_core::project::{cochain_json, presheaf_json};
use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
    json: Value,
}

fn gsd_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gsd"));
    cmd.args(args).env_remove("GSD_IDEMPOTENT_BOUND");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("gsd runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}"));
    Run { code: out.status.code().unwrap(), stdout, stderr: String::from_utf8(out.stderr).unwrap(), json }
}

fn gsd(args: &[&str]) -> Run {
    gsd_env(args, &[])
}

fn write_project(name: &str, v: &Value) -> String {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn add(x: &[Rat], y: &[Rat], s: i64) -> Vec<Rat> {
    x.iter().zip(y).map(|(a, b)| a + b * rat(s)).collect()
}

/// `v_dual` with its first H² representative, a cohomologous cocycle, the
/// connecting (g₁, τ₁), and a perturbed non-cocycle.
fn v_dual_with_cocycles() -> String {
    let a = fixtures::v_dual();
    let c = a.base();
    let cx = GsComplex::new(a.as_twisted()).unwrap();
    let phi = cocycle_basis(&cx).unwrap().remove(0);
    let k = cx.coords(Kind::NormalizedReduced, 1).unwrap().len();
    let v: Vec<Rat> = (0..k).map(|i| rat(i as i64 % 3 - 1)).collect();
    let psi = cx.from_vec(1, &cx.embed(Kind::NormalizedReduced, 1, &v).unwrap()).unwrap();
    let shifted = cx.from_vec(2, &add(&cx.to_vec(&phi).unwrap(), &cx.to_vec(&cx.d_gs(&psi).unwrap()).unwrap(), -1)).unwrap();
    let (g1, tau1) = split_equivalence_cochain(&cx, &psi);
    // m₁(x, x) gains a unit term, which f: A(U0) -> Q does not kill
    let mut broken = phi.clone();
    let pos = c.nerve(0).position(&Simplex::object(c.object("U0").unwrap())).unwrap();
    let bump = RatMatrix::from_triplets(2, 4, [(0, 3, rat(1))]);
    broken.components[0][pos] = broken.components[0][pos].add(&bump);

    let mut p = presheaf_json(a.as_twisted());
    p["cochains"] = json!({
        "zero": {"degree": 2},
        "phi": cochain_json(c, &phi),
        "shifted": cochain_json(c, &shifted),
        "broken": cochain_json(c, &broken),
    });
    let g: serde_json::Map<String, Value> = c
        .objects()
        .map(|o| {
            let m = &g1[o];
            let rows: Vec<Vec<String>> = (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect();
            (c.obj_name(o).to_string(), json!(rows))
        })
        .collect();
    let t: serde_json::Map<String, Value> = c
        .morphism_ids()
        .map(|u| (c.mor_name(u).to_string(), json!(tau1[u].iter().map(|x| x.to_string()).collect::<Vec<_>>())))
        .collect();
    p["equivalences"] = json!({"E": {"g1": g, "tau1": t}, "none": {}});
    write_project("v_dual_cocycles.json", &p)
}

#[test]
fn check_on_trivial_presheaf() {
    let r = gsd(&["check", data("point_q.json").to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["report"]["valid"], json!(true));
    assert_eq!(r.json["status"], "ok");
}

#[test]
fn reports_embed_versions() {
    let r = gsd(&["check", data("point_q.json").to_str().unwrap()]);
    assert_eq!(r.json["schema_version"], json!(1));
    assert_eq!(r.json["idempotent_construction"], json!(gsd_core::project::IDEMPOTENT_CONSTRUCTION));
    assert_eq!(r.json["idempotent_bound"], json!(6));
    assert_eq!(r.json["command"], "check");
}

#[test]
fn gs_betti_matches_library() {
    let path = data("v_dual.json");
    let lib = gs_cohomology(fixtures::v_dual().as_twisted(), 2, &[Kind::Full]).unwrap();
    for kind in ["full", "normalized", "normalized_reduced"] {
        let r = gsd(&["cohomology", path.to_str().unwrap(), "--complex", "gs", "--degree", "2", "--kind", kind]);
        assert_eq!(r.code, 0);
        assert_eq!(r.json["report"]["betti"], json!(lib.betti), "{kind}");
    }
}

#[test]
fn other_complexes() {
    let path = data("v_dual.json");
    let p = path.to_str().unwrap();
    let hoch = gsd(&["cohomology", p, "--complex", "hoch", "--degree", "2", "--kind", "normalized"]);
    assert_eq!(hoch.json["report"]["betti_by_object"], json!({"U0": 1, "U01": 0, "U1": 1}));
    let simp = gsd(&["cohomology", p, "--complex", "simp", "--degree", "0"]);
    let cech = gsd(&["cohomology", p, "--complex", "cech", "--degree", "0"]);
    assert_eq!(simp.json["report"]["betti"], json!(3));
    assert_eq!(cech.json["report"]["betti"], json!(3));
    let bad = gsd(&["cohomology", p, "--complex", "simp", "--degree", "0", "--kind", "weird"]);
    assert_eq!(bad.code, 2);
}

#[test]
fn deform_names_the_failing_component() {
    let p = v_dual_with_cocycles();
    let ok = gsd(&["deform", &p, "--cocycle", "phi"]);
    assert_eq!(ok.code, 0, "{}", ok.stdout);
    let bad = gsd(&["deform", &p, "--cocycle", "broken"]);
    assert_eq!(bad.code, 1);
    let failures = bad.json["report"]["failures"].as_array().unwrap();
    assert!(failures.iter().any(|f| f["component"] == "hom_property" && f["at"] == "(U01->U0)"), "{}", bad.stdout);
    assert_eq!(bad.json["report"]["verdicts_agree"], json!(true));

    let hand = gsd(&["deform", data("v_dual.json").to_str().unwrap(), "--cocycle", "broken"]);
    assert_eq!(hand.code, 1);
    assert!(hand.stdout.contains("associativity at U0"));
}

#[test]
fn equivalence_search_and_check() {
    let p = v_dual_with_cocycles();
    let found = gsd(&["equiv", &p, "--from", "phi", "--to", "shifted"]);
    assert_eq!(found.code, 0, "{}", found.stdout);
    assert_eq!(found.json["report"]["equivalent"], json!(true));
    let via = gsd(&["equiv", &p, "--from", "phi", "--to", "shifted", "--via", "E"]);
    assert_eq!(via.code, 0, "{}", via.stdout);
    assert_eq!(via.json["report"]["cochain_verdict"], json!(true));
    let wrong = gsd(&["equiv", &p, "--from", "phi", "--to", "shifted", "--via", "none"]);
    assert_eq!(wrong.code, 1);
    assert_eq!(wrong.json["report"]["verdicts_agree"], json!(true));
    let distinct = gsd(&["equiv", &p, "--from", "phi", "--to", "zero"]);
    assert_eq!(distinct.code, 1);
    assert_eq!(distinct.json["report"]["equivalent"], json!(false));
}

#[test]
fn hodge_and_bound() {
    let p = data("v_dual.json");
    let p = p.to_str().unwrap();
    let r = gsd(&["hodge", p, "--degree", "2"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["report"]["additive"], json!(true));
    let tight = gsd_env(&["hodge", p, "--degree", "2"], &[("GSD_IDEMPOTENT_BOUND", "1")]);
    assert_eq!(tight.code, 1);
    assert_eq!(tight.json["idempotent_bound"], json!(1));
    let flag = gsd_env(&["--idempotent-bound", "6", "hodge", p, "--degree", "2"], &[("GSD_IDEMPOTENT_BOUND", "1")]);
    assert_eq!(flag.code, 0);
    let junk = gsd_env(&["hodge", p, "--degree", "2"], &[("GSD_IDEMPOTENT_BOUND", "six")]);
    assert_eq!(junk.code, 2);

    let mut nc = presheaf_json(fixtures::v_upper_triangular().as_twisted());
    nc["schema_version"] = json!(1);
    let nc = write_project("v_upper.json", &nc);
    assert_eq!(gsd(&["hodge", &nc, "--degree", "1"]).code, 1);
}

#[test]
fn factor_reports_simplices() {
    let p = data("v_dual.json");
    let p = p.to_str().unwrap();
    let ok = gsd(&["factor", p, "--cochain", "liftable", "--p", "1"]);
    assert_eq!(ok.code, 0, "{}", ok.stdout);
    assert_eq!(ok.json["report"]["lifts"]["(U01->U0)"], json!([["1"]]));
    let bad = gsd(&["factor", p, "--cochain", "not_liftable", "--p", "1"]);
    assert_eq!(bad.code, 1);
    assert_eq!(bad.json["report"]["failures"], json!(["(U01->U0)"]));
}

#[test]
fn compare_cech_on_meet_posets() {
    assert_eq!(gsd(&["compare-cech", data("v_dual.json").to_str().unwrap()]).code, 0);
    assert_eq!(gsd(&["compare-cech", data("diamond_twisted.json").to_str().unwrap(), "--max-degree", "2"]).code, 0);
    let r = gsd(&["compare-cech", data("two_points.json").to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.json["report"]["error"].as_str().unwrap().contains("no meet"));
}

#[test]
fn descent_check_classifies() {
    let t = data("diamond_twisted.json");
    let t = t.to_str().unwrap();
    let naive = gsd(&["descent-check", t, "--datum", "naive"]);
    assert_eq!(naive.code, 1);
    assert_eq!(naive.json["report"]["descent"]["classification"], "invalid");
    let fixed = gsd(&["descent-check", t, "--datum", "trivialized"]);
    assert_eq!(fixed.code, 0);

    let v = data("v_dual.json");
    let free = gsd(&["descent-check", v.to_str().unwrap(), "--datum", "free"]);
    assert_eq!(free.code, 0, "{}", free.stdout);
    assert_eq!(free.json["report"]["pseudonaturality"]["failures"], json!([]));
    let collapsed = gsd(&["descent-check", v.to_str().unwrap(), "--datum", "collapsed"]);
    assert_eq!(collapsed.code, 1);
    assert_eq!(collapsed.json["report"]["descent"]["classification"], "pre_descent");
}

#[test]
fn schema_errors_exit_2_with_pointer() {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(data("v_dual.json")).unwrap()).unwrap();
    v["restrictions"]["U01->U0"] = json!([["1", "zero"]]);
    let p = write_project("bad_rational.json", &v);
    let r = gsd(&["check", &p]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["status"], "schema_error");
    assert_eq!(r.json["error"]["pointer"], "/restrictions/U01->U0/0/1");

    let r = gsd(&["deform", data("v_dual.json").to_str().unwrap(), "--cocycle", "missing"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["error"]["pointer"], "/cochains");

    let r = gsd(&["check", "/nonexistent/project.json"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["status"], "input_error");
}

#[test]
fn output_is_deterministic() {
    let p = v_dual_with_cocycles();
    let v = data("v_dual.json");
    let v = v.to_str().unwrap();
    let runs: [&[&str]; 6] = [
        &["check", v],
        &["cohomology", v, "--complex", "gs", "--degree", "2"],
        &["hodge", v, "--degree", "2"],
        &["equiv", &p, "--from", "phi", "--to", "shifted"],
        &["compare-cech", v],
        &["factor", v, "--cochain", "liftable", "--p", "1"],
    ];
    for args in runs {
        let (a, b) = (gsd(args), gsd(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn quiet_silences_progress() {
    let p = data("point_q.json");
    let loud = gsd(&["check", p.to_str().unwrap()]);
    assert!(loud.stderr.contains("gsd: loading"));
    let quiet = gsd(&["--quiet", "check", p.to_str().unwrap()]);
    assert!(quiet.stderr.is_empty());
    assert_eq!(loud.stdout, quiet.stdout);
}
