use std::collections::BTreeMap;

use gsd_core::deform::{deform_in, diagnose, equivalence, find_equivalence};
use gsd_core::descent::{check_descent, verify_pseudonatural, Classification};
use gsd_core::exactla::{Rat, RatMatrix};
use gsd_core::fincat::MeetPoset;
use gsd_core::gs::{factor_through, gs_cohomology, hodge_report, GsComplex, Kind};
use gsd_core::hochschild::HochschildComplex;
use gsd_core::presheaf::check_twisted_presheaf;
use gsd_core::project::{Project, SchemaError};
use gsd_core::simpcech::{CechComplex, ModPresheaf, SimpComplex};
use serde_json::{json, Value};

pub struct Outcome {
    pub passed: bool,
    pub report: Value,
}

pub enum Error {
    Schema(SchemaError),
    Input(String),
}

impl From<SchemaError> for Error {
    fn from(e: SchemaError) -> Self {
        Error::Schema(e)
    }
}

type Res = Result<Outcome, Error>;

fn ok(report: Value) -> Res {
    Ok(Outcome { passed: true, report })
}

fn verdict(passed: bool, report: Value) -> Res {
    Ok(Outcome { passed, report })
}

/// A library error on valid input is a failed verification.
fn failed(e: impl std::fmt::Display) -> Res {
    verdict(false, json!({ "error": e.to_string() }))
}

macro_rules! attempt {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return failed(e),
        }
    };
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn vec_json(v: &[Rat]) -> Value {
    json!(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn matrix_json(m: &RatMatrix) -> Value {
    json!((0..m.rows()).map(|i| vec_json(&(0..m.cols()).map(|j| m.get(i, j)).collect::<Vec<_>>())).collect::<Vec<_>>())
}

fn complex(p: &Project) -> Result<GsComplex, String> {
    GsComplex::new(&p.presheaf).map_err(|e| e.to_string())
}

pub fn check(p: &Project) -> Res {
    let r = check_twisted_presheaf(&p.presheaf);
    verdict(r.is_valid(), json!({ "valid": r.is_valid(), "failures": to_json(&r.failures) }))
}

pub fn cohomology_gs(p: &Project, n: usize, kind: Kind) -> Res {
    let r = attempt!(gs_cohomology(&p.presheaf, n, &[kind]));
    ok(json!({ "complex": "gs", "degree": n, "kind": kind.as_str(), "betti": r.betti }))
}

pub fn cohomology_hoch(p: &Project, n: usize, kind: &str) -> Res {
    let normalized = match kind {
        "full" => false,
        "normalized" => true,
        other => return Err(Error::Input(format!("hoch kind must be full or normalized, got {other:?}"))),
    };
    let c = p.base();
    let mut betti = BTreeMap::new();
    for o in c.objects() {
        let h = attempt!(HochschildComplex::regular(p.presheaf.algebra(o).clone()).cohomology(n, normalized));
        betti.insert(c.obj_name(o).to_string(), h.dim);
    }
    ok(json!({ "complex": "hoch", "degree": n, "kind": kind, "betti_by_object": betti }))
}

pub fn cohomology_simp(p: &Project, n: usize, q: usize, kind: &str) -> Res {
    let reduced = match kind {
        "full" => false,
        "reduced" => true,
        other => return Err(Error::Input(format!("simp kind must be full or reduced, got {other:?}"))),
    };
    let t = &p.presheaf;
    let cx = attempt!(SimpComplex::new(ModPresheaf::tensor_power(t, q), ModPresheaf::underlying(t)));
    let h = attempt!(cx.cohomology(n, reduced));
    ok(json!({ "complex": "simp", "degree": n, "row": q, "kind": kind, "betti": h.dim }))
}

fn cech(p: &Project) -> Result<CechComplex, String> {
    let poset = MeetPoset::new(p.base().clone()).map_err(|e| e.to_string())?;
    CechComplex::new(poset, ModPresheaf::underlying(&p.presheaf)).map_err(|e| e.to_string())
}

pub fn cohomology_cech(p: &Project, n: usize, kind: &str) -> Res {
    let alternating = match kind {
        "alternating" => true,
        "full" => false,
        other => return Err(Error::Input(format!("cech kind must be alternating or full, got {other:?}"))),
    };
    let cx = attempt!(cech(p));
    let h = attempt!(cx.cohomology(n, alternating));
    ok(json!({ "complex": "cech", "degree": n, "kind": kind, "betti": h.dim }))
}

pub fn hodge(p: &Project, n: usize, bound: usize) -> Res {
    let r = attempt!(hodge_report(&p.presheaf, n, bound));
    verdict(r.passed(), to_json(&r))
}

pub fn deform(p: &Project, name: &str) -> Res {
    let cx = attempt!(complex(p));
    let phi = p.cochain(&cx, name)?;
    if phi.degree != 2 {
        return failed(format!("{name} has degree {}, deformations come from degree 2", phi.degree));
    }
    let diag = attempt!(diagnose(&cx, &phi));
    let failures: Vec<Value> = diag
        .cochain
        .iter()
        .map(|f| json!({ "component": to_json(&f.component), "at": f.at, "message": f.to_string() }))
        .collect();
    let mut report = json!({
        "cocycle": name,
        "valid": diag.checker_valid() && diag.cochain_valid(),
        "verdicts_agree": diag.agree(),
        "failures": failures,
        "checker_failures": to_json(&diag.checker.failures),
    });
    if let Ok(def) = deform_in(&cx, &phi) {
        let c = p.base();
        let twists: Vec<String> = def
            .presheaf
            .explicit_twists()
            .keys()
            .map(|&(u, v)| format!("({}, {})", c.mor_name(u), c.mor_name(v)))
            .collect();
        report["nontrivial_twists"] = json!(twists);
        return ok(report);
    }
    verdict(false, report)
}

pub fn equiv(p: &Project, from: &str, to: &str, via: Option<&str>) -> Res {
    let cx = attempt!(complex(p));
    let (a, b) = (p.cochain(&cx, from)?, p.cochain(&cx, to)?);
    let da = attempt!(deform_in(&cx, &a));
    let db = attempt!(deform_in(&cx, &b));
    let c = p.base();
    if let Some(name) = via {
        let (g1, tau1) = p.equivalence(name)?;
        let v = attempt!(equivalence(&cx, &da, &db, &g1, &tau1));
        let report = json!({
            "from": from,
            "to": to,
            "via": name,
            "isomorphism": v.isomorphism(),
            "cochain_verdict": v.cochain_verdict(),
            "verdicts_agree": v.agree(),
            "morphism_failures": to_json(&v.morphism_failures),
        });
        return verdict(v.isomorphism() && v.agree(), report);
    }
    let found = attempt!(find_equivalence(&cx, &da, &db));
    let mut report = json!({ "from": from, "to": to, "equivalent": found.is_some() });
    if let Some((g1, tau1)) = &found {
        let g: BTreeMap<String, Value> = c.objects().map(|o| (c.obj_name(o).to_string(), matrix_json(&g1[o]))).collect();
        let t: BTreeMap<String, Value> = c.morphism_ids().map(|u| (c.mor_name(u).to_string(), vec_json(&tau1[u]))).collect();
        report["g1"] = json!(g);
        report["tau1"] = json!(t);
    }
    verdict(found.is_some(), report)
}

pub fn compare_cech(p: &Project, max_degree: usize) -> Res {
    let cx = attempt!(cech(p));
    let simp = SimpComplex::of(ModPresheaf::underlying(&p.presheaf));
    let mut degrees = Vec::new();
    let mut passed = true;
    for n in 0..=max_degree {
        let h = attempt!(cx.check_homotopy(n));
        let s = attempt!(simp.cohomology(n, false));
        let a = attempt!(cx.cohomology(n, true));
        let full = cx.cohomology(n, false).ok().map(|x| x.dim);
        let equal = s.dim == a.dim && full.is_none_or(|f| f == s.dim);
        passed &= h.passed() && equal;
        degrees.push(json!({
            "degree": n,
            "simplicial_betti": s.dim,
            "cech_alternating_betti": a.dim,
            "cech_full_betti": full,
            "betti_equal": equal,
            "homotopy": to_json(&h),
        }));
    }
    verdict(passed, json!({ "degrees": degrees }))
}

pub fn descent_check(p: &Project, name: &str) -> Res {
    let d = p.datum(name)?;
    let r = attempt!(check_descent(&p.presheaf, &d));
    let mut report = json!({ "datum": name, "descent": to_json(&r) });
    let mut passed = r.classification == Classification::Descent;
    let samples = p.file.modules.keys().map(|m| p.module(m)).collect::<Result<Vec<_>, _>>()?;
    if !samples.is_empty() {
        match verify_pseudonatural(&p.presheaf, &samples) {
            Ok(q) => {
                passed &= q.passed();
                report["pseudonaturality"] = to_json(&q);
            }
            Err(e) => report["pseudonaturality"] = json!({ "skipped": e.to_string() }),
        }
    }
    verdict(passed, report)
}

pub fn factor(p: &Project, name: &str, simplicial: usize, bound: usize) -> Res {
    let cx = attempt!(complex(p));
    let theta = p.cochain(&cx, name)?;
    if simplicial > theta.degree {
        return Err(Error::Input(format!("p = {simplicial} exceeds the degree {} of {name}", theta.degree)));
    }
    let r = theta.degree - simplicial;
    let rep = attempt!(factor_through(&cx, simplicial, r, theta.part(simplicial), bound));
    let lifts: BTreeMap<String, Value> =
        rep.results.iter().filter_map(|x| x.lift.as_ref().map(|l| (x.simplex.clone(), matrix_json(l)))).collect();
    let mut report = to_json(&rep);
    report["lifts"] = json!(lifts);
    verdict(rep.passed(), report)
}
