use std::fmt::Write;

use lieflag::bilagrangian::{audit_connection, check_pair, connection, curvature_flatness, BilagrangianPair};
use lieflag::diagram::{classify_vertices, diagram, kernel_chain, predicates, Step, VertexClass};
use lieflag::document::AlgebraDocument;
use lieflag::flags::{validate_flag, Flag};
use lieflag::forms::{d_covector, d_two_form, is_closed, TwoForm};
use lieflag::lagrangian::{diagram_to_lagrangian, find_lagrangians, kahler_premise_pipeline, lagrangian_to_flag, verify_lagrangian, CandidateStatus, SearchMode};
use lieflag::linalg::unit_vec;
use lieflag::primitivity::{primitive_test, singular_bound_audit, transitive_test, transitivity_audit, PairPresentation};
use lieflag::reduction::deform_to_simple;
use serde_json::json;

use crate::{Failure, EXIT_OK, EXIT_VIOLATION};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    /// None for skipped checks.
    pub ok: Option<bool>,
    pub detail: String,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn record(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.0.push(Check { name: name.into(), ok: Some(ok), detail: detail.into() });
    }

    fn skip(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.0.push(Check { name: name.into(), ok: None, detail: detail.into() });
    }
}

fn flags_of(doc: &AlgebraDocument) -> Vec<(String, Flag)> {
    doc.flags
        .keys()
        .filter(|n| !doc.is_known_discrepancy(n))
        .filter_map(|n| doc.flag(n).ok().map(|f| (n.clone(), f)))
        .collect()
}

fn algebra_checks(doc: &AlgebraDocument, c: &mut Checks) {
    let alg = &doc.algebra;
    let n = alg.dim();
    let dd = (0..n).all(|i| d_two_form(alg, &d_covector(alg, &unit_vec(n, i))).is_zero());
    c.record("algebra: d o d = 0 on the coframe", dd, "");
}

fn diagram_checks(doc: &AlgebraDocument, fname: &str, w: &TwoForm, flags: &[(String, Flag)], c: &mut Checks) {
    let alg = &doc.algebra;
    for name in doc.flags.keys().filter(|n| doc.is_known_discrepancy(n)) {
        c.skip(format!("{fname}/{name}"), "known discrepancy");
    }
    for (name, flag) in flags {
        let tag = format!("{fname}/{name}");
        let report = validate_flag(alg, flag);
        c.record(format!("{tag}: flag is a composition series"), report.first_failure().is_none(), report.first_failure().unwrap_or_default());
        let chain = match kernel_chain(alg, w, flag) {
            Ok(ch) => ch,
            Err(e) => {
                c.record(format!("{tag}: kernel chain"), false, e.to_string());
                continue;
            }
        };
        let dichotomy = (0..chain.steps.len()).all(|k| {
            let (a, b) = (&chain.h[k], &chain.h[k + 1]);
            match chain.steps[k] {
                Step::Up => b.contains_space(a) && b.dim() == a.dim() + 1,
                Step::Down => a.contains_space(b) && a.dim() == b.dim() + 1,
            }
        });
        c.record(format!("{tag}: step dichotomy"), dichotomy, "");
        c.record(format!("{tag}: radicals are subalgebras"), chain.h.iter().all(|h| alg.is_subalgebra(h)), "");
        let d = classify_vertices(&chain);
        let repulsive = d.weight_zero_singular().all(|v| v.class == VertexClass::SingularRepulsive);
        c.record(format!("{tag}: weight-zero singular vertices are repulsive"), repulsive, "");
        let p = predicates(alg, &d);
        if p.simple {
            let l = diagram_to_lagrangian(&d);
            let ok = l.as_ref().is_ok_and(|l| verify_lagrangian(alg, w, l) == CandidateStatus::Verified);
            c.record(format!("{tag}: singular vertex of the simple diagram is Lagrangian"), ok, "");
        } else if p.semi_simple && p.semi_nilpotent {
            let res = deform_to_simple(alg, w, flag).map_err(|e| e.to_string()).and_then(|f| diagram(alg, w, &f).map_err(|e| e.to_string()));
            match res {
                Ok(d2) => c.record(format!("{tag}: deformation reaches a simple diagram"), d2.is_simple(), ""),
                Err(e) => c.record(format!("{tag}: deformation reaches a simple diagram"), false, e),
            }
        }
    }
}

fn lagrangian_checks(doc: &AlgebraDocument, fname: &str, w: &TwoForm, c: &mut Checks) {
    let alg = &doc.algebra;
    let verdict = find_lagrangians(alg, w, SearchMode::Both);
    for l in &verdict.found {
        let tag = format!("{fname}: Lagrangian {}", doc.span_text(l));
        c.record(format!("{tag} verified"), verify_lagrangian(alg, w, l) == CandidateStatus::Verified, "");
        if l.is_full() {
            continue;
        }
        let back = lagrangian_to_flag(alg, w, l)
            .map_err(|e| e.to_string())
            .and_then(|f| diagram(alg, w, &f).map_err(|e| e.to_string()))
            .and_then(|d| diagram_to_lagrangian(&d).map_err(|e| e.to_string()));
        match back {
            Ok(m) => c.record(format!("{tag} round trip"), m == *l, ""),
            Err(e) => c.record(format!("{tag} round trip"), false, e),
        }
    }
    match kahler_premise_pipeline(alg, w) {
        Ok(r) => match r.flag {
            Some(f) => {
                let simple = diagram(alg, w, &f).is_ok_and(|d| d.is_simple());
                c.record(format!("{fname}: derived-algebra premise yields a simple flag"), simple, "");
            }
            None => c.skip(format!("{fname}: derived-algebra premise"), "premise does not hold"),
        },
        Err(e) => c.record(format!("{fname}: derived-algebra premise pipeline"), false, e.to_string()),
    }
}

fn bilagrangian_checks(doc: &AlgebraDocument, fname: &str, w: &TwoForm, c: &mut Checks) {
    let alg = &doc.algebra;
    for (ln, l) in &doc.subspaces {
        for (rn, r) in &doc.subspaces {
            if ln >= rn {
                continue;
            }
            let pair = BilagrangianPair { left: l.clone(), right: r.clone() };
            if check_pair(alg, w, &pair).is_err() {
                continue;
            }
            let tag = format!("{fname}/({ln},{rn})");
            match connection(alg, w, &pair) {
                Ok(t) => {
                    let a = audit_connection(alg, w, &pair, &t);
                    let detail = format!(
                        "torsion_free={} parallel_form={} preserves_left={} preserves_right={}",
                        a.torsion_free, a.parallel_form, a.preserves_left, a.preserves_right
                    );
                    c.record(format!("{tag}: connection audit"), a.all(), detail);
                    let f = curvature_flatness(alg, &t);
                    c.record(format!("{tag}: flatness agrees with the curvature tensor"), f.hess_flat == f.tensor.is_zero(), format!("flat={}", f.hess_flat));
                }
                Err(e) => c.record(format!("{tag}: connection"), false, e.to_string()),
            }
        }
    }
}

fn pair_checks(doc: &AlgebraDocument, tag: &str, pair: &PairPresentation, c: &mut Checks) {
    let ta = transitivity_audit(pair);
    c.record(format!("{tag}: transitivity criteria agree"), ta.holds, format!("derived_transitive={} ideal_closure_full={}", ta.derived_transitive, ta.ideal_closure_full));
    let v = primitive_test(pair);
    if let Some(wit) = v.witness() {
        let ok = transitive_test(pair, wit).unwrap_or(false) && !wit.is_full();
        c.record(format!("{tag}: primitivity witness is a proper transitive subalgebra"), ok, doc.span_text(wit));
    }
    if pair.isotropy.is_zero() {
        c.record(format!("{tag}: trivial isotropy is primitive"), v.label() == "PRIMITIVE", v.label());
    }
}

fn primitivity_checks(doc: &AlgebraDocument, c: &mut Checks) {
    let flags = flags_of(doc);
    for (fname, w) in &doc.two_forms {
        let pair = PairPresentation::of_form(doc.algebra.clone(), w);
        pair_checks(doc, fname, &pair, c);
        let report = singular_bound_audit(&pair, w, &flags);
        let bad: Vec<String> = report.violations().iter().map(|e| format!("{} ({} singular)", e.name, e.singular_count)).collect();
        c.record(format!("{fname}: singular-vertex bounds"), bad.is_empty(), bad.join(", "));
    }
    for (hname, h) in &doc.subspaces {
        match PairPresentation::new(doc.algebra.clone(), h.clone()) {
            Ok(pair) => pair_checks(doc, hname, &pair, c),
            Err(_) => c.skip(format!("{hname}: pair"), "not a subalgebra"),
        }
    }
}

/// Every invariant check on the document, in a fixed order.
pub fn audit_document(doc: &AlgebraDocument) -> Vec<Check> {
    let mut c = Checks::default();
    algebra_checks(doc, &mut c);
    let flags = flags_of(doc);
    for (fname, w) in &doc.two_forms {
        let closed = is_closed(&doc.algebra, w);
        c.record(format!("{fname}: closed"), closed, "");
        if !closed {
            continue;
        }
        c.record(format!("{fname}: kernel is a subalgebra"), doc.algebra.is_subalgebra(&w.kernel()), doc.span_text(&w.kernel()));
        diagram_checks(doc, fname, w, &flags, &mut c);
        lagrangian_checks(doc, fname, w, &mut c);
        if w.is_nondegenerate() {
            bilagrangian_checks(doc, fname, w, &mut c);
        }
    }
    primitivity_checks(doc, &mut c);
    c.0
}

pub(crate) fn run(doc: &AlgebraDocument, as_json: bool) -> Result<(i32, String), Failure> {
    let checks = audit_document(doc);
    let failed = checks.iter().filter(|c| c.ok == Some(false)).count();
    let code = if failed == 0 { EXIT_OK } else { EXIT_VIOLATION };
    let status = |c: &Check| match c.ok {
        Some(true) => "PASS",
        Some(false) => "FAIL",
        None => "SKIP",
    };
    if as_json {
        let v = json!({
            "document": doc.name,
            "failed": failed,
            "checks": checks.iter().map(|c| json!({"name": c.name, "status": status(c), "detail": c.detail})).collect::<Vec<_>>(),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
        s.push('\n');
        return Ok((code, s));
    }
    let mut out = format!("audit {}\n", doc.name);
    for ch in &checks {
        if ch.detail.is_empty() {
            writeln!(out, "{} {}", status(ch), ch.name).unwrap();
        } else {
            writeln!(out, "{} {} [{}]", status(ch), ch.name, ch.detail).unwrap();
        }
    }
    writeln!(out, "{} checks, {} failed", checks.len(), failed).unwrap();
    Ok((code, out))
}
