use std::fmt::Write;

use lieflag::bilagrangian::{audit_connection, connection, curvature_flatness, BilagrangianPair};
use lieflag::diagram::{contract, diagram, match_template, predicates, Contracted, WeightedDiagram};
use lieflag::document::{format_rational, parse_document, AlgebraDocument};
use lieflag::dot::{render_dot, DotStyle};
use lieflag::error::{DiagramError, FlagError, ReductionError};
use lieflag::flags::validate_flag;
use lieflag::forms::is_closed;
use lieflag::lagrangian::{find_lagrangians, verify_lagrangian, CandidateStatus, SearchMode};
use lieflag::primitivity::{degrees, primitive_test, quasi_primitive_test, transitivity_audit, PairPresentation, DEFAULT_BUDGET};
use lieflag::reduction::deform_to_simple;
use serde_json::{json, Value};

use crate::{audit, Command, DotKind, Failure, Mode, EXIT_OK, EXIT_VIOLATION};

type Res = Result<(i32, String), Failure>;

pub(crate) fn load(path: &str) -> Result<AlgebraDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("IO_ERROR: {path}: {e}")))?;
    parse_document(&text).map_err(Failure::invalid)
}

pub(crate) fn diagram_failure(e: DiagramError) -> Failure {
    match e {
        DiagramError::NestingViolation(_) => Failure::violation(e),
        _ => Failure::invalid(e),
    }
}

fn flag_failure(e: FlagError) -> Failure {
    match e {
        FlagError::ChainNotNested(_) | FlagError::NotSubalgebra(_) => Failure::invalid(e),
        _ => Failure::violation(e),
    }
}

pub(crate) fn reduction_failure(e: ReductionError) -> Failure {
    match e {
        ReductionError::Diagram(d) => diagram_failure(d),
        ReductionError::Flag(f) => flag_failure(f),
        ReductionError::NoRepulsiveVertex | ReductionError::NotSemisimple(_) => Failure::invalid(e),
        _ => Failure::violation(e),
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub(crate) fn dispatch(cmd: &Command) -> Res {
    match cmd {
        Command::Validate { file } => validate(&load(file)?),
        Command::Diagram { file, form, flag, contract, dot, dot_style, json } => {
            diagram_cmd(&load(file)?, form, flag, *contract, dot.as_deref(), *dot_style, *json)
        }
        Command::Deform { file, form, flag, json } => deform(&load(file)?, form, flag, *json),
        Command::Lagrangians { file, form, mode, json } => lagrangians(&load(file)?, form, *mode, *json),
        Command::Bilagrangian { file, form, left, right, json } => bilagrangian(&load(file)?, form, left, right, *json),
        Command::Primitivity { file, form, isotropy, json } => {
            primitivity(&load(file)?, form.as_deref(), isotropy.as_deref(), *json)
        }
        Command::Audit { file, json } => audit::run(&load(file)?, *json),
    }
}

fn validate(doc: &AlgebraDocument) -> Res {
    let mut out = format!("{}: dim {}, {} forms, {} flags, {} subspaces\n", doc.name, doc.dim(), doc.two_forms.len(), doc.flags.len(), doc.subspaces.len());
    let mut problems = Vec::new();
    for (name, w) in &doc.two_forms {
        let closed = is_closed(&doc.algebra, w);
        writeln!(out, "form {name}: closed={closed} rank={} kernel={}", w.rank(), doc.span_text(&w.kernel())).unwrap();
        if !closed {
            problems.push(format!("NOT_CLOSED: form {name}"));
        }
    }
    for name in doc.flags.keys() {
        let report = validate_flag(&doc.algebra, &doc.flag(name).map_err(Failure::invalid)?);
        let status = match (report.first_failure(), doc.is_known_discrepancy(name)) {
            (None, _) => "valid".to_string(),
            (Some(why), true) => format!("known discrepancy ({why})"),
            (Some(why), false) => {
                problems.push(format!("INVALID_FLAG: {name}: {why}"));
                format!("invalid ({why})")
            }
        };
        writeln!(out, "flag {name}: {status}").unwrap();
    }
    for (name, s) in &doc.subspaces {
        writeln!(out, "subspace {name}: dim {} subalgebra={}", s.dim(), doc.algebra.is_subalgebra(s)).unwrap();
    }
    if problems.is_empty() {
        Ok((EXIT_OK, out))
    } else {
        Err(Failure::invalid(problems.join("\n")))
    }
}

fn compute_diagram(doc: &AlgebraDocument, form: &str, flag: &str) -> Result<WeightedDiagram, Failure> {
    let w = doc.form(form).map_err(Failure::invalid)?;
    let f = doc.flag(flag).map_err(Failure::invalid)?;
    diagram(&doc.algebra, w, &f).map_err(diagram_failure)
}

fn step_labels(d: &WeightedDiagram) -> Vec<String> {
    d.steps.iter().map(|s| format!("{s:?}")).collect()
}

pub(crate) fn diagram_json(doc: &AlgebraDocument, d: &WeightedDiagram) -> Value {
    let p = predicates(&doc.algebra, d);
    json!({
        "vertices": d.vertices.iter().map(|v| json!({
            "k": v.index,
            "dim_g": v.g.dim(),
            "dim_h": v.h.dim(),
            "radical": doc.subspace_json(&v.h),
            "weight": format_rational(&v.weight),
            "class": v.class.label(),
        })).collect::<Vec<_>>(),
        "steps": step_labels(d),
        "contracted": Contracted(&contract(d)).to_string(),
        "predicates": {
            "connected": p.connected,
            "simple": p.simple,
            "semi_normal": p.semi_normal,
            "semi_simple": p.semi_simple,
            "semi_nilpotent": p.semi_nilpotent,
        },
        "template": match_template(d).label(),
    })
}

fn diagram_table(doc: &AlgebraDocument, d: &WeightedDiagram) -> String {
    let mut out = format!("{:>3}  {:>5}  {:>5}  {:>7}  {:<22}  radical\n", "k", "dim g", "dim h", "weight", "class");
    for v in &d.vertices {
        writeln!(
            out,
            "{:>3}  {:>5}  {:>5}  {:>7}  {:<22}  {}",
            v.index,
            v.g.dim(),
            v.h.dim(),
            format_rational(&v.weight),
            v.class.label(),
            doc.span_text(&v.h)
        )
        .unwrap();
    }
    writeln!(out, "steps: {}", step_labels(d).join(" ")).unwrap();
    out
}

fn predicates_text(doc: &AlgebraDocument, d: &WeightedDiagram) -> String {
    let p = predicates(&doc.algebra, d);
    format!(
        "simple: {}\nconnected: {}\nsemi_normal: {}\nsemi_simple: {}\nsemi_nilpotent: {}\ntemplate: {}\n",
        p.simple,
        p.connected,
        p.semi_normal,
        p.semi_simple,
        p.semi_nilpotent,
        match_template(d).label()
    )
}

fn diagram_cmd(doc: &AlgebraDocument, form: &str, flag: &str, contracted: bool, dot: Option<&str>, style: DotKind, json: bool) -> Res {
    let d = compute_diagram(doc, form, flag)?;
    if let Some(path) = dot {
        let style = match style {
            DotKind::Graph => DotStyle::Graph,
            DotKind::Diagram => DotStyle::Diagram,
        };
        std::fs::write(path, render_dot(&d, style)).map_err(|e| Failure::invalid(format!("IO_ERROR: {path}: {e}")))?;
    }
    if json {
        let mut v = diagram_json(doc, &d);
        v["document"] = json!(doc.name);
        v["form"] = json!(form);
        v["flag"] = json!(flag);
        return Ok((EXIT_OK, json_text(&v)));
    }
    let mut out = format!("diagram {} form={form} flag={flag}\n", doc.name);
    out.push_str(&diagram_table(doc, &d));
    if contracted {
        writeln!(out, "contracted: {}", Contracted(&contract(&d))).unwrap();
    }
    out.push_str(&predicates_text(doc, &d));
    Ok((EXIT_OK, out))
}

fn deform(doc: &AlgebraDocument, form: &str, flag: &str, json: bool) -> Res {
    let w = doc.form(form).map_err(Failure::invalid)?;
    let f = doc.flag(flag).map_err(Failure::invalid)?;
    let out = deform_to_simple(&doc.algebra, w, &f).map_err(reduction_failure)?;
    let d = diagram(&doc.algebra, w, &out).map_err(diagram_failure)?;
    let simple = d.is_simple();
    let code = if simple { EXIT_OK } else { EXIT_VIOLATION };
    if json {
        let v = json!({
            "document": doc.name,
            "form": form,
            "flag": flag,
            "deformed": out.members().iter().map(|m| doc.subspace_json(m)).collect::<Vec<_>>(),
            "diagram": diagram_json(doc, &d),
            "simple": simple,
        });
        return Ok((code, json_text(&v)));
    }
    let mut text = format!("deform {} form={form} flag={flag}\nF0:\n", doc.name);
    for (k, m) in out.members().iter().enumerate() {
        writeln!(text, "  {k}: {}", doc.span_text(m)).unwrap();
    }
    writeln!(text, "contracted: {}", Contracted(&contract(&d))).unwrap();
    writeln!(text, "simple: {simple}").unwrap();
    Ok((code, text))
}

fn lagrangians(doc: &AlgebraDocument, form: &str, mode: Mode, json: bool) -> Res {
    let w = doc.form(form).map_err(Failure::invalid)?;
    if !is_closed(&doc.algebra, w) {
        return Err(Failure::invalid(DiagramError::NotClosed));
    }
    let mode = match mode {
        Mode::Vergne => SearchMode::Vergne,
        Mode::FlagAdapted => SearchMode::FlagAdapted,
        Mode::Both => SearchMode::Both,
    };
    let verdict = find_lagrangians(&doc.algebra, w, mode);
    let statuses: Vec<CandidateStatus> = verdict.found.iter().map(|l| verify_lagrangian(&doc.algebra, w, l)).collect();
    let all_verified = statuses.iter().all(|s| *s == CandidateStatus::Verified);
    let code = if all_verified { EXIT_OK } else { EXIT_VIOLATION };
    if json {
        let v = json!({
            "document": doc.name,
            "form": form,
            "completeness": verdict.completeness.label(),
            "found": verdict.found.iter().zip(&statuses).map(|(l, s)| json!({
                "subspace": doc.subspace_json(l),
                "status": status_label(s),
            })).collect::<Vec<_>>(),
        });
        return Ok((code, json_text(&v)));
    }
    let mut out = format!("lagrangians {} form={form}\n", doc.name);
    writeln!(out, "completeness: {}", verdict.completeness.label()).unwrap();
    writeln!(out, "found: {}", verdict.found.len()).unwrap();
    for (l, s) in verdict.found.iter().zip(&statuses) {
        writeln!(out, "  {} {}", status_label(s), doc.span_text(l)).unwrap();
    }
    Ok((code, out))
}

fn status_label(s: &CandidateStatus) -> String {
    match s {
        CandidateStatus::Verified => "VERIFIED".into(),
        CandidateStatus::Rejected(why) => format!("REJECTED ({why})"),
    }
}

fn bilagrangian(doc: &AlgebraDocument, form: &str, left: &str, right: &str, json: bool) -> Res {
    let w = doc.form(form).map_err(Failure::invalid)?;
    let pair = BilagrangianPair {
        left: doc.subspace(left).map_err(Failure::invalid)?.clone(),
        right: doc.subspace(right).map_err(Failure::invalid)?.clone(),
    };
    let t = connection(&doc.algebra, w, &pair).map_err(Failure::invalid)?;
    let a = audit_connection(&doc.algebra, w, &pair, &t);
    let r = curvature_flatness(&doc.algebra, &t);
    let names = doc.algebra.names();
    let code = if a.all() { EXIT_OK } else { EXIT_VIOLATION };
    if json {
        let v = json!({
            "document": doc.name,
            "form": form,
            "left": left,
            "right": right,
            "connection": t.nonzero().iter().map(|((i, j), v)| json!([names[*i], names[*j], doc.vector_json(v)])).collect::<Vec<_>>(),
            "audit": {
                "torsion_free": a.torsion_free,
                "parallel_form": a.parallel_form,
                "preserves_left": a.preserves_left,
                "preserves_right": a.preserves_right,
            },
            "curvature": r.tensor.nonzero().iter().map(|((i, j, k), v)| json!([names[*i], names[*j], names[*k], doc.vector_json(v)])).collect::<Vec<_>>(),
            "flat": r.hess_flat,
        });
        return Ok((code, json_text(&v)));
    }
    let mut out = format!("bilagrangian {} form={form} left={left} right={right}\nconnection:\n", doc.name);
    for ((i, j), v) in t.nonzero() {
        writeln!(out, "  D_{} {} = {}", names[i], names[j], doc.vector_text(&v)).unwrap();
    }
    writeln!(out, "torsion_free: {}\nparallel_form: {}\npreserves_left: {}\npreserves_right: {}", a.torsion_free, a.parallel_form, a.preserves_left, a.preserves_right).unwrap();
    out.push_str("curvature:\n");
    for ((i, j, k), v) in r.tensor.nonzero() {
        writeln!(out, "  R({}, {}) {} = {}", names[i], names[j], names[k], doc.vector_text(&v)).unwrap();
    }
    writeln!(out, "flat: {}", r.hess_flat).unwrap();
    Ok((code, out))
}

fn primitivity(doc: &AlgebraDocument, form: Option<&str>, isotropy: Option<&str>, json: bool) -> Res {
    let (label, pair) = match (form, isotropy) {
        (Some(f), _) => (format!("form={f}"), PairPresentation::of_form(doc.algebra.clone(), doc.form(f).map_err(Failure::invalid)?)),
        (None, Some(h)) => {
            let s = doc.subspace(h).map_err(Failure::invalid)?.clone();
            (format!("isotropy={h}"), PairPresentation::new(doc.algebra.clone(), s).map_err(Failure::invalid)?)
        }
        (None, None) => return Err(Failure::invalid("one of --form or --isotropy is required")),
    };
    let p = primitive_test(&pair);
    let qp = quasi_primitive_test(&pair, DEFAULT_BUDGET);
    let deg = degrees(&pair);
    let ta = transitivity_audit(&pair);
    let code = if ta.holds { EXIT_OK } else { EXIT_VIOLATION };
    if json {
        let v = json!({
            "document": doc.name,
            "pair": label,
            "isotropy": doc.subspace_json(&pair.isotropy),
            "primitive": p.label(),
            "primitive_witness": p.witness().map(|s| doc.subspace_json(s)),
            "quasi_primitive": qp.label(),
            "quasi_primitive_witness": qp.witness().map(|s| doc.subspace_json(s)),
            "degrees": {
                "r": format_rational(&deg.r),
                "d_lower": format_rational(&deg.d_lower),
                "d_within_search": format_rational(&deg.d_within_search),
            },
            "transitivity_audit": {
                "derived_transitive": ta.derived_transitive,
                "ideal_closure_full": ta.ideal_closure_full,
                "holds": ta.holds,
            },
        });
        return Ok((code, json_text(&v)));
    }
    let mut out = format!("primitivity {} {label}\nisotropy: {}\n", doc.name, doc.span_text(&pair.isotropy));
    writeln!(out, "primitive: {}", p.label()).unwrap();
    if let Some(s) = p.witness() {
        writeln!(out, "  witness: {}", doc.span_text(s)).unwrap();
    }
    writeln!(out, "quasi_primitive: {}", qp.label()).unwrap();
    if let Some(s) = qp.witness() {
        writeln!(out, "  witness: {}", doc.span_text(s)).unwrap();
    }
    writeln!(out, "r: {}\nd_lower: {}\nd_within_search: {}", format_rational(&deg.r), format_rational(&deg.d_lower), format_rational(&deg.d_within_search)).unwrap();
    writeln!(out, "transitivity audit: derived_transitive={} ideal_closure_full={} holds={}", ta.derived_transitive, ta.ideal_closure_full, ta.holds).unwrap();
    Ok((code, out))
}
