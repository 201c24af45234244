//! Embedded example documents with expectation files, and the key-based
//! evaluator used to check them.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::bilagrangian::{connection, curvature_flatness, BilagrangianPair};
use crate::diagram::{contract, diagram, match_template, predicates, Contracted, WeightedDiagram};
use crate::document::{format_rational, parse_document, AlgebraDocument};
use crate::lagrangian::{diagram_to_lagrangian, kahler_premise_pipeline};
use crate::primitivity::{degrees, primitive_test, quasi_primitive_test, transitive_test, PairPresentation, DEFAULT_BUDGET};
use crate::reduction::deform_to_simple;

pub struct Entry {
    pub name: &'static str,
    pub document: &'static str,
    pub expectations: &'static str,
}

macro_rules! entry {
    ($n:literal) => {
        Entry {
            name: $n,
            document: include_str!(concat!("../corpus/", $n, ".json")),
            expectations: include_str!(concat!("../corpus/", $n, ".expect.json")),
        }
    };
}

pub const CORPUS: &[Entry] = &[
    entry!("E1"),
    entry!("E2"),
    entry!("X1"),
    entry!("X2"),
    entry!("X3"),
    entry!("D1"),
    entry!("AB4"),
    entry!("AFF"),
    entry!("B2"),
    entry!("SKEW"),
];

pub fn get(name: &str) -> Option<&'static Entry> {
    CORPUS.iter().find(|e| e.name == name)
}

/// Parsed document of a corpus entry; panics on a malformed fixture.
pub fn load(name: &str) -> AlgebraDocument {
    let e = get(name).unwrap_or_else(|| panic!("no corpus entry {name}"));
    parse_document(e.document).unwrap_or_else(|err| panic!("{name}: {err}"))
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Printed,
    Computed,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// The evaluated value must equal the recorded one.
    Asserted,
    /// Recorded for reference; the evaluated value must differ.
    Discrepancy,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub key: String,
    pub value: Value,
    pub provenance: Provenance,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectationFile {
    pub name: String,
    pub values: Vec<Expectation>,
}

pub fn expectations(entry: &Entry) -> ExpectationFile {
    serde_json::from_str(entry.expectations).unwrap_or_else(|e| panic!("{}: {e}", entry.name))
}

fn diagram_of(doc: &AlgebraDocument, form: &str, flag: &str) -> Result<WeightedDiagram, String> {
    let w = doc.form(form).map_err(|e| e.to_string())?;
    let f = doc.flag(flag).map_err(|e| e.to_string())?;
    diagram(&doc.algebra, w, &f).map_err(|e| e.to_string())
}

fn pair_of(doc: &AlgebraDocument, name: &str) -> Result<PairPresentation, String> {
    if let Ok(w) = doc.form(name) {
        return Ok(PairPresentation::of_form(doc.algebra.clone(), w));
    }
    let h = doc.subspace(name).map_err(|e| e.to_string())?;
    PairPresentation::new(doc.algebra.clone(), h.clone()).map_err(|e| e.to_string())
}

fn bilagrangian_pair(doc: &AlgebraDocument, l: &str, n: &str) -> Result<BilagrangianPair, String> {
    let left = doc.subspace(l).map_err(|e| e.to_string())?.clone();
    let right = doc.subspace(n).map_err(|e| e.to_string())?.clone();
    Ok(BilagrangianPair { left, right })
}

fn basis_index(doc: &AlgebraDocument, s: &str) -> Result<usize, String> {
    doc.algebra.index_of(s).ok_or_else(|| format!("unknown basis symbol {s}"))
}

/// Evaluates an expectation key such as `kernel_dims:omega:F`.
pub fn evaluate(doc: &AlgebraDocument, key: &str) -> Result<Value, String> {
    let parts: Vec<&str> = key.split(':').collect();
    let alg = &doc.algebra;
    let form = |i: usize| doc.form(parts[i]).map_err(|e| e.to_string());
    let index = |i: usize| parts[i].parse::<usize>().map_err(|e| e.to_string());
    match parts.as_slice() {
        ["kernel", _] => Ok(doc.subspace_json(&form(1)?.kernel())),
        ["kernel_dims", _, flag] => Ok(json!(diagram_of(doc, parts[1], flag)?.kernel_dims())),
        ["steps", _, flag] => {
            let d = diagram_of(doc, parts[1], flag)?;
            Ok(json!(d.steps.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>()))
        }
        ["radical", _, flag, _] => {
            let d = diagram_of(doc, parts[1], flag)?;
            let k = index(3)?;
            let v = d.vertices.get(k).ok_or("index out of range")?;
            Ok(doc.subspace_json(&v.h))
        }
        ["weight", _, flag, _] => {
            let d = diagram_of(doc, parts[1], flag)?;
            let v = d.vertices.get(index(3)?).ok_or("index out of range")?;
            Ok(json!(format_rational(&v.weight)))
        }
        ["singular", _, flag] => {
            let d = diagram_of(doc, parts[1], flag)?;
            Ok(Value::Array(d.singular().map(|v| json!([v.index, v.class.label()])).collect()))
        }
        ["contracted", _, flag] => Ok(json!(Contracted(&contract(&diagram_of(doc, parts[1], flag)?)).to_string())),
        ["template", _, flag] => Ok(json!(match_template(&diagram_of(doc, parts[1], flag)?).label())),
        [p @ ("simple" | "connected" | "semi_simple" | "semi_normal" | "semi_nilpotent"), _, flag] => {
            let pr = predicates(alg, &diagram_of(doc, parts[1], flag)?);
            Ok(json!(match *p {
                "simple" => pr.simple,
                "connected" => pr.connected,
                "semi_simple" => pr.semi_simple,
                "semi_normal" => pr.semi_normal,
                _ => pr.semi_nilpotent,
            }))
        }
        ["lagrangian", _, flag] => {
            let l = diagram_to_lagrangian(&diagram_of(doc, parts[1], flag)?).map_err(|e| e.to_string())?;
            Ok(doc.subspace_json(&l))
        }
        ["deform", _, flag] => {
            let f = doc.flag(flag).map_err(|e| e.to_string())?;
            let out = deform_to_simple(alg, form(1)?, &f).map_err(|e| e.to_string())?;
            let n = out.len();
            Ok(Value::Array(out.members()[1..n - 1].iter().map(|m| doc.subspace_json(m)).collect()))
        }
        ["kahler_premise", _] => Ok(json!(kahler_premise_pipeline(alg, form(1)?).map_err(|e| e.to_string())?.premise)),
        ["primitive", name] => Ok(json!(primitive_test(&pair_of(doc, name)?).label())),
        ["primitive_witness", name] => {
            let v = primitive_test(&pair_of(doc, name)?);
            Ok(v.witness().map_or(Value::Null, |w| doc.subspace_json(w)))
        }
        ["quasi_primitive", name] => Ok(json!(quasi_primitive_test(&pair_of(doc, name)?, DEFAULT_BUDGET).label())),
        ["transitive", name, s] => {
            let s = doc.subspace(s).map_err(|e| e.to_string())?;
            Ok(json!(transitive_test(&pair_of(doc, name)?, s).map_err(|e| e.to_string())?))
        }
        ["degree_r", name] => Ok(json!(format_rational(&degrees(&pair_of(doc, name)?).r))),
        ["flat", _, l, n] => {
            let t = connection(alg, form(1)?, &bilagrangian_pair(doc, l, n)?).map_err(|e| e.to_string())?;
            Ok(json!(curvature_flatness(alg, &t).hess_flat))
        }
        ["connection", _, l, n, x, y] => {
            let t = connection(alg, form(1)?, &bilagrangian_pair(doc, l, n)?).map_err(|e| e.to_string())?;
            Ok(doc.vector_json(&t.entries[basis_index(doc, x)?][basis_index(doc, y)?]))
        }
        ["curvature", _, l, n, x, y, z] => {
            let t = connection(alg, form(1)?, &bilagrangian_pair(doc, l, n)?).map_err(|e| e.to_string())?;
            let r = curvature_flatness(alg, &t);
            let (i, j, k) = (basis_index(doc, x)?, basis_index(doc, y)?, basis_index(doc, z)?);
            Ok(doc.vector_json(&r.tensor.values[i][j][k]))
        }
        _ => Err(format!("unknown expectation key {key}")),
    }
}

/// Keys whose evaluation disagrees with the file, with the evaluated value.
pub fn check(entry: &Entry) -> Vec<(String, Result<Value, String>)> {
    let doc = parse_document(entry.document).unwrap_or_else(|e| panic!("{}: {e}", entry.name));
    expectations(entry)
        .values
        .into_iter()
        .filter_map(|e| {
            let got = evaluate(&doc, &e.key);
            let ok = match e.status {
                Status::Asserted => got.as_ref() == Ok(&e.value),
                Status::Discrepancy => got.as_ref().map_or(true, |g| *g != e.value),
            };
            (!ok).then_some((e.key, got))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_corpus_document_parses() {
        for e in CORPUS {
            let d = load(e.name);
            assert_eq!(d.name, e.name);
            assert_eq!(expectations(e).name, e.name);
        }
    }

    #[test]
    fn corpus_expectations_hold() {
        for e in CORPUS {
            let bad = check(e);
            assert!(bad.is_empty(), "{}: {bad:?}", e.name);
        }
    }
}
