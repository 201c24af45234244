//! JSON documents: an algebra over named basis vectors with named 2-forms,
//! flags and subspaces. Rationals are integers or "p/q" strings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::algebra::{validate_algebra, LieAlgebra};
use crate::error::DocumentError;
use crate::flags::Flag;
use crate::forms::TwoForm;
use crate::linalg::{zero_vec, Rational, Subspace, Vector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawQ {
    Int(i64),
    Str(String),
    Float(f64),
}

/// Coefficient map kept in input order so duplicate keys can be detected.
#[derive(Clone, Debug, Default, PartialEq)]
struct Coeffs(Vec<(String, RawQ)>);

impl<'de> Deserialize<'de> for Coeffs {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Coeffs;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a map from basis names to rationals")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> Result<Coeffs, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = m.next_entry::<String, RawQ>()? {
                    out.push((k, v));
                }
                Ok(Coeffs(out))
            }
        }
        d.deserialize_map(V)
    }
}

impl Serialize for Coeffs {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub known_discrepancies: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    name: String,
    dim: usize,
    basis: Vec<String>,
    #[serde(default)]
    brackets: Vec<(String, String, Coeffs)>,
    #[serde(default)]
    two_forms: BTreeMap<String, Vec<(String, String, RawQ)>>,
    #[serde(default)]
    flags: BTreeMap<String, Vec<Vec<Coeffs>>>,
    #[serde(default)]
    subspaces: BTreeMap<String, Vec<Coeffs>>,
    #[serde(default)]
    metadata: Metadata,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDocument {
    pub name: String,
    pub algebra: LieAlgebra,
    pub two_forms: BTreeMap<String, TwoForm>,
    /// Proper members as given (zero and whole space implied).
    pub flags: BTreeMap<String, Vec<Subspace>>,
    pub subspaces: BTreeMap<String, Subspace>,
    pub metadata: Metadata,
}

fn schema(msg: impl Into<String>) -> DocumentError {
    DocumentError::Schema(msg.into())
}

pub fn parse_rational(s: &str) -> Result<Rational, DocumentError> {
    let bad = || DocumentError::RationalFormat(format!("\"{s}\" is not an integer or p/q with q nonzero"));
    let t = s.trim();
    if t.is_empty() || t != s || t.chars().any(|c| !(c.is_ascii_digit() || c == '-' || c == '/')) {
        return Err(bad());
    }
    Rational::from_str(t).map_err(|_| bad())
}

fn rational(q: &RawQ) -> Result<Rational, DocumentError> {
    match q {
        RawQ::Int(i) => Ok(Rational::from_integer((*i).into())),
        RawQ::Str(s) => parse_rational(s),
        RawQ::Float(f) => Err(DocumentError::RationalFormat(format!("{f} is not exact; write \"p/q\""))),
    }
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

struct Names<'a>(&'a [String]);

impl Names<'_> {
    fn index(&self, field: &str, s: &str) -> Result<usize, DocumentError> {
        self.0
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| schema(format!("{field}: unknown basis symbol \"{s}\"")))
    }

    fn vector(&self, field: &str, c: &Coeffs) -> Result<Vector, DocumentError> {
        let mut v = zero_vec(self.0.len());
        let mut seen = vec![false; self.0.len()];
        for (k, q) in &c.0 {
            let i = self.index(field, k)?;
            let x = rational(q)?;
            if seen[i] && v[i] != x {
                return Err(schema(format!("{field}: contradictory duplicate coefficient for \"{k}\"")));
            }
            seen[i] = true;
            v[i] = x;
        }
        Ok(v)
    }

    fn span(&self, field: &str, vs: &[Coeffs]) -> Result<Subspace, DocumentError> {
        let rows = vs.iter().map(|c| self.vector(field, c)).collect::<Result<Vec<_>, _>>()?;
        Ok(Subspace::span(self.0.len(), rows))
    }
}

fn map_json_error(e: serde_json::Error) -> DocumentError {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => {
            let msg = e.to_string();
            let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
            schema(msg)
        }
        _ => DocumentError::Parse { line: e.line(), column: e.column(), message: e.to_string() },
    }
}

pub fn parse_document(text: &str) -> Result<AlgebraDocument, DocumentError> {
    let raw: RawDoc = serde_json::from_str(text).map_err(map_json_error)?;
    if raw.dim != raw.basis.len() {
        return Err(schema(format!("dim: {} but the basis has {} names", raw.dim, raw.basis.len())));
    }
    for (i, b) in raw.basis.iter().enumerate() {
        if raw.basis[..i].contains(b) {
            return Err(schema(format!("basis: repeated name \"{b}\"")));
        }
    }
    let names = Names(&raw.basis);
    let n = raw.dim;
    let mut table: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    for (x, y, c) in &raw.brackets {
        let (i, j) = (names.index("brackets", x)?, names.index("brackets", y)?);
        let v = names.vector("brackets", c)?;
        if i == j {
            if v.iter().any(|q| !q.is_zero()) {
                return Err(schema(format!("brackets: [{x}, {x}] must vanish")));
            }
            continue;
        }
        let (key, v) = if i < j { ((i, j), v) } else { ((j, i), v.iter().map(|q| -q).collect()) };
        if let Some(old) = table.get(&key) {
            if *old != v {
                return Err(schema(format!("brackets: contradictory entries for [{x}, {y}]")));
            }
        }
        table.insert(key, v);
    }
    let triples: Vec<(usize, usize, Vector)> = table.into_iter().map(|((i, j), v)| (i, j, v)).collect();
    let algebra = LieAlgebra::new(raw.basis.clone(), &triples);
    let report = validate_algebra(&algebra);
    if !report.is_ok() {
        return Err(schema("brackets: the Jacobi identity fails"));
    }
    let mut two_forms = BTreeMap::new();
    for (name, terms) in &raw.two_forms {
        let field = format!("two_forms.{name}");
        let mut coeffs: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (x, y, q) in terms {
            let (i, j) = (names.index(&field, x)?, names.index(&field, y)?);
            let c = rational(q)?;
            if i == j {
                if !c.is_zero() {
                    return Err(schema(format!("{field}: diagonal term on \"{x}\"")));
                }
                continue;
            }
            let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
            if coeffs.get(&key).is_some_and(|old| *old != c) {
                return Err(schema(format!("{field}: contradictory entries for ({x}, {y})")));
            }
            coeffs.insert(key, c);
        }
        let pairs: Vec<(usize, usize, Rational)> = coeffs.into_iter().map(|((i, j), c)| (i, j, c)).collect();
        two_forms.insert(name.clone(), TwoForm::from_pairs(n, &pairs));
    }
    let mut flags = BTreeMap::new();
    for (name, members) in &raw.flags {
        let field = format!("flags.{name}");
        let ms = members.iter().map(|m| names.span(&field, m)).collect::<Result<Vec<_>, _>>()?;
        flags.insert(name.clone(), ms);
    }
    let mut subspaces = BTreeMap::new();
    for (name, vs) in &raw.subspaces {
        subspaces.insert(name.clone(), names.span(&format!("subspaces.{name}"), vs)?);
    }
    Ok(AlgebraDocument { name: raw.name, algebra, two_forms, flags, subspaces, metadata: raw.metadata })
}

impl AlgebraDocument {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn form(&self, name: &str) -> Result<&TwoForm, DocumentError> {
        self.two_forms.get(name).ok_or_else(|| schema(format!("two_forms: no form named \"{name}\"")))
    }

    pub fn flag(&self, name: &str) -> Result<Flag, DocumentError> {
        let ms = self.flags.get(name).ok_or_else(|| schema(format!("flags: no flag named \"{name}\"")))?;
        Ok(Flag::from_proper(self.dim(), ms.clone()))
    }

    pub fn subspace(&self, name: &str) -> Result<&Subspace, DocumentError> {
        self.subspaces.get(name).ok_or_else(|| schema(format!("subspaces: no subspace named \"{name}\"")))
    }

    pub fn is_known_discrepancy(&self, name: &str) -> bool {
        self.metadata.known_discrepancies.iter().any(|d| d == name)
    }

    /// Vector as a coefficient map over basis names, basis order, zeros omitted.
    pub fn vector_json(&self, v: &[Rational]) -> Value {
        vector_json(self.algebra.names(), v)
    }

    pub fn subspace_json(&self, s: &Subspace) -> Value {
        Value::Array(s.basis().iter().map(|v| self.vector_json(v)).collect())
    }

    /// Linear combination in basis names, e.g. `x - 1/2 c`.
    pub fn vector_text(&self, v: &[Rational]) -> String {
        let mut out = String::new();
        for (name, c) in self.algebra.names().iter().zip(v).filter(|(_, c)| !c.is_zero()) {
            let (neg, abs) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
                (true, false) => {}
            }
            if !abs.is_one() {
                out.push_str(&format_rational(&abs));
                out.push(' ');
            }
            out.push_str(name);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn span_text(&self, s: &Subspace) -> String {
        let parts: Vec<String> = s.basis().iter().map(|v| self.vector_text(v)).collect();
        format!("span({})", parts.join(", "))
    }
}

pub fn vector_json(names: &[String], v: &[Rational]) -> Value {
    let c = coeffs_of(names, v);
    serde_json::to_value(&c).expect("coefficient maps serialize")
}

fn coeffs_of(names: &[String], v: &[Rational]) -> Coeffs {
    Coeffs(
        names
            .iter()
            .zip(v)
            .filter(|(_, q)| !q.is_zero())
            .map(|(n, q)| (n.clone(), RawQ::Str(format_rational(q))))
            .collect(),
    )
}

fn to_raw(doc: &AlgebraDocument) -> RawDoc {
    let names = doc.algebra.names();
    let n = doc.dim();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = doc.algebra.structure(i, j);
            if v.iter().any(|q| !q.is_zero()) {
                brackets.push((names[i].clone(), names[j].clone(), coeffs_of(names, v)));
            }
        }
    }
    let two_forms = doc
        .two_forms
        .iter()
        .map(|(k, w)| {
            let mut terms = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let c = w.entry(i, j);
                    if !c.is_zero() {
                        terms.push((names[i].clone(), names[j].clone(), RawQ::Str(format_rational(c))));
                    }
                }
            }
            (k.clone(), terms)
        })
        .collect();
    let span = |s: &Subspace| s.basis().iter().map(|v| coeffs_of(names, v)).collect::<Vec<_>>();
    RawDoc {
        name: doc.name.clone(),
        dim: n,
        basis: names.to_vec(),
        brackets,
        two_forms,
        flags: doc.flags.iter().map(|(k, ms)| (k.clone(), ms.iter().map(span).collect())).collect(),
        subspaces: doc.subspaces.iter().map(|(k, s)| (k.clone(), span(s))).collect(),
        metadata: doc.metadata.clone(),
    }
}

/// Canonical text: fixed key order, reduced rationals as strings, trailing newline.
pub fn serialize_document(doc: &AlgebraDocument) -> String {
    let mut s = serde_json::to_string_pretty(&to_raw(doc)).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
  "name": "aff",
  "dim": 2,
  "basis": ["a", "b"],
  "brackets": [["a", "b", {"b": 1}]],
  "two_forms": {"omega": [["a", "b", "2/4"]]},
  "flags": {"F": [[{"b": "1"}]]},
  "subspaces": {"n": [{"a": "3"}]}
}"#;

    #[test]
    fn parses_and_round_trips() {
        let d = parse_document(SMALL).unwrap();
        assert_eq!(d.dim(), 2);
        assert_eq!(d.form("omega").unwrap().entry(0, 1), &Rational::new(1.into(), 2.into()));
        let text = serialize_document(&d);
        assert!(text.contains("\"1/2\""));
        let again = parse_document(&text).unwrap();
        assert_eq!(again, d);
        assert_eq!(serialize_document(&again), text);
    }

    #[test]
    fn errors_are_classified() {
        assert!(matches!(parse_document("{\"name\": "), Err(DocumentError::Parse { .. })));
        let unknown = SMALL.replace("{\"b\": 1}", "{\"q\": 1}");
        assert!(matches!(parse_document(&unknown), Err(DocumentError::Schema(m)) if m.contains("\"q\"")));
        let zero_den = SMALL.replace("2/4", "1/0");
        assert!(matches!(parse_document(&zero_den), Err(DocumentError::RationalFormat(_))));
        let extra = SMALL.replace("\"dim\": 2,", "\"dim\": 2, \"colour\": 1,");
        assert!(matches!(parse_document(&extra), Err(DocumentError::Schema(m)) if m.contains("colour")));
        let float = SMALL.replace("{\"b\": 1}", "{\"b\": 1.5}");
        assert!(matches!(parse_document(&float), Err(DocumentError::RationalFormat(_))));
    }

    #[test]
    fn contradictory_duplicates_are_rejected() {
        let dup = SMALL.replace("[[\"a\", \"b\", {\"b\": 1}]]", "[[\"a\", \"b\", {\"b\": 1}], [\"b\", \"a\", {\"b\": 1}]]");
        assert!(matches!(parse_document(&dup), Err(DocumentError::Schema(_))));
        let same = SMALL.replace("[[\"a\", \"b\", {\"b\": 1}]]", "[[\"a\", \"b\", {\"b\": 1}], [\"b\", \"a\", {\"b\": -1}]]");
        assert!(parse_document(&same).is_ok());
        let key = SMALL.replace("{\"b\": 1}", "{\"b\": 1, \"b\": 2}");
        assert!(matches!(parse_document(&key), Err(DocumentError::Schema(_))));
    }
}
