//! A minimal DOT reader covering the subset `render_dot` emits:
//! `digraph ID { stmt* }` with node, edge, attribute, `a=b` and subgraph
//! statements.

use std::collections::{BTreeMap, BTreeSet};

use lieflag::corpus::{load, CORPUS};
use lieflag::diagram::{classify_vertices, diagram, KernelChain, Step};
use lieflag::dot::{render_dot, DotStyle};
use lieflag::Subspace;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Str(String),
    Arrow,
    Punct(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '-' && cs.get(i + 1) == Some(&'>') {
            out.push(Tok::Arrow);
            i += 2;
        } else if "{}[]=;,".contains(c) {
            out.push(Tok::Punct(c));
            i += 1;
        } else if c == '"' {
            let mut t = String::new();
            i += 1;
            loop {
                match cs.get(i) {
                    None => return Err("unterminated string".into()),
                    Some('"') => break,
                    Some('\\') => {
                        t.push(*cs.get(i + 1).ok_or("dangling escape")?);
                        i += 2;
                    }
                    Some(&ch) => {
                        t.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push(Tok::Str(t));
        } else if c.is_alphanumeric() || c == '_' || c == '.' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '.') {
                i += 1;
            }
            out.push(Tok::Id(cs[start..i].iter().collect()));
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

#[derive(Debug, Default)]
struct Graph {
    nodes: BTreeMap<String, BTreeMap<String, String>>,
    edges: Vec<(String, String, BTreeMap<String, String>)>,
    subgraphs: Vec<(String, Vec<String>)>,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, String> {
        let t = self.toks.get(self.pos).cloned().ok_or("unexpected end")?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        match self.next()? {
            Tok::Punct(p) if p == c => Ok(()),
            t => Err(format!("expected {c:?}, got {t:?}")),
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.next()? {
            Tok::Id(s) | Tok::Str(s) => Ok(s),
            t => Err(format!("expected identifier, got {t:?}")),
        }
    }

    fn attrs(&mut self) -> Result<BTreeMap<String, String>, String> {
        let mut m = BTreeMap::new();
        if self.peek() != Some(&Tok::Punct('[')) {
            return Ok(m);
        }
        self.expect('[')?;
        while self.peek() != Some(&Tok::Punct(']')) {
            let k = self.id()?;
            self.expect('=')?;
            let v = self.id()?;
            m.insert(k, v);
            if matches!(self.peek(), Some(Tok::Punct(',' | ';'))) {
                self.pos += 1;
            }
        }
        self.expect(']')?;
        Ok(m)
    }

    fn stmts(&mut self, g: &mut Graph, members: &mut Vec<String>) -> Result<(), String> {
        self.expect('{')?;
        loop {
            match self.peek() {
                Some(Tok::Punct('}')) => {
                    self.pos += 1;
                    return Ok(());
                }
                Some(Tok::Punct(';')) => self.pos += 1,
                Some(Tok::Id(k)) if k == "subgraph" => {
                    self.pos += 1;
                    let name = self.id()?;
                    let mut inner = Vec::new();
                    self.stmts(g, &mut inner)?;
                    members.extend(inner.iter().cloned());
                    g.subgraphs.push((name, inner));
                }
                Some(Tok::Id(k)) if ["graph", "node", "edge"].contains(&k.as_str()) => {
                    self.pos += 1;
                    self.attrs()?;
                }
                Some(_) => {
                    let a = self.id()?;
                    match self.peek() {
                        Some(Tok::Punct('=')) => {
                            self.pos += 1;
                            self.id()?;
                        }
                        Some(Tok::Arrow) => {
                            self.pos += 1;
                            let b = self.id()?;
                            let at = self.attrs()?;
                            g.edges.push((a, b, at));
                        }
                        _ => {
                            let at = self.attrs()?;
                            members.push(a.clone());
                            g.nodes.insert(a, at);
                        }
                    }
                }
                None => return Err("unexpected end inside braces".into()),
            }
        }
    }
}

fn parse_dot(s: &str) -> Result<Graph, String> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    match p.next()? {
        Tok::Id(k) if k == "digraph" => {}
        t => return Err(format!("expected digraph, got {t:?}")),
    }
    p.id()?;
    let mut g = Graph::default();
    let mut top = Vec::new();
    p.stmts(&mut g, &mut top)?;
    if p.pos != p.toks.len() {
        return Err("trailing tokens".into());
    }
    for (a, b, _) in &g.edges {
        if !g.nodes.contains_key(a) || !g.nodes.contains_key(b) {
            return Err(format!("edge {a} -> {b} uses an undeclared node"));
        }
    }
    Ok(g)
}

fn edge_count(g: &Graph, a: &str, b: &str) -> usize {
    g.edges.iter().filter(|(x, y, _)| x == a && y == b).count()
}

#[test]
fn parser_rejects_malformed_text() {
    assert!(parse_dot("digraph g { a -> }").is_err());
    assert!(parse_dot("graph g { a; }").is_err());
    assert!(parse_dot("digraph g { a [label=\"x\"; }").is_err());
    assert!(parse_dot("digraph g { a -> b; }").is_err());
    assert!(parse_dot("digraph g { a; b; a -> b [label=\"e\"]; }").is_ok());
}

#[test]
fn e1_graph_style_has_three_rows_and_mw_edges_on_down_steps() {
    let doc = load("E1");
    let d = diagram(&doc.algebra, doc.form("omega").unwrap(), &doc.flag("F").unwrap()).unwrap();
    let g = parse_dot(&render_dot(&d, DotStyle::Graph)).unwrap();
    let rows: Vec<&str> = g.subgraphs.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(rows, ["row_H", "row_G", "row_M"]);
    for (_, members) in &g.subgraphs {
        assert_eq!(members.len(), d.vertices.len());
    }
    let mw: Vec<(&str, &str)> =
        g.edges.iter().filter(|(_, _, a)| a.get("label").map(String::as_str) == Some("mw")).map(|(a, b, _)| (a.as_str(), b.as_str())).collect();
    assert_eq!(mw, [("m4", "m3"), ("m5", "m4")]);
    assert_eq!(edge_count(&g, "h4", "h3"), 1);
    assert_eq!(edge_count(&g, "h2", "h3"), 1);
    for k in 0..d.vertices.len() {
        assert_eq!(edge_count(&g, &format!("h{k}"), &format!("g{k}")), 1);
        assert_eq!(edge_count(&g, &format!("g{k}"), &format!("m{k}")), 1);
    }
}

#[test]
fn x3_first_filtration_diagram_style_doubles_the_down_run() {
    let doc = load("X3");
    let d = diagram(&doc.algebra, doc.form("omega").unwrap(), &doc.flag("F1").unwrap()).unwrap();
    let g = parse_dot(&render_dot(&d, DotStyle::Diagram)).unwrap();
    assert!(g.subgraphs.is_empty());
    assert_eq!(g.nodes.len(), 6);
    for (k, s) in d.steps.iter().enumerate() {
        let want = if *s == Step::Up { 1 } else { 2 };
        assert_eq!(edge_count(&g, &format!("v{k}"), &format!("v{}", k + 1)), want);
    }
    assert_eq!(edge_count(&g, "v4", "v5"), 2);
}

#[test]
fn node_labels_carry_index_dims_class_and_weight() {
    let doc = load("E1");
    let d = diagram(&doc.algebra, doc.form("omega").unwrap(), &doc.flag("F").unwrap()).unwrap();
    let g = parse_dot(&render_dot(&d, DotStyle::Diagram)).unwrap();
    assert_eq!(g.nodes["v4"]["label"], "k=4 g=4 h=2 regular-nonreducible w=2/3");
    assert_eq!(g.nodes["v3"]["label"], "k=3 g=3 h=3 attractive w=3");
}

#[test]
fn single_vertex_is_a_one_node_digraph() {
    let d = classify_vertices(&KernelChain { g: vec![Subspace::zero(0)], h: vec![Subspace::zero(0)], steps: vec![] });
    for style in [DotStyle::Graph, DotStyle::Diagram] {
        let g = parse_dot(&render_dot(&d, style)).unwrap();
        assert!(g.edges.iter().all(|(a, b, _)| a.ends_with('0') && b.ends_with('0')));
    }
    let g = parse_dot(&render_dot(&d, DotStyle::Diagram)).unwrap();
    assert_eq!(g.nodes.len(), 1);
    assert!(g.edges.is_empty());
}

#[test]
fn every_corpus_diagram_renders_parseable_and_stable() {
    for e in CORPUS {
        let doc = load(e.name);
        for (fname, w) in &doc.two_forms {
            for name in doc.flags.keys() {
                let Ok(d) = diagram(&doc.algebra, w, &doc.flag(name).unwrap()) else { continue };
                for style in [DotStyle::Graph, DotStyle::Diagram] {
                    let text = render_dot(&d, style);
                    assert_eq!(text, render_dot(&d, style));
                    let g = parse_dot(&text).unwrap_or_else(|err| panic!("{}/{fname}/{name}: {err}", e.name));
                    let ids: BTreeSet<&String> = g.nodes.keys().collect();
                    assert_eq!(ids.len(), g.nodes.len());
                }
            }
        }
    }
}
