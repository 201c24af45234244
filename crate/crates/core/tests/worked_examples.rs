use lieflag::bilagrangian::{audit_connection, connection, curvature_flatness, BilagrangianPair};
use lieflag::corpus::{check, load, CORPUS};
use lieflag::diagram::{contract, diagram, equivalent, predicates, RunItem, Step, VertexClass};
use lieflag::document::{parse_document, serialize_document, AlgebraDocument};
use lieflag::flags::complete_flag_through_with;
use lieflag::lagrangian::{diagram_to_lagrangian, find_lagrangians, lagrangian_dim, lagrangian_to_flag, SearchMode};
use lieflag::primitivity::{primitive_test, quasi_primitive_test, singular_bound_audit, transitive_test, transitivity_audit, PairPresentation, Verdict, DEFAULT_BUDGET};
use lieflag::reduction::deform_to_simple;
use lieflag::{Flag, Subspace};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn span(doc: &AlgebraDocument, names: &[&str]) -> Subspace {
    Subspace::span(doc.dim(), names.iter().map(|n| doc.algebra.basis_vector(n).unwrap()))
}

#[test]
fn e1_kernels_and_shape() {
    let doc = load("E1");
    let w = doc.form("omega").unwrap();
    assert_eq!(w.kernel(), span(&doc, &["c"]));
    let d = diagram(&doc.algebra, w, &doc.flag("F").unwrap()).unwrap();
    assert_eq!(d.vertices[4].h, span(&doc, &["c", "b"]));
    assert_eq!(d.vertices[3].h, d.vertices[3].g);
    assert!(w.restrict(&d.vertices[3].g).is_zero());
    assert_eq!(&d.steps[3..], [Step::Down, Step::Down]);
    assert_eq!(d.kernel_dims(), [0, 1, 2, 3, 2, 1]);
}

#[test]
fn x3_filtrations() {
    let doc = load("X3");
    let alg = &doc.algebra;
    let w = doc.form("omega").unwrap();
    let e = |i: usize| doc.algebra.basis_vector(&format!("e{i}")).unwrap();
    let diff: Vec<_> = e(3).iter().zip(e(1)).map(|(a, b)| a - b).collect();
    assert_eq!(w.kernel(), Subspace::span(5, [diff.clone()]));

    let d1 = diagram(alg, w, &doc.flag("F1").unwrap()).unwrap();
    assert!(d1.is_simple());
    let s: Vec<_> = d1.singular().collect();
    assert_eq!((s.len(), s[0].class), (1, VertexClass::SingularAttractive));

    let d2 = diagram(alg, w, &doc.flag("F2").unwrap()).unwrap();
    let v4 = &d2.vertices[4];
    assert_eq!(v4.class, VertexClass::SingularRepulsive);
    assert_eq!(v4.weight, lieflag::linalg::q(0));
    assert!(w.restrict(&v4.g).is_nondegenerate());

    let d3 = diagram(alg, w, &doc.flag("F3").unwrap()).unwrap();
    let p = predicates(alg, &d3);
    assert!(p.connected && !p.semi_simple);
    assert_eq!(d3.vertices[4].h, Subspace::span(5, [e(4), diff.clone()]));
    assert_eq!(d3.vertices[3].h, Subspace::span(5, [e(4)]));
}

#[test]
fn x1_simple_with_oracle_kernel_dims() {
    let doc = load("X1");
    let d = diagram(&doc.algebra, doc.form("omega").unwrap(), &doc.flag("F").unwrap()).unwrap();
    assert!(d.is_simple());
    assert_eq!(&d.kernel_dims()[1..], [1, 2, 1, 0]);
    assert_eq!(d.vertices[3].h, span(&doc, &["v"]));
    assert_ne!(d.vertices[3].h, span(&doc, &["u"]));
}

#[test]
fn d1_deformation_end_to_end() {
    let doc = load("D1");
    let (alg, w) = (&doc.algebra, doc.form("omega").unwrap());
    let start = doc.flag("F2comp").unwrap();
    let p = predicates(alg, &diagram(alg, w, &start).unwrap());
    assert!(p.semi_simple && p.semi_nilpotent && !p.connected);
    let f0 = deform_to_simple(alg, w, &start).unwrap();
    let want = [span(&doc, &["c"]), span(&doc, &["x", "c"]), span(&doc, &["x", "y", "c"])];
    assert_eq!(&f0.members()[1..4], want);
    let d = diagram(alg, w, &f0).unwrap();
    assert!(d.is_simple());
    let l = diagram_to_lagrangian(&d).unwrap();
    assert!(w.vanishes_on(&l));
    assert!(l.contains_space(&w.kernel()));
    assert_eq!(l.dim(), w.rank() / 2);
    assert_eq!(l.dim(), 2);
}

#[test]
fn lagrangian_round_trip_and_equivalence() {
    let mut rng = StdRng::seed_from_u64(11);
    for name in ["E1", "X1", "X3", "D1"] {
        let doc = load(name);
        let (alg, w) = (&doc.algebra, doc.form("omega").unwrap());
        let found = find_lagrangians(alg, w, SearchMode::Both).found;
        assert!(!found.is_empty(), "{name}");
        for l in &found {
            assert_eq!(l.dim(), lagrangian_dim(w));
            let f = lagrangian_to_flag(alg, w, l).unwrap();
            let d = diagram(alg, w, &f).unwrap();
            assert_eq!(&diagram_to_lagrangian(&d).unwrap(), l, "{name}");
            let chain = [w.kernel(), l.clone()];
            for _ in 0..6 {
                let other: Flag = complete_flag_through_with(alg, &chain, &mut |n| rng.random_range(0..n)).unwrap();
                let d2 = diagram(alg, w, &other).unwrap();
                assert!(equivalent(&d, &d2), "{name}: {l}");
            }
        }
    }
}

#[test]
fn bilagrangian_audits() {
    let doc = load("AB4");
    let (alg, w) = (&doc.algebra, doc.form("omega").unwrap());
    let pair = BilagrangianPair { left: doc.subspace("l").unwrap().clone(), right: doc.subspace("n").unwrap().clone() };
    let t = connection(alg, w, &pair).unwrap();
    assert!(t.nonzero().is_empty());
    assert!(curvature_flatness(alg, &t).tensor.is_zero());

    let doc = load("D1");
    let (alg, w) = (&doc.algebra, doc.form("omega").unwrap());
    let pair = BilagrangianPair { left: span(&doc, &["x", "c"]), right: span(&doc, &["y", "t"]) };
    let t = connection(alg, w, &pair).unwrap();
    assert!(audit_connection(alg, w, &pair, &t).all());
    // independent oracle: D_t x = x, D_t y = -y, zero curvature
    assert_eq!(t.nonzero().len(), 2);
    assert!(curvature_flatness(alg, &t).hess_flat);

    let doc = load("B2");
    let (alg, w) = (&doc.algebra, doc.form("omega").unwrap());
    let pair = BilagrangianPair { left: doc.subspace("l").unwrap().clone(), right: doc.subspace("n").unwrap().clone() };
    let t = connection(alg, w, &pair).unwrap();
    assert!(audit_connection(alg, w, &pair, &t).all());
    let f = curvature_flatness(alg, &t);
    assert!(!f.hess_flat);
    assert_eq!(f.tensor.nonzero().len(), 15);
}

#[test]
fn primitivity_verdicts() {
    let doc = load("E2");
    let pair = PairPresentation::of_form(doc.algebra.clone(), doc.form("omega").unwrap());
    let v = primitive_test(&pair);
    let wit = span(&doc, &["c", "b", "a"]);
    assert_eq!(v, Verdict::NotPrimitive(wit.clone()));
    assert!(transitive_test(&pair, &wit).unwrap());
    for name in ["E1", "E2"] {
        let doc = load(name);
        assert!(transitivity_audit(&PairPresentation::of_form(doc.algebra.clone(), doc.form("omega").unwrap())).holds);
    }
    for e in CORPUS {
        let doc = load(e.name);
        let flags: Vec<(String, Flag)> =
            doc.flags.keys().filter(|n| !doc.is_known_discrepancy(n)).map(|n| (n.clone(), doc.flag(n).unwrap())).collect();
        for w in doc.two_forms.values() {
            let pair = PairPresentation::of_form(doc.algebra.clone(), w);
            if w.kernel().is_zero() {
                assert_eq!(primitive_test(&pair), Verdict::Primitive, "{}", e.name);
                assert_eq!(quasi_primitive_test(&pair, DEFAULT_BUDGET), Verdict::QuasiPrimitive, "{}", e.name);
            }
            assert!(singular_bound_audit(&pair, w, &flags).violations().is_empty(), "{}", e.name);
        }
    }
}

#[test]
fn e1_contraction_shows_the_attractive_turn() {
    let doc = load("E1");
    let d = diagram(&doc.algebra, doc.form("omega").unwrap(), &doc.flag("F").unwrap()).unwrap();
    assert_eq!(
        contract(&d),
        [RunItem::Run(Step::Up, 3), RunItem::Singular(3, VertexClass::SingularAttractive), RunItem::Run(Step::Down, 2)]
    );
}

#[test]
fn corpus_files_round_trip() {
    for e in CORPUS {
        let doc = parse_document(e.document).unwrap();
        let text = serialize_document(&doc);
        assert_eq!(parse_document(&text).unwrap(), doc, "{}", e.name);
        assert_eq!(serialize_document(&parse_document(&text).unwrap()), text, "{}", e.name);
        assert!(check(e).is_empty(), "{}", e.name);
    }
}
