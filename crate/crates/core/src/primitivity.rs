//! Degrees and (quasi-)primitivity of a pair (g, h), decided through
//! transitive subalgebras s + h = g.

use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;

use crate::algebra::LieAlgebra;
use crate::diagram::diagram;
use crate::error::PrimitivityError;
use crate::flags::{derived_hyperplanes, kernel_is_subalgebra, pencil_solutions, Flag};
use crate::forms::TwoForm;
use crate::linalg::{add, dot, nullspace, q, scale, unit_vec, Rational, Subspace, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairPresentation {
    pub algebra: LieAlgebra,
    pub isotropy: Subspace,
}

impl PairPresentation {
    pub fn new(algebra: LieAlgebra, isotropy: Subspace) -> Result<Self, PrimitivityError> {
        if !algebra.is_subalgebra(&isotropy) {
            return Err(PrimitivityError::NotSubalgebra);
        }
        Ok(PairPresentation { algebra, isotropy })
    }

    /// (g, ker ω).
    pub fn of_form(algebra: LieAlgebra, w: &TwoForm) -> Self {
        let isotropy = w.kernel();
        PairPresentation { algebra, isotropy }
    }

    fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Primitive,
    NotPrimitive(Subspace),
    QuasiPrimitive,
    NotQuasiPrimitive(Subspace),
    Unknown(Vec<String>),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Primitive => "PRIMITIVE",
            Verdict::NotPrimitive(_) => "NOT_PRIMITIVE",
            Verdict::QuasiPrimitive => "QUASI_PRIMITIVE",
            Verdict::NotQuasiPrimitive(_) => "NOT_QUASI_PRIMITIVE",
            Verdict::Unknown(_) => "UNKNOWN",
        }
    }

    pub fn witness(&self) -> Option<&Subspace> {
        match self {
            Verdict::NotPrimitive(w) | Verdict::NotQuasiPrimitive(w) => Some(w),
            _ => None,
        }
    }
}

pub fn transitive_test(pair: &PairPresentation, s: &Subspace) -> Result<bool, PrimitivityError> {
    if !pair.algebra.is_subalgebra(s) {
        return Err(PrimitivityError::NotSubalgebra);
    }
    Ok(s.sum(&pair.isotropy).is_full())
}

fn transitive(pair: &PairPresentation, s: &Subspace) -> bool {
    s.sum(&pair.isotropy).is_full()
}

/// Hyperplane of t containing [t,t] and missing a vector of h ∩ t, if h ∩ t ⊄ [t,t].
fn ideal_hyperplane_witness(alg: &LieAlgebra, h: &Subspace, t: &Subspace) -> Option<Subspace> {
    let d = alg.bracket_space(t, t);
    let ht = h.intersect(t);
    let v = ht.basis().iter().find(|v| !d.contains(v))?;
    let inner = d.with_vector(v);
    Some(d.sum(&Subspace::span(t.ambient(), t.complement_basis(&inner))))
}

pub fn primitive_test(pair: &PairPresentation) -> Verdict {
    let g = Subspace::full(pair.dim());
    match ideal_hyperplane_witness(&pair.algebra, &pair.isotropy, &g) {
        Some(w) => Verdict::NotPrimitive(w),
        None => Verdict::Primitive,
    }
}

pub const MODE1: &str = "ideal hyperplanes";
pub const MODE2: &str = "dual-basis covectors and pencils";

/// Non-ideal hyperplane subalgebras ker φ of g with φ(h) ≠ 0, over dual-basis
/// covectors and their pencils; at most `budget` covectors examined.
fn mode2(pair: &PairPresentation, budget: usize) -> (Option<Subspace>, bool) {
    let n = pair.dim();
    let alg = &pair.algebra;
    let dual: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
    let hits_h = |phi: &[Rational]| pair.isotropy.basis().iter().any(|v| !dot(phi, v).is_zero());
    let mut examined = 0;
    let mut found: Vec<Subspace> = Vec::new();
    let consider = |phi: Vector, found: &mut Vec<Subspace>| {
        if hits_h(&phi) && kernel_is_subalgebra(alg, &phi) {
            found.push(Subspace::span(n, nullspace(std::slice::from_ref(&phi), n)));
        }
    };
    for a in &dual {
        examined += 1;
        consider(a.clone(), &mut found);
    }
    for i in 0..n {
        for j in i + 1..n {
            if examined >= budget {
                found.sort();
                return (found.into_iter().next(), false);
            }
            examined += 1;
            for lam in pencil_solutions(alg, &dual[i], &dual[j]) {
                consider(add(&dual[i], &scale(&dual[j], &lam)), &mut found);
            }
        }
    }
    found.sort();
    (found.into_iter().next(), true)
}

pub const DEFAULT_BUDGET: usize = 10_000;

pub fn quasi_primitive_test(pair: &PairPresentation, budget: usize) -> Verdict {
    if let Verdict::NotPrimitive(w) = primitive_test(pair) {
        return Verdict::NotQuasiPrimitive(w);
    }
    if pair.isotropy.is_zero() {
        return Verdict::QuasiPrimitive;
    }
    match mode2(pair, budget) {
        (Some(w), _) => Verdict::NotQuasiPrimitive(w),
        _ => Verdict::Unknown(vec![MODE1.into(), MODE2.into()]),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degrees {
    pub r: Rational,
    pub d_lower: Rational,
    pub d_within_search: Rational,
}

fn degree_of(pair: &PairPresentation, s: &Subspace) -> Rational {
    let hs = s.intersect(&pair.isotropy).dim();
    Rational::new((hs as i64).into(), ((s.dim() - hs + 1) as i64).into())
}

/// Transitive subalgebras reachable from g by transitive hyperplane steps.
fn transitive_descent(pair: &PairPresentation, budget: usize) -> (Vec<Subspace>, bool) {
    let alg = &pair.algebra;
    let g = Subspace::full(pair.dim());
    let mut seen: BTreeSet<Subspace> = BTreeSet::new();
    let mut queue = VecDeque::from([g]);
    let mut complete = true;
    while let Some(t) = queue.pop_front() {
        if !seen.insert(t.clone()) {
            continue;
        }
        if seen.len() >= budget {
            complete = false;
            break;
        }
        let zero = Subspace::zero(pair.dim());
        let mut next: Vec<Subspace> = derived_hyperplanes(alg, &zero, &t);
        next.extend(ideal_hyperplane_witness(alg, &pair.isotropy, &t));
        next.extend(crate::flags::pencil_hyperplanes(alg, &zero, &t));
        queue.extend(next.into_iter().filter(|s| transitive(pair, s) && !seen.contains(s)));
    }
    (seen.into_iter().collect(), complete)
}

pub fn degrees(pair: &PairPresentation) -> Degrees {
    let g = Subspace::full(pair.dim());
    let r = degree_of(pair, &g);
    let (found, _) = transitive_descent(pair, DEFAULT_BUDGET);
    let d_within_search = found.iter().map(|s| degree_of(pair, s)).min().unwrap_or_else(|| r.clone());
    let d_lower = if d_within_search.is_zero() {
        q(0)
    } else if quasi_primitive_test(pair, DEFAULT_BUDGET) == Verdict::QuasiPrimitive {
        r.clone()
    } else {
        q(0)
    };
    Degrees { r, d_lower, d_within_search }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityReport {
    /// [g,g] + h = g.
    pub derived_transitive: bool,
    /// The smallest ideal containing h is g.
    pub ideal_closure_full: bool,
    pub holds: bool,
}

pub fn transitivity_audit(pair: &PairPresentation) -> TransitivityReport {
    let alg = &pair.algebra;
    let derived_transitive = alg.derived().sum(&pair.isotropy).is_full();
    let ideal_closure_full = alg.ideal_closure(&pair.isotropy).is_full();
    TransitivityReport { derived_transitive, ideal_closure_full, holds: derived_transitive == ideal_closure_full }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularBoundEntry {
    pub name: String,
    pub connected: bool,
    pub singular_count: usize,
    /// None when the diagram is skipped (disconnected).
    pub within_quasi_bound: Option<bool>,
    pub within_general_bound: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularBoundReport {
    pub verdict: Verdict,
    pub entries: Vec<SingularBoundEntry>,
}

impl SingularBoundReport {
    pub fn violations(&self) -> Vec<&SingularBoundEntry> {
        self.entries
            .iter()
            .filter(|e| e.within_quasi_bound == Some(false) || e.within_general_bound == Some(false))
            .collect()
    }
}

/// Singular counts of connected diagrams: at most 4, and at most 3 when the pair is quasi-primitive.
pub fn singular_bound_audit(pair: &PairPresentation, w: &TwoForm, flags: &[(String, Flag)]) -> SingularBoundReport {
    let verdict = quasi_primitive_test(pair, DEFAULT_BUDGET);
    let quasi = verdict == Verdict::QuasiPrimitive;
    let entries = flags
        .iter()
        .filter_map(|(name, f)| {
            let d = diagram(&pair.algebra, w, f).ok()?;
            let connected = d.weight_zero_singular().next().is_none();
            let count = d.singular_count();
            Some(SingularBoundEntry {
                name: name.clone(),
                connected,
                singular_count: count,
                within_quasi_bound: (connected && quasi).then_some(count <= 3),
                within_general_bound: connected.then_some(count <= 4),
            })
        })
        .collect();
    SingularBoundReport { verdict, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, qr};

    fn sp(n: usize, vs: &[&[i64]]) -> Subspace {
        Subspace::span(n, vs.iter().map(|v| int_vec(v)))
    }

    fn e2() -> LieAlgebra {
        LieAlgebra::from_named(&["c", "b", "a", "u"], &[("u", "c", &[("c", -1)]), ("u", "b", &[("b", 1)]), ("u", "a", &[("a", 1)])])
    }

    #[test]
    fn e2_is_not_primitive() {
        let pair = PairPresentation::new(e2(), sp(4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]])).unwrap();
        let cba = sp(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(primitive_test(&pair), Verdict::NotPrimitive(cba.clone()));
        assert_eq!(quasi_primitive_test(&pair, DEFAULT_BUDGET), Verdict::NotQuasiPrimitive(cba.clone()));
        assert!(transitive_test(&pair, &cba).unwrap());
        assert!(transitivity_audit(&pair).holds);
    }

    #[test]
    fn trivial_isotropy() {
        let pair = PairPresentation::new(e2(), Subspace::zero(4)).unwrap();
        assert_eq!(primitive_test(&pair), Verdict::Primitive);
        assert_eq!(quasi_primitive_test(&pair, DEFAULT_BUDGET), Verdict::QuasiPrimitive);
        let d = degrees(&pair);
        assert_eq!((d.r, d.d_lower), (q(0), q(0)));
    }

    #[test]
    fn full_isotropy_has_an_ideal_witness() {
        let pair = PairPresentation::new(e2(), Subspace::full(4)).unwrap();
        let v = primitive_test(&pair);
        let w = v.witness().unwrap();
        assert_eq!(w.dim(), 3);
        assert!(pair.algebra.is_ideal(w));
    }

    #[test]
    fn degree_of_a_line() {
        let alg = LieAlgebra::abelian(5);
        let pair = PairPresentation::new(alg, sp(5, &[&[1, 0, 0, 0, 0]])).unwrap();
        assert_eq!(degrees(&pair).r, qr(1, 5));
    }

    #[test]
    fn abelian_transitivity_audit() {
        let pair = PairPresentation::new(LieAlgebra::abelian(3), sp(3, &[&[1, 0, 0]])).unwrap();
        let rep = transitivity_audit(&pair);
        assert!(!rep.derived_transitive && !rep.ideal_closure_full && rep.holds);
    }

    #[test]
    fn non_subalgebra_is_rejected() {
        let alg = LieAlgebra::from_named(&["x", "y", "z"], &[("x", "y", &[("z", 1)])]);
        assert_eq!(PairPresentation::new(alg, sp(3, &[&[1, 0, 0], &[0, 1, 0]])), Err(PrimitivityError::NotSubalgebra));
    }

    #[test]
    fn skewed_aff_pair_is_unknown_with_a_hand_witness() {
        let v = |xs: &[i64]| int_vec(xs);
        let alg = LieAlgebra::new(
            (1..=4).map(|i| format!("f{i}")).collect(),
            &[
                (0, 1, v(&[7, 0, -3, 5])),
                (0, 2, v(&[-3, 0, 1, -2])),
                (0, 3, v(&[-3, 0, 1, -2])),
                (1, 2, v(&[5, 0, -1, 3])),
                (1, 3, v(&[13, 0, -5, 9])),
                (2, 3, v(&[-3, 0, 1, -2])),
            ],
        );
        assert!(crate::algebra::validate_algebra(&alg).is_ok());
        let pair = PairPresentation::new(alg, sp(4, &[&[-2, 0, 0, -1]])).unwrap();
        assert_eq!(primitive_test(&pair), Verdict::Primitive);
        assert!(matches!(quasi_primitive_test(&pair, DEFAULT_BUDGET), Verdict::Unknown(_)));
        let witness = sp(4, &[&[1, 0, 0, 1], &[7, 1, -3, 5], &[1, 0, -1, 1]]);
        assert!(transitive_test(&pair, &witness).unwrap());
        assert!(!pair.algebra.is_ideal(&witness));
    }
}
