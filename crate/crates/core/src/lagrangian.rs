//! Isotropic and Lagrangian subalgebras containing the kernel of a closed
//! 2-form, the passage between them and simple diagrams, and the Kähler
//! premise pipeline.

use std::collections::HashSet;

use crate::algebra::LieAlgebra;
use crate::diagram::{diagram, WeightedDiagram};
use crate::error::LagrangianError;
use crate::flags::{complete_flag_through, find_normal_flag, Flag, NormalFlag};
use crate::forms::TwoForm;
use crate::linalg::{unit_vec, Subspace, Vector};
use crate::par::{map_slice, Exec};
use crate::reduction::deform_to_simple;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateStatus {
    Verified,
    Rejected(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianCandidate {
    pub subspace: Subspace,
    pub status: CandidateStatus,
}

impl LagrangianCandidate {
    pub fn is_verified(&self) -> bool {
        self.status == CandidateStatus::Verified
    }
}

/// rank(ω)/2 + dim ker ω.
pub fn lagrangian_dim(w: &TwoForm) -> usize {
    w.rank() / 2 + w.kernel().dim()
}

pub fn verify_lagrangian(alg: &LieAlgebra, w: &TwoForm, s: &Subspace) -> CandidateStatus {
    let reject = |m: String| CandidateStatus::Rejected(m);
    if !alg.is_subalgebra(s) {
        return reject("not a subalgebra".into());
    }
    if !s.contains_space(&w.kernel()) {
        return reject("does not contain the kernel of the form".into());
    }
    if !w.vanishes_on(s) {
        return reject("form does not vanish on it".into());
    }
    let want = lagrangian_dim(w);
    if s.dim() != want {
        return reject(format!("dimension {} instead of {want}", s.dim()));
    }
    CandidateStatus::Verified
}

/// Sum of the radicals of ω along the flag.
pub fn vergne_candidate(alg: &LieAlgebra, w: &TwoForm, flag: &Flag) -> LagrangianCandidate {
    let subspace = flag
        .members()
        .iter()
        .fold(Subspace::zero(alg.dim()), |acc, g| acc.sum(&w.radical(g)));
    let status = verify_lagrangian(alg, w, &subspace);
    LagrangianCandidate { subspace, status }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Vergne,
    FlagAdapted,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    ExhaustiveWithinMode,
    Heuristic,
}

impl Completeness {
    pub fn label(self) -> &'static str {
        match self {
            Completeness::ExhaustiveWithinMode => "EXHAUSTIVE_WITHIN_MODE",
            Completeness::Heuristic => "HEURISTIC",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchVerdict {
    pub found: Vec<Subspace>,
    pub completeness: Completeness,
}

pub const NODE_BUDGET: usize = 20_000;

pub fn find_lagrangians(alg: &LieAlgebra, w: &TwoForm, mode: SearchMode) -> SearchVerdict {
    find_lagrangians_with(Exec::default(), alg, w, mode, NODE_BUDGET)
}

pub fn find_lagrangians_with(exec: Exec, alg: &LieAlgebra, w: &TwoForm, mode: SearchMode, budget: usize) -> SearchVerdict {
    let normal = match find_normal_flag(alg) {
        NormalFlag::Found(f) => Some(f),
        _ => None,
    };
    let mut found = Vec::new();
    let mut completeness = Completeness::Heuristic;
    if matches!(mode, SearchMode::Vergne | SearchMode::Both) {
        if let Some(f) = &normal {
            let c = vergne_candidate(alg, w, f);
            if c.is_verified() {
                found.push(c.subspace);
            }
        }
    }
    if matches!(mode, SearchMode::FlagAdapted | SearchMode::Both) {
        let (mut hits, exhausted) = flag_adapted(exec, alg, w, normal.as_ref(), budget);
        found.append(&mut hits);
        if exhausted && normal.is_some() {
            completeness = Completeness::ExhaustiveWithinMode;
        }
    }
    found.sort();
    found.dedup();
    SearchVerdict { found, completeness }
}

fn candidate_vectors(n: usize, normal: Option<&Flag>) -> Vec<Vector> {
    let mut out: Vec<Vector> = match normal {
        Some(f) => f.members().iter().flat_map(|m| m.basis().to_vec()).collect(),
        None => (0..n).map(|i| unit_vec(n, i)).collect(),
    };
    out.sort();
    out.dedup();
    out
}

struct Search<'a> {
    alg: &'a LieAlgebra,
    w: &'a TwoForm,
    cands: &'a [Vector],
    target: usize,
}

impl Search<'_> {
    fn children(&self, s: &Subspace) -> Vec<Subspace> {
        let mut out: Vec<Subspace> = self
            .cands
            .iter()
            .filter(|v| !s.contains(v))
            .filter_map(|v| {
                let mut gens = s.basis().to_vec();
                gens.push(v.clone());
                let c = self.alg.subalgebra_closure(&gens);
                (c.dim() <= self.target && self.w.vanishes_on(&c)).then_some(c)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Depth-first from `root`; returns the Lagrangians reached and whether the budget sufficed.
    fn run(&self, root: Subspace, budget: usize) -> (Vec<Subspace>, bool) {
        let mut seen = HashSet::new();
        let mut stack = vec![root];
        let mut hits = Vec::new();
        while let Some(s) = stack.pop() {
            if !seen.insert(s.clone()) {
                continue;
            }
            if seen.len() > budget {
                return (hits, false);
            }
            if s.dim() == self.target {
                hits.push(s);
                continue;
            }
            stack.extend(self.children(&s));
        }
        (hits, true)
    }
}

fn flag_adapted(exec: Exec, alg: &LieAlgebra, w: &TwoForm, normal: Option<&Flag>, budget: usize) -> (Vec<Subspace>, bool) {
    let cands = candidate_vectors(alg.dim(), normal);
    let search = Search { alg, w, cands: &cands, target: lagrangian_dim(w) };
    let root = w.kernel();
    if root.dim() == search.target {
        return (vec![root], true);
    }
    let branches = search.children(&root);
    let results = map_slice(exec, &branches, |b| search.run(b.clone(), budget));
    let exhausted = results.iter().all(|r| r.1);
    let mut hits: Vec<Subspace> = results.into_iter().flat_map(|r| r.0).collect();
    hits.sort();
    hits.dedup();
    (hits, exhausted)
}

/// Flag through ker ω ⊆ L; its diagram is simple with singular vertex L
/// unless ω = 0.
pub fn lagrangian_to_flag(alg: &LieAlgebra, w: &TwoForm, l: &Subspace) -> Result<Flag, LagrangianError> {
    if let CandidateStatus::Rejected(why) = verify_lagrangian(alg, w, l) {
        return Err(LagrangianError::NotLagrangian(why));
    }
    let h = w.kernel();
    let chain: Vec<Subspace> = if h == *l { vec![h] } else { vec![h, l.clone()] };
    let flag = complete_flag_through(alg, &chain)?;
    if l.is_full() {
        // ω = 0: every step is Up and there is no singular vertex
        return Ok(flag);
    }
    let d = diagram(alg, w, &flag)?;
    if !d.is_simple() || d.singular().next().map(|v| &v.g) != Some(l) {
        return Err(LagrangianError::NotSimple);
    }
    Ok(flag)
}

pub fn diagram_to_lagrangian(d: &WeightedDiagram) -> Result<Subspace, LagrangianError> {
    if !d.is_simple() {
        return Err(LagrangianError::NotSimple);
    }
    d.singular().next().map(|v| v.g.clone()).ok_or(LagrangianError::NotSimple)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KahlerReport {
    pub premise: bool,
    pub derived_dim: usize,
    pub flag: Option<Flag>,
}

/// Premise: dim [g,g] > 0 and ω nondegenerate on [g,g]. When it holds, a flag
/// through [g,g] is deformed into a simple one.
pub fn kahler_premise_pipeline(alg: &LieAlgebra, w: &TwoForm) -> Result<KahlerReport, LagrangianError> {
    let der = alg.derived();
    let premise = !der.is_zero() && w.radical(&der).is_zero();
    if !premise {
        return Ok(KahlerReport { premise, derived_dim: der.dim(), flag: None });
    }
    let start = complete_flag_through(alg, std::slice::from_ref(&der))?;
    let flag = deform_to_simple(alg, w, &start)?;
    Ok(KahlerReport { premise, derived_dim: der.dim(), flag: Some(flag) })
}
