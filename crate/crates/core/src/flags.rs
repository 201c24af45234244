//! Composition series: validation, normal-flag search, completion through a chain.

use num_traits::Zero;

use crate::algebra::{ideal_descent, Descent, LieAlgebra};
use crate::error::FlagError;
use crate::forms::{d_covector, wedge_two_one, ThreeForm};
use crate::linalg::{add, nullspace, scale, Rational, Subspace, Vector};
use crate::spectral::rational_roots;

/// Chain of subspaces indexed by dimension, starting at the zero subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flag {
    members: Vec<Subspace>,
}

impl Flag {
    pub fn new(members: Vec<Subspace>) -> Self {
        Flag { members }
    }

    /// Members listed from dimension 1 upward; the zero subspace is prepended
    /// and the whole space appended when missing.
    pub fn from_proper(ambient: usize, proper: Vec<Subspace>) -> Self {
        let mut members = vec![Subspace::zero(ambient)];
        members.extend(proper.into_iter().filter(|s| !s.is_zero()));
        if !members.last().is_some_and(Subspace::is_full) {
            members.push(Subspace::full(ambient));
        }
        Flag { members }
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn member(&self, k: usize) -> &Subspace {
        &self.members[k]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn ambient(&self) -> usize {
        self.members.first().map_or(0, Subspace::ambient)
    }

    pub fn contains_member(&self, s: &Subspace) -> bool {
        self.members.contains(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagIndexReport {
    pub index: usize,
    pub dim: usize,
    pub dimension_ok: bool,
    /// member_k ⊂ member_{k+1}; true for the last member.
    pub nested_in_next: bool,
    pub subalgebra: bool,
    /// None when not nested or for the last member.
    pub ideal_in_next: Option<bool>,
    pub normal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagReport {
    pub entries: Vec<FlagIndexReport>,
    pub starts_at_zero: bool,
    pub ends_at_full: bool,
}

impl FlagReport {
    /// Dimensions, nesting, subalgebras and endpoints; enough for kernel chains.
    pub fn is_structural(&self) -> bool {
        self.starts_at_zero
            && self.ends_at_full
            && self.entries.iter().all(|e| e.dimension_ok && e.nested_in_next && e.subalgebra)
    }

    /// Structural and every member an ideal in its successor.
    pub fn is_composition_series(&self) -> bool {
        self.is_structural() && self.entries.iter().all(|e| e.ideal_in_next != Some(false))
    }

    pub fn all_normal(&self) -> bool {
        self.entries.iter().all(|e| e.normal)
    }

    /// First structural failure, in words.
    pub fn first_failure(&self) -> Option<String> {
        if !self.starts_at_zero {
            return Some("flag does not start at the zero subspace".into());
        }
        for e in &self.entries {
            if !e.dimension_ok {
                return Some(format!("member {} has dimension {}", e.index, e.dim));
            }
            if !e.nested_in_next {
                return Some(format!("nesting violation at step {}->{}", e.index, e.index + 1));
            }
            if !e.subalgebra {
                return Some(format!("member {} is not a subalgebra", e.index));
            }
        }
        if !self.ends_at_full {
            return Some("flag does not end at the whole algebra".into());
        }
        None
    }
}

pub fn validate_flag(alg: &LieAlgebra, flag: &Flag) -> FlagReport {
    let m = flag.members();
    let entries = m
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let next = m.get(k + 1);
            let nested = next.is_none_or(|t| t.contains_space(s) && t.dim() > s.dim());
            let ideal_in_next = match next {
                Some(t) if nested => alg.is_ideal_in(s, t).ok(),
                _ => None,
            };
            FlagIndexReport {
                index: k,
                dim: s.dim(),
                dimension_ok: s.dim() == k,
                nested_in_next: nested,
                subalgebra: alg.is_subalgebra(s),
                ideal_in_next,
                normal: alg.is_ideal(s),
            }
        })
        .collect();
    FlagReport {
        entries,
        starts_at_zero: m.first().is_some_and(Subspace::is_zero),
        ends_at_full: m.last().is_some_and(|s| s.is_full() && s.ambient() == alg.dim()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalFlag {
    Found(Flag),
    None,
    Undecided,
}

pub fn find_normal_flag(alg: &LieAlgebra) -> NormalFlag {
    find_normal_flag_with(alg, &mut |_| 0)
}

/// Normal flag search with a caller-supplied choice among the canonically
/// ordered candidates at each step (index 0 is the canonical choice).
pub fn find_normal_flag_with(alg: &LieAlgebra, choose: &mut dyn FnMut(usize) -> usize) -> NormalFlag {
    if !alg.is_solvable() {
        return NormalFlag::None;
    }
    match ideal_descent(alg, choose) {
        Descent::Found(members) => NormalFlag::Found(Flag::new(members)),
        Descent::Stuck => NormalFlag::None,
        Descent::Irrational => NormalFlag::Undecided,
    }
}

/// Hyperplanes of `t` containing `s + [t, t]` (always ideals of `t`), one per
/// canonical complement vector, in canonical order.
pub fn derived_hyperplanes(alg: &LieAlgebra, s: &Subspace, t: &Subspace) -> Vec<Subspace> {
    let w = s.sum(&alg.bracket_space(t, t));
    if w.dim() >= t.dim() {
        return Vec::new();
    }
    let comp = t.complement_basis(&w);
    let mut out: Vec<Subspace> = (0..comp.len())
        .map(|i| {
            let others = comp.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone());
            w.sum(&Subspace::span(t.ambient(), others))
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn three_form_coeffs(t: &ThreeForm) -> Vec<Rational> {
    let n = t.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push(t.get(i, j, k));
            }
        }
    }
    out
}

/// Whether ker φ is a subalgebra: dφ ∧ φ = 0.
pub fn kernel_is_subalgebra(alg: &LieAlgebra, phi: &[Rational]) -> bool {
    wedge_two_one(&d_covector(alg, phi), phi).is_zero()
}

/// Rational λ with dφ∧φ = 0 for φ = α + λβ (all λ when the pencil is identically good: reported as λ = 1).
pub fn pencil_solutions(alg: &LieAlgebra, alpha: &[Rational], beta: &[Rational]) -> Vec<Rational> {
    let da = d_covector(alg, alpha);
    let db = d_covector(alg, beta);
    let c0 = three_form_coeffs(&wedge_two_one(&da, alpha));
    let c1a = three_form_coeffs(&wedge_two_one(&da, beta));
    let c1b = three_form_coeffs(&wedge_two_one(&db, alpha));
    let c2 = three_form_coeffs(&wedge_two_one(&db, beta));
    let polys: Vec<[Rational; 3]> = (0..c0.len())
        .map(|i| [c0[i].clone(), &c1a[i] + &c1b[i], c2[i].clone()])
        .collect();
    let Some(first) = polys.iter().find(|p| p.iter().any(|c| !c.is_zero())) else {
        return vec![crate::linalg::q(1)];
    };
    rational_roots(first)
        .roots
        .into_iter()
        .filter(|lam| polys.iter().all(|p| (&p[0] + &p[1] * lam + &p[2] * lam * lam).is_zero()))
        .collect()
}

/// Hyperplane subalgebras ker φ of `t` with φ ∈ ann(s), tried over single
/// annihilator basis covectors and one-parameter pencils of pairs.
pub fn pencil_hyperplanes(alg: &LieAlgebra, s: &Subspace, t: &Subspace) -> Vec<Subspace> {
    let Ok(sub) = alg.restrict_to(t) else {
        return Vec::new();
    };
    let m = sub.dim();
    let s_local = Subspace::span(m, s.basis().iter().filter_map(|v| t.coords(v)));
    let ann: Vec<Vector> = s_local.annihilator().basis().to_vec();
    let mut covectors: Vec<Vector> = Vec::new();
    for a in &ann {
        if kernel_is_subalgebra(&sub, a) {
            covectors.push(a.clone());
        }
    }
    for i in 0..ann.len() {
        for j in i + 1..ann.len() {
            for lam in pencil_solutions(&sub, &ann[i], &ann[j]) {
                covectors.push(add(&ann[i], &scale(&ann[j], &lam)));
            }
        }
    }
    let mut out: Vec<Subspace> = covectors
        .iter()
        .filter(|phi| phi.iter().any(|x| !x.is_zero()))
        .map(|phi| {
            let local = nullspace(std::slice::from_ref(phi), m);
            Subspace::span(t.ambient(), local.iter().map(|c| t.from_coords(c)))
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Codimension-1 subalgebras of `t` containing `s`: the derived hyperplanes
/// when `s + [t,t] ≠ t`, otherwise the pencil search.
pub fn hyperplane_subalgebras(alg: &LieAlgebra, s: &Subspace, t: &Subspace) -> Vec<Subspace> {
    let d = derived_hyperplanes(alg, s, t);
    if !d.is_empty() {
        return d;
    }
    pencil_hyperplanes(alg, s, t)
}

/// Chain s = c_0 ⊂ … ⊂ c_r = t with codimension-1 steps, built downward from t.
pub fn fill_between(
    alg: &LieAlgebra,
    s: &Subspace,
    t: &Subspace,
    choose: &mut dyn FnMut(usize) -> usize,
) -> Result<Vec<Subspace>, FlagError> {
    let mut desc = vec![t.clone()];
    let mut cur = t.clone();
    while cur.dim() > s.dim() + 1 {
        let cands = hyperplane_subalgebras(alg, s, &cur);
        if cands.is_empty() {
            return Err(FlagError::Incomplete { lower: s.dim(), upper: cur.dim() });
        }
        let pick = choose(cands.len()).min(cands.len() - 1);
        cur = cands[pick].clone();
        desc.push(cur.clone());
    }
    if cur.dim() > s.dim() {
        desc.push(s.clone());
    }
    desc.reverse();
    Ok(desc)
}

/// Flag inside the subalgebra `s`, by ideal descent of `s` as an algebra,
/// falling back to hyperplane filling from the zero subspace.
pub(crate) fn flag_inside(alg: &LieAlgebra, s: &Subspace, choose: &mut dyn FnMut(usize) -> usize) -> Result<Vec<Subspace>, FlagError> {
    let sub = alg.restrict_to(s).map_err(|_| FlagError::NotSubalgebra(0))?;
    if let Descent::Found(local) = ideal_descent(&sub, choose) {
        return Ok(local
            .iter()
            .map(|l| Subspace::span(s.ambient(), l.basis().iter().map(|c| s.from_coords(c))))
            .collect());
    }
    fill_between(alg, &Subspace::zero(s.ambient()), s, choose)
}

pub fn complete_flag_through(alg: &LieAlgebra, chain: &[Subspace]) -> Result<Flag, FlagError> {
    complete_flag_through_with(alg, chain, &mut |_| 0)
}

pub fn complete_flag_through_with(
    alg: &LieAlgebra,
    chain: &[Subspace],
    choose: &mut dyn FnMut(usize) -> usize,
) -> Result<Flag, FlagError> {
    let n = alg.dim();
    for (i, c) in chain.iter().enumerate() {
        if !alg.is_subalgebra(c) {
            return Err(FlagError::NotSubalgebra(i));
        }
        if i > 0 && !(c.contains_space(&chain[i - 1]) && c.dim() > chain[i - 1].dim()) {
            return Err(FlagError::ChainNotNested(i));
        }
    }
    let mut stops: Vec<Subspace> = chain.iter().filter(|c| !c.is_zero()).cloned().collect();
    if !stops.last().is_some_and(Subspace::is_full) {
        stops.push(Subspace::full(n));
    }
    let mut members = flag_inside(alg, &stops[0], choose)?;
    for w in stops.windows(2) {
        let seg = fill_between(alg, &w[0], &w[1], choose)?;
        members.extend(seg.into_iter().skip(1));
    }
    Ok(Flag::new(members))
}
