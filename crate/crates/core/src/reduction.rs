//! Deformation of a semi-simple, semi-nilpotent diagram into a simple one:
//! split at a weight-zero repulsive vertex, equivariant descent in the
//! symplectic nilpotent ideal, reassembly; plus per-step reduction audits.

use crate::algebra::LieAlgebra;
use crate::diagram::{diagram, kernel_chain, predicates, Step, VertexClass, WeightedDiagram};
use crate::error::ReductionError;
use crate::flags::{fill_between, flag_inside, Flag};
use crate::forms::TwoForm;
use crate::linalg::{nullspace, Matrix, Subspace};
use crate::spectral::{eigenvector_candidates, joint_eigenspaces};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectSplit {
    /// Index of the weight-zero repulsive vertex.
    pub vertex: usize,
    pub nil_ideal: Subspace,
    pub complement: Subspace,
    pub iso_part: Subspace,
}

fn fail(msg: &str) -> ReductionError {
    ReductionError::SplitInvariantFailed(msg.to_string())
}

pub fn split_at_repulsive(alg: &LieAlgebra, w: &TwoForm, d: &WeightedDiagram) -> Result<SemidirectSplit, ReductionError> {
    let Some(v) = d.weight_zero_singular().find(|v| v.class == VertexClass::SingularRepulsive) else {
        return Err(ReductionError::NoRepulsiveVertex);
    };
    let nil = v.g.clone();
    if !alg.is_ideal(&nil) {
        return Err(fail("nil_ideal is not an ideal"));
    }
    if !alg.is_nilpotent_subalgebra(&nil) {
        return Err(fail("nil_ideal is not nilpotent"));
    }
    if !w.radical(&nil).is_zero() {
        return Err(fail("form restricted to nil_ideal is degenerate"));
    }
    let complement = w.orthogonal(&nil);
    if !alg.is_subalgebra(&complement) {
        return Err(fail("complement is not a subalgebra"));
    }
    if !(nil.intersect(&complement).is_zero() && nil.dim() + complement.dim() == alg.dim()) {
        return Err(fail("nil_ideal and complement are not complementary"));
    }
    let Some(right) = d.singular().find(|u| u.index > v.index) else {
        return Err(fail("no singular vertex to the right of the split"));
    };
    if right.class != VertexClass::SingularAttractive {
        return Err(fail("vertex right of the split is not attractive"));
    }
    let iso = right.g.intersect(&complement);
    let h = w.kernel();
    if !iso.contains_space(&h) {
        return Err(fail("kernel of the form is not inside iso_part"));
    }
    if !w.vanishes_on(&iso) {
        return Err(fail("form does not vanish on iso_part"));
    }
    Ok(SemidirectSplit { vertex: v.index, nil_ideal: nil, complement, iso_part: iso })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentChain {
    /// g_m ⊂ g_{m+1} ⊂ … ⊂ g_{2m}.
    pub members: Vec<Subspace>,
    /// h_1 ⊂ … ⊂ h_m.
    pub kernels: Vec<Subspace>,
}

fn invariant_under(alg: &LieAlgebra, acting: &Subspace, s: &Subspace) -> bool {
    acting.basis().iter().all(|x| s.basis().iter().all(|y| s.contains(&alg.bracket(x, y))))
}

pub fn equivariant_descent(alg: &LieAlgebra, split: &SemidirectSplit, w: &TwoForm) -> Result<DescentChain, ReductionError> {
    let n = alg.dim();
    let nil = &split.nil_ideal;
    let go = &split.complement;
    let a = &split.iso_part;
    let m = nil.dim() / 2;
    let mut desc = vec![nil.clone()];
    let mut kernels = Vec::new();
    let mut cur = nil.clone();
    let mut h = Subspace::zero(n);
    for j in 0..m {
        let wsub = h.sum(&alg.bracket_space(&cur, &cur));
        if wsub.dim() >= cur.dim() {
            return Err(ReductionError::DescentStuck(format!("h_{j} + [g, g] fills g at step {j}")));
        }
        if !invariant_under(alg, go, &wsub) {
            return Err(ReductionError::DescentStuck(format!("h_{j} + [g, g] not invariant at step {j}")));
        }
        let comp = Subspace::span(n, cur.complement_basis(&wsub));
        let r = comp.dim();
        let coords = |v: &[crate::linalg::Rational]| comp.coords(&wsub.reduce(v)).expect("vector of cur reduces into the complement");
        // transposed actions: invariant hyperplanes ↔ common eigen-covectors
        let mats: Vec<Matrix> = go
            .basis()
            .iter()
            .map(|x| comp.basis().iter().map(|c| coords(&alg.bracket(x, c))).collect())
            .collect();
        let je = joint_eigenspaces(&mats, r);
        let cands = eigenvector_candidates(&je);
        if cands.is_empty() {
            return Err(if je.all_split {
                ReductionError::DescentStuck(format!("no invariant hyperplane at step {j}"))
            } else {
                ReductionError::IrrationalSpectrum(j)
            });
        }
        let mut hyper: Vec<Subspace> = cands
            .iter()
            .map(|phi| {
                let local = nullspace(std::slice::from_ref(phi), r);
                wsub.sum(&Subspace::span(n, local.iter().map(|c| comp.from_coords(c))))
            })
            .collect();
        hyper.sort();
        let next = hyper.swap_remove(0);
        let h_next = w.radical(&next);
        if h_next.dim() != j + 1 {
            return Err(ReductionError::DescentStuck(format!("kernel of dimension {} at step {}", h_next.dim(), j + 1)));
        }
        if !invariant_under(alg, go, &h_next) {
            return Err(ReductionError::DescentStuck(format!("h_{} not invariant", j + 1)));
        }
        if !w.vanishes_on(&h_next.sum(a)) {
            return Err(ReductionError::DescentStuck(format!("form does not vanish on h_{} + a", j + 1)));
        }
        desc.push(next.clone());
        kernels.push(h_next.clone());
        cur = next;
        h = h_next;
    }
    if cur != h {
        return Err(ReductionError::DescentStuck("final member is not isotropic".into()));
    }
    desc.reverse();
    Ok(DescentChain { members: desc, kernels })
}

/// F₀: a flag of a, then h_j + a, then g_{m+i} + a, then nil + (flag of the complement above a).
pub fn assemble(alg: &LieAlgebra, split: &SemidirectSplit, chain: &DescentChain) -> Result<Flag, ReductionError> {
    let a = &split.iso_part;
    let mut members = flag_inside(alg, a, &mut |_| 0)?;
    members.extend(chain.kernels.iter().map(|h| h.sum(a)));
    members.extend(chain.members.iter().skip(1).map(|g| g.sum(a)));
    let above = fill_between(alg, a, &split.complement, &mut |_| 0)?;
    members.extend(above.iter().skip(1).map(|c| split.nil_ideal.sum(c)));
    Ok(Flag::new(members))
}

/// Checks (p1) h ⊆ g_S and (p2) ω|g_S = 0, with dim g_S = rank/2 + dim h.
pub fn check_singular_vertex(w: &TwoForm, d: &WeightedDiagram) -> Result<(), ReductionError> {
    let h = w.kernel();
    let s = d
        .singular()
        .next()
        .ok_or_else(|| ReductionError::AuditFailed("no singular vertex".into()))?;
    if !s.g.contains_space(&h) {
        return Err(ReductionError::AuditFailed("singular vertex misses the kernel".into()));
    }
    if !w.vanishes_on(&s.g) {
        return Err(ReductionError::AuditFailed("form does not vanish on the singular vertex".into()));
    }
    if s.g.dim() != w.rank() / 2 + h.dim() {
        return Err(ReductionError::AuditFailed("singular vertex has the wrong dimension".into()));
    }
    Ok(())
}

pub fn deform_to_simple(alg: &LieAlgebra, w: &TwoForm, flag: &Flag) -> Result<Flag, ReductionError> {
    let mut cur = flag.clone();
    let mut d = diagram(alg, w, &cur)?;
    for _ in 0..=alg.dim() {
        let p = predicates(alg, &d);
        if p.simple {
            check_singular_vertex(w, &d)?;
            return Ok(cur);
        }
        if !(p.semi_simple && p.semi_nilpotent) {
            return Err(ReductionError::NotSemisimple(format!(
                "semi_simple = {}, semi_nilpotent = {}",
                p.semi_simple, p.semi_nilpotent
            )));
        }
        let split = split_at_repulsive(alg, w, &d)?;
        let chain = equivariant_descent(alg, &split, w)?;
        cur = assemble(alg, &split, &chain)?;
        d = diagram(alg, w, &cur)?;
    }
    Err(ReductionError::DeformStalled)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepAudit {
    pub index: usize,
    pub step: Step,
    /// dim M_k and dim M_{k+1} (reduced dimensions dim g − dim h).
    pub reduced_dims: (usize, usize),
}

/// Audit of the step k → k+1 given explicit members and kernels.
pub fn audit_step(
    alg: &LieAlgebra,
    k: usize,
    (g0, h0): (&Subspace, &Subspace),
    (g1, h1): (&Subspace, &Subspace),
) -> Result<StepAudit, ReductionError> {
    let m0 = g0.dim() - h0.dim();
    let m1 = g1.dim() - h1.dim();
    let failed = |clause: &str| Err(ReductionError::AuditFailed(format!("step {k}->{}: {clause}", k + 1)));
    if h1.contains_space(h0) && h1.dim() == h0.dim() + 1 {
        if g0.sum(h1) != *g1 {
            return failed("g_k + h_{k+1} != g_{k+1}");
        }
        if m0 != m1 {
            return failed("reduced dimensions differ on an Up step");
        }
        Ok(StepAudit { index: k, step: Step::Up, reduced_dims: (m0, m1) })
    } else if h0.contains_space(h1) && h0.dim() == h1.dim() + 1 {
        if !alg.is_ideal_in(h1, h0).unwrap_or(false) {
            return failed("h_{k+1} is not an ideal of h_k");
        }
        if m0 + 2 != m1 {
            return failed("dim M_k != dim M_{k+1} - 2");
        }
        Ok(StepAudit { index: k, step: Step::Down, reduced_dims: (m0, m1) })
    } else {
        failed("kernels are not nested with codimension 1")
    }
}

pub fn step_audit(alg: &LieAlgebra, w: &TwoForm, flag: &Flag, k: usize) -> Result<StepAudit, ReductionError> {
    let c = kernel_chain(alg, w, flag)?;
    if k + 1 >= c.g.len() {
        return Err(ReductionError::AuditFailed(format!("no step {k}->{}", k + 1)));
    }
    let audit = audit_step(alg, k, (&c.g[k], &c.h[k]), (&c.g[k + 1], &c.h[k + 1]))?;
    // the radical of ω on g_k is h_k itself
    if w.radical(&c.g[k]) != c.h[k] {
        return Err(ReductionError::AuditFailed(format!("radical mismatch at {k}")));
    }
    Ok(audit)
}
