//! Kernel chains along a flag, vertex classes, weights, contraction, predicates.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::LieAlgebra;
use crate::error::DiagramError;
use crate::flags::{validate_flag, Flag};
use crate::forms::{is_closed, TwoForm};
use crate::linalg::{Rational, Subspace};
use crate::par::{map_range, Exec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    /// h_k ⊂ h_{k+1}: the kernel grows by one.
    Up,
    /// h_{k+1} ⊂ h_k: the rank grows by two.
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexClass {
    RegularNonReducible,
    RegularReducible,
    SingularAttractive,
    SingularRepulsive,
    EndpointLeft,
    EndpointRight,
}

impl VertexClass {
    pub fn is_singular(self) -> bool {
        matches!(self, VertexClass::SingularAttractive | VertexClass::SingularRepulsive)
    }

    pub fn label(self) -> &'static str {
        match self {
            VertexClass::RegularNonReducible => "regular-nonreducible",
            VertexClass::RegularReducible => "regular-reducible",
            VertexClass::SingularAttractive => "attractive",
            VertexClass::SingularRepulsive => "repulsive",
            VertexClass::EndpointLeft => "endpoint-left",
            VertexClass::EndpointRight => "endpoint-right",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelChain {
    pub g: Vec<Subspace>,
    pub h: Vec<Subspace>,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub index: usize,
    pub g: Subspace,
    pub h: Subspace,
    pub weight: Rational,
    pub class: VertexClass,
}

impl Vertex {
    /// dim g_k − dim h_k, the dimension of the reduced space at k.
    pub fn reduced_dim(&self) -> usize {
        self.g.dim() - self.h.dim()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDiagram {
    pub vertices: Vec<Vertex>,
    pub steps: Vec<Step>,
}

pub fn weight(g_dim: usize, h_dim: usize) -> Rational {
    Rational::new(BigInt::from(h_dim), BigInt::from(g_dim - h_dim + 1))
}

pub fn kernel_chain(alg: &LieAlgebra, w: &TwoForm, flag: &Flag) -> Result<KernelChain, DiagramError> {
    kernel_chain_with(Exec::default(), alg, w, flag)
}

pub fn kernel_chain_with(exec: Exec, alg: &LieAlgebra, w: &TwoForm, flag: &Flag) -> Result<KernelChain, DiagramError> {
    if !is_closed(alg, w) {
        return Err(DiagramError::NotClosed);
    }
    let rep = validate_flag(alg, flag);
    if let Some(msg) = rep.first_failure() {
        return Err(DiagramError::InvalidFlag(msg));
    }
    let g = flag.members().to_vec();
    let h = map_range(exec, g.len(), |k| w.radical(&g[k]));
    let mut steps = Vec::with_capacity(g.len().saturating_sub(1));
    for k in 0..g.len().saturating_sub(1) {
        let (a, b) = (&h[k], &h[k + 1]);
        if b.dim() == a.dim() + 1 && b.contains_space(a) {
            steps.push(Step::Up);
        } else if a.dim() == b.dim() + 1 && a.contains_space(b) {
            steps.push(Step::Down);
        } else {
            return Err(DiagramError::NestingViolation(k));
        }
    }
    Ok(KernelChain { g, h, steps })
}

pub fn classify_vertices(chain: &KernelChain) -> WeightedDiagram {
    let n = chain.g.len();
    let vertices = (0..n)
        .map(|k| {
            let class = if k == 0 {
                VertexClass::EndpointLeft
            } else if k + 1 == n {
                VertexClass::EndpointRight
            } else {
                match (chain.steps[k - 1], chain.steps[k]) {
                    (Step::Down, Step::Down) => VertexClass::RegularNonReducible,
                    (Step::Up, Step::Up) => VertexClass::RegularReducible,
                    (Step::Up, Step::Down) => VertexClass::SingularAttractive,
                    (Step::Down, Step::Up) => VertexClass::SingularRepulsive,
                }
            };
            Vertex {
                index: k,
                g: chain.g[k].clone(),
                h: chain.h[k].clone(),
                weight: weight(chain.g[k].dim(), chain.h[k].dim()),
                class,
            }
        })
        .collect();
    WeightedDiagram { vertices, steps: chain.steps.clone() }
}

/// Kernel chain and classification in one call.
pub fn diagram(alg: &LieAlgebra, w: &TwoForm, flag: &Flag) -> Result<WeightedDiagram, DiagramError> {
    Ok(classify_vertices(&kernel_chain(alg, w, flag)?))
}

impl WeightedDiagram {
    pub fn singular(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.iter().filter(|v| v.class.is_singular())
    }

    pub fn singular_count(&self) -> usize {
        self.singular().count()
    }

    /// Singular vertices of weight zero (component boundaries).
    pub fn weight_zero_singular(&self) -> impl Iterator<Item = &Vertex> {
        self.singular().filter(|v| v.weight.is_zero())
    }

    /// Connected with a single singular vertex, which is attractive.
    pub fn is_simple(&self) -> bool {
        let mut s = self.singular();
        self.weight_zero_singular().next().is_none()
            && matches!((s.next(), s.next()), (Some(v), None) if v.class == VertexClass::SingularAttractive)
    }

    pub fn kernel_dims(&self) -> Vec<usize> {
        self.vertices.iter().map(|v| v.h.dim()).collect()
    }

    /// Index ranges [a, b] of the components, sharing boundary vertices.
    pub fn components(&self) -> Vec<(usize, usize)> {
        let last = self.vertices.len().saturating_sub(1);
        let mut cuts: Vec<usize> = self.weight_zero_singular().map(|v| v.index).collect();
        cuts.insert(0, 0);
        cuts.push(last);
        cuts.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunItem {
    Run(Step, usize),
    Singular(usize, VertexClass),
}

/// Run-length form: maximal step runs separated by the singular vertex where
/// the direction flips. Run length counts steps.
pub fn contract(d: &WeightedDiagram) -> Vec<RunItem> {
    let mut out = Vec::new();
    let mut k = 0;
    while k < d.steps.len() {
        let dir = d.steps[k];
        let start = k;
        while k < d.steps.len() && d.steps[k] == dir {
            k += 1;
        }
        out.push(RunItem::Run(dir, k - start));
        if k < d.steps.len() {
            out.push(RunItem::Singular(k, d.vertices[k].class));
        }
    }
    out
}

pub fn uncontract(items: &[RunItem]) -> Vec<Step> {
    items
        .iter()
        .flat_map(|it| match it {
            RunItem::Run(s, n) => vec![*s; *n],
            RunItem::Singular(..) => Vec::new(),
        })
        .collect()
}

pub struct Contracted<'a>(pub &'a [RunItem]);

impl fmt::Display for Contracted<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, it) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match it {
                RunItem::Run(s, n) => write!(f, "[{:?}x{}]", s, n)?,
                RunItem::Singular(k, c) => write!(f, "S{}:{}", k, c.label())?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Predicates {
    pub connected: bool,
    pub simple: bool,
    pub semi_normal: bool,
    pub semi_simple: bool,
    pub semi_nilpotent: bool,
}

pub fn predicates(alg: &LieAlgebra, d: &WeightedDiagram) -> Predicates {
    let zero: Vec<&Vertex> = d.weight_zero_singular().collect();
    let connected = zero.is_empty();
    let singular: Vec<&Vertex> = d.singular().collect();
    let simple = d.is_simple();
    let semi_normal = zero.iter().all(|v| alg.is_ideal(&v.g));
    let semi_nilpotent = zero.iter().all(|v| alg.is_nilpotent_subalgebra(&v.g));
    let components_simple = d.components().iter().all(|&(a, b)| {
        let inner: Vec<&&Vertex> = singular.iter().filter(|v| v.index > a && v.index < b).collect();
        inner.len() == 1 && inner[0].class == VertexClass::SingularAttractive
    });
    Predicates { connected, simple, semi_normal, semi_simple: semi_normal && components_simple, semi_nilpotent }
}

/// Multiset of singular (g_k, h_k) pairs, sorted.
pub fn equivalence_key(d: &WeightedDiagram) -> Vec<(Subspace, Subspace)> {
    let mut key: Vec<(Subspace, Subspace)> = d.singular().map(|v| (v.g.clone(), v.h.clone())).collect();
    key.sort();
    key
}

pub fn equivalent(a: &WeightedDiagram, b: &WeightedDiagram) -> bool {
    equivalence_key(a) == equivalence_key(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Template {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Disconnected,
    Other,
}

impl Template {
    pub fn label(self) -> &'static str {
        match self {
            Template::Alpha => "alpha",
            Template::Beta => "beta",
            Template::Gamma => "gamma",
            Template::Delta => "delta",
            Template::Disconnected => "disconnected",
            Template::Other => "other",
        }
    }
}

pub fn match_template(d: &WeightedDiagram) -> Template {
    if d.weight_zero_singular().next().is_some() {
        return Template::Disconnected;
    }
    let dirs: Vec<Step> = contract(d)
        .iter()
        .filter_map(|it| match it {
            RunItem::Run(s, _) => Some(*s),
            RunItem::Singular(..) => None,
        })
        .collect();
    use Step::{Down as D, Up as U};
    match dirs.as_slice() {
        [U, D, U, D, U] => Template::Alpha,
        [U, D, U, D] => Template::Beta,
        [U, D, U] => Template::Gamma,
        [U, D] => Template::Delta,
        _ => Template::Other,
    }
}
