//! Random completely solvable algebras, random closed 2-forms, and the
//! property sweep run over them.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::algebra::LieAlgebra;
use crate::diagram::{classify_vertices, diagram, kernel_chain, VertexClass};
use crate::error::DiagramError;
use crate::flags::{find_normal_flag_with, Flag, NormalFlag};
use crate::forms::{closed_forms_basis, d_covector, d_two_form, TwoForm};
use crate::lagrangian::{lagrangian_to_flag, vergne_candidate};
use crate::linalg::{mat_mul, q, sub, Matrix, Rational, Subspace, Vector};
use crate::par::{map_range, Exec};

pub const MAX_DIM: usize = 6;

fn flatten(m: &Matrix) -> Vector {
    m.iter().flatten().cloned().collect()
}

fn unflatten(v: &[Rational], n: usize) -> Matrix {
    v.chunks(n).map(<[Rational]>::to_vec).collect()
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    ab.iter().zip(&ba).map(|(x, y)| sub(x, y)).collect()
}

/// Lie algebra spanned by the matrices under commutators, on the echelon basis
/// of its span; None when the closure exceeds `max_dim` or is zero.
pub fn matrix_lie_closure(gens: &[Matrix], max_dim: usize) -> Option<LieAlgebra> {
    let n = gens.first()?.len();
    let amb = n * n;
    let mut span = Subspace::span(amb, gens.iter().map(flatten));
    loop {
        let basis: Vec<Matrix> = span.basis().iter().map(|v| unflatten(v, n)).collect();
        let mut grown = span.clone();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                grown = grown.with_vector(&flatten(&commutator(&basis[i], &basis[j])));
                if grown.dim() > max_dim {
                    return None;
                }
            }
        }
        if grown == span {
            break;
        }
        span = grown;
    }
    if span.is_zero() {
        return None;
    }
    let basis: Vec<Matrix> = span.basis().iter().map(|v| unflatten(v, n)).collect();
    let m = basis.len();
    let mut brackets = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let c = span.coords(&flatten(&commutator(&basis[i], &basis[j]))).expect("closed under brackets");
            brackets.push((i, j, c));
        }
    }
    Some(LieAlgebra::new((1..=m).map(|i| format!("e{i}")).collect(), &brackets))
}

/// Closure of two or three random small-integer upper-triangular matrices
/// (strictly upper-triangular for nilpotent algebras).
pub fn random_algebra(rng: &mut impl Rng, nilpotent: bool) -> LieAlgebra {
    loop {
        let n = rng.random_range(3..=4);
        let k = rng.random_range(2..=3);
        let gens: Vec<Matrix> = (0..k)
            .map(|_| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let lo = if nilpotent { i + 1 } else { i };
                                if j >= lo && rng.random_bool(0.6) { q(rng.random_range(-2..=2)) } else { q(0) }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        if let Some(alg) = matrix_lie_closure(&gens, MAX_DIM) {
            if alg.dim() >= 2 {
                return alg;
            }
        }
    }
}

/// Random integer combination of a basis of the closed 2-forms.
pub fn random_closed_form(rng: &mut impl Rng, alg: &LieAlgebra) -> TwoForm {
    closed_forms_basis(alg)
        .iter()
        .fold(TwoForm::zero(alg.dim()), |acc, b| acc.add(&b.scaled(&q(rng.random_range(-2..=2)))))
}

pub fn random_normal_flag(rng: &mut impl Rng, alg: &LieAlgebra) -> Option<Flag> {
    match find_normal_flag_with(alg, &mut |n| rng.random_range(0..n)) {
        NormalFlag::Found(f) => Some(f),
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub nilpotent: bool,
    pub algebra: LieAlgebra,
    pub form: TwoForm,
    pub flag: Flag,
}

pub fn instance(seed: u64) -> Instance {
    let mut rng = StdRng::seed_from_u64(seed);
    let nilpotent = seed % 2 == 1;
    loop {
        let algebra = random_algebra(&mut rng, nilpotent);
        let form = random_closed_form(&mut rng, &algebra);
        if let Some(flag) = random_normal_flag(&mut rng, &algebra) {
            return Instance { seed, nilpotent, algebra, form, flag };
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Property {
    StepDichotomy,
    WeightZeroRepulsive,
    RadicalSubalgebra,
    DSquaredZero,
    VergneSingularBound,
}

impl Property {
    pub fn label(self) -> &'static str {
        match self {
            Property::StepDichotomy => "(a) step dichotomy",
            Property::WeightZeroRepulsive => "(b) weight-zero singular vertices are repulsive",
            Property::RadicalSubalgebra => "(c) radicals are subalgebras",
            Property::DSquaredZero => "(d) d o d = 0",
            Property::VergneSingularBound => "(e) nilpotent flag through the Vergne candidate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub seed: u64,
    pub property: Property,
    pub message: String,
}

pub fn check_instance(inst: &Instance) -> Vec<Failure> {
    let mut out = Vec::new();
    let mut fail = |p: Property, m: String| out.push(Failure { seed: inst.seed, property: p, message: m });
    let (alg, w) = (&inst.algebra, &inst.form);
    let n = alg.dim();
    match kernel_chain(alg, w, &inst.flag) {
        Ok(c) => {
            for k in 0..c.steps.len() {
                let (a, b) = (&c.h[k], &c.h[k + 1]);
                let up = b.contains_space(a) && b.dim() == a.dim() + 1;
                let down = a.contains_space(b) && a.dim() == b.dim() + 1;
                if up == down {
                    fail(Property::StepDichotomy, format!("step {k} is neither Up nor Down"));
                }
            }
            let d = classify_vertices(&c);
            for v in d.weight_zero_singular() {
                if v.class != VertexClass::SingularRepulsive {
                    fail(Property::WeightZeroRepulsive, format!("vertex {} is {}", v.index, v.class.label()));
                }
            }
            for (k, h) in c.h.iter().enumerate() {
                if !alg.is_subalgebra(h) {
                    fail(Property::RadicalSubalgebra, format!("h_{k} is not a subalgebra"));
                }
            }
        }
        Err(DiagramError::NestingViolation(_)) => {}
        Err(e) => fail(Property::StepDichotomy, e.to_string()),
    }
    if !alg.is_subalgebra(&w.kernel()) {
        fail(Property::RadicalSubalgebra, "kernel of the form is not a subalgebra".into());
    }
    for i in 0..n {
        let phi = crate::linalg::unit_vec(n, i);
        if !d_two_form(alg, &d_covector(alg, &phi)).is_zero() {
            fail(Property::DSquaredZero, format!("d(d e{}*) != 0", i + 1));
        }
    }
    if inst.nilpotent {
        let c = vergne_candidate(alg, w, &inst.flag);
        if !c.is_verified() {
            fail(Property::VergneSingularBound, format!("candidate rejected: {:?}", c.status));
        } else {
            match lagrangian_to_flag(alg, w, &c.subspace).map_err(|e| e.to_string()).and_then(|f| diagram(alg, w, &f).map_err(|e| e.to_string())) {
                Ok(d) => {
                    let s: Vec<_> = d.singular().collect();
                    let ok = s.len() <= 2 && (s.len() != 1 || s[0].class == VertexClass::SingularAttractive);
                    if !ok {
                        fail(Property::VergneSingularBound, format!("{} singular vertices", s.len()));
                    }
                }
                Err(e) => fail(Property::VergneSingularBound, e),
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub instances: usize,
    pub nilpotent: usize,
    pub max_dim: usize,
    pub failures: Vec<Failure>,
}

impl SweepReport {
    pub fn failures_of(&self, p: Property) -> usize {
        self.failures.iter().filter(|f| f.property == p).count()
    }
}

pub fn run_sweep(exec: Exec, base_seed: u64, count: usize) -> SweepReport {
    let results = map_range(exec, count, |i| {
        let inst = instance(base_seed.wrapping_add(i as u64));
        (inst.nilpotent, inst.algebra.dim(), check_instance(&inst))
    });
    SweepReport {
        instances: count,
        nilpotent: results.iter().filter(|r| r.0).count(),
        max_dim: results.iter().map(|r| r.1).max().unwrap_or(0),
        failures: results.into_iter().flat_map(|r| r.2).collect(),
    }
}
