//! Lie algebras given by structure constants, and their structural predicates.

use num_traits::Zero;

use crate::error::AlgebraError;
use crate::flags::Flag;
use crate::linalg::{axpy, is_zero, nullspace, unit_vec, zero_vec, Matrix, Rational, Subspace, Vector};
use crate::spectral::{eigenvector_candidates, joint_eigenspaces};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    names: Vec<String>,
    /// `table[i][j]` is the coefficient vector of [e_i, e_j].
    table: Vec<Vec<Vector>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    Derived,
    LowerCentral,
}

impl LieAlgebra {
    /// Builds an algebra from brackets `[e_i, e_j] = v` for i ≠ j; the
    /// opposite entry is filled by antisymmetry.
    pub fn new(names: Vec<String>, brackets: &[(usize, usize, Vector)]) -> Self {
        let n = names.len();
        let mut table = vec![vec![zero_vec(n); n]; n];
        for (i, j, v) in brackets {
            table[*i][*j] = v.clone();
            table[*j][*i] = v.iter().map(|x| -x).collect();
        }
        LieAlgebra { names, table }
    }

    /// Raw table, kept as given (used to represent invalid inputs).
    pub fn from_table(names: Vec<String>, table: Vec<Vec<Vector>>) -> Self {
        LieAlgebra { names, table }
    }

    /// Convenience constructor: brackets as `(x, y, [(z, coeff)])` over names.
    pub fn from_named(names: &[&str], brackets: &[(&str, &str, &[(&str, i64)])]) -> Self {
        let n = names.len();
        let idx = |s: &str| names.iter().position(|m| *m == s).unwrap_or_else(|| panic!("unknown basis name {s}"));
        let triples: Vec<(usize, usize, Vector)> = brackets
            .iter()
            .map(|(x, y, terms)| {
                let mut v = zero_vec(n);
                for (z, c) in terms.iter() {
                    v[idx(z)] += crate::linalg::q(*c);
                }
                (idx(x), idx(y), v)
            })
            .collect();
        Self::new(names.iter().map(|s| s.to_string()).collect(), &triples)
    }

    pub fn abelian(n: usize) -> Self {
        let names = (0..n).map(|i| format!("e{}", i + 1)).collect();
        Self::new(names, &[])
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn structure(&self, i: usize, j: usize) -> &Vector {
        &self.table[i][j]
    }

    pub fn basis_vector(&self, name: &str) -> Option<Vector> {
        self.index_of(name).map(|i| unit_vec(self.dim(), i))
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let n = self.dim();
        let mut out = zero_vec(n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                axpy(&mut out, &(xi * yj), &self.table[i][j]);
            }
        }
        out
    }

    /// Matrix of ad_x (column j = [x, e_j]).
    pub fn ad(&self, x: &[Rational]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n).map(|j| self.bracket(x, &unit_vec(n, j))).collect();
        crate::linalg::transpose(&cols, n)
    }

    pub fn bracket_space(&self, s: &Subspace, t: &Subspace) -> Subspace {
        let mut out = Vec::new();
        for x in s.basis() {
            for y in t.basis() {
                let b = self.bracket(x, y);
                if !is_zero(&b) {
                    out.push(b);
                }
            }
        }
        Subspace::span(self.dim(), out)
    }

    pub fn derived(&self) -> Subspace {
        let g = Subspace::full(self.dim());
        self.bracket_space(&g, &g)
    }

    /// Smallest bracket-closed subspace containing the vectors.
    pub fn subalgebra_closure(&self, vectors: &[Vector]) -> Subspace {
        let mut s = Subspace::span(self.dim(), vectors.iter().cloned());
        loop {
            let next = s.sum(&self.bracket_space(&s, &s));
            if next == s {
                return s;
            }
            s = next;
        }
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        let b = s.basis();
        (0..b.len()).all(|i| (i + 1..b.len()).all(|j| s.contains(&self.bracket(&b[i], &b[j]))))
    }

    /// Whether `[t, s] ⊆ s`; requires `s ⊆ t`.
    pub fn is_ideal_in(&self, s: &Subspace, t: &Subspace) -> Result<bool, AlgebraError> {
        if !t.contains_space(s) {
            return Err(AlgebraError::SubspaceNotNested);
        }
        Ok(t.basis().iter().all(|x| s.basis().iter().all(|y| s.contains(&self.bracket(x, y)))))
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        let n = self.dim();
        (0..n).all(|i| s.basis().iter().all(|y| s.contains(&self.bracket(&unit_vec(n, i), y))))
    }

    /// `{x ∈ t : [x, s] ⊆ s}`; requires `s ⊆ t`.
    pub fn normalizer_in(&self, s: &Subspace, t: &Subspace) -> Result<Subspace, AlgebraError> {
        if !t.contains_space(s) {
            return Err(AlgebraError::SubspaceNotNested);
        }
        let tb = t.basis();
        // unknowns a_i with x = Σ a_i t_i; each pair (s_j, coordinate c) gives one equation
        let reduced: Vec<Vec<Vector>> = tb
            .iter()
            .map(|ti| s.basis().iter().map(|sj| s.reduce(&self.bracket(ti, sj))).collect())
            .collect();
        let mut eqs = Vec::new();
        for j in 0..s.dim() {
            for c in 0..self.dim() {
                let row: Vector = (0..tb.len()).map(|i| reduced[i][j][c].clone()).collect();
                if !is_zero(&row) {
                    eqs.push(row);
                }
            }
        }
        let sol = nullspace(&eqs, tb.len());
        Ok(Subspace::span(self.dim(), sol.iter().map(|a| t.from_coords(a))))
    }

    /// Smallest ideal of the algebra containing `s`.
    pub fn ideal_closure(&self, s: &Subspace) -> Subspace {
        let g = Subspace::full(self.dim());
        let mut cur = s.clone();
        loop {
            let next = cur.sum(&self.bracket_space(&g, &cur));
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Derived or lower central series of the whole algebra.
    pub fn series(&self, kind: SeriesKind) -> Vec<Subspace> {
        self.series_of(&Subspace::full(self.dim()), kind)
    }

    /// Series of the subalgebra `s`, stopping when a term repeats.
    pub fn series_of(&self, s: &Subspace, kind: SeriesKind) -> Vec<Subspace> {
        let mut out = vec![s.clone()];
        loop {
            let last = out.last().cloned().unwrap_or_else(|| s.clone());
            let next = match kind {
                SeriesKind::Derived => self.bracket_space(&last, &last),
                SeriesKind::LowerCentral => self.bracket_space(s, &last),
            };
            if next == last {
                return out;
            }
            let done = next.is_zero();
            out.push(next);
            if done {
                return out;
            }
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_nilpotent_subalgebra(&Subspace::full(self.dim()))
    }

    pub fn is_solvable(&self) -> bool {
        self.series(SeriesKind::Derived).last().is_some_and(Subspace::is_zero)
    }

    pub fn is_nilpotent_subalgebra(&self, s: &Subspace) -> bool {
        self.series_of(s, SeriesKind::LowerCentral).last().is_some_and(Subspace::is_zero)
    }

    pub fn is_abelian(&self) -> bool {
        self.derived().is_zero()
    }

    /// Quotient by an ideal, realized on the unit vectors of the free columns.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(LieAlgebra, Projection), AlgebraError> {
        if !self.is_ideal(ideal) {
            return Err(AlgebraError::NotAnIdeal);
        }
        let proj = Projection { ideal: ideal.clone(), free: ideal.free_columns() };
        let m = proj.free.len();
        let names = proj.free.iter().map(|&i| self.names[i].clone()).collect();
        let mut table = vec![vec![zero_vec(m); m]; m];
        for a in 0..m {
            for b in 0..m {
                let br = &self.table[proj.free[a]][proj.free[b]];
                table[a][b] = proj.apply(br);
            }
        }
        Ok((LieAlgebra { names, table }, proj))
    }

    /// The subalgebra `s` as an algebra on its echelon basis.
    pub fn restrict_to(&self, s: &Subspace) -> Result<LieAlgebra, AlgebraError> {
        if !self.is_subalgebra(s) {
            return Err(AlgebraError::NotSubalgebra);
        }
        let b = s.basis();
        let m = b.len();
        let mut table = vec![vec![zero_vec(m); m]; m];
        for i in 0..m {
            for j in 0..m {
                table[i][j] = s.coords(&self.bracket(&b[i], &b[j])).ok_or(AlgebraError::NotSubalgebra)?;
            }
        }
        let names = (0..m).map(|i| format!("s{}", i + 1)).collect();
        Ok(LieAlgebra { names, table })
    }
}

/// Linear projection g → g/I onto the free coordinates of I's echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    ideal: Subspace,
    free: Vec<usize>,
}

impl Projection {
    pub fn apply(&self, v: &[Rational]) -> Vector {
        let r = self.ideal.reduce(v);
        self.free.iter().map(|&i| r[i].clone()).collect()
    }

    pub fn lift(&self, w: &[Rational]) -> Vector {
        let mut v = zero_vec(self.ideal.ambient());
        for (&i, x) in self.free.iter().zip(w) {
            v[i] = x.clone();
        }
        v
    }

    pub fn kernel(&self) -> &Subspace {
        &self.ideal
    }

    pub fn target_dim(&self) -> usize {
        self.free.len()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraReport {
    /// Pairs (i, j), i < j, with c[i][j] ≠ −c[j][i], plus (i, i) with c[i][i] ≠ 0.
    pub antisymmetry: Vec<(usize, usize)>,
    /// Triples i < j < k where the Jacobi sum is nonzero.
    pub jacobi: Vec<(usize, usize, usize)>,
}

impl AlgebraReport {
    pub fn is_ok(&self) -> bool {
        self.antisymmetry.is_empty() && self.jacobi.is_empty()
    }
}

pub fn validate_algebra(alg: &LieAlgebra) -> AlgebraReport {
    let n = alg.dim();
    let mut rep = AlgebraReport::default();
    for i in 0..n {
        for j in i..n {
            let sum: Vector = alg.table[i][j].iter().zip(&alg.table[j][i]).map(|(a, b)| a + b).collect();
            if !is_zero(&sum) {
                rep.antisymmetry.push((i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (x, y, z) = (unit_vec(n, i), unit_vec(n, j), unit_vec(n, k));
                let a = alg.bracket(&alg.bracket(&x, &y), &z);
                let b = alg.bracket(&alg.bracket(&y, &z), &x);
                let c = alg.bracket(&alg.bracket(&z, &x), &y);
                let s: Vector = a.iter().zip(&b).zip(&c).map(|((p, q), r)| p + q + r).collect();
                if !is_zero(&s) {
                    rep.jacobi.push((i, j, k));
                }
            }
        }
    }
    rep
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructurePredicates {
    pub is_subalgebra: bool,
    pub is_ideal_in: bool,
    pub normalizer: Subspace,
}

pub fn structure_predicates(alg: &LieAlgebra, s: &Subspace, t: &Subspace) -> Result<StructurePredicates, AlgebraError> {
    Ok(StructurePredicates {
        is_subalgebra: alg.is_subalgebra(s),
        is_ideal_in: alg.is_ideal_in(s, t)?,
        normalizer: alg.normalizer_in(s, t)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solvability {
    CompletelySolvable(Flag),
    NotSolvable,
    UndecidedIrrationalSpectrum,
}

pub(crate) enum Descent {
    Found(Vec<Subspace>),
    Stuck,
    Irrational,
}

/// Chain of ideals 0 ⊂ I_1 ⊂ … ⊂ g, one rational common eigenvector of the
/// quotient action at a time. `choose` picks among canonical candidates.
pub(crate) fn ideal_descent(alg: &LieAlgebra, choose: &mut dyn FnMut(usize) -> usize) -> Descent {
    let n = alg.dim();
    let mut chain = vec![Subspace::zero(n)];
    let mut cur = Subspace::zero(n);
    while cur.dim() < n {
        let Ok((quot, proj)) = alg.quotient(&cur) else {
            return Descent::Stuck;
        };
        let m = quot.dim();
        let mats: Vec<Matrix> = (0..m).map(|i| quot.ad(&unit_vec(m, i))).collect();
        let je = joint_eigenspaces(&mats, m);
        let cands = eigenvector_candidates(&je);
        if cands.is_empty() {
            return if je.all_split { Descent::Stuck } else { Descent::Irrational };
        }
        let mut ideals: Vec<Subspace> = cands.iter().map(|v| cur.with_vector(&proj.lift(v))).collect();
        ideals.sort();
        ideals.dedup();
        let pick = choose(ideals.len()).min(ideals.len() - 1);
        cur = ideals.swap_remove(pick);
        chain.push(cur.clone());
    }
    Descent::Found(chain)
}

pub fn complete_solvability_certificate(alg: &LieAlgebra) -> Solvability {
    if !alg.is_solvable() {
        return Solvability::NotSolvable;
    }
    match ideal_descent(alg, &mut |_| 0) {
        Descent::Found(members) => Solvability::CompletelySolvable(Flag::new(members)),
        Descent::Stuck | Descent::Irrational => Solvability::UndecidedIrrationalSpectrum,
    }
}
