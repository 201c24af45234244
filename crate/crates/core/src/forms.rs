//! Left-invariant forms at the algebra level: Chevalley-Eilenberg differential,
//! restriction, radicals and orthogonals.

use num_traits::Zero;

use crate::algebra::LieAlgebra;
use crate::linalg::{dot, mat_vec, nullspace, rank, unit_vec, zero_vec, Matrix, Rational, Subspace, Vector};

/// Alternating bilinear form; `m[i][j] = ω(e_i, e_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoForm {
    m: Matrix,
}

impl TwoForm {
    pub fn zero(n: usize) -> Self {
        TwoForm { m: vec![zero_vec(n); n] }
    }

    /// Sum of `c · e_i* ∧ e_j*` terms.
    pub fn from_pairs(n: usize, terms: &[(usize, usize, Rational)]) -> Self {
        let mut w = Self::zero(n);
        for (i, j, c) in terms {
            w.m[*i][*j] += c;
            w.m[*j][*i] -= c;
        }
        w
    }

    /// Checked constructor from a full matrix.
    pub fn from_matrix(m: Matrix) -> Option<Self> {
        let n = m.len();
        let skew = m.iter().all(|r| r.len() == n)
            && (0..n).all(|i| m[i][i].is_zero() && (0..n).all(|j| m[i][j] == -m[j][i].clone()));
        skew.then_some(TwoForm { m })
    }

    /// φ ∧ ψ for covectors.
    pub fn wedge(phi: &[Rational], psi: &[Rational]) -> Self {
        let n = phi.len();
        let mut w = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                w.m[i][j] = &phi[i] * &psi[j] - &phi[j] * &psi[i];
            }
        }
        w
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.m[i][j]
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Rational {
        dot(x, &mat_vec(&self.m, y))
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn rank(&self) -> usize {
        rank(&self.m, self.dim())
    }

    pub fn add(&self, other: &TwoForm) -> TwoForm {
        let m = self.m.iter().zip(&other.m).map(|(a, b)| crate::linalg::add(a, b)).collect();
        TwoForm { m }
    }

    pub fn scaled(&self, c: &Rational) -> TwoForm {
        TwoForm { m: self.m.iter().map(|r| crate::linalg::scale(r, c)).collect() }
    }

    pub fn neg(&self) -> TwoForm {
        TwoForm { m: self.m.iter().map(|r| r.iter().map(|x| -x).collect()).collect() }
    }

    /// Matrix of ω in the echelon basis of `s`.
    pub fn restrict(&self, s: &Subspace) -> TwoForm {
        let b = s.basis();
        let images: Vec<Vector> = b.iter().map(|y| mat_vec(&self.m, y)).collect();
        let m = b.iter().map(|x| images.iter().map(|wy| dot(x, wy)).collect()).collect();
        TwoForm { m }
    }

    /// `{ξ ∈ s : ω(ξ, η) = 0 for all η ∈ s}`.
    pub fn radical(&self, s: &Subspace) -> Subspace {
        let gram = self.restrict(s);
        let sol = nullspace(&gram.m, s.dim());
        Subspace::span(s.ambient(), sol.iter().map(|a| s.from_coords(a)))
    }

    pub fn kernel(&self) -> Subspace {
        self.radical(&Subspace::full(self.dim()))
    }

    /// `{x : ω(x, s) = 0}` in the ambient space.
    pub fn orthogonal(&self, s: &Subspace) -> Subspace {
        let eqs: Vec<Vector> = s.basis().iter().map(|y| mat_vec(&self.m, y)).collect();
        Subspace::span(self.dim(), nullspace(&eqs, self.dim()))
    }

    pub fn vanishes_on(&self, s: &Subspace) -> bool {
        self.restrict(s).is_zero()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank() == self.dim()
    }
}

/// Alternating trilinear form, stored on triples i < j < k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeForm {
    n: usize,
    coeffs: Vec<((usize, usize, usize), Rational)>,
}

impl ThreeForm {
    fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> Rational) -> Self {
        let mut coeffs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    coeffs.push(((i, j, k), f(i, j, k)));
                }
            }
        }
        ThreeForm { n, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|(_, c)| c.is_zero())
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Rational {
        let mut idx = [i, j, k];
        let mut sign = 1;
        for a in 0..3 {
            for b in 0..2 - a {
                if idx[b] > idx[b + 1] {
                    idx.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        if idx[0] == idx[1] || idx[1] == idx[2] {
            return Rational::zero();
        }
        let key = (idx[0], idx[1], idx[2]);
        let c = self.coeffs.iter().find(|(t, _)| *t == key).map(|(_, c)| c.clone()).unwrap_or_default();
        if sign < 0 { -c } else { c }
    }

    /// Nonzero entries over increasing triples.
    pub fn support(&self) -> Vec<((usize, usize, usize), Rational)> {
        self.coeffs.iter().filter(|(_, c)| !c.is_zero()).cloned().collect()
    }
}

/// dφ(x, y) = −φ([x, y]).
pub fn d_covector(alg: &LieAlgebra, phi: &[Rational]) -> TwoForm {
    let n = alg.dim();
    let mut m = vec![zero_vec(n); n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m[i][j] = -dot(phi, alg.structure(i, j));
            }
        }
    }
    TwoForm { m }
}

/// dω(x, y, z) = −ω([x,y], z) + ω([x,z], y) − ω([y,z], x).
pub fn d_two_form(alg: &LieAlgebra, w: &TwoForm) -> ThreeForm {
    let n = alg.dim();
    let e = |i: usize| unit_vec(n, i);
    ThreeForm::from_fn(n, |i, j, k| {
        -w.eval(alg.structure(i, j), &e(k)) + w.eval(alg.structure(i, k), &e(j)) - w.eval(alg.structure(j, k), &e(i))
    })
}

pub fn is_closed(alg: &LieAlgebra, w: &TwoForm) -> bool {
    d_two_form(alg, w).is_zero()
}

/// α ∧ φ for a 2-form α and a covector φ.
pub fn wedge_two_one(a: &TwoForm, phi: &[Rational]) -> ThreeForm {
    ThreeForm::from_fn(a.dim(), |i, j, k| {
        a.entry(i, j) * &phi[k] - a.entry(i, k) * &phi[j] + a.entry(j, k) * &phi[i]
    })
}

/// Basis of the closed 2-forms (kernel of d on Λ²).
pub fn closed_forms_basis(alg: &LieAlgebra) -> Vec<TwoForm> {
    let n = alg.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let images: Vec<ThreeForm> = pairs
        .iter()
        .map(|&(i, j)| d_two_form(alg, &TwoForm::from_pairs(n, &[(i, j, crate::linalg::q(1))])))
        .collect();
    let triples = images.first().map_or(0, |t| t.coeffs.len());
    let eqs: Vec<Vector> = (0..triples)
        .map(|t| images.iter().map(|img| img.coeffs[t].1.clone()).collect())
        .collect();
    nullspace(&eqs, pairs.len())
        .into_iter()
        .map(|c| {
            let terms: Vec<(usize, usize, Rational)> =
                pairs.iter().zip(c).filter(|(_, x)| !x.is_zero()).map(|(&(i, j), x)| (i, j, x)).collect();
            TwoForm::from_pairs(n, &terms)
        })
        .collect()
}
