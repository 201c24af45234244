//! Canonical connection of a pair of transverse Lagrangian subalgebras, its
//! audit, and its curvature.

use num_traits::Zero;

use crate::algebra::{LieAlgebra, Projection};
use crate::error::BilagrangianError;
use crate::forms::TwoForm;
use crate::lagrangian::{verify_lagrangian, CandidateStatus};
use crate::linalg::{add, axpy, is_zero, solve, sub, unit_vec, zero_vec, Rational, Subspace, Vector};
use crate::par::{map_range, Exec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilagrangianPair {
    pub left: Subspace,
    pub right: Subspace,
}

/// Γ[i][j] = D_{e_i} e_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionTable {
    pub entries: Vec<Vec<Vector>>,
}

impl ConnectionTable {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn apply(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let n = self.dim();
        let mut out = zero_vec(n);
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                axpy(&mut out, &(xi * yj), &self.entries[i][j]);
            }
        }
        out
    }

    /// Copy with one coefficient of D_{e_i} e_j shifted by `delta`.
    pub fn perturbed(&self, i: usize, j: usize, k: usize, delta: &Rational) -> ConnectionTable {
        let mut t = self.clone();
        t.entries[i][j][k] += delta;
        t
    }

    pub fn nonzero(&self) -> Vec<((usize, usize), Vector)> {
        let n = self.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !is_zero(&self.entries[i][j]))
            .map(|(i, j)| ((i, j), self.entries[i][j].clone()))
            .collect()
    }
}

/// Solves ω(D°_X Y, Z) = −ω(Y, [X, Z]) for all Z.
pub fn d_zero(alg: &LieAlgebra, w: &TwoForm, x: &[Rational], y: &[Rational]) -> Result<Vector, BilagrangianError> {
    if !w.is_nondegenerate() {
        return Err(BilagrangianError::DegenerateForm);
    }
    let n = alg.dim();
    // row k: v ↦ ω(v, e_k)
    let rows: Vec<Vector> = (0..n).map(|k| (0..n).map(|i| w.entry(i, k).clone()).collect()).collect();
    let rhs: Vector = (0..n).map(|k| -w.eval(y, &alg.bracket(x, &unit_vec(n, k)))).collect();
    Ok(solve(&rows, &rhs, n).expect("nondegenerate system"))
}

pub fn check_pair(alg: &LieAlgebra, w: &TwoForm, pair: &BilagrangianPair) -> Result<(), BilagrangianError> {
    if !w.is_nondegenerate() {
        return Err(BilagrangianError::DegenerateForm);
    }
    let (l, r) = (&pair.left, &pair.right);
    if !l.intersect(r).is_zero() || l.dim() + r.dim() != alg.dim() {
        return Err(BilagrangianError::NotTransverse);
    }
    for (side, s) in [("left", l), ("right", r)] {
        if let CandidateStatus::Rejected(why) = verify_lagrangian(alg, w, s) {
            return Err(BilagrangianError::NotLagrangian(format!("{side}: {why}")));
        }
    }
    Ok(())
}

struct Splitter<'a> {
    pair: &'a BilagrangianPair,
    cols: Vec<Vector>,
    n: usize,
}

impl<'a> Splitter<'a> {
    fn new(pair: &'a BilagrangianPair) -> Self {
        let n = pair.left.ambient();
        let gens: Vec<&Vector> = pair.left.basis().iter().chain(pair.right.basis()).collect();
        let cols = (0..n).map(|r| gens.iter().map(|g| g[r].clone()).collect()).collect();
        Splitter { pair, cols, n }
    }

    /// (v₁, v₂) with v₁ ∈ left, v₂ ∈ right.
    fn split(&self, v: &[Rational]) -> (Vector, Vector) {
        let co = solve(&self.cols, v, self.n).expect("transverse pair spans g");
        let p = self.pair.left.dim();
        let left = self.pair.left.basis().iter().zip(&co[..p]).fold(zero_vec(self.n), |mut acc, (b, c)| {
            axpy(&mut acc, c, b);
            acc
        });
        let right = sub(v, &left);
        (left, right)
    }
}

pub fn connection(alg: &LieAlgebra, w: &TwoForm, pair: &BilagrangianPair) -> Result<ConnectionTable, BilagrangianError> {
    connection_with(Exec::default(), alg, w, pair)
}

pub fn connection_with(exec: Exec, alg: &LieAlgebra, w: &TwoForm, pair: &BilagrangianPair) -> Result<ConnectionTable, BilagrangianError> {
    check_pair(alg, w, pair)?;
    let n = alg.dim();
    let sp = Splitter::new(pair);
    let flat = map_range(exec, n * n, |ij| {
        let (x1, x2) = sp.split(&unit_vec(n, ij / n));
        let (y1, y2) = sp.split(&unit_vec(n, ij % n));
        let a = add(&d_zero(alg, w, &x1, &y1).expect("checked"), &sp.split(&alg.bracket(&x2, &y1)).0);
        let b = add(&d_zero(alg, w, &x2, &y2).expect("checked"), &sp.split(&alg.bracket(&x1, &y2)).1);
        add(&a, &b)
    });
    let entries = flat.chunks(n).map(<[Vector]>::to_vec).collect();
    Ok(ConnectionTable { entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConnectionAudit {
    pub torsion_free: bool,
    pub parallel_form: bool,
    pub preserves_left: bool,
    pub preserves_right: bool,
}

impl ConnectionAudit {
    pub fn all(&self) -> bool {
        self.torsion_free && self.parallel_form && self.preserves_left && self.preserves_right
    }
}

pub fn audit_connection(alg: &LieAlgebra, w: &TwoForm, pair: &BilagrangianPair, t: &ConnectionTable) -> ConnectionAudit {
    let n = alg.dim();
    let e: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
    let pairs = || (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    let torsion_free = pairs().all(|(i, j)| {
        sub(&t.entries[i][j], &t.entries[j][i]) == alg.bracket(&e[i], &e[j])
    });
    let parallel_form = pairs().all(|(i, j)| {
        (0..n).all(|k| (w.eval(&t.entries[k][i], &e[j]) + w.eval(&e[i], &t.entries[k][j])).is_zero())
    });
    let preserves = |s: &Subspace| (0..n).all(|k| s.basis().iter().all(|v| s.contains(&t.apply(&e[k], v))));
    ConnectionAudit {
        torsion_free,
        parallel_form,
        preserves_left: preserves(&pair.left),
        preserves_right: preserves(&pair.right),
    }
}

/// R(e_i, e_j) e_k, indexed [i][j][k].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureTensor {
    pub values: Vec<Vec<Vec<Vector>>>,
}

impl CurvatureTensor {
    /// Nonzero values with i < j.
    pub fn nonzero(&self) -> Vec<((usize, usize, usize), Vector)> {
        let n = self.values.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    if !is_zero(&self.values[i][j][k]) {
                        out.push(((i, j, k), self.values[i][j][k].clone()));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().flatten().all(|v| is_zero(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flatness {
    pub tensor: CurvatureTensor,
    pub hess_flat: bool,
}

pub fn curvature_flatness(alg: &LieAlgebra, t: &ConnectionTable) -> Flatness {
    curvature_flatness_with(Exec::default(), alg, t)
}

pub fn curvature_flatness_with(exec: Exec, alg: &LieAlgebra, t: &ConnectionTable) -> Flatness {
    let n = alg.dim();
    let e: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
    let values: Vec<Vec<Vec<Vector>>> = map_range(exec, n, |i| {
        (0..n)
            .map(|j| {
                let br = alg.bracket(&e[i], &e[j]);
                (0..n)
                    .map(|k| {
                        let a = t.apply(&e[i], &t.entries[j][k]);
                        let b = t.apply(&e[j], &t.entries[i][k]);
                        sub(&sub(&a, &b), &t.apply(&br, &e[k]))
                    })
                    .collect()
            })
            .collect()
    });
    let tensor = CurvatureTensor { values };
    let hess_flat = tensor.is_zero();
    Flatness { tensor, hess_flat }
}

/// Passes to g / ker ω when the kernel is a nonzero ideal; the form descends.
pub fn reduce_by_kernel(alg: &LieAlgebra, w: &TwoForm) -> Result<(LieAlgebra, TwoForm, Projection), BilagrangianError> {
    let h = w.kernel();
    let (q, proj) = alg.quotient(&h).map_err(|_| BilagrangianError::KernelNotIdeal)?;
    let m = proj.target_dim();
    let mut terms = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let v = w.eval(&proj.lift(&unit_vec(m, a)), &proj.lift(&unit_vec(m, b)));
            if !v.is_zero() {
                terms.push((a, b, v));
            }
        }
    }
    Ok((q, TwoForm::from_pairs(m, &terms), proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, q};

    fn sp(vs: &[&[i64]]) -> Subspace {
        Subspace::span(vs[0].len(), vs.iter().map(|v| int_vec(v)))
    }

    fn d1() -> (LieAlgebra, TwoForm, BilagrangianPair) {
        let alg = LieAlgebra::from_named(&["c", "x", "y", "t"], &[("t", "x", &[("x", 1)]), ("t", "y", &[("y", -1)])]);
        let w = TwoForm::from_pairs(4, &[(1, 2, q(1)), (3, 0, q(1))]);
        let pair = BilagrangianPair { left: sp(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]), right: sp(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]) };
        (alg, w, pair)
    }

    #[test]
    fn d_zero_values_on_d1() {
        let (alg, w, _) = d1();
        let x = int_vec(&[0, 1, 0, 0]);
        assert!(is_zero(&d_zero(&alg, &w, &x, &x).unwrap()));
        let t = int_vec(&[0, 0, 0, 1]);
        let y = int_vec(&[0, 0, 1, 0]);
        assert_eq!(d_zero(&alg, &w, &t, &y).unwrap(), int_vec(&[0, 0, -1, 0]));
    }

    #[test]
    fn d1_connection_matches_oracle() {
        let (alg, w, pair) = d1();
        let t = connection(&alg, &w, &pair).unwrap();
        assert_eq!(
            t.nonzero(),
            vec![((3, 1), int_vec(&[0, 1, 0, 0])), ((3, 2), int_vec(&[0, 0, -1, 0]))]
        );
        assert!(audit_connection(&alg, &w, &pair, &t).all());
        assert!(curvature_flatness(&alg, &t).hess_flat);
        assert!(!audit_connection(&alg, &w, &pair, &t.perturbed(0, 1, 1, &q(1))).torsion_free);
    }

    #[test]
    fn transversality_and_degeneracy_are_checked() {
        let (alg, w, pair) = d1();
        let bad = BilagrangianPair { left: pair.left.clone(), right: pair.left.clone() };
        assert_eq!(connection(&alg, &w, &bad), Err(BilagrangianError::NotTransverse));
        assert_eq!(d_zero(&alg, &TwoForm::zero(4), &int_vec(&[1, 0, 0, 0]), &int_vec(&[1, 0, 0, 0])), Err(BilagrangianError::DegenerateForm));
    }

    #[test]
    fn reduce_by_kernel_on_heisenberg() {
        let alg = LieAlgebra::from_named(&["x", "y", "z"], &[("x", "y", &[("z", 1)])]);
        let w = TwoForm::from_pairs(3, &[(0, 1, q(1))]);
        let (qa, qw, _) = reduce_by_kernel(&alg, &w).unwrap();
        assert_eq!(qa.dim(), 2);
        assert!(qw.is_nondegenerate());
    }
}
