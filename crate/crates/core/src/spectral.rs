//! Characteristic polynomials, rational roots, joint eigenspaces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::{is_zero, mat_mul, nullspace, Matrix, Rational, Subspace};

/// Coefficients of det(xI − A), lowest degree first; monic.
pub fn char_poly(a: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.len();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut m: Matrix = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        m = mat_mul(a, &m);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        let am = mat_mul(a, &m);
        let tr: Rational = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -tr / Rational::from_integer(BigInt::from(k));
    }
    c
}

pub fn eval_poly(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn deflate(p: &[Rational], r: &Rational) -> Vec<Rational> {
    let deg = p.len() - 1;
    let mut out = vec![Rational::zero(); deg];
    let mut carry = Rational::zero();
    for i in (1..=deg).rev() {
        carry = &p[i] + carry * r;
        out[i - 1] = carry.clone();
    }
    out
}

const TRIAL_LIMIT: u64 = 1_000_000;

fn prime_factors(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d: u64 = 2;
    while d <= TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            out.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    // any cofactor left after the trial bound is taken as prime
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut ds = vec![BigInt::one()];
    for (p, e) in prime_factors(n) {
        let mut next = Vec::with_capacity(ds.len() * (e as usize + 1));
        for d in &ds {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        ds = next;
    }
    ds
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalRoots {
    /// Distinct rational roots, ascending.
    pub roots: Vec<Rational>,
    /// Whether the polynomial splits into rational linear factors.
    pub split: bool,
}

pub fn rational_roots(p: &[Rational]) -> RationalRoots {
    let mut p: Vec<Rational> = p.to_vec();
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let mut roots = Vec::new();
    if p.len() <= 1 {
        return RationalRoots { roots, split: true };
    }
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        roots.push(Rational::zero());
        p = p[low..].to_vec();
    }
    let ints = &ints[low..];
    let mut remaining = p;
    if remaining.len() > 1 {
        let lead = ints.last().cloned().unwrap_or_else(BigInt::one);
        let num_divs = divisors(&ints[0]);
        let den_divs = divisors(&lead);
        let mut cands: Vec<Rational> = Vec::new();
        for a in &num_divs {
            for b in &den_divs {
                let r = BigRational::new(a.clone(), b.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for r in cands {
            if remaining.len() <= 1 {
                break;
            }
            let mut hit = false;
            while remaining.len() > 1 && eval_poly(&remaining, &r).is_zero() {
                remaining = deflate(&remaining, &r);
                hit = true;
            }
            if hit {
                roots.push(r);
            }
        }
    }
    roots.sort();
    RationalRoots { roots, split: remaining.len() <= 1 }
}

/// Joint eigenspaces of a family of operators on Q^n (nonzero intersections of
/// eigenspaces over rational eigenvalues).
#[derive(Clone, Debug)]
pub struct JointEigen {
    pub spaces: Vec<Subspace>,
    pub all_split: bool,
}

pub fn joint_eigenspaces(mats: &[Matrix], n: usize) -> JointEigen {
    let mut spaces = vec![Subspace::full(n)];
    let mut all_split = true;
    for a in mats {
        if a.iter().all(|row| is_zero(row)) {
            continue;
        }
        let rr = rational_roots(&char_poly(a));
        all_split &= rr.split;
        let kernels: Vec<Subspace> = rr
            .roots
            .iter()
            .map(|lam| {
                let shifted: Matrix = a
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        let mut r = row.clone();
                        r[i] -= lam;
                        r
                    })
                    .collect();
                Subspace::span(n, nullspace(&shifted, n))
            })
            .collect();
        let mut next = Vec::new();
        for v in &spaces {
            for k in &kernels {
                let w = v.intersect(k);
                if !w.is_zero() {
                    next.push(w);
                }
            }
        }
        spaces = next;
        if spaces.is_empty() {
            break;
        }
    }
    spaces.sort();
    JointEigen { spaces, all_split }
}

/// Common eigenvector candidates: the echelon rows of every joint eigenspace.
pub fn eigenvector_candidates(je: &JointEigen) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = je.spaces.iter().flat_map(|s| s.basis().to_vec()).collect();
    out.sort_by(|a, b| {
        let la = Subspace::span(a.len(), vec![a.clone()]);
        let lb = Subspace::span(b.len(), vec![b.clone()]);
        la.cmp(&lb)
    });
    out
}
