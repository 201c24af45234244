//! Exact rational vectors, row reduction and canonical subspaces.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;
pub type Vector = Vec<Rational>;
/// Row-major matrix; `m[i][j]` is the i-th coordinate of the image of e_j.
pub type Matrix = Vec<Vector>;

pub fn q(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_vec(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| q(x)).collect()
}

pub fn zero_vec(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

pub fn is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(v: &[Rational], c: &Rational) -> Vector {
    v.iter().map(|x| x * c).collect()
}

/// `y += c * x`
pub fn axpy(y: &mut [Rational], c: &Rational, x: &[Rational]) {
    if c.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += c * xi;
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub fn mat_vec(m: &[Vector], v: &[Rational]) -> Vector {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &[Vector], b: &[Vector]) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = zero_vec(cols);
            for (k, aik) in row.iter().enumerate() {
                axpy(&mut out, aik, &b[k]);
            }
            out
        })
        .collect()
}

pub fn transpose(m: &[Vector], ncols: usize) -> Matrix {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| unit_vec(n, i)).collect()
}

/// Reduced row echelon form: the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vector>, ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let c = -row[col].clone();
                axpy(row, &c, &pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: &[Vector], ncols: usize) -> usize {
    rref(rows.to_vec(), ncols).1.len()
}

/// Basis of `{x : row . x = 0 for every row}`.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let (r, pivots) = rref(rows.to_vec(), ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = zero_vec(ncols);
            x[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// One solution of `A x = b` (free variables set to zero), if any.
pub fn solve(a: &[Vector], b: &[Rational], ncols: usize) -> Option<Vector> {
    let aug: Vec<Vector> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = zero_vec(ncols);
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// A linear subspace held in its unique reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, rows: identity(ambient), pivots: (0..ambient).collect() }
    }

    pub fn span<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vector>,
    {
        let rows: Vec<Vector> = vectors.into_iter().collect();
        debug_assert!(rows.iter().all(|r| r.len() == ambient));
        let (rows, pivots) = rref(rows, ambient);
        Subspace { ambient, rows, pivots }
    }

    /// Span of standard basis vectors.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        Self::span(ambient, indices.iter().map(|&i| unit_vec(ambient, i)))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns without a pivot; the unit vectors on them span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Canonical representative of `v` modulo this subspace (zero on pivots).
    pub fn reduce(&self, v: &[Rational]) -> Vector {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !out[p].is_zero() {
                let c = -out[p].clone();
                axpy(&mut out, &c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        is_zero(&self.reduce(v))
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn is_within(&self, other: &Subspace) -> bool {
        other.contains_space(self)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Self::span(self.ambient, self.rows.iter().chain(&other.rows).cloned())
    }

    pub fn with_vector(&self, v: &[Rational]) -> Subspace {
        Self::span(self.ambient, self.rows.iter().cloned().chain(std::iter::once(v.to_vec())))
    }

    /// Covectors vanishing on the subspace.
    pub fn annihilator(&self) -> Subspace {
        Self::span(self.ambient, nullspace(&self.rows, self.ambient))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let eqs: Vec<Vector> = self
            .annihilator()
            .rows
            .into_iter()
            .chain(other.annihilator().rows)
            .collect();
        Self::span(self.ambient, nullspace(&eqs, self.ambient))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[Rational]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn from_coords(&self, c: &[Rational]) -> Vector {
        let mut out = zero_vec(self.ambient);
        for (ci, row) in c.iter().zip(&self.rows) {
            axpy(&mut out, ci, row);
        }
        out
    }

    /// Canonical basis of a complement of `inner` inside `self`.
    pub fn complement_basis(&self, inner: &Subspace) -> Vec<Vector> {
        let reduced: Vec<Vector> = self.rows.iter().map(|r| inner.reduce(r)).collect();
        rref(reduced, self.ambient).0
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then(self.dim().cmp(&other.dim()))
            .then_with(|| self.pivots.cmp(&other.pivots))
            .then_with(|| self.rows.cmp(&other.rows))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}
