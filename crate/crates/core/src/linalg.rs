//! Exact rational vectors and matrices, and the subspace primitives the
//! projection lattice is built on.
//!
//! Everything here works over `BigRational`, so results never carry rounding
//! error: a kernel vector `k` of `M` satisfies `M·k = 0` exactly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = BigRational;

/// A column vector of exact rationals.
pub type Vector = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::InvalidRational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    (0..n)
        .map(|j| if i == j { rat(1) } else { rat(0) })
        .collect()
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = rat(1);
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vector>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix {
            rows: nrows,
            cols,
            data,
        }
    }

    /// Convenience constructor from small integers, mainly for tests.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes for product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        assert_eq!(self.cols, v.len(), "incompatible shapes for product");
        self.rows().map(|r| dot(r, v)).collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = rat(1);
        }
        let (red, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = red[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

/// Reduced row-echelon form and pivot columns. The row space is preserved;
/// zero rows are kept (at the bottom) so the shape is unchanged.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = a[(row, col)].recip();
        for j in col..a.cols {
            let v = &a[(row, j)] * &inv;
            a[(row, j)] = v;
        }
        for r in 0..a.rows {
            if r == row || a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            for j in col..a.cols {
                let delta = &factor * &a[(row, j)];
                a[(r, j)] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// Basis of the null space `{x : M x = 0}`; empty iff `M` is injective.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    let (red, pivots) = rref(m);
    let n = m.ncols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = rat(1);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -red[(r, free)].clone();
            }
            v
        })
        .collect()
}

/// Canonical basis of a span: the nonzero rows of its RREF.
pub fn canonical_basis(span: &[Vector], dim: usize) -> Vec<Vector> {
    if span.is_empty() {
        return Vec::new();
    }
    let (red, pivots) = rref(&Matrix::from_rows(span.to_vec(), dim));
    (0..pivots.len()).map(|i| red.row(i).to_vec()).collect()
}

pub fn span_dimension(span: &[Vector], dim: usize) -> usize {
    if span.is_empty() {
        0
    } else {
        Matrix::from_rows(span.to_vec(), dim).rank()
    }
}

/// Basis of `{v : <v, s> = 0 for all s in span}` under the standard form.
pub fn orthogonal_complement(span: &[Vector], dim: usize) -> Vec<Vector> {
    if span.is_empty() {
        return (0..dim).map(|i| unit_vector(dim, i)).collect();
    }
    kernel_basis(&Matrix::from_rows(span.to_vec(), dim))
}

/// Basis of `span(a) ∩ span(b)`, computed as `(a⊥ + b⊥)⊥`.
pub fn intersect_spans(a: &[Vector], b: &[Vector], dim: usize) -> Vec<Vector> {
    let mut perp = orthogonal_complement(a, dim);
    perp.extend(orthogonal_complement(b, dim));
    orthogonal_complement(&perp, dim)
}

/// Matrix of the orthogonal projection onto `span(basis)`: `B (BᵀB)⁻¹ Bᵀ`
/// where `B` has the basis vectors as columns. `basis` must be independent.
pub fn projection_matrix(basis: &[Vector], dim: usize) -> Matrix {
    if basis.is_empty() {
        return Matrix::zeros(dim, dim);
    }
    let bt = Matrix::from_rows(basis.to_vec(), dim);
    let b = bt.transpose();
    let gram = bt.mul(&b);
    let gram_inv = gram
        .inverse()
        .expect("Gram matrix of an independent family is invertible");
    b.mul(&gram_inv).mul(&bt)
}

/// Incrementally maintained RREF basis of a subspace, for repeated
/// membership tests while a span grows.
#[derive(Clone, Debug, Default)]
pub struct SpanBuilder {
    len: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(len: usize) -> Self {
        SpanBuilder {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    fn reduce(&self, v: &[Rational]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.len);
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span; returns `false` if it was already there.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.len);
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, r);
        self.pivots.insert(at, p);
        true
    }
}

/// Rescales a nonzero vector to coprime integer entries with a positive
/// leading entry. Used only for display.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map_or(BigInt::one(), |x| {
            if x.is_negative() {
                -BigInt::one()
            } else {
                BigInt::one()
            }
        });
    ints.into_iter().map(|x| x / &g * &sign).collect()
}
