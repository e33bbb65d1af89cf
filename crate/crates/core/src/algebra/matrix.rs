//! Dense row-major matrices and vectors over a [`Scalar`] field.

use std::ops::{Add, Index, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Induced operator norm. Both are exactly computable over the rationals and
/// submultiplicative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NormKind {
    /// Maximum absolute column sum; paired with the vector 1-norm.
    #[default]
    Induced1,
    /// Maximum absolute row sum; paired with the vector max-norm.
    InducedInf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S>(Vec<S>);

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    /// The d×d zero matrix Θ.
    pub fn zero(d: usize) -> Self {
        Self::zeros(d, d)
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zero(d);
        for i in 0..d {
            m.data[i * d + i] = S::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[S]) -> Self {
        let d = diag.len();
        let mut m = Self::zero(d);
        for (i, x) in diag.iter().enumerate() {
            m.data[i * d + i] = x.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::Ragged {
                    row: i,
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| S::from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sub")?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let (n, k, p) = (self.rows, self.cols, other.cols);
        let mut data = Vec::with_capacity(n * p);
        for i in 0..n {
            for j in 0..p {
                let mut acc = S::zero();
                for l in 0..k {
                    let a = &self.data[i * k + l];
                    let b = &other.data[l * p + j];
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                data.push(acc);
            }
        }
        Ok(Matrix { rows: n, cols: p, data })
    }

    pub fn checked_mul_vec(&self, v: &Vector<S>) -> Result<Vector<S>> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (v.dim(), 1),
            });
        }
        Ok(Vector(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(v.iter())
                        .fold(S::zero(), |acc, (a, x)| acc + a.clone() * x.clone())
                })
                .collect(),
        ))
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// `self += c * other`, the inner step of every binomial-weighted sum.
    pub fn add_scaled(&mut self, c: &S, other: &Self) {
        assert_eq!(self.shape(), other.shape(), "add_scaled: shape mismatch");
        if c.is_zero() {
            return;
        }
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            if !y.is_zero() {
                *x = x.clone() + c.clone() * y.clone();
            }
        }
    }

    pub fn add_scaled_int(&mut self, c: &BigInt, other: &Self) {
        use num_traits::Zero;
        assert_eq!(self.shape(), other.shape(), "add_scaled_int: shape mismatch");
        if c.is_zero() {
            return;
        }
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            x.add_int_multiple(c, y);
        }
    }

    pub fn pow(&self, exp: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                what: "matrix power base",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..exp {
            acc = &acc * self;
        }
        Ok(acc)
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.checked_mul(other)? == other.checked_mul(self)?)
    }

    pub fn norm(&self, kind: NormKind) -> S {
        match kind {
            NormKind::Induced1 => (0..self.cols)
                .map(|j| {
                    (0..self.rows).fold(S::zero(), |acc, i| acc + self.get(i, j).abs())
                })
                .fold(S::zero(), S::max_of),
            NormKind::InducedInf => (0..self.rows)
                .map(|i| self.row(i).iter().fold(S::zero(), |acc, x| acc + x.abs()))
                .fold(S::zero(), S::max_of),
        }
    }

    /// Largest entrywise absolute value.
    pub fn max_abs(&self) -> S {
        self.data.iter().map(S::abs).fold(S::zero(), S::max_of)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;

    fn add(self, rhs: Self) -> Matrix<S> {
        self.checked_add(rhs).expect("matrix add")
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;

    fn sub(self, rhs: Self) -> Matrix<S> {
        self.checked_sub(rhs).expect("matrix sub")
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    fn mul(self, rhs: Self) -> Matrix<S> {
        self.checked_mul(rhs).expect("matrix mul")
    }
}

impl<S: Scalar> Mul<&Vector<S>> for &Matrix<S> {
    type Output = Vector<S>;

    fn mul(self, rhs: &Vector<S>) -> Vector<S> {
        self.checked_mul_vec(rhs).expect("matrix-vector mul")
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;

    fn neg(self) -> Matrix<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Vector<S> {
    pub fn new(entries: Vec<S>) -> Self {
        Vector(entries)
    }

    pub fn zeros(d: usize) -> Self {
        Vector(vec![S::zero(); d])
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        Vector(entries.iter().map(|&x| S::from_i64(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<S> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(S::is_zero)
    }

    pub fn scale(&self, c: &S) -> Self {
        Vector(self.0.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Vector<T> {
        Vector(self.0.iter().map(f).collect())
    }

    /// Vector norm compatible with the given induced matrix norm.
    pub fn norm(&self, kind: NormKind) -> S {
        match kind {
            NormKind::Induced1 => self.0.iter().fold(S::zero(), |acc, x| acc + x.abs()),
            NormKind::InducedInf => self.max_abs(),
        }
    }

    pub fn max_abs(&self) -> S {
        self.0.iter().map(S::abs).fold(S::zero(), S::max_of)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other, "vector add")?;
        Ok(Vector(
            self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect(),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other, "vector sub")?;
        Ok(Vector(
            self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b.clone()).collect(),
        ))
    }

    fn check_dim(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                op,
                left: (self.dim(), 1),
                right: (other.dim(), 1),
            });
        }
        Ok(())
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;

    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: Scalar> Add for &Vector<S> {
    type Output = Vector<S>;

    fn add(self, rhs: Self) -> Vector<S> {
        self.checked_add(rhs).expect("vector add")
    }
}

impl<S: Scalar> Sub for &Vector<S> {
    type Output = Vector<S>;

    fn sub(self, rhs: Self) -> Vector<S> {
        self.checked_sub(rhs).expect("vector sub")
    }
}

impl<S: Scalar> Neg for &Vector<S> {
    type Output = Vector<S>;

    fn neg(self) -> Vector<S> {
        self.scale(&-S::one())
    }
}
