//! Determining matrices `Q(t; s)` for a fixed pair `(A, B)`.
//!
//! `Q` is generated by
//!
//! ```text
//! Q(t+1; s) = A Q(t; s) + B Q(t; s-1),   Q(0; s) = Θ,  Q(1; 0) = I,
//! ```
//!
//! and `Q(t; s) = Θ` outside `0 <= s <= t-1`. Entry `Q(t+1; s)` is the sum of
//! every ordered word of length `t` in `A` and `B` with exactly `s` factors
//! of `B`, so summing a row recovers `(A + B)^t` without commutativity.

use crate::algebra::{binomial, Matrix, NormKind, Scalar};
use crate::error::{Error, Result};

/// Memoized triangular table of determining matrices.
///
/// Rows are grown on demand by [`DeterminingTable::build_to`]; once built,
/// lookups through [`DeterminingTable::get`] take `&self`.
#[derive(Clone, Debug)]
pub struct DeterminingTable<S> {
    a: Matrix<S>,
    b: Matrix<S>,
    zero: Matrix<S>,
    // rows[t][s] = Q(t; s) for 0 <= s < t; rows[0] is empty.
    rows: Vec<Vec<Matrix<S>>>,
}

impl<S: Scalar> DeterminingTable<S> {
    pub fn new(a: Matrix<S>, b: Matrix<S>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                what: "A",
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if a.shape() != b.shape() {
            return Err(Error::DimensionMismatch {
                op: "determining table",
                left: a.shape(),
                right: b.shape(),
            });
        }
        let d = a.rows();
        Ok(DeterminingTable {
            zero: Matrix::zero(d),
            rows: vec![Vec::new(), vec![Matrix::identity(d)]],
            a,
            b,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &Matrix<S> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<S> {
        &self.b
    }

    /// Largest `t` for which row `Q(t; ·)` is materialized.
    pub fn t_max_built(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn build_to(&mut self, t_max: usize) {
        while self.rows.len() <= t_max {
            let prev = self.rows.last().expect("row 1 always present");
            let t = prev.len(); // prev holds Q(t; 0..t)
            let next: Vec<Matrix<S>> = (0..=t)
                .map(|s| {
                    let mut q = match prev.get(s) {
                        Some(p) => &self.a * p,
                        None => Matrix::zero(self.dim()),
                    };
                    if s >= 1 {
                        let shifted = &self.b * &prev[s - 1];
                        q = &q + &shifted;
                    }
                    q
                })
                .collect();
            self.rows.push(next);
        }
    }

    /// `Q(t; s)` if row `t` has been built, including Θ outside the support.
    pub fn get(&self, t: usize, s: i64) -> Option<&Matrix<S>> {
        let row = self.rows.get(t)?;
        Some(
            usize::try_from(s)
                .ok()
                .and_then(|s| row.get(s))
                .unwrap_or(&self.zero),
        )
    }

    /// `Q(t; s)`, building every row up to `t` first.
    pub fn q_eval(&mut self, t: usize, s: i64) -> Matrix<S> {
        self.build_to(t);
        self.get(t, s).expect("row built").clone()
    }

    /// `Σ_{i=0}^{t} Q(t+1; i)`, which equals `(A + B)^t`.
    pub fn nc_binomial_power(&mut self, t: usize) -> Matrix<S> {
        self.build_to(t + 1);
        self.rows[t + 1]
            .iter()
            .fold(Matrix::zero(self.dim()), |acc, q| &acc + q)
    }

    /// Majorant `binom(l, i) ‖A‖^{l-i} ‖B‖^i` of `‖Q(l+1; i)‖`.
    pub fn q_norm_bound(&self, l: i64, i: i64, kind: NormKind) -> S {
        norm_bound_term(&self.a.norm(kind), &self.b.norm(kind), l, i)
    }
}

pub(crate) fn norm_bound_term<S: Scalar>(norm_a: &S, norm_b: &S, l: i64, i: i64) -> S {
    let c = binomial(l, i);
    if num_traits::Zero::is_zero(&c) {
        return S::zero();
    }
    S::from_integer(&c) * norm_a.pow((l - i) as u32) * norm_b.pow(i as u32)
}

/// Closed form of `Q(t+1; j)` for commuting `A`, `B`:
/// `binom(t, j) A^{t-j} B^j σ(t-j)`.
pub fn commutative_q<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>, t: usize, j: i64) -> Result<Matrix<S>> {
    if !a.commutes_with(b)? {
        return Err(Error::NotCommuting);
    }
    let d = a.rows();
    if j < 0 || j > t as i64 {
        return Ok(Matrix::zero(d));
    }
    let j = j as u32;
    let c = S::from_integer(&binomial(t as i64, j as i64));
    let word = &a.pow(t as u32 - j)? * &b.pow(j)?;
    Ok(word.scale(&c))
}
