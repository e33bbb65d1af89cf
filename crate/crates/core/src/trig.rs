//! Delayed discrete matrix sine and cosine.
//!
//! For a delay `m >= 1`,
//!
//! ```text
//! Sin(t) = Σ_{l>=0} Σ_{0<=i<=l} (-1)^l binom(t - i m, 2l + 1) Q(l+1; i)
//! Cos(t) = Σ_{l>=0} Σ_{0<=i<=l} (-1)^l binom(t - i m, 2l)     Q(l+1; i)
//! ```
//!
//! Only finitely many terms are nonzero: `binom(t - i m, 2l)` vanishes once
//! `2l > t - i m`, so the cosine needs `l <= t/2` and `i <= (t - 2l)/m`, and the
//! sine `l <= (t-1)/2` and `i <= (t - 2l - 1)/m`. With `binom(a, b) = 0` for
//! `a < 0` both functions are defined on all of `Z`, vanishing for `t < 0`
//! (and `Sin(0) = Θ`).

use crate::algebra::{binomial, Matrix, NormKind, Scalar};
use crate::determining::{norm_bound_term, DeterminingTable};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Sin,
    Cos,
}

impl Kind {
    /// Lower index of the binomial for level `l`.
    fn order(self, l: i64) -> i64 {
        match self {
            Kind::Sin => 2 * l + 1,
            Kind::Cos => 2 * l,
        }
    }
}

/// Nonzero index range of the double sum: yields `(l, i_max)` pairs.
fn support(kind: Kind, t: i64, m: i64) -> impl Iterator<Item = (i64, i64)> {
    let top = kind.order(0);
    let l_max = if t < top { -1 } else { (t - top) / 2 };
    (0..=l_max).map(move |l| (l, l.min((t - kind.order(l)) / m)))
}

/// Caching evaluator for `Sin^{A,B}` and `Cos^{A,B}` at a fixed delay.
///
/// Values for `t >= 0` are cached after the first request;
/// [`TrigEvaluator::prepare`] fills the cache up front so that the `&self`
/// accessors can be used afterwards.
#[derive(Clone, Debug)]
pub struct TrigEvaluator<S> {
    table: DeterminingTable<S>,
    m: usize,
    zero: Matrix<S>,
    sin: Vec<Matrix<S>>,
    cos: Vec<Matrix<S>>,
}

impl<S: Scalar> TrigEvaluator<S> {
    pub fn new(a: Matrix<S>, b: Matrix<S>, m: usize) -> Result<Self> {
        Self::from_table(DeterminingTable::new(a, b)?, m)
    }

    pub fn from_table(table: DeterminingTable<S>, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDelay(0));
        }
        Ok(TrigEvaluator {
            zero: Matrix::zero(table.dim()),
            table,
            m,
            sin: Vec::new(),
            cos: Vec::new(),
        })
    }

    pub fn delay(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn table(&self) -> &DeterminingTable<S> {
        &self.table
    }

    pub fn a(&self) -> &Matrix<S> {
        self.table.a()
    }

    pub fn b(&self) -> &Matrix<S> {
        self.table.b()
    }

    /// Fill both caches for every `t <= t_max`.
    pub fn prepare(&mut self, t_max: i64) {
        if t_max < 0 {
            return;
        }
        let t_max = t_max as usize;
        self.table.build_to(t_max / 2 + 1);
        while self.cos.len() <= t_max {
            let t = self.cos.len() as i64;
            let c = self.direct(Kind::Cos, t);
            let s = self.direct(Kind::Sin, t);
            self.cos.push(c);
            self.sin.push(s);
        }
    }

    fn direct(&self, kind: Kind, t: i64) -> Matrix<S> {
        let m = self.m as i64;
        let mut acc = Matrix::zero(self.dim());
        for (l, i_max) in support(kind, t, m) {
            for i in 0..=i_max {
                let mut c = binomial(t - i * m, kind.order(l));
                if l % 2 == 1 {
                    c = -c;
                }
                let q = self
                    .table
                    .get(l as usize + 1, i)
                    .expect("determining table built before summation");
                acc.add_scaled_int(&c, q);
            }
        }
        acc
    }

    fn cached<'a>(&'a self, cache: &'a [Matrix<S>], t: i64) -> Option<&'a Matrix<S>> {
        if t < 0 {
            Some(&self.zero)
        } else {
            cache.get(t as usize)
        }
    }

    /// `Sin(t)` if already cached (always available for `t < 0`).
    pub fn sin_ref(&self, t: i64) -> Option<&Matrix<S>> {
        self.cached(&self.sin, t)
    }

    pub fn cos_ref(&self, t: i64) -> Option<&Matrix<S>> {
        self.cached(&self.cos, t)
    }

    pub fn sin_eval(&mut self, t: i64) -> Matrix<S> {
        self.prepare(t);
        self.sin_ref(t).expect("prepared").clone()
    }

    pub fn cos_eval(&mut self, t: i64) -> Matrix<S> {
        self.prepare(t);
        self.cos_ref(t).expect("prepared").clone()
    }

    /// Norm majorant of `Sin(t)`: the same double sum with every term replaced
    /// by `binom(t - i m, 2l + 1) binom(l, i) ‖A‖^{l-i} ‖B‖^i`.
    pub fn l_s(&self, t: i64, kind: NormKind) -> S {
        self.majorant(Kind::Sin, t, kind)
    }

    /// Norm majorant of `Cos(t)`, analogous to [`TrigEvaluator::l_s`].
    pub fn l_c(&self, t: i64, kind: NormKind) -> S {
        self.majorant(Kind::Cos, t, kind)
    }

    fn majorant(&self, which: Kind, t: i64, kind: NormKind) -> S {
        let (na, nb) = (self.a().norm(kind), self.b().norm(kind));
        let m = self.m as i64;
        let mut acc = S::zero();
        for (l, i_max) in support(which, t, m) {
            for i in 0..=i_max {
                let c = binomial(t - i * m, which.order(l));
                acc = acc + S::from_integer(&c) * norm_bound_term(&na, &nb, l, i);
            }
        }
        acc
    }
}

/// Pure-delay cosine `M_c(t, B, m)`, evaluated piecewise:
/// Θ for `t <= -m-1`, `I` for `-m <= t <= 1`, and on
/// `(l-1)(m+2)+2 <= t <= l(m+2)+1` the alternating sum
/// `Σ_{k=0}^{l} (-1)^k B^k binom(t - (k-1)m, 2k)`.
pub fn mc_eval<S: Scalar>(b: &Matrix<S>, m: usize, t: i64) -> Result<Matrix<S>> {
    pure_delay(b, m, t, Kind::Cos)
}

/// Pure-delay sine `M_s(t, B, m)`: Θ for `t <= -m`, `(t+m) I` for
/// `-m+1 <= t <= 2`, and on `(l-1)(m+2)+3 <= t <= l(m+2)+2` the sum
/// `Σ_{k=0}^{l} (-1)^k B^k binom(t - (k-1)m, 2k+1)`.
pub fn ms_eval<S: Scalar>(b: &Matrix<S>, m: usize, t: i64) -> Result<Matrix<S>> {
    pure_delay(b, m, t, Kind::Sin)
}

fn pure_delay<S: Scalar>(b: &Matrix<S>, m: usize, t: i64, kind: Kind) -> Result<Matrix<S>> {
    if m == 0 {
        return Err(Error::InvalidDelay(0));
    }
    if !b.is_square() {
        return Err(Error::NotSquare {
            what: "B",
            rows: b.rows(),
            cols: b.cols(),
        });
    }
    let d = b.rows();
    let m = m as i64;
    // Offset of the first interval: M_c switches on at t = -m, M_s at t = -m+1.
    let (first, shift) = match kind {
        Kind::Cos => (-m, 1),
        Kind::Sin => (-m + 1, 2),
    };
    if t < first {
        return Ok(Matrix::zero(d));
    }
    let pieces = if t <= shift {
        0
    } else {
        // smallest l with t <= l(m+2) + shift
        (t - shift + m + 1) / (m + 2)
    };
    let mut acc = Matrix::zero(d);
    let mut power = Matrix::identity(d);
    for k in 0..=pieces {
        let mut c = binomial(t - (k - 1) * m, kind.order(k));
        if k % 2 == 1 {
            c = -c;
        }
        acc.add_scaled_int(&c, &power);
        power = &power * b;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    type M = Matrix<Rational>;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn pair() -> (M, M) {
        (
            M::from_i64_rows(&[&[1, 2], &[-1, 3]]).unwrap(),
            M::from_i64_rows(&[&[0, -2], &[1, 1]]).unwrap(),
        )
    }

    #[test]
    fn low_order_values() {
        let (a, b) = pair();
        for m in 1..=4 {
            let mut ev = TrigEvaluator::new(a.clone(), b.clone(), m).unwrap();
            let id = M::identity(2);
            assert!(ev.sin_eval(-3).is_zero());
            assert!(ev.sin_eval(0).is_zero());
            assert_eq!(ev.sin_eval(1), id);
            assert!(ev.cos_eval(-1).is_zero());
            assert_eq!(ev.cos_eval(0), id);
            assert_eq!(ev.cos_eval(1), id);
            assert_eq!(ev.cos_eval(2), &id - &a);
            assert_eq!(ev.sin_eval(3), &id.scale(&r(3)) - &a);
        }
    }

    #[test]
    fn pure_delay_definitions() {
        let (_, b) = pair();
        for m in 1..=4usize {
            let mi = m as i64;
            assert!(mc_eval(&b, m, -mi - 1).unwrap().is_zero());
            assert_eq!(mc_eval(&b, m, -mi).unwrap(), M::identity(2));
            assert_eq!(mc_eval(&b, m, 1).unwrap(), M::identity(2));
            assert_eq!(mc_eval(&b, m, 2).unwrap(), &M::identity(2) - &b);
            assert!(ms_eval(&b, m, -mi).unwrap().is_zero());
            assert_eq!(ms_eval(&b, m, 1).unwrap(), M::identity(2).scale(&r(1 + mi)));
            if m >= 2 {
                assert_eq!(
                    ms_eval(&b, m, 3).unwrap(),
                    &M::identity(2).scale(&r(3 + mi)) - &b
                );
            }
        }
    }

    #[test]
    fn majorant_values() {
        let (a, b) = pair();
        let ev = TrigEvaluator::new(a, b, 2).unwrap();
        assert_eq!(ev.l_s(1, NormKind::Induced1), r(1));
        assert_eq!(ev.l_c(0, NormKind::Induced1), r(1));
        assert_eq!(ev.l_s(0, NormKind::Induced1), r(0));

        let b = M::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        let ev = TrigEvaluator::new(M::zero(2), b, 1).unwrap();
        assert_eq!(ev.l_s(3, NormKind::Induced1), r(3));
    }

    #[test]
    fn cached_refs_require_prepare() {
        let (a, b) = pair();
        let mut ev = TrigEvaluator::new(a, b, 1).unwrap();
        assert!(ev.sin_ref(5).is_none());
        assert!(ev.sin_ref(-5).unwrap().is_zero());
        ev.prepare(5);
        assert!(ev.sin_ref(5).is_some());
        assert!(ev.cos_ref(6).is_none());
    }

    #[test]
    fn cosine_second_difference_has_no_shift() {
        // Δ²Cos(0) = Cos(2) - 2Cos(1) + Cos(0) = -A, while the shifted
        // right-hand side -A Cos(-1) - B Cos(-1-m) vanishes.
        let (a, b) = pair();
        let mut ev = TrigEvaluator::new(a.clone(), b, 2).unwrap();
        let c: Vec<M> = (0..3).map(|t| ev.cos_eval(t)).collect();
        let lhs = &(&(&c[2] - &c[1]) - &c[1]) + &c[0];
        assert_eq!(lhs, -&a);
        assert!(ev.cos_eval(-1).is_zero());
    }

    #[test]
    fn zero_delay_rejected() {
        let (a, b) = pair();
        assert!(matches!(TrigEvaluator::new(a, b.clone(), 0), Err(Error::InvalidDelay(0))));
        assert!(mc_eval(&b, 0, 3).is_err());
    }
}
