//! Shared generators and independent reference computations.
//!
//! The references here deliberately avoid the library's matrix type: they
//! work on plain nested `Vec`s so that a bug in `Matrix` cannot hide itself.

#![allow(dead_code)]

use ddelay::{ForcingSpec, Matrix, ProblemSpec, Rational, Scalar, Vector};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

pub type Q = Rational;
pub type M = Matrix<Q>;
pub type Plain = Vec<Vec<Q>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

// ---- random generation (seeded, for the acceptance suite) ----

/// Entry `k / denom` with `k` uniform in `[lo * denom, hi * denom]`.
pub fn rand_entry<R: Rng>(rng: &mut R, lo: i64, hi: i64, denom: i64) -> Q {
    frac(rng.gen_range(lo * denom..=hi * denom), denom)
}

pub fn rand_matrix<R: Rng>(rng: &mut R, d: usize, lo: i64, hi: i64, denom: i64) -> M {
    Matrix::from_fn(d, d, |_, _| rand_entry(rng, lo, hi, denom))
}

pub fn rand_vector<R: Rng>(rng: &mut R, d: usize, lo: i64, hi: i64, denom: i64) -> Vector<Q> {
    Vector::new((0..d).map(|_| rand_entry(rng, lo, hi, denom)).collect())
}

/// A random pair with `AB != BA`.
pub fn rand_noncommuting<R: Rng>(rng: &mut R, d: usize, lo: i64, hi: i64) -> (M, M) {
    loop {
        let a = rand_matrix(rng, d, lo, hi, 1);
        let b = rand_matrix(rng, d, lo, hi, 1);
        if &a * &b != &b * &a {
            return (a, b);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForcingKind {
    Zero,
    Constant,
    Geometric,
    Table,
}

pub const FORCING_KINDS: [ForcingKind; 4] = [
    ForcingKind::Zero,
    ForcingKind::Constant,
    ForcingKind::Geometric,
    ForcingKind::Table,
];

pub fn rand_forcing<R: Rng>(
    rng: &mut R,
    kind: ForcingKind,
    d: usize,
    horizon: usize,
    bound: i64,
    denom: i64,
) -> ForcingSpec<Q> {
    match kind {
        ForcingKind::Zero => ForcingSpec::Zero,
        ForcingKind::Constant => ForcingSpec::Constant(rand_vector(rng, d, -bound, bound, denom)),
        ForcingKind::Geometric => ForcingSpec::Geometric {
            b1: rand_vector(rng, d, -bound, bound, denom),
            b2: q(rng.gen_range(1..=2)),
        },
        ForcingKind::Table => ForcingSpec::Table(
            (0..horizon)
                .map(|_| rand_vector(rng, d, -bound, bound, denom))
                .collect(),
        ),
    }
}

/// Random problem with every entry of `A`, `B`, `φ` and the forcing drawn
/// as `k / denom` in `[-bound, bound]`.
pub fn rand_problem<R: Rng>(
    rng: &mut R,
    d: usize,
    m: usize,
    horizon: usize,
    bound: i64,
    denom: i64,
    kind: ForcingKind,
) -> ProblemSpec<Q> {
    let a = rand_matrix(rng, d, -bound, bound, denom);
    let b = rand_matrix(rng, d, -bound, bound, denom);
    let phi = (0..m + 2)
        .map(|_| rand_vector(rng, d, -bound, bound, denom))
        .collect();
    let forcing = rand_forcing(rng, kind, d, horizon, bound, denom);
    ProblemSpec::new(m, a, b, phi, forcing, horizon).expect("generated problem is valid")
}

// ---- proptest strategies ----

pub fn arb_q(bound: i64) -> impl Strategy<Value = Q> {
    (-bound..=bound, 1i64..=4).prop_map(|(n, d)| frac(n, d))
}

pub fn arb_int_matrix(d: usize, bound: i64) -> impl Strategy<Value = M> {
    prop::collection::vec(-bound..=bound, d * d).prop_map(move |v| {
        Matrix::from_fn(d, d, |i, j| q(v[i * d + j]))
    })
}

pub fn arb_q_matrix(d: usize, bound: i64) -> impl Strategy<Value = M> {
    prop::collection::vec(arb_q(bound), d * d)
        .prop_map(move |v| Matrix::from_fn(d, d, |i, j| v[i * d + j].clone()))
}

pub fn arb_pair(max_d: usize, bound: i64) -> impl Strategy<Value = (M, M)> {
    (1..=max_d).prop_flat_map(move |d| (arb_int_matrix(d, bound), arb_int_matrix(d, bound)))
}

pub fn arb_q_vector(d: usize, bound: i64) -> impl Strategy<Value = Vector<Q>> {
    prop::collection::vec(arb_q(bound), d).prop_map(Vector::new)
}

fn arb_forcing(d: usize, horizon: usize, bound: i64) -> impl Strategy<Value = ForcingSpec<Q>> {
    prop_oneof![
        Just(ForcingSpec::Zero),
        arb_q_vector(d, bound).prop_map(ForcingSpec::Constant),
        (arb_q_vector(d, bound), 1i64..=3).prop_map(|(b1, b2)| ForcingSpec::Geometric { b1, b2: q(b2) }),
        prop::collection::vec(arb_q_vector(d, bound), horizon..=horizon + 2).prop_map(ForcingSpec::Table),
    ]
}

/// Random problem with small rational entries, `d <= max_d`, `m <= 4`.
pub fn arb_problem(max_d: usize, max_horizon: usize, bound: i64) -> impl Strategy<Value = ProblemSpec<Q>> {
    (1..=max_d, 1usize..=4, 1..=max_horizon).prop_flat_map(move |(d, m, horizon)| {
        (
            arb_q_matrix(d, bound),
            arb_q_matrix(d, bound),
            prop::collection::vec(arb_q_vector(d, bound), m + 2),
            arb_forcing(d, horizon, bound),
        )
            .prop_map(move |(a, b, phi, f)| ProblemSpec::new(m, a, b, phi, f, horizon).unwrap())
    })
}

// ---- independent references ----

pub fn to_plain(m: &M) -> Plain {
    m.to_rows()
}

pub fn plain_identity(d: usize) -> Plain {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn plain_mul(x: &Plain, y: &Plain) -> Plain {
    let n = x.len();
    let k = y.len();
    let p = y.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| (0..k).fold(Q::zero(), |acc, l| acc + &x[i][l] * &y[l][j]))
                .collect()
        })
        .collect()
}

pub fn plain_add(x: &Plain, y: &Plain) -> Plain {
    x.iter()
        .zip(y)
        .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
        .collect()
}

pub fn plain_pow(x: &Plain, e: usize) -> Plain {
    (0..e).fold(plain_identity(x.len()), |acc, _| plain_mul(&acc, x))
}

/// `Q(t; s)` as the sum over all words of length `t - 1` in `{A, B}` with
/// exactly `s` letters `B`. Exponential in `t`; use only for small `t`.
pub fn q_by_words(a: &M, b: &M, t: usize, s: i64) -> Plain {
    let d = a.rows();
    let mut acc: Plain = vec![vec![Q::zero(); d]; d];
    if t == 0 || s < 0 {
        return acc;
    }
    let len = t - 1;
    let (pa, pb) = (to_plain(a), to_plain(b));
    for mask in 0u32..(1u32 << len) {
        if mask.count_ones() as i64 != s {
            continue;
        }
        let mut word = plain_identity(d);
        for bit in 0..len {
            let letter = if mask >> bit & 1 == 1 { &pb } else { &pa };
            word = plain_mul(&word, letter);
        }
        acc = plain_add(&acc, &word);
    }
    acc
}

/// Direct iteration of `y(t+2) = 2y(t+1) - y(t) - A y(t) - B y(t-m) + f(t)`
/// on plain vectors; entry `k` of the result is `y(k - m)`.
pub fn plain_iterate(p: &ProblemSpec<Q>) -> Vec<Vec<Q>> {
    let d = p.dim();
    let m = p.delay();
    let a = to_plain(p.a());
    let b = to_plain(p.b());
    let mut y: Vec<Vec<Q>> = p.phi_values().iter().map(|v| v.as_slice().to_vec()).collect();
    for t in 0..p.horizon().saturating_sub(1) {
        let idx = t + m;
        let f = p.forcing_at(t);
        let next = (0..d)
            .map(|i| {
                let mut v = q(2) * &y[idx + 1][i] - &y[idx][i] + &f.as_slice()[i];
                for k in 0..d {
                    v = v - &a[i][k] * &y[idx][k] - &b[i][k] * &y[idx - m][k];
                }
                v
            })
            .collect();
        y.push(next);
    }
    y
}

pub fn matrix_from_plain(p: &Plain) -> M {
    Matrix::from_rows(p.clone()).unwrap()
}

pub fn scalar_pow(x: &Q, e: usize) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * x)
}

pub fn as_f64(x: &Q) -> f64 {
    Scalar::to_f64(x)
}
