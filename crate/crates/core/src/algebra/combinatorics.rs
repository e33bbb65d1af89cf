//! Binomial coefficients with the vanishing convention, and the discrete
//! step / Kronecker functions.

use num_bigint::BigInt;
use num_traits::Zero;

/// `binom(a, b)` for arbitrary integers.
///
/// Equals `a! / (b! (a-b)!)` when `0 <= b <= a` and zero otherwise, in
/// particular for every negative `a`. The last case is what makes the delayed
/// sine and cosine vanish at negative arguments.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    // Symmetry keeps the loop short.
    let k = b.min(a - b);
    let mut acc = BigInt::from(1u32);
    for i in 0..k {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Unit step: 1 for `t >= 0`, else 0.
pub fn step(t: i64) -> u8 {
    u8::from(t >= 0)
}

/// Kronecker delta `δ(l, t)`.
pub fn kronecker(l: i64, t: i64) -> u8 {
    u8::from(l == t)
}
