//! Reference computations that share no code with the library: integer
//! square roots, fixed-point bisection and bit-packed window counts.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `⌊n√k⌋` for non-square `k`.
pub fn floor_sqrt_mul(k: u128, n: i64) -> i128 {
    let m = n.unsigned_abs() as u128;
    let r = (k * m * m).sqrt() as i128;
    if n >= 0 {
        r
    } else {
        -r - 1
    }
}

/// Fibonacci word `⌊nα⌋ − ⌊(n−1)α⌋` with `α = (√5−1)/2`.
pub fn fibonacci_word(len: usize) -> Vec<u32> {
    let fl = |n: i64| (floor_sqrt_mul(5, n) - n as i128).div_euclid(2);
    (0..len as i64).map(|n| (fl(n) - fl(n - 1)) as u32).collect()
}

/// Sturmian differences for `α = √2 − 1`.
pub fn silver_word(len: usize) -> Vec<u32> {
    let fl = |n: i64| floor_sqrt_mul(2, n) - n as i128;
    (0..len as i64).map(|n| (fl(n) - fl(n - 1)) as u32).collect()
}

/// `⌊10{√2 n²}⌋ = ⌊√200·n²⌋ − 10⌊√2·n²⌋`.
pub fn power_digit_sqrt2(len: usize) -> Vec<u32> {
    (0..len as u128)
        .map(|n| {
            let n2 = n * n;
            let ten = (200 * n2 * n2).sqrt();
            let one = (2 * n2 * n2).sqrt();
            (ten - 10 * one) as u32
        })
        .collect()
}

/// `[{φn²} ∈ [0, ¼) ∪ (¾, 1)]` via `⌊4{φn²}⌋ = 2n² + ⌊√20·n²⌋ − 4⌊(n² + √5·n²)/2⌋`.
pub fn golden_square_word(len: usize) -> Vec<u32> {
    (0..len as u128)
        .map(|n| {
            let n2 = n * n;
            let q = 2 * n2 + (20 * n2 * n2).sqrt() - 4 * ((n2 + (5 * n2 * n2).sqrt()) / 2);
            (q == 0 || q == 3) as u32
        })
        .collect()
}

/// `⌊√3 n⌋` for `n ≥ 0`.
pub fn floor_sqrt3(n: i64) -> i64 {
    floor_sqrt_mul(3, n) as i64
}

/// Distinct factors of length `n` of a word over an alphabet of at most
/// `2^bits` letters, exact while `n·bits ≤ 128`.
pub fn packed_factor_count(s: &[u32], n: usize, bits: u32) -> Option<usize> {
    if n == 0 {
        return Some(1);
    }
    if n as u32 * bits > 128 || n > s.len() {
        return None;
    }
    let mask: u128 = if n as u32 * bits == 128 { u128::MAX } else { (1u128 << (n as u32 * bits)) - 1 };
    let mut seen = HashSet::new();
    let mut acc = 0u128;
    for (i, &c) in s.iter().enumerate() {
        acc = ((acc << bits) | c as u128) & mask;
        if i + 1 >= n {
            seen.insert(acc);
        }
    }
    Some(seen.len())
}

/// Fixed-point real root of `x³ − ax² − bx − 1` in `[1, 1 + max(|a|, |b|, 1)]`,
/// as `⌊β·2^bits⌋`, by bisection.
pub fn pisot_root(a: i64, b: i64, bits: u32) -> BigInt {
    let s = BigInt::one() << bits;
    let f = |x: &BigInt| -> BigInt { x * x * x - BigInt::from(a) * x * x * &s - BigInt::from(b) * x * &s * &s - &s * &s * &s };
    let mut lo = s.clone();
    let mut hi = &s * BigInt::from(1 + a.abs().max(b.abs()).max(1));
    assert!(f(&lo).is_negative() && f(&hi).is_positive(), "no sign change for ({a}, {b})");
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if f(&mid).is_positive() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// `{⌊β^i⌉ : i ≥ 0} ∩ [0, bound]` from a 320-bit root.
pub fn pisot_powers(a: i64, b: i64, bound: u64) -> BTreeSet<u64> {
    let bits = 320u32;
    let beta = pisot_root(a, b, bits);
    let one = BigInt::one() << bits;
    let half = BigInt::one() << (bits - 1);
    let mut p = one.clone();
    let mut out = BTreeSet::new();
    loop {
        let r: BigInt = (&p + &half) >> bits;
        // the fractional part must stay clear of ½ by far more than the error
        let frac: BigInt = &p - (&r << bits) + &half;
        let margin = frac.clone().min(&one - &frac);
        assert!(margin > (BigInt::one() << (bits / 2)), "rounding undecided");
        match r.to_u64() {
            Some(v) if v <= bound => {
                out.insert(v);
            }
            _ => break,
        }
        p = (&p * &beta) >> bits;
    }
    out
}

/// `⌊β^i⌉` for `i < count`.
pub fn pisot_round_powers(a: i64, b: i64, count: usize) -> Vec<BigInt> {
    let bits = 320u32;
    let beta = pisot_root(a, b, bits);
    let half = BigInt::one() << (bits - 1);
    let mut p = BigInt::one() << bits;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push((&p + &half) >> bits);
        p = (&p * &beta) >> bits;
    }
    out
}

/// `|F ∩ [0, n)|` for the Fibonacci numbers `F = {0, 1, 2, 3, 5, …}`.
pub fn fibonacci_count_below(n: u64) -> u64 {
    let mut set = BTreeSet::new();
    let (mut x, mut y) = (0u64, 1u64);
    while x < n {
        set.insert(x);
        (x, y) = (y, x + y);
    }
    set.len() as u64
}

/// `‖nφ‖ ≤ n^{−1/2}` for `n ≥ 1`, decided with `n√5` known to 192 bits.
pub fn golden_close(n: u64) -> bool {
    const K: u32 = 192;
    let nb = BigInt::from(n);
    let x = (BigInt::from(5) * &nb * &nb * (BigInt::one() << (2 * K))).sqrt();
    // nφ·2^{K+1} ∈ [y, y + 1)
    let y = (&nb << K) + x;
    let unit = BigInt::one() << (K + 1);
    let m: BigInt = (&y + (&unit >> 1)) >> (K + 1);
    let d0 = (&y - &m * &unit).abs();
    let decide = |d: &BigInt| d * d * &nb <= &unit * &unit;
    let (a, b) = (decide(&d0), decide(&(&d0 + 1)));
    assert_eq!(a, b, "golden_close undecided at n = {n}");
    assert!(!d0.is_zero());
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(floor_sqrt_mul(2, 10), 14);
        assert_eq!(floor_sqrt_mul(2, -10), -15);
        assert_eq!(fibonacci_word(8), vec![1, 0, 1, 0, 1, 1, 0, 1]);
        assert_eq!(power_digit_sqrt2(4), vec![0, 4, 6, 7]);
        assert_eq!(packed_factor_count(&[0, 1, 0, 1, 1], 2, 1), Some(3));
        assert_eq!(fibonacci_count_below(14), 7);
        assert_eq!(pisot_powers(1, 1, 100).into_iter().collect::<Vec<_>>(), vec![1, 2, 3, 6, 11, 21, 39, 71]);
        assert!(golden_close(1) && golden_close(2) && golden_close(5) && !golden_close(9));
    }
}
