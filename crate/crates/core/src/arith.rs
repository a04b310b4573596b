//! Exact integer and rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Arbitrary-precision integer used for every lattice quantity.
pub type Int = BigInt;
/// Exact rational used for thresholds with halves and for inertia computations.
pub type Rational = BigRational;

#[inline]
pub fn int(v: i64) -> Int {
    Int::from(v)
}

#[inline]
pub fn rational(num: Int, den: Int) -> Rational {
    Rational::new(num, den)
}

pub fn rat_from_int(v: &Int) -> Rational {
    Rational::from_integer(v.clone())
}

pub fn floor_rational(r: &Rational) -> Int {
    r.numer().div_floor(r.denom())
}

pub fn ceil_rational(r: &Rational) -> Int {
    -((-r.numer()).div_floor(r.denom()))
}

/// Largest `n >= 0` with `n^2 <= r`; zero for negative input.
pub fn floor_sqrt_rational(r: &Rational) -> Int {
    if !r.is_positive() {
        return Int::zero();
    }
    floor_rational(r).sqrt()
}

/// `v / 2` when `v` is even.
pub fn exact_half(v: &Int) -> Option<Int> {
    let (q, r) = v.div_rem(&int(2));
    r.is_zero().then_some(q)
}

pub fn is_even(v: &Int) -> bool {
    v.is_even()
}

/// Non-negative residue of `v` modulo `m > 0`.
pub fn modulo(v: &Int, m: i64) -> Int {
    v.mod_floor(&int(m))
}

/// Binomial coefficient for a non-negative top entry and small bottom entry.
pub fn binomial(n: &Int, k: u32) -> Int {
    if n.is_negative() || *n < int(i64::from(k)) {
        return Int::zero();
    }
    let mut acc = int(1);
    for i in 0..k {
        acc *= n - int(i64::from(i));
    }
    for i in 2..=k {
        acc /= int(i64::from(i));
    }
    acc
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn extended_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (int(1), int(0));
    let (mut old_t, mut t) = (int(0), int(1));
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}
