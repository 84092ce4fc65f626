//! Numerical evaluation under the standard embedding and exact sign
//! determination for real elements.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::cyclo::Cyclo;
use super::ratio_to_f64;

/// `(re, im, err)` with `|value - (re + i im)| <= err` in each component
/// (err is infinite when the coefficients overflow f64).
pub(crate) fn approx_complex(c: &Cyclo, num: &[BigInt], den: &BigInt) -> (f64, f64, f64) {
    let mut re = 0.0;
    let mut im = 0.0;
    let mut mag = 0.0;
    for (k, x) in num.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let v = ratio_to_f64(x, den);
        let (cs, sn) = c.approx[k];
        re += v * cs;
        im += v * sn;
        mag += v.abs();
    }
    let err = if mag.is_finite() {
        mag * 1e-13 + f64::MIN_POSITIVE
    } else {
        f64::INFINITY
    };
    (re, im, err)
}

/// Sign of `sum_k num[k] cos(2 pi k / order)`, assumed nonzero.
pub(crate) fn real_sign(order: u32, num: &[BigInt]) -> i32 {
    let mut sum = 0.0;
    let mut mag = 0.0;
    let mut finite = true;
    for (k, c) in num.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        match c.to_f64() {
            Some(v) if v.is_finite() => {
                sum += v * (TAU * k as f64 / order as f64).cos();
                mag += v.abs();
            }
            _ => finite = false,
        }
    }
    if finite && mag.is_finite() && sum.abs() > mag * 1e-12 {
        return if sum > 0.0 { 1 } else { -1 };
    }
    exact_sign(order, num)
}

/// Fixed-point evaluation with doubling precision until the sign is certain.
fn exact_sign(order: u32, num: &[BigInt]) -> i32 {
    let mut bits = 128u64;
    loop {
        let pi = pi_fixed(bits);
        let mut sum = BigInt::zero();
        let mut err = BigInt::zero();
        for (k, c) in num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ck = cos_fixed(k as u64, order as u64, &pi, bits);
            sum += c * ck;
            // each cosine is within 8 ulps
            err += c.abs() * 8;
        }
        if sum.abs() > err {
            return if sum.is_positive() { 1 } else { -1 };
        }
        bits *= 2;
        assert!(bits <= 1 << 20, "sign determination did not converge");
    }
}

/// `floor(pi * 2^bits)` up to a few ulps, via Machin's formula.
fn pi_fixed(bits: u64) -> BigInt {
    let guard = 32;
    let one = BigInt::from(1) << (bits + guard);
    let a = atan_inv(5, &one);
    let b = atan_inv(239, &one);
    ((a * 16) - (b * 4)) >> guard
}

fn atan_inv(x: u64, one: &BigInt) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut power = one / x;
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * n + 1);
        if n.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        n += 1;
    }
    sum
}

/// `cos(2 pi k / n) * 2^bits` within a few ulps.
fn cos_fixed(k: u64, n: u64, pi: &BigInt, bits: u64) -> BigInt {
    let k = k % n;
    // cos is even around 0 and pi: fold the angle into [0, pi]
    let k = k.min(n - k);
    let guard = 32;
    let w = bits + guard;
    let pi_w = pi << guard;
    let theta = (&pi_w * (2 * k)) / n;
    let one = BigInt::from(1) << w;
    let theta2 = (&theta * &theta) >> w;
    let mut term = one.clone();
    let mut sum = one;
    let mut i = 0u64;
    loop {
        term = -((&term * &theta2) >> w) / ((2 * i + 1) * (2 * i + 2));
        if term.is_zero() {
            break;
        }
        sum += &term;
        i += 1;
    }
    sum >> guard
}
