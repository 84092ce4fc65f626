//! Real-root counting by Sturm sequences and exact rational roots of
//! univariate polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::UPoly;
use crate::scalar::Scalar;

fn sign(x: &Scalar) -> Result<i32> {
    x.signum()
}

pub fn sturm_chain(p: &UPoly) -> Vec<UPoly> {
    let mut chain = vec![p.clone()];
    if p.degree().unwrap_or(0) == 0 {
        return chain;
    }
    chain.push(p.derivative());
    loop {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut v = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn sign_at_infinity(p: &UPoly, positive: bool) -> Result<i32> {
    let Some(lead) = p.lead() else { return Ok(0) };
    let s = sign(lead)?;
    let odd = p.degree().unwrap_or(0) % 2 == 1;
    Ok(if !positive && odd { -s } else { s })
}

/// Number of distinct real roots of a nonzero polynomial with real
/// coefficients.
pub fn count_real_roots(p: &UPoly) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial has every root".into()));
    }
    let chain = sturm_chain(p);
    let at = |pos: bool| -> Result<usize> {
        let s: Vec<i32> = chain
            .iter()
            .map(|q| sign_at_infinity(q, pos))
            .collect::<Result<_>>()?;
        Ok(variations(s.into_iter()))
    };
    Ok(at(false)? - at(true)?)
}

type RPoly = Vec<BigRational>;

fn r_eval(p: &RPoly, x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn r_sign(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn to_scalar_poly(p: &RPoly) -> UPoly {
    UPoly::new(p.iter().cloned().map(Scalar::from_rational).collect())
}

fn to_rational_poly(p: &UPoly) -> Option<RPoly> {
    p.coeffs().iter().map(Scalar::to_rational).collect()
}

/// The fraction with the smallest denominator in `[lo, hi]`.
fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    if !lo.is_positive() {
        return BigRational::zero();
    }
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    let f = lo.floor();
    let a = hi - &f;
    let b = lo - &f;
    f + simplest_between(&a.recip(), &b.recip()).recip()
}

/// Rational roots of a polynomial with rational coefficients.
fn rational_roots_q(p: &RPoly) -> Vec<BigRational> {
    let mut p = p.clone();
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let mut roots = Vec::new();
    if p.len() <= 1 {
        return roots;
    }
    if p[0].is_zero() {
        roots.push(BigRational::zero());
        while p[0].is_zero() {
            p.remove(0);
        }
    }
    if p.len() <= 1 {
        return roots;
    }
    // integer primitive form
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * &lcm).to_integer()).collect();
    let lead = ints.last().unwrap().abs();
    // any two rational roots with denominators dividing lead are at least
    // 1/lead^2 apart
    let width = BigRational::new(BigInt::one(), &lead * &lead * 2);
    let bound = BigRational::one()
        + ints
            .iter()
            .map(|c| BigRational::new(c.abs(), lead.clone()))
            .max()
            .unwrap();
    let sp = to_scalar_poly(&p);
    let chain: Vec<RPoly> = sturm_chain(&sp)
        .iter()
        .map(|q| to_rational_poly(q).expect("rational chain"))
        .collect();
    let count = |x: &BigRational| variations(chain.iter().map(|q| r_sign(&r_eval(q, x))));
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let k = count(&lo) - count(&hi);
        if k == 0 {
            continue;
        }
        if k == 1 && &hi - &lo < width {
            let c = simplest_between(&lo, &hi);
            if r_eval(&p, &c).is_zero() {
                roots.push(c);
            }
            continue;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    roots.sort();
    roots.dedup();
    roots
}

/// All rational roots of a nonzero polynomial with coefficients in a
/// cyclotomic field.
pub fn rational_roots(p: &UPoly) -> Result<Vec<BigRational>> {
    if p.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial has every root".into()));
    }
    if let Some(q) = to_rational_poly(p) {
        return Ok(rational_roots_q(&q));
    }
    // a rational root is a common root of the rational component polynomials
    let comps = Scalar::common_coords(p.coeffs())?;
    let width = comps[0].len();
    let component = (0..width)
        .map(|b| comps.iter().map(|c| c[b].clone()).collect::<RPoly>())
        .find(|q| q.iter().skip(1).any(|c| !c.is_zero()))
        .expect("a non-constant component");
    Ok(rational_roots_q(&component)
        .into_iter()
        .filter(|r| p.eval(&Scalar::from_rational(r.clone())).is_zero())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn counts_distinct_real_roots() {
        // (x - 1)^2 (x + 2)
        assert_eq!(count_real_roots(&poly(&[2, -3, 0, 1])).unwrap(), 2);
        // x^2 + 1
        assert_eq!(count_real_roots(&poly(&[1, 0, 1])).unwrap(), 0);
        // x^2 - 2
        assert_eq!(count_real_roots(&poly(&[-2, 0, 1])).unwrap(), 2);
        assert_eq!(count_real_roots(&poly(&[5])).unwrap(), 0);
    }

    #[test]
    fn finds_rational_roots() {
        // (2x - 1)(3x + 2)(x^2 - 2) = 6x^4 + x^3 - 14x^2 - 2x + 4
        let p = poly(&[4, -2, -14, 1, 6]);
        assert_eq!(rational_roots(&p).unwrap(), vec![q(-2, 3), q(1, 2)]);
        assert_eq!(rational_roots(&poly(&[0, 0, 1])).unwrap(), vec![q(0, 1)]);
        assert!(rational_roots(&poly(&[-2, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn roots_with_irrational_coefficients() {
        // (x - 3)(x - sqrt 2)
        let r2 = Scalar::cos_turn(1, 8).unwrap() * Scalar::from_int(2);
        let p = UPoly::new(vec![&r2 * &Scalar::from_int(3), -(&r2 + &Scalar::from_int(3)), Scalar::one()]);
        assert_eq!(rational_roots(&p).unwrap(), vec![q(3, 1)]);
        assert_eq!(count_real_roots(&p).unwrap(), 2);
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_between(&q(3, 10), &q(4, 10)), q(1, 3));
        assert_eq!(simplest_between(&q(-7, 2), &q(-3, 1)), q(-3, 1));
        assert_eq!(simplest_between(&q(-1, 2), &q(1, 2)), q(0, 1));
    }
}
