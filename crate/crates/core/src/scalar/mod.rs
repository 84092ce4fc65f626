//! Exact elements of cyclotomic fields.
//!
//! A [`Scalar`] is an element of Q(zeta_N) stored as the unique reduced
//! residue of a rational polynomial in `zeta_N` modulo the cyclotomic
//! polynomial `Phi_N`. Every result is moved down to the smallest cyclotomic
//! field containing it (rationals live at `N = 1`), so each element has
//! exactly one representation regardless of how it was computed.
//!
//! Orders congruent to 2 mod 4 are folded onto `N / 2` (the fields coincide).
//! Binary operations promote both operands to the lcm of their orders.

mod approx;
pub(crate) mod cyclo;
mod text;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use cyclo::{cyclotomic_poly, totient, HARD_MAX_ORDER};

use crate::error::{Error, Result};

/// Default cap on field orders, `4 * 64`.
pub const DEFAULT_MAX_ORDER: u32 = 256;

static MAX_ORDER: AtomicU32 = AtomicU32::new(DEFAULT_MAX_ORDER);

/// Sets the largest field order any operation may promote to.
pub fn set_max_order(cap: u32) -> Result<()> {
    if cap == 0 || cap > HARD_MAX_ORDER {
        return Err(Error::InvalidInput(format!(
            "field order cap must be in 1..={HARD_MAX_ORDER}, got {cap}"
        )));
    }
    MAX_ORDER.store(cap, AtomicOrdering::Relaxed);
    Ok(())
}

pub fn max_order() -> u32 {
    MAX_ORDER.load(AtomicOrdering::Relaxed)
}

fn check_order(order: u32) -> Result<u32> {
    let folded = fold_order(order);
    if folded > max_order() {
        return Err(Error::OrderOverflow {
            order: folded,
            cap: max_order(),
        });
    }
    Ok(folded)
}

fn fold_order(order: u32) -> u32 {
    if order % 4 == 2 {
        order / 2
    } else {
        order
    }
}

/// Binary operation selector for [`Scalar::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone)]
pub struct Scalar {
    order: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            order: 1,
            num: vec![BigInt::zero()],
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Scalar {
            order: 1,
            num: vec![BigInt::from(v)],
            den: BigInt::one(),
        }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut s = Scalar {
            order: 1,
            num: vec![r.numer().clone()],
            den: r.denom().clone(),
        };
        s.normalize();
        s
    }

    /// `zeta_N^k` for the primitive root `exp(2 pi i / N)`.
    pub fn zeta(order: u32, k: i64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("field order must be positive".into()));
        }
        let e = k.rem_euclid(order as i64) as u32;
        // zeta_N^k == zeta_{N/g}^{k/g}
        let g = e.gcd(&order).max(1);
        let (order, e) = if e == 0 { (1, 0) } else { (order / g, e / g) };
        let order_folded = check_order(order)?;
        let mut s = if order_folded != order {
            // order = 2m with m odd: zeta_{2m} = -zeta_m^{(m+1)/2}
            let m = order_folded as i64;
            let base = Self::zeta(order_folded as u32, (m + 1) / 2)?;
            let z = -base;
            return z.try_pow(e as u64);
        } else {
            let c = cyclo::ctx(order);
            let mut num = vec![BigInt::zero(); c.phi];
            for (j, &v) in c.powers[e as usize].iter().enumerate() {
                num[j] = BigInt::from(v);
            }
            Scalar {
                order,
                num,
                den: BigInt::one(),
            }
        };
        s.normalize();
        Ok(s)
    }

    /// Builds an element from explicit reduced coefficients (constant term
    /// first); `coeffs.len()` must equal `phi(order)`.
    pub fn from_coeffs(order: u32, coeffs: &[BigRational]) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("field order must be positive".into()));
        }
        let folded = check_order(order)?;
        let phi = totient(order);
        if coeffs.len() != phi {
            return Err(Error::Parse(format!(
                "order {order} needs {phi} coefficients, got {}",
                coeffs.len()
            )));
        }
        if folded != order {
            // substitute zeta_N -> -zeta_{N/2}^{(N/2+1)/2}
            let z = -Self::zeta(folded, (folded as i64 + 1) / 2)?;
            let mut acc = Scalar::zero();
            let mut pow = Scalar::one();
            for c in coeffs {
                acc = acc.try_add(&pow.scale(c))?;
                pow = pow.try_mul(&z)?;
            }
            return Ok(acc);
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut s = Scalar { order, num, den };
        s.normalize();
        Ok(s)
    }

    /// `cos(2 pi num / den)`, exact, in Q(zeta_den).
    pub fn cos_turn(num: i64, den: u32) -> Result<Self> {
        let z = Self::zeta(den, num)?;
        let zi = Self::zeta(den, -num)?;
        Ok(z.try_add(&zi)?.scale(&BigRational::new(1.into(), 2.into())))
    }

    /// `sin(2 pi num / den)`, exact, in Q(zeta_lcm(4, den)).
    pub fn sin_turn(num: i64, den: u32) -> Result<Self> {
        let z = Self::zeta(den, num)?;
        let zi = Self::zeta(den, -num)?;
        let two_i = Self::zeta(4, 1)?.try_mul(&Self::from_int(2))?;
        z.try_sub(&zi)?.try_div(&two_i)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Reduced coefficients as rationals, constant term first.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.num[0] == self.den
    }

    pub fn is_rational(&self) -> bool {
        self.order == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.order = 1;
            self.num = vec![BigInt::zero()];
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for n in &mut self.num {
                *n = -&*n;
            }
        }
        let mut g = self.den.clone();
        for n in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(n);
        }
        if !g.is_one() {
            self.den = &self.den / &g;
            for n in &mut self.num {
                *n = &*n / &g;
            }
        }
        if self.order != 1 && self.num[1..].iter().all(Zero::is_zero) {
            self.num.truncate(1);
            self.order = 1;
            return;
        }
        if self.order != 1 && self.descend() {
            self.normalize();
        }
    }

    /// Moves `self` into a maximal proper subfield containing it, if any.
    fn descend(&mut self) -> bool {
        let c = cyclo::ctx(self.order);
        for sf in &c.subfields {
            if let Some(step) = sf.spread {
                if self
                    .num
                    .iter()
                    .enumerate()
                    .any(|(e, x)| e % step != 0 && !x.is_zero())
                {
                    continue;
                }
                self.num = self.num.iter().step_by(step).cloned().collect();
                self.order = sf.order;
                return true;
            }
            if !self.fixed_by(c, sf.gen) {
                continue;
            }
            let r = sf.restriction(c);
            let coeffs: Vec<BigRational> = r
                .inv
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&r.rows)
                        .filter(|(_, &k)| !self.num[k].is_zero())
                        .map(|(a, &k)| a * BigRational::from_integer(self.num[k].clone()))
                        .sum()
                })
                .collect();
            let den = coeffs
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            self.num = coeffs
                .iter()
                .map(|x| x.numer() * (&den / x.denom()))
                .collect();
            self.den = &self.den * den;
            self.order = sf.order;
            return true;
        }
        false
    }

    fn fixed_by(&self, c: &cyclo::Cyclo, k: u32) -> bool {
        let n = c.order as usize;
        let (mut re, mut im, mut mag) = (0.0f64, 0.0f64, 0.0f64);
        let mut finite = true;
        for (e, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let Some(v) = x.to_f64().filter(|v| v.is_finite()) else {
                finite = false;
                break;
            };
            let (c0, s0) = c.approx[e];
            let (c1, s1) = c.approx[(e * k as usize) % n];
            re += v * (c1 - c0);
            im += v * (s1 - s0);
            mag += v.abs();
        }
        if finite && (re.abs() + im.abs()) > mag * 1e-12 {
            return false;
        }
        self.galois_raw(c, k) == self.num
    }

    /// Re-expresses `self` in Q(zeta_target); `self.order` must divide `target`.
    fn promote(&self, target: u32) -> Scalar {
        if self.order == target {
            return self.clone();
        }
        debug_assert_eq!(target % self.order, 0);
        let c = cyclo::ctx(target);
        let step = (target / self.order) as usize;
        let mut acc = vec![BigInt::zero(); c.phi];
        for (e, coef) in self.num.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let exp = (e * step) % target as usize;
            add_scaled_row(&mut acc, coef, &c.powers[exp]);
        }
        Scalar {
            order: target,
            num: acc,
            den: self.den.clone(),
        }
    }

    /// Rational coordinates of each element in the power basis of one common
    /// cyclotomic field, so that a Q-linear relation among the elements can
    /// be read off componentwise.
    pub fn common_coords(xs: &[Scalar]) -> Result<Vec<Vec<BigRational>>> {
        let order = check_order(xs.iter().fold(1u32, |acc, x| acc.lcm(&x.order)))?;
        Ok(xs.iter().map(|x| x.promote(order).coeffs()).collect())
    }

    fn common_order(&self, other: &Scalar) -> Result<u32> {
        check_order(self.order.lcm(&other.order))
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let order = self.common_order(other)?;
        let a = self.promote(order);
        let b = other.promote(order);
        let mut s = if a.den == b.den {
            Scalar {
                order,
                num: a.num.iter().zip(&b.num).map(|(x, y)| x + y).collect(),
                den: a.den,
            }
        } else {
            Scalar {
                order,
                num: a
                    .num
                    .iter()
                    .zip(&b.num)
                    .map(|(x, y)| x * &b.den + y * &a.den)
                    .collect(),
                den: &a.den * &b.den,
            }
        };
        s.normalize();
        Ok(s)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&-other.clone())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        if self.is_zero() || other.is_zero() {
            return Ok(Scalar::zero());
        }
        if self.order == 1 {
            return Ok(other.scale_parts(&self.num[0], &self.den));
        }
        if other.order == 1 {
            return Ok(self.scale_parts(&other.num[0], &other.den));
        }
        let order = self.common_order(other)?;
        let a = self.promote(order);
        let b = other.promote(order);
        let c = cyclo::ctx(order);
        let num = small_product(c, &a.num, &b.num).unwrap_or_else(|| {
            // product exponents stay below 2 * phi - 1 < 2N
            let mut raw = vec![BigInt::zero(); 2 * c.phi - 1];
            for (i, x) in a.num.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.num.iter().enumerate() {
                    if !y.is_zero() {
                        raw[i + j] += x * y;
                    }
                }
            }
            reduce(c, raw)
        });
        let mut s = Scalar {
            order,
            num,
            den: &a.den * &b.den,
        };
        s.normalize();
        Ok(s)
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        let inv = other.inverse()?;
        self.try_mul(&inv)
    }

    pub fn try_pow(&self, mut e: u64) -> Result<Scalar> {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact arithmetic with an explicit operator; the checked entry point
    /// behind the operator impls.
    pub fn arith(&self, other: &Scalar, op: ArithOp) -> Result<Scalar> {
        match op {
            ArithOp::Add => self.try_add(other),
            ArithOp::Sub => self.try_sub(other),
            ArithOp::Mul => self.try_mul(other),
            ArithOp::Div => self.try_div(other),
        }
    }

    /// Multiplicative inverse via the norm: `a^-1 = prod_{s != 1} s(a) / N(a)`.
    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.order == 1 {
            return Ok(Scalar {
                order: 1,
                num: vec![self.den.clone()],
                den: self.num[0].clone(),
            }
            .normalized());
        }
        // Norm down a tower of cyclic Galois steps: after each step `acc` is
        // fixed by one more generator and descends to a smaller field.
        let c = cyclo::ctx(self.order);
        let mut acc = self.clone();
        let mut cofactor = Scalar::one();
        for &(g, o) in &c.generators {
            if acc.order == 1 {
                break;
            }
            let p = acc.orbit_product(g, o)?;
            acc = acc.try_mul(&p)?;
            cofactor = cofactor.try_mul(&p)?;
        }
        let norm = acc
            .to_rational()
            .expect("norm of a cyclotomic element is rational");
        Ok(cofactor.scale(&norm.recip()))
    }

    /// `prod_{t=1}^{o-1} sigma_g^t(self)` by repeated doubling.
    fn orbit_product(&self, g: u32, o: u32) -> Result<Scalar> {
        // q = prod_{t<k} sigma^t(self), built along the bits of o - 1
        let target = o - 1;
        if target == 0 {
            return Ok(Scalar::one());
        }
        let mut q = self.clone();
        let mut k = 1u32;
        for bit in (0..31 - target.leading_zeros()).rev() {
            q = q.try_mul(&q.galois_pow(g, k))?;
            k *= 2;
            if target >> bit & 1 == 1 {
                q = q.try_mul(&self.galois_pow(g, k))?;
                k += 1;
            }
        }
        debug_assert_eq!(k, target);
        Ok(q.galois(g))
    }

    /// `sigma_g^k(self)`.
    fn galois_pow(&self, g: u32, k: u32) -> Scalar {
        if self.order == 1 {
            return self.clone();
        }
        let n = self.order as u64;
        let mut e = 1u64;
        let mut base = g as u64 % n;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                e = e * base % n;
            }
            base = base * base % n;
            k >>= 1;
        }
        self.galois(e as u32)
    }

    /// Galois automorphism `zeta -> zeta^k`, `gcd(k, N) = 1`.
    pub fn galois(&self, k: u32) -> Scalar {
        if self.order == 1 {
            return self.clone();
        }
        let c = cyclo::ctx(self.order);
        let mut s = Scalar {
            order: self.order,
            num: self.galois_raw(c, k % self.order),
            den: self.den.clone(),
        };
        s.normalize();
        s
    }

    fn galois_raw(&self, c: &cyclo::Cyclo, k: u32) -> Vec<BigInt> {
        let n = c.order as usize;
        let mut acc = vec![BigInt::zero(); c.phi];
        for (e, coef) in self.num.iter().enumerate() {
            if !coef.is_zero() {
                add_scaled_row(&mut acc, coef, &c.powers[(e * k as usize) % n]);
            }
        }
        acc
    }

    /// Complex conjugate under the standard embedding `zeta -> exp(2 pi i/N)`.
    pub fn conj(&self) -> Scalar {
        if self.order <= 2 {
            return self.clone();
        }
        self.galois(self.order - 1)
    }

    pub fn is_real(&self) -> bool {
        self.order == 1 || self.conj() == *self
    }

    /// Multiplies by a rational.
    pub fn scale(&self, r: &BigRational) -> Scalar {
        self.scale_parts(r.numer(), r.denom())
    }

    fn scale_parts(&self, n: &BigInt, d: &BigInt) -> Scalar {
        let mut s = Scalar {
            order: self.order,
            num: self.num.iter().map(|x| x * n).collect(),
            den: &self.den * d,
        };
        s.normalize();
        s
    }

    fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    /// Sign of a real element: -1, 0 or 1. Fails for non-real elements.
    pub fn signum(&self) -> Result<i32> {
        if self.is_zero() {
            return Ok(0);
        }
        if self.order == 1 {
            return Ok(if self.num[0].is_positive() { 1 } else { -1 });
        }
        if !self.is_real() {
            return Err(Error::NotReal);
        }
        Ok(approx::real_sign(self.order, &self.num))
    }

    /// Floating-point value under the standard complex embedding, with an
    /// absolute error bound.
    pub fn approx(&self) -> (f64, f64, f64) {
        approx::approx_complex(cyclo::ctx(self.order), &self.num, &self.den)
    }

    /// Real part under the standard embedding (lossy; for display and
    /// prefiltering only).
    pub fn to_f64(&self) -> f64 {
        self.approx().0
    }

    /// Sum of absolute numerators: a cheap size measure.
    pub fn height(&self) -> BigInt {
        self.num.iter().map(|n| n.abs()).sum::<BigInt>() + &self.den
    }

    pub(crate) fn raw_parts(&self) -> (u32, &[BigInt], &BigInt) {
        (self.order, &self.num, &self.den)
    }
}

fn add_scaled_row(acc: &mut [BigInt], coef: &BigInt, row: &[i64]) {
    for (a, &r) in acc.iter_mut().zip(row) {
        match r {
            0 => {}
            1 => *a += coef,
            -1 => *a -= coef,
            _ => *a += coef * r,
        }
    }
}

/// Polynomial product mod `Phi_N` in i128 when the operands are small enough
/// that nothing can overflow.
fn small_product(c: &cyclo::Cyclo, a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let bits = |v: &[BigInt]| v.iter().map(BigInt::bits).max().unwrap_or(0);
    if bits(a) + bits(b) + c.mul_headroom > 126 {
        return None;
    }
    let a: Vec<i128> = a.iter().map(|x| x.to_i128()).collect::<Option<_>>()?;
    let b: Vec<i128> = b.iter().map(|x| x.to_i128()).collect::<Option<_>>()?;
    let mut raw = vec![0i128; 2 * c.phi - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            raw[i + j] += x * y;
        }
    }
    let mut out = vec![0i128; c.phi];
    for (e, &v) in raw.iter().enumerate() {
        if v == 0 {
            continue;
        }
        if e < c.phi {
            out[e] += v;
        } else {
            for (o, &r) in out.iter_mut().zip(&c.powers[e % c.order as usize]) {
                *o += v * r as i128;
            }
        }
    }
    Some(out.into_iter().map(BigInt::from).collect())
}

fn reduce(c: &cyclo::Cyclo, raw: Vec<BigInt>) -> Vec<BigInt> {
    let n = c.order as usize;
    let mut out = vec![BigInt::zero(); c.phi];
    for (e, coef) in raw.into_iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let e = e % n;
        if e < c.phi {
            out[e] += coef;
        } else {
            add_scaled_row(&mut out, &coef, &c.powers[e]);
        }
    }
    out
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        // every element is stored in its minimal cyclotomic field
        self.order == other.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.order.hash(state);
        self.den.hash(state);
        self.num.hash(state);
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::from_rational(v)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        for n in &mut self.num {
            *n = -&*n;
        }
        self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("scalar {}: {e}", stringify!($method)))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            return write!(f, "{}", text::format_rational_parts(&self.num[0], &self.den));
        }
        let mut first = true;
        for (e, n) in self.num.iter().enumerate() {
            if n.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", text::format_rational_parts(n, &self.den))?;
            if e > 0 {
                write!(f, "*z{}^{}", self.order, e)?;
            }
        }
        Ok(())
    }
}

pub use text::{format_rational, parse_rational};

/// Rational to f64 without overflow for large numerators/denominators.
pub(crate) fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
        _ => {
            let shift = (n.bits().max(d.bits()) as i64 - 60).max(0) as usize;
            let a = (n >> shift).to_f64().unwrap_or(0.0);
            let b = (d >> shift).to_f64().unwrap_or(1.0);
            a / b
        }
    }
}
