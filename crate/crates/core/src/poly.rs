//! Homogeneous polynomials over [`Scalar`] and univariate polynomials used
//! for symbolic substitutions.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponent vectors of all degree-`d` monomials in `k` variables, in
/// decreasing lexicographic order (`X1^d` first).
pub fn monomials(k: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == k {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(k, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(k, d, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

fn monomial_value(exp: &[u32], x: &[Scalar]) -> Scalar {
    let mut v = Scalar::one();
    for (e, xi) in exp.iter().zip(x) {
        for _ in 0..*e {
            v = v * xi;
        }
    }
    v
}

/// A homogeneous polynomial of degree `d` in `k` variables. Only nonzero
/// terms are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct HPoly {
    k: usize,
    d: u32,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl HPoly {
    pub fn zero(k: usize, d: u32) -> Self {
        HPoly {
            k,
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(k: usize, d: u32, terms: Vec<(Vec<u32>, Scalar)>) -> Result<Self> {
        let mut p = HPoly::zero(k, d);
        for (exp, c) in terms {
            if exp.len() != k || exp.iter().sum::<u32>() != d {
                return Err(Error::InvalidInput(format!(
                    "monomial {exp:?} is not of degree {d} in {k} variables"
                )));
            }
            p.add_term(exp, c);
        }
        Ok(p)
    }

    /// The coordinate function `X_{i+1}`.
    pub fn var(k: usize, i: usize) -> Self {
        let mut exp = vec![0; k];
        exp[i] = 1;
        HPoly::from_terms(k, 1, vec![(exp, Scalar::one())]).expect("valid monomial")
    }

    /// The linear form `sum c_i X_i`.
    pub fn linear(c: &[Scalar]) -> Self {
        let k = c.len();
        let mut p = HPoly::zero(k, 1);
        for (i, ci) in c.iter().enumerate() {
            let mut exp = vec![0; k];
            exp[i] = 1;
            p.add_term(exp, ci.clone());
        }
        p
    }

    /// The polynomial with coefficient vector `c` in the order of
    /// [`monomials`].
    pub fn from_coefficients(k: usize, d: u32, c: &[Scalar]) -> Self {
        let mut p = HPoly::zero(k, d);
        for (exp, ci) in monomials(k, d).into_iter().zip(c) {
            p.add_term(exp, ci.clone());
        }
        p
    }

    pub fn coefficients(&self) -> Vec<Scalar> {
        monomials(self.k, self.d)
            .iter()
            .map(|e| self.coeff(e))
            .collect()
    }

    fn add_term(&mut self, exp: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Scalar::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn coeff(&self, exp: &[u32]) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.k, "point has the wrong number of coordinates");
        self.terms
            .iter()
            .map(|(e, c)| c * &monomial_value(e, x))
            .sum()
    }

    fn check_same(&self, other: &HPoly) -> Result<()> {
        if self.k != other.k || self.d != other.d {
            return Err(Error::InvalidInput(format!(
                "cannot combine polynomials of shape ({}, {}) and ({}, {})",
                self.k, self.d, other.k, other.d
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &HPoly) -> Result<HPoly> {
        self.check_same(other)?;
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        Ok(p)
    }

    pub fn try_sub(&self, other: &HPoly) -> Result<HPoly> {
        self.try_add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> HPoly {
        let mut p = HPoly::zero(self.k, self.d);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c * s);
        }
        p
    }

    pub fn try_mul(&self, other: &HPoly) -> Result<HPoly> {
        if self.k != other.k {
            return Err(Error::InvalidInput("variable counts differ".into()));
        }
        let mut p = HPoly::zero(self.k, self.d + other.d);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        Ok(p)
    }

    /// `d/dX_{i+1}`.
    pub fn partial(&self, i: usize) -> HPoly {
        let mut p = HPoly::zero(self.k, self.d.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            p.add_term(e2, c * &Scalar::from_int(e[i] as i64));
        }
        p
    }

    pub fn gradient_at(&self, x: &[Scalar]) -> Vec<Scalar> {
        (0..self.k).map(|i| self.partial(i).eval(x)).collect()
    }

    /// `f(y + t q)` as a polynomial in `t`.
    pub fn along_line(&self, y: &[Scalar], q: &[Scalar]) -> UPoly {
        let lin: Vec<UPoly> = y
            .iter()
            .zip(q)
            .map(|(a, b)| UPoly::new(vec![a.clone(), b.clone()]))
            .collect();
        let mut acc = UPoly::zero();
        for (e, c) in &self.terms {
            let mut t = UPoly::constant(c.clone());
            for (ei, li) in e.iter().zip(&lin) {
                for _ in 0..*ei {
                    t = t.mul(li);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    if p == 1 {
                        format!("X{}", i + 1)
                    } else {
                        format!("X{}^{}", i + 1, p)
                    }
                })
                .collect();
            match (c.is_one(), mono.is_empty()) {
                (true, false) => write!(f, "{}", mono.join("*"))?,
                (_, true) => write!(f, "({c})")?,
                (false, false) => write!(f, "({c})*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPoly[k={}, d={}]({self})", self.k, self.d)
    }
}

#[derive(Serialize, Deserialize)]
struct HPolyRepr {
    k: usize,
    d: u32,
    terms: Vec<(Vec<u32>, Scalar)>,
}

impl Serialize for HPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HPolyRepr {
            k: self.k,
            d: self.d,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = HPolyRepr::deserialize(d)?;
        HPoly::from_terms(r.k, r.d, r.terms).map_err(D::Error::custom)
    }
}

/// A univariate polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(Vec<Scalar>);

impl UPoly {
    pub fn new(mut c: Vec<Scalar>) -> Self {
        while c.last().is_some_and(Scalar::is_zero) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: Scalar) -> Self {
        UPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.0.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.0
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = Scalar::zero();
        UPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Scalar::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = &c[i + j] + &(a * b);
                }
            }
        }
        UPoly::new(c)
    }

    pub fn scale(&self, s: &Scalar) -> UPoly {
        UPoly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Scalar::from_int(i as i64))
                .collect(),
        )
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, d: &UPoly) -> UPoly {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().unwrap().inverse().expect("nonzero leading coefficient");
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let f = &r[top] * &inv;
            for (i, c) in d.0.iter().enumerate() {
                let slot = top - dd + i;
                r[slot] = &r[slot] - &(&f * c);
            }
            r.pop();
            while r.last().is_some_and(Scalar::is_zero) {
                r.pop();
            }
        }
        UPoly::new(r)
    }

    /// The polynomial of degree `< xs.len()` through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[Scalar], ys: &[Scalar]) -> UPoly {
        let mut acc = UPoly::zero();
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = UPoly::constant(Scalar::one());
            let mut denom = Scalar::one();
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&UPoly::new(vec![-xj, Scalar::one()]));
                    denom = denom * (xi - xj);
                }
            }
            acc = acc.add(&basis.scale(&(yi / &denom)));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(4, 2).len(), 10);
        assert_eq!(monomials(3, 3).len(), 10);
        assert_eq!(monomials(4, 3).len(), 20);
        assert_eq!(monomials(4, 2)[0], vec![2, 0, 0, 0]);
    }

    #[test]
    fn product_and_evaluation() {
        let x1 = HPoly::var(4, 0);
        let x4 = HPoly::var(4, 3);
        let p = x1.try_mul(&x4).unwrap();
        assert_eq!(p.to_string(), "X1*X4");
        assert_eq!(p.eval(&[s(2), s(5), s(7), s(3)]), s(6));
        assert_eq!(p.partial(0), x4);
    }

    #[test]
    fn cancellation_leaves_zero() {
        let x = HPoly::var(3, 1);
        assert!(x.try_sub(&x).unwrap().is_zero());
    }

    #[test]
    fn line_substitution() {
        // (y1 + t q1)^2 with y = (1, 0), q = (2, 0)
        let x1 = HPoly::var(2, 0);
        let sq = x1.try_mul(&x1).unwrap();
        let u = sq.along_line(&[s(1), s(0)], &[s(2), s(0)]);
        assert_eq!(u.coeffs(), &[s(1), s(4), s(4)]);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = UPoly::new(vec![s(3), s(-1), s(0), s(2)]);
        let xs: Vec<Scalar> = (0..4).map(s).collect();
        let ys: Vec<Scalar> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(UPoly::interpolate(&xs, &ys), p);
    }

    #[test]
    fn remainder() {
        // x^3 - 1 = (x - 1)(x^2 + x + 1)
        let p = UPoly::new(vec![s(-1), s(0), s(0), s(1)]);
        let d = UPoly::new(vec![s(1), s(1), s(1)]);
        assert!(p.rem(&d).is_zero());
        assert_eq!(p.rem(&UPoly::new(vec![s(0), s(1)])), UPoly::constant(s(-1)));
    }

    #[test]
    fn json_shape() {
        let p = HPoly::var(4, 2).scale(&Scalar::from_ratio(1, 2));
        let j = serde_json::to_value(&p).unwrap();
        assert_eq!(j["k"], 4);
        assert_eq!(j["d"], 1);
        assert_eq!(j["terms"][0][0], serde_json::json!([0, 0, 1, 0]));
        let back: HPoly = serde_json::from_value(j).unwrap();
        assert_eq!(back, p);
    }
}
