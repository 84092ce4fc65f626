//! Per-order tables for Q(zeta_N): the cyclotomic polynomial, reductions of
//! `x^e mod Phi_N`, and the Galois group.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Largest order for which tables can be built at all. The user-facing cap
/// (see [`super::set_max_order`]) is usually much smaller.
pub const HARD_MAX_ORDER: u32 = 1024;

pub(crate) struct Cyclo {
    pub order: u32,
    pub phi: usize,
    /// `powers[e]` is `x^e mod Phi_N` for `0 <= e < N`, as a dense vector of
    /// length `phi`.
    pub powers: Vec<Vec<i64>>,
    /// Generators `(g, order)` of a cyclic decomposition of (Z/N)^*.
    pub generators: Vec<(u32, u32)>,
    /// Bits of growth a product can add beyond its operands' sizes.
    pub mul_headroom: u64,
    /// `(cos, sin)` of `2 pi e / N`.
    pub approx: Vec<(f64, f64)>,
    /// The maximal proper cyclotomic subfields Q(zeta_{N/p}), one per prime p | N.
    pub subfields: Vec<Subfield>,
}

pub(crate) struct Subfield {
    /// Folded order of the subfield.
    pub order: u32,
    /// Generator of Gal(Q(zeta_N) / subfield).
    pub gen: u32,
    /// Promotion from the subfield is a plain spread of coefficients by
    /// this step (exponent `j` goes to `j * step`), when available.
    pub spread: Option<usize>,
    solve: OnceLock<Restriction>,
}

/// Left inverse of the promotion matrix restricted to `rows`.
pub(crate) struct Restriction {
    pub rows: Vec<usize>,
    pub inv: Vec<Vec<BigRational>>,
}

static TABLES: [OnceLock<Cyclo>; HARD_MAX_ORDER as usize + 1] =
    [const { OnceLock::new() }; HARD_MAX_ORDER as usize + 1];

pub(crate) fn ctx(order: u32) -> &'static Cyclo {
    assert!(
        (1..=HARD_MAX_ORDER).contains(&order),
        "cyclotomic order {order} outside supported range"
    );
    TABLES[order as usize].get_or_init(|| Cyclo::build(order))
}

pub fn totient(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// Integer coefficients (constant term first) of the n-th cyclotomic
/// polynomial.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // x^n - 1 divided by every Phi_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let qlen = rem.len() - dd;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

impl Cyclo {
    fn build(order: u32) -> Self {
        let phi_poly = cyclotomic_poly(order);
        let phi = phi_poly.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by x, then eliminate the x^phi term
            let top = cur[phi - 1];
            for j in (1..phi).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for j in 0..phi {
                    cur[j] -= top * phi_poly[j];
                }
            }
        }
        let approx = (0..order)
            .map(|e| {
                let t = TAU * e as f64 / order as f64;
                (t.cos(), t.sin())
            })
            .collect();
        let subfields = if order == 1 {
            Vec::new()
        } else {
            prime_factors(order)
                .into_iter()
                .map(|p| Subfield::build(order, phi, p))
                .collect()
        };
        let max_entry = powers
            .iter()
            .flatten()
            .map(|v: &i64| v.unsigned_abs())
            .max()
            .unwrap_or(1);
        let log2 = |x: u64| 64 - x.leading_zeros() as u64;
        let mul_headroom = 2 * log2(2 * phi as u64) + log2(max_entry) + 1;
        Cyclo {
            order,
            phi,
            powers,
            generators: unit_generators(order),
            mul_headroom,
            approx,
            subfields,
        }
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mult_order(g: u64, n: u64) -> u32 {
    let mut x = g % n;
    let mut o = 1;
    while x != 1 % n {
        x = x * g % n;
        o += 1;
    }
    o
}

/// One generator per cyclic factor of (Z/n)^*, lifted by CRT so it is 1
/// modulo the other prime powers.
fn unit_generators(n: u32) -> Vec<(u32, u32)> {
    let n64 = n as u64;
    let mut out = Vec::new();
    for p in prime_factors(n) {
        let mut q = 1u64;
        while n64.is_multiple_of(q * p as u64) {
            q *= p as u64;
        }
        let rest = n64 / q;
        // lift a residue mod q to n, 1 mod rest
        let lift = |r: u64| -> u32 {
            (0..rest)
                .map(|t| r + t * q)
                .find(|x| x % rest == 1 % rest)
                .expect("CRT lift exists") as u32
        };
        let phi_q = q / p as u64 * (p as u64 - 1);
        if p == 2 && q >= 8 {
            out.push((lift(q - 1), 2));
            out.push((lift(5), (q / 4) as u32));
        } else if phi_q > 1 {
            let g = (2..q)
                .find(|&g| g % p as u64 != 0 && mult_order(g, q) as u64 == phi_q)
                .expect("primitive root exists");
            out.push((lift(g), phi_q as u32));
        }
    }
    out
}

fn fold(order: u32) -> u32 {
    if order % 4 == 2 {
        order / 2
    } else {
        order
    }
}

impl Subfield {
    fn build(n: u32, phi: usize, p: u32) -> Self {
        let d = fold(n / p);
        let sub_phi = totient(d);
        let step = (n / d) as usize;
        let spread = (sub_phi * step == phi).then_some(step);
        // Gal(Q(zeta_n)/Q(zeta_d)) = {k unit mod n, k = 1 mod d}; it is cyclic
        let group: Vec<u32> = (1..n)
            .filter(|&k| k.gcd(&n) == 1 && k % d == 1 % d)
            .collect();
        let size = group.len();
        let gen = group
            .iter()
            .copied()
            .find(|&k| {
                let mut x = k as u64;
                let mut ord = 1;
                while x != 1 {
                    x = x * k as u64 % n as u64;
                    ord += 1;
                }
                ord == size
            })
            .expect("relative Galois group is cyclic");
        Subfield {
            order: d,
            gen,
            spread,
            solve: OnceLock::new(),
        }
    }

    /// Tables for reading subfield coordinates off an element of Q(zeta_n).
    pub fn restriction(&self, parent: &Cyclo) -> &Restriction {
        self.solve.get_or_init(|| {
            let n = parent.order as usize;
            let d = self.order as usize;
            let sub_phi = totient(self.order);
            let step = n / d;
            // promotion matrix: column j is zeta_n^(j * step) reduced
            let cols: Vec<&Vec<i64>> = (0..sub_phi).map(|j| &parent.powers[(j * step) % n]).collect();
            // pick independent rows by elimination on the transpose
            let mut t: Vec<Vec<BigRational>> = cols
                .iter()
                .map(|c| c.iter().map(|&v| BigRational::from_integer(v.into())).collect())
                .collect();
            let mut rows = Vec::new();
            let mut r = 0;
            for c in 0..parent.phi {
                if r == sub_phi {
                    break;
                }
                let Some(piv) = (r..sub_phi).find(|&i| !t[i][c].is_zero()) else {
                    continue;
                };
                t.swap(piv, r);
                let inv = t[r][c].recip();
                for i in r + 1..sub_phi {
                    if t[i][c].is_zero() {
                        continue;
                    }
                    let f = &t[i][c] * &inv;
                    for j in c..parent.phi {
                        let v = &f * &t[r][j];
                        t[i][j] -= v;
                    }
                }
                rows.push(c);
                r += 1;
            }
            assert_eq!(rows.len(), sub_phi, "promotion matrix has full column rank");
            let square: Vec<Vec<BigRational>> = rows
                .iter()
                .map(|&row| {
                    cols.iter()
                        .map(|c| BigRational::from_integer(c[row].into()))
                        .collect()
                })
                .collect();
            Restriction {
                rows,
                inv: invert(square),
            }
        })
    }
}

fn invert(mut a: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let n = a.len();
    for (i, row) in a.iter_mut().enumerate() {
        row.extend((0..n).map(|j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        }));
    }
    for c in 0..n {
        let piv = (c..n).find(|&i| !a[i][c].is_zero()).expect("invertible");
        a.swap(piv, c);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..2 * n {
                let v = &f * &a[c][j];
                a[i][j] -= v;
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(5), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn generators_span_the_unit_group() {
        for n in [3u32, 4, 8, 12, 16, 20, 44, 48, 60] {
            let gens = unit_generators(n);
            let size: u32 = gens.iter().map(|g| g.1).product();
            assert_eq!(size as usize, totient(n), "n = {n}");
            for &(g, o) in &gens {
                assert_eq!(mult_order(g as u64, n as u64), o);
            }
        }
    }

    #[test]
    fn degree_is_totient() {
        for n in 1..60 {
            assert_eq!(cyclotomic_poly(n).len() - 1, totient(n), "n = {n}");
        }
    }

    #[test]
    fn x_to_the_order_reduces_to_one() {
        for n in [3u32, 4, 5, 8, 12, 20, 24] {
            let c = ctx(n);
            // x^(N-1) * x == 1
            let last = &c.powers[n as usize - 1];
            let top = last[c.phi - 1];
            let mut shifted = vec![0i64; c.phi];
            shifted[1..c.phi].copy_from_slice(&last[..c.phi - 1]);
            let phi_poly = cyclotomic_poly(n);
            for j in 0..c.phi {
                shifted[j] -= top * phi_poly[j];
            }
            let mut one = vec![0i64; c.phi];
            one[0] = 1;
            assert_eq!(shifted, one);
        }
    }
}
