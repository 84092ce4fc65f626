//! Exact dense linear algebra over [`Scalar`].
//!
//! Determinant and rank use fraction-free (Bareiss) elimination; null spaces
//! come from a reduced row echelon form.

use crate::scalar::Scalar;

pub type Matrix = Vec<Vec<Scalar>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Scalar::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

pub fn transpose(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "dimension mismatch");
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, r)| !x.is_zero() && !r[j].is_zero())
                        .map(|(x, r)| x * &r[j])
                        .sum()
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Bareiss elimination; returns `(rank, det_if_square_full_rank)`.
fn bareiss(m: &Matrix) -> (usize, Scalar) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = Scalar::one();
    let mut sign = 1i32;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        let prev_inv = prev.inverse().expect("pivot is nonzero");
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &(&a[i][j] * &a[r][c]) - &(&a[i][c] * &a[r][j]);
                a[i][j] = if prev.is_one() { v } else { &v * &prev_inv };
            }
            a[i][c] = Scalar::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    let det = if rows == cols && r == rows {
        if sign < 0 {
            -prev
        } else {
            prev
        }
    } else {
        Scalar::zero()
    };
    (r, det)
}

pub fn det(m: &Matrix) -> Scalar {
    assert!(m.iter().all(|r| r.len() == m.len()), "det of non-square matrix");
    if m.is_empty() {
        return Scalar::one();
    }
    bareiss(m).1
}

pub fn rank(m: &Matrix) -> usize {
    bareiss(m).0
}

/// Reduced row echelon form with pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].inverse().expect("pivot is nonzero");
        for j in c..cols {
            if !a[r][j].is_zero() {
                a[r][j] = &a[r][j] * &inv;
            }
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..cols {
                if !a[r][j].is_zero() {
                    a[i][j] = &a[i][j] - &(&f * &a[r][j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of `{x : m x = 0}`, one vector per free column (free entry 1).
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Scalar>> {
    if m.is_empty() {
        return (0..cols)
            .map(|j| {
                let mut v = vec![Scalar::zero(); cols];
                v[j] = Scalar::one();
                v
            })
            .collect();
    }
    let (a, pivots) = rref(m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Basis of `{y : y^T m = 0}`.
pub fn left_kernel(m: &Matrix) -> Vec<Vec<Scalar>> {
    nullspace(&transpose(m), m.len())
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let (a, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
            .collect()
    }

    #[test]
    fn determinant_and_rank() {
        let m = int_matrix(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(det(&m), Scalar::zero());
        assert_eq!(rank(&m), 2);
        let m = int_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(det(&m), Scalar::from_int(-1));
        let m = int_matrix(&[&[1, 2, 3], &[0, 4, 5], &[1, 0, 6]]);
        assert_eq!(det(&m), Scalar::from_int(22));
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = int_matrix(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = nullspace(&m, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(&m, v).iter().all(Scalar::is_zero));
        }
        let lk = left_kernel(&m);
        assert_eq!(lk.len(), 1);
    }

    #[test]
    fn inverse_round_trip() {
        let m = int_matrix(&[&[1, 2, 3], &[0, 4, 5], &[1, 0, 6]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(3));
        assert!(inverse(&int_matrix(&[&[1, 2], &[2, 4]])).is_none());
    }
}
