//! Points, planes and lines of real projective 3-space with exact incidence.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;

/// Scales `v` so its first nonzero entry is 1. Returns false for the zero vector.
pub fn canonicalize(v: &mut [Scalar]) -> bool {
    let Some(lead) = v.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if !v[lead].is_one() {
        let inv = v[lead].inverse().expect("leading entry is nonzero");
        for x in &mut v[lead..] {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
    }
    true
}

macro_rules! homogeneous_type {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(try_from = "Vec<Scalar>", into = "Vec<Scalar>")]
        pub struct $name([Scalar; 4]);

        impl $name {
            pub fn new(mut c: [Scalar; 4]) -> Result<Self> {
                if !canonicalize(&mut c) {
                    return Err(Error::InvalidInput(format!(
                        "{} with all coordinates zero",
                        stringify!($name)
                    )));
                }
                Ok($name(c))
            }

            pub fn from_ints(c: [i64; 4]) -> Self {
                Self::new(c.map(Scalar::from_int)).expect("nonzero integer vector")
            }

            pub fn coords(&self) -> &[Scalar; 4] {
                &self.0
            }

            pub fn field_order(&self) -> u32 {
                self.0.iter().fold(1, |acc, x| {
                    num_integer::Integer::lcm(&acc, &x.order())
                })
            }
        }

        impl TryFrom<Vec<Scalar>> for $name {
            type Error = Error;
            fn try_from(v: Vec<Scalar>) -> Result<Self> {
                let arr: [Scalar; 4] = v.try_into().map_err(|v: Vec<Scalar>| {
                    Error::Parse(format!("expected 4 coordinates, got {}", v.len()))
                })?;
                Self::new(arr)
            }
        }

        impl From<$name> for Vec<Scalar> {
            fn from(p: $name) -> Vec<Scalar> {
                p.0.to_vec()
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(
                    f,
                    "{}({}, {}, {}, {})",
                    stringify!($name),
                    self.0[0],
                    self.0[1],
                    self.0[2],
                    self.0[3]
                )
            }
        }
    };
}

homogeneous_type!(ProjPoint, "A point of PG(3, R) in leading-one canonical form.");
homogeneous_type!(
    ProjPlane,
    "The plane `sum c_i X_i = 0`, coefficients in leading-one canonical form."
);

impl ProjPoint {
    /// The same coordinates read as plane coefficients (projective duality).
    pub fn dual(&self) -> ProjPlane {
        ProjPlane(self.0.clone())
    }
}

impl ProjPlane {
    pub fn dual(&self) -> ProjPoint {
        ProjPoint(self.0.clone())
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        dot4(&self.0, &p.0).is_zero()
    }

    pub fn eval(&self, p: &ProjPoint) -> Scalar {
        dot4(&self.0, &p.0)
    }
}

pub fn incident(p: &ProjPoint, h: &ProjPlane) -> bool {
    h.contains(p)
}

pub fn dot4(a: &[Scalar; 4], b: &[Scalar; 4]) -> Scalar {
    linalg::dot(a, b)
}

pub(crate) fn minor2(a: &[Scalar; 4], b: &[Scalar; 4], i: usize, j: usize) -> Scalar {
    let x = if a[i].is_zero() || b[j].is_zero() {
        Scalar::zero()
    } else {
        &a[i] * &b[j]
    };
    if a[j].is_zero() || b[i].is_zero() {
        x
    } else {
        x - &a[j] * &b[i]
    }
}

fn mul_nz(a: &Scalar, b: &Scalar) -> Scalar {
    if a.is_zero() || b.is_zero() {
        Scalar::zero()
    } else {
        a * b
    }
}

/// Generalized cross product: the vector `w` with `w . x = det(a, b, c, x)`.
pub fn cross3(a: &[Scalar; 4], b: &[Scalar; 4], c: &[Scalar; 4]) -> [Scalar; 4] {
    let m01 = minor2(a, b, 0, 1);
    let m02 = minor2(a, b, 0, 2);
    let m03 = minor2(a, b, 0, 3);
    let m12 = minor2(a, b, 1, 2);
    let m13 = minor2(a, b, 1, 3);
    let m23 = minor2(a, b, 2, 3);
    // expansion of det(a, b, c, x) along the last row
    let w0 = -(mul_nz(&c[1], &m23) - mul_nz(&c[2], &m13) + mul_nz(&c[3], &m12));
    let w1 = mul_nz(&c[0], &m23) - mul_nz(&c[2], &m03) + mul_nz(&c[3], &m02);
    let w2 = -(mul_nz(&c[0], &m13) - mul_nz(&c[1], &m03) + mul_nz(&c[3], &m01));
    let w3 = mul_nz(&c[0], &m12) - mul_nz(&c[1], &m02) + mul_nz(&c[2], &m01);
    [w0, w1, w2, w3]
}

pub fn det4_raw(a: &[Scalar; 4], b: &[Scalar; 4], c: &[Scalar; 4], d: &[Scalar; 4]) -> Scalar {
    dot4(&cross3(a, b, c), d)
}

/// Determinant of the 4x4 matrix of canonical coordinates.
pub fn det4(rows: [&ProjPoint; 4]) -> Scalar {
    det4_raw(&rows[0].0, &rows[1].0, &rows[2].0, &rows[3].0)
}

pub fn coplanar(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint, d: &ProjPoint) -> bool {
    det4([a, b, c, d]).is_zero()
}

/// Floating-point image of a 4-vector under the standard complex embedding,
/// with per-coordinate error bounds. Used only to skip exact zero tests whose
/// outcome is certainly "nonzero".
#[derive(Clone, Copy, Debug)]
pub struct Approx4 {
    re: [f64; 4],
    im: [f64; 4],
    err: [f64; 4],
}

impl Approx4 {
    pub fn of(v: &[Scalar; 4]) -> Self {
        let mut a = Approx4 {
            re: [0.0; 4],
            im: [0.0; 4],
            err: [0.0; 4],
        };
        for i in 0..4 {
            let (r, m, e) = v[i].approx();
            a.re[i] = r;
            a.im[i] = m;
            a.err[i] = e;
        }
        a
    }

    /// Sign of the real pairing `sum a_i b_i` when the approximation
    /// decides it.
    pub fn pairing_sign(&self, b: &Approx4) -> Option<i32> {
        let (mut re, mut err) = (0.0f64, 0.0f64);
        for i in 0..4 {
            let (ar, ai, br, bi) = (self.re[i], self.im[i], b.re[i], b.im[i]);
            re += ar * br - ai * bi;
            let amag = ar.abs() + ai.abs();
            let bmag = br.abs() + bi.abs();
            err += 2.0 * (self.err[i] * bmag + b.err[i] * amag + 2.0 * self.err[i] * b.err[i])
                + 1e-14 * amag * bmag;
        }
        if err.is_finite() && re.abs() > err {
            Some(if re > 0.0 { 1 } else { -1 })
        } else {
            None
        }
    }

    /// False only when the pairing `sum a_i b_i` is certainly nonzero.
    pub fn may_vanish(&self, b: &Approx4) -> bool {
        let (mut re, mut im, mut err) = (0.0f64, 0.0f64, 0.0f64);
        for i in 0..4 {
            let (ar, ai, br, bi) = (self.re[i], self.im[i], b.re[i], b.im[i]);
            re += ar * br - ai * bi;
            im += ar * bi + ai * br;
            let amag = ar.abs() + ai.abs();
            let bmag = br.abs() + bi.abs();
            err += 2.0 * (self.err[i] * bmag + b.err[i] * amag + 2.0 * self.err[i] * b.err[i])
                + 1e-14 * amag * bmag;
        }
        !(err.is_finite() && re.abs() + im.abs() > err)
    }
}

/// The canonical plane through three non-collinear points.
pub fn plane_through(p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> Result<ProjPlane> {
    let mut w = cross3(&p1.0, &p2.0, &p3.0);
    if !canonicalize(&mut w) {
        return Err(Error::CollinearInput);
    }
    Ok(ProjPlane(w))
}

/// The point common to three planes in general position.
pub fn point_of_planes(h1: &ProjPlane, h2: &ProjPlane, h3: &ProjPlane) -> Result<ProjPoint> {
    let mut w = cross3(&h1.0, &h2.0, &h3.0);
    if !canonicalize(&mut w) {
        return Err(Error::CollinearInput);
    }
    Ok(ProjPoint(w))
}

pub fn collinear(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    let m: Matrix = vec![a.0.to_vec(), b.0.to_vec(), c.0.to_vec()];
    linalg::rank(&m) < 3
}

/// A line of PG(3, R), keyed by canonical Plücker coordinates so that span
/// and meet constructions of the same line compare equal.
#[derive(Clone)]
pub struct ProjLine {
    key: [Scalar; 6],
    points: [ProjPoint; 2],
    planes: [ProjPlane; 2],
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn plucker(a: &[Scalar; 4], b: &[Scalar; 4]) -> [Scalar; 6] {
    PAIRS.map(|(i, j)| minor2(a, b, i, j))
}

/// Basis of the 2-dimensional complement `{x : u.x = v.x = 0}`.
fn complement_pair(u: &[Scalar; 4], v: &[Scalar; 4]) -> Option<[[Scalar; 4]; 2]> {
    let m: Matrix = vec![u.to_vec(), v.to_vec()];
    let ns = linalg::nullspace(&m, 4);
    if ns.len() != 2 {
        return None;
    }
    let mut it = ns.into_iter().map(|v| -> [Scalar; 4] { v.try_into().unwrap() });
    Some([it.next().unwrap(), it.next().unwrap()])
}

impl ProjLine {
    pub fn through(a: &ProjPoint, b: &ProjPoint) -> Result<Self> {
        let mut key = plucker(&a.0, &b.0);
        if !canonicalize(&mut key) {
            return Err(Error::InvalidInput("line through coincident points".into()));
        }
        let [u, v] = complement_pair(&a.0, &b.0).expect("distinct points span a line");
        Ok(ProjLine {
            key,
            points: [a.clone(), b.clone()],
            planes: [ProjPlane::new(u)?, ProjPlane::new(v)?],
        })
    }

    pub fn meet(h1: &ProjPlane, h2: &ProjPlane) -> Result<Self> {
        let Some([a, b]) = complement_pair(&h1.0, &h2.0) else {
            return Err(Error::InvalidInput("meet of coincident planes".into()));
        };
        let a = ProjPoint::new(a)?;
        let b = ProjPoint::new(b)?;
        let mut line = Self::through(&a, &b)?;
        line.planes = [h1.clone(), h2.clone()];
        Ok(line)
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.planes.iter().all(|h| h.contains(p))
    }

    pub fn lies_in(&self, h: &ProjPlane) -> bool {
        self.points.iter().all(|p| h.contains(p))
    }

    pub fn points(&self) -> &[ProjPoint; 2] {
        &self.points
    }

    pub fn planes(&self) -> &[ProjPlane; 2] {
        &self.planes
    }

    pub fn plucker_key(&self) -> &[Scalar; 6] {
        &self.key
    }

    /// Intersection with a plane not containing the line.
    pub fn meet_plane(&self, h: &ProjPlane) -> Result<ProjPoint> {
        let [a, b] = &self.points;
        let ha = h.eval(a);
        let hb = h.eval(b);
        if ha.is_zero() && hb.is_zero() {
            return Err(Error::InvalidInput("line lies in the plane".into()));
        }
        // hb * a - ha * b lies on h
        let c: [Scalar; 4] =
            std::array::from_fn(|i| mul_nz(&hb, &a.0[i]) - mul_nz(&ha, &b.0[i]));
        ProjPoint::new(c)
    }
}

impl PartialEq for ProjLine {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for ProjLine {}

impl std::hash::Hash for ProjLine {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl fmt::Debug for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjLine({:?}, {:?})", self.points[0], self.points[1])
    }
}

/// Central projection of each target from `p` onto `screen`.
pub fn project_from(
    p: &ProjPoint,
    targets: &[ProjPoint],
    screen: &ProjPlane,
) -> Result<Vec<ProjPoint>> {
    if screen.contains(p) {
        return Err(Error::CenterOnScreen);
    }
    targets
        .iter()
        .map(|t| {
            if t == p {
                return Err(Error::TargetEqualsCenter);
            }
            ProjLine::through(p, t)?.meet_plane(screen)
        })
        .collect()
}

/// An invertible linear map of R^4 acting on points and (contragrediently)
/// on planes.
#[derive(Clone, Debug)]
pub struct Projectivity {
    m: Matrix,
    inv_t: Matrix,
}

impl Projectivity {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.len() != 4 || m.iter().any(|r| r.len() != 4) {
            return Err(Error::InvalidInput("projectivity must be 4x4".into()));
        }
        let inv = linalg::inverse(&m)
            .ok_or_else(|| Error::InvalidInput("singular projectivity".into()))?;
        Ok(Projectivity {
            m,
            inv_t: linalg::transpose(&inv),
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let v = linalg::mat_vec(&self.m, &p.0);
        ProjPoint::new(v.try_into().unwrap()).expect("invertible map")
    }

    pub fn apply_plane(&self, h: &ProjPlane) -> ProjPlane {
        let v = linalg::mat_vec(&self.inv_t, &h.0);
        ProjPlane::new(v.try_into().unwrap()).expect("invertible map")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: [i64; 4]) -> ProjPoint {
        ProjPoint::from_ints(c)
    }

    #[test]
    fn simplex_determinant() {
        let e = [
            pt([1, 0, 0, 0]),
            pt([0, 1, 0, 0]),
            pt([0, 0, 1, 0]),
            pt([0, 0, 0, 1]),
        ];
        assert_eq!(det4([&e[0], &e[1], &e[2], &e[3]]), Scalar::one());
        assert!(det4([&e[0], &e[1], &e[0], &e[3]]).is_zero());
    }

    #[test]
    fn planes_through_points() {
        let e1 = pt([1, 0, 0, 0]);
        let e2 = pt([0, 1, 0, 0]);
        let e3 = pt([0, 0, 1, 0]);
        let e4 = pt([0, 0, 0, 1]);
        assert_eq!(plane_through(&e1, &e2, &e3).unwrap(), ProjPlane::from_ints([0, 0, 0, 1]));
        assert_eq!(plane_through(&e1, &e2, &e4).unwrap(), ProjPlane::from_ints([0, 0, 1, 0]));
        let h = plane_through(&pt([1, 0, 0, 1]), &pt([0, 1, 0, 1]), &pt([0, 0, 1, 1])).unwrap();
        assert_eq!(h, ProjPlane::from_ints([1, 1, 1, -1]));
        assert!(matches!(
            plane_through(&e1, &e2, &pt([1, 1, 0, 0])),
            Err(Error::CollinearInput)
        ));
    }

    #[test]
    fn projections() {
        let screen = ProjPlane::from_ints([0, 0, 0, 1]);
        let p = pt([0, 0, 0, 1]);
        let out = project_from(&p, &[pt([1, 0, 0, 1]), pt([1, 2, 3, 4])], &screen).unwrap();
        assert_eq!(out, vec![pt([1, 0, 0, 0]), pt([1, 2, 3, 0])]);
        let screen = ProjPlane::from_ints([0, 0, 1, 0]);
        let t = pt([1, 5, 0, 2]);
        let out = project_from(&pt([0, 0, 1, 0]), std::slice::from_ref(&t), &screen).unwrap();
        assert_eq!(out[0], t);
        assert!(matches!(
            project_from(&pt([0, 0, 1, 0]), &[pt([0, 0, 1, 0])], &screen),
            Err(Error::TargetEqualsCenter)
        ));
    }

    #[test]
    fn line_representations_agree() {
        let a = pt([1, 0, 0, 0]);
        let b = pt([0, 1, 0, 0]);
        let span = ProjLine::through(&a, &b).unwrap();
        let meet = ProjLine::meet(
            &ProjPlane::from_ints([0, 0, 1, 0]),
            &ProjPlane::from_ints([0, 0, 1, 1]),
        )
        .unwrap();
        assert_eq!(span, meet);
        assert!(meet.contains(&pt([3, 7, 0, 0])));
        assert!(!meet.contains(&pt([3, 7, 1, 0])));
        let other = ProjLine::through(&pt([1, 1, 0, 0]), &pt([1, -1, 0, 0])).unwrap();
        assert_eq!(span, other);
    }
}
