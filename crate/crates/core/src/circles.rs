//! Ordinary circles of a planar set, counted directly and through the
//! inverse stereographic lift onto the sphere `x^2 + y^2 + z^2 = z`.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{ordinary_lines_2d, plane_census_with, CensusOptions};
use crate::error::{Error, Result};
use crate::generators::PointSet;
use crate::geometry::ProjPoint;
use crate::linalg::Matrix;
use crate::parallel;
use crate::poly::HPoly;
use crate::quadrics::{Pencil, QForm};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarPointSet {
    pub points: Vec<(Scalar, Scalar)>,
}

impl PlanarPointSet {
    pub fn new(points: Vec<(Scalar, Scalar)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if !p.0.is_real() || !p.1.is_real() {
                return Err(Error::NotReal);
            }
            if !seen.insert(p) {
                return Err(Error::InvalidInput(format!("point {i} is a duplicate")));
            }
        }
        Ok(PlanarPointSet { points })
    }

    pub fn from_ints(points: &[(i64, i64)]) -> Result<Self> {
        Self::new(points.iter().map(|&(u, v)| (Scalar::from_int(u), Scalar::from_int(v))).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The points as `(u, v, 1, 0)`, coplanar in projective 3-space.
    pub fn embedded(&self) -> Result<PointSet> {
        let pts = self
            .points
            .iter()
            .map(|(u, v)| ProjPoint::new([u.clone(), v.clone(), Scalar::one(), Scalar::zero()]))
            .collect::<Result<Vec<_>>>()?;
        PointSet::from_points(pts)
    }
}

/// The north pole `(0, 0, 1)` in homogeneous coordinates.
pub fn north_pole() -> ProjPoint {
    ProjPoint::from_ints([0, 0, 1, 1])
}

/// `(u, v) -> (u, v, u^2 + v^2) / (1 + u^2 + v^2)`, followed by the north
/// pole as the last point.
pub fn lift(s: &PlanarPointSet) -> Result<PointSet> {
    let mut pts = Vec::with_capacity(s.len() + 1);
    for (u, v) in &s.points {
        let w = u * u + v * v;
        let h = &w + &Scalar::one();
        pts.push(ProjPoint::new([u.clone(), v.clone(), w, h])?);
    }
    pts.push(north_pole());
    PointSet::from_points(pts)
}

/// `X1^2 + X2^2 + X3^2 - X3 X4`, the sphere through every lifted point.
pub fn sphere_form() -> QForm {
    let t = |e: [u32; 4], c: i64| (e.to_vec(), Scalar::from_int(c));
    let f = HPoly::from_terms(
        4,
        2,
        vec![t([2, 0, 0, 0], 1), t([0, 2, 0, 0], 1), t([0, 0, 2, 0], 1), t([0, 0, 1, 1], -1)],
    )
    .expect("degree 2 terms");
    QForm::from_hpoly(&f).expect("quadratic")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleKey {
    Circle { cx: Scalar, cy: Scalar, r2: Scalar },
    Line,
}

impl CircleKey {
    pub fn through(a: &(Scalar, Scalar), b: &(Scalar, Scalar), c: &(Scalar, Scalar)) -> Result<Self> {
        let d = (&a.0 * &(&b.1 - &c.1) + &b.0 * &(&c.1 - &a.1) + &c.0 * &(&a.1 - &b.1)) * Scalar::from_int(2);
        if d.is_zero() {
            return Ok(CircleKey::Line);
        }
        let sq = |p: &(Scalar, Scalar)| &p.0 * &p.0 + &p.1 * &p.1;
        let (na, nb, nc) = (sq(a), sq(b), sq(c));
        let inv = d.inverse()?;
        let cx = (&na * &(&b.1 - &c.1) + &nb * &(&c.1 - &a.1) + &nc * &(&a.1 - &b.1)) * &inv;
        let cy = (&na * &(&c.0 - &b.0) + &nb * &(&a.0 - &c.0) + &nc * &(&b.0 - &a.0)) * &inv;
        let (dx, dy) = (&a.0 - &cx, &a.1 - &cy);
        let r2 = &dx * &dx + &dy * &dy;
        Ok(CircleKey::Circle { cx, cy, r2 })
    }

    pub fn contains(&self, p: &(Scalar, Scalar)) -> bool {
        match self {
            CircleKey::Circle { cx, cy, r2 } => {
                let (dx, dy) = (&p.0 - cx, &p.1 - cy);
                (&dx * &dx + &dy * &dy) == *r2
            }
            CircleKey::Line => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdinaryCircle {
    pub circle: CircleKey,
    pub points: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleCount {
    pub count: usize,
    /// Sorted by point indices.
    pub circles: Vec<OrdinaryCircle>,
    /// Number of distinct circles spanned, ordinary or not.
    pub spanned: usize,
}

pub fn ordinary_circles_direct(s: &PlanarPointSet) -> Result<CircleCount> {
    ordinary_circles_direct_with(s, 1)
}

pub fn ordinary_circles_direct_with(s: &PlanarPointSet, jobs: usize) -> Result<CircleCount> {
    let n = s.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 points, got {n}")));
    }
    let p = &s.points;
    let keyed: Vec<(CircleKey, [usize; 3])> = parallel::run(jobs, || {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut out = Vec::new();
                for j in i + 1..n {
                    for k in j + 1..n {
                        let key = CircleKey::through(&p[i], &p[j], &p[k])?;
                        if key != CircleKey::Line {
                            out.push((key, [i, j, k]));
                        }
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()
            .map(|v| v.into_iter().flatten().collect())
    })?;
    // the first triple of each circle, in lexicographic order
    let mut first: HashMap<CircleKey, [usize; 3]> = HashMap::new();
    for (key, t) in keyed {
        first.entry(key).or_insert(t);
    }
    let spanned = first.len();
    let mut circles: Vec<OrdinaryCircle> = first
        .into_iter()
        .filter(|(key, _)| p.iter().filter(|q| key.contains(q)).count() == 3)
        .map(|(circle, points)| OrdinaryCircle { circle, points })
        .collect();
    circles.sort_by_key(|c| c.points);
    Ok(CircleCount {
        count: circles.len(),
        circles,
        spanned,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftCount {
    /// Ordinary planes of the lift missing the pole.
    pub circles: usize,
    /// Ordinary planes of the lift through the pole.
    pub lines: usize,
    /// Ordinary lines of the planar set, counted directly.
    pub lines_direct: usize,
}

pub fn ordinary_circles_via_lift(s: &PlanarPointSet, jobs: usize) -> Result<LiftCount> {
    if s.len() < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 points, got {}", s.len())));
    }
    let t = lift(s)?;
    let pole = s.len();
    let census = plane_census_with(
        &t,
        CensusOptions {
            jobs,
            bypass_validation: false,
        },
    )?;
    let (lines, circles): (Vec<_>, Vec<_>) = census
        .ordinary_incidences()
        .partition(|p| p.incidence.contains(&pole));
    Ok(LiftCount {
        circles: circles.len(),
        lines: lines.len(),
        lines_direct: ordinary_lines_2d(&s.embedded()?)?,
    })
}

/// `X3 = y3 + y4, X4 = y4`, which moves the pole to `(0, 0, 0, 1)`.
fn to_pole_chart(f: &QForm) -> Matrix {
    let m = f.matrix();
    let mut a: Matrix = (0..4)
        .map(|i| (0..4).map(|j| Scalar::from_int(i64::from(i == j))).collect())
        .collect();
    a[2][3] = Scalar::one();
    let at = crate::linalg::transpose(&a);
    let mm: Matrix = m.iter().map(|r| r.to_vec()).collect();
    crate::linalg::mat_mul(&crate::linalg::mat_mul(&at, &mm), &a)
}

/// Splits `psi = phi(y1, y2, y3) + y4 alpha(y1, y2, y3) + gamma y4^2`.
fn split_at_pole(m: &Matrix) -> (HPoly, HPoly, Scalar) {
    let mut phi = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            let mut e = vec![0u32; 3];
            e[i] += 1;
            e[j] += 1;
            let c = if i == j { m[i][j].clone() } else { &m[i][j] * &Scalar::from_int(2) };
            phi.push((e, c));
        }
    }
    let phi = HPoly::from_terms(3, 2, phi).expect("ternary quadratic");
    let alpha: Vec<Scalar> = (0..3).map(|i| &m[i][3] * &Scalar::from_int(2)).collect();
    (phi, HPoly::linear(&alpha), m[3][3].clone())
}

/// The ternary quartic `alpha^2 phi' - alpha alpha' phi + gamma phi^2`
/// obtained from `psi = psi1` (through the pole) and `psi' = psi2`; its
/// zero set contains the stereographic image of the base locus.
///
/// Planar points `(u, v)` correspond to `(y1, y2, y3) = (u, v, -1)`.
pub fn quartic_from_pencil(p: &Pencil) -> Result<HPoly> {
    if !p.psi1.eval(north_pole().coords()).is_zero() {
        return Err(Error::PointNotOnBaseLocus);
    }
    let (phi, alpha, _) = split_at_pole(&to_pole_chart(&p.psi1));
    if alpha.is_zero() {
        return Err(Error::PencilDegenerateAtPole);
    }
    let (phi2, alpha2, gamma) = split_at_pole(&to_pole_chart(&p.psi2));
    let a2 = alpha.try_mul(&alpha)?;
    let q = a2
        .try_mul(&phi2)?
        .try_sub(&alpha.try_mul(&alpha2)?.try_mul(&phi)?)?
        .try_add(&phi.try_mul(&phi)?.scale(&gamma))?;
    if q.is_zero() {
        return Err(Error::DependentForms);
    }
    Ok(q)
}

/// The point of the plane `y3 = -1` chart that a planar point maps to.
pub fn planar_chart(p: &(Scalar, Scalar)) -> [Scalar; 3] {
    [p.0.clone(), p.1.clone(), -Scalar::one()]
}
