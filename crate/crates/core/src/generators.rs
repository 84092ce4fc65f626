//! Exact constructions: prisms, anti-prisms, planar regular polygons with
//! their bisecant directions, and seeded random sets.

use std::collections::HashSet;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ProjPoint, Projectivity};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Ordered list of distinct projective points over Q(zeta_N).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub field_order: u32,
    pub points: Vec<ProjPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl PointSet {
    pub fn new(field_order: u32, points: Vec<ProjPoint>, labels: Option<Vec<String>>) -> Result<Self> {
        if field_order == 0 {
            return Err(Error::InvalidInput("field order must be positive".into()));
        }
        if let Some(l) = &labels {
            if l.len() != points.len() {
                return Err(Error::InvalidInput(format!(
                    "{} labels for {} points",
                    l.len(),
                    points.len()
                )));
            }
        }
        let mut seen = HashSet::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if !field_order.is_multiple_of(p.field_order()) {
                return Err(Error::InvalidInput(format!(
                    "point {i} lives outside Q(zeta_{field_order})"
                )));
            }
            if !seen.insert(p) {
                return Err(Error::InvalidInput(format!("point {i} is a duplicate")));
            }
        }
        Ok(PointSet {
            field_order,
            points,
            labels,
        })
    }

    /// Field order is the lcm of the coordinates' orders.
    pub fn from_points(points: Vec<ProjPoint>) -> Result<Self> {
        let n = points.iter().fold(1u32, |acc, p| acc.lcm(&p.field_order()));
        Self::new(n, points, None)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn label(&self, i: usize) -> String {
        self.labels
            .as_ref()
            .map_or_else(|| format!("#{i}"), |l| l[i].clone())
    }

    /// Subset by indices, keeping labels.
    pub fn subset(&self, idx: &[usize]) -> PointSet {
        PointSet {
            field_order: self.field_order,
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| idx.iter().map(|&i| l[i].clone()).collect()),
        }
    }

    pub fn without(&self, i: usize) -> PointSet {
        let idx: Vec<usize> = (0..self.len()).filter(|&j| j != i).collect();
        self.subset(&idx)
    }

    pub fn transformed(&self, t: &Projectivity) -> PointSet {
        let points: Vec<ProjPoint> = self.points.iter().map(|p| t.apply(p)).collect();
        let order = points
            .iter()
            .fold(self.field_order, |acc, p| acc.lcm(&p.field_order()));
        PointSet {
            field_order: order,
            points,
            labels: self.labels.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtremalKind {
    Prism,
    AntiPrism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalSpec {
    pub kind: ExtremalKind,
    pub m: usize,
    pub apex: (Scalar, Scalar),
    /// Index into the full 2m-point list (polygon points first).
    pub removed: Option<usize>,
}

impl ExtremalSpec {
    pub fn new(kind: ExtremalKind, m: usize) -> Self {
        ExtremalSpec {
            kind,
            m,
            apex: (Scalar::zero(), Scalar::zero()),
            removed: None,
        }
    }

    pub fn with_apex(mut self, a: Scalar, b: Scalar) -> Self {
        self.apex = (a, b);
        self
    }

    pub fn with_apex_ints(self, a: i64, b: i64) -> Self {
        self.with_apex(Scalar::from_int(a), Scalar::from_int(b))
    }

    pub fn removing(mut self, idx: usize) -> Self {
        self.removed = Some(idx);
        self
    }

    pub fn build(&self) -> Result<PointSet> {
        match self.kind {
            ExtremalKind::Prism => make_prism(self),
            ExtremalKind::AntiPrism => make_anti_prism(self),
        }
    }
}

fn check_m(m: usize) -> Result<u32> {
    if m < 3 {
        return Err(Error::InvalidInput(format!("m must be at least 3, got {m}")));
    }
    u32::try_from(m).map_err(|_| Error::InvalidInput("m too large".into()))
}

/// `(cos(2 pi num/den), sin(2 pi num/den), 0, 1)`.
fn polygon_point(num: i64, den: u32) -> Result<ProjPoint> {
    ProjPoint::new([
        Scalar::cos_turn(num, den)?,
        Scalar::sin_turn(num, den)?,
        Scalar::zero(),
        Scalar::one(),
    ])
}

/// `(cos(2 pi num/den) - a, sin(2 pi num/den) - b, 1, 0)`.
fn apex_shifted_point(num: i64, den: u32, apex: &(Scalar, Scalar)) -> Result<ProjPoint> {
    ProjPoint::new([
        Scalar::cos_turn(num, den)?.try_sub(&apex.0)?,
        Scalar::sin_turn(num, den)?.try_sub(&apex.1)?,
        Scalar::one(),
        Scalar::zero(),
    ])
}

fn assemble(
    field_order: u32,
    mut points: Vec<ProjPoint>,
    mut labels: Vec<String>,
    removed: Option<usize>,
) -> Result<PointSet> {
    if let Some(r) = removed {
        if r >= points.len() {
            return Err(Error::InvalidInput(format!(
                "removed index {r} out of range 0..{}",
                points.len()
            )));
        }
        points.remove(r);
        labels.remove(r);
    }
    let order = points.iter().fold(field_order, |acc, p| acc.lcm(&p.field_order()));
    PointSet::new(order, points, Some(labels))
}

pub fn make_prism(spec: &ExtremalSpec) -> Result<PointSet> {
    if spec.kind != ExtremalKind::Prism {
        return Err(Error::InvalidInput("spec kind is not Prism".into()));
    }
    let m = check_m(spec.m)?;
    let mut points = Vec::with_capacity(2 * spec.m);
    let mut labels = Vec::with_capacity(2 * spec.m);
    for i in 0..m {
        points.push(polygon_point(i as i64, m)?);
        labels.push(format!("p_{i}"));
    }
    for k in 0..m {
        points.push(apex_shifted_point(k as i64, m, &spec.apex)?);
        labels.push(format!("q_{k}"));
    }
    assemble(4u32.lcm(&m), points, labels, spec.removed)
}

pub fn make_anti_prism(spec: &ExtremalSpec) -> Result<PointSet> {
    if spec.kind != ExtremalKind::AntiPrism {
        return Err(Error::InvalidInput("spec kind is not AntiPrism".into()));
    }
    let m = check_m(spec.m)?;
    let mut points = Vec::with_capacity(2 * spec.m);
    let mut labels = Vec::with_capacity(2 * spec.m);
    for i in 0..m {
        points.push(polygon_point(i as i64, m)?);
        labels.push(format!("p_{i}"));
    }
    for k in 0..m {
        // angle 2 pi (k + 1/2) / m
        points.push(apex_shifted_point(2 * k as i64 + 1, 2 * m, &spec.apex)?);
        labels.push(format!("r_{k}"));
    }
    assemble(4u32.lcm(&(2 * m)), points, labels, spec.removed)
}

/// The m-gon in the plane `X3 = 0` together with its m bisecant directions
/// `s_t = (sin(pi t/m), cos(pi t/m), 0, 0)`.
pub fn boroczky_planar(m: usize) -> Result<PointSet> {
    let m = check_m(m)?;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for i in 0..m {
        points.push(polygon_point(i as i64, m)?);
        labels.push(format!("p_{i}"));
    }
    for t in 0..m {
        points.push(ProjPoint::new([
            Scalar::sin_turn(t as i64, 2 * m)?,
            Scalar::cos_turn(t as i64, 2 * m)?,
            Scalar::zero(),
            Scalar::zero(),
        ])?);
        labels.push(format!("s_{t}"));
    }
    assemble(4u32.lcm(&(2 * m)), points, labels, None)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` distinct rational points with integer homogeneous coordinates in
/// `[-bound, bound]`, deterministic in `seed`.
pub fn random_set(n: usize, seed: u64, bound: i64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if bound < 1 {
        return Err(Error::InvalidInput("bound must be positive".into()));
    }
    let mut r = rng(seed);
    let mut seen = HashSet::new();
    let mut points = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while points.len() < n {
        attempts += 1;
        if attempts > 1000 * n + 1000 {
            return Err(Error::CannotSample(n));
        }
        let c: [i64; 4] = std::array::from_fn(|_| r.gen_range(-bound..=bound));
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        let p = ProjPoint::from_ints(c);
        if seen.insert(p.clone()) {
            points.push(p);
        }
    }
    PointSet::new(1, points, None)
}

/// `n` distinct planar rational points with numerators in `[-bound, bound]`
/// and denominators in `[1, bound]`.
pub fn random_planar(n: usize, seed: u64, bound: i64) -> Result<Vec<(Scalar, Scalar)>> {
    if bound < 1 {
        return Err(Error::InvalidInput("bound must be positive".into()));
    }
    let mut r = rng(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n {
        attempts += 1;
        if attempts > 1000 * n + 1000 {
            return Err(Error::CannotSample(n));
        }
        let mut coord = || {
            let num = r.gen_range(-bound..=bound);
            let den = r.gen_range(1..=bound);
            Scalar::from_ratio(num, den)
        };
        let p = (coord(), coord());
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

/// A random invertible integer 4x4 matrix with entries in `[-bound, bound]`.
pub fn random_projectivity(seed: u64, bound: i64) -> Projectivity {
    let mut r = rng(seed);
    loop {
        let m: Matrix = (0..4)
            .map(|_| (0..4).map(|_| Scalar::from_int(r.gen_range(-bound..=bound))).collect())
            .collect();
        if let Ok(p) = Projectivity::new(m) {
            return p;
        }
    }
}

/// Moves point `idx` by adding a small rational offset to its first
/// coordinate.
pub fn perturb(s: &PointSet, idx: usize, num: i64, den: i64) -> Result<PointSet> {
    let mut points = s.points.clone();
    let mut c = points[idx].coords().clone();
    let lead = c.iter().position(|x| !x.is_zero()).unwrap();
    let other = (lead + 1) % 4;
    c[other] = c[other].try_add(&Scalar::from_ratio(num, den))?;
    points[idx] = ProjPoint::new(c)?;
    PointSet::new(s.field_order, points, s.labels.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_prism_coordinates() {
        let s = make_prism(&ExtremalSpec::new(ExtremalKind::Prism, 4)).unwrap();
        assert_eq!(s.len(), 8);
        let want_p = [[1, 0, 0, 1], [0, 1, 0, 1], [-1, 0, 0, 1], [0, -1, 0, 1]];
        let want_q = [[1, 0, 1, 0], [0, 1, 1, 0], [-1, 0, 1, 0], [0, -1, 1, 0]];
        for i in 0..4 {
            assert_eq!(s.points[i], ProjPoint::from_ints(want_p[i]));
            assert_eq!(s.points[4 + i], ProjPoint::from_ints(want_q[i]));
        }
    }

    #[test]
    fn first_triangle_vertex() {
        let s = make_prism(&ExtremalSpec::new(ExtremalKind::Prism, 3)).unwrap();
        assert_eq!(s.points[0], ProjPoint::from_ints([1, 0, 0, 1]));
    }

    #[test]
    fn anti_prism_half_step() {
        let s = make_anti_prism(&ExtremalSpec::new(ExtremalKind::AntiPrism, 3)).unwrap();
        assert_eq!(s.points[3 + 1], ProjPoint::from_ints([-1, 0, 1, 0]));
        let s = make_anti_prism(&ExtremalSpec::new(ExtremalKind::AntiPrism, 4)).unwrap();
        // canonical form of (sqrt2/2, sqrt2/2, 1, 0) is (1, 1, sqrt2, 0)
        let r0 = s.points[4].coords();
        assert_eq!(r0[1], Scalar::one());
        assert_eq!(&r0[2] * &r0[2], Scalar::from_int(2));
        for m in 3..9 {
            let s = make_anti_prism(&ExtremalSpec::new(ExtremalKind::AntiPrism, m)).unwrap();
            assert_eq!(s.len(), 2 * m);
        }
    }

    #[test]
    fn removal_and_range() {
        let s = make_prism(&ExtremalSpec::new(ExtremalKind::Prism, 5).removing(7)).unwrap();
        assert_eq!(s.len(), 9);
        assert!(!s.labels.as_ref().unwrap().contains(&"q_2".to_string()));
        assert!(make_prism(&ExtremalSpec::new(ExtremalKind::Prism, 2)).is_err());
        assert!(make_prism(&ExtremalSpec::new(ExtremalKind::Prism, 4).removing(8)).is_err());
    }

    #[test]
    fn random_sets_are_reproducible() {
        assert_eq!(random_set(1, 7, 10).unwrap(), random_set(1, 7, 10).unwrap());
        assert_eq!(random_set(5, 1, 100).unwrap(), random_set(5, 1, 100).unwrap());
        assert_ne!(random_set(5, 1, 100).unwrap(), random_set(5, 2, 100).unwrap());
        assert!(random_set(200, 1, 1).is_err());
    }

    #[test]
    fn boroczky_directions() {
        let s = boroczky_planar(4).unwrap();
        assert!(s.points.contains(&ProjPoint::from_ints([0, 1, 0, 0])));
        assert!(s.points.contains(&ProjPoint::from_ints([1, 0, 0, 0])));
        assert_eq!(boroczky_planar(3).unwrap().len(), 6);
    }
}
