//! Spanned planes with incidence multiplicities, ordinary-plane counts and
//! the validation predicates that the plane census relies on.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{ExtremalKind, PointSet};
use crate::geometry::{canonicalize, cross3, dot4, Approx4, ProjLine, ProjPlane, ProjPoint};
use crate::scalar::Scalar;
use crate::linalg::{self, Matrix};
use crate::parallel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub no3collinear: bool,
    pub collinear_witness: Option<[usize; 3]>,
    pub coplanar_all: bool,
    pub coplanar_witness: Option<ProjPlane>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.no3collinear && !self.coplanar_all
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(t) = self.collinear_witness {
            write!(f, "points {}, {}, {} are collinear", t[0], t[1], t[2])
        } else if self.coplanar_all {
            write!(f, "all points are coplanar")
        } else {
            write!(f, "valid")
        }
    }
}

fn is_collinear_triple(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    cross3(a.coords(), b.coords(), c.coords())
        .iter()
        .all(|x| x.is_zero())
}

/// Exact checks for "no three collinear" and "not all coplanar".
pub fn validate(s: &PointSet) -> ValidationReport {
    validate_with(s, 1)
}

pub fn validate_with(s: &PointSet, jobs: usize) -> ValidationReport {
    let pts = &s.points;
    let n = pts.len();
    let witness = parallel::run(jobs, || {
        (0..n).into_par_iter().find_map_first(|i| {
            for j in i + 1..n {
                for k in j + 1..n {
                    if is_collinear_triple(&pts[i], &pts[j], &pts[k]) {
                        return Some([i, j, k]);
                    }
                }
            }
            None
        })
    });
    let m: Matrix = pts.iter().map(|p| p.coords().to_vec()).collect();
    let coplanar_witness = if n == 0 {
        Some(ProjPlane::from_ints([0, 0, 0, 1]))
    } else {
        linalg::nullspace(&m, 4).into_iter().next().map(|v| {
            ProjPlane::new(v.try_into().unwrap()).expect("kernel vector is nonzero")
        })
    };
    ValidationReport {
        no3collinear: witness.is_none(),
        collinear_witness: witness,
        coplanar_all: coplanar_witness.is_some(),
        coplanar_witness,
    }
}

/// A spanned plane with the sorted indices of the points it contains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpannedPlane {
    pub plane: ProjPlane,
    pub incidence: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    /// `(i, tau_i)` sorted by `i`.
    pub tau: Vec<(usize, usize)>,
    pub ordinary_planes: Vec<ProjPlane>,
    pub per_point_ordinary: Vec<usize>,
    #[serde(with = "rational_string")]
    pub k_empirical: BigRational,
    /// Every spanned plane, ordered by incidence set.
    #[serde(skip)]
    pub planes: Vec<SpannedPlane>,
}

impl CensusReport {
    pub fn ordinary_count(&self) -> usize {
        self.tau_of(3)
    }

    pub fn tau_of(&self, i: usize) -> usize {
        self.tau
            .iter()
            .find(|(k, _)| *k == i)
            .map_or(0, |(_, c)| *c)
    }

    /// `sum_i C(i,3) tau_i`, which equals `C(n,3)` when no three points are
    /// collinear.
    pub fn weighted_triple_count(&self) -> BigInt {
        self.tau
            .iter()
            .map(|&(i, c)| binom3(i) * BigInt::from(c))
            .sum()
    }

    pub fn ordinary_incidences(&self) -> impl Iterator<Item = &SpannedPlane> {
        self.planes.iter().filter(|p| p.incidence.len() == 3)
    }
}

pub fn binom3(n: usize) -> BigInt {
    if n < 3 {
        return BigInt::from(0);
    }
    let n = BigInt::from(n);
    &n * (&n - 1) * (&n - 2) / 6
}

pub(crate) mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    pub jobs: usize,
    /// Skip validation for deliberately degenerate inputs.
    pub bypass_validation: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            jobs: 1,
            bypass_validation: false,
        }
    }
}

pub fn plane_census(s: &PointSet) -> Result<CensusReport> {
    plane_census_with(s, CensusOptions::default())
}

pub fn plane_census_with(s: &PointSet, opts: CensusOptions) -> Result<CensusReport> {
    if !opts.bypass_validation {
        let v = validate_with(s, opts.jobs);
        if !v.is_valid() {
            return Err(Error::ValidationFailure(Box::new(v)));
        }
    }
    // validation (unless bypassed) guarantees no three collinear points
    let planes = spanned_planes(&s.points, opts.jobs, !opts.bypass_validation);
    Ok(report_from_planes(s.len(), planes))
}

/// All planes spanned by non-collinear triples, with full incidence sets,
/// sorted by incidence set.
///
/// With no three points collinear, each plane is computed once, from the
/// three smallest indices it contains; a floating-point prefilter rules out
/// most non-incidences before the exact test. Otherwise every triple is
/// canonicalized and deduplicated.
pub fn spanned_planes(pts: &[ProjPoint], jobs: usize, no3collinear: bool) -> Vec<SpannedPlane> {
    let n = pts.len();
    let approx: Vec<Approx4> = pts.iter().map(|p| Approx4::of(p.coords())).collect();
    let incident = |w: &[Scalar; 4], aw: &Approx4, l: usize| {
        aw.may_vanish(&approx[l]) && dot4(w, pts[l].coords()).is_zero()
    };
    let mut planes: Vec<SpannedPlane> = parallel::run(jobs, || {
        (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut local = Vec::new();
                for j in i + 1..n {
                    for k in j + 1..n {
                        let mut w = cross3(pts[i].coords(), pts[j].coords(), pts[k].coords());
                        if w.iter().all(Scalar::is_zero) {
                            continue;
                        }
                        let aw = Approx4::of(&w);
                        if no3collinear
                            && (0..k).any(|l| l != i && l != j && incident(&w, &aw, l))
                        {
                            continue;
                        }
                        let incidence: Vec<usize> = if no3collinear {
                            [i, j, k]
                                .into_iter()
                                .chain((k + 1..n).filter(|&l| incident(&w, &aw, l)))
                                .collect()
                        } else {
                            (0..n)
                                .filter(|&l| l == i || l == j || l == k || incident(&w, &aw, l))
                                .collect()
                        };
                        canonicalize(&mut w);
                        local.push(SpannedPlane {
                            plane: ProjPlane::new(w).expect("canonical"),
                            incidence,
                        });
                    }
                }
                local
            })
            .collect()
    });
    if no3collinear {
        let distinct: HashSet<&ProjPlane> = planes.iter().map(|p| &p.plane).collect();
        assert_eq!(distinct.len(), planes.len(), "a plane was enumerated twice");
    } else {
        let mut seen = HashSet::new();
        planes.retain(|p| seen.insert(p.plane.clone()));
    }
    planes.sort_by(|a, b| a.incidence.cmp(&b.incidence));
    planes
}

fn report_from_planes(n: usize, planes: Vec<SpannedPlane>) -> CensusReport {
    let mut tau: BTreeMap<usize, usize> = BTreeMap::new();
    let mut per_point = vec![0usize; n];
    let mut ordinary = Vec::new();
    for sp in &planes {
        *tau.entry(sp.incidence.len()).or_default() += 1;
        if sp.incidence.len() == 3 {
            ordinary.push(sp.plane.clone());
            for &i in &sp.incidence {
                per_point[i] += 1;
            }
        }
    }
    let k = if n == 0 {
        BigRational::from_integer(0.into())
    } else {
        BigRational::new(ordinary.len().into(), (n * n).into())
    };
    CensusReport {
        n,
        tau: tau.into_iter().collect(),
        ordinary_planes: ordinary,
        per_point_ordinary: per_point,
        k_empirical: k,
        planes,
    }
}

/// The closed-form ordinary-plane count of the prism or anti-prism on
/// `n = 2m` points.
pub fn predicted_extremal_count(kind: ExtremalKind, m: usize) -> usize {
    let n = 2 * m;
    let quarter = n * n / 4;
    match (kind, m % 2) {
        (ExtremalKind::Prism, 1) | (ExtremalKind::AntiPrism, 1) => quarter - n / 2,
        (ExtremalKind::Prism, _) => quarter - n,
        (ExtremalKind::AntiPrism, _) => quarter,
    }
}

/// Number of lines meeting exactly two points of a coplanar set.
pub fn ordinary_lines_2d(s: &PointSet) -> Result<usize> {
    let pts = &s.points;
    let m: Matrix = pts.iter().map(|p| p.coords().to_vec()).collect();
    if pts.len() >= 4 && linalg::rank(&m) > 3 {
        return Err(Error::NotCoplanar);
    }
    Ok(line_incidences(pts).iter().filter(|l| l.len() == 2).count())
}

/// Incidence sets of all lines spanned by pairs, sorted.
pub fn line_incidences(pts: &[ProjPoint]) -> Vec<Vec<usize>> {
    let n = pts.len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let line = ProjLine::through(&pts[i], &pts[j]).expect("distinct points");
            if seen.contains(&line) {
                continue;
            }
            let inc: Vec<usize> = (0..n).filter(|&l| line.contains(&pts[l])).collect();
            seen.insert(line);
            out.push(inc);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{boroczky_planar, make_anti_prism, make_prism, ExtremalSpec};

    fn pts(rows: &[[i64; 4]]) -> PointSet {
        PointSet::from_points(rows.iter().map(|&r| ProjPoint::from_ints(r)).collect()).unwrap()
    }

    #[test]
    fn tetrahedron() {
        let s = pts(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        let c = plane_census(&s).unwrap();
        assert_eq!(c.tau, vec![(3, 4)]);
        assert_eq!(c.ordinary_count(), 4);
        assert_eq!(c.per_point_ordinary, vec![3, 3, 3, 3]);
    }

    #[test]
    fn small_extremal_counts() {
        let s = make_prism(&ExtremalSpec::new(ExtremalKind::Prism, 5)).unwrap();
        assert_eq!(plane_census(&s).unwrap().ordinary_count(), 20);
        let s = make_anti_prism(&ExtremalSpec::new(ExtremalKind::AntiPrism, 6)).unwrap();
        assert_eq!(plane_census(&s).unwrap().ordinary_count(), 36);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(predicted_extremal_count(ExtremalKind::Prism, 6), 24);
        assert_eq!(predicted_extremal_count(ExtremalKind::AntiPrism, 5), 20);
        assert_eq!(predicted_extremal_count(ExtremalKind::Prism, 3), 6);
        assert_eq!(predicted_extremal_count(ExtremalKind::AntiPrism, 6), 36);
    }

    #[test]
    fn validation_witnesses() {
        let s = pts(&[[1, 0, 0, 1], [2, 0, 0, 1], [3, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]]);
        let v = validate(&s);
        assert!(!v.no3collinear);
        assert_eq!(v.collinear_witness, Some([0, 1, 2]));
        assert!(matches!(plane_census(&s), Err(Error::ValidationFailure(_))));
        let v = validate(&boroczky_planar(4).unwrap());
        assert!(v.coplanar_all);
        let h = v.coplanar_witness.unwrap();
        assert!(boroczky_planar(4).unwrap().points.iter().all(|p| h.contains(p)));
        let v = validate(&make_prism(&ExtremalSpec::new(ExtremalKind::Prism, 4)).unwrap());
        assert!(v.is_valid());
    }

    #[test]
    fn ordinary_lines() {
        let s = pts(&[[0, 0, 0, 1], [1, 0, 0, 1], [0, 1, 0, 1]]);
        assert_eq!(ordinary_lines_2d(&s).unwrap(), 3);
        let s = pts(&[[0, 0, 0, 1], [1, 0, 0, 1], [2, 0, 0, 1]]);
        assert_eq!(ordinary_lines_2d(&s).unwrap(), 0);
        let s = pts(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert!(matches!(ordinary_lines_2d(&s), Err(Error::NotCoplanar)));
    }
}
