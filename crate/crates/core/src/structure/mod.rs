//! Recovering the quadric pencil through a set with few ordinary planes,
//! covering a set by pencil varieties, and recognizing prisms and
//! anti-prisms exactly.

mod extremal;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::census::{plane_census, validate};
use crate::dual::{build_gamma_with, classify_edges, extract_double_diamond, find_segments, Gamma, Segment};
use crate::error::{Error, Result};
use crate::generators::PointSet;
use crate::geometry::{ProjPlane, ProjPoint};
use crate::quadrics::{interpolation_space_of, Pencil, QForm};

pub use extremal::{classify_extremal, Delta, ExtremalVerdict, ExtremalWitness, VerdictKind};

#[derive(Clone, Copy, Debug)]
pub struct RecoverOptions {
    pub outlier_budget: usize,
    /// Minimum number of rather good edges in the segment used for fitting.
    pub min_segment: usize,
    pub jobs: usize,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        RecoverOptions {
            outlier_budget: 0,
            min_segment: 13,
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum FitMethod {
    /// `S` itself imposes at most 8 conditions on quadrics.
    Global { dim: usize },
    /// Fitted on the double diamond around the first edge of a segment.
    Segment { carrier: (usize, usize), length: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recovery {
    pub pencil: Pencil,
    pub inliers: Vec<usize>,
    pub outliers: Vec<usize>,
    pub fit: FitMethod,
}

fn check_valid(s: &PointSet) -> Result<()> {
    let v = validate(s);
    if v.is_valid() {
        Ok(())
    } else {
        Err(Error::ValidationFailure(Box::new(v)))
    }
}

fn refs<'a>(s: &'a PointSet, idx: &[usize]) -> Vec<&'a ProjPoint> {
    idx.iter().map(|&i| &s.points[i]).collect()
}

/// A pencil spanned by the first two members of `I(pts)` when that space
/// has dimension at least 2.
fn fit_pencil(pts: &[&ProjPoint]) -> Result<Option<(Pencil, usize)>> {
    let space = interpolation_space_of(pts, 2);
    if space.dim < 2 {
        return Ok(None);
    }
    let psi1 = QForm::from_hpoly(&space.basis[0])?;
    let psi2 = QForm::from_hpoly(&space.basis[1])?;
    Ok(Some((Pencil::new(psi1, psi2)?, space.dim)))
}

fn split(s: &PointSet, pencil: &Pencil) -> (Vec<usize>, Vec<usize>) {
    (0..s.len()).partition(|&i| pencil.contains(&s.points[i]))
}

/// Every rather good segment of `g`, longest first, ties broken by carrier
/// and then by first edge.
fn ranked_segments(g: &Gamma) -> Vec<Segment> {
    let mut all: Vec<Segment> = g
        .carriers
        .iter()
        .flat_map(|c| find_segments(g, c.pair.0, c.pair.1))
        .collect();
    all.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then(a.carrier.cmp(&b.carrier))
            .then(a.edges[0].cmp(&b.edges[0]))
    });
    all
}

fn segment_points(g: &Gamma, seg: &Segment) -> Vec<usize> {
    let mut pts: Vec<usize> = seg
        .vertices(g)
        .into_iter()
        .flat_map(|h| g.vertices[h].incident.iter().copied())
        .collect();
    pts.sort_unstable();
    pts.dedup();
    pts
}

pub fn recover_pencil(s: &PointSet, opts: RecoverOptions) -> Result<Recovery> {
    check_valid(s)?;
    let all: Vec<usize> = (0..s.len()).collect();
    let (pencil, fit) = match fit_pencil(&refs(s, &all))? {
        Some((pencil, dim)) => (pencil, FitMethod::Global { dim }),
        None => {
            let g = classify_edges(build_gamma_with(s, opts.jobs)?);
            let seg = ranked_segments(&g)
                .into_iter()
                .next()
                .filter(|seg| seg.len() >= opts.min_segment)
                .ok_or(Error::NoSegmentLongEnough(opts.min_segment))?;
            let dd = extract_double_diamond(&g, s, seg.edges[0])?;
            let (pencil, _) = fit_pencil(&refs(s, &dd.points()))?.ok_or_else(|| {
                Error::StructureViolation("double diamond points impose 9 conditions".into())
            })?;
            // every point dual to a vertex of the segment must follow
            for i in segment_points(&g, &seg) {
                if !pencil.contains(&s.points[i]) {
                    return Err(Error::StructureViolation(format!(
                        "point {i} on the segment misses the pencil"
                    )));
                }
            }
            let fit = FitMethod::Segment {
                carrier: seg.carrier,
                length: seg.len(),
            };
            (pencil, fit)
        }
    };
    let (inliers, outliers) = split(s, &pencil);
    if outliers.len() > opts.outlier_budget {
        return Err(Error::BudgetExceeded {
            outliers: outliers.len(),
            budget: opts.outlier_budget,
        });
    }
    Ok(Recovery {
        pencil,
        inliers,
        outliers,
        fit,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum CoverComponent {
    Pencil {
        pencil: Pencil,
        covered: Vec<usize>,
    },
    /// `beta_j * beta_prev` and `beta_j * beta_next`, all points lying in
    /// the plane `beta_j`.
    PlanePairs {
        pencil: Pencil,
        planes: [ProjPlane; 3],
        covered: Vec<usize>,
    },
}

impl CoverComponent {
    pub fn pencil(&self) -> &Pencil {
        match self {
            CoverComponent::Pencil { pencil, .. } | CoverComponent::PlanePairs { pencil, .. } => pencil,
        }
    }

    pub fn covered(&self) -> &[usize] {
        match self {
            CoverComponent::Pencil { covered, .. } | CoverComponent::PlanePairs { covered, .. } => covered,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilCover {
    /// The pair whose dual line was used, absent for a global fit.
    pub carrier: Option<(usize, usize)>,
    pub components: Vec<CoverComponent>,
    pub uncovered: Vec<usize>,
    pub segments: usize,
    pub plane_pair_vertices: usize,
    /// `4143 tau_3 / n^2`, reported and never enforced.
    #[serde(with = "crate::census::rational_string")]
    pub component_bound: BigRational,
    pub within_bound: bool,
}

pub const DEFAULT_COVER_CAP: usize = 24;

fn coordinate_plane(i: usize) -> ProjPlane {
    let mut c = [0i64; 4];
    c[i] = 1;
    ProjPoint::from_ints(c).dual()
}

fn plane_pair_component(g: &Gamma, beta: &[ProjPlane], j: usize, h: usize) -> Result<CoverComponent> {
    let k = beta.len();
    let here = &beta[j];
    let prev = &beta[(j + k - 1) % k];
    let next = &beta[(j + 1) % k];
    // fall back to coordinate planes when the neighbours coincide
    let mut others: Vec<ProjPlane> = vec![prev.clone(), next.clone()];
    others.extend((0..4).map(coordinate_plane));
    others.retain(|p| p != here);
    others.dedup();
    let (a, b) = (others[0].clone(), others[1].clone());
    let pencil = Pencil::new(
        QForm::product_of_linear(here.coords(), a.coords()),
        QForm::product_of_linear(here.coords(), b.coords()),
    )?;
    Ok(CoverComponent::PlanePairs {
        pencil,
        planes: [here.clone(), a, b],
        covered: g.vertices[h].incident.clone(),
    })
}

/// Covers `S` by intersections of two quadrics along one dual line.
pub fn weak_structure_cover(s: &PointSet, cap: usize, jobs: usize) -> Result<PencilCover> {
    if s.len() > cap {
        return Err(Error::CapExceeded { n: s.len(), cap });
    }
    let census = plane_census(s)?;
    let n2 = BigInt::from(s.len() * s.len());
    let component_bound = BigRational::new(BigInt::from(4143 * census.ordinary_count()), n2);
    let finish = |carrier, components: Vec<CoverComponent>, segments, sbv| {
        let mut seen = vec![false; s.len()];
        for c in &components {
            for &i in c.covered() {
                seen[i] = true;
            }
        }
        let uncovered = (0..s.len()).filter(|&i| !seen[i]).collect();
        let within_bound = BigRational::from_integer(BigInt::from(components.len())) <= component_bound;
        PencilCover {
            carrier,
            components,
            uncovered,
            segments,
            plane_pair_vertices: sbv,
            component_bound: component_bound.clone(),
            within_bound,
        }
    };
    let all: Vec<usize> = (0..s.len()).collect();
    if let Some((pencil, _)) = fit_pencil(&refs(s, &all))? {
        let comp = CoverComponent::Pencil { pencil, covered: all };
        return Ok(finish(None, vec![comp], 0, 0));
    }

    let g = classify_edges(build_gamma_with(s, jobs)?);
    let sb_count = |pair: (usize, usize)| {
        let c = g.carrier(pair.0, pair.1);
        (0..c.vertices.len())
            .filter(|&t| g.edges[c.first_edge + t].class.is_some_and(|k| k.slightly_bad))
            .count()
    };
    let pair = g
        .carriers
        .iter()
        .map(|c| c.pair)
        .min_by_key(|&p| (sb_count(p), p))
        .ok_or_else(|| Error::InvalidInput("fewer than two points".into()))?;
    let c = g.carrier(pair.0, pair.1);
    let k = c.vertices.len();
    let sb = |t: usize| g.edges[c.first_edge + t].class.is_some_and(|x| x.slightly_bad);

    let mut components = Vec::new();
    // positions on the line that need a plane pair chain
    let mut chain: Vec<usize> = (0..k).filter(|&t| sb(t) || sb((t + k - 1) % k)).collect();
    let segs = find_segments(&g, pair.0, pair.1);
    for seg in &segs {
        let pts = segment_points(&g, seg);
        match fit_pencil(&refs(s, &pts))? {
            Some((pencil, _)) => components.push(CoverComponent::Pencil { pencil, covered: pts }),
            None => {
                // too few points to pin a pencil down: cover them vertex by vertex
                for h in seg.vertices(&g) {
                    let t = c.vertices.iter().position(|&v| v == h).unwrap();
                    chain.push(t);
                }
            }
        }
    }
    chain.sort_unstable();
    chain.dedup();
    let beta: Vec<ProjPlane> = chain.iter().map(|&t| g.vertices[c.vertices[t]].location.dual()).collect();
    for (j, &t) in chain.iter().enumerate() {
        components.push(plane_pair_component(&g, &beta, j, c.vertices[t])?);
    }
    Ok(finish(Some(pair), components, segs.len(), chain.len()))
}
