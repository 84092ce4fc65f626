use std::collections::HashMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::census::plane_census;
use crate::error::Result;
use crate::generators::{ExtremalKind, ExtremalSpec, PointSet};
use crate::geometry::{ProjPlane, ProjPoint};
use crate::linalg::{self, Matrix};
use crate::quadrics::interpolation_space;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Prism,
    AntiPrism,
    PrismMinusPoint,
    AntiPrismMinusPoint,
    NotExtremal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Delta {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1/2")]
    Half,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalWitness {
    /// The plane of the complete polygon first.
    pub planes: [ProjPlane; 2],
    /// `conics[side][label]` is the index in `S` of the point with that
    /// label, `None` for the removed point.
    pub conics: [Vec<Option<usize>>; 2],
    /// `directions[e]` is where the chords whose labels sum to `e` meet the
    /// common line of the two planes.
    pub directions: Vec<ProjPoint>,
    /// Labels are scaled by this unit before placing them on the polygon.
    pub multiplier: usize,
    /// Maps the model prism or anti-prism, apex at the origin, onto `S`.
    pub projectivity: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalVerdict {
    pub kind: VerdictKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<Delta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ExtremalWitness>,
    /// The pipeline stage that rejected the input, from 1 to 6.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl ExtremalVerdict {
    fn rejected(stage: u8, reason: String) -> Self {
        ExtremalVerdict {
            kind: VerdictKind::NotExtremal,
            m: None,
            delta: None,
            witness: None,
            stage: Some(stage),
            reason: Some(reason),
        }
    }

    pub fn is_extremal(&self) -> bool {
        self.kind != VerdictKind::NotExtremal
    }

    /// The generator input for a set projectively equivalent to the one
    /// classified, with labels matching `S` up to the projectivity.
    pub fn regenerate(&self) -> Option<ExtremalSpec> {
        let w = self.witness.as_ref()?;
        let m = self.m?;
        let (kind, s) = match self.delta? {
            Delta::Zero => (ExtremalKind::Prism, 0),
            Delta::Half => (ExtremalKind::AntiPrism, 1),
        };
        let mut spec = ExtremalSpec::new(kind, m);
        if let Some(u) = w.conics[1].iter().position(Option::is_none) {
            // second side point u sits at angle k (2u + s) / 2m
            let num = (w.multiplier * (2 * u + s)) % (2 * m);
            spec = spec.removing(m + num / 2);
        }
        Some(spec)
    }
}

type Stage = (u8, String);

fn fail<T>(stage: u8, reason: impl Into<String>) -> std::result::Result<T, Stage> {
    Err((stage, reason.into()))
}

/// The point where the chord `ab` meets the plane `h`.
fn chord_meet(a: &ProjPoint, b: &ProjPoint, h: &ProjPlane) -> ProjPoint {
    let ha = h.eval(a);
    let hb = h.eval(b);
    let c: [Scalar; 4] = std::array::from_fn(|i| &hb * &a.coords()[i] - &ha * &b.coords()[i]);
    ProjPoint::new(c).expect("distinct points off the plane")
}

/// Points of a plane lie on a unique conic, and that conic is
/// non-degenerate. Vacuous for fewer than five points.
fn on_irreducible_conic(plane: &ProjPlane, pts: &[&ProjPoint]) -> std::result::Result<(), Stage> {
    if pts.len() < 5 {
        return Ok(());
    }
    // dropping a coordinate the plane depends on is a projective chart
    let drop = plane.coords().iter().position(|c| !c.is_zero()).unwrap();
    let flat: Vec<Vec<Scalar>> = pts
        .iter()
        .map(|p| (0..4).filter(|&i| i != drop).map(|i| p.coords()[i].clone()).collect())
        .collect();
    let space = interpolation_space(&flat, 3, 2).map_err(|e| (2, e.to_string()))?;
    if space.dim != 1 {
        return fail(2, format!("{} points lie on {} independent conics", pts.len(), space.dim));
    }
    let f = &space.basis[0];
    let half = Scalar::from_ratio(1, 2);
    let m: Matrix = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    let mut e = vec![0u32; 3];
                    e[i] += 1;
                    e[j] += 1;
                    let c = f.coeff(&e);
                    if i == j {
                        c
                    } else {
                        &c * &half
                    }
                })
                .collect()
        })
        .collect();
    if linalg::rank(&m) < 3 {
        return fail(2, "the conic is degenerate");
    }
    Ok(())
}

/// Chord classes of one side: direction points and the class of each pair.
struct Chords {
    dirs: Vec<ProjPoint>,
    index: HashMap<ProjPoint, usize>,
    class: Vec<Vec<usize>>,
}

fn chords(pts: &[&ProjPoint], other: &ProjPlane) -> Chords {
    let k = pts.len();
    let mut c = Chords {
        dirs: Vec::new(),
        index: HashMap::new(),
        class: vec![vec![usize::MAX; k]; k],
    };
    for a in 0..k {
        for b in a + 1..k {
            let d = chord_meet(pts[a], pts[b], other);
            let next = c.dirs.len();
            let id = *c.index.entry(d.clone()).or_insert(next);
            if id == next {
                c.dirs.push(d);
            }
            c.class[a][b] = id;
            c.class[b][a] = id;
        }
    }
    c
}

/// Labels `L` of the complete side and the label sum `e[d]` of each
/// direction, so that chord `ab` has direction `d` exactly when
/// `L(a) + L(b) = e[d] mod m`.
fn label_full_side(ch: &Chords, m: usize) -> std::result::Result<(Vec<usize>, Vec<usize>), Stage> {
    // sigma[d] swaps the ends of each chord of direction d
    let mut sigma: Vec<Vec<usize>> = vec![(0..m).collect(); m];
    for a in 0..m {
        for b in a + 1..m {
            let d = ch.class[a][b];
            if sigma[d][a] != a || sigma[d][b] != b {
                return fail(5, "two chords through one point share a direction");
            }
            sigma[d][a] = b;
            sigma[d][b] = a;
        }
    }
    // sigma[d] sigma[0] is a rotation; some d gives a rotation by a unit
    let labels = (0..m).find_map(|d| {
        let mut labels = vec![usize::MAX; m];
        let mut a = 0;
        for t in 0..m {
            if labels[a] != usize::MAX {
                return None;
            }
            labels[a] = t;
            a = sigma[d][sigma[0][a]];
        }
        (a == 0).then_some(labels)
    });
    let Some(labels) = labels else {
        return fail(5, "no pair of directions generates a cyclic order");
    };
    let e: Vec<usize> = (0..m).map(|d| labels[sigma[d][0]]).collect();
    for a in 0..m {
        for b in a + 1..m {
            if (labels[a] + labels[b]) % m != e[ch.class[a][b]] {
                return fail(5, "chord directions do not follow label sums");
            }
        }
    }
    Ok((labels, e))
}

/// Labels of the second side and the offset `s` with
/// `L(a) + L(b) + s = e` for every chord, trying `s = 0` first.
fn label_second_side(
    class: &[Vec<usize>],
    e_of: &[usize],
    m: usize,
) -> std::result::Result<(Vec<usize>, usize), Stage> {
    let k = class.len();
    let sum = |a: usize, b: usize| e_of[class[a][b]];
    let offsets: &[usize] = if m % 2 == 1 { &[0] } else { &[0, 1] };
    for &s in offsets {
        'start: for x in 0..m {
            let mut labels = vec![x];
            labels.extend((1..k).map(|b| (sum(0, b) + 2 * m - s - x) % m));
            let mut used = vec![false; m];
            for &l in &labels {
                if std::mem::replace(&mut used[l], true) {
                    continue 'start;
                }
            }
            for a in 1..k {
                for b in a + 1..k {
                    if (labels[a] + labels[b] + s) % m != sum(a, b) {
                        continue 'start;
                    }
                }
            }
            return Ok((labels, s));
        }
    }
    fail(5, "no labelling of the second polygon matches the directions")
}

fn model_point(first_side: bool, num: usize, den: usize) -> Result<ProjPoint> {
    let (c, s) = (Scalar::cos_turn(num as i64, den as u32)?, Scalar::sin_turn(num as i64, den as u32)?);
    if first_side {
        ProjPoint::new([c, s, Scalar::zero(), Scalar::one()])
    } else {
        ProjPoint::new([c, s, Scalar::one(), Scalar::zero()])
    }
}

fn rows_for(x: &ProjPoint, y: &ProjPoint, out: &mut Matrix) {
    let (x, y) = (x.coords(), y.coords());
    for r in 0..4 {
        for t in r + 1..4 {
            let mut row = vec![Scalar::zero(); 16];
            for c in 0..4 {
                row[4 * r + c] = &x[c] * &y[t];
                row[4 * t + c] = -(&x[c] * &y[r]);
            }
            out.push(row);
        }
    }
}

/// An invertible `M` with `M x_j` proportional to `y_j` for every pair.
fn projectivity_between(pairs: &[(ProjPoint, &ProjPoint)]) -> Option<Matrix> {
    let mut rows = Matrix::new();
    let head = pairs.len().min(6);
    for (x, y) in &pairs[..head] {
        rows_for(x, y, &mut rows);
    }
    let mut ns = linalg::nullspace(&rows, 16);
    if ns.len() != 1 {
        for (x, y) in &pairs[head..] {
            rows_for(x, y, &mut rows);
        }
        ns = linalg::nullspace(&rows, 16);
        if ns.len() != 1 {
            return None;
        }
    }
    let v = &ns[0];
    let m: Matrix = (0..4).map(|r| v[4 * r..4 * r + 4].to_vec()).collect();
    if linalg::det(&m).is_zero() {
        return None;
    }
    let ok = pairs.iter().all(|(x, y)| {
        let mx = linalg::mat_vec(&m, x.coords());
        let y = y.coords();
        (0..4).all(|r| (r + 1..4).all(|t| (&mx[r] * &y[t] - &mx[t] * &y[r]).is_zero()))
    });
    ok.then_some(m)
}

struct Candidate<'a> {
    planes: [&'a ProjPlane; 2],
    sides: [&'a [usize]; 2],
}

fn attempt(s: &PointSet, c: &Candidate) -> std::result::Result<ExtremalVerdict, Stage> {
    let [f_idx, g_idx] = c.sides;
    let m = f_idx.len();
    let f: Vec<&ProjPoint> = f_idx.iter().map(|&i| &s.points[i]).collect();
    let g: Vec<&ProjPoint> = g_idx.iter().map(|&i| &s.points[i]).collect();

    on_irreducible_conic(c.planes[0], &f)?;
    on_irreducible_conic(c.planes[1], &g)?;

    let fc = chords(&f, c.planes[1]);
    if fc.dirs.len() != m {
        return fail(3, format!("{} points give {} chord directions", m, fc.dirs.len()));
    }
    let gc = chords(&g, c.planes[0]);
    let mut g_class = gc.class.clone();
    for row in g_class.iter_mut() {
        for d in row.iter_mut().filter(|d| **d != usize::MAX) {
            match fc.index.get(&gc.dirs[*d]) {
                Some(&id) => *d = id,
                None => return fail(4, "a chord direction of the second polygon is new"),
            }
        }
    }
    if g.len() == m && gc.dirs.len() != m {
        return fail(4, "the direction sets differ");
    }

    let (f_labels, e_of) = label_full_side(&fc, m)?;
    let (g_labels, offset) = label_second_side(&g_class, &e_of, m)?;

    let units: Vec<usize> = (1..m).filter(|k| k.gcd(&m) == 1).collect();
    for &k in &units {
        let mut pairs: Vec<(ProjPoint, &ProjPoint)> = Vec::with_capacity(s.len());
        for (a, &t) in f_labels.iter().enumerate() {
            let x = model_point(true, (k * t) % m, m).map_err(|e| (6, e.to_string()))?;
            pairs.push((x, f[a]));
        }
        for (a, &u) in g_labels.iter().enumerate() {
            let num = (k * (2 * u + offset)) % (2 * m);
            let x = model_point(false, num, 2 * m).map_err(|e| (6, e.to_string()))?;
            pairs.push((x, g[a]));
        }
        // interleave so the first few pairs span space
        let (ff, gg) = pairs.split_at(m);
        let mut mixed: Vec<(ProjPoint, &ProjPoint)> = Vec::with_capacity(pairs.len());
        for i in 0..m {
            mixed.extend(ff.get(i).cloned());
            mixed.extend(gg.get(i).cloned());
        }
        let Some(proj) = projectivity_between(&mixed) else { continue };

        let mut conics = [vec![None; m], vec![None; m]];
        for (a, &t) in f_labels.iter().enumerate() {
            conics[0][t] = Some(f_idx[a]);
        }
        for (a, &u) in g_labels.iter().enumerate() {
            conics[1][u] = Some(g_idx[a]);
        }
        let mut directions = vec![fc.dirs[0].clone(); m];
        for (d, &e) in e_of.iter().enumerate() {
            directions[e] = fc.dirs[d].clone();
        }
        let minus = g.len() < m;
        let (kind, delta) = match (offset, minus) {
            (0, false) => (VerdictKind::Prism, Delta::Zero),
            (0, true) => (VerdictKind::PrismMinusPoint, Delta::Zero),
            (_, false) => (VerdictKind::AntiPrism, Delta::Half),
            (_, true) => (VerdictKind::AntiPrismMinusPoint, Delta::Half),
        };
        return Ok(ExtremalVerdict {
            kind,
            m: Some(m),
            delta: Some(delta),
            witness: Some(ExtremalWitness {
                planes: [c.planes[0].clone(), c.planes[1].clone()],
                conics,
                directions,
                multiplier: k,
                projectivity: proj,
            }),
            stage: None,
            reason: None,
        });
    }
    fail(6, "no projectivity maps the model onto the set")
}

/// Decides whether `S` is a prism, an anti-prism, or one of these with a
/// point removed, up to projectivity.
///
/// For odd `m` the two are projectively equivalent and the verdict is
/// always the prism form.
pub fn classify_extremal(s: &PointSet) -> Result<ExtremalVerdict> {
    let census = plane_census(s)?;
    let n = s.len();
    let need = (n / 2).max(3);
    let big: Vec<_> = census.planes.iter().filter(|p| p.incidence.len() >= need).collect();
    let mut best: Option<Stage> = None;
    for (i, a) in big.iter().enumerate() {
        for b in &big[i + 1..] {
            let (la, lb) = (a.incidence.len(), b.incidence.len());
            if la + lb != n || la.abs_diff(lb) > 1 || a.incidence.iter().any(|x| b.incidence.contains(x)) {
                continue;
            }
            let (x, y) = if lb > la { (b, a) } else { (a, b) };
            let cand = Candidate {
                planes: [&x.plane, &y.plane],
                sides: [&x.incidence, &y.incidence],
            };
            match attempt(s, &cand) {
                Ok(v) => return Ok(v),
                Err(e) => {
                    if best.as_ref().is_none_or(|b| e.0 > b.0) {
                        best = Some(e);
                    }
                }
            }
        }
    }
    let (stage, reason) = best.unwrap_or((1, "no two planes split the points evenly".into()));
    Ok(ExtremalVerdict::rejected(stage, reason))
}
