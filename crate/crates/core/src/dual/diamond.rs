use serde::{Deserialize, Serialize};

use super::{edge_class, Gamma};
use crate::error::{Error, Result};
use crate::generators::PointSet;
use crate::geometry::coplanar;

/// Ten points around a rather good edge on `p_0* ∩ q_0*`, labeled so that
/// `p_i, q_j, r_k, s_l` are coplanar whenever `i + j + k + l = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleDiamond {
    pub edge: usize,
    pub p_m1: usize,
    pub p_0: usize,
    pub p_1: usize,
    pub q_m1: usize,
    pub q_0: usize,
    pub q_1: usize,
    pub r_m1: usize,
    pub r_0: usize,
    pub s_0: usize,
    pub s_1: usize,
}

impl DoubleDiamond {
    /// Order: `p_-1, p_0, p_1, q_-1, q_0, q_1, r_-1, r_0, s_0, s_1`.
    pub fn points(&self) -> [usize; 10] {
        [
            self.p_m1, self.p_0, self.p_1, self.q_m1, self.q_0, self.q_1, self.r_m1, self.r_0,
            self.s_0, self.s_1,
        ]
    }

    fn p(&self, i: i32) -> usize {
        [self.p_m1, self.p_0, self.p_1][(i + 1) as usize]
    }

    fn q(&self, j: i32) -> usize {
        [self.q_m1, self.q_0, self.q_1][(j + 1) as usize]
    }

    fn r(&self, k: i32) -> usize {
        [self.r_m1, self.r_0][(k + 1) as usize]
    }

    fn s(&self, l: i32) -> usize {
        [self.s_0, self.s_1][l as usize]
    }

    /// Every `(p_i, q_j, r_k, s_l)` in range with `i + j + k + l = 0`.
    pub fn tetra_grid_quadruples(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for i in -1..=1 {
            for j in -1..=1 {
                for k in -1..=0 {
                    for l in 0..=1 {
                        if i + j + k + l == 0 {
                            out.push([self.p(i), self.q(j), self.r(k), self.s(l)]);
                        }
                    }
                }
            }
        }
        out
    }
}

/// For each triangle in `x*` on edge `e`, the point cutting its side at the
/// first endpoint, the point cutting its side at the second endpoint, and
/// its third vertex.
fn triangles_on(g: &Gamma, e: usize, x: usize) -> Result<Vec<(usize, usize, usize)>> {
    let edge = &g.edges[e];
    let [va, vb] = edge.endpoints;
    let mut out = Vec::new();
    for &f in &edge.faces {
        let face = &g.faces[f];
        if face.plane != x {
            continue;
        }
        if face.size() != 3 {
            return Err(Error::StructureViolation(format!(
                "face {f} on edge {e} is not a triangle"
            )));
        }
        let (mut at_a, mut at_b, mut apex) = (None, None, None);
        for &s in face.edges.iter().filter(|&&s| s != e) {
            let side = &g.edges[s];
            let (c0, c1) = side.carrier;
            let other = if c0 == x { c1 } else { c0 };
            if side.endpoints.contains(&va) {
                at_a = Some(other);
                apex = side.endpoints.iter().copied().find(|&h| h != va);
            } else if side.endpoints.contains(&vb) {
                at_b = Some(other);
            }
        }
        match (at_a, at_b, apex) {
            (Some(a), Some(b), Some(w)) => out.push((a, b, w)),
            _ => {
                return Err(Error::StructureViolation(format!(
                    "triangle {f} on edge {e} does not meet both endpoints"
                )))
            }
        }
    }
    if out.len() != 2 {
        return Err(Error::StructureViolation(format!(
            "edge {e} has {} faces in the dual plane of point {x}",
            out.len()
        )));
    }
    out.sort();
    Ok(out)
}

fn fourth(g: &Gamma, h: usize, known: [usize; 3]) -> Result<usize> {
    let inc = &g.vertices[h].incident;
    let rest: Vec<usize> = inc.iter().copied().filter(|x| !known.contains(x)).collect();
    match (inc.len(), rest.as_slice()) {
        (4, [x]) => Ok(*x),
        _ => Err(Error::StructureViolation(format!(
            "vertex {h} is not a four-point plane through {known:?}"
        ))),
    }
}

/// Labels the ten points of the double diamond around the rather good edge
/// `e` and checks the tetra-grid coplanarities exactly.
pub fn extract_double_diamond(g: &Gamma, s: &PointSet, e: usize) -> Result<DoubleDiamond> {
    if e >= g.edges.len() || !edge_class(g, e).rather_good {
        return Err(Error::NotRatherGood);
    }
    let (p0, q0) = g.edges[e].carrier;
    // in q0*: one triangle is cut by (s_1, r_0), the other by (r_-1, s_0)
    let tq = triangles_on(g, e, q0)?;
    let (s1, r0, w1) = tq[0];
    let (rm1, s0, w2) = tq[1];
    if s1 == rm1 || r0 == s0 {
        return Err(Error::StructureViolation(format!(
            "triangles on edge {e} share a side line"
        )));
    }
    let pm1 = fourth(g, w1, [q0, s1, r0])?;
    let p1 = fourth(g, w2, [q0, rm1, s0])?;
    let tp = triangles_on(g, e, p0)?;
    let mut qm1 = None;
    let mut q1 = None;
    for &(a, b, w) in &tp {
        if (a, b) == (s1, r0) {
            qm1 = Some(fourth(g, w, [p0, s1, r0])?);
        } else if (a, b) == (rm1, s0) {
            q1 = Some(fourth(g, w, [p0, rm1, s0])?);
        }
    }
    let (Some(qm1), Some(q1)) = (qm1, q1) else {
        return Err(Error::StructureViolation(format!(
            "edge {e}: the triangles in the two carrier planes are twisted"
        )));
    };
    let dd = DoubleDiamond {
        edge: e,
        p_m1: pm1,
        p_0: p0,
        p_1: p1,
        q_m1: qm1,
        q_0: q0,
        q_1: q1,
        r_m1: rm1,
        r_0: r0,
        s_0: s0,
        s_1: s1,
    };
    let mut pts = dd.points().to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() != 10 {
        return Err(Error::StructureViolation(format!(
            "edge {e}: the double diamond points are not distinct: {:?}",
            dd.points()
        )));
    }
    for quad in dd.tetra_grid_quadruples() {
        let [a, b, c, d] = quad.map(|i| &s.points[i]);
        if !coplanar(a, b, c, d) {
            return Err(Error::StructureViolation(format!(
                "edge {e}: points {quad:?} are not coplanar"
            )));
        }
    }
    Ok(dd)
}
