use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{Carrier, DualEdge, DualVertex, Face, Gamma};
use crate::census::{spanned_planes, validate_with};
use crate::error::{Error, Result};
use crate::generators::PointSet;
use crate::geometry::{dot4, minor2, Approx4};
use crate::parallel;
use crate::scalar::Scalar;

fn sgn(x: &Scalar) -> i32 {
    x.signum().expect("coordinates were checked to be real")
}

fn cross2(a: &[Scalar; 2], b: &[Scalar; 2]) -> Scalar {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// 0 for directions in the upper half plane (including the positive x axis).
fn half(v: &[Scalar; 2]) -> u8 {
    let y = sgn(&v[1]);
    if y > 0 || (y == 0 && sgn(&v[0]) > 0) {
        0
    } else {
        1
    }
}

fn angle_cmp(a: &[Scalar; 2], b: &[Scalar; 2]) -> Ordering {
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&sgn(&cross2(a, b))))
}

pub fn build_gamma(s: &PointSet) -> Result<Gamma> {
    build_gamma_with(s, 1)
}

/// Builds vertices, edges and faces exactly. Checks that every edge lies on
/// four faces and that each dual plane satisfies `V - E + F = 1`.
pub fn build_gamma_with(s: &PointSet, jobs: usize) -> Result<Gamma> {
    let report = validate_with(s, jobs);
    if !report.is_valid() {
        return Err(Error::ValidationFailure(Box::new(report)));
    }
    if s.points.iter().any(|p| p.coords().iter().any(|x| !x.is_real())) {
        return Err(Error::NotReal);
    }
    let n = s.len();
    let vertices: Vec<DualVertex> = spanned_planes(&s.points, jobs, true)
        .into_iter()
        .map(|sp| {
            let i = sp.incidence.len();
            DualVertex {
                location: sp.plane.dual(),
                degree: i * (i - 1),
                incident: sp.incidence,
            }
        })
        .collect();

    let mut on_pair: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (h, v) in vertices.iter().enumerate() {
        for (a, &p) in v.incident.iter().enumerate() {
            for &q in &v.incident[a + 1..] {
                on_pair.entry((p, q)).or_default().push(h);
            }
        }
    }
    if on_pair.len() != n * (n - 1) / 2 {
        return Err(Error::ArrangementViolation(
            "some dual line carries no vertex".into(),
        ));
    }
    if let Some((pair, _)) = on_pair.iter().find(|(_, vs)| vs.len() < 2) {
        return Err(Error::ArrangementViolation(format!(
            "dual line of {pair:?} carries a single vertex"
        )));
    }

    let mut carriers: Vec<Carrier> = parallel::run(jobs, || {
        on_pair
            .into_par_iter()
            .map(|(pair, vs)| order_carrier(pair, vs, &vertices))
            .collect()
    });
    let mut edges = Vec::new();
    for c in &mut carriers {
        c.first_edge = edges.len();
        let k = c.vertices.len();
        for t in 0..k {
            edges.push(DualEdge {
                carrier: c.pair,
                position: t,
                endpoints: [c.vertices[t], c.vertices[(t + 1) % k]],
                faces: Vec::new(),
                triangle_count: 0,
                class: None,
            });
        }
    }
    let mut g = Gamma {
        n,
        vertices,
        carriers,
        edges,
        faces: Vec::new(),
        faces_by_plane: vec![Vec::new(); n],
    };

    let approx_pts: Vec<Approx4> = s.points.iter().map(|p| Approx4::of(p.coords())).collect();
    // sign of q . u_H for every vertex H and point q not on it
    let outer: Vec<Vec<i8>> = parallel::run(jobs, || {
        g.vertices
            .par_iter()
            .map(|v| {
                let u = v.location.coords();
                let au = Approx4::of(u);
                (0..n)
                    .map(|q| {
                        if v.incident.binary_search(&q).is_ok() {
                            return 0;
                        }
                        let sg = au
                            .pairing_sign(&approx_pts[q])
                            .unwrap_or_else(|| sgn(&dot4(u, s.points[q].coords())));
                        assert!(sg != 0, "incidence missed by the census");
                        sg as i8
                    })
                    .collect()
            })
            .collect()
    });

    let mut at_plane: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (h, v) in g.vertices.iter().enumerate() {
        for &p in &v.incident {
            at_plane[p].push(h);
        }
    }
    let per_plane: Vec<Result<Vec<Face>>> = parallel::run(jobs, || {
        (0..n)
            .into_par_iter()
            .map(|p| plane_faces(&g, s, p, &at_plane[p], &outer))
            .collect()
    });
    for (p, faces) in per_plane.into_iter().enumerate() {
        let faces = faces?;
        let v_pi = at_plane[p].len() as i64;
        let e_pi: i64 = (0..n)
            .filter(|&q| q != p)
            .map(|q| g.carrier(p, q).vertices.len() as i64)
            .sum();
        if v_pi - e_pi + faces.len() as i64 != 1 {
            return Err(Error::ArrangementViolation(format!(
                "Euler relation fails in the dual plane of point {p}: V={v_pi} E={e_pi} F={}",
                faces.len()
            )));
        }
        for f in faces {
            let id = g.faces.len();
            for &e in &f.edges {
                g.edges[e].faces.push(id);
                if f.size() == 3 {
                    g.edges[e].triangle_count += 1;
                }
            }
            g.faces_by_plane[p].push(id);
            g.faces.push(f);
        }
    }
    if let Some((e, edge)) = g.edges.iter().enumerate().find(|(_, e)| e.faces.len() != 4) {
        return Err(Error::ArrangementViolation(format!(
            "edge {e} lies on {} faces",
            edge.faces.len()
        )));
    }
    Ok(g)
}

/// Sorts the vertices of the line `p* ∩ q*` cyclically, using a pair of
/// coordinates in which the line's two-dimensional subspace is a chart.
fn order_carrier(pair: (usize, usize), mut vs: Vec<usize>, verts: &[DualVertex]) -> Carrier {
    let u0 = verts[vs[0]].location.coords();
    let u1 = verts[vs[1]].location.coords();
    let chart = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .find(|&(i, j)| !minor2(u0, u1, i, j).is_zero())
        .expect("distinct vertices span the line");
    let key = |h: usize| {
        let u = verts[h].location.coords();
        let (x, y) = (u[chart.0].clone(), u[chart.1].clone());
        let sx = sgn(&x);
        if sx < 0 || (sx == 0 && sgn(&y) < 0) {
            [-x, -y]
        } else {
            [x, y]
        }
    };
    let mut keyed: Vec<([Scalar; 2], usize)> = vs.iter().map(|&h| (key(h), h)).collect();
    keyed.sort_by(|a, b| 0.cmp(&sgn(&cross2(&a.0, &b.0))));
    vs = keyed.into_iter().map(|(_, h)| h).collect();
    Carrier {
        pair,
        vertices: vs,
        first_edge: 0,
        chart,
    }
}

struct Ray {
    dir: [Scalar; 2],
    q: usize,
}

/// Faces of the line arrangement in `p*`, found as the sectors around each
/// vertex and grouped by their sign vectors.
fn plane_faces(
    g: &Gamma,
    s: &PointSet,
    p: usize,
    verts: &[usize],
    outer: &[Vec<i8>],
) -> Result<Vec<Face>> {
    let n = g.n;
    let cp = s.points[p].coords();
    let lead = cp.iter().position(|x| !x.is_zero()).expect("nonzero point");
    // (q . w_j) with w_j = e_j - p_j e_lead spanning p-perp
    let qw = |q: usize, j: usize| -> Scalar {
        let cq = s.points[q].coords();
        &cq[j] - &cp[j] * &cq[lead]
    };
    let mut faces: BTreeMap<Vec<i8>, (usize, Vec<usize>)> = BTreeMap::new();
    for &h in verts {
        let v = &g.vertices[h];
        let u = v.location.coords();
        let free: Vec<usize> = (0..4).filter(|&j| j != lead).collect();
        let j0 = *free
            .iter()
            .find(|&&j| !u[j].is_zero())
            .expect("vertex is a nonzero vector in p-perp");
        let ab: Vec<usize> = free.into_iter().filter(|&j| j != j0).collect();
        let (ja, jb) = (ab[0], ab[1]);
        let others: Vec<usize> = v.incident.iter().copied().filter(|&q| q != p).collect();
        let coeff: BTreeMap<usize, (Scalar, Scalar)> =
            others.iter().map(|&q| (q, (qw(q, ja), qw(q, jb)))).collect();
        let mut rays = Vec::with_capacity(2 * others.len());
        for &q in &others {
            let (a, b) = &coeff[&q];
            let d = [b.clone(), -a];
            rays.push(Ray { dir: [-&d[0], -&d[1]], q });
            rays.push(Ray { dir: d, q });
        }
        rays.sort_by(|x, y| angle_cmp(&x.dir, &y.dir));
        let ray_edge = |r: &Ray| -> usize {
            let c = g.carrier(p, r.q);
            let k = c.vertices.len();
            let pos = c.vertices.iter().position(|&x| x == h).expect("vertex on carrier");
            // the direction as a 4-vector in p-perp
            let mut dvec = [Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero()];
            dvec[ja] = r.dir[0].clone();
            dvec[jb] = r.dir[1].clone();
            dvec[lead] = -(&r.dir[0] * &cp[ja] + &r.dir[1] * &cp[jb]);
            let (ci, cj) = c.chart;
            let turn = &u[ci] * &dvec[cj] - &u[cj] * &dvec[ci];
            if sgn(&turn) > 0 {
                c.first_edge + pos
            } else {
                c.first_edge + (pos + k - 1) % k
            }
        };
        let edges_of: Vec<usize> = rays.iter().map(ray_edge).collect();
        let m = rays.len();
        for t in 0..m {
            let (r0, r1) = (&rays[t], &rays[(t + 1) % m]);
            let mid = [&r0.dir[0] + &r1.dir[0], &r0.dir[1] + &r1.dir[1]];
            let mut key: Vec<i8> = (0..n)
                .filter(|&q| q != p)
                .map(|q| match coeff.get(&q) {
                    Some((a, b)) => {
                        let sg = sgn(&(&mid[0] * a + &mid[1] * b));
                        assert!(sg != 0, "sector interior lies on a line");
                        sg as i8
                    }
                    None => outer[h][q],
                })
                .collect();
            if key[0] < 0 {
                key.iter_mut().for_each(|x| *x = -*x);
            }
            let entry = faces.entry(key).or_default();
            entry.0 += 1;
            entry.1.push(edges_of[t]);
            entry.1.push(edges_of[(t + 1) % m]);
        }
    }
    let mut out = Vec::with_capacity(faces.len());
    for (_, (corners, mut edges)) in faces {
        edges.sort_unstable();
        edges.dedup();
        if edges.len() != corners {
            return Err(Error::ArrangementViolation(format!(
                "a face in the dual plane of point {p} has {corners} corners but {} edges",
                edges.len()
            )));
        }
        out.push(Face { plane: p, edges });
    }
    out.sort_by(|a, b| a.edges.cmp(&b.edges));
    Ok(out)
}
