//! The dual arrangement: vertices are the spanned planes, edges are the
//! segments cut on the lines `p* ∩ q*`, and faces are the cells of the line
//! arrangement inside each dual plane `p*`.

mod arrangement;
mod classify;
mod diamond;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geometry::ProjPoint;

pub use arrangement::{build_gamma, build_gamma_with};
pub use classify::{classify_edges, edge_class, find_segments, Segment};
pub use diamond::{extract_double_diamond, DoubleDiamond};

/// A spanned plane seen as a point of the dual space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualVertex {
    pub location: ProjPoint,
    /// Sorted indices of the points whose dual planes pass through this vertex.
    pub incident: Vec<usize>,
    pub degree: usize,
}

impl DualVertex {
    pub fn multiplicity(&self) -> usize {
        self.incident.len()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClass {
    pub good: bool,
    pub bad: bool,
    pub rather_good: bool,
    pub slightly_bad: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualEdge {
    /// The pair `(p, q)`, `p < q`, whose dual line carries the edge.
    pub carrier: (usize, usize),
    /// Position of the first endpoint in the cyclic order of the carrier.
    pub position: usize,
    /// Vertex indices; the edge runs from the first to the second in the
    /// carrier's cyclic order.
    pub endpoints: [usize; 2],
    pub faces: Vec<usize>,
    pub triangle_count: usize,
    pub class: Option<EdgeClass>,
}

/// The vertices of one dual line `p* ∩ q*` in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Carrier {
    pub pair: (usize, usize),
    pub vertices: Vec<usize>,
    pub first_edge: usize,
    /// Two coordinates that chart the line.
    pub chart: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    /// Index of the point whose dual plane contains the face.
    pub plane: usize,
    /// Sorted edge indices.
    pub edges: Vec<usize>,
}

impl Face {
    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gamma {
    pub n: usize,
    pub vertices: Vec<DualVertex>,
    /// One carrier per pair `p < q`, in lexicographic order.
    pub carriers: Vec<Carrier>,
    pub edges: Vec<DualEdge>,
    pub faces: Vec<Face>,
    pub faces_by_plane: Vec<Vec<usize>>,
}

impl Gamma {
    pub fn carrier_id(&self, p: usize, q: usize) -> usize {
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        assert!(q < self.n && p != q, "no carrier for ({p}, {q})");
        p * self.n - p * (p + 1) / 2 + (q - p - 1)
    }

    pub fn carrier(&self, p: usize, q: usize) -> &Carrier {
        &self.carriers[self.carrier_id(p, q)]
    }

    /// `(i, v_i)` sorted by `i`.
    pub fn v_counts(&self) -> Vec<(usize, usize)> {
        histogram(self.vertices.iter().map(DualVertex::multiplicity))
    }

    /// `(j, f_j)` sorted by `j`.
    pub fn f_counts(&self) -> Vec<(usize, usize)> {
        histogram(self.faces.iter().map(Face::size))
    }

    pub fn e_total(&self) -> usize {
        self.edges.len()
    }

    pub fn f_total(&self) -> usize {
        self.faces.len()
    }

    /// The edges meeting vertex `h`: two per carrier through it.
    pub fn vertex_edges(&self, h: usize) -> Vec<usize> {
        let inc = &self.vertices[h].incident;
        let mut out = Vec::with_capacity(inc.len() * (inc.len() - 1));
        for (a, &p) in inc.iter().enumerate() {
            for &q in &inc[a + 1..] {
                let c = self.carrier(p, q);
                let k = c.vertices.len();
                let pos = c
                    .vertices
                    .iter()
                    .position(|&v| v == h)
                    .expect("vertex lies on its carriers");
                out.push(c.first_edge + pos);
                out.push(c.first_edge + (pos + k - 1) % k);
            }
        }
        out
    }

    pub fn summary(&self) -> GammaSummary {
        let mut counts = EdgeClassCounts::default();
        for e in 0..self.edges.len() {
            let c = edge_class(self, e);
            counts.good += c.good as usize;
            counts.bad += c.bad as usize;
            counts.rather_good += c.rather_good as usize;
            counts.slightly_bad += c.slightly_bad as usize;
        }
        GammaSummary {
            n: self.n,
            v: self.v_counts(),
            e: self.e_total(),
            f: self.f_counts(),
            residuals: verify_identities(self),
            edge_class_counts: counts,
        }
    }
}

fn histogram(it: impl Iterator<Item = usize>) -> Vec<(usize, usize)> {
    let mut h: BTreeMap<usize, usize> = BTreeMap::new();
    for x in it {
        *h.entry(x).or_default() += 1;
    }
    h.into_iter().collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClassCounts {
    pub good: usize,
    pub bad: usize,
    pub rather_good: usize,
    pub slightly_bad: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSummary {
    pub n: usize,
    pub v: Vec<(usize, usize)>,
    #[serde(rename = "E")]
    pub e: usize,
    pub f: Vec<(usize, usize)>,
    pub residuals: [i64; 4],
    pub edge_class_counts: EdgeClassCounts,
}

/// Left side minus right side of the four counting identities:
///
/// * `sum i v_i - 2|E| + |F| = n`
/// * `4|E| = sum j f_j`
/// * `2|E| = sum i(i-1) v_i`
/// * `3 v_3 = 3n + sum_{i>=5} i(i-4) v_i + sum_{j>=4} (j-3) f_j`
pub fn verify_identities(g: &Gamma) -> [i64; 4] {
    let v = g.v_counts();
    let f = g.f_counts();
    let n = g.n as i64;
    let e = g.e_total() as i64;
    let ft = g.f_total() as i64;
    let sv = |w: &dyn Fn(i64) -> i64| v.iter().map(|&(i, c)| w(i as i64) * c as i64).sum::<i64>();
    let sf = |w: &dyn Fn(i64) -> i64| f.iter().map(|&(j, c)| w(j as i64) * c as i64).sum::<i64>();
    let v3 = v.iter().find(|&&(i, _)| i == 3).map_or(0, |&(_, c)| c as i64);
    [
        sv(&|i| i) - 2 * e + ft - n,
        4 * e - sf(&|j| j),
        2 * e - sv(&|i| i * (i - 1)),
        3 * v3 - 3 * n - sv(&|i| if i >= 5 { i * (i - 4) } else { 0 }) - sf(&|j| j - 3),
    ]
}
