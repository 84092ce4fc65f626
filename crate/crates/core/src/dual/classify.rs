use serde::{Deserialize, Serialize};

use super::{EdgeClass, Gamma};

fn is_good(g: &Gamma, e: usize) -> bool {
    let edge = &g.edges[e];
    edge.triangle_count == 4
        && edge
            .endpoints
            .iter()
            .all(|&h| g.vertices[h].multiplicity() == 4)
}

/// The classification of edge `e`, read from the stored flags when present.
pub fn edge_class(g: &Gamma, e: usize) -> EdgeClass {
    if let Some(c) = g.edges[e].class {
        return c;
    }
    let good = is_good(g, e);
    let rather_good = good
        && g.edges[e]
            .endpoints
            .iter()
            .all(|&h| g.vertex_edges(h).into_iter().all(|f| is_good(g, f)));
    EdgeClass {
        good,
        bad: !good,
        rather_good,
        slightly_bad: !rather_good,
    }
}

pub fn classify_edges(mut g: Gamma) -> Gamma {
    let classes: Vec<EdgeClass> = (0..g.edges.len()).map(|e| edge_class(&g, e)).collect();
    for (edge, c) in g.edges.iter_mut().zip(classes) {
        edge.class = Some(c);
    }
    g
}

/// A maximal run of rather good edges along one dual line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub carrier: (usize, usize),
    /// Edge indices in cyclic order along the line.
    pub edges: Vec<usize>,
    /// True when every edge of the line is rather good.
    pub cyclic: bool,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The vertices met by the segment, in order.
    pub fn vertices(&self, g: &Gamma) -> Vec<usize> {
        let mut out: Vec<usize> = self.edges.iter().map(|&e| g.edges[e].endpoints[0]).collect();
        if !self.cyclic {
            if let Some(&last) = self.edges.last() {
                out.push(g.edges[last].endpoints[1]);
            }
        }
        out
    }
}

pub fn find_segments(g: &Gamma, p: usize, q: usize) -> Vec<Segment> {
    let c = g.carrier(p, q);
    let k = c.vertices.len();
    let good: Vec<bool> = (0..k)
        .map(|t| edge_class(g, c.first_edge + t).rather_good)
        .collect();
    if good.iter().all(|&b| b) {
        return vec![Segment {
            carrier: c.pair,
            edges: (0..k).map(|t| c.first_edge + t).collect(),
            cyclic: true,
        }];
    }
    // start just after a slightly bad edge so no run wraps around
    let start = (good.iter().position(|&b| !b).unwrap() + 1) % k;
    let mut out = Vec::new();
    let mut run = Vec::new();
    for s in 0..k {
        let t = (start + s) % k;
        if good[t] {
            run.push(c.first_edge + t);
        } else if !run.is_empty() {
            out.push(std::mem::take(&mut run));
        }
    }
    if !run.is_empty() {
        out.push(run);
    }
    out.into_iter()
        .map(|edges| Segment {
            carrier: c.pair,
            edges,
            cyclic: false,
        })
        .collect()
}
