//! Exact-rational metric graphs: finite 1-complexes with positive rational
//! edge lengths and the intrinsic path metric.
//!
//! A point of edge `e = (u, v)` is addressed by its arc-length parameter
//! `t ∈ [0, len(e)]`, with `t = 0` at `u` and `t = len(e)` at `v`.

mod cells;
mod closed;
mod distance;
mod map;
mod pl;

pub use cells::{components, extract_sublattice, Arrangement, Cell, Extracted};
pub use closed::ClosedSet;
pub use distance::{distance_between, distance_to_set, kappa_at, urysohn, KappaMap};
pub use map::{EdgeImage, PLMap};
pub use pl::{Pl1, PLFunction};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub len: Q,
}

/// A point of a metric graph. Edge points are strictly inside their edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Vertex(u32),
    Edge(u32, Q),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    vertices: u32,
    edges: Vec<Edge>,
    /// Optional planar positions of the vertices (cosmetic).
    pub layout: Option<Vec<(Q, Q)>>,
    incidence: Vec<Vec<(u32, bool)>>,
}

impl MetricGraph {
    /// Builds a graph on vertices `0..vertices`. Loops and non-positive
    /// lengths are rejected.
    pub fn new(vertices: u32, edges: Vec<Edge>) -> Result<Self> {
        let mut incidence = vec![Vec::new(); vertices as usize];
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertices || e.v >= vertices {
                return Err(Error::Input(format!("edge {i} has an endpoint outside 0..{vertices}")));
            }
            if e.u == e.v {
                return Err(Error::Input(format!("edge {i} is a loop")));
            }
            if e.len <= Q::zero() {
                return Err(Error::Input(format!("edge {i} has non-positive length")));
            }
            incidence[e.u as usize].push((i as u32, false));
            incidence[e.v as usize].push((i as u32, true));
        }
        Ok(MetricGraph { vertices, edges, layout: None, incidence })
    }

    pub fn with_layout(mut self, layout: Vec<(Q, Q)>) -> Result<Self> {
        if layout.len() != self.vertices as usize {
            return Err(Error::Input(format!(
                "layout has {} positions for {} vertices",
                layout.len(),
                self.vertices
            )));
        }
        self.layout = Some(layout);
        Ok(self)
    }

    /// The unit segment `[0, 1]` as one edge, laid out horizontally.
    pub fn unit_segment() -> Self {
        MetricGraph::new(2, vec![Edge { u: 0, v: 1, len: Q::one() }])
            .and_then(|g| g.with_layout(vec![(Q::zero(), Q::zero()), (Q::one(), Q::zero())]))
            .expect("unit segment is valid")
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertices
    }

    pub fn edge_count(&self) -> u32 {
        self.edges.len() as u32
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: u32) -> &Edge {
        &self.edges[e as usize]
    }

    pub fn len(&self, e: u32) -> &Q {
        &self.edges[e as usize].len
    }

    /// Incident edges of `v`: `(edge, at_end)` where `at_end` means `v` is the
    /// edge's `v` endpoint (parameter `len`).
    pub fn incident(&self, v: u32) -> &[(u32, bool)] {
        &self.incidence[v as usize]
    }

    /// The point of edge `e` at parameter `t`, normalized to a vertex at the ends.
    pub fn point(&self, e: u32, t: Q) -> Point {
        let edge = self.edge(e);
        if t.is_zero() {
            Point::Vertex(edge.u)
        } else if t == edge.len {
            Point::Vertex(edge.v)
        } else {
            Point::Edge(e, t)
        }
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        match p {
            Point::Vertex(v) if *v < self.vertices => Ok(()),
            Point::Edge(e, t) if *e < self.edge_count() && *t > Q::zero() && t < self.len(*e) => {
                Ok(())
            }
            _ => Err(Error::Input(format!("{p:?} is not a point of the graph"))),
        }
    }

    /// True when every vertex is reachable from vertex 0 (the empty graph is
    /// not connected).
    pub fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return false;
        }
        let mut seen = vec![false; self.vertices as usize];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(e, _) in self.incident(v) {
                let edge = self.edge(e);
                let w = if edge.u == v { edge.v } else { edge.u };
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Planar position of a point, interpolated along its edge.
    pub fn position(&self, p: &Point) -> Option<(Q, Q)> {
        let layout = self.layout.as_ref()?;
        Some(match p {
            Point::Vertex(v) => layout[*v as usize].clone(),
            Point::Edge(e, t) => {
                let edge = self.edge(*e);
                let (ux, uy) = &layout[edge.u as usize];
                let (vx, vy) = &layout[edge.v as usize];
                let s = t / &edge.len;
                (ux + (vx - ux) * &s, uy + (vy - uy) * &s)
            }
        })
    }

    /// Splits edges at the given interior parameters. Original vertices keep
    /// their ids, new vertices follow in edge order; the pieces of edge 0
    /// come first, then those of edge 1, and so on. Returns the subdivided
    /// graph and its homeomorphism onto `self`.
    pub fn subdivide(&self, cuts: &BTreeMap<u32, Vec<Q>>) -> Result<(MetricGraph, PLMap)> {
        let mut next = self.vertices;
        let mut edges = Vec::new();
        let mut images = Vec::new();
        let mut vertex_images: Vec<Point> = (0..self.vertices).map(Point::Vertex).collect();
        let mut layout = self.layout.clone();
        for (ei, edge) in self.edges.iter().enumerate() {
            let ei = ei as u32;
            let mut ts: Vec<Q> = cuts.get(&ei).cloned().unwrap_or_default();
            ts.sort();
            ts.dedup();
            if ts.iter().any(|t| *t <= Q::zero() || *t >= edge.len) {
                return Err(Error::Input(format!("cut outside the interior of edge {ei}")));
            }
            let mut prev_v = edge.u;
            let mut prev_t = Q::zero();
            for t in ts.iter().chain(core::iter::once(&edge.len)) {
                let v = if *t == edge.len {
                    edge.v
                } else {
                    let v = next;
                    next += 1;
                    vertex_images.push(Point::Edge(ei, t.clone()));
                    if let Some(l) = layout.as_mut() {
                        let pos = self.position(&Point::Edge(ei, t.clone())).expect("layout");
                        l.push(pos);
                    }
                    v
                };
                edges.push(Edge { u: prev_v, v, len: t - &prev_t });
                images.push(EdgeImage::Along { edge: ei, from: prev_t.clone(), to: t.clone() });
                prev_v = v;
                prev_t = t.clone();
            }
        }
        let mut g = MetricGraph::new(next, edges)?;
        g.layout = layout;
        let map = PLMap::new(vertex_images, images);
        Ok((g, map))
    }

    /// The subcomplex spanned by `keep_vertices` and `keep_edges` (edges must
    /// have both ends kept), renumbered in increasing order, with its
    /// inclusion map into `self`.
    pub fn subgraph(&self, keep_vertices: &[u32], keep_edges: &[u32]) -> Result<(MetricGraph, PLMap)> {
        let mut new_id = vec![u32::MAX; self.vertices as usize];
        let mut vs: Vec<u32> = keep_vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        for (i, &v) in vs.iter().enumerate() {
            new_id[v as usize] = i as u32;
        }
        let mut es: Vec<u32> = keep_edges.to_vec();
        es.sort_unstable();
        es.dedup();
        let mut edges = Vec::new();
        let mut images = Vec::new();
        for &e in &es {
            let edge = self.edge(e);
            let (u, v) = (new_id[edge.u as usize], new_id[edge.v as usize]);
            if u == u32::MAX || v == u32::MAX {
                return Err(Error::Invariant(format!("subgraph edge {e} lacks an endpoint")));
            }
            edges.push(Edge { u, v, len: edge.len.clone() });
            images.push(EdgeImage::Along { edge: e, from: Q::zero(), to: edge.len.clone() });
        }
        let mut g = MetricGraph::new(vs.len() as u32, edges)?;
        if let Some(l) = &self.layout {
            g.layout = Some(vs.iter().map(|&v| l[v as usize].clone()).collect());
        }
        let map = PLMap::new(vs.iter().map(|&v| Point::Vertex(v)).collect(), images);
        Ok((g, map))
    }

    /// Edges grouped into maximal straight segments: edges are merged
    /// through degree-2 vertices where they continue in the same direction of
    /// the layout (through every degree-2 vertex without a layout). Classes
    /// are sorted, and ordered by their first edge.
    pub fn segment_classes(&self) -> Vec<Vec<u32>> {
        let mut parent: Vec<usize> = (0..self.edges.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for v in 0..self.vertices {
            let inc = self.incident(v);
            if inc.len() != 2 || inc[0].0 == inc[1].0 {
                continue;
            }
            let other = |(e, at_end): (u32, bool)| {
                let edge = self.edge(e);
                if at_end { edge.u } else { edge.v }
            };
            let straight = match &self.layout {
                None => true,
                Some(l) => {
                    let (p, c, n) = (&l[other(inc[0]) as usize], &l[v as usize], &l[other(inc[1]) as usize]);
                    let (dx1, dy1) = (&c.0 - &p.0, &c.1 - &p.1);
                    let (dx2, dy2) = (&n.0 - &c.0, &n.1 - &c.1);
                    &dx1 * &dy2 == &dy1 * &dx2 && &dx1 * &dx2 + &dy1 * &dy2 > Q::zero()
                }
            };
            if straight {
                let (a, b) = (find(&mut parent, inc[0].0 as usize), find(&mut parent, inc[1].0 as usize));
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut classes: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for e in 0..self.edges.len() {
            let root = find(&mut parent, e);
            classes.entry(root).or_default().push(e as u32);
        }
        classes.into_values().collect()
    }

    /// Number of maximal straight segments; see [`Self::segment_classes`].
    pub fn maximal_segments(&self) -> usize {
        self.segment_classes().len()
    }

    /// Same complex with edge `e` stretched by `factor`, and the
    /// homeomorphism back onto `self`.
    pub fn rescaled(&self, e: u32, factor: &Q) -> Result<(MetricGraph, PLMap)> {
        if *factor <= Q::zero() || e >= self.edge_count() {
            return Err(Error::Usage(format!("cannot rescale edge {e} by {factor}")));
        }
        let mut edges = self.edges.clone();
        edges[e as usize].len = &edges[e as usize].len * factor;
        let mut g = MetricGraph::new(self.vertices, edges)?;
        g.layout = self.layout.clone();
        let map = PLMap::identity(self).with_edge_image(
            e,
            EdgeImage::Along { edge: e, from: Q::zero(), to: self.len(e).clone() },
        );
        Ok((g, map))
    }
}

#[cfg(test)]
mod tests;
