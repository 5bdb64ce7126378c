//! Simplicial-style maps between metric graphs: every edge goes to a point
//! or linearly onto a sub-segment of one target edge.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use num_traits::Zero;

use super::cells::{components, Arrangement};
use super::{ClosedSet, MetricGraph, Point};
use crate::error::{Error, Result};
use crate::rational::{max_q, min_q, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeImage {
    /// The whole edge collapses to one point.
    Const(Point),
    /// Parameter `s ∈ [0, len]` goes to `from + (to - from)·s/len` on `edge`.
    Along { edge: u32, from: Q, to: Q },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLMap {
    pub vertex_images: Vec<Point>,
    pub edge_images: Vec<EdgeImage>,
}

impl PLMap {
    pub fn new(vertex_images: Vec<Point>, edge_images: Vec<EdgeImage>) -> Self {
        PLMap { vertex_images, edge_images }
    }

    pub fn identity(g: &MetricGraph) -> Self {
        PLMap {
            vertex_images: (0..g.vertex_count()).map(Point::Vertex).collect(),
            edge_images: (0..g.edge_count())
                .map(|e| EdgeImage::Along { edge: e, from: Q::zero(), to: g.len(e).clone() })
                .collect(),
        }
    }

    pub fn with_edge_image(mut self, e: u32, image: EdgeImage) -> Self {
        self.edge_images[e as usize] = image;
        self
    }

    /// Sizes, ranges and continuity at the vertices.
    pub fn validate(&self, dom: &MetricGraph, tgt: &MetricGraph) -> Result<()> {
        if self.vertex_images.len() != dom.vertex_count() as usize
            || self.edge_images.len() != dom.edge_count() as usize
        {
            return Err(Error::Input("map does not match its domain".into()));
        }
        for p in &self.vertex_images {
            tgt.check_point(p)?;
        }
        for (e, img) in self.edge_images.iter().enumerate() {
            let edge = dom.edge(e as u32);
            let (start, end) = match img {
                EdgeImage::Const(p) => {
                    tgt.check_point(p)?;
                    (p.clone(), p.clone())
                }
                EdgeImage::Along { edge: te, from, to } => {
                    if *te >= tgt.edge_count() {
                        return Err(Error::Input(format!("edge {e} maps to a missing edge")));
                    }
                    let len = tgt.len(*te);
                    let ok = |t: &Q| *t >= Q::zero() && t <= len;
                    if !ok(from) || !ok(to) || from == to {
                        return Err(Error::Input(format!("edge {e} has a bad image range")));
                    }
                    (tgt.point(*te, from.clone()), tgt.point(*te, to.clone()))
                }
            };
            if start != self.vertex_images[edge.u as usize] || end != self.vertex_images[edge.v as usize] {
                return Err(Error::Input(format!("map is discontinuous at edge {e}")));
            }
        }
        Ok(())
    }

    pub fn image_point(&self, dom: &MetricGraph, tgt: &MetricGraph, p: &Point) -> Point {
        match p {
            Point::Vertex(v) => self.vertex_images[*v as usize].clone(),
            Point::Edge(e, s) => match &self.edge_images[*e as usize] {
                EdgeImage::Const(q) => q.clone(),
                EdgeImage::Along { edge, from, to } => {
                    let t = from + (to - from) * s / dom.len(*e);
                    tgt.point(*edge, t)
                }
            },
        }
    }

    /// `f⁻¹[set]`.
    pub fn preimage(&self, dom: &MetricGraph, tgt: &MetricGraph, set: &ClosedSet) -> ClosedSet {
        let vs: Vec<u32> = (0..dom.vertex_count())
            .filter(|&v| set.contains(&self.vertex_images[v as usize]))
            .collect();
        let mut ivs = Vec::new();
        for (e, img) in self.edge_images.iter().enumerate() {
            let e = e as u32;
            let len = dom.len(e);
            match img {
                EdgeImage::Const(p) => {
                    if set.contains(p) {
                        ivs.push((e, Q::zero(), len.clone()));
                    }
                }
                EdgeImage::Along { edge, from, to } => {
                    let (lo, hi) = (min_q(from, to), max_q(from, to));
                    let back = |t: &Q| (t - from) * len / (to - from);
                    for (a, b) in set.on_edge(tgt, *edge) {
                        let a = max_q(&a, &lo);
                        let b = min_q(&b, &hi);
                        if a <= b {
                            let (x, y) = (back(&a), back(&b));
                            ivs.push((e, min_q(&x, &y), max_q(&x, &y)));
                        }
                    }
                }
            }
        }
        ClosedSet::from_parts(dom, vs, ivs).expect("preimage lies in the domain")
    }

    /// `f[set]`.
    pub fn image(&self, dom: &MetricGraph, tgt: &MetricGraph, set: &ClosedSet) -> ClosedSet {
        let mut vs = Vec::new();
        let mut ivs = Vec::new();
        let add_point = |p: &Point, vs: &mut Vec<u32>, ivs: &mut Vec<(u32, Q, Q)>| match p {
            Point::Vertex(v) => vs.push(*v),
            Point::Edge(e, t) => ivs.push((*e, t.clone(), t.clone())),
        };
        for v in set.vertices() {
            add_point(&self.vertex_images[v as usize], &mut vs, &mut ivs);
        }
        for e in set.edges() {
            let len = dom.len(e);
            for (a, b) in set.intervals(e) {
                match &self.edge_images[e as usize] {
                    EdgeImage::Const(p) => add_point(p, &mut vs, &mut ivs),
                    EdgeImage::Along { edge, from, to } => {
                        let fwd = |s: &Q| from + (to - from) * s / len;
                        let (x, y) = (fwd(a), fwd(b));
                        ivs.push((*edge, min_q(&x, &y), max_q(&x, &y)));
                    }
                }
            }
        }
        ClosedSet::from_parts(tgt, vs, ivs).expect("image lies in the target")
    }

    /// `other ∘ self`, where `self: X → Y` and `other: Y → Z`.
    pub fn then(&self, y: &MetricGraph, z: &MetricGraph, other: &PLMap) -> PLMap {
        let map_point = |p: &Point| other.image_point(y, z, p);
        let vertex_images = self.vertex_images.iter().map(map_point).collect();
        let edge_images = self
            .edge_images
            .iter()
            .map(|img| match img {
                EdgeImage::Const(p) => EdgeImage::Const(map_point(p)),
                EdgeImage::Along { edge, from, to } => match &other.edge_images[*edge as usize] {
                    EdgeImage::Const(q) => EdgeImage::Const(q.clone()),
                    EdgeImage::Along { edge: ze, from: f2, to: t2 } => {
                        let len = y.len(*edge);
                        let fwd = |s: &Q| f2 + (t2 - f2) * s / len;
                        EdgeImage::Along { edge: *ze, from: fwd(from), to: fwd(to) }
                    }
                },
            })
            .collect();
        PLMap { vertex_images, edge_images }
    }

    pub fn is_surjective(&self, dom: &MetricGraph, tgt: &MetricGraph) -> bool {
        self.image(dom, tgt, &ClosedSet::full(dom)) == ClosedSet::full(tgt)
    }

    /// Target cells over which every fiber is a point set of constant shape:
    /// the arrangement cut at the images of domain vertices.
    pub fn target_arrangement(&self, tgt: &MetricGraph) -> Arrangement {
        let mut cuts: BTreeMap<u32, Vec<Q>> = BTreeMap::new();
        let mut cut_at = |p: &Point| {
            if let Point::Edge(e, t) = p {
                cuts.entry(*e).or_default().push(t.clone());
            }
        };
        for p in &self.vertex_images {
            cut_at(p);
        }
        for img in &self.edge_images {
            if let EdgeImage::Const(p) = img {
                cut_at(p);
            }
        }
        Arrangement::with_cuts(tgt, &cuts)
    }

    /// A target point whose fiber is empty or disconnected, if any.
    /// `None` means the map is monotone and onto.
    pub fn monotonicity_defect(&self, dom: &MetricGraph, tgt: &MetricGraph) -> Option<Point> {
        let arr = self.target_arrangement(tgt);
        (0..arr.len()).map(|i| arr.representative(i)).find(|p| {
            let fiber = self.preimage(dom, tgt, &ClosedSet::point(tgt, p).expect("valid point"));
            components(dom, &fiber).len() != 1
        })
    }
}
