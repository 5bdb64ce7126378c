//! Closed subsets of a metric graph: finitely many closed intervals per edge
//! plus a set of vertices.
//!
//! Canonical form: intervals on an edge are sorted, pairwise disjoint and
//! non-touching; a degenerate interval never sits at an edge end (that point
//! is the vertex); every interval reaching an edge end has that vertex in
//! the vertex set. Two closed sets are equal iff their canonical forms are.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use num_traits::Zero;

use super::{MetricGraph, Point};
use crate::error::{Error, Result};
use crate::rational::{max_q, min_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ClosedSet {
    vertices: BTreeSet<u32>,
    intervals: BTreeMap<u32, Vec<(Q, Q)>>,
}

impl ClosedSet {
    pub fn empty() -> Self {
        ClosedSet::default()
    }

    pub fn full(g: &MetricGraph) -> Self {
        let vertices = (0..g.vertex_count()).collect();
        let intervals =
            (0..g.edge_count()).map(|e| (e, alloc::vec![(Q::zero(), g.len(e).clone())])).collect();
        ClosedSet { vertices, intervals }
    }

    /// Builds a canonical closed set from raw pieces, validating ranges.
    pub fn from_parts(
        g: &MetricGraph,
        vertices: impl IntoIterator<Item = u32>,
        intervals: impl IntoIterator<Item = (u32, Q, Q)>,
    ) -> Result<Self> {
        let mut vs = BTreeSet::new();
        for v in vertices {
            if v >= g.vertex_count() {
                return Err(Error::Input(format!("vertex {v} is not in the graph")));
            }
            vs.insert(v);
        }
        let mut raw: BTreeMap<u32, Vec<(Q, Q)>> = BTreeMap::new();
        for (e, lo, hi) in intervals {
            if e >= g.edge_count() {
                return Err(Error::Input(format!("edge {e} is not in the graph")));
            }
            if lo < Q::zero() || hi > *g.len(e) || lo > hi {
                return Err(Error::Input(format!("interval [{lo}, {hi}] is not inside edge {e}")));
            }
            raw.entry(e).or_default().push((lo, hi));
        }
        Ok(Self::canonical(g, vs, raw))
    }

    pub fn from_points(g: &MetricGraph, points: &[Point]) -> Result<Self> {
        let mut vs = Vec::new();
        let mut ivs = Vec::new();
        for p in points {
            g.check_point(p)?;
            match p {
                Point::Vertex(v) => vs.push(*v),
                Point::Edge(e, t) => ivs.push((*e, t.clone(), t.clone())),
            }
        }
        Self::from_parts(g, vs, ivs)
    }

    pub fn point(g: &MetricGraph, p: &Point) -> Result<Self> {
        Self::from_points(g, core::slice::from_ref(p))
    }

    /// The whole edges `edges` together with their endpoints and `vertices`.
    pub fn from_subcomplex(g: &MetricGraph, vertices: &[u32], edges: &[u32]) -> Result<Self> {
        Self::from_parts(
            g,
            vertices.iter().copied(),
            edges.iter().map(|&e| (e, Q::zero(), g.len(e).clone())),
        )
    }

    fn canonical(
        g: &MetricGraph,
        mut vertices: BTreeSet<u32>,
        raw: BTreeMap<u32, Vec<(Q, Q)>>,
    ) -> Self {
        let mut intervals = BTreeMap::new();
        for (e, mut list) in raw {
            let len = g.len(e).clone();
            let edge = g.edge(e);
            list.sort();
            let mut merged: Vec<(Q, Q)> = Vec::new();
            for (lo, hi) in list {
                match merged.last_mut() {
                    Some(last) if lo <= last.1 => {
                        if hi > last.1 {
                            last.1 = hi;
                        }
                    }
                    _ => merged.push((lo, hi)),
                }
            }
            let mut kept = Vec::new();
            for (lo, hi) in merged {
                if lo.is_zero() {
                    vertices.insert(edge.u);
                }
                if hi == len {
                    vertices.insert(edge.v);
                }
                if lo == hi && (lo.is_zero() || hi == len) {
                    continue;
                }
                kept.push((lo, hi));
            }
            if !kept.is_empty() {
                intervals.insert(e, kept);
            }
        }
        ClosedSet { vertices, intervals }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.intervals.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.vertices.iter().copied()
    }

    pub fn has_vertex(&self, v: u32) -> bool {
        self.vertices.contains(&v)
    }

    /// Canonical intervals on edge `e` (not including bare endpoint vertices).
    pub fn intervals(&self, e: u32) -> &[(Q, Q)] {
        self.intervals.get(&e).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Edges carrying at least one interval.
    pub fn edges(&self) -> impl Iterator<Item = u32> + '_ {
        self.intervals.keys().copied()
    }

    /// The trace on edge `e` as closed subsets of `[0, len]`, endpoint
    /// vertices included as degenerate intervals.
    pub fn on_edge(&self, g: &MetricGraph, e: u32) -> Vec<(Q, Q)> {
        let edge = g.edge(e);
        let mut out = Vec::new();
        if self.has_vertex(edge.u) {
            out.push((Q::zero(), Q::zero()));
        }
        out.extend(self.intervals(e).iter().cloned());
        if self.has_vertex(edge.v) {
            out.push((edge.len.clone(), edge.len.clone()));
        }
        let mut merged: Vec<(Q, Q)> = Vec::new();
        for (lo, hi) in out {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        merged
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Vertex(v) => self.has_vertex(*v),
            Point::Edge(e, t) => self.intervals(*e).iter().any(|(lo, hi)| lo <= t && t <= hi),
        }
    }

    /// Whether the closed segment `[lo, hi]` of edge `e` lies in the set.
    pub fn contains_segment(&self, g: &MetricGraph, e: u32, lo: &Q, hi: &Q) -> bool {
        self.on_edge(g, e).iter().any(|(a, b)| a <= lo && hi <= b)
    }

    pub fn union(&self, g: &MetricGraph, other: &ClosedSet) -> ClosedSet {
        let vertices = self.vertices.union(&other.vertices).copied().collect();
        let mut raw = self.intervals.clone();
        for (e, list) in &other.intervals {
            raw.entry(*e).or_default().extend(list.iter().cloned());
        }
        Self::canonical(g, vertices, raw)
    }

    pub fn intersect(&self, g: &MetricGraph, other: &ClosedSet) -> ClosedSet {
        let vertices: BTreeSet<u32> = self.vertices.intersection(&other.vertices).copied().collect();
        let mut raw: BTreeMap<u32, Vec<(Q, Q)>> = BTreeMap::new();
        for e in self.intervals.keys().chain(other.intervals.keys()) {
            if raw.contains_key(e) {
                continue;
            }
            let a = self.on_edge(g, *e);
            let b = other.on_edge(g, *e);
            let mut list = Vec::new();
            for (alo, ahi) in &a {
                for (blo, bhi) in &b {
                    let lo = max_q(alo, blo);
                    let hi = min_q(ahi, bhi);
                    if lo <= hi {
                        list.push((lo, hi));
                    }
                }
            }
            raw.insert(*e, list);
        }
        Self::canonical(g, vertices, raw)
    }

    pub fn is_subset(&self, g: &MetricGraph, other: &ClosedSet) -> bool {
        self.intersect(g, other) == *self
    }

    pub fn is_disjoint(&self, g: &MetricGraph, other: &ClosedSet) -> bool {
        self.intersect(g, other).is_empty()
    }

    /// Closure of the complement.
    pub fn complement_closure(&self, g: &MetricGraph) -> ClosedSet {
        let mut vertices = BTreeSet::new();
        for v in 0..g.vertex_count() {
            if !self.has_vertex(v) {
                vertices.insert(v);
            }
        }
        let mut raw: BTreeMap<u32, Vec<(Q, Q)>> = BTreeMap::new();
        for e in 0..g.edge_count() {
            let len = g.len(e).clone();
            let list = self.intervals(e);
            let mut gaps = Vec::new();
            let mut cursor = Q::zero();
            for (lo, hi) in list {
                if *lo > cursor {
                    gaps.push((cursor.clone(), lo.clone()));
                }
                cursor = hi.clone();
            }
            if cursor < len {
                gaps.push((cursor, len));
            }
            if !gaps.is_empty() {
                raw.insert(e, gaps);
            }
        }
        Self::canonical(g, vertices, raw)
    }

    /// Some point of the set, the least in (vertex, edge, parameter) order.
    pub fn first_point(&self, g: &MetricGraph) -> Option<Point> {
        if let Some(v) = self.vertices.iter().next() {
            return Some(Point::Vertex(*v));
        }
        let (e, list) = self.intervals.iter().next()?;
        let (lo, hi) = &list[0];
        Some(g.point(*e, (lo + hi) / Q::from_integer(2.into())))
    }

    /// The set is exactly one point.
    pub fn is_single_point(&self) -> bool {
        let ivs: usize = self.intervals.values().map(Vec::len).sum();
        match (self.vertices.len(), ivs) {
            (1, 0) => true,
            (0, 1) => {
                let (lo, hi) = &self.intervals.values().next().expect("one edge")[0];
                lo == hi
            }
            _ => false,
        }
    }

    /// All parameters that bound an interval on edge `e`, excluding the ends.
    pub fn breakpoints(&self, g: &MetricGraph, e: u32) -> Vec<Q> {
        let len = g.len(e);
        let mut out = Vec::new();
        for (lo, hi) in self.intervals(e) {
            for t in [lo, hi] {
                if !t.is_zero() && t != len {
                    out.push(t.clone());
                }
            }
        }
        out
    }
}
