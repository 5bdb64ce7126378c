//! Piecewise-linear functions with exact rational breakpoints.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use num_traits::Zero;

use super::{ClosedSet, EdgeImage, MetricGraph, PLMap, Point};
use crate::error::{Error, Result};
use crate::rational::{max_q, min_q, Q};

/// A continuous PL function on `[0, len]`, given by breakpoints with
/// strictly increasing parameters; the first is at 0 and the last at `len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pl1 {
    pts: Vec<(Q, Q)>,
}

fn lerp(t0: &Q, v0: &Q, t1: &Q, v1: &Q, t: &Q) -> Q {
    if t1 == t0 {
        return v0.clone();
    }
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

impl Pl1 {
    pub fn new(pts: Vec<(Q, Q)>) -> Result<Self> {
        if pts.len() < 2 || !pts[0].0.is_zero() {
            return Err(Error::Input("a PL function needs breakpoints from 0".into()));
        }
        if pts.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Input("PL breakpoints must increase".into()));
        }
        Ok(Pl1 { pts }.simplified())
    }

    pub fn constant(len: &Q, c: Q) -> Self {
        Pl1 { pts: alloc::vec![(Q::zero(), c.clone()), (len.clone(), c)] }
    }

    /// `t ↦ a + b·t`.
    pub fn linear(len: &Q, a: Q, b: Q) -> Self {
        let end = &a + &b * len;
        Pl1 { pts: alloc::vec![(Q::zero(), a), (len.clone(), end)] }
    }

    pub fn len(&self) -> &Q {
        &self.pts.last().expect("two breakpoints").0
    }

    pub fn points(&self) -> &[(Q, Q)] {
        &self.pts
    }

    pub fn eval(&self, t: &Q) -> Q {
        let i = self.pts.partition_point(|(s, _)| s <= t);
        if i == 0 {
            return self.pts[0].1.clone();
        }
        if i == self.pts.len() {
            return self.pts[i - 1].1.clone();
        }
        let (t0, v0) = &self.pts[i - 1];
        let (t1, v1) = &self.pts[i];
        lerp(t0, v0, t1, v1, t)
    }

    /// Slope of the first piece (leaving `t = 0`).
    pub fn start_slope(&self) -> Q {
        let (t0, v0) = &self.pts[0];
        let (t1, v1) = &self.pts[1];
        (v1 - v0) / (t1 - t0)
    }

    /// Slope of the last piece, oriented from `len` back towards 0.
    pub fn end_slope_backwards(&self) -> Q {
        let n = self.pts.len();
        let (t0, v0) = &self.pts[n - 2];
        let (t1, v1) = &self.pts[n - 1];
        (v0 - v1) / (t1 - t0)
    }

    /// The same function read from the other end.
    pub fn reversed(&self) -> Pl1 {
        let len = self.len().clone();
        Pl1 { pts: self.pts.iter().rev().map(|(t, v)| (&len - t, v.clone())).collect() }
    }

    fn simplified(mut self) -> Self {
        let mut out: Vec<(Q, Q)> = Vec::with_capacity(self.pts.len());
        for p in self.pts.drain(..) {
            while out.len() >= 2 {
                let (t0, v0) = &out[out.len() - 2];
                let (t1, v1) = &out[out.len() - 1];
                if (v1 - v0) * (&p.0 - t0) == (&p.1 - v0) * (t1 - t0) {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        Pl1 { pts: out }
    }

    fn merged_ts(fs: &[&Pl1]) -> Vec<Q> {
        let set: BTreeSet<Q> = fs.iter().flat_map(|f| f.pts.iter().map(|(t, _)| t.clone())).collect();
        set.into_iter().collect()
    }

    fn check_same_domain(fs: &[&Pl1]) -> Result<()> {
        if fs.is_empty() {
            return Err(Error::Usage("combining zero PL functions".into()));
        }
        let len = fs[0].len();
        if fs.iter().any(|f| f.len() != len) {
            return Err(Error::Usage("PL functions on different domains".into()));
        }
        Ok(())
    }

    /// Pointwise combination by an operation that is linear between
    /// breakpoints of the inputs (sums, scalings).
    fn pointwise(fs: &[&Pl1], op: impl Fn(&[Q]) -> Q) -> Result<Pl1> {
        Self::check_same_domain(fs)?;
        let ts = Self::merged_ts(fs);
        let pts = ts
            .into_iter()
            .map(|t| {
                let vals: Vec<Q> = fs.iter().map(|f| f.eval(&t)).collect();
                let v = op(&vals);
                (t, v)
            })
            .collect();
        Ok(Pl1 { pts }.simplified())
    }

    /// Pointwise min or max, inserting exact crossing points.
    fn envelope(fs: &[&Pl1], take_min: bool) -> Result<Pl1> {
        Self::check_same_domain(fs)?;
        let ts = Self::merged_ts(fs);
        let mut all: BTreeSet<Q> = ts.iter().cloned().collect();
        for w in ts.windows(2) {
            let (s0, s1) = (&w[0], &w[1]);
            let ends: Vec<(Q, Q)> = fs.iter().map(|f| (f.eval(s0), f.eval(s1))).collect();
            for i in 0..ends.len() {
                for j in 0..i {
                    let d0 = &ends[i].0 - &ends[j].0;
                    let d1 = &ends[i].1 - &ends[j].1;
                    if (d0 > Q::zero() && d1 < Q::zero()) || (d0 < Q::zero() && d1 > Q::zero()) {
                        let t = s0 + (s1 - s0) * &d0 / (&d0 - &d1);
                        all.insert(t);
                    }
                }
            }
        }
        let pts = all
            .into_iter()
            .map(|t| {
                let mut best = fs[0].eval(&t);
                for f in &fs[1..] {
                    let v = f.eval(&t);
                    best = if take_min { min_q(&best, &v) } else { max_q(&best, &v) };
                }
                (t, best)
            })
            .collect();
        Ok(Pl1 { pts }.simplified())
    }

    pub fn min_of(fs: &[&Pl1]) -> Result<Pl1> {
        Self::envelope(fs, true)
    }

    pub fn max_of(fs: &[&Pl1]) -> Result<Pl1> {
        Self::envelope(fs, false)
    }

    pub fn add(&self, other: &Pl1) -> Result<Pl1> {
        Self::pointwise(&[self, other], |v| &v[0] + &v[1])
    }

    pub fn sub(&self, other: &Pl1) -> Result<Pl1> {
        Self::pointwise(&[self, other], |v| &v[0] - &v[1])
    }

    /// `t ↦ a + b·f(t)`.
    pub fn affine(&self, a: &Q, b: &Q) -> Pl1 {
        Pl1 { pts: self.pts.iter().map(|(t, v)| (t.clone(), a + b * v)).collect() }.simplified()
    }

    pub fn clamp(&self, lo: &Q, hi: &Q) -> Pl1 {
        let len = self.len().clone();
        let l = Pl1::constant(&len, lo.clone());
        let h = Pl1::constant(&len, hi.clone());
        let up = Self::envelope(&[self, &l], false).expect("same domain");
        Self::envelope(&[&up, &h], true).expect("same domain")
    }

    /// `{t : lo <= f(t) <= hi}` as sorted, merged closed intervals.
    pub fn level_set(&self, lo: Option<&Q>, hi: Option<&Q>) -> Vec<(Q, Q)> {
        let ok = |v: &Q| lo.map_or(true, |l| v >= l) && hi.map_or(true, |h| v <= h);
        let mut raw: Vec<(Q, Q)> = Vec::new();
        for (t, v) in &self.pts {
            if ok(v) {
                raw.push((t.clone(), t.clone()));
            }
        }
        for w in self.pts.windows(2) {
            let (t0, v0) = &w[0];
            let (t1, v1) = &w[1];
            // Parameter range on this piece where the value is within bounds.
            let mut a = t0.clone();
            let mut b = t1.clone();
            for (bound, is_lower) in [(lo, true), (hi, false)] {
                let Some(c) = bound else { continue };
                let inside0 = if is_lower { v0 >= c } else { v0 <= c };
                let inside1 = if is_lower { v1 >= c } else { v1 <= c };
                match (inside0, inside1) {
                    (true, true) => {}
                    (false, false) => {
                        a = t1.clone();
                        b = t0.clone();
                    }
                    _ => {
                        let cross = t0 + (t1 - t0) * (c - v0) / (v1 - v0);
                        if inside0 {
                            b = min_q(&b, &cross);
                        } else {
                            a = max_q(&a, &cross);
                        }
                    }
                }
            }
            if a <= b {
                raw.push((a, b));
            }
        }
        raw.sort();
        let mut merged: Vec<(Q, Q)> = Vec::new();
        for (lo, hi) in raw {
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

    /// Minimum over `[lo, hi]`.
    pub fn min_on(&self, lo: &Q, hi: &Q) -> Q {
        let mut best = min_q(&self.eval(lo), &self.eval(hi));
        for (t, v) in &self.pts {
            if lo <= t && t <= hi && *v < best {
                best = v.clone();
            }
        }
        best
    }

    pub fn max_on(&self, lo: &Q, hi: &Q) -> Q {
        let mut best = max_q(&self.eval(lo), &self.eval(hi));
        for (t, v) in &self.pts {
            if lo <= t && t <= hi && *v > best {
                best = v.clone();
            }
        }
        best
    }
}

/// A continuous PL function on a metric graph: one [`Pl1`] per edge and
/// a value per vertex (isolated vertices included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLFunction {
    pub vertex_values: Vec<Q>,
    pub edges: Vec<Pl1>,
}

impl PLFunction {
    pub fn constant(g: &MetricGraph, c: Q) -> Self {
        PLFunction {
            vertex_values: (0..g.vertex_count()).map(|_| c.clone()).collect(),
            edges: (0..g.edge_count()).map(|e| Pl1::constant(g.len(e), c.clone())).collect(),
        }
    }

    /// Checks domain sizes and continuity at vertices.
    pub fn validate(&self, g: &MetricGraph) -> Result<()> {
        if self.vertex_values.len() != g.vertex_count() as usize
            || self.edges.len() != g.edge_count() as usize
        {
            return Err(Error::Input("PL function does not match the graph".into()));
        }
        for (i, edge) in g.edges().iter().enumerate() {
            let f = &self.edges[i];
            if f.len() != &edge.len
                || f.eval(&Q::zero()) != self.vertex_values[edge.u as usize]
                || f.eval(&edge.len) != self.vertex_values[edge.v as usize]
            {
                return Err(Error::Input(format!("PL function is discontinuous on edge {i}")));
            }
        }
        Ok(())
    }

    pub fn eval(&self, p: &Point) -> Q {
        match p {
            Point::Vertex(v) => self.vertex_values[*v as usize].clone(),
            Point::Edge(e, t) => self.edges[*e as usize].eval(t),
        }
    }

    fn zip(fs: &[&PLFunction], op: impl Fn(&[&Pl1]) -> Result<Pl1>, vop: impl Fn(&[Q]) -> Q) -> Result<Self> {
        let n_e = fs[0].edges.len();
        let n_v = fs[0].vertex_values.len();
        if fs.iter().any(|f| f.edges.len() != n_e || f.vertex_values.len() != n_v) {
            return Err(Error::Usage("PL functions on different graphs".into()));
        }
        let edges = (0..n_e)
            .map(|e| op(&fs.iter().map(|f| &f.edges[e]).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        let vertex_values = (0..n_v)
            .map(|v| vop(&fs.iter().map(|f| f.vertex_values[v].clone()).collect::<Vec<_>>()))
            .collect();
        Ok(PLFunction { vertex_values, edges })
    }

    pub fn min_of(fs: &[&PLFunction]) -> Result<Self> {
        Self::zip(fs, Pl1::min_of, |v| v.iter().min().expect("nonempty").clone())
    }

    pub fn max_of(fs: &[&PLFunction]) -> Result<Self> {
        Self::zip(fs, Pl1::max_of, |v| v.iter().max().expect("nonempty").clone())
    }

    pub fn sub(&self, other: &PLFunction) -> Result<Self> {
        Self::zip(&[self, other], |f| f[0].sub(f[1]), |v| &v[0] - &v[1])
    }

    pub fn add(&self, other: &PLFunction) -> Result<Self> {
        Self::zip(&[self, other], |f| f[0].add(f[1]), |v| &v[0] + &v[1])
    }

    /// `x ↦ a + b·f(x)`.
    pub fn affine(&self, a: &Q, b: &Q) -> Self {
        PLFunction {
            vertex_values: self.vertex_values.iter().map(|v| a + b * v).collect(),
            edges: self.edges.iter().map(|f| f.affine(a, b)).collect(),
        }
    }

    pub fn clamp(&self, lo: &Q, hi: &Q) -> Self {
        PLFunction {
            vertex_values: self.vertex_values.iter().map(|v| max_q(lo, &min_q(v, hi))).collect(),
            edges: self.edges.iter().map(|f| f.clamp(lo, hi)).collect(),
        }
    }

    /// `self ∘ map` for a map from `dom` into this function's graph.
    pub fn pull_back(&self, dom: &MetricGraph, map: &PLMap) -> PLFunction {
        let vertex_values = map.vertex_images.iter().map(|p| self.eval(p)).collect();
        let edges = map
            .edge_images
            .iter()
            .enumerate()
            .map(|(e, img)| {
                let len = dom.len(e as u32);
                match img {
                    EdgeImage::Const(p) => Pl1::constant(len, self.eval(p)),
                    EdgeImage::Along { edge, from, to } => {
                        let f = &self.edges[*edge as usize];
                        let (lo, hi) = (min_q(from, to), max_q(from, to));
                        let mut ss: BTreeSet<Q> = BTreeSet::new();
                        ss.insert(Q::zero());
                        ss.insert(len.clone());
                        for (t, _) in f.points() {
                            if lo < *t && *t < hi {
                                ss.insert((t - from) * len / (to - from));
                            }
                        }
                        let pts = ss
                            .into_iter()
                            .map(|s| {
                                let t = from + (to - from) * &s / len;
                                (s, f.eval(&t))
                            })
                            .collect();
                        Pl1::new(pts).expect("increasing breakpoints")
                    }
                }
            })
            .collect();
        PLFunction { vertex_values, edges }
    }

    /// `{x : lo <= f(x) <= hi}`.
    pub fn level_set(&self, g: &MetricGraph, lo: Option<&Q>, hi: Option<&Q>) -> ClosedSet {
        let ok = |v: &Q| lo.map_or(true, |l| v >= l) && hi.map_or(true, |h| v <= h);
        let vertices = (0..g.vertex_count()).filter(|&v| ok(&self.vertex_values[v as usize]));
        let mut ivs = Vec::new();
        for (e, f) in self.edges.iter().enumerate() {
            for (a, b) in f.level_set(lo, hi) {
                ivs.push((e as u32, a, b));
            }
        }
        ClosedSet::from_parts(g, vertices, ivs).expect("level sets lie in the graph")
    }

    /// Minimum over a nonempty closed set.
    pub fn min_on(&self, set: &ClosedSet) -> Option<Q> {
        let mut best: Option<Q> = None;
        let mut take = |v: Q| {
            if best.as_ref().map_or(true, |b| v < *b) {
                best = Some(v);
            }
        };
        for v in set.vertices() {
            take(self.vertex_values[v as usize].clone());
        }
        for e in set.edges() {
            for (lo, hi) in set.intervals(e) {
                take(self.edges[e as usize].min_on(lo, hi));
            }
        }
        best
    }

    pub fn max_on(&self, set: &ClosedSet) -> Option<Q> {
        self.affine(&Q::zero(), &-Q::from_integer(1.into())).min_on(set).map(|v| -v)
    }
}
