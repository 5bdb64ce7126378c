//! Distance functions, the barycentric map `kappa` and Urysohn functions.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use num_traits::{One, Zero};

use super::{ClosedSet, MetricGraph, PLFunction, Pl1, Point};
use crate::error::{Error, Result};
use crate::rational::{half, Q};

/// `x ↦ dist(x, a)` in the path metric, exactly.
///
/// Errors with `Domain` if `a` is empty or some point cannot reach `a`.
pub fn distance_to_set(g: &MetricGraph, a: &ClosedSet) -> Result<PLFunction> {
    if a.is_empty() {
        return Err(Error::Domain("distance to the empty set".into()));
    }
    let n = g.vertex_count() as usize;
    let mut dist: Vec<Option<Q>> = vec![None; n];
    let mut heap: BinaryHeap<Reverse<(Q, u32)>> = BinaryHeap::new();
    let seed = |dist: &mut Vec<Option<Q>>, heap: &mut BinaryHeap<Reverse<(Q, u32)>>, v: u32, d: Q| {
        if dist[v as usize].as_ref().map_or(true, |old| d < *old) {
            dist[v as usize] = Some(d.clone());
            heap.push(Reverse((d, v)));
        }
    };
    for v in a.vertices() {
        seed(&mut dist, &mut heap, v, Q::zero());
    }
    for e in a.edges() {
        let ivs = a.intervals(e);
        let edge = g.edge(e);
        seed(&mut dist, &mut heap, edge.u, ivs[0].0.clone());
        seed(&mut dist, &mut heap, edge.v, &edge.len - &ivs[ivs.len() - 1].1);
    }
    while let Some(Reverse((d, v))) = heap.pop() {
        if dist[v as usize].as_ref() != Some(&d) {
            continue;
        }
        for &(e, _) in g.incident(v) {
            let edge = g.edge(e);
            let w = if edge.u == v { edge.v } else { edge.u };
            let nd = &d + &edge.len;
            if dist[w as usize].as_ref().map_or(true, |old| nd < *old) {
                dist[w as usize] = Some(nd.clone());
                heap.push(Reverse((nd, w)));
            }
        }
    }
    let vertex_values = dist
        .iter()
        .enumerate()
        .map(|(v, d)| d.clone().ok_or_else(|| Error::Domain(alloc::format!("vertex {v} cannot reach the set"))))
        .collect::<Result<Vec<Q>>>()?;
    let mut edges = Vec::with_capacity(g.edge_count() as usize);
    for (e, edge) in g.edges().iter().enumerate() {
        let len = &edge.len;
        let mut parts = vec![
            Pl1::linear(len, vertex_values[edge.u as usize].clone(), Q::one()),
            Pl1::linear(len, &vertex_values[edge.v as usize] + len, -Q::one()),
        ];
        for (lo, hi) in a.intervals(e as u32) {
            let mut pts = vec![(Q::zero(), lo.clone())];
            if !lo.is_zero() {
                pts.push((lo.clone(), Q::zero()));
            }
            if hi != lo {
                pts.push((hi.clone(), Q::zero()));
            }
            if hi != len {
                pts.push((len.clone(), len - hi));
            }
            parts.push(Pl1::new(pts)?);
        }
        let refs: Vec<&Pl1> = parts.iter().collect();
        edges.push(Pl1::min_of(&refs)?);
    }
    Ok(PLFunction { vertex_values, edges })
}

/// `dist(a, b) = min over a of dist(·, b)`.
pub fn distance_between(g: &MetricGraph, a: &ClosedSet, b: &ClosedSet) -> Result<Q> {
    let rb = distance_to_set(g, b)?;
    rb.min_on(a).ok_or_else(|| Error::Domain("distance from the empty set".into()))
}

/// The distance functions to three nonempty closed sets with empty common
/// intersection; `kappa_i = rho_i / (rho_a + rho_b + rho_c)`.
#[derive(Debug, Clone)]
pub struct KappaMap {
    pub rho: [PLFunction; 3],
}

impl KappaMap {
    pub fn new(g: &MetricGraph, sets: [&ClosedSet; 3]) -> Result<Self> {
        let common = sets[0].intersect(g, sets[1]).intersect(g, sets[2]);
        if !common.is_empty() {
            return Err(Error::Precondition("the three sets have a common point".into()));
        }
        let rho = [
            distance_to_set(g, sets[0])?,
            distance_to_set(g, sets[1])?,
            distance_to_set(g, sets[2])?,
        ];
        Ok(KappaMap { rho })
    }

    pub fn at(&self, p: &Point) -> [Q; 3] {
        let r = [self.rho[0].eval(p), self.rho[1].eval(p), self.rho[2].eval(p)];
        let s = &r[0] + &r[1] + &r[2];
        [&r[0] / &s, &r[1] / &s, &r[2] / &s]
    }

    /// Points mapped to the barycenter: `rho_a = rho_b = rho_c`.
    pub fn barycenter_hits(&self, g: &MetricGraph) -> Result<ClosedSet> {
        let ab = self.rho[0].sub(&self.rho[1])?;
        let ac = self.rho[0].sub(&self.rho[2])?;
        let z = Q::zero();
        let s1 = ab.level_set(g, Some(&z), Some(&z));
        let s2 = ac.level_set(g, Some(&z), Some(&z));
        Ok(s1.intersect(g, &s2))
    }

    /// Closed set where coordinate `i` is minimal.
    pub fn minimal_region(&self, g: &MetricGraph, i: usize) -> Result<ClosedSet> {
        let others: Vec<&PLFunction> = (0..3).filter(|&j| j != i).map(|j| &self.rho[j]).collect();
        let m = PLFunction::min_of(&others)?;
        let d = self.rho[i].sub(&m)?;
        Ok(d.level_set(g, None, Some(&Q::zero())))
    }
}

/// `kappa(p)` for three sets; see [`KappaMap`].
pub fn kappa_at(g: &MetricGraph, sets: [&ClosedSet; 3], p: &Point) -> Result<[Q; 3]> {
    g.check_point(p)?;
    Ok(KappaMap::new(g, sets)?.at(p))
}

/// `f: X → [0,1]` with `f = 0` on `a`, `f = 1` on `b`, `f <= 1/2` on `c` and
/// `f >= 1/2` on `d`:
/// `f = max(min(g, u_c), l_d)` with
/// `g = clamp(1/2 + (rho_a - rho_b) / (2 dist(a,b)))`,
/// `u_c = clamp(1/2 + rho_c / (2 dist(b,c)))`,
/// `l_d = clamp(1/2 - rho_d / (2 dist(a,d)))`.
/// Empty `c` or `d` impose nothing.
pub fn urysohn(
    g: &MetricGraph,
    a: &ClosedSet,
    b: &ClosedSet,
    c: &ClosedSet,
    d: &ClosedSet,
) -> Result<PLFunction> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("Urysohn function needs nonempty a and b".into()));
    }
    for (x, y, what) in [(a, b, "a and b"), (b, c, "b and c"), (a, d, "a and d")] {
        if !x.is_disjoint(g, y) {
            return Err(Error::Precondition(alloc::format!("{what} meet")));
        }
    }
    let (zero, one, h) = (Q::zero(), Q::one(), half());
    let ra = distance_to_set(g, a)?;
    let rb = distance_to_set(g, b)?;
    let dab = rb.min_on(a).expect("a nonempty");
    let two = Q::from_integer(2.into());
    let mut f = ra.sub(&rb)?.affine(&h, &(Q::one() / (&two * &dab))).clamp(&zero, &one);
    if !c.is_empty() {
        let rc = distance_to_set(g, c)?;
        let dbc = rc.min_on(b).expect("b nonempty");
        let uc = rc.affine(&h, &(Q::one() / (&two * &dbc))).clamp(&zero, &one);
        f = PLFunction::min_of(&[&f, &uc])?;
    }
    if !d.is_empty() {
        let rd = distance_to_set(g, d)?;
        let dad = rd.min_on(a).expect("a nonempty");
        let ld = rd.affine(&h, &(-Q::one() / (&two * &dad))).clamp(&zero, &one);
        f = PLFunction::max_of(&[&f, &ld])?;
    }
    let checks = [
        f.max_on(a).map_or(true, |m| m == zero),
        f.min_on(b).map_or(true, |m| m == one),
        f.max_on(c).map_or(true, |m| m <= h),
        f.min_on(d).map_or(true, |m| m >= h),
    ];
    if checks.contains(&false) {
        return Err(Error::Invariant("Urysohn function misses a pin".into()));
    }
    Ok(f)
}
