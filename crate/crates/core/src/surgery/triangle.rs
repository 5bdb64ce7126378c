//! The dimension step.
//!
//! With `kappa = (rho_a, rho_b, rho_c) / (rho_a + rho_b + rho_c)`, the
//! triangle `T` with corners `e_a, e_b, e_c` and `h((w,t)) = w(1-t) + t/3`,
//! the pullback of `h` along `kappa` replaces every point with
//! `kappa = (1/3,1/3,1/3)` by a copy of `∂T` and leaves the rest of the
//! space unchanged. A branch leaving such a point `p` with slope vector `v`
//! of `rho` has `kappa` moving in direction `d = v - mean(v)`, so its
//! closure meets the circle at the radial projection `w = 1/3 + s·d` with
//! `min w = 0`. Side `A = {w_a = 0}` lies opposite `e_a`, and a point off the
//! circles lies in `x` exactly when `kappa_a` is minimal, i.e. when its
//! radial projection lands on `A`; similarly `y` with `B` and `z` with `C`.
//!
//! The circle is parameterized by `theta ∈ [0,1)`: `C` is `[0,1/3]` from
//! `e_a` to `e_b`, `A` is `[1/3,2/3]` from `e_b` to `e_c`, and `B` is
//! `[2/3,1]` from `e_c` back to `e_a`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use super::{with_nudges, Nudge, SurgeryStep};
use crate::error::{Error, Result};
use crate::graph::{ClosedSet, Edge, EdgeImage, KappaMap, MetricGraph, PLMap, Point};
use crate::rational::Q;

/// The circle inserted over one barycenter hit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleFiber {
    /// The hit, as a point of the step's input.
    pub over: Point,
    /// Circle vertices in increasing `theta`; the first is at `theta = 0`.
    pub vertices: Vec<u32>,
    pub thetas: Vec<Q>,
    /// Circle edges; edge `i` joins vertex `i` to vertex `i+1` (cyclically).
    pub edges: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct TriangleStep {
    pub input: MetricGraph,
    pub sets: [ClosedSet; 3],
    pub output: MetricGraph,
    pub bonding: PLMap,
    pub witnesses: [ClosedSet; 3],
    pub fibers: Vec<CircleFiber>,
    pub nudges: Vec<Nudge>,
}

impl SurgeryStep for TriangleStep {
    fn input(&self) -> &MetricGraph {
        &self.input
    }
    fn output(&self) -> &MetricGraph {
        &self.output
    }
    fn bonding(&self) -> &PLMap {
        &self.bonding
    }
    fn witnesses(&self) -> &[ClosedSet; 3] {
        &self.witnesses
    }
    fn is_monotone(&self) -> bool {
        true
    }
}

fn third() -> Q {
    Q::new(1.into(), 3.into())
}

/// The point of `∂T` at `theta`, as barycentric coordinates `(w_a, w_b, w_c)`.
pub fn circle_point(theta: &Q) -> [Q; 3] {
    let three = Q::from_integer(3.into());
    let s = theta * &three;
    let one = Q::one();
    if *theta <= third() {
        [&one - &s, s, Q::zero()]
    } else if *theta <= &one - third() {
        let wc = &s - &one;
        [Q::zero(), &one - &wc, wc]
    } else {
        let wa = &s - Q::from_integer(2.into());
        [wa.clone(), Q::zero(), &one - &wa]
    }
}

/// `theta` of a point of `∂T`.
pub fn circle_theta(w: &[Q; 3]) -> Q {
    let three = Q::from_integer(3.into());
    if w[2].is_zero() {
        &w[1] / &three
    } else if w[0].is_zero() {
        third() + &w[2] / &three
    } else {
        Q::from_integer(2.into()) * third() + &w[0] / &three
    }
}

/// Whether `theta` lies on the closed arc of side `i` (`A`, `B`, `C`).
fn on_arc(theta: &Q, i: usize) -> bool {
    let two_thirds = Q::from_integer(2.into()) * third();
    match i {
        0 => *theta >= third() && *theta <= two_thirds,
        1 => *theta >= two_thirds || theta.is_zero(),
        _ => *theta <= third(),
    }
}

/// Where a branch leaving a hit with `rho` slopes `v` meets the circle.
fn attach_theta(v: [Q; 3]) -> Result<Q> {
    let mean = (&v[0] + &v[1] + &v[2]) / Q::from_integer(3.into());
    let d: Vec<Q> = v.iter().map(|x| x - &mean).collect();
    let min = d.iter().min().expect("three coordinates").clone();
    if min.is_zero() {
        return Err(Error::Degenerate("kappa stays at the barycenter along a branch".into()));
    }
    let s = Q::one() / (Q::from_integer(3.into()) * -min);
    let w = [third() + &s * &d[0], third() + &s * &d[1], third() + &s * &d[2]];
    Ok(circle_theta(&w))
}

/// Runs the dimension step for `(a, b, c)`, nudging edge lengths when the
/// barycenter fiber contains a segment.
pub fn triangle_step(g: &MetricGraph, a: &ClosedSet, b: &ClosedSet, c: &ClosedSet) -> Result<TriangleStep> {
    if a.is_empty() || b.is_empty() || c.is_empty() {
        return Err(Error::Precondition("triangle step needs nonempty a, b, c".into()));
    }
    if !a.intersect(g, b).intersect(g, c).is_empty() {
        return Err(Error::Precondition("triangle step needs a ∩ b ∩ c = ∅".into()));
    }
    let (step, gw, h, nudges) = with_nudges(g, &[a, b, c], |gw, sets| build(gw, [&sets[0], &sets[1], &sets[2]]))?;
    let bonding = step.bonding.then(&gw, g, &h);
    let out = TriangleStep {
        input: g.clone(),
        sets: [a.clone(), b.clone(), c.clone()],
        output: step.output,
        bonding,
        witnesses: step.witnesses,
        fibers: step
            .fibers
            .into_iter()
            .map(|f| CircleFiber { over: h.image_point(&gw, g, &f.over), ..f })
            .collect(),
        nudges,
    };
    check_postconditions(&out)?;
    Ok(out)
}

struct Built {
    output: MetricGraph,
    bonding: PLMap,
    witnesses: [ClosedSet; 3],
    fibers: Vec<CircleFiber>,
}

fn build(g: &MetricGraph, sets: [&ClosedSet; 3]) -> Result<Built> {
    let kappa = KappaMap::new(g, sets)?;
    let hits = kappa.barycenter_hits(g)?;
    if hits.edges().any(|e| hits.intervals(e).iter().any(|(lo, hi)| lo != hi)) {
        return Err(Error::Degenerate("the barycenter fiber contains a segment".into()));
    }
    let mut cuts: BTreeMap<u32, Vec<Q>> = BTreeMap::new();
    for e in hits.edges() {
        cuts.insert(e, hits.intervals(e).iter().map(|(t, _)| t.clone()).collect());
    }
    let (g1, sigma) = g.subdivide(&cuts)?;
    let lifted: Vec<ClosedSet> = sets.iter().map(|s| sigma.preimage(&g1, g, s)).collect();
    let kappa = KappaMap::new(&g1, [&lifted[0], &lifted[1], &lifted[2]])?;
    let hit_vertices: BTreeSet<u32> =
        (0..g1.vertex_count()).filter(|&v| hits.contains(&sigma.vertex_images[v as usize])).collect();

    // Branch attach points, keyed by (edge, at_end).
    let mut attach: BTreeMap<(u32, bool), Q> = BTreeMap::new();
    for &p in &hit_vertices {
        for &(e, at_end) in g1.incident(p) {
            let slope = |i: usize| {
                let f = &kappa.rho[i].edges[e as usize];
                if at_end {
                    f.end_slope_backwards()
                } else {
                    f.start_slope()
                }
            };
            attach.insert((e, at_end), attach_theta([slope(0), slope(1), slope(2)])?);
        }
    }

    let mut edges: Vec<Edge> = g1.edges().to_vec();
    let mut vertex_images: Vec<Point> = (0..g1.vertex_count()).map(Point::Vertex).collect();
    let mut edge_images: Vec<EdgeImage> = (0..g1.edge_count())
        .map(|e| EdgeImage::Along { edge: e, from: Q::zero(), to: g1.len(e).clone() })
        .collect();
    let mut layout = g1.layout.clone();
    let mut next = g1.vertex_count();
    let mut fibers = Vec::new();
    let mut circle_of: BTreeMap<u32, BTreeMap<Q, u32>> = BTreeMap::new();
    for &p in &hit_vertices {
        let mut thetas: BTreeSet<Q> = [Q::zero(), third(), Q::from_integer(2.into()) * third()].into();
        for &(e, at_end) in g1.incident(p) {
            thetas.insert(attach[&(e, at_end)].clone());
        }
        let thetas: Vec<Q> = thetas.into_iter().collect();
        let mut ids = vec![p];
        for _ in 1..thetas.len() {
            ids.push(next);
            vertex_images.push(Point::Vertex(p));
            next += 1;
        }
        if let Some(l) = layout.as_mut() {
            let (cx, cy) = l[p as usize].clone();
            let r = Q::new(1.into(), 16.into());
            let corners = [(Q::zero(), r.clone()), (-r.clone(), -r.clone()), (r.clone(), -r.clone())];
            for (i, th) in thetas.iter().enumerate() {
                let w = circle_point(th);
                let x = &cx + &w[0] * &corners[0].0 + &w[1] * &corners[1].0 + &w[2] * &corners[2].0;
                let y = &cy + &w[0] * &corners[0].1 + &w[1] * &corners[1].1 + &w[2] * &corners[2].1;
                if i == 0 {
                    l[p as usize] = (x, y);
                } else {
                    l.push((x, y));
                }
            }
        }
        let mut circle_edges = Vec::new();
        for i in 0..thetas.len() {
            let j = (i + 1) % thetas.len();
            let len = if j == 0 { Q::one() - &thetas[i] } else { &thetas[j] - &thetas[i] };
            circle_edges.push(edges.len() as u32);
            edges.push(Edge { u: ids[i], v: ids[j], len });
            edge_images.push(EdgeImage::Const(Point::Vertex(p)));
        }
        circle_of.insert(p, thetas.iter().cloned().zip(ids.iter().cloned()).collect());
        fibers.push(CircleFiber { over: sigma.vertex_images[p as usize].clone(), vertices: ids, thetas, edges: circle_edges });
    }
    for (&(e, at_end), th) in &attach {
        let p = if at_end { g1.edge(e).v } else { g1.edge(e).u };
        let w = circle_of[&p][th];
        let edge = &mut edges[e as usize];
        if at_end {
            edge.v = w;
        } else {
            edge.u = w;
        }
    }
    let mut output = MetricGraph::new(next, edges)?;
    output.layout = layout;
    let collapse = PLMap::new(vertex_images, edge_images);
    let bonding = collapse.then(&g1, g, &sigma);

    let witness = |i: usize| -> Result<ClosedSet> {
        let region = kappa.minimal_region(&g1, i)?;
        let mut vs: Vec<u32> = region.vertices().filter(|v| !hit_vertices.contains(v)).collect();
        let mut ivs = Vec::new();
        for e in region.edges() {
            for (lo, hi) in region.intervals(e) {
                if lo == hi {
                    ivs.push((e, lo.clone(), hi.clone()));
                    continue;
                }
                for (at_end, touches) in [(false, lo.is_zero()), (true, hi == g1.len(e))] {
                    if let Some(th) = attach.get(&(e, at_end)).filter(|_| touches) {
                        if !on_arc(th, i) {
                            return Err(Error::Invariant(format!(
                                "branch of edge {e} reaches the wrong side of its circle"
                            )));
                        }
                    }
                }
                ivs.push((e, lo.clone(), hi.clone()));
            }
        }
        for fiber in &fibers {
            let n = fiber.thetas.len();
            for k in 0..n {
                let end = if k + 1 == n { Q::one() } else { fiber.thetas[k + 1].clone() };
                if on_arc(&fiber.thetas[k], i) && on_arc(&end, i) {
                    ivs.push((fiber.edges[k], Q::zero(), output.len(fiber.edges[k]).clone()));
                    vs.push(fiber.vertices[k]);
                }
            }
        }
        ClosedSet::from_parts(&output, vs, ivs)
    };
    let witnesses = [witness(0)?, witness(1)?, witness(2)?];
    Ok(Built { output, bonding, witnesses, fibers })
}

fn check_postconditions(step: &TriangleStep) -> Result<()> {
    let (x, y, f) = (&step.output, &step.input, &step.bonding);
    f.validate(x, y)?;
    let [wx, wy, wz] = &step.witnesses;
    for (i, w) in step.witnesses.iter().enumerate() {
        if !f.preimage(x, y, &step.sets[i]).is_subset(x, w) {
            return Err(Error::Invariant(format!("witness {i} misses its lifted set")));
        }
    }
    if !wx.intersect(x, wy).intersect(x, wz).is_empty() {
        return Err(Error::Invariant("the three witnesses meet".into()));
    }
    if wx.union(x, wy).union(x, wz) != ClosedSet::full(x) {
        return Err(Error::Invariant("the witnesses do not cover".into()));
    }
    if !f.is_surjective(x, y) {
        return Err(Error::Invariant("bonding map is not onto".into()));
    }
    if let Some(p) = f.monotonicity_defect(x, y) {
        return Err(Error::Invariant(format!("fiber over {p:?} is not connected")));
    }
    Ok(())
}
