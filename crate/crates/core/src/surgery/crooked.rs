//! The hereditary-indecomposability step.
//!
//! `P ⊂ [0,1]²` is the zigzag `{1/4}×[0,2/3] ∪ [1/4,1/2]×{2/3} ∪
//! {1/2}×[1/3,2/3] ∪ [1/2,3/4]×{1/3} ∪ {3/4}×[1/3,1]`, and
//! `X⁺ = {(t,x) : (t, f(x)) ∈ P}` for a Urysohn function `f` with `f = 0` on
//! `a`, `f = 1` on `b`, `f <= 1/2` on `c` and `f >= 1/2` on `d`. After
//! subdividing at `f⁻¹(1/3) ∪ f⁻¹(2/3)`, `X⁺` is the finite complex made of
//! three layers (copies of `f⁻¹[0,2/3]`, `f⁻¹[1/3,2/3]`, `f⁻¹[1/3,1]` at
//! `t = 1/4, 1/2, 3/4`) and one rung per vertex of the two level sets. The
//! output is the unique component of `X⁺` mapping onto the input, and the
//! witnesses are its bands `t <= 3/8`, `3/8 <= t <= 5/8`, `t >= 5/8`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use num_traits::Zero;

use super::{with_nudges, Nudge, SurgeryStep};
use crate::error::{Error, Result};
use crate::graph::{
    components, urysohn, ClosedSet, Edge, EdgeImage, MetricGraph, PLFunction, PLMap, Point,
};
use crate::rational::Q;

#[derive(Debug, Clone)]
pub struct CrookedStep {
    pub input: MetricGraph,
    pub sets: [ClosedSet; 4],
    /// The input subdivided at the two level sets (after any nudge).
    pub level_graph: MetricGraph,
    /// The Urysohn function on `level_graph`.
    pub f: PLFunction,
    /// The full pullback `X⁺` and its projection onto `level_graph`.
    pub plus: MetricGraph,
    pub plus_map: PLMap,
    /// Number of components of `X⁺` mapping onto the input.
    pub onto_components: usize,
    pub components: usize,
    pub output: MetricGraph,
    pub bonding: PLMap,
    pub witnesses: [ClosedSet; 3],
    pub nudges: Vec<Nudge>,
}

impl SurgeryStep for CrookedStep {
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
        false
    }
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Runs the crooked step for `(a, b, c, d)` satisfying `phi` with `a`, `b`
/// nonempty, nudging edge lengths when a level set contains a segment.
pub fn crooked_step(
    g: &MetricGraph,
    a: &ClosedSet,
    b: &ClosedSet,
    c: &ClosedSet,
    d: &ClosedSet,
) -> Result<CrookedStep> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("crooked step needs nonempty a and b".into()));
    }
    if !a.is_disjoint(g, b) || !a.is_disjoint(g, d) || !b.is_disjoint(g, c) {
        return Err(Error::Precondition("crooked step needs a∩b = a∩d = b∩c = ∅".into()));
    }
    let (built, gw, h, nudges) = with_nudges(g, &[a, b, c, d], |gw, s| {
        build(gw, [&s[0], &s[1], &s[2], &s[3]])
    })?;
    let Built { level_graph, level_map, f, plus, plus_map, components, onto, output, inclusion, witnesses } =
        built;
    let to_g = level_map.then(&gw, g, &h);
    let bonding = inclusion.then(&plus, g, &plus_map.then(&level_graph, g, &to_g));
    let step = CrookedStep {
        input: g.clone(),
        sets: [a.clone(), b.clone(), c.clone(), d.clone()],
        level_graph,
        f,
        plus,
        plus_map,
        onto_components: onto,
        components,
        output,
        bonding,
        witnesses,
        nudges,
    };
    check_postconditions(&step)?;
    Ok(step)
}

struct Built {
    level_graph: MetricGraph,
    level_map: PLMap,
    f: PLFunction,
    plus: MetricGraph,
    plus_map: PLMap,
    components: usize,
    onto: usize,
    output: MetricGraph,
    inclusion: PLMap,
    witnesses: [ClosedSet; 3],
}

fn build(g: &MetricGraph, s: [&ClosedSet; 4]) -> Result<Built> {
    let f0 = urysohn(g, s[0], s[1], s[2], s[3])?;
    let (lo, hi) = (q(1, 3), q(2, 3));
    let mut cuts: BTreeMap<u32, Vec<Q>> = BTreeMap::new();
    for level in [&lo, &hi] {
        let set = f0.level_set(g, Some(level), Some(level));
        for e in set.edges() {
            for (x, y) in set.intervals(e) {
                if x != y {
                    return Err(Error::Degenerate(format!("f is constant {level} on part of edge {e}")));
                }
                cuts.entry(e).or_default().push(x.clone());
            }
        }
    }
    let (g1, sigma) = g.subdivide(&cuts)?;
    let f = f0.pull_back(&g1, &sigma);

    let mut vertices = 0u32;
    let mut edges: Vec<Edge> = Vec::new();
    let mut vertex_images = Vec::new();
    let mut edge_images = Vec::new();
    let mut layout = Vec::new();
    let value = |v: u32| f.vertex_values[v as usize].clone();
    let edge_range = |e: u32| {
        let pl = &f.edges[e as usize];
        (pl.min_on(&Q::zero(), pl.len()), pl.max_on(&Q::zero(), pl.len()))
    };
    // Layers: t, lower bound, upper bound.
    let layers = [(q(1, 4), None, Some(&hi)), (q(1, 2), Some(&lo), Some(&hi)), (q(3, 4), Some(&lo), None)];
    let inside = |x: &Q, l: Option<&Q>, u: Option<&Q>| l.map_or(true, |l| x >= l) && u.map_or(true, |u| x <= u);
    let mut copy: Vec<BTreeMap<u32, u32>> = Vec::new();
    let mut band_vertices: [Vec<u32>; 3] = Default::default();
    let mut band_edges: [Vec<u32>; 3] = Default::default();
    for (k, (t, l, u)) in layers.iter().enumerate() {
        let mut ids = BTreeMap::new();
        for v in 0..g1.vertex_count() {
            if inside(&value(v), *l, *u) {
                ids.insert(v, vertices);
                band_vertices[k].push(vertices);
                vertex_images.push(Point::Vertex(v));
                layout.push((t.clone(), value(v)));
                vertices += 1;
            }
        }
        for e in 0..g1.edge_count() {
            let (mn, mx) = edge_range(e);
            if inside(&mn, *l, *u) && inside(&mx, *l, *u) {
                let edge = g1.edge(e);
                band_edges[k].push(edges.len() as u32);
                edges.push(Edge { u: ids[&edge.u], v: ids[&edge.v], len: edge.len.clone() });
                edge_images.push(EdgeImage::Along { edge: e, from: Q::zero(), to: edge.len.clone() });
            }
        }
        copy.push(ids);
    }
    // Rungs over f = 2/3 (from layer 0 to 1) and f = 1/3 (from layer 1 to 2).
    for (level, from, mid_t, lower_band) in [(&hi, 0usize, q(3, 8), 0usize), (&lo, 1, q(5, 8), 1)] {
        for v in 0..g1.vertex_count() {
            if value(v) != *level {
                continue;
            }
            let m = vertices;
            vertices += 1;
            vertex_images.push(Point::Vertex(v));
            layout.push((mid_t.clone(), value(v)));
            band_vertices[lower_band].push(m);
            band_vertices[lower_band + 1].push(m);
            let eighth = q(1, 8);
            band_edges[lower_band].push(edges.len() as u32);
            edges.push(Edge { u: copy[from][&v], v: m, len: eighth.clone() });
            band_edges[lower_band + 1].push(edges.len() as u32);
            edges.push(Edge { u: m, v: copy[from + 1][&v], len: eighth });
            edge_images.push(EdgeImage::Const(Point::Vertex(v)));
            edge_images.push(EdgeImage::Const(Point::Vertex(v)));
        }
    }
    let plus = MetricGraph::new(vertices, edges)?.with_layout(layout)?;
    let plus_map = PLMap::new(vertex_images, edge_images);
    let to_g = plus_map.then(&g1, g, &sigma);

    let comps = components(&plus, &ClosedSet::full(&plus));
    let full_g = ClosedSet::full(g);
    let onto: Vec<&ClosedSet> = comps.iter().filter(|c| to_g.image(&plus, g, c) == full_g).collect();
    if onto.len() != 1 {
        return Err(Error::Invariant(format!("X⁺ has {} components mapping onto the input", onto.len())));
    }
    let chosen = onto[0];
    let keep_v: Vec<u32> = chosen.vertices().collect();
    let keep_e: Vec<u32> = chosen.edges().collect();
    let (output, inclusion) = plus.subgraph(&keep_v, &keep_e)?;
    let band = |k: usize| -> Result<ClosedSet> {
        let s = ClosedSet::from_subcomplex(&plus, &band_vertices[k], &band_edges[k])?;
        Ok(inclusion.preimage(&output, &plus, &s))
    };
    let witnesses = [band(0)?, band(1)?, band(2)?];
    Ok(Built {
        level_graph: g1,
        level_map: sigma,
        f,
        components: comps.len(),
        onto: onto.len(),
        plus,
        plus_map,
        output,
        inclusion,
        witnesses,
    })
}

fn check_postconditions(step: &CrookedStep) -> Result<()> {
    let (x, y, p) = (&step.output, &step.input, &step.bonding);
    p.validate(x, y)?;
    if !p.is_surjective(x, y) {
        return Err(Error::Invariant("bonding map is not onto".into()));
    }
    let lift: Vec<ClosedSet> = step.sets.iter().map(|s| p.preimage(x, y, s)).collect();
    let [wx, wy, wz] = &step.witnesses;
    let conjuncts = [
        wx.union(x, wy).union(x, wz) == ClosedSet::full(x),
        wx.is_disjoint(x, wz),
        lift[0].is_disjoint(x, &wy.union(x, wz)),
        lift[1].is_disjoint(x, &wx.union(x, wy)),
        wx.intersect(x, wy).is_disjoint(x, &lift[2]),
        wy.intersect(x, wz).is_disjoint(x, &lift[3]),
    ];
    if let Some(i) = conjuncts.iter().position(|ok| !ok) {
        return Err(Error::Invariant(format!("crooked witnesses fail conjunct {}", i + 1)));
    }
    Ok(())
}
