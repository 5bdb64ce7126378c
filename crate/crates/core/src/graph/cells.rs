//! Cell decompositions, connected components and sublattice extraction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use num_traits::Zero;

use super::{ClosedSet, MetricGraph, Point};
use crate::error::Result;
use crate::lattice::{generate_sublattice_capped, FiniteLattice, PointSet};
use crate::rational::Q;

/// A cell of an arrangement: a vertex, an interior breakpoint, or an open
/// segment between consecutive breakpoints of an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Vertex(u32),
    Point(u32, Q),
    Open(u32, Q, Q),
}

/// The cells cut out by a family of closed sets. Order: all vertices, then
/// for each edge in turn its open segments and breakpoints by parameter.
#[derive(Debug, Clone)]
pub struct Arrangement {
    cells: Vec<Cell>,
    /// Per edge: index of its first cell and its interior breakpoints.
    edges: Vec<(usize, Vec<Q>)>,
}

impl Arrangement {
    pub fn new(g: &MetricGraph, sets: &[&ClosedSet]) -> Self {
        let mut cuts: BTreeMap<u32, Vec<Q>> = BTreeMap::new();
        for s in sets {
            for e in s.edges() {
                cuts.entry(e).or_default().extend(s.breakpoints(g, e));
            }
        }
        Self::with_cuts(g, &cuts)
    }

    pub fn with_cuts(g: &MetricGraph, cuts: &BTreeMap<u32, Vec<Q>>) -> Self {
        let mut cells: Vec<Cell> = (0..g.vertex_count()).map(Cell::Vertex).collect();
        let mut edges = Vec::with_capacity(g.edge_count() as usize);
        for e in 0..g.edge_count() {
            let len = g.len(e);
            let bs: BTreeSet<Q> = cuts
                .get(&e)
                .into_iter()
                .flatten()
                .filter(|t| !t.is_zero() && *t < len)
                .cloned()
                .collect();
            let bs: Vec<Q> = bs.into_iter().collect();
            edges.push((cells.len(), bs.clone()));
            let mut prev = Q::zero();
            for b in &bs {
                cells.push(Cell::Open(e, prev, b.clone()));
                cells.push(Cell::Point(e, b.clone()));
                prev = b.clone();
            }
            cells.push(Cell::Open(e, prev, len.clone()));
        }
        Arrangement { cells, edges }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// A point inside the cell: the vertex, the breakpoint, or the midpoint.
    pub fn representative(&self, i: usize) -> Point {
        match &self.cells[i] {
            Cell::Vertex(v) => Point::Vertex(*v),
            Cell::Point(e, t) => Point::Edge(*e, t.clone()),
            Cell::Open(e, a, b) => Point::Edge(*e, (a + b) / Q::from_integer(2.into())),
        }
    }

    /// Cells contained in `set`. Exact when the arrangement refines `set`.
    pub fn footprint(&self, g: &MetricGraph, set: &ClosedSet) -> PointSet {
        let mut out = Vec::new();
        for (i, c) in self.cells.iter().enumerate() {
            let inside = match c {
                Cell::Vertex(v) => set.has_vertex(*v),
                Cell::Point(e, t) => set.contains(&Point::Edge(*e, t.clone())),
                Cell::Open(e, a, b) => set.contains_segment(g, *e, a, b),
            };
            if inside {
                out.push(i as u32);
            }
        }
        out
    }

    /// The union of the closures of the given cells.
    pub fn to_set(&self, g: &MetricGraph, cells: &[u32]) -> ClosedSet {
        let mut vs = Vec::new();
        let mut ivs = Vec::new();
        for &i in cells {
            match &self.cells[i as usize] {
                Cell::Vertex(v) => vs.push(*v),
                Cell::Point(e, t) => ivs.push((*e, t.clone(), t.clone())),
                Cell::Open(e, a, b) => ivs.push((*e, a.clone(), b.clone())),
            }
        }
        ClosedSet::from_parts(g, vs, ivs).expect("cells lie in the graph")
    }

    /// Cells on the boundary of cell `i` (endpoints of an open segment).
    pub fn boundary(&self, g: &MetricGraph, i: usize) -> [usize; 2] {
        let Cell::Open(e, a, b) = &self.cells[i] else { return [i, i] };
        let (first, bs) = &self.edges[*e as usize];
        let edge = g.edge(*e);
        let k = (i - first) / 2;
        let lo = if a.is_zero() { edge.u as usize } else { first + 2 * k - 1 };
        let hi = if *b == edge.len { edge.v as usize } else { first + 2 * k + 1 };
        debug_assert!(k <= bs.len());
        [lo, hi]
    }

    pub fn is_open_segment(&self, i: usize) -> bool {
        matches!(self.cells[i], Cell::Open(..))
    }
}

/// Connected components of a closed set, ordered by their least piece
/// (vertices first, then edges by id and parameter).
pub fn components(g: &MetricGraph, set: &ClosedSet) -> Vec<ClosedSet> {
    // Pieces: vertices of the set, then intervals.
    let mut pieces: Vec<(Option<u32>, Option<(u32, Q, Q)>)> = Vec::new();
    let mut vertex_piece = BTreeMap::new();
    for v in set.vertices() {
        vertex_piece.insert(v, pieces.len());
        pieces.push((Some(v), None));
    }
    let mut parent: Vec<usize> = Vec::new();
    let mut links: Vec<(usize, usize)> = Vec::new();
    for e in set.edges() {
        let edge = g.edge(e);
        for (lo, hi) in set.intervals(e) {
            let id = pieces.len();
            pieces.push((None, Some((e, lo.clone(), hi.clone()))));
            if lo.is_zero() {
                links.push((id, vertex_piece[&edge.u]));
            }
            if *hi == edge.len {
                links.push((id, vertex_piece[&edge.v]));
            }
        }
    }
    parent.extend(0..pieces.len());
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b) in links {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi] = lo;
        }
    }
    let mut groups: BTreeMap<usize, (Vec<u32>, Vec<(u32, Q, Q)>)> = BTreeMap::new();
    for (i, (v, iv)) in pieces.into_iter().enumerate() {
        let r = find(&mut parent, i);
        let entry = groups.entry(r).or_default();
        if let Some(v) = v {
            entry.0.push(v);
        }
        if let Some(iv) = iv {
            entry.1.push(iv);
        }
    }
    groups
        .into_values()
        .map(|(vs, ivs)| ClosedSet::from_parts(g, vs, ivs).expect("pieces lie in the graph"))
        .collect()
}

/// A finite lattice of closed sets extracted from a graph.
#[derive(Debug, Clone)]
pub struct Extracted<K> {
    pub lattice: FiniteLattice,
    pub arrangement: Arrangement,
    /// Element index of each named set.
    pub names: BTreeMap<K, usize>,
}

impl<K> Extracted<K> {
    /// The closed set behind lattice element `i`.
    pub fn element_set(&self, g: &MetricGraph, i: usize) -> ClosedSet {
        self.arrangement.to_set(g, self.lattice.set(i))
    }
}

/// The lattice generated by the named closed sets and the whole space,
/// realized on the cells of their common arrangement. Meets and joins in
/// the lattice are intersections and unions of the closed sets.
pub fn extract_sublattice<K: Ord + Clone>(
    g: &MetricGraph,
    named: &[(K, ClosedSet)],
    cap: usize,
) -> Result<Extracted<K>> {
    let sets: Vec<&ClosedSet> = named.iter().map(|(_, s)| s).collect();
    let arrangement = Arrangement::new(g, &sets);
    let mut gens: Vec<PointSet> = sets.iter().map(|s| arrangement.footprint(g, s)).collect();
    gens.push((0..arrangement.len() as u32).collect());
    let lattice = generate_sublattice_capped(arrangement.len() as u32, &gens, cap)?;
    let names = named
        .iter()
        .zip(&gens)
        .map(|((k, _), f)| (k.clone(), lattice.index_of(f).expect("generator is an element")))
        .collect();
    Ok(Extracted { lattice, arrangement, names })
}
