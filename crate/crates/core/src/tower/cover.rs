//! Exhaustive searches for the three-set covers behind `DIM` and `HI`.
//!
//! Labels `0, 1, 2` are assigned to the cells of the arrangement of the
//! input sets. Every open segment gets one label (or, for `DIM`, the set of
//! labels forced on it), and a point cell gets the union of the labels of
//! its incident segments plus its forced labels, so that each label class
//! is closed. Segments are visited in breadth-first order over the cell
//! adjacency starting from the first cell, and labels are tried in
//! increasing order for `DIM` and decreasing order for `HI`; the first
//! complete labeling is returned.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Arrangement, ClosedSet, MetricGraph};

/// Bounds on a cover search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_cells: usize,
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_cells: 20_000, max_nodes: 2_000_000 }
    }
}

const ALL: u8 = 0b111;

/// Per-cell constraints: labels that must be present, and the admissible
/// final label sets (as bitmasks).
struct Problem {
    forced: Vec<u8>,
    allowed: Vec<Vec<u8>>,
    /// Labels a segment may take, in trial order.
    segment_domain: Vec<Vec<u8>>,
}

fn singles() -> Vec<u8> {
    vec![0b001, 0b010, 0b100]
}

/// `(x, y, z)` closed with `a ⊆ x`, `b ⊆ y`, `c ⊆ z`, `x ∩ y ∩ z = ∅` and
/// `x ∪ y ∪ z = X`, at the granularity of the arrangement of `{a, b, c}`.
pub fn search_dim_cover(
    g: &MetricGraph,
    a: &ClosedSet,
    b: &ClosedSet,
    c: &ClosedSet,
    limits: SearchLimits,
) -> Result<Option<[ClosedSet; 3]>> {
    if !a.intersect(g, b).intersect(g, c).is_empty() {
        return Err(Error::Precondition("dim cover needs a ∩ b ∩ c = ∅".into()));
    }
    let sets = [a, b, c];
    let arr = Arrangement::new(g, &sets);
    check_size(&arr, limits)?;
    let inside: Vec<Vec<u32>> = sets.iter().map(|s| arr.footprint(g, s)).collect();
    let n = arr.len();
    let mut forced = vec![0u8; n];
    for (label, cells) in inside.iter().enumerate() {
        for &cell in cells {
            forced[cell as usize] |= 1 << label;
        }
    }
    let allowed: Vec<Vec<u8>> = forced
        .iter()
        .map(|&f| (1..ALL).filter(|m| m & f == f).collect())
        .collect();
    let segment_domain = forced
        .iter()
        .map(|&f| if f.count_ones() >= 2 { vec![f] } else { singles().into_iter().filter(|m| m & f == f).collect() })
        .collect();
    let problem = Problem { forced, allowed, segment_domain };
    Ok(solve(g, &arr, &problem, limits)?.map(|labels| to_sets(g, &arr, &labels)))
}

/// `(X0, X1, X2)` closed covering `X` with `a` meeting only `X0`, `b`
/// meeting only `X2`, `X0 ∩ X2 = ∅`, `X0 ∩ X1 ∩ c = ∅` and
/// `X1 ∩ X2 ∩ d = ∅`, at the granularity of the arrangement of
/// `{a, b, c, d}`.
pub fn search_her_indec_cover(
    g: &MetricGraph,
    a: &ClosedSet,
    b: &ClosedSet,
    c: &ClosedSet,
    d: &ClosedSet,
    limits: SearchLimits,
) -> Result<Option<[ClosedSet; 3]>> {
    if !a.is_disjoint(g, b) {
        return Err(Error::Precondition("HI cover needs a ∩ b = ∅".into()));
    }
    let sets = [a, b, c, d];
    let arr = Arrangement::new(g, &sets);
    check_size(&arr, limits)?;
    let fp: Vec<Vec<u32>> = sets.iter().map(|s| arr.footprint(g, s)).collect();
    let has = |i: usize, cell: usize| fp[i].binary_search(&(cell as u32)).is_ok();
    let n = arr.len();
    let base: [u8; 5] = [0b100, 0b010, 0b001, 0b110, 0b011];
    let mut allowed = Vec::with_capacity(n);
    for cell in 0..n {
        let ok: Vec<u8> = base
            .iter()
            .copied()
            .filter(|&m| !has(0, cell) || m == 0b001)
            .filter(|&m| !has(1, cell) || m == 0b100)
            .filter(|&m| !has(2, cell) || m != 0b011)
            .filter(|&m| !has(3, cell) || m != 0b110)
            .collect();
        allowed.push(ok);
    }
    let segment_domain = allowed.iter().map(|ok| ok.iter().copied().filter(|m| m.count_ones() == 1).collect()).collect();
    let problem = Problem { forced: vec![0; n], allowed, segment_domain };
    Ok(solve(g, &arr, &problem, limits)?.map(|labels| to_sets(g, &arr, &labels)))
}

fn check_size(arr: &Arrangement, limits: SearchLimits) -> Result<()> {
    if arr.len() > limits.max_cells {
        return Err(Error::Resource(format!(
            "cover search over {} cells exceeds the cap of {}",
            arr.len(),
            limits.max_cells
        )));
    }
    Ok(())
}

fn to_sets(g: &MetricGraph, arr: &Arrangement, labels: &[u8]) -> [ClosedSet; 3] {
    let class = |l: u8| {
        let cells: Vec<u32> = (0..labels.len()).filter(|&i| labels[i] & (1 << l) != 0).map(|i| i as u32).collect();
        arr.to_set(g, &cells)
    };
    [class(0), class(1), class(2)]
}

struct Search<'a> {
    problem: &'a Problem,
    /// Incident segments of each point cell.
    incident: Vec<Vec<usize>>,
    /// Boundary points of each segment.
    ends: Vec<[usize; 2]>,
    order: Vec<usize>,
    labels: Vec<u8>,
    nodes: u64,
    max_nodes: u64,
}

impl Search<'_> {
    /// Whether point `p` can still receive an admissible label set.
    fn point_ok(&self, p: usize) -> bool {
        let mut partial = self.problem.forced[p];
        let mut complete = true;
        for &s in &self.incident[p] {
            if self.labels[s] == 0 {
                complete = false;
            } else {
                partial |= self.labels[s];
            }
        }
        let allowed = &self.problem.allowed[p];
        if complete {
            allowed.contains(&partial)
        } else {
            allowed.iter().any(|m| m & partial == partial)
        }
    }

    /// Depth-first search over the segments in `order`.
    fn run(&mut self) -> Result<bool> {
        let depth = self.order.len();
        let mut next = vec![0usize; depth];
        let mut k = 0;
        while k < depth {
            let s = self.order[k];
            let domain = &self.problem.segment_domain[s];
            let mut placed = false;
            while next[k] < domain.len() {
                let label = domain[next[k]];
                next[k] += 1;
                self.nodes += 1;
                if self.nodes > self.max_nodes {
                    return Err(Error::Resource(format!("cover search exceeded {} nodes", self.max_nodes)));
                }
                self.labels[s] = label;
                let [u, v] = self.ends[s];
                if self.point_ok(u) && self.point_ok(v) {
                    placed = true;
                    break;
                }
            }
            if placed {
                k += 1;
                if k < depth {
                    next[k] = 0;
                }
            } else {
                self.labels[s] = 0;
                if k == 0 {
                    return Ok(false);
                }
                k -= 1;
            }
        }
        Ok(true)
    }
}

fn solve(g: &MetricGraph, arr: &Arrangement, problem: &Problem, limits: SearchLimits) -> Result<Option<Vec<u8>>> {
    let n = arr.len();
    let mut incident = vec![Vec::new(); n];
    let mut ends = vec![[0usize; 2]; n];
    let mut neighbors = vec![Vec::new(); n];
    for i in (0..n).filter(|&i| arr.is_open_segment(i)) {
        let [u, v] = arr.boundary(g, i);
        ends[i] = [u, v];
        for p in [u, v] {
            incident[p].push(i);
            neighbors[p].push(i);
            neighbors[i].push(p);
        }
    }
    let mut seen = vec![false; n];
    let mut order = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            if arr.is_open_segment(c) {
                order.push(c);
            }
            for &m in &neighbors[c] {
                if !seen[m] {
                    seen[m] = true;
                    queue.push_back(m);
                }
            }
        }
    }
    let mut search = Search {
        problem,
        incident,
        ends,
        order,
        labels: vec![0; n],
        nodes: 0,
        max_nodes: limits.max_nodes,
    };
    // Points without segments are independent: take their first admissible set.
    for p in (0..n).filter(|&p| !arr.is_open_segment(p) && search.incident[p].is_empty()) {
        let f = problem.forced[p];
        match problem.allowed[p].iter().find(|m| *m & f == f) {
            Some(&m) => search.labels[p] = m,
            None => return Ok(None),
        }
    }
    if !search.run()? {
        return Ok(None);
    }
    let mut labels = search.labels;
    for p in (0..n).filter(|&p| !arr.is_open_segment(p) && !search.incident[p].is_empty()) {
        labels[p] = search.incident[p].iter().fold(problem.forced[p], |m, &s| m | labels[s]);
    }
    Ok(Some(labels))
}
