#![allow(dead_code)]

use std::collections::BTreeSet;

use crooked_core::folang::{ConstId, Formula, Term};
use crooked_core::graph::{ClosedSet, Edge, MetricGraph};
use crooked_core::lattice::{generate_sublattice, FiniteLattice, PointSet};
use crooked_core::rational::{q, Q};
use proptest::prelude::*;

/// A sublattice of the powerset of `1..=max_ground` points generated by up
/// to four random subsets.
pub fn lattice(max_ground: u32) -> impl Strategy<Value = FiniteLattice> {
    (1..=max_ground)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::btree_set(0..n, 0..=n as usize), 0..=4)))
        .prop_map(|(n, gens)| {
            let gens: Vec<PointSet> = gens.into_iter().map(|s: BTreeSet<u32>| s.into_iter().collect()).collect();
            generate_sublattice(n, &gens).expect("small sublattices fit the cap")
        })
}

pub fn named(n: &str) -> ConstId {
    ConstId::Named(n.into())
}

pub const CONSTS: [&str; 2] = ["c0", "c1"];
pub const VARS: [&str; 3] = ["x", "y", "z"];

fn term(depth: u32) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        Just(Term::Zero),
        Just(Term::One),
        prop::sample::select(CONSTS.to_vec()).prop_map(|c| Term::Const(named(c))),
        prop::sample::select(VARS.to_vec()).prop_map(Term::var),
    ];
    if depth == 0 {
        return leaf.boxed();
    }
    prop_oneof![
        2 => leaf,
        1 => (term(depth - 1), term(depth - 1)).prop_map(|(a, b)| a.meet(b)),
        1 => (term(depth - 1), term(depth - 1)).prop_map(|(a, b)| a.join(b)),
    ]
    .boxed()
}

fn body(depth: u32) -> BoxedStrategy<Formula> {
    let atom = prop_oneof![
        (term(2), term(2)).prop_map(|(a, b)| a.equals(b)),
        (term(2), term(2)).prop_map(|(a, b)| a.differs(b)),
    ];
    if depth == 0 {
        return atom.boxed();
    }
    let sub = || body(depth - 1);
    prop_oneof![
        3 => atom,
        1 => sub().prop_map(|f| f.negate()),
        1 => (sub(), sub()).prop_map(|(a, b)| a.and(b)),
        1 => (sub(), sub()).prop_map(|(a, b)| a.or(b)),
        1 => (sub(), sub()).prop_map(|(a, b)| a.implies(b)),
        1 => (any::<bool>(), prop::sample::select(VARS.to_vec()), sub()).prop_map(|(all, v, f)| {
            let vs = vec![v.to_string()];
            if all { Formula::Forall(vs, Box::new(f)) } else { Formula::Exists(vs, Box::new(f)) }
        }),
    ]
    .boxed()
}

/// A closed sentence over constants `c0`, `c1`: a prefix quantifying all of
/// `x, y, z` around a body that may re-quantify them.
pub fn sentence() -> impl Strategy<Value = Formula> {
    (prop::collection::vec(any::<bool>(), 3), body(2)).prop_map(|(kinds, mut f)| {
        for (all, v) in kinds.into_iter().zip(VARS).rev() {
            let vs = vec![v.to_string()];
            f = if all { Formula::Forall(vs, Box::new(f)) } else { Formula::Exists(vs, Box::new(f)) };
        }
        f
    })
}

/// A quantifier-free ground formula over the given constants.
pub fn ground_formula(consts: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    fn t(consts: &'static [&'static str], depth: u32) -> BoxedStrategy<Term> {
        let leaf = prop_oneof![
            Just(Term::Zero),
            Just(Term::One),
            prop::sample::select(consts.to_vec()).prop_map(|c| Term::Const(named(c))),
        ];
        if depth == 0 {
            return leaf.boxed();
        }
        prop_oneof![
            2 => leaf,
            1 => (t(consts, depth - 1), t(consts, depth - 1)).prop_map(|(a, b)| a.meet(b)),
            1 => (t(consts, depth - 1), t(consts, depth - 1)).prop_map(|(a, b)| a.join(b)),
        ]
        .boxed()
    }
    let atom = (any::<bool>(), t(consts, 2), t(consts, 2))
        .prop_map(|(eq, a, b)| if eq { a.equals(b) } else { a.differs(b) });
    prop::collection::vec(atom, 1..4).prop_map(|atoms| {
        let mut it = atoms.into_iter();
        let first = it.next().expect("nonempty");
        it.enumerate().fold(first, |f, (i, a)| if i % 2 == 0 { f.and(a) } else { f.or(a.negate()) })
    })
}

/// A connected graph on 2..=5 vertices: a random spanning tree plus up to
/// two extra edges, with lengths in `{1/2, 1, 3/2, 2}`.
pub fn graph() -> impl Strategy<Value = MetricGraph> {
    (2u32..=5)
        .prop_flat_map(|n| {
            let parents = (1..n).map(|i| 0..i).collect::<Vec<_>>();
            let extra = prop::collection::vec((0..n, 0..n), 0..=2);
            let lens = prop::collection::vec(1i64..=4, (n + 1) as usize);
            (Just(n), parents, extra, lens)
        })
        .prop_map(|(n, parents, extra, lens)| {
            let mut edges: Vec<Edge> = Vec::new();
            for (i, p) in parents.into_iter().enumerate() {
                edges.push(Edge { u: p, v: i as u32 + 1, len: q(lens[i], 2) });
            }
            for (k, (u, v)) in extra.into_iter().enumerate() {
                if u != v {
                    edges.push(Edge { u, v, len: q(lens[(n as usize - 1 + k) % lens.len()], 2) });
                }
            }
            MetricGraph::new(n, edges).expect("valid graph")
        })
}

/// A closed set given by choices of vertices and of intervals with
/// endpoints at quarter lengths.
#[derive(Debug, Clone)]
pub struct SetSpec {
    pub vertices: Vec<u32>,
    pub intervals: Vec<(u32, u8, u8)>,
}

impl SetSpec {
    pub fn build(&self, g: &MetricGraph) -> ClosedSet {
        let vs: Vec<u32> = self.vertices.iter().map(|v| v % g.vertex_count()).collect();
        let ivs: Vec<(u32, Q, Q)> = self
            .intervals
            .iter()
            .map(|&(e, a, b)| {
                let e = e % g.edge_count();
                let (lo, hi) = (a.min(b) as i64, a.max(b) as i64);
                let len = g.len(e).clone();
                (e, &len * q(lo, 4), &len * q(hi, 4))
            })
            .collect();
        ClosedSet::from_parts(g, vs, ivs).expect("valid set")
    }
}

pub fn set_spec() -> impl Strategy<Value = SetSpec> {
    (prop::collection::vec(0u32..8, 0..=2), prop::collection::vec((0u32..8, 0u8..=4, 0u8..=4), 0..=2))
        .prop_map(|(vertices, intervals)| SetSpec { vertices, intervals })
}

/// A nonempty closed set: a single vertex or quarter-point, or an interval.
pub fn nonempty_spec() -> impl Strategy<Value = SetSpec> {
    prop_oneof![
        (0u32..8).prop_map(|v| SetSpec { vertices: vec![v], intervals: vec![] }),
        (0u32..8, 0u8..=4, 0u8..=4).prop_map(|iv| SetSpec { vertices: vec![], intervals: vec![iv] }),
    ]
}
