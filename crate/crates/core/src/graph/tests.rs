use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::error::Error;
use crate::folang::{eval_bruteforce, parse, ConstId, Interpretation};
use crate::lattice::DEFAULT_ELEMENT_CAP;
use crate::rational::{q, qi};

fn seg() -> MetricGraph {
    MetricGraph::unit_segment()
}

fn iv(g: &MetricGraph, e: u32, lo: Q, hi: Q) -> ClosedSet {
    ClosedSet::from_parts(g, [], [(e, lo, hi)]).unwrap()
}

fn star4() -> MetricGraph {
    let edges = (1..=4).map(|v| Edge { u: 0, v, len: qi(1) }).collect();
    MetricGraph::new(5, edges).unwrap()
}

#[test]
fn distance_on_unit_segment_is_identity() {
    let g = seg();
    let a = ClosedSet::point(&g, &Point::Vertex(0)).unwrap();
    let f = distance_to_set(&g, &a).unwrap();
    for t in [q(0, 1), q(1, 3), q(1, 2), q(7, 8), q(1, 1)] {
        assert_eq!(f.eval(&g.point(0, t.clone())), t);
    }
    assert_eq!(f.edges[0].points().len(), 2);
}

#[test]
fn distance_to_empty_set_is_a_domain_error() {
    let g = seg();
    assert!(matches!(distance_to_set(&g, &ClosedSet::empty()), Err(Error::Domain(_))));
}

#[test]
fn distance_goes_around_a_cycle() {
    let edges = vec![
        Edge { u: 0, v: 1, len: qi(1) },
        Edge { u: 1, v: 2, len: qi(1) },
        Edge { u: 2, v: 0, len: qi(1) },
    ];
    let g = MetricGraph::new(3, edges).unwrap();
    let a = iv(&g, 0, q(1, 4), q(1, 2));
    let f = distance_to_set(&g, &a).unwrap();
    assert_eq!(f.eval(&Point::Vertex(2)), qi(5) / qi(4));
    assert_eq!(f.eval(&Point::Edge(1, q(1, 2))), q(1, 1));
    assert_eq!(f.eval(&Point::Edge(2, q(7, 8))), q(3, 8));
    f.validate(&g).unwrap();
}

#[test]
fn kappa_example() {
    let g = seg();
    let a = ClosedSet::point(&g, &Point::Vertex(0)).unwrap();
    let b = ClosedSet::point(&g, &Point::Vertex(1)).unwrap();
    let c = ClosedSet::point(&g, &Point::Edge(0, q(1, 2))).unwrap();
    let k = kappa_at(&g, [&a, &b, &c], &Point::Vertex(0)).unwrap();
    assert_eq!(k, [q(0, 1), q(2, 3), q(1, 3)]);
    let bad = kappa_at(&g, [&a, &a, &a], &Point::Vertex(0));
    assert!(matches!(bad, Err(Error::Precondition(_))));
}

#[test]
fn components_of_two_intervals() {
    let g = seg();
    let s = ClosedSet::from_parts(&g, [], [(0, q(0, 1), q(1, 4)), (0, q(1, 2), q(3, 4))]).unwrap();
    let cs = components(&g, &s);
    assert_eq!(cs.len(), 2);
    assert_eq!(cs[0], iv(&g, 0, q(0, 1), q(1, 4)));
    let s2 = s.union(&g, &iv(&g, 0, q(1, 4), q(1, 2)));
    assert_eq!(components(&g, &s2).len(), 1);
}

#[test]
fn canonical_forms_and_set_algebra() {
    let g = seg();
    let a = iv(&g, 0, q(0, 1), q(1, 2));
    assert!(a.has_vertex(0));
    let b = ClosedSet::from_parts(&g, [0], []).unwrap();
    assert!(b.is_subset(&g, &a));
    let c = iv(&g, 0, q(1, 2), q(1, 1));
    assert_eq!(a.intersect(&g, &c), ClosedSet::point(&g, &Point::Edge(0, q(1, 2))).unwrap());
    assert_eq!(a.union(&g, &c), ClosedSet::full(&g));
    assert_eq!(a.complement_closure(&g), c);
    let p = ClosedSet::point(&g, &Point::Edge(0, q(1, 3))).unwrap();
    assert_eq!(p.complement_closure(&g), ClosedSet::full(&g));
    assert!(p.is_single_point());
}

#[test]
fn urysohn_pins_on_star() {
    let g = star4();
    let leaf = |v| ClosedSet::point(&g, &Point::Vertex(v)).unwrap();
    let (a, b) = (leaf(1), leaf(2));
    let c = iv(&g, 2, q(1, 2), qi(1));
    let d = iv(&g, 3, q(1, 2), qi(1));
    let f = urysohn(&g, &a, &b, &c, &d).unwrap();
    f.validate(&g).unwrap();
    assert_eq!(f.max_on(&a), Some(qi(0)));
    assert_eq!(f.min_on(&b), Some(qi(1)));
    assert!(f.max_on(&c).unwrap() <= q(1, 2));
    assert!(f.min_on(&d).unwrap() >= q(1, 2));
    for v in 0..5 {
        let x = f.eval(&Point::Vertex(v));
        assert!(x >= qi(0) && x <= qi(1));
    }
    assert!(matches!(urysohn(&g, &a, &a, &c, &d), Err(Error::Precondition(_))));
}

#[test]
fn urysohn_on_segment_is_identity() {
    let g = seg();
    let a = ClosedSet::point(&g, &Point::Vertex(0)).unwrap();
    let b = ClosedSet::point(&g, &Point::Vertex(1)).unwrap();
    let c = iv(&g, 0, q(0, 1), q(1, 2));
    let d = iv(&g, 0, q(1, 2), q(1, 1));
    let f = urysohn(&g, &a, &b, &c, &d).unwrap();
    assert_eq!(f.edges[0].points(), &[(qi(0), qi(0)), (qi(1), qi(1))]);
}

#[test]
fn extracted_meets_are_intersections() {
    let g = star4();
    let sets = vec![
        (ConstId::Named("p".into()), iv(&g, 0, q(0, 1), q(1, 2))),
        (ConstId::Named("r".into()), ClosedSet::from_subcomplex(&g, &[], &[0, 1]).unwrap()),
        (ConstId::Named("s".into()), iv(&g, 1, q(1, 4), q(1, 1))),
    ];
    let ex = extract_sublattice(&g, &sets, DEFAULT_ELEMENT_CAP).unwrap();
    let l = &ex.lattice;
    for i in 0..l.len() {
        for j in 0..l.len() {
            let (si, sj) = (ex.element_set(&g, i), ex.element_set(&g, j));
            assert_eq!(ex.element_set(&g, l.meet_idx(i, j)), si.intersect(&g, &sj));
            assert_eq!(ex.element_set(&g, l.join_idx(i, j)), si.union(&g, &sj));
        }
    }
    assert_eq!(ex.element_set(&g, l.top()), ClosedSet::full(&g));
    let interp: Interpretation = ex.names.clone();
    assert!(parse("p ^ s = 0").is_err());
    let disjoint = crate::folang::parse_with_constants("p ^ s = 0", &["p", "s"]).unwrap();
    assert!(eval_bruteforce(&disjoint, l, &interp).unwrap());
    let under = crate::folang::parse_with_constants("p ^ r = p", &["p", "r"]).unwrap();
    assert!(eval_bruteforce(&under, l, &interp).unwrap());
}

#[test]
fn subdivision_and_maps() {
    let g = seg();
    let mut cuts = BTreeMap::new();
    cuts.insert(0u32, vec![q(1, 3), q(2, 3)]);
    let (s, sigma) = g.subdivide(&cuts).unwrap();
    assert_eq!(s.edge_count(), 3);
    sigma.validate(&s, &g).unwrap();
    assert!(sigma.is_surjective(&s, &g));
    assert!(sigma.monotonicity_defect(&s, &g).is_none());
    let a = iv(&g, 0, q(1, 4), q(1, 2));
    let pre = sigma.preimage(&s, &g, &a);
    assert_eq!(sigma.image(&s, &g, &pre), a);
    assert_eq!(s.position(&Point::Vertex(2)), Some((q(1, 3), qi(0))));

    let (r, rho) = g.rescaled(0, &q(3, 2)).unwrap();
    rho.validate(&r, &g).unwrap();
    let comp = sigma.then(&g, &g, &PLMap::identity(&g));
    assert_eq!(comp, sigma);
    let back = rho.preimage(&r, &g, &a);
    assert_eq!(back, iv(&r, 0, q(3, 8), q(3, 4)));
}

#[test]
fn folding_map_is_not_monotone() {
    // Fold [0,2] onto [0,1]: every interior point has two preimages.
    let g = MetricGraph::new(3, vec![Edge { u: 0, v: 1, len: qi(1) }, Edge { u: 1, v: 2, len: qi(1) }])
        .unwrap();
    let t = seg();
    let f = PLMap::new(
        vec![Point::Vertex(0), Point::Vertex(1), Point::Vertex(0)],
        vec![
            EdgeImage::Along { edge: 0, from: qi(0), to: qi(1) },
            EdgeImage::Along { edge: 0, from: qi(1), to: qi(0) },
        ],
    );
    f.validate(&g, &t).unwrap();
    assert!(f.is_surjective(&g, &t));
    assert!(f.monotonicity_defect(&g, &t).is_some());
    let pts: Vec<Point> = vec![Point::Vertex(1)];
    assert_eq!(f.image(&g, &t, &ClosedSet::from_points(&g, &pts).unwrap()), ClosedSet::point(&t, &Point::Vertex(1)).unwrap());
}
