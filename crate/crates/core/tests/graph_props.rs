mod common;

use common::{graph, nonempty_spec, set_spec};
use crooked_core::graph::{components, distance_between, kappa_at, urysohn, ClosedSet, MetricGraph, Point};
use crooked_core::rational::{q, Q};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn point(g: &MetricGraph, e: u32, quarter: u8) -> Point {
    let e = e % g.edge_count();
    g.point(e, g.len(e) * q(quarter as i64, 4))
}

fn single(g: &MetricGraph, p: &Point) -> ClosedSet {
    ClosedSet::point(g, p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn path_metric_is_symmetric_and_triangular(
        g in graph(),
        ps in prop::collection::vec((0u32..8, 0u8..=4), 3),
    ) {
        let pts: Vec<ClosedSet> = ps.iter().map(|&(e, t)| single(&g, &point(&g, e, t))).collect();
        let d = |i: usize, j: usize| distance_between(&g, &pts[i], &pts[j]).unwrap();
        prop_assert_eq!(d(0, 1), d(1, 0));
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2));
        prop_assert_eq!(d(0, 0), Q::zero());
    }

    #[test]
    fn kappa_lies_on_the_simplex(
        g in graph(),
        specs in prop::collection::vec(nonempty_spec(), 3),
        at in (0u32..8, 0u8..=4),
    ) {
        let s: Vec<ClosedSet> = specs.iter().map(|x| x.build(&g)).collect();
        prop_assume!(s[0].intersect(&g, &s[1]).intersect(&g, &s[2]).is_empty());
        let k = kappa_at(&g, [&s[0], &s[1], &s[2]], &point(&g, at.0, at.1)).unwrap();
        prop_assert_eq!(&k[0] + &k[1] + &k[2], Q::one());
        for x in &k {
            prop_assert!(*x >= Q::zero() && *x <= Q::one());
        }
    }

    #[test]
    fn components_of_the_space(g in graph(), isolated in any::<bool>()) {
        let g = if isolated { MetricGraph::new(g.vertex_count() + 1, g.edges().to_vec()).unwrap() } else { g };
        let comps = components(&g, &ClosedSet::full(&g));
        prop_assert_eq!(comps.len() == 1, g.is_connected());
        prop_assert_eq!(comps.len(), if isolated { 2 } else { 1 });
    }

    #[test]
    fn closed_sets_form_a_distributive_lattice(g in graph(), specs in prop::collection::vec(set_spec(), 3)) {
        let s: Vec<ClosedSet> = specs.iter().map(|x| x.build(&g)).collect();
        let (a, b, c) = (&s[0], &s[1], &s[2]);
        prop_assert_eq!(a.union(&g, b), b.union(&g, a));
        prop_assert_eq!(a.intersect(&g, b), b.intersect(&g, a));
        prop_assert_eq!(a.intersect(&g, &b.union(&g, c)), a.intersect(&g, b).union(&g, &a.intersect(&g, c)));
        prop_assert_eq!(a.union(&g, &b.intersect(&g, c)), a.union(&g, b).intersect(&g, &a.union(&g, c)));
        prop_assert!(a.intersect(&g, b).is_subset(&g, a));
        prop_assert!(a.is_subset(&g, &a.union(&g, b)));
    }

    #[test]
    fn urysohn_meets_its_pins(g in graph(), specs in prop::collection::vec(nonempty_spec(), 4)) {
        let s: Vec<ClosedSet> = specs.iter().map(|x| x.build(&g)).collect();
        let (a, b, c, d) = (&s[0], &s[1], &s[2], &s[3]);
        prop_assume!(a.is_disjoint(&g, b) && b.is_disjoint(&g, c) && a.is_disjoint(&g, d));
        let f = urysohn(&g, a, b, c, d).unwrap();
        let h = q(1, 2);
        prop_assert_eq!(f.max_on(a), Some(Q::zero()));
        prop_assert_eq!(f.min_on(b), Some(Q::one()));
        prop_assert!(f.max_on(c).unwrap() <= h);
        prop_assert!(f.min_on(d).unwrap() >= h);
        prop_assert!(f.min_on(&ClosedSet::full(&g)).unwrap() >= Q::zero());
        prop_assert!(f.max_on(&ClosedSet::full(&g)).unwrap() <= Q::one());
    }
}
