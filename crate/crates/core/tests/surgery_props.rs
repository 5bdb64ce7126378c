mod common;

use common::{graph, named, nonempty_spec, set_spec};
use crooked_core::folang::library::{psi_instance, zeta_instance};
use crooked_core::folang::{eval, ConstId, Formula, Term};
use crooked_core::graph::{extract_sublattice, ClosedSet, MetricGraph};
use crooked_core::lattice::DEFAULT_ELEMENT_CAP;
use crooked_core::surgery::{crooked_step, triangle_step, SurgeryStep};
use proptest::prelude::*;

const ABCD: [&str; 4] = ["a", "b", "c", "d"];

fn holds(g: &MetricGraph, f: &Formula, sets: &[(&str, &ClosedSet)]) -> bool {
    let named: Vec<(ConstId, ClosedSet)> = sets.iter().map(|(n, s)| (named(n), (*s).clone())).collect();
    let ex = extract_sublattice(g, &named, DEFAULT_ELEMENT_CAP).unwrap();
    eval(f, &ex.lattice, &ex.names).unwrap().holds
}

fn t(n: &str) -> Term {
    Term::Const(named(n))
}

/// The truth of `f` over `sets` before and after pulling back along the step.
fn preserved<S: SurgeryStep>(step: &S, sets: &[ClosedSet], f: &Formula) -> (bool, bool) {
    let (x, y) = (step.output(), step.input());
    let before: Vec<(&str, &ClosedSet)> = ABCD.iter().copied().zip(sets).collect();
    let lifted: Vec<ClosedSet> = sets.iter().map(|s| step.bonding().preimage(x, y, s)).collect();
    let after: Vec<(&str, &ClosedSet)> = ABCD.iter().copied().zip(&lifted).collect();
    (holds(y, f, &before), holds(x, f, &after))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn triangle_step_is_a_monotone_dimension_witness(
        g in graph(),
        specs in prop::collection::vec(nonempty_spec(), 3),
        extra in set_spec(),
        f in common::ground_formula(&ABCD),
    ) {
        let mut s: Vec<ClosedSet> = specs.iter().map(|x| x.build(&g)).collect();
        prop_assume!(s[0].intersect(&g, &s[1]).intersect(&g, &s[2]).is_empty());
        let step = triangle_step(&g, &s[0], &s[1], &s[2]).unwrap();
        let (x, p) = (&step.output, &step.bonding);
        prop_assert!(p.is_surjective(x, &g));
        prop_assert_eq!(p.monotonicity_defect(x, &g), None);
        let lift: Vec<ClosedSet> = s.iter().map(|a| p.preimage(x, &g, a)).collect();
        let [wx, wy, wz] = &step.witnesses;
        let zeta = zeta_instance([t("a"), t("b"), t("c")], [t("x"), t("y"), t("z")]);
        let sets = [("a", &lift[0]), ("b", &lift[1]), ("c", &lift[2]), ("x", wx), ("y", wy), ("z", wz)];
        prop_assert!(holds(x, &zeta, &sets));
        s.push(extra.build(&g));
        let (before, after) = preserved(&step, &s, &f);
        prop_assert_eq!(before, after);
    }

    #[test]
    fn crooked_step_has_one_onto_component(
        g in graph(),
        ab in prop::collection::vec(nonempty_spec(), 2),
        cd in prop::collection::vec(set_spec(), 2),
        f in common::ground_formula(&ABCD),
    ) {
        let s: Vec<ClosedSet> = ab.iter().chain(&cd).map(|x| x.build(&g)).collect();
        prop_assume!(s[0].is_disjoint(&g, &s[1]) && s[0].is_disjoint(&g, &s[3]) && s[1].is_disjoint(&g, &s[2]));
        let step = crooked_step(&g, &s[0], &s[1], &s[2], &s[3]).unwrap();
        prop_assert_eq!(step.onto_components, 1);
        let (x, p) = (&step.output, &step.bonding);
        prop_assert!(p.is_surjective(x, &g));
        let lift: Vec<ClosedSet> = s.iter().map(|a| p.preimage(x, &g, a)).collect();
        let [wx, wy, wz] = &step.witnesses;
        let psi = psi_instance([t("a"), t("b"), t("c"), t("d")], [t("x"), t("y"), t("z")]);
        let sets = [
            ("a", &lift[0]), ("b", &lift[1]), ("c", &lift[2]), ("d", &lift[3]),
            ("x", wx), ("y", wy), ("z", wz),
        ];
        prop_assert!(holds(x, &psi, &sets));
        let (before, after) = preserved(&step, &s, &f);
        prop_assert_eq!(before, after);
    }
}
