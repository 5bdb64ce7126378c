use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::library::{self, by_name};
use super::*;
use crate::error::Error;
use crate::lattice::{generate_sublattice, FiniteLattice};

fn powerset(n: u32) -> FiniteLattice {
    let gens: Vec<Vec<u32>> = (0..n).map(|p| vec![p]).collect();
    generate_sublattice(n, &gens).unwrap()
}

fn chain3() -> FiniteLattice {
    generate_sublattice(2, &[vec![0], vec![0, 1]]).unwrap()
}

fn strip(s: &str) -> alloc::string::String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

#[test]
fn parse_disj_example() {
    let f = parse("forall a b. exists x. (a ^ b != a) -> ((a ^ x = x) & (b ^ x = 0))").unwrap();
    let a = || Term::var("a");
    let b = || Term::var("b");
    let x = || Term::var("x");
    let expected = Formula::Forall(
        vec!["a".into(), "b".into()],
        alloc::boxed::Box::new(Formula::Exists(
            vec!["x".into()],
            alloc::boxed::Box::new(a().meet(b()).differs(a()).implies(
                a().meet(x()).equals(x()).and(b().meet(x()).equals(Term::Zero)),
            )),
        )),
    );
    assert_eq!(f, expected);
    assert_eq!(f, by_name("DISJ_LITERAL").unwrap());
}

#[test]
fn parse_trivial_and_errors() {
    assert_eq!(parse("0 = 0").unwrap(), Formula::Eq(Term::Zero, Term::Zero));
    match parse("forall x. (x v") {
        Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 14),
        other => panic!("{other:?}"),
    }
    match parse("forall x. x = y") {
        Err(Error::Unbound { name, offset }) => {
            assert_eq!(name, "y");
            assert_eq!(offset, 14);
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse("0 = 0 0"), Err(Error::Syntax { offset: 6, .. })));
    assert!(matches!(parse("# = 0"), Err(Error::Syntax { offset: 0, .. })));
}

#[test]
fn parse_precedence() {
    let f = parse("forall p q. p = q | p != q & 0 = 1 -> 1 = 1 -> 0 = 0").unwrap();
    let Formula::Forall(_, body) = f else { panic!() };
    let Formula::Implies(lhs, rhs) = *body else { panic!() };
    assert!(matches!(*lhs, Formula::Or(_, ref r) if matches!(**r, Formula::And(..))));
    assert!(matches!(*rhs, Formula::Implies(..)));
    let t = parse("forall a b c. a v b ^ c = (a v b) ^ c").unwrap();
    let Formula::Forall(_, body) = t else { panic!() };
    let Formula::Eq(l, r) = *body else { panic!() };
    assert_eq!(l, Term::var("a").join(Term::var("b").meet(Term::var("c"))));
    assert_eq!(r, Term::var("a").join(Term::var("b")).meet(Term::var("c")));
}

#[test]
fn registry_constants_and_named() {
    let f = parse("k(5,2) ^ k(-1,0) = k(-2,3)").unwrap();
    assert_eq!(f.to_string(), "k(5,2) ^ k(-1,0) = k(-2,3)");
    assert_eq!(f.constants().len(), 3);
    let g = parse_with_constants("a ^ b = 0", &["a", "b"]).unwrap();
    assert!(g.constants().contains(&ConstId::Named("a".into())));
    assert!(parse("a = 0").is_err());
}

#[test]
fn library_round_trips() {
    for name in library::NAMES {
        let f = by_name(name).unwrap();
        let printed = f.to_string();
        assert_eq!(parse(&printed).unwrap(), f, "{name}");
        assert!(f.is_closed());
    }
    for (text, free) in [
        (library::ZETA, &["a", "b", "c", "x", "y", "z"][..]),
        (library::PHI, &["a", "b", "c", "d"][..]),
        (library::PSI, &["a", "b", "c", "d", "x", "y", "z"][..]),
        (library::THETA, &["a", "b", "c", "d", "x", "y", "z"][..]),
        (library::CONN, &["a"][..]),
    ] {
        let f = parse_open(text, free).unwrap();
        assert_eq!(strip(&f.to_string()), strip(text));
    }
    assert_eq!(strip(&by_name("DISJ").unwrap().to_string()), strip(library::DISJ));
    assert_eq!(strip(&by_name("HI").unwrap().to_string()), strip(library::HI));
}

#[test]
fn disj_on_powerset_with_a_minus_b_witness() {
    let l = powerset(2);
    let i = Interpretation::new();
    assert!(eval(&by_name("DISJ").unwrap(), &l, &i).unwrap().holds);
    let body = parse_open(
        "(a ^ b != a) -> ((a ^ x = x) & (x != 0) & (b ^ x = 0))",
        &["a", "b", "x"],
    )
    .unwrap();
    for a in 0..l.len() {
        for b in 0..l.len() {
            let diff: Vec<u32> =
                l.set(a).iter().copied().filter(|p| !l.set(b).contains(p)).collect();
            let x = l.index_of(&diff).unwrap();
            assert!(eval_open(&body, &l, &i, &[("a", a), ("b", b), ("x", x)]).unwrap());
        }
    }
}

#[test]
fn conn1_on_two_points_fails_with_split() {
    let l = powerset(2);
    let v = eval(&by_name("CONN1").unwrap(), &l, &Interpretation::new()).unwrap();
    assert!(!v.holds);
    let x = v.assignment[0].1;
    let y = v.assignment[1].1;
    assert_eq!(l.set(x), &[0]);
    assert_eq!(l.set(y), &[1]);
}

#[test]
fn norm_on_chain() {
    let l = chain3();
    assert_eq!(l.len(), 3);
    assert!(eval(&by_name("NORM").unwrap(), &l, &Interpretation::new()).unwrap().holds);
    assert!(!eval(&by_name("DISJ").unwrap(), &l, &Interpretation::new()).unwrap().holds);
    assert!(eval(&by_name("DISJ_LITERAL").unwrap(), &l, &Interpretation::new()).unwrap().holds);
}

#[test]
fn bruteforce_examples() {
    let one = generate_sublattice(1, &[]).unwrap();
    assert_eq!(one.len(), 1);
    assert!(eval_bruteforce(&by_name("DIM").unwrap(), &one, &Interpretation::new()).unwrap());
    let b4 = powerset(2);
    for name in library::NAMES {
        let f = by_name(name).unwrap();
        assert_eq!(
            eval(&f, &b4, &Interpretation::new()).unwrap().holds,
            eval_bruteforce(&f, &b4, &Interpretation::new()).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn uncovered_constant_is_an_error() {
    let f = parse("k(0,0) = 0").unwrap();
    let l = powerset(1);
    assert!(matches!(eval(&f, &l, &Interpretation::new()), Err(Error::Eval(_))));
    assert!(matches!(eval_bruteforce(&f, &l, &Interpretation::new()), Err(Error::Eval(_))));
}

#[test]
fn substitute_ground_instances() {
    let k = |m| Term::k(4, m);
    let z = library::zeta_instance(
        [Term::k(-1, 0), Term::k(-1, 1), Term::k(-1, 2)],
        [k(0), k(1), k(2)],
    );
    assert!(z.is_closed() && z.is_quantifier_free());
    assert_eq!(
        z.to_string(),
        "(k(-1,0) ^ k(-1,1) ^ k(-1,2) = 0) -> ((k(-1,0) ^ k(4,0) = k(-1,0)) \
         & (k(-1,1) ^ k(4,1) = k(-1,1)) & (k(-1,2) ^ k(4,2) = k(-1,2)) \
         & (k(4,0) ^ k(4,1) ^ k(4,2) = 0) & (k(4,0) v k(4,1) v k(4,2) = 1))"
    );
    let t = library::theta_instance(
        [Term::k(0, 0), Term::k(0, 1), Term::k(0, 0), Term::k(0, 2)],
        [Term::k(5, 0), Term::k(5, 1), Term::k(5, 2)],
    );
    assert!(t.is_closed() && t.is_quantifier_free());
    assert!(t.to_string().starts_with("((k(0,0) ^ k(0,1) = 0) & (k(0,0) ^ k(0,2) = 0)"));

    let hi = by_name("HI").unwrap();
    assert_eq!(substitute(&hi, &Default::default()).unwrap(), hi);

    let disj = by_name("DISJ").unwrap();
    let stripped = substitute(
        &disj,
        &bindings([("a", Term::k(-1, 0)), ("b", Term::k(-1, 1))]),
    )
    .unwrap();
    assert!(matches!(stripped, Formula::Exists(..)));
    assert!(stripped.is_closed());
}

#[test]
fn substitute_rejects_capture() {
    let open = parse_open("exists x. a ^ x = x", &["a"]).unwrap();
    let err = substitute(&open, &bindings([("a", Term::var("x"))])).unwrap_err();
    assert!(matches!(err, Error::Capture(_)));
    let fine = substitute(&open, &bindings([("a", Term::var("y"))])).unwrap();
    assert_eq!(fine.to_string(), "exists x. y ^ x = x");
}

#[test]
fn pruned_hypothesis_skips_search() {
    let l = powerset(3);
    let hi = by_name("HI").unwrap();
    let v = eval(&hi, &l, &Interpretation::new()).unwrap();
    assert!(v.holds);
    assert!(v.assignment.is_empty());
    assert!(eval(&by_name("DIM").unwrap(), &l, &Interpretation::new()).unwrap().holds);
}
