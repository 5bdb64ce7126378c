//! Named sentences and schemata.
//!
//! `DISJ` requires the witness to be nonzero; without that conjunct
//! (`DISJ_LITERAL`) the sentence is satisfied by `x = 0` in every lattice.
//! `PSI` pairs `c` with `x ^ y` and `d` with `y ^ z`, matching the pins
//! `f(c) <= 1/2`, `f(d) >= 1/2` of the crooked construction; the other
//! pairing is kept as `PSI_LITERAL`. `HI` quantifies `THETA = PHI -> PSI`;
//! `HI_LITERAL` is the variant with hypotheses `a^b, a^c, b^d` and the
//! conjunct `x ^ y = 0`.

use alloc::collections::BTreeMap;
use alloc::string::String;

use super::ast::{substitute, Formula, Term};
use super::parse::{parse, parse_open};

pub const DISJ: &str =
    "forall a b. exists x. (a ^ b != a) -> ((a ^ x = x) & (x != 0) & (b ^ x = 0))";
pub const DISJ_LITERAL: &str =
    "forall a b. exists x. (a ^ b != a) -> ((a ^ x = x) & (b ^ x = 0))";
pub const NORM: &str =
    "forall a b. exists x y. (a ^ b = 0) -> ((a ^ x = 0) & (b ^ y = 0) & (x v y = 1))";
/// `conn(a)`, open in `a`.
pub const CONN: &str = "forall x y. ((x ^ y = 0) & (x v y = a)) -> ((x = a) | (x = 0))";
pub const CONN1: &str = "forall x y. ((x ^ y = 0) & (x v y = 1)) -> ((x = 1) | (x = 0))";
/// `zeta(a,b,c;x,y,z)`, open in all six variables.
pub const ZETA: &str = "(a ^ b ^ c = 0) -> ((a ^ x = a) & (b ^ y = b) & (c ^ z = c) \
                        & (x ^ y ^ z = 0) & (x v y v z = 1))";
pub const DIM: &str = "forall a b c. exists x y z. (a ^ b ^ c = 0) -> ((a ^ x = a) & (b ^ y = b) \
                       & (c ^ z = c) & (x ^ y ^ z = 0) & (x v y v z = 1))";
/// `phi(a,b,c,d)`.
pub const PHI: &str = "(a ^ b = 0) & (a ^ d = 0) & (b ^ c = 0)";
/// `psi(a,b,c,d;x,y,z)`.
pub const PSI: &str = "(x v y v z = 1) & (x ^ z = 0) & (a ^ (y v z) = 0) & (b ^ (x v y) = 0) \
                       & (x ^ y ^ c = 0) & (y ^ z ^ d = 0)";
pub const PSI_LITERAL: &str = "(x v y v z = 1) & (x ^ z = 0) & (a ^ (y v z) = 0) \
                               & (b ^ (x v y) = 0) & (x ^ y ^ d = 0) & (y ^ z ^ c = 0)";
/// `theta = phi -> psi`.
pub const THETA: &str = "((a ^ b = 0) & (a ^ d = 0) & (b ^ c = 0)) -> ((x v y v z = 1) \
                         & (x ^ z = 0) & (a ^ (y v z) = 0) & (b ^ (x v y) = 0) \
                         & (x ^ y ^ c = 0) & (y ^ z ^ d = 0))";
pub const HI: &str = "forall a b c d. exists x y z. ((a ^ b = 0) & (a ^ d = 0) & (b ^ c = 0)) \
                      -> ((x v y v z = 1) & (x ^ z = 0) & (a ^ (y v z) = 0) \
                      & (b ^ (x v y) = 0) & (x ^ y ^ c = 0) & (y ^ z ^ d = 0))";
pub const HI_LITERAL: &str = "forall a b c d. exists x y z. ((a ^ b = 0) & (a ^ c = 0) \
                              & (b ^ d = 0)) -> ((a ^ (y v z) = 0) & (b ^ (x v y) = 0) \
                              & (x ^ y = 0) & (x ^ y ^ d = 0) & (y ^ z ^ c = 0) \
                              & (x v y v z = 1))";

const ABCD: [&str; 4] = ["a", "b", "c", "d"];
const ABCDXYZ: [&str; 7] = ["a", "b", "c", "d", "x", "y", "z"];
const ABCXYZ: [&str; 6] = ["a", "b", "c", "x", "y", "z"];

/// Names accepted by [`by_name`], in display order.
pub const NAMES: [&str; 7] = ["DISJ", "DISJ_LITERAL", "NORM", "CONN1", "DIM", "HI", "HI_LITERAL"];

/// Looks up a closed library sentence by name.
pub fn by_name(name: &str) -> Option<Formula> {
    let text = match name {
        "DISJ" => DISJ,
        "DISJ_LITERAL" => DISJ_LITERAL,
        "NORM" => NORM,
        "CONN1" => CONN1,
        "DIM" => DIM,
        "HI" => HI,
        "HI_LITERAL" => HI_LITERAL,
        _ => return None,
    };
    Some(parse(text).expect("library sentence parses"))
}

pub fn zeta() -> Formula {
    parse_open(ZETA, &ABCXYZ).expect("library schema parses")
}

pub fn phi() -> Formula {
    parse_open(PHI, &ABCD).expect("library schema parses")
}

pub fn psi() -> Formula {
    parse_open(PSI, &ABCDXYZ).expect("library schema parses")
}

pub fn psi_literal() -> Formula {
    parse_open(PSI_LITERAL, &ABCDXYZ).expect("library schema parses")
}

pub fn theta() -> Formula {
    parse_open(THETA, &ABCDXYZ).expect("library schema parses")
}

fn bind(names: &[&str], terms: &[Term]) -> BTreeMap<String, Term> {
    names.iter().zip(terms).map(|(n, t)| (String::from(*n), t.clone())).collect()
}

/// `conn(a)` for a ground term `a`.
pub fn conn(a: Term) -> Formula {
    let open = parse_open(CONN, &["a"]).expect("library schema parses");
    substitute(&open, &bind(&["a"], &[a])).expect("ground term cannot be captured")
}

/// `zeta(a,b,c;x,y,z)` instantiated with ground terms.
pub fn zeta_instance(abc: [Term; 3], xyz: [Term; 3]) -> Formula {
    let terms: alloc::vec::Vec<Term> = abc.into_iter().chain(xyz).collect();
    substitute(&zeta(), &bind(&ABCXYZ, &terms)).expect("ground terms cannot be captured")
}

/// `theta(a,b,c,d;x,y,z)` instantiated with ground terms.
pub fn theta_instance(abcd: [Term; 4], xyz: [Term; 3]) -> Formula {
    let terms: alloc::vec::Vec<Term> = abcd.into_iter().chain(xyz).collect();
    substitute(&theta(), &bind(&ABCDXYZ, &terms)).expect("ground terms cannot be captured")
}

/// `phi(a,b,c,d)` instantiated with ground terms.
pub fn phi_instance(abcd: [Term; 4]) -> Formula {
    substitute(&phi(), &bind(&ABCD, &abcd)).expect("ground terms cannot be captured")
}

/// `psi(a,b,c,d;x,y,z)` instantiated with ground terms.
pub fn psi_instance(abcd: [Term; 4], xyz: [Term; 3]) -> Formula {
    let terms: alloc::vec::Vec<Term> = abcd.into_iter().chain(xyz).collect();
    substitute(&psi(), &bind(&ABCDXYZ, &terms)).expect("ground terms cannot be captured")
}
