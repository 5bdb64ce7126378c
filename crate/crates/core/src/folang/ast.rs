use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A constant symbol: either a registry constant `k(level, ordinal)` or a
/// user-named constant (lattice file generator names).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstId {
    K { level: i32, ord: u32 },
    Named(String),
}

impl ConstId {
    pub fn k(level: i32, ord: u32) -> Self {
        ConstId::K { level, ord }
    }
}

impl fmt::Display for ConstId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstId::K { level, ord } => write!(f, "k({level},{ord})"),
            ConstId::Named(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(ConstId),
    Zero,
    One,
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Neq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    pub fn k(level: i32, ord: u32) -> Term {
        Term::Const(ConstId::k(level, ord))
    }

    pub fn meet(self, other: Term) -> Term {
        Term::Meet(Box::new(self), Box::new(other))
    }

    pub fn join(self, other: Term) -> Term {
        Term::Join(Box::new(self), Box::new(other))
    }

    pub fn equals(self, other: Term) -> Formula {
        Formula::Eq(self, other)
    }

    pub fn differs(self, other: Term) -> Formula {
        Formula::Neq(self, other)
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Meet(a, b) | Term::Join(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            _ => {}
        }
    }

    fn collect_consts(&self, out: &mut BTreeSet<ConstId>) {
        match self {
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::Meet(a, b) | Term::Join(a, b) => {
                a.collect_consts(out);
                b.collect_consts(out);
            }
            _ => {}
        }
    }

    fn subst(&self, bindings: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => bindings.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Meet(a, b) => a.subst(bindings).meet(b.subst(bindings)),
            Term::Join(a, b) => a.subst(bindings).join(b.subst(bindings)),
            _ => self.clone(),
        }
    }
}

impl Formula {
    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn negate(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    /// Left-nested conjunction of a non-empty list.
    pub fn all(parts: Vec<Formula>) -> Formula {
        let mut it = parts.into_iter();
        let first = it.next().expect("empty conjunction");
        it.fold(first, Formula::and)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(a, b) | Formula::Neq(a, b) => {
                let mut vs = BTreeSet::new();
                a.collect_vars(&mut vs);
                b.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(f) => f.free_vars_into(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                body.free_vars_into(bound, out);
                bound.truncate(n);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Neq(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    pub fn constants(&self) -> BTreeSet<ConstId> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.collect_consts(&mut out));
        out
    }

    fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Eq(a, b) | Formula::Neq(a, b) => {
                f(a);
                f(b);
            }
            Formula::Not(x) => x.visit_terms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.visit_terms(f),
        }
    }

    /// Number of quantified variables (counting every binder).
    pub fn quantified_var_count(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Neq(..) => 0,
            Formula::Not(f) => f.quantified_var_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.quantified_var_count() + b.quantified_var_count()
            }
            Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
                vs.len() + body.quantified_var_count()
            }
        }
    }
}

/// Instantiates a schema.
///
/// Leading quantifier blocks whose variables are all bound by `bindings` are
/// stripped; the bound variables are then replaced throughout. A replacement
/// term whose variables would be captured by an inner quantifier is rejected.
pub fn substitute(f: &Formula, bindings: &BTreeMap<String, Term>) -> Result<Formula> {
    let mut current = f;
    loop {
        match current {
            Formula::Forall(vs, body) | Formula::Exists(vs, body)
                if !vs.is_empty() && vs.iter().all(|v| bindings.contains_key(v)) =>
            {
                current = body;
            }
            _ => break,
        }
    }
    let mut replacement_vars = BTreeSet::new();
    for t in bindings.values() {
        t.collect_vars(&mut replacement_vars);
    }
    subst_formula(current, bindings, &replacement_vars)
}

fn subst_formula(
    f: &Formula,
    bindings: &BTreeMap<String, Term>,
    replacement_vars: &BTreeSet<String>,
) -> Result<Formula> {
    Ok(match f {
        Formula::Eq(a, b) => Formula::Eq(a.subst(bindings), b.subst(bindings)),
        Formula::Neq(a, b) => Formula::Neq(a.subst(bindings), b.subst(bindings)),
        Formula::Not(x) => subst_formula(x, bindings, replacement_vars)?.negate(),
        Formula::And(a, b) => subst_formula(a, bindings, replacement_vars)?
            .and(subst_formula(b, bindings, replacement_vars)?),
        Formula::Or(a, b) => subst_formula(a, bindings, replacement_vars)?
            .or(subst_formula(b, bindings, replacement_vars)?),
        Formula::Implies(a, b) => subst_formula(a, bindings, replacement_vars)?
            .implies(subst_formula(b, bindings, replacement_vars)?),
        Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
            let mut inner = bindings.clone();
            for v in vs {
                inner.remove(v);
            }
            let body_free = body.free_vars();
            let used: Vec<&String> = inner.keys().filter(|k| body_free.contains(*k)).collect();
            if !used.is_empty() {
                if let Some(v) = vs.iter().find(|v| replacement_vars.contains(*v)) {
                    return Err(Error::Capture(alloc::format!(
                        "substituted term would be captured by quantified `{v}`"
                    )));
                }
            }
            let body = Box::new(subst_formula(body, &inner, replacement_vars)?);
            match f {
                Formula::Forall(..) => Formula::Forall(vs.clone(), body),
                _ => Formula::Exists(vs.clone(), body),
            }
        }
    })
}

/// Convenience: bindings from `(name, term)` pairs.
pub fn bindings<const N: usize>(pairs: [(&str, Term); N]) -> BTreeMap<String, Term> {
    pairs.into_iter().map(|(k, v)| (String::from(k), v)).collect()
}

// Printing. Operands of binary connectives are parenthesized unless they
// continue the same left-nested `&`/`|` chain; meet/join chains print
// left-nested without parentheses.

fn fmt_term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Var(v) => f.write_str(v),
        Term::Const(c) => write!(f, "{c}"),
        Term::Zero => f.write_str("0"),
        Term::One => f.write_str("1"),
        Term::Meet(a, b) | Term::Join(a, b) => {
            let is_meet = matches!(t, Term::Meet(..));
            let same = |x: &Term| {
                if is_meet {
                    matches!(x, Term::Meet(..))
                } else {
                    matches!(x, Term::Join(..))
                }
            };
            let composite = |x: &Term| matches!(x, Term::Meet(..) | Term::Join(..));
            if composite(a) && !same(a) {
                f.write_str("(")?;
                fmt_term(a, f)?;
                f.write_str(")")?;
            } else {
                fmt_term(a, f)?;
            }
            f.write_str(if is_meet { " ^ " } else { " v " })?;
            if composite(b) {
                f.write_str("(")?;
                fmt_term(b, f)?;
                f.write_str(")")
            } else {
                fmt_term(b, f)
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, f)
    }
}

fn fmt_operand(x: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str("(")?;
    fmt_formula(x, f)?;
    f.write_str(")")
}

fn fmt_formula(x: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match x {
        Formula::Eq(a, b) => write!(f, "{a} = {b}"),
        Formula::Neq(a, b) => write!(f, "{a} != {b}"),
        Formula::Not(inner) => {
            f.write_str("!")?;
            fmt_operand(inner, f)
        }
        Formula::And(a, b) => {
            if matches!(**a, Formula::And(..)) {
                fmt_formula(a, f)?;
            } else {
                fmt_operand(a, f)?;
            }
            f.write_str(" & ")?;
            fmt_operand(b, f)
        }
        Formula::Or(a, b) => {
            if matches!(**a, Formula::Or(..)) {
                fmt_formula(a, f)?;
            } else {
                fmt_operand(a, f)?;
            }
            f.write_str(" | ")?;
            fmt_operand(b, f)
        }
        Formula::Implies(a, b) => {
            fmt_operand(a, f)?;
            f.write_str(" -> ")?;
            fmt_operand(b, f)
        }
        Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
            f.write_str(if matches!(x, Formula::Forall(..)) { "forall" } else { "exists" })?;
            for v in vs {
                write!(f, " {v}")?;
            }
            f.write_str(". ")?;
            fmt_formula(body, f)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, f)
    }
}
