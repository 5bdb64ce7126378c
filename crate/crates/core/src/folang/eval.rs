//! Model checking over a finite lattice.
//!
//! Formulas are compiled to a slot-addressed form: every quantified
//! variable gets its own slot, constants are resolved to element indices
//! and ground subterms are folded once. Quantifier blocks are searched in
//! element-index order with early checks: an existential block tests each
//! conjunct of its body as soon as all of the conjunct's variables are
//! assigned; a universal block over `p -> q` tests the conjuncts of `p`
//! the same way and abandons assignments that falsify the hypothesis.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::ast::{ConstId, Formula, Term};
use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;

/// Maps constants to element indices of the lattice being evaluated on.
pub type Interpretation = BTreeMap<ConstId, usize>;

/// Truth value plus the outermost block's assignment: a counterexample when
/// a universal sentence fails, a witness when an existential one holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub assignment: Vec<(String, usize)>,
}

#[derive(Debug, Clone)]
enum T {
    Val(usize),
    Slot(usize),
    Meet(Box<T>, Box<T>),
    Join(Box<T>, Box<T>),
}

#[derive(Debug, Clone)]
enum F {
    Const(bool),
    Eq(T, T),
    Neq(T, T),
    Not(Box<F>),
    And(Vec<F>),
    Or(Box<F>, Box<F>),
    Implies(Box<F>, Box<F>),
    Block(Box<Block>),
}

#[derive(Debug, Clone)]
struct Block {
    universal: bool,
    slots: Vec<usize>,
    /// Checks keyed by the position in `slots` after which they are decidable;
    /// position 0 means "before any variable of the block is assigned".
    staged: Vec<Vec<F>>,
    /// Residual checked at full assignment (the conclusion of a universal block).
    rest: F,
    /// Existential `p -> q` with `p` free of the block's variables: a false
    /// `p` makes any assignment a witness.
    guard: Option<F>,
}

struct Compiler<'a> {
    lattice: &'a FiniteLattice,
    interp: &'a Interpretation,
    scope: Vec<(String, usize)>,
    next_slot: usize,
}

impl Compiler<'_> {
    fn term(&self, t: &Term) -> Result<T> {
        let l = self.lattice;
        Ok(match t {
            Term::Zero => T::Val(l.bottom()),
            Term::One => T::Val(l.top()),
            Term::Const(c) => match self.interp.get(c) {
                Some(&i) if i < l.len() => T::Val(i),
                Some(&i) => {
                    return Err(Error::Eval(format!("constant {c} mapped to missing element {i}")))
                }
                None => return Err(Error::Eval(format!("constant {c} is not interpreted"))),
            },
            Term::Var(v) => match self.scope.iter().rev().find(|(n, _)| n == v) {
                Some(&(_, s)) => T::Slot(s),
                None => return Err(Error::Eval(format!("free variable `{v}`"))),
            },
            Term::Meet(a, b) => match (self.term(a)?, self.term(b)?) {
                (T::Val(x), T::Val(y)) => T::Val(l.meet_idx(x, y)),
                (x, y) => T::Meet(Box::new(x), Box::new(y)),
            },
            Term::Join(a, b) => match (self.term(a)?, self.term(b)?) {
                (T::Val(x), T::Val(y)) => T::Val(l.join_idx(x, y)),
                (x, y) => T::Join(Box::new(x), Box::new(y)),
            },
        })
    }

    fn formula(&mut self, f: &Formula) -> Result<F> {
        Ok(match f {
            Formula::Eq(a, b) => match (self.term(a)?, self.term(b)?) {
                (T::Val(x), T::Val(y)) => F::Const(x == y),
                (x, y) => F::Eq(x, y),
            },
            Formula::Neq(a, b) => match (self.term(a)?, self.term(b)?) {
                (T::Val(x), T::Val(y)) => F::Const(x != y),
                (x, y) => F::Neq(x, y),
            },
            Formula::Not(x) => F::Not(Box::new(self.formula(x)?)),
            Formula::And(..) => {
                let mut parts = Vec::new();
                flatten_and(f, &mut parts);
                F::And(parts.into_iter().map(|p| self.formula(p)).collect::<Result<_>>()?)
            }
            Formula::Or(a, b) => F::Or(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Implies(a, b) => {
                F::Implies(Box::new(self.formula(a)?), Box::new(self.formula(b)?))
            }
            Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
                let universal = matches!(f, Formula::Forall(..));
                let depth = self.scope.len();
                let mut slots = Vec::new();
                for v in vs {
                    self.scope.push((v.clone(), self.next_slot));
                    slots.push(self.next_slot);
                    self.next_slot += 1;
                }
                let body = self.formula(body);
                self.scope.truncate(depth);
                F::Block(Box::new(stage_block(universal, slots, body?)))
            }
        })
    }
}

fn flatten_and<'f>(f: &'f Formula, out: &mut Vec<&'f Formula>) {
    match f {
        Formula::And(a, b) => {
            flatten_and(a, out);
            flatten_and(b, out);
        }
        other => out.push(other),
    }
}

fn term_slots(t: &T, out: &mut Vec<usize>) {
    match t {
        T::Val(_) => {}
        T::Slot(s) => out.push(*s),
        T::Meet(a, b) | T::Join(a, b) => {
            term_slots(a, out);
            term_slots(b, out);
        }
    }
}

/// Slots read by `f` that are not bound inside `f`.
fn free_slots(f: &F, out: &mut Vec<usize>) {
    match f {
        F::Const(_) => {}
        F::Eq(a, b) | F::Neq(a, b) => {
            term_slots(a, out);
            term_slots(b, out);
        }
        F::Not(x) => free_slots(x, out),
        F::And(xs) => xs.iter().for_each(|x| free_slots(x, out)),
        F::Or(a, b) | F::Implies(a, b) => {
            free_slots(a, out);
            free_slots(b, out);
        }
        F::Block(b) => {
            let mut inner = Vec::new();
            for s in &b.staged {
                s.iter().for_each(|x| free_slots(x, &mut inner));
            }
            if let Some(g) = &b.guard {
                free_slots(g, &mut inner);
            }
            free_slots(&b.rest, &mut inner);
            out.extend(inner.into_iter().filter(|s| !b.slots.contains(s)));
        }
    }
}

/// Position after which `f` is decidable within a block over `slots`.
fn stage_of(f: &F, slots: &[usize]) -> usize {
    let mut used = Vec::new();
    free_slots(f, &mut used);
    used.iter()
        .filter_map(|s| slots.iter().position(|b| b == s).map(|p| p + 1))
        .max()
        .unwrap_or(0)
}

fn stage_block(universal: bool, slots: Vec<usize>, body: F) -> Block {
    let mut staged = vec![Vec::new(); slots.len() + 1];
    let mut guard = None;
    let body = match body {
        F::Implies(p, q) if !universal && stage_of(&p, &slots) == 0 => {
            guard = Some(*p);
            *q
        }
        other => other,
    };
    let rest = if universal {
        match body {
            F::Implies(p, q) => {
                let hyps = match *p {
                    F::And(xs) => xs,
                    other => vec![other],
                };
                for h in hyps {
                    let k = stage_of(&h, &slots);
                    staged[k].push(h);
                }
                *q
            }
            other => other,
        }
    } else {
        let parts = match body {
            F::And(xs) => xs,
            other => vec![other],
        };
        for c in parts {
            let k = stage_of(&c, &slots);
            staged[k].push(c);
        }
        F::Const(true)
    };
    Block { universal, slots, staged, rest, guard }
}

struct Machine<'a> {
    lattice: &'a FiniteLattice,
    env: Vec<usize>,
}

impl Machine<'_> {
    fn term(&self, t: &T) -> usize {
        match t {
            T::Val(v) => *v,
            T::Slot(s) => self.env[*s],
            T::Meet(a, b) => self.lattice.meet_idx(self.term(a), self.term(b)),
            T::Join(a, b) => self.lattice.join_idx(self.term(a), self.term(b)),
        }
    }

    fn holds(&mut self, f: &F) -> bool {
        match f {
            F::Const(b) => *b,
            F::Eq(a, b) => self.term(a) == self.term(b),
            F::Neq(a, b) => self.term(a) != self.term(b),
            F::Not(x) => !self.holds(x),
            F::And(xs) => xs.iter().all(|x| self.holds(x)),
            F::Or(a, b) => self.holds(a) || self.holds(b),
            F::Implies(a, b) => !self.holds(a) || self.holds(b),
            F::Block(b) => self.block(b),
        }
    }

    /// For an existential block: true iff a witness exists (left in `env`).
    /// For a universal block: true iff no counterexample exists; when false
    /// the counterexample is left in `env`.
    fn block(&mut self, b: &Block) -> bool {
        if let Some(g) = &b.guard {
            if !self.holds(g) {
                for &s in &b.slots {
                    self.env[s] = 0;
                }
                return true;
            }
        }
        if b.universal {
            !self.search(b, 0)
        } else {
            self.search(b, 0)
        }
    }

    /// Searches for an assignment of `b.slots[depth..]` that is a witness
    /// (existential) or a counterexample (universal).
    fn search(&mut self, b: &Block, depth: usize) -> bool {
        let staged_ok = {
            let checks = &b.staged[depth];
            let mut ok = true;
            for c in checks {
                if !self.holds(c) {
                    ok = false;
                    break;
                }
            }
            ok
        };
        if !staged_ok {
            return false;
        }
        if depth == b.slots.len() {
            return if b.universal { !self.holds(&b.rest) } else { true };
        }
        let slot = b.slots[depth];
        for v in 0..self.lattice.len() {
            self.env[slot] = v;
            if self.search(b, depth + 1) {
                return true;
            }
        }
        false
    }
}

/// Evaluates a sentence. Quantifiers range over all lattice elements.
pub fn eval(f: &Formula, lattice: &FiniteLattice, interp: &Interpretation) -> Result<Verdict> {
    let mut c = Compiler { lattice, interp, scope: Vec::new(), next_slot: 0 };
    let compiled = c.formula(f)?;
    let mut m = Machine { lattice, env: vec![0; c.next_slot] };
    let holds = m.holds(&compiled);
    let mut assignment = Vec::new();
    if let (Formula::Forall(vs, _) | Formula::Exists(vs, _), F::Block(b)) = (f, &compiled) {
        let report = if b.universal { !holds } else { holds };
        if report {
            for (v, &s) in vs.iter().zip(&b.slots) {
                assignment.push((v.clone(), m.env[s]));
            }
        }
    }
    Ok(Verdict { holds, assignment })
}

/// Evaluates with extra free-variable values (used for instantiated schemata).
pub fn eval_open(
    f: &Formula,
    lattice: &FiniteLattice,
    interp: &Interpretation,
    free: &[(&str, usize)],
) -> Result<bool> {
    let mut c = Compiler { lattice, interp, scope: Vec::new(), next_slot: 0 };
    let mut env = Vec::new();
    for (name, value) in free {
        if *value >= lattice.len() {
            return Err(Error::Eval(format!("value {value} for `{name}` is not an element")));
        }
        c.scope.push(((*name).into(), c.next_slot));
        c.next_slot += 1;
        env.push(*value);
    }
    let compiled = c.formula(f)?;
    env.resize(c.next_slot, 0);
    let mut m = Machine { lattice, env };
    Ok(m.holds(&compiled))
}
