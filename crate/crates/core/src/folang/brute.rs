//! Reference evaluator: set semantics, name-keyed environment, every
//! quantifier block enumerated in full and every connective evaluated on
//! both sides. Shares no code with the compiled evaluator.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::ast::{Formula, Term};
use super::eval::Interpretation;
use crate::error::{Error, Result};
use crate::lattice::{intersect, union, FiniteLattice, PointSet};

struct Env<'a> {
    lattice: &'a FiniteLattice,
    interp: &'a Interpretation,
    vars: Vec<(String, PointSet)>,
}

impl Env<'_> {
    fn term(&self, t: &Term) -> Result<PointSet> {
        let l = self.lattice;
        Ok(match t {
            Term::Zero => l.set(l.bottom()).to_vec(),
            Term::One => l.set(l.top()).to_vec(),
            Term::Const(c) => {
                let i = *self
                    .interp
                    .get(c)
                    .ok_or_else(|| Error::Eval(format!("constant {c} is not interpreted")))?;
                if i >= l.len() {
                    return Err(Error::Eval(format!("constant {c} mapped to missing element {i}")));
                }
                l.set(i).to_vec()
            }
            Term::Var(v) => self
                .vars
                .iter()
                .rev()
                .find(|(n, _)| n == v)
                .map(|(_, s)| s.clone())
                .ok_or_else(|| Error::Eval(format!("free variable `{v}`")))?,
            Term::Meet(a, b) => intersect(&self.term(a)?, &self.term(b)?),
            Term::Join(a, b) => union(&self.term(a)?, &self.term(b)?),
        })
    }

    fn formula(&mut self, f: &Formula) -> Result<bool> {
        Ok(match f {
            Formula::Eq(a, b) => self.term(a)? == self.term(b)?,
            Formula::Neq(a, b) => self.term(a)? != self.term(b)?,
            Formula::Not(x) => !self.formula(x)?,
            Formula::And(a, b) => {
                let x = self.formula(a)?;
                let y = self.formula(b)?;
                x & y
            }
            Formula::Or(a, b) => {
                let x = self.formula(a)?;
                let y = self.formula(b)?;
                x | y
            }
            Formula::Implies(a, b) => {
                let x = self.formula(a)?;
                let y = self.formula(b)?;
                !x | y
            }
            Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
                let universal = matches!(f, Formula::Forall(..));
                let n = self.lattice.len();
                let k = vs.len();
                let total = n.checked_pow(k as u32).ok_or_else(|| {
                    Error::Resource(format!("{n}^{k} assignments overflow"))
                })?;
                let mut count = 0usize;
                for code in 0..total {
                    let mut rest = code;
                    for v in vs {
                        let e = rest % n;
                        rest /= n;
                        self.vars.push((v.clone(), self.lattice.set(e).to_vec()));
                    }
                    let r = self.formula(body);
                    self.vars.truncate(self.vars.len() - k);
                    count += usize::from(r?);
                }
                if universal {
                    count == total
                } else {
                    count > 0
                }
            }
        })
    }
}

/// Evaluates a sentence by exhaustive enumeration over element sets.
pub fn eval_bruteforce(
    f: &Formula,
    lattice: &FiniteLattice,
    interp: &Interpretation,
) -> Result<bool> {
    Env { lattice, interp, vars: Vec::new() }.formula(f)
}
