//! Recursive-descent parser.
//!
//! ```text
//! formula := or ( "->" formula )?
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "!" unary | ("forall" | "exists") ident+ "." formula | atom
//! atom    := term ("=" | "!=") term | "(" formula ")"
//! term    := meet ( "v" meet )*
//! meet    := factor ( "^" factor )*
//! factor  := ident | "0" | "1" | "k(" int "," int ")" | "(" term ")"
//! ```
//!
//! A parenthesis at atom position is tried as a term first and as a
//! formula second; the error reported is the one that got furthest.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ast::{ConstId, Formula, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    K(i32, u32),
    Zero,
    One,
    LParen,
    RParen,
    Eq,
    Neq,
    Not,
    And,
    Or,
    Arrow,
    Meet,
    Join,
    Dot,
    Forall,
    Exists,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::K(n, m) => format!("constant k({n},{m})"),
            Tok::End => "end of input".to_owned(),
            other => format!("{other:?}"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset: usize, message: String| Error::Syntax { offset, message };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'=' => {
                i += 1;
                Tok::Eq
            }
            b'!' if bytes.get(i + 1) == Some(&b'=') => {
                i += 2;
                Tok::Neq
            }
            b'!' => {
                i += 1;
                Tok::Not
            }
            b'&' => {
                i += 1;
                Tok::And
            }
            b'|' => {
                i += 1;
                Tok::Or
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            b'^' => {
                i += 1;
                Tok::Meet
            }
            b'.' => {
                i += 1;
                Tok::Dot
            }
            b'0' | b'1' if !bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric()) => {
                i += 1;
                if c == b'0' {
                    Tok::Zero
                } else {
                    Tok::One
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                match word {
                    "v" => Tok::Join,
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "k" => match lex_registry_constant(text, i) {
                        Some((tok, end)) => {
                            i = end;
                            tok
                        }
                        None => Tok::Ident(word.to_owned()),
                    },
                    _ => Tok::Ident(word.to_owned()),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(err(i, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Recognizes `(int,int)` right after a `k`, returning the token and the end offset.
fn lex_registry_constant(text: &str, from: usize) -> Option<(Tok, usize)> {
    let rest = &text[from..];
    let trimmed = rest.trim_start();
    let inner = trimmed.strip_prefix('(')?;
    let close = inner.find(')')?;
    let (level, ord) = inner[..close].split_once(',')?;
    let level: i32 = level.trim().parse().ok()?;
    let ord: u32 = ord.trim().parse().ok()?;
    let consumed = rest.len() - inner.len() + close + 1;
    Some((Tok::K(level, ord), from + consumed))
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    scope: Vec<String>,
    free: &'a BTreeSet<String>,
    named: &'a BTreeSet<String>,
    furthest: Option<Error>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.negate())
            }
            Tok::Forall | Tok::Exists => {
                let universal = self.bump() == Tok::Forall;
                let mut vars = Vec::new();
                while let Tok::Ident(name) = self.peek() {
                    vars.push(name.clone());
                    self.bump();
                }
                if vars.is_empty() {
                    return self.fail("quantified variable");
                }
                self.expect(Tok::Dot, "`.` after quantified variables")?;
                let depth = self.scope.len();
                self.scope.extend(vars.iter().cloned());
                let body = self.formula();
                self.scope.truncate(depth);
                let body = Box::new(body?);
                Ok(if universal {
                    Formula::Forall(vars, body)
                } else {
                    Formula::Exists(vars, body)
                })
            }
            _ => self.atom(),
        }
    }

    fn record(&mut self, e: Error) {
        let off = |e: &Error| match e {
            Error::Syntax { offset, .. } | Error::Unbound { offset, .. } => *offset,
            _ => 0,
        };
        match &self.furthest {
            Some(prev) if off(prev) >= off(&e) => {}
            _ => self.furthest = Some(e),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let start = self.pos;
        match self.equation() {
            Ok(f) => return Ok(f),
            Err(e) => {
                if self.toks[start].0 != Tok::LParen {
                    return Err(e);
                }
                self.record(e);
            }
        }
        self.pos = start;
        self.bump();
        let inner = self.formula().and_then(|f| {
            self.expect(Tok::RParen, "`)`")?;
            Ok(f)
        });
        match inner {
            Ok(f) => Ok(f),
            Err(e) => {
                self.record(e);
                Err(self.furthest.take().expect("recorded"))
            }
        }
    }

    fn equation(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                Ok(Formula::Eq(lhs, self.term()?))
            }
            Tok::Neq => {
                self.bump();
                Ok(Formula::Neq(lhs, self.term()?))
            }
            _ => self.fail("`=` or `!=`"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut lhs = self.meet()?;
        while *self.peek() == Tok::Join {
            self.bump();
            lhs = lhs.join(self.meet()?);
        }
        Ok(lhs)
    }

    fn meet(&mut self) -> Result<Term> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Meet {
            self.bump();
            lhs = lhs.meet(self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Term> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Term::Zero)
            }
            Tok::One => {
                self.bump();
                Ok(Term::One)
            }
            Tok::K(n, m) => {
                self.bump();
                Ok(Term::k(n, m))
            }
            Tok::Ident(name) => {
                self.bump();
                if self.scope.contains(&name) || self.free.contains(&name) {
                    Ok(Term::Var(name))
                } else if self.named.contains(&name) {
                    Ok(Term::Const(ConstId::Named(name)))
                } else {
                    Err(Error::Unbound { name, offset })
                }
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.fail("a term"),
        }
    }
}

fn run(text: &str, free: &BTreeSet<String>, named: &BTreeSet<String>) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, scope: Vec::new(), free, named, furthest: None };
    let f = match p.formula() {
        Ok(f) => f,
        Err(e) => {
            p.record(e);
            return Err(p.furthest.take().expect("recorded"));
        }
    };
    if *p.peek() != Tok::End {
        let e = Error::Syntax {
            offset: p.offset(),
            message: format!("unexpected {} after formula", p.peek().describe()),
        };
        p.record(e);
        return Err(p.furthest.take().expect("recorded"));
    }
    Ok(f)
}

/// Parses a sentence. Every identifier must be bound by a quantifier.
pub fn parse(text: &str) -> Result<Formula> {
    run(text, &BTreeSet::new(), &BTreeSet::new())
}

/// Parses a formula whose free variables are drawn from `free_vars`.
pub fn parse_open(text: &str, free_vars: &[&str]) -> Result<Formula> {
    let free = free_vars.iter().map(|s| s.to_string()).collect();
    run(text, &free, &BTreeSet::new())
}

/// Parses a sentence in which unbound identifiers from `constants` denote
/// named constants.
pub fn parse_with_constants<S: AsRef<str>>(text: &str, constants: &[S]) -> Result<Formula> {
    let named = constants.iter().map(|s| s.as_ref().to_string()).collect();
    run(text, &BTreeSet::new(), &named)
}
