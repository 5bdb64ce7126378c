//! First-order language over the lattice signature `{^, v, 0, 1}` with
//! constants: syntax, printing, two independent evaluators and the named
//! sentence library.

mod ast;
mod brute;
mod eval;
pub mod library;
mod parse;

pub use ast::{bindings, substitute, ConstId, Formula, Term};
pub use brute::eval_bruteforce;
pub use eval::{eval, eval_open, Interpretation, Verdict};
pub use parse::{parse, parse_open, parse_with_constants};

#[cfg(test)]
mod tests;
