use alloc::string::String;

/// Errors raised by the algorithmic core.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed input data (generator outside the ground set, bad rational, ...).
    #[error("input error: {0}")]
    Input(String),
    /// Arguments that belong to different structures or otherwise misuse an API.
    #[error("usage error: {0}")]
    Usage(String),
    /// A configurable cap or budget was exceeded.
    #[error("resource error: {0}")]
    Resource(String),
    /// Formula syntax error at a byte offset.
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    /// Identifier that is neither bound by a quantifier nor a known constant.
    #[error("unbound variable `{name}` at offset {offset}")]
    Unbound { name: String, offset: usize },
    /// Evaluation needed a constant the interpretation does not cover.
    #[error("evaluation error: {0}")]
    Eval(String),
    /// Substitution would capture a variable.
    #[error("variable capture: {0}")]
    Capture(String),
    /// Function evaluated outside its domain (e.g. distance to the empty set).
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A PL construction hit a degenerate configuration that needs a length nudge.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    /// An internal invariant failed; this signals a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
