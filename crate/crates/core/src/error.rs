use thiserror::Error;

use crate::expr::MAX_JET_ORDER;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by an expression that is identically zero")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("no value bound for variable {0}")]
    UnboundVariable(String),
    #[error("jet order exceeds {}", MAX_JET_ORDER)]
    JetOrderExceeded,

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("derivative of order above two on the right-hand side (column {0})")]
    HigherDerivative(usize),
    #[error("left-hand side must be exactly y''")]
    NotSecondOrder,

    #[error("leader {0} is not among the unknowns")]
    LeaderOutsideUnknowns(String),
    #[error("separant of the relation for {0} vanishes modulo the set")]
    SeparantVanishes(String),
    #[error("cannot reduce the degree of the relation for {0}")]
    CannotReduce(String),

    #[error("linear completion still produces new equations at order {0}")]
    CompletionDiverged(u32),

    #[error("the parameter a cancels from the normalization")]
    ParameterAbsent,
    #[error("the normalization is not linear in a or 1/a")]
    NotLinearInParameter,
    #[error("the specialized invariants are not functionally independent")]
    NotIndependent,

    #[error("the substitution cannot be inverted rationally")]
    NotInvertible,
    #[error("table syntax error at line {line}: {message}")]
    TableSyntax { line: usize, message: String },
    #[error("entry {id} is inconsistent: {reason}")]
    EntryInconsistent { id: String, reason: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
