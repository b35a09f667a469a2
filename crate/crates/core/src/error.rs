use std::fmt;

use thiserror::Error;

/// A location in DSL source text, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: Position, message: String },
    #[error("arity error at {pos}: {message}")]
    Arity { pos: Position, message: String },
    #[error("unbound name `{name}` at {pos}")]
    UnboundName { pos: Position, name: String },
    #[error("index variable `{name}` used outside its bigoplus at {pos}")]
    IndexEscape { pos: Position, name: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element has {found} coordinates, group expects {expected}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("relation matrix has {found} columns, expected {expected} (one per generator)")]
    ColumnMismatch { expected: usize, found: usize },
    #[error("matrix entries do not form a {rows}x{cols} rectangle")]
    NotRectangular { rows: usize, cols: usize },
    #[error("cannot factor {0}: cofactor exceeds 64 bits")]
    FactorTooLarge(String),
    #[error("malformed matrix: {0}")]
    MatrixSyntax(String),
    #[error("malformed set specification: {0}")]
    SetSyntax(String),
    #[error("operation needs an explicit (finite) enumeration, got the machine backend")]
    NotExplicit,
    #[error("no decision after {0} dovetailing rounds; oracle and enumeration disagree about R")]
    FuelExhausted(u64),
    #[error("variable x{0} has no assigned value")]
    UnassignedVariable(usize),
    #[error("stage {stage} precedes the polynomial's last variable index {degree}")]
    StageBeforeDegree { stage: u64, degree: usize },
    #[error("invalid norm oracle: {0}")]
    InvalidOracle(String),
    #[error("malformed polynomial: {0}")]
    PolynomialSyntax(String),
    #[error("no binding named `{0}`")]
    UnknownBinding(String),
    #[error("invalid expression: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
