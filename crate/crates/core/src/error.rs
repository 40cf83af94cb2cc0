use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} is too large (must be below 2^32)")]
    TooLarge(u64),
    #[error("unrecognized field `{0}` (expected a prime or Q)")]
    Unrecognized(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("non-composable word `{0}`")]
    NonComposable(String),
    #[error("relation terms are not parallel paths: {0}")]
    NonParallel(String),
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("coefficient `{0}` is not defined in the chosen field")]
    BadCoefficient(String),
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("invalid value: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, column, kind }
    }
}

/// Failures while constructing or analysing an algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("NotAdmissible: path `{witness}` of length {cap} is nonzero modulo the relations")]
    NotAdmissible { witness: String, cap: usize },
    #[error("FieldTooSmall: characteristic {characteristic} must exceed the algebra dimension {dim}")]
    FieldTooSmall { characteristic: u64, dim: usize },
    #[error("NotSplitBasic: {0}")]
    NotSplitBasic(String),
    #[error("NotUnital: the subalgebra generated by the given elements does not contain 1")]
    NotUnital,
    #[error("NotAssociative: basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("non-composable word `{0}`")]
    NonComposable(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
}

impl AlgebraError {
    /// Short name of the failed check, used in CLI diagnostics.
    pub fn check_name(&self) -> &'static str {
        match self {
            AlgebraError::NotAdmissible { .. } => "NotAdmissible",
            AlgebraError::FieldTooSmall { .. } => "FieldTooSmall",
            AlgebraError::NotSplitBasic(_) => "NotSplitBasic",
            AlgebraError::NotUnital => "NotUnital",
            AlgebraError::NotAssociative(..) => "NotAssociative",
            AlgebraError::NonComposable(_) => "NonComposable",
            AlgebraError::UnknownName(_) => "UnknownName",
            AlgebraError::Invalid(_) => "Invalid",
        }
    }
}

/// Reading a presentation and building its algebras.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Build(#[from] AlgebraError),
    #[error("{0}")]
    Field(#[from] FieldError),
}
