use thiserror::Error;

/// Structural errors raised when building RDF statements.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RdfError {
    #[error("literal term is not allowed in subject position")]
    LiteralSubject,
    #[error("predicate must be an IRI, got {0}")]
    NonIriPredicate(String),
    #[error("relative IRI not allowed: <{0}>")]
    RelativeIri(String),
    #[error("unknown prefix '{0}'")]
    UnknownPrefix(String),
    #[error("malformed qname '{0}'")]
    MalformedQName(String),
}

/// N-Triples syntax errors, with a 1-based line number.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct NtParseError {
    pub line: usize,
    pub message: String,
}

impl NtParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        NtParseError {
            line,
            message: message.into(),
        }
    }
}

/// OBO flat-file errors.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum OboError {
    #[error("stanza starting at line {line} has no id tag")]
    MissingId { line: usize },
    #[error("is_a cycle detected: {0}")]
    Cycle(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Tabular ingestion errors (observation CSV, symbol map, axiom TSV).
#[derive(Debug, Error)]
pub enum TabularError {
    #[error("line {line}: {message}")]
    Row { line: usize, message: String },
    #[error("missing column '{0}' in header")]
    MissingColumn(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// SPARQL parse and validation errors.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported feature: {0}")]
    Unsupported(String),
    #[error("unknown prefix '{0}'")]
    UnknownPrefix(String),
    #[error("variable ?{0} is projected but does not appear in the WHERE clause")]
    UnboundProjection(String),
    #[error("{0}")]
    Invalid(String),
}
