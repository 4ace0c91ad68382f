//! SPARQL subset: SELECT (DISTINCT, COUNT, GROUP BY), DESCRIBE, basic graph
//! patterns with `a` sugar, and numeric FILTERs. Unsupported SPARQL keywords
//! fail parsing with a clear error instead of being silently ignored.

mod eval;
mod parser;
mod plan;
pub mod results;

pub use eval::{evaluate_describe, evaluate_select, SolutionTable};
pub use parser::parse_query;
pub use plan::plan_bgp;

use std::collections::HashMap;

use crate::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternTerm {
    Term(Term),
    Var(String),
}

impl PatternTerm {
    pub fn as_var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .filter_map(PatternTerm::as_var)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Comparator {
    pub fn test(self, left: f64, right: f64) -> bool {
        match self {
            Comparator::Lt => left < right,
            Comparator::Le => left <= right,
            Comparator::Gt => left > right,
            Comparator::Ge => left >= right,
            Comparator::Eq => left == right,
            Comparator::Ne => left != right,
        }
    }
}

/// `FILTER ( ?var OP constant )`, numeric comparison only.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterExpr {
    pub variable: String,
    pub comparator: Comparator,
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    Var(String),
    /// `(COUNT([DISTINCT] ?var) AS ?alias)`
    Count {
        distinct: bool,
        variable: String,
        alias: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectQuery {
    pub distinct: bool,
    pub projection: Vec<Projection>,
    pub group_by: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QueryForm {
    Select(SelectQuery),
    Describe { variables: Vec<String> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryAst {
    pub prefixes: HashMap<String, String>,
    pub form: QueryForm,
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<FilterExpr>,
}

impl QueryAst {
    pub fn is_select(&self) -> bool {
        matches!(self.form, QueryForm::Select(_))
    }
}
