//! Semantic data-integration engine: an in-memory RDF store, OBO-to-SKOS
//! conversion, GAF annotation mapping, property-chain materialization,
//! tabular observation ingestion, and a SPARQL-subset query engine.

pub mod annotations;
mod error;
mod graph;
pub mod ntriples;
pub mod obo;
pub mod observations;
pub mod oracle;
pub mod reasoner;
pub mod skos;
pub mod sparql;
mod term;
pub mod vocab;

pub use error::{NtParseError, OboError, QueryError, RdfError, TabularError};
pub use graph::{expand_qname, Graph, MergeReport, TermId};
pub use term::{Term, Triple};
