use std::fmt;

use crate::vocab;

/// An RDF term: IRI, literal, or blank node.
///
/// Plain literals carry the xsd:string datatype; a literal always has exactly
/// one datatype IRI. Equality is simple term equality, no value-space
/// canonicalization ("2.0" and "2" are distinct literals).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(String),
    Literal {
        lexical: String,
        datatype: String,
        language: Option<String>,
    },
    Blank(String),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Term {
        Term::Iri(value.into())
    }

    /// Plain literal, defaulting to xsd:string.
    pub fn literal(lexical: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: vocab::XSD_STRING.to_string(),
            language: None,
        }
    }

    pub fn typed_literal(lexical: impl Into<String>, datatype: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: datatype.into(),
            language: None,
        }
    }

    pub fn lang_literal(lexical: impl Into<String>, language: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: vocab::RDF_LANG_STRING.to_string(),
            language: Some(language.into()),
        }
    }

    pub fn blank(label: impl Into<String>) -> Term {
        Term::Blank(label.into())
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    /// Lexical form of a literal, if this is a literal.
    pub fn lexical(&self) -> Option<&str> {
        match self {
            Term::Literal { lexical, .. } => Some(lexical),
            _ => None,
        }
    }

    /// Numeric view used by FILTER evaluation: any literal whose lexical form
    /// parses as a finite decimal, regardless of declared datatype.
    pub fn numeric_value(&self) -> Option<f64> {
        match self {
            Term::Literal { lexical, .. } => match lexical.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Some(v),
                _ => None,
            },
            _ => None,
        }
    }

    /// An IRI is absolute when it carries a scheme before the first ':'.
    pub fn iri_is_absolute(iri: &str) -> bool {
        match iri.find(':') {
            Some(0) | None => false,
            Some(pos) => iri[..pos]
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '+' || c == '-' || c == '.'),
        }
    }

    /// N-Triples serialization of the term.
    pub fn to_ntriples(&self) -> String {
        let mut out = String::new();
        self.write_ntriples(&mut out);
        out
    }

    pub(crate) fn write_ntriples(&self, out: &mut String) {
        match self {
            Term::Iri(iri) => {
                out.push('<');
                out.push_str(iri);
                out.push('>');
            }
            Term::Blank(label) => {
                out.push_str("_:");
                out.push_str(label);
            }
            Term::Literal {
                lexical,
                datatype,
                language,
            } => {
                out.push('"');
                for c in lexical.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\r' => out.push_str("\\r"),
                        '\t' => out.push_str("\\t"),
                        c => out.push(c),
                    }
                }
                out.push('"');
                if let Some(lang) = language {
                    out.push('@');
                    out.push_str(lang);
                } else if datatype != vocab::XSD_STRING {
                    out.push_str("^^<");
                    out.push_str(datatype);
                    out.push('>');
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ntriples())
    }
}

/// One RDF statement. Construction is validated: literal subjects and non-IRI
/// predicates are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Triple, crate::RdfError> {
        if subject.is_literal() {
            return Err(crate::RdfError::LiteralSubject);
        }
        if !predicate.is_iri() {
            return Err(crate::RdfError::NonIriPredicate(predicate.to_ntriples()));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub fn to_ntriples(&self) -> String {
        let mut out = String::new();
        self.subject.write_ntriples(&mut out);
        out.push(' ');
        self.predicate.write_ntriples(&mut out);
        out.push(' ');
        self.object.write_ntriples(&mut out);
        out.push_str(" .");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_subject_rejected() {
        let err = Triple::new(
            Term::literal("x"),
            Term::iri("http://ex.org/p"),
            Term::iri("http://ex.org/o"),
        )
        .unwrap_err();
        assert_eq!(err, crate::RdfError::LiteralSubject);
    }

    #[test]
    fn non_iri_predicate_rejected() {
        assert!(Triple::new(
            Term::iri("http://ex.org/s"),
            Term::blank("b0"),
            Term::iri("http://ex.org/o"),
        )
        .is_err());
    }

    #[test]
    fn absolute_iri_detection() {
        assert!(Term::iri_is_absolute("http://example.org/a"));
        assert!(Term::iri_is_absolute("urn:uuid:abc"));
        assert!(!Term::iri_is_absolute("relative/path"));
        assert!(!Term::iri_is_absolute(":noscheme"));
    }

    #[test]
    fn plain_literal_defaults_to_xsd_string() {
        let t = Term::literal("hello");
        match &t {
            Term::Literal { datatype, .. } => assert_eq!(datatype, vocab::XSD_STRING),
            _ => unreachable!(),
        }
        assert_eq!(t.to_ntriples(), "\"hello\"");
    }

    #[test]
    fn numeric_view_ignores_datatype() {
        assert_eq!(Term::literal("2.5").numeric_value(), Some(2.5));
        assert_eq!(
            Term::typed_literal("3", "http://ex.org/custom").numeric_value(),
            Some(3.0)
        );
        assert_eq!(Term::literal("abc").numeric_value(), None);
        assert_eq!(Term::iri("http://ex.org/a").numeric_value(), None);
    }
}
