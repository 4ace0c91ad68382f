//! N-Triples subset parser and canonical serializer.
//!
//! One statement per line, `<iri>`, `_:label`, `"literal"` with optional
//! `^^<datatype>` or `@lang`, terminated by `.`. Accepts LF and CRLF input;
//! the canonical serializer emits LF and sorts statements so identical
//! graphs produce byte-identical output.

use crate::error::NtParseError;
use crate::{Graph, Term, Triple};

pub fn parse_ntriples(text: &str) -> Result<Graph, NtParseError> {
    let mut graph = Graph::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let triple = parse_line(line, line_no)?;
        graph.insert(&triple);
    }
    Ok(graph)
}

fn parse_line(line: &str, line_no: usize) -> Result<Triple, NtParseError> {
    let mut cursor = Cursor {
        chars: line.char_indices().peekable(),
        line: line_no,
    };
    let subject = cursor.parse_term()?;
    cursor.skip_ws();
    let predicate = cursor.parse_term()?;
    cursor.skip_ws();
    let object = cursor.parse_term()?;
    cursor.skip_ws();
    match cursor.chars.next() {
        Some((_, '.')) => {}
        other => {
            return Err(NtParseError::new(
                line_no,
                format!(
                    "expected '.' terminator, found {}",
                    other.map_or("end of line".to_string(), |(_, c)| format!("'{c}'"))
                ),
            ))
        }
    }
    cursor.skip_ws();
    if let Some((_, c)) = cursor.chars.next() {
        if c != '#' {
            return Err(NtParseError::new(
                line_no,
                format!("unexpected trailing content starting at '{c}'"),
            ));
        }
    }
    Triple::new(subject, predicate, object)
        .map_err(|e| NtParseError::new(line_no, e.to_string()))
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> NtParseError {
        NtParseError::new(self.line, message)
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn parse_term(&mut self) -> Result<Term, NtParseError> {
        self.skip_ws();
        match self.chars.peek().map(|&(_, c)| c) {
            Some('<') => self.parse_iri(),
            Some('_') => self.parse_blank(),
            Some('"') => self.parse_literal(),
            Some(c) => Err(self.err(format!("unexpected character '{c}'"))),
            None => Err(self.err("unexpected end of line, expected a term")),
        }
    }

    fn parse_iri(&mut self) -> Result<Term, NtParseError> {
        self.chars.next(); // consume '<'
        let mut iri = String::new();
        loop {
            match self.chars.next() {
                Some((_, '>')) => break,
                Some((_, c)) if c == ' ' || c == '<' => {
                    return Err(self.err(format!("invalid character '{c}' inside IRI")))
                }
                Some((_, c)) => iri.push(c),
                None => return Err(self.err("unterminated IRI")),
            }
        }
        if !Term::iri_is_absolute(&iri) {
            return Err(self.err(format!("relative IRI not allowed: <{iri}>")));
        }
        Ok(Term::Iri(iri))
    }

    fn parse_blank(&mut self) -> Result<Term, NtParseError> {
        self.chars.next(); // '_'
        match self.chars.next() {
            Some((_, ':')) => {}
            _ => return Err(self.err("blank node must start with '_:'")),
        }
        let mut label = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                label.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        if label.is_empty() {
            return Err(self.err("empty blank node label"));
        }
        Ok(Term::Blank(label))
    }

    fn parse_literal(&mut self) -> Result<Term, NtParseError> {
        self.chars.next(); // '"'
        let mut lexical = String::new();
        loop {
            match self.chars.next() {
                Some((_, '"')) => break,
                Some((_, '\\')) => match self.chars.next() {
                    Some((_, '"')) => lexical.push('"'),
                    Some((_, '\\')) => lexical.push('\\'),
                    Some((_, 'n')) => lexical.push('\n'),
                    Some((_, 'r')) => lexical.push('\r'),
                    Some((_, 't')) => lexical.push('\t'),
                    Some((_, 'u')) => lexical.push(self.parse_unicode_escape(4)?),
                    Some((_, 'U')) => lexical.push(self.parse_unicode_escape(8)?),
                    Some((_, c)) => return Err(self.err(format!("unknown escape '\\{c}'"))),
                    None => return Err(self.err("unterminated escape")),
                },
                Some((_, c)) => lexical.push(c),
                None => return Err(self.err("unterminated literal")),
            }
        }
        match self.chars.peek() {
            Some((_, '^')) => {
                self.chars.next();
                match self.chars.next() {
                    Some((_, '^')) => {}
                    _ => return Err(self.err("expected '^^' before datatype IRI")),
                }
                match self.parse_iri()? {
                    Term::Iri(dt) => Ok(Term::typed_literal(lexical, dt)),
                    _ => unreachable!(),
                }
            }
            Some((_, '@')) => {
                self.chars.next();
                let mut lang = String::new();
                while let Some(&(_, c)) = self.chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        lang.push(c);
                        self.chars.next();
                    } else {
                        break;
                    }
                }
                if lang.is_empty() {
                    return Err(self.err("empty language tag"));
                }
                Ok(Term::lang_literal(lexical, lang))
            }
            _ => Ok(Term::literal(lexical)),
        }
    }

    fn parse_unicode_escape(&mut self, digits: usize) -> Result<char, NtParseError> {
        let mut code = 0u32;
        for _ in 0..digits {
            match self.chars.next() {
                Some((_, c)) if c.is_ascii_hexdigit() => {
                    code = code * 16 + c.to_digit(16).unwrap();
                }
                _ => return Err(self.err("malformed unicode escape")),
            }
        }
        char::from_u32(code).ok_or_else(|| self.err("invalid unicode code point"))
    }
}

/// Canonical serialization: statements sorted lexicographically by their
/// serialized (subject, predicate, object) forms, LF line endings.
pub fn serialize_ntriples(graph: &Graph) -> String {
    let mut lines: Vec<String> = graph.iter().map(|t| t.to_ntriples()).collect();
    lines.sort_unstable();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab;

    #[test]
    fn single_typed_literal_statement() {
        let g = parse_ntriples(
            "<http://ex.org/a> <http://ex.org/p> \"2.5\"^^<http://www.w3.org/2001/XMLSchema#double> .",
        )
        .unwrap();
        assert_eq!(g.len(), 1);
        let t = g.iter().next().unwrap();
        assert_eq!(
            t.object,
            Term::typed_literal("2.5", vocab::XSD_DOUBLE)
        );
    }

    #[test]
    fn empty_input_gives_empty_graph() {
        assert!(parse_ntriples("").unwrap().is_empty());
        assert_eq!(serialize_ntriples(&Graph::new()), "");
    }

    #[test]
    fn single_triple_serializes_as_one_line() {
        let g = parse_ntriples("<http://ex.org/a> <http://ex.org/p> <http://ex.org/b> .\n").unwrap();
        let out = serialize_ntriples(&g);
        assert_eq!(out, "<http://ex.org/a> <http://ex.org/p> <http://ex.org/b> .\n");
    }

    #[test]
    fn crlf_and_comments_accepted() {
        let g = parse_ntriples(
            "# header\r\n<http://ex.org/a> <http://ex.org/p> \"x\" .\r\n\r\n_:b <http://ex.org/p> \"y\"@en .\r\n",
        )
        .unwrap();
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn relative_iri_rejected_with_line() {
        let err = parse_ntriples(
            "<http://ex.org/a> <http://ex.org/p> <http://ex.org/b> .\n<rel/ative> <http://ex.org/p> <http://ex.org/b> .\n",
        )
        .unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("relative IRI"));
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = parse_ntriples("<http://ex.org/a> <http://ex.org/p> .\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn escape_round_trip() {
        let mut g = Graph::new();
        g.insert_terms(
            Term::iri("http://ex.org/a"),
            Term::iri("http://ex.org/p"),
            Term::literal("line1\nline\"2\"\\end"),
        )
        .unwrap();
        let text = serialize_ntriples(&g);
        let reparsed = parse_ntriples(&text).unwrap();
        assert_eq!(serialize_ntriples(&reparsed), text);
        assert_eq!(reparsed.len(), 1);
        assert_eq!(
            reparsed.iter().next().unwrap().object.lexical(),
            Some("line1\nline\"2\"\\end")
        );
    }
}
