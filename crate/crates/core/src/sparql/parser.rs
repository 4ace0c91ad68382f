use std::collections::{HashMap, HashSet};

use crate::error::QueryError;
use crate::{vocab, Term};

use super::{
    Comparator, FilterExpr, PatternTerm, Projection, QueryAst, QueryForm, SelectQuery,
    TriplePattern,
};

const UNSUPPORTED: &[&str] = &[
    "OPTIONAL", "UNION", "ORDER", "LIMIT", "OFFSET", "CONSTRUCT", "ASK", "INSERT", "DELETE",
    "SERVICE", "MINUS", "BIND", "VALUES", "GRAPH", "HAVING", "FROM", "REDUCED", "EXISTS",
];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Iri(String),
    QName(String),
    Var(String),
    Str(String),
    Num(f64),
    Word(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Dot,
    Comp(Comparator),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, message: impl Into<String>) -> QueryError {
        QueryError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, QueryError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            // comments run to end of line
            if matches!(self.chars.peek(), Some('#')) {
                while !matches!(self.chars.peek(), None | Some('\n')) {
                    self.bump();
                }
                continue;
            }
            let (line, column) = (self.line, self.column);
            let Some(&c) = self.chars.peek() else { break };
            let tok = match c {
                '{' => {
                    self.bump();
                    Tok::LBrace
                }
                '}' => {
                    self.bump();
                    Tok::RBrace
                }
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                '<' => {
                    self.bump();
                    // '<' is either a comparator or the start of an IRI
                    match self.chars.peek() {
                        Some('=') => {
                            self.bump();
                            Tok::Comp(Comparator::Le)
                        }
                        Some(c) if c.is_whitespace() || c.is_ascii_digit() || *c == '-' || *c == '+' || *c == '?' => {
                            Tok::Comp(Comparator::Lt)
                        }
                        _ => {
                            let mut iri = String::new();
                            loop {
                                match self.bump() {
                                    Some('>') => break,
                                    Some(c) if c.is_whitespace() => {
                                        return Err(self.err("whitespace inside IRI"))
                                    }
                                    Some(c) => iri.push(c),
                                    None => return Err(self.err("unterminated IRI")),
                                }
                            }
                            Tok::Iri(iri)
                        }
                    }
                }
                '>' => {
                    self.bump();
                    match self.chars.peek() {
                        Some('=') => {
                            self.bump();
                            Tok::Comp(Comparator::Ge)
                        }
                        _ => Tok::Comp(Comparator::Gt),
                    }
                }
                '"' => {
                    self.bump();
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            Some('"') => break,
                            Some('\\') => match self.bump() {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                Some('n') => s.push('\n'),
                                Some('t') => s.push('\t'),
                                Some(c) => return Err(self.err(format!("unknown escape \\{c}"))),
                                None => return Err(self.err("unterminated string")),
                            },
                            Some(c) => s.push(c),
                            None => return Err(self.err("unterminated string")),
                        }
                    }
                    Tok::Str(s)
                }
                '?' | '$' => {
                    self.bump();
                    let name = self.take_word();
                    if name.is_empty() {
                        return Err(self.err("empty variable name"));
                    }
                    Tok::Var(name)
                }
                '=' => {
                    self.bump();
                    Tok::Comp(Comparator::Eq)
                }
                '!' => {
                    self.bump();
                    match self.chars.peek() {
                        Some('=') => {
                            self.bump();
                            Tok::Comp(Comparator::Ne)
                        }
                        _ => return Err(self.err("expected '=' after '!'")),
                    }
                }
                c if c.is_ascii_digit() || c == '-' || c == '+' => {
                    let mut num = String::new();
                    while matches!(self.chars.peek(), Some(c) if c.is_ascii_digit() || *c == '.' || *c == '-' || *c == '+' || *c == 'e' || *c == 'E')
                    {
                        num.push(self.bump().unwrap());
                    }
                    let value: f64 = num
                        .parse()
                        .map_err(|_| self.err(format!("malformed number '{num}'")))?;
                    if !value.is_finite() {
                        return Err(self.err("number must be finite"));
                    }
                    Tok::Num(value)
                }
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let word = self.take_word_with_colon();
                    word
                }
                _ => return Err(self.err(format!("unexpected character '{c}'"))),
            };
            out.push(Spanned { tok, line, column });
        }
        // comparator lexing for < and > clashes with IRIs; handle here instead:
        Ok(out)
    }

    fn take_word(&mut self) -> String {
        let mut word = String::new();
        while matches!(self.chars.peek(), Some(c) if c.is_ascii_alphanumeric() || *c == '_') {
            word.push(self.bump().unwrap());
        }
        word
    }

    /// A bare word, possibly a qname (one ':' allowed, local part may contain
    /// digits, letters, '_' and '-').
    fn take_word_with_colon(&mut self) -> Tok {
        let mut word = String::new();
        while matches!(self.chars.peek(), Some(c) if c.is_ascii_alphanumeric() || *c == '_' || *c == '-')
        {
            word.push(self.bump().unwrap());
        }
        if matches!(self.chars.peek(), Some(':')) {
            self.bump();
            let mut local = String::new();
            while matches!(self.chars.peek(), Some(c) if c.is_ascii_alphanumeric() || *c == '_' || *c == '-' || *c == '.')
            {
                local.push(self.bump().unwrap());
            }
            Tok::QName(format!("{word}:{local}"))
        } else {
            Tok::Word(word)
        }
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    prefixes: HashMap<String, String>,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: impl Into<String>) -> QueryError {
        let (line, column) = self
            .tokens
            .get(self.pos.min(self.tokens.len().saturating_sub(1)))
            .map_or((0, 0), |s| (s.line, s.column));
        QueryError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if self.peek_keyword(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Spanned { tok: Tok::Word(w), .. }) if w.eq_ignore_ascii_case(kw))
    }

    fn check_unsupported(&self) -> Result<(), QueryError> {
        if let Some(Spanned { tok: Tok::Word(w), .. }) = self.peek() {
            let upper = w.to_ascii_uppercase();
            if UNSUPPORTED.contains(&upper.as_str()) {
                return Err(QueryError::Unsupported(upper));
            }
        }
        Ok(())
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), QueryError> {
        match self.peek() {
            Some(s) if &s.tok == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_here(format!("expected {what}"))),
        }
    }

    fn parse_query(&mut self) -> Result<QueryAst, QueryError> {
        while self.keyword("PREFIX") {
            let name = match self.next() {
                Some(Spanned { tok: Tok::QName(q), .. }) => {
                    q.strip_suffix(':').map(str::to_string).unwrap_or_else(|| {
                        q.split(':').next().unwrap_or_default().to_string()
                    })
                }
                _ => return Err(self.err_here("expected prefix name")),
            };
            let iri = match self.next() {
                Some(Spanned { tok: Tok::Iri(iri), .. }) => iri,
                _ => return Err(self.err_here("expected namespace IRI")),
            };
            self.prefixes.insert(name, iri);
        }

        self.check_unsupported()?;
        let form = if self.keyword("SELECT") {
            QueryForm::Select(self.parse_select_clause()?)
        } else if self.keyword("DESCRIBE") {
            let mut variables = Vec::new();
            while let Some(Spanned { tok: Tok::Var(v), .. }) = self.peek() {
                variables.push(v.clone());
                self.pos += 1;
            }
            if variables.is_empty() {
                return Err(self.err_here("DESCRIBE requires at least one variable"));
            }
            QueryForm::Describe { variables }
        } else {
            self.check_unsupported()?;
            return Err(self.err_here("expected SELECT or DESCRIBE"));
        };

        if !self.keyword("WHERE") {
            return Err(self.err_here("expected WHERE"));
        }
        let (patterns, filters) = self.parse_group()?;

        let form = if self.keyword("GROUP") {
            if !self.keyword("BY") {
                return Err(self.err_here("expected BY after GROUP"));
            }
            let mut group_by = Vec::new();
            loop {
                let parens = matches!(self.peek(), Some(Spanned { tok: Tok::LParen, .. }));
                if parens {
                    self.pos += 1;
                }
                match self.next() {
                    Some(Spanned { tok: Tok::Var(v), .. }) => group_by.push(v),
                    _ => return Err(self.err_here("expected variable in GROUP BY")),
                }
                if parens {
                    self.expect(&Tok::RParen, "')'")?;
                }
                if !matches!(
                    self.peek(),
                    Some(Spanned { tok: Tok::Var(_) | Tok::LParen, .. })
                ) {
                    break;
                }
            }
            match form {
                QueryForm::Select(mut select) => {
                    select.group_by = group_by;
                    QueryForm::Select(select)
                }
                QueryForm::Describe { .. } => {
                    return Err(QueryError::Invalid(
                        "GROUP BY is not valid on DESCRIBE".to_string(),
                    ))
                }
            }
        } else {
            form
        };

        self.check_unsupported()?;
        if let Some(s) = self.peek() {
            return Err(QueryError::Syntax {
                line: s.line,
                column: s.column,
                message: "unexpected trailing tokens".to_string(),
            });
        }

        let ast = QueryAst {
            prefixes: std::mem::take(&mut self.prefixes),
            form,
            patterns,
            filters,
        };
        validate(&ast)?;
        Ok(ast)
    }

    fn parse_select_clause(&mut self) -> Result<SelectQuery, QueryError> {
        let distinct = self.keyword("DISTINCT");
        let mut projection = Vec::new();
        loop {
            match self.peek() {
                Some(Spanned { tok: Tok::Var(v), .. }) => {
                    projection.push(Projection::Var(v.clone()));
                    self.pos += 1;
                }
                Some(Spanned { tok: Tok::LParen, .. }) => {
                    self.pos += 1;
                    if !self.keyword("COUNT") {
                        return Err(self.err_here("expected COUNT in aggregate projection"));
                    }
                    self.expect(&Tok::LParen, "'(' after COUNT")?;
                    let agg_distinct = self.keyword("DISTINCT");
                    let variable = match self.next() {
                        Some(Spanned { tok: Tok::Var(v), .. }) => v,
                        _ => return Err(self.err_here("expected variable inside COUNT")),
                    };
                    self.expect(&Tok::RParen, "')' after COUNT variable")?;
                    if !self.keyword("AS") {
                        return Err(self.err_here("expected AS in aggregate projection"));
                    }
                    let alias = match self.next() {
                        Some(Spanned { tok: Tok::Var(v), .. }) => v,
                        _ => return Err(self.err_here("expected alias variable after AS")),
                    };
                    self.expect(&Tok::RParen, "')' closing aggregate projection")?;
                    projection.push(Projection::Count {
                        distinct: agg_distinct,
                        variable,
                        alias,
                    });
                }
                _ => break,
            }
        }
        if projection.is_empty() {
            return Err(self.err_here("SELECT requires at least one projection"));
        }
        Ok(SelectQuery {
            distinct,
            projection,
            group_by: Vec::new(),
        })
    }

    fn parse_group(&mut self) -> Result<(Vec<TriplePattern>, Vec<FilterExpr>), QueryError> {
        self.expect(&Tok::LBrace, "'{'")?;
        let mut patterns = Vec::new();
        let mut filters = Vec::new();
        loop {
            self.check_unsupported()?;
            match self.peek() {
                Some(Spanned { tok: Tok::RBrace, .. }) => {
                    self.pos += 1;
                    break;
                }
                Some(Spanned { tok: Tok::Dot, .. }) => {
                    self.pos += 1;
                }
                None => return Err(self.err_here("unterminated group, expected '}'")),
                _ => {
                    if self.keyword("FILTER") {
                        filters.push(self.parse_filter()?);
                    } else {
                        patterns.push(self.parse_pattern()?);
                    }
                }
            }
        }
        Ok((patterns, filters))
    }

    fn parse_filter(&mut self) -> Result<FilterExpr, QueryError> {
        self.expect(&Tok::LParen, "'(' after FILTER")?;
        let variable = match self.next() {
            Some(Spanned { tok: Tok::Var(v), .. }) => v,
            _ => return Err(self.err_here("expected variable in FILTER")),
        };
        let comparator = match self.next() {
            Some(Spanned { tok: Tok::Comp(c), .. }) => c,
            _ => return Err(self.err_here("expected comparator in FILTER")),
        };
        let constant = match self.next() {
            Some(Spanned { tok: Tok::Num(n), .. }) => n,
            _ => return Err(self.err_here("expected numeric constant in FILTER")),
        };
        self.expect(&Tok::RParen, "')' closing FILTER")?;
        Ok(FilterExpr {
            variable,
            comparator,
            constant,
        })
    }

    fn parse_pattern(&mut self) -> Result<TriplePattern, QueryError> {
        let subject = self.parse_pattern_term(false)?;
        let predicate = self.parse_pattern_term(true)?;
        let object = self.parse_pattern_term(false)?;
        Ok(TriplePattern {
            subject,
            predicate,
            object,
        })
    }

    fn parse_pattern_term(&mut self, predicate_position: bool) -> Result<PatternTerm, QueryError> {
        self.check_unsupported()?;
        match self.next() {
            Some(Spanned { tok: Tok::Var(v), .. }) => Ok(PatternTerm::Var(v)),
            Some(Spanned { tok: Tok::Iri(iri), line, column }) => {
                if !Term::iri_is_absolute(&iri) {
                    return Err(QueryError::Syntax {
                        line,
                        column,
                        message: format!("relative IRI not allowed: <{iri}>"),
                    });
                }
                Ok(PatternTerm::Term(Term::Iri(iri)))
            }
            Some(Spanned { tok: Tok::QName(q), .. }) => {
                let (prefix, local) = q.split_once(':').unwrap();
                let ns = self
                    .prefixes
                    .get(prefix)
                    .ok_or_else(|| QueryError::UnknownPrefix(prefix.to_string()))?;
                Ok(PatternTerm::Term(Term::Iri(format!("{ns}{local}"))))
            }
            Some(Spanned { tok: Tok::Word(w), .. }) if predicate_position && w == "a" => {
                Ok(PatternTerm::Term(Term::iri(vocab::RDF_TYPE)))
            }
            Some(Spanned { tok: Tok::Str(s), .. }) => Ok(PatternTerm::Term(Term::literal(s))),
            Some(Spanned { tok: Tok::Num(n), .. }) => Ok(PatternTerm::Term(Term::typed_literal(
                format_number(n),
                vocab::XSD_DOUBLE,
            ))),
            Some(s) => Err(QueryError::Syntax {
                line: s.line,
                column: s.column,
                message: format!("unexpected token in triple pattern: {:?}", s.tok),
            }),
            None => Err(self.err_here("unexpected end of query in triple pattern")),
        }
    }
}

fn format_number(n: f64) -> String {
    if n.fract() == 0.0 && n.abs() < 1e15 {
        format!("{}", n as i64)
    } else {
        format!("{n}")
    }
}

fn validate(ast: &QueryAst) -> Result<(), QueryError> {
    let pattern_vars: HashSet<&str> = ast
        .patterns
        .iter()
        .flat_map(TriplePattern::variables)
        .collect();
    let check = |v: &str| -> Result<(), QueryError> {
        if pattern_vars.contains(v) {
            Ok(())
        } else {
            Err(QueryError::UnboundProjection(v.to_string()))
        }
    };
    match &ast.form {
        QueryForm::Describe { variables } => {
            for v in variables {
                check(v)?;
            }
        }
        QueryForm::Select(select) => {
            let has_aggregate = select
                .projection
                .iter()
                .any(|p| matches!(p, Projection::Count { .. }));
            for p in &select.projection {
                match p {
                    Projection::Var(v) => {
                        check(v)?;
                        if has_aggregate && !select.group_by.contains(v) {
                            return Err(QueryError::Invalid(format!(
                                "?{v} must appear in GROUP BY when aggregates are projected"
                            )));
                        }
                    }
                    Projection::Count { variable, .. } => check(variable)?,
                }
            }
            for v in &select.group_by {
                check(v)?;
            }
        }
    }
    Ok(())
}

/// Parses a query in the supported subset.
pub fn parse_query(text: &str) -> Result<QueryAst, QueryError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        prefixes: HashMap::new(),
    };
    parser.parse_query()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn select_with_filter_and_sugar() {
        let ast = parse_query(
            "PREFIX dc: <http://purl.org/dc/elements/1.1/>\n\
             PREFIX obo: <http://purl.obolibrary.org/obo/>\n\
             SELECT distinct ?obs ?samp\n\
             WHERE {\n\
               ?ds dc:title \"Methylation Relative\" .\n\
               # a comment\n\
               ?samp a obo:OBI_0100060 .\n\
               ?obs obo:IAO_0000004 ?obsVal .\n\
               FILTER ( ?obsVal > 2 ) .\n\
             }",
        )
        .unwrap();
        assert_eq!(ast.patterns.len(), 3);
        assert_eq!(ast.filters.len(), 1);
        assert_eq!(ast.filters[0].comparator, Comparator::Gt);
        assert_eq!(ast.filters[0].constant, 2.0);
        match &ast.form {
            QueryForm::Select(s) => {
                assert!(s.distinct);
                assert_eq!(s.projection.len(), 2);
            }
            _ => panic!(),
        }
        // `a` expanded
        assert_eq!(
            ast.patterns[1].predicate,
            PatternTerm::Term(Term::iri(vocab::RDF_TYPE))
        );
    }

    #[test]
    fn aggregate_with_group_by() {
        let ast = parse_query(
            "SELECT (count(?rep) as ?repcount) ?samp WHERE { ?obs <http://ex.org/p> ?rep . ?obs <http://ex.org/q> ?samp } GROUP BY (?samp)",
        )
        .unwrap();
        match &ast.form {
            QueryForm::Select(s) => {
                assert_eq!(s.group_by, vec!["samp".to_string()]);
                assert_eq!(
                    s.projection[0],
                    Projection::Count {
                        distinct: false,
                        variable: "rep".to_string(),
                        alias: "repcount".to_string()
                    }
                );
            }
            _ => panic!(),
        }
    }

    #[test]
    fn count_distinct_supported() {
        let ast = parse_query(
            "SELECT (COUNT(DISTINCT ?x) AS ?n) WHERE { ?x <http://ex.org/p> ?y }",
        )
        .unwrap();
        match &ast.form {
            QueryForm::Select(s) => assert_eq!(
                s.projection[0],
                Projection::Count {
                    distinct: true,
                    variable: "x".to_string(),
                    alias: "n".to_string()
                }
            ),
            _ => panic!(),
        }
    }

    #[test]
    fn projected_variable_must_be_used() {
        assert_eq!(
            parse_query("SELECT ?x WHERE { }").unwrap_err(),
            QueryError::UnboundProjection("x".to_string())
        );
    }

    #[test]
    fn unknown_prefix_is_reported() {
        assert_eq!(
            parse_query("SELECT ?x WHERE { ?x zzz:p ?y }").unwrap_err(),
            QueryError::UnknownPrefix("zzz".to_string())
        );
    }

    #[test]
    fn unsupported_keywords_fail_clearly() {
        for query in [
            "SELECT ?x WHERE { ?x <http://ex.org/p> ?y OPTIONAL { ?x <http://ex.org/q> ?z } }",
            "SELECT ?x WHERE { ?x <http://ex.org/p> ?y } ORDER BY ?x",
            "CONSTRUCT { ?x <http://ex.org/p> ?y } WHERE { ?x <http://ex.org/p> ?y }",
        ] {
            match parse_query(query).unwrap_err() {
                QueryError::Unsupported(_) => {}
                other => panic!("expected unsupported-feature error, got {other:?}"),
            }
        }
    }

    #[test]
    fn describe_form() {
        let ast = parse_query(
            "DESCRIBE ?rep ?obs WHERE { ?obs <http://ex.org/about> ?rep }",
        )
        .unwrap();
        match &ast.form {
            QueryForm::Describe { variables } => {
                assert_eq!(variables, &["rep".to_string(), "obs".to_string()])
            }
            _ => panic!(),
        }
    }

    #[test]
    fn syntax_error_carries_position() {
        match parse_query("SELECT ?x WHERE { ?x <http://ex.org/p> }").unwrap_err() {
            QueryError::Syntax { line, .. } => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn variable_predicate_allowed() {
        let ast = parse_query("SELECT ?p WHERE { <http://ex.org/s> ?p ?o }").unwrap();
        assert_eq!(ast.patterns[0].predicate, PatternTerm::Var("p".to_string()));
    }
}
