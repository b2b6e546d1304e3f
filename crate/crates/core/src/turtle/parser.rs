//! Hand-written Turtle parser.
//!
//! Supported surface: `@prefix`/`@base` (and the SPARQL `PREFIX`/`BASE`
//! spellings), prefixed names, IRIs, blank node labels, `[]` as an anonymous
//! node, predicate (`;`) and object (`,`) lists, the three literal forms plus
//! numeric and boolean shorthand, and the `a` keyword. Collections and quads
//! are out of scope.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::rdf::{PrefixMap, Term, Triple};
use crate::vocab;

#[derive(Debug, Error)]
pub enum TurtleError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown prefix '{prefix}:' at line {line}, column {column}")]
    UnknownPrefix { prefix: String, line: usize, column: usize },
}

/// Source of fresh blank-node labels. Parsed documents get labels that are
/// unique across the whole process, so graphs merged from several documents
/// never conflate blank nodes that happened to share a label.
static BLANK_COUNTER: AtomicU64 = AtomicU64::new(0);

fn fresh_blank() -> String {
    format!("g{}", BLANK_COUNTER.fetch_add(1, Ordering::Relaxed))
}

/// Parse a Turtle document into its triples and declared prefixes.
///
/// Relative IRIs are resolved by concatenation against `base` (full RFC 3986
/// reference resolution is not implemented). Blank-node labels are renamed
/// apart per document.
pub fn parse_turtle(
    text: &str,
    base: Option<&str>,
) -> Result<(Vec<Triple>, PrefixMap), TurtleError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
        prefixes: PrefixMap::new(),
        base: base.map(str::to_owned),
        blanks: HashMap::new(),
        triples: Vec::new(),
    };
    parser.document()?;
    Ok((parser.triples, parser.prefixes))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    prefixes: PrefixMap,
    base: Option<String>,
    blanks: HashMap<String, String>,
    triples: Vec<Triple>,
}

impl Parser {
    fn document(&mut self) -> Result<(), TurtleError> {
        loop {
            self.skip_trivia();
            if self.at_end() {
                return Ok(());
            }
            if self.peek() == Some('@') {
                self.directive()?;
            } else if self.at_keyword("PREFIX") {
                self.sparql_prefix()?;
            } else if self.at_keyword("BASE") {
                self.sparql_base()?;
            } else {
                self.triples_statement()?;
                self.expect_char('.')?;
            }
        }
    }

    fn directive(&mut self) -> Result<(), TurtleError> {
        self.expect_char('@')?;
        let word = self.read_bare_word();
        match word.as_str() {
            "prefix" => {
                self.skip_trivia();
                let label = self.read_prefix_label()?;
                self.expect_char(':')?;
                self.skip_trivia();
                let iri = self.read_iri_ref()?;
                self.prefixes.insert(label, iri);
                self.skip_trivia();
                self.expect_char('.')
            }
            "base" => {
                self.skip_trivia();
                let iri = self.read_iri_ref()?;
                self.base = Some(iri);
                self.skip_trivia();
                self.expect_char('.')
            }
            other => Err(self.syntax(format!("unknown directive '@{other}'"))),
        }
    }

    fn sparql_prefix(&mut self) -> Result<(), TurtleError> {
        self.consume_keyword("PREFIX");
        self.skip_trivia();
        let label = self.read_prefix_label()?;
        self.expect_char(':')?;
        self.skip_trivia();
        let iri = self.read_iri_ref()?;
        self.prefixes.insert(label, iri);
        Ok(())
    }

    fn sparql_base(&mut self) -> Result<(), TurtleError> {
        self.consume_keyword("BASE");
        self.skip_trivia();
        let iri = self.read_iri_ref()?;
        self.base = Some(iri);
        Ok(())
    }

    fn triples_statement(&mut self) -> Result<(), TurtleError> {
        let subject = self.subject()?;
        self.predicate_object_list(&subject)?;
        Ok(())
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), TurtleError> {
        loop {
            self.skip_trivia();
            let predicate = self.verb()?;
            loop {
                self.skip_trivia();
                let object = self.object()?;
                self.triples.push(Triple::new(subject.clone(), predicate.clone(), object));
                self.skip_trivia();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            if self.peek() == Some(';') {
                self.bump();
                self.skip_trivia();
                // A trailing ';' before '.' is legal.
                if matches!(self.peek(), Some('.') | None) {
                    return Ok(());
                }
            } else {
                return Ok(());
            }
        }
    }

    fn subject(&mut self) -> Result<Term, TurtleError> {
        self.skip_trivia();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.read_iri_ref()?)),
            Some('_') => self.blank_label(),
            Some('[') => self.anon(),
            Some(c) if c == ':' || c.is_alphabetic() => {
                let (iri, _) = self.prefixed_name()?;
                Ok(Term::Iri(iri))
            }
            Some(c) => Err(self.syntax(format!("expected subject, found '{c}'"))),
            None => Err(self.syntax("expected subject, found end of input".into())),
        }
    }

    fn verb(&mut self) -> Result<Term, TurtleError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.read_iri_ref()?)),
            Some('a') if self.is_bare_a() => {
                self.bump();
                Ok(Term::iri(vocab::RDF_TYPE))
            }
            Some(c) if c == ':' || c.is_alphabetic() => {
                let (iri, _) = self.prefixed_name()?;
                Ok(Term::Iri(iri))
            }
            Some(c) => Err(self.syntax(format!("expected predicate, found '{c}'"))),
            None => Err(self.syntax("expected predicate, found end of input".into())),
        }
    }

    fn object(&mut self) -> Result<Term, TurtleError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.read_iri_ref()?)),
            Some('_') => self.blank_label(),
            Some('[') => self.anon(),
            Some('"') => self.quoted_literal(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => self.numeric_literal(),
            Some(_) if self.at_keyword("true") || self.at_keyword("false") => {
                let word = self.read_bare_word();
                Ok(Term::typed(word, vocab::XSD_BOOLEAN))
            }
            Some(c) if c == ':' || c.is_alphabetic() => {
                let (iri, _) = self.prefixed_name()?;
                Ok(Term::Iri(iri))
            }
            Some(c) => Err(self.syntax(format!("expected object, found '{c}'"))),
            None => Err(self.syntax("expected object, found end of input".into())),
        }
    }

    fn blank_label(&mut self) -> Result<Term, TurtleError> {
        self.expect_char('_')?;
        self.expect_char(':')?;
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' || c == '.' {
                self.bump();
            } else {
                break;
            }
        }
        // A label must not end with '.'; give the dot back to the statement.
        while self.pos > start && self.chars[self.pos - 1] == '.' {
            self.pos -= 1;
            self.column -= 1;
        }
        if self.pos == start {
            return Err(self.syntax("empty blank node label".into()));
        }
        let label: String = self.chars[start..self.pos].iter().collect();
        let fresh = self.blanks.entry(label).or_insert_with(fresh_blank).clone();
        Ok(Term::Blank(fresh))
    }

    fn anon(&mut self) -> Result<Term, TurtleError> {
        self.expect_char('[')?;
        self.skip_trivia();
        if self.peek() == Some(']') {
            self.bump();
            Ok(Term::Blank(fresh_blank()))
        } else {
            Err(self.syntax("property lists inside '[' ... ']' are not supported".into()))
        }
    }

    fn quoted_literal(&mut self) -> Result<Term, TurtleError> {
        let lexical = if self.lookahead_is("\"\"\"") {
            self.read_long_string()?
        } else {
            self.read_short_string()?
        };
        match self.peek() {
            Some('@') => {
                self.bump();
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        self.bump();
                    } else {
                        break;
                    }
                }
                if self.pos == start {
                    return Err(self.syntax("empty language tag".into()));
                }
                let tag: String = self.chars[start..self.pos].iter().collect();
                Ok(Term::lang(lexical, tag))
            }
            Some('^') => {
                self.expect_char('^')?;
                self.expect_char('^')?;
                let datatype = match self.peek() {
                    Some('<') => self.read_iri_ref()?,
                    _ => self.prefixed_name()?.0,
                };
                Ok(Term::typed(lexical, datatype))
            }
            _ => Ok(Term::string(lexical)),
        }
    }

    fn numeric_literal(&mut self) -> Result<Term, TurtleError> {
        let start = self.pos;
        if matches!(self.peek(), Some('+') | Some('-')) {
            self.bump();
        }
        let mut saw_digit = false;
        let mut saw_dot = false;
        let mut saw_exp = false;
        while let Some(c) = self.peek() {
            match c {
                '0'..='9' => {
                    saw_digit = true;
                    self.bump();
                }
                '.' if !saw_dot && !saw_exp => {
                    // The statement terminator: "12." ends the number.
                    let next = self.chars.get(self.pos + 1);
                    if !matches!(next, Some('0'..='9')) {
                        break;
                    }
                    saw_dot = true;
                    self.bump();
                }
                'e' | 'E' if saw_digit && !saw_exp => {
                    saw_exp = true;
                    self.bump();
                    if matches!(self.peek(), Some('+') | Some('-')) {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        if !saw_digit {
            return Err(self.syntax("malformed numeric literal".into()));
        }
        let lexical: String = self.chars[start..self.pos].iter().collect();
        let datatype = if saw_exp {
            vocab::XSD_DOUBLE
        } else if saw_dot {
            vocab::XSD_DECIMAL
        } else {
            vocab::XSD_INTEGER
        };
        Ok(Term::typed(lexical, datatype))
    }

    fn read_short_string(&mut self) -> Result<String, TurtleError> {
        self.expect_char('"')?;
        let mut out = String::new();
        loop {
            match self.peek() {
                Some('"') => {
                    self.bump();
                    return Ok(out);
                }
                Some('\\') => {
                    self.bump();
                    out.push(self.escape_char()?);
                }
                Some('\n') | None => {
                    return Err(self.syntax("unterminated string literal".into()));
                }
                Some(c) => {
                    self.bump();
                    out.push(c);
                }
            }
        }
    }

    fn read_long_string(&mut self) -> Result<String, TurtleError> {
        for _ in 0..3 {
            self.expect_char('"')?;
        }
        let mut out = String::new();
        loop {
            if self.lookahead_is("\"\"\"") {
                for _ in 0..3 {
                    self.bump();
                }
                return Ok(out);
            }
            match self.peek() {
                Some('\\') => {
                    self.bump();
                    out.push(self.escape_char()?);
                }
                None => return Err(self.syntax("unterminated long string literal".into())),
                Some(c) => {
                    self.bump();
                    out.push(c);
                }
            }
        }
    }

    fn escape_char(&mut self) -> Result<char, TurtleError> {
        let c = self.peek().ok_or_else(|| self.syntax("dangling escape".into()))?;
        self.bump();
        match c {
            't' => Ok('\t'),
            'b' => Ok('\u{8}'),
            'n' => Ok('\n'),
            'r' => Ok('\r'),
            'f' => Ok('\u{c}'),
            '"' => Ok('"'),
            '\'' => Ok('\''),
            '\\' => Ok('\\'),
            'u' => self.unicode_escape(4),
            'U' => self.unicode_escape(8),
            other => Err(self.syntax(format!("unknown escape '\\{other}'"))),
        }
    }

    fn unicode_escape(&mut self, len: usize) -> Result<char, TurtleError> {
        let mut value = 0u32;
        for _ in 0..len {
            let c = self.peek().ok_or_else(|| self.syntax("truncated unicode escape".into()))?;
            let digit = c
                .to_digit(16)
                .ok_or_else(|| self.syntax(format!("bad hex digit '{c}' in unicode escape")))?;
            value = value * 16 + digit;
            self.bump();
        }
        char::from_u32(value).ok_or_else(|| self.syntax(format!("invalid code point U+{value:X}")))
    }

    fn read_iri_ref(&mut self) -> Result<String, TurtleError> {
        self.expect_char('<')?;
        let mut out = String::new();
        loop {
            match self.peek() {
                Some('>') => {
                    self.bump();
                    break;
                }
                Some('\\') => {
                    self.bump();
                    match self.peek() {
                        Some('u') => {
                            self.bump();
                            out.push(self.unicode_escape(4)?);
                        }
                        Some('U') => {
                            self.bump();
                            out.push(self.unicode_escape(8)?);
                        }
                        _ => return Err(self.syntax("only \\u and \\U escapes are allowed in IRIs".into())),
                    }
                }
                Some(c) if c.is_whitespace() => {
                    return Err(self.syntax("whitespace inside IRI".into()));
                }
                Some(c) if c == '<' || c == '"' => {
                    return Err(self.syntax(format!("'{c}' inside IRI")));
                }
                None => return Err(self.syntax("unterminated IRI".into())),
                Some(c) => {
                    self.bump();
                    out.push(c);
                }
            }
        }
        self.resolve_iri(out)
    }

    fn resolve_iri(&self, iri: String) -> Result<String, TurtleError> {
        if has_scheme(&iri) {
            return Ok(iri);
        }
        match &self.base {
            Some(base) => Ok(format!("{base}{iri}")),
            None => Err(self.syntax(format!("relative IRI <{iri}> without a base"))),
        }
    }

    fn prefixed_name(&mut self) -> Result<(String, String), TurtleError> {
        let (line, column) = (self.line, self.column);
        let label = self.read_prefix_label()?;
        self.expect_char(':')?;
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' || c == '.' {
                self.bump();
            } else {
                break;
            }
        }
        while self.pos > start && self.chars[self.pos - 1] == '.' {
            self.pos -= 1;
            self.column -= 1;
        }
        let local: String = self.chars[start..self.pos].iter().collect();
        match self.prefixes.expand(&label, &local) {
            Some(iri) => Ok((iri, label)),
            None => Err(TurtleError::UnknownPrefix { prefix: label, line, column }),
        }
    }

    fn read_prefix_label(&mut self) -> Result<String, TurtleError> {
        let start = self.pos;
        if let Some(c) = self.peek() {
            if c.is_alphabetic() {
                self.bump();
                while let Some(c) = self.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '-' || c == '.' {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn read_bare_word(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphabetic() {
                self.bump();
            } else {
                break;
            }
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn is_bare_a(&self) -> bool {
        self.peek() == Some('a')
            && !matches!(
                self.chars.get(self.pos + 1),
                Some(c) if c.is_alphanumeric() || *c == '_' || *c == '-' || *c == ':'
            )
    }

    fn at_keyword(&self, keyword: &str) -> bool {
        let mut i = self.pos;
        for expected in keyword.chars() {
            match self.chars.get(i) {
                Some(c) if c.eq_ignore_ascii_case(&expected) => i += 1,
                _ => return false,
            }
        }
        !matches!(
            self.chars.get(i),
            Some(c) if c.is_alphanumeric() || *c == '_' || *c == '-' || *c == ':'
        )
    }

    fn consume_keyword(&mut self, keyword: &str) {
        for _ in keyword.chars() {
            self.bump();
        }
    }

    fn lookahead_is(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.chars.get(self.pos + i) == Some(&c))
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += 1;
            if c == '\n' {
                self.line += 1;
                self.column = 1;
            } else {
                self.column += 1;
            }
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn expect_char(&mut self, expected: char) -> Result<(), TurtleError> {
        match self.peek() {
            Some(c) if c == expected => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.syntax(format!("expected '{expected}', found '{c}'"))),
            None => Err(self.syntax(format!("expected '{expected}', found end of input"))),
        }
    }

    fn syntax(&self, message: String) -> TurtleError {
        TurtleError::Syntax { line: self.line, column: self.column, message }
    }
}

fn has_scheme(iri: &str) -> bool {
    let mut chars = iri.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    for c in chars {
        match c {
            ':' => return true,
            c if c.is_ascii_alphanumeric() || c == '+' || c == '-' || c == '.' => {}
            _ => return false,
        }
    }
    false
}
