//! Parser for the query subset. Grammar (see docs/query-grammar.ebnf):
//!
//! ```text
//! query    = prologue "SELECT" var+ "WHERE" "{" element* "}" order? limit? ;
//! element  = pattern "."? | "FILTER" "(" operand cmp operand ")" "."? ;
//! order    = "ORDER" "BY" ( var | ("ASC"|"DESC") "(" var ")" ) ;
//! limit    = "LIMIT" integer ;
//! ```
//!
//! Prefixed names resolve against in-query PREFIX declarations merged over
//! the well-known namespace table.

use thiserror::Error;

use crate::connectors::CompareOp;
use crate::rdf::{PrefixMap, Term};
use crate::vocab;

use super::ast::{FilterExpr, Operand, OrderSpec, PatternTerm, SelectQuery, TriplePattern};

#[derive(Debug, Error)]
pub enum QueryParseError {
    #[error("query syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown prefix '{prefix}:' in query")]
    UnknownPrefix { prefix: String },
    #[error("variable ?{variable} is {place} but does not occur in the graph pattern")]
    UnboundVariable { variable: String, place: &'static str },
}

/// Parse a SELECT query, resolving prefixed names against the well-known
/// namespaces plus any PREFIX declarations in the text itself.
pub fn parse_query(text: &str) -> Result<SelectQuery, QueryParseError> {
    let mut parser = QueryParser {
        chars: text.chars().collect(),
        pos: 0,
        prefixes: PrefixMap::well_known(),
    };
    parser.query()
}

struct QueryParser {
    chars: Vec<char>,
    pos: usize,
    prefixes: PrefixMap,
}

impl QueryParser {
    fn query(&mut self) -> Result<SelectQuery, QueryParseError> {
        while self.at_keyword("PREFIX") {
            self.consume_keyword("PREFIX");
            self.skip_ws();
            let label = self.read_while(|c| c.is_alphanumeric() || c == '_' || c == '-');
            self.expect(':')?;
            self.skip_ws();
            let iri = self.iri_ref()?;
            self.prefixes.insert(label, iri);
            self.skip_ws();
        }

        self.expect_keyword("SELECT")?;
        let mut variables = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() == Some('?') {
                variables.push(self.variable()?);
            } else {
                break;
            }
        }
        if variables.is_empty() {
            return Err(self.syntax("SELECT needs at least one variable"));
        }

        self.expect_keyword("WHERE")?;
        self.skip_ws();
        self.expect('{')?;

        let mut patterns = Vec::new();
        let mut filters = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('}') => {
                    self.pos += 1;
                    break;
                }
                None => return Err(self.syntax("unterminated graph pattern")),
                _ => {
                    if self.at_keyword("FILTER") {
                        self.consume_keyword("FILTER");
                        filters.push(self.filter()?);
                    } else {
                        patterns.push(self.pattern()?);
                    }
                    self.skip_ws();
                    if self.peek() == Some('.') {
                        self.pos += 1;
                    }
                }
            }
        }

        self.skip_ws();
        let mut order = None;
        if self.at_keyword("ORDER") {
            self.consume_keyword("ORDER");
            self.skip_ws();
            self.expect_keyword("BY")?;
            self.skip_ws();
            order = Some(self.order_spec()?);
        }

        self.skip_ws();
        let mut limit = None;
        if self.at_keyword("LIMIT") {
            self.consume_keyword("LIMIT");
            self.skip_ws();
            let digits = self.read_while(|c| c.is_ascii_digit());
            if digits.is_empty() {
                return Err(self.syntax("LIMIT needs an integer"));
            }
            limit = Some(digits.parse().map_err(|_| self.syntax("LIMIT out of range"))?);
        }

        self.skip_ws();
        if !self.at_end() {
            return Err(self.syntax("trailing input after query"));
        }

        let query = SelectQuery { variables, patterns, filters, order, limit };
        validate_query(&query)?;
        Ok(query)
    }

    fn order_spec(&mut self) -> Result<OrderSpec, QueryParseError> {
        if self.at_keyword("ASC") || self.at_keyword("DESC") {
            let descending = self.at_keyword("DESC");
            self.consume_keyword(if descending { "DESC" } else { "ASC" });
            self.skip_ws();
            self.expect('(')?;
            self.skip_ws();
            let variable = self.variable()?;
            self.skip_ws();
            self.expect(')')?;
            Ok(OrderSpec { variable, descending })
        } else if self.peek() == Some('?') {
            Ok(OrderSpec { variable: self.variable()?, descending: false })
        } else {
            Err(self.syntax("expected ?var, ASC(?var) or DESC(?var) after ORDER BY"))
        }
    }

    fn filter(&mut self) -> Result<FilterExpr, QueryParseError> {
        self.skip_ws();
        self.expect('(')?;
        self.skip_ws();
        let left = self.operand()?;
        self.skip_ws();
        let op = self.compare_op()?;
        self.skip_ws();
        let right = self.operand()?;
        self.skip_ws();
        self.expect(')')?;
        Ok(FilterExpr { left, op, right })
    }

    fn compare_op(&mut self) -> Result<CompareOp, QueryParseError> {
        let op = match (self.peek(), self.chars.get(self.pos + 1).copied()) {
            (Some('!'), Some('=')) => {
                self.pos += 2;
                CompareOp::Ne
            }
            (Some('<'), Some('=')) => {
                self.pos += 2;
                CompareOp::Le
            }
            (Some('>'), Some('=')) => {
                self.pos += 2;
                CompareOp::Ge
            }
            (Some('<'), _) => {
                self.pos += 1;
                CompareOp::Lt
            }
            (Some('>'), _) => {
                self.pos += 1;
                CompareOp::Gt
            }
            (Some('='), _) => {
                self.pos += 1;
                CompareOp::Eq
            }
            _ => return Err(self.syntax("expected comparison operator")),
        };
        Ok(op)
    }

    fn operand(&mut self) -> Result<Operand, QueryParseError> {
        match self.peek() {
            Some('?') => Ok(Operand::Var(self.variable()?)),
            _ => Ok(Operand::Term(self.term()?)),
        }
    }

    fn pattern(&mut self) -> Result<TriplePattern, QueryParseError> {
        let subject = self.pattern_term(false)?;
        self.skip_ws();
        let predicate = self.pattern_term(true)?;
        self.skip_ws();
        let object = self.pattern_term(false)?;
        if let PatternTerm::Term(term) = &predicate {
            if !term.is_iri() {
                return Err(self.syntax("pattern predicate must be an IRI or a variable"));
            }
        }
        Ok(TriplePattern { subject, predicate, object })
    }

    fn pattern_term(&mut self, predicate_position: bool) -> Result<PatternTerm, QueryParseError> {
        self.skip_ws();
        if self.peek() == Some('?') {
            return Ok(PatternTerm::Var(self.variable()?));
        }
        if predicate_position && self.peek() == Some('a') && !self.is_name_char(self.pos + 1) {
            self.pos += 1;
            return Ok(PatternTerm::Term(Term::iri(vocab::RDF_TYPE)));
        }
        Ok(PatternTerm::Term(self.term()?))
    }

    fn term(&mut self) -> Result<Term, QueryParseError> {
        match self.peek() {
            Some('<') => Ok(Term::iri(self.iri_ref()?)),
            Some('"') => self.literal(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => self.numeric(),
            Some(c) if c.is_alphabetic() || c == ':' || c == '_' => {
                if self.at_keyword("true") || self.at_keyword("false") {
                    let word = self.read_while(|c| c.is_ascii_alphabetic());
                    return Ok(Term::typed(word, vocab::XSD_BOOLEAN));
                }
                self.prefixed_name()
            }
            Some(c) => Err(self.syntax(&format!("unexpected character '{c}'"))),
            None => Err(self.syntax("unexpected end of query")),
        }
    }

    fn literal(&mut self) -> Result<Term, QueryParseError> {
        self.expect('"')?;
        let mut lexical = String::new();
        loop {
            match self.peek() {
                Some('"') => {
                    self.pos += 1;
                    break;
                }
                Some('\\') => {
                    self.pos += 1;
                    match self.peek() {
                        Some('n') => lexical.push('\n'),
                        Some('t') => lexical.push('\t'),
                        Some('r') => lexical.push('\r'),
                        Some('"') => lexical.push('"'),
                        Some('\\') => lexical.push('\\'),
                        _ => return Err(self.syntax("unknown escape in literal")),
                    }
                    self.pos += 1;
                }
                Some(c) => {
                    lexical.push(c);
                    self.pos += 1;
                }
                None => return Err(self.syntax("unterminated literal")),
            }
        }
        match self.peek() {
            Some('@') => {
                self.pos += 1;
                let tag = self.read_while(|c| c.is_ascii_alphanumeric() || c == '-');
                Ok(Term::lang(lexical, tag))
            }
            Some('^') => {
                self.expect('^')?;
                self.expect('^')?;
                let datatype = match self.peek() {
                    Some('<') => self.iri_ref()?,
                    _ => match self.prefixed_name()? {
                        Term::Iri(iri) => iri,
                        _ => unreachable!("prefixed_name returns IRIs"),
                    },
                };
                Ok(Term::typed(lexical, datatype))
            }
            _ => Ok(Term::string(lexical)),
        }
    }

    fn numeric(&mut self) -> Result<Term, QueryParseError> {
        let start = self.pos;
        if matches!(self.peek(), Some('+') | Some('-')) {
            self.pos += 1;
        }
        let digits = self.read_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.syntax("malformed number"));
        }
        let mut datatype = vocab::XSD_INTEGER;
        if self.peek() == Some('.') && matches!(self.chars.get(self.pos + 1), Some('0'..='9')) {
            self.pos += 1;
            self.read_while(|c| c.is_ascii_digit());
            datatype = vocab::XSD_DECIMAL;
        }
        let lexical: String = self.chars[start..self.pos].iter().collect();
        Ok(Term::typed(lexical, datatype))
    }

    fn prefixed_name(&mut self) -> Result<Term, QueryParseError> {
        let label = self.read_while(|c| c.is_alphanumeric() || c == '_' || c == '-');
        self.expect(':')?;
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' || c == '/' || c == '.' {
                self.pos += 1;
            } else {
                break;
            }
        }
        while self.pos > start && self.chars[self.pos - 1] == '.' {
            self.pos -= 1;
        }
        let local: String = self.chars[start..self.pos].iter().collect();
        match self.prefixes.expand(&label, &local) {
            Some(iri) => Ok(Term::iri(iri)),
            None => Err(QueryParseError::UnknownPrefix { prefix: label }),
        }
    }

    fn iri_ref(&mut self) -> Result<String, QueryParseError> {
        self.expect('<')?;
        let mut iri = String::new();
        loop {
            match self.peek() {
                Some('>') => {
                    self.pos += 1;
                    return Ok(iri);
                }
                Some(c) if c.is_whitespace() => return Err(self.syntax("whitespace inside IRI")),
                Some(c) => {
                    iri.push(c);
                    self.pos += 1;
                }
                None => return Err(self.syntax("unterminated IRI")),
            }
        }
    }

    fn variable(&mut self) -> Result<String, QueryParseError> {
        self.expect('?')?;
        let name = self.read_while(|c| c.is_alphanumeric() || c == '_');
        if name.is_empty() {
            return Err(self.syntax("empty variable name"));
        }
        Ok(name)
    }

    fn read_while(&mut self, predicate: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if predicate(c) {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn is_name_char(&self, pos: usize) -> bool {
        matches!(self.chars.get(pos), Some(c) if c.is_alphanumeric() || *c == '_' || *c == '-' || *c == ':')
    }

    fn at_keyword(&self, keyword: &str) -> bool {
        let mut i = self.pos;
        for expected in keyword.chars() {
            match self.chars.get(i) {
                Some(c) if c.eq_ignore_ascii_case(&expected) => i += 1,
                _ => return false,
            }
        }
        !self.is_name_char(i)
    }

    fn consume_keyword(&mut self, keyword: &str) {
        self.pos += keyword.len();
    }

    fn expect_keyword(&mut self, keyword: &str) -> Result<(), QueryParseError> {
        self.skip_ws();
        if self.at_keyword(keyword) {
            self.consume_keyword(keyword);
            Ok(())
        } else {
            Err(self.syntax(&format!("expected {keyword}")))
        }
    }

    fn expect(&mut self, expected: char) -> Result<(), QueryParseError> {
        if self.peek() == Some(expected) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected '{expected}'")))
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += 1;
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn syntax(&self, message: &str) -> QueryParseError {
        QueryParseError::Syntax { offset: self.pos, message: message.to_owned() }
    }
}

/// Every projected, ordering and filtered variable must occur in the BGP.
fn validate_query(query: &SelectQuery) -> Result<(), QueryParseError> {
    let bgp_vars: std::collections::BTreeSet<&str> =
        query.patterns.iter().flat_map(|p| p.variables()).collect();
    for variable in &query.variables {
        if !bgp_vars.contains(variable.as_str()) {
            return Err(QueryParseError::UnboundVariable {
                variable: variable.clone(),
                place: "projected",
            });
        }
    }
    if let Some(order) = &query.order {
        if !bgp_vars.contains(order.variable.as_str()) {
            return Err(QueryParseError::UnboundVariable {
                variable: order.variable.clone(),
                place: "used in ORDER BY",
            });
        }
    }
    for filter in &query.filters {
        for variable in filter.variables() {
            if !bgp_vars.contains(variable) {
                return Err(QueryParseError::UnboundVariable {
                    variable: variable.to_owned(),
                    place: "used in FILTER",
                });
            }
        }
    }
    Ok(())
}
