//! BGP evaluation over a triple store, bag semantics.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use chrono::{DateTime, Utc};

use crate::connectors::{parse_timestamp, CompareOp};
use crate::rdf::{Term, TripleStore};
use crate::vocab;

use super::ast::{FilterExpr, Operand, PatternTerm, SelectQuery, SolutionRow, TriplePattern};

/// Evaluate a query against a store (pass the closure's combined store for
/// inference-aware evaluation). Join order is chosen greedily by ascending
/// estimated pattern selectivity: patterns with more bound positions first,
/// index cardinality as the tie-breaker; variables bound by earlier patterns
/// count as bound. The result is a bag; its order is unspecified unless the
/// query carries ORDER BY.
pub fn evaluate(store: &TripleStore, query: &SelectQuery) -> Vec<SolutionRow> {
    let order = plan_order(store, &query.patterns);
    let mut bindings: Vec<BTreeMap<String, Term>> = vec![BTreeMap::new()];
    for &index in &order {
        let pattern = &query.patterns[index];
        let mut next = Vec::new();
        for binding in &bindings {
            extend_matches(store, pattern, binding, &mut next);
        }
        bindings = next;
        if bindings.is_empty() {
            break;
        }
    }

    finish_bindings(query, bindings)
}

/// Shared tail of both evaluation paths: filters, ORDER BY, LIMIT and
/// projection over raw variable bindings.
pub(super) fn finish_bindings(
    query: &SelectQuery,
    bindings: Vec<BTreeMap<String, Term>>,
) -> Vec<SolutionRow> {
    let mut rows: Vec<BTreeMap<String, Term>> = bindings
        .into_iter()
        .filter(|b| query.filters.iter().all(|f| eval_filter(f, b)))
        .collect();

    if let Some(order) = &query.order {
        rows.sort_by(|a, b| {
            let left = a.get(&order.variable);
            let right = b.get(&order.variable);
            let ordering = compare_for_sort(left, right);
            if order.descending {
                ordering.reverse()
            } else {
                ordering
            }
        });
    }
    if let Some(limit) = query.limit {
        rows.truncate(limit);
    }

    rows.into_iter()
        .map(|binding| {
            let projected: BTreeMap<String, Term> = query
                .variables
                .iter()
                .filter_map(|v| binding.get(v).map(|t| (v.clone(), t.clone())))
                .collect();
            SolutionRow::new(projected)
        })
        .collect()
}

/// Greedy join order: repeatedly pick the remaining pattern with the highest
/// bound-position count (counting variables bound so far), breaking ties by
/// the store cardinality of its constant positions.
fn plan_order(store: &TripleStore, patterns: &[TriplePattern]) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..patterns.len()).collect();
    let mut bound_vars: Vec<String> = Vec::new();
    let mut order = Vec::with_capacity(patterns.len());
    while !remaining.is_empty() {
        let best = remaining
            .iter()
            .copied()
            .min_by_key(|&i| {
                let p = &patterns[i];
                let bound = [&p.subject, &p.predicate, &p.object]
                    .into_iter()
                    .filter(|t| {
                        t.as_term().is_some()
                            || t.as_var().is_some_and(|v| bound_vars.iter().any(|b| b == v))
                    })
                    .count();
                let cardinality = store.count_matches(
                    p.subject.as_term(),
                    p.predicate.as_term(),
                    p.object.as_term(),
                );
                (3 - bound, cardinality)
            })
            .expect("remaining is non-empty");
        remaining.retain(|&i| i != best);
        bound_vars.extend(patterns[best].variables().map(str::to_owned));
        order.push(best);
    }
    order
}

fn extend_matches(
    store: &TripleStore,
    pattern: &TriplePattern,
    binding: &BTreeMap<String, Term>,
    out: &mut Vec<BTreeMap<String, Term>>,
) {
    let resolve = |slot: &PatternTerm| -> Option<Term> {
        match slot {
            PatternTerm::Term(t) => Some(t.clone()),
            PatternTerm::Var(v) => binding.get(v).cloned(),
        }
    };
    let s = resolve(&pattern.subject);
    let p = resolve(&pattern.predicate);
    let o = resolve(&pattern.object);

    for triple in store.match_pattern(s.as_ref(), p.as_ref(), o.as_ref()) {
        let mut extended = binding.clone();
        let mut ok = true;
        for (slot, value) in [
            (&pattern.subject, triple.subject),
            (&pattern.predicate, triple.predicate),
            (&pattern.object, triple.object),
        ] {
            if let PatternTerm::Var(v) = slot {
                match extended.get(v) {
                    Some(existing) if *existing != value => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        extended.insert(v.clone(), value);
                    }
                }
            }
        }
        if ok {
            out.push(extended);
        }
    }
}

/// Typed view of a term for comparison purposes.
#[derive(Debug, Clone, PartialEq)]
enum TypedValue {
    Number(f64),
    DateTime(DateTime<Utc>),
    String(String),
    LangString(String, String),
    Boolean(bool),
    Iri(String),
    Blank(String),
    Opaque(String, String),
}

fn typed_value(term: &Term) -> TypedValue {
    match term {
        Term::Iri(iri) => TypedValue::Iri(iri.clone()),
        Term::Blank(label) => TypedValue::Blank(label.clone()),
        Term::Literal(lit) => {
            if let Some(tag) = lit.language() {
                return TypedValue::LangString(lit.lexical().to_owned(), tag.to_owned());
            }
            match lit.datatype() {
                vocab::XSD_INTEGER | vocab::XSD_DECIMAL | vocab::XSD_DOUBLE => {
                    match lit.lexical().parse::<f64>() {
                        Ok(v) if v.is_finite() => TypedValue::Number(v),
                        _ => TypedValue::Opaque(lit.lexical().to_owned(), lit.datatype().to_owned()),
                    }
                }
                vocab::XSD_DATE_TIME => match parse_timestamp(lit.lexical()) {
                    Some(ts) => TypedValue::DateTime(ts),
                    None => TypedValue::Opaque(lit.lexical().to_owned(), lit.datatype().to_owned()),
                },
                vocab::XSD_BOOLEAN => match lit.lexical() {
                    "true" | "1" => TypedValue::Boolean(true),
                    "false" | "0" => TypedValue::Boolean(false),
                    _ => TypedValue::Opaque(lit.lexical().to_owned(), lit.datatype().to_owned()),
                },
                vocab::XSD_STRING => TypedValue::String(lit.lexical().to_owned()),
                other => TypedValue::Opaque(lit.lexical().to_owned(), other.to_owned()),
            }
        }
    }
}

/// Comparison semantics for FILTER: numbers compare numerically (integer
/// promotes to decimal), xsd:dateTime chronologically, strings and IRIs
/// byte-wise. Incomparable operands yield `None` and the filter drops the
/// row.
pub(super) fn compare_terms(left: &Term, right: &Term) -> Option<Ordering> {
    match (typed_value(left), typed_value(right)) {
        (TypedValue::Number(a), TypedValue::Number(b)) => a.partial_cmp(&b),
        (TypedValue::DateTime(a), TypedValue::DateTime(b)) => Some(a.cmp(&b)),
        (TypedValue::String(a), TypedValue::String(b)) => Some(a.cmp(&b)),
        (TypedValue::Boolean(a), TypedValue::Boolean(b)) => Some(a.cmp(&b)),
        (TypedValue::Iri(a), TypedValue::Iri(b)) => Some(a.cmp(&b)),
        (TypedValue::LangString(a, at), TypedValue::LangString(b, bt)) => {
            Some((at, a).cmp(&(bt, b)))
        }
        (TypedValue::Opaque(a, adt), TypedValue::Opaque(b, bdt)) if adt == bdt => Some(a.cmp(&b)),
        _ => None,
    }
}

/// Total order used by ORDER BY: unbound first, then by kind (blanks, IRIs,
/// literals), then by the comparison above, falling back to the display
/// form so the order is always deterministic.
fn compare_for_sort(left: Option<&Term>, right: Option<&Term>) -> Ordering {
    match (left, right) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(l), Some(r)) => {
            let rank = |t: &Term| match t {
                Term::Blank(_) => 0,
                Term::Iri(_) => 1,
                Term::Literal(_) => 2,
            };
            rank(l)
                .cmp(&rank(r))
                .then_with(|| compare_terms(l, r).unwrap_or(Ordering::Equal))
                .then_with(|| l.to_string().cmp(&r.to_string()))
        }
    }
}

fn eval_filter(filter: &FilterExpr, binding: &BTreeMap<String, Term>) -> bool {
    let resolve = |operand: &Operand| -> Option<Term> {
        match operand {
            Operand::Term(t) => Some(t.clone()),
            Operand::Var(v) => binding.get(v).cloned(),
        }
    };
    let (Some(left), Some(right)) = (resolve(&filter.left), resolve(&filter.right)) else {
        return false;
    };
    filter_compare(filter.op, &left, &right)
}

/// The one comparison rule both evaluation paths share: typed comparison
/// where a shared order exists; equality and inequality fall back to plain
/// term identity for operands without one (e.g. IRI vs literal).
pub(super) fn filter_compare(op: CompareOp, left: &Term, right: &Term) -> bool {
    match compare_terms(left, right) {
        Some(ordering) => op.matches(ordering),
        None => match op {
            CompareOp::Eq => left == right,
            CompareOp::Ne => left != right,
            _ => false,
        },
    }
}
