//! Virtual evaluation: rewrite a basic graph pattern into scans over the
//! mapped sources and evaluate it there, without materializing a store.
//!
//! The contract checked by the test suite: for any query whose predicates
//! are all mapped, the virtual solution multiset equals `evaluate()` of the
//! same query against a store freshly materialized from the same rules and
//! sources. Virtual evaluation sees no ontology schema, so no inference
//! applies on this path; closure-dependent questions run materialized only.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::connectors::{CompareOp, ConnectorError, SourceDescriptor, SourceRows};
use crate::mapping::{IriTemplate, MappingRule, ObjectSpec};
use crate::rdf::Term;
use crate::vocab;

use super::ast::{Operand, SelectQuery, SolutionRow};
use super::eval::{filter_compare, finish_bindings};

#[derive(Debug, Error)]
pub enum RewriteError {
    #[error("predicate {0} is not produced by any mapping rule")]
    UnmappablePredicate(String),
    #[error("variable predicates are not supported on the virtual path")]
    VariablePredicate,
    #[error(transparent)]
    Connector(#[from] ConnectorError),
}

/// Column equality derived from matching a constant IRI against a subject
/// or object template; values live in rendered-component space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnEquality {
    pub column: String,
    pub component: String,
}

/// A filter pushed down to a scan because the filtered variable maps to a
/// source column of the route.
#[derive(Debug, Clone)]
pub struct PushedFilter {
    pub column: String,
    pub op: CompareOp,
    pub constant: Term,
}

#[derive(Debug, Clone)]
pub enum RouteObject {
    /// rdf:type assertion of the rule's class.
    Class(String),
    /// Object built by a predicate-object map.
    Spec(ObjectSpec),
}

/// One way a pattern can be answered: a scan of `source_id` through
/// `rule_id`'s templates.
#[derive(Debug, Clone)]
pub struct ScanRoute {
    pub rule_id: String,
    pub source_id: String,
    pub subject_template: IriTemplate,
    pub object: RouteObject,
    pub column_equalities: Vec<ColumnEquality>,
    pub pushed_filters: Vec<PushedFilter>,
}

#[derive(Debug, Clone)]
pub struct PatternPlan {
    pub pattern_index: usize,
    pub routes: Vec<ScanRoute>,
}

/// The rewritten query: per-pattern source scans joined on shared variables,
/// with residual filters, ordering and limit applied after the join.
#[derive(Debug, Clone)]
pub struct VirtualPlan {
    pub query: SelectQuery,
    pub patterns: Vec<PatternPlan>,
}

/// Rewrite a query against the mapping rules. Every pattern predicate must
/// be `rdf:type` or appear in some rule's predicate-object maps; otherwise
/// the rewrite fails naming the predicate. A type pattern whose class no
/// rule produces simply yields an empty scan.
pub fn rewrite_virtual(
    query: &SelectQuery,
    rules: &[MappingRule],
    sources: &[SourceDescriptor],
) -> Result<VirtualPlan, RewriteError> {
    let mut patterns = Vec::with_capacity(query.patterns.len());
    for (pattern_index, pattern) in query.patterns.iter().enumerate() {
        let Some(predicate) = pattern.predicate.as_term() else {
            return Err(RewriteError::VariablePredicate);
        };
        let predicate = predicate.as_iri().ok_or(RewriteError::VariablePredicate)?;

        let mut routes = Vec::new();
        if predicate == vocab::RDF_TYPE {
            for rule in rules {
                let Some(class) = &rule.class else { continue };
                if let Some(wanted) = pattern.object.as_term() {
                    if wanted.as_iri() != Some(class.as_str()) {
                        continue;
                    }
                }
                push_route(&mut routes, rule, sources, RouteObject::Class(class.clone()), pattern, query);
            }
        } else {
            let mut mapped_anywhere = false;
            for rule in rules {
                for pom in rule.poms.iter().filter(|pom| pom.predicate == predicate) {
                    mapped_anywhere = true;
                    push_route(
                        &mut routes,
                        rule,
                        sources,
                        RouteObject::Spec(pom.object.clone()),
                        pattern,
                        query,
                    );
                }
            }
            if !mapped_anywhere {
                return Err(RewriteError::UnmappablePredicate(predicate.to_owned()));
            }
        }
        patterns.push(PatternPlan { pattern_index, routes });
    }
    Ok(VirtualPlan { query: query.clone(), patterns })
}

fn push_route(
    routes: &mut Vec<ScanRoute>,
    rule: &MappingRule,
    sources: &[SourceDescriptor],
    object: RouteObject,
    pattern: &super::ast::TriplePattern,
    query: &SelectQuery,
) {
    let Some(source) = sources.iter().find(|s| s.id == rule.source) else {
        return;
    };

    let mut column_equalities = Vec::new();
    // A constant subject narrows the scan to the rows whose rendered
    // subject-template components match it.
    if let Some(Term::Iri(subject_iri)) = pattern.subject.as_term() {
        match rule.subject_template.reverse_match(subject_iri) {
            Some(pairs) => {
                for (column, component) in pairs {
                    column_equalities
                        .push(ColumnEquality { column: column.to_owned(), component: component.to_owned() });
                }
            }
            // This rule can never mint that subject.
            None => return,
        }
    }
    // Same for a constant object built from an IRI template.
    if let (Some(Term::Iri(object_iri)), RouteObject::Spec(ObjectSpec::IriTemplate(template))) =
        (pattern.object.as_term(), &object)
    {
        match template.reverse_match(object_iri) {
            Some(pairs) => {
                for (column, component) in pairs {
                    column_equalities
                        .push(ColumnEquality { column: column.to_owned(), component: component.to_owned() });
                }
            }
            None => return,
        }
    }

    // Push filters whose variable is this pattern's object and whose route
    // reads the object from a plain column.
    let mut pushed_filters = Vec::new();
    if let (Some(object_var), RouteObject::Spec(ObjectSpec::Column { column, .. })) =
        (pattern.object.as_var(), &object)
    {
        for filter in &query.filters {
            let normalized = match (&filter.left, &filter.right) {
                (Operand::Var(v), Operand::Term(t)) if v == object_var => {
                    Some((filter.op, t.clone()))
                }
                (Operand::Term(t), Operand::Var(v)) if v == object_var => {
                    Some((flip(filter.op), t.clone()))
                }
                _ => None,
            };
            if let Some((op, constant)) = normalized {
                pushed_filters.push(PushedFilter { column: column.clone(), op, constant });
            }
        }
    }

    routes.push(ScanRoute {
        rule_id: rule.rule_id.clone(),
        source_id: source.id.clone(),
        subject_template: rule.subject_template.clone(),
        object,
        column_equalities,
        pushed_filters,
    });
}

fn flip(op: CompareOp) -> CompareOp {
    match op {
        CompareOp::Lt => CompareOp::Gt,
        CompareOp::Le => CompareOp::Ge,
        CompareOp::Gt => CompareOp::Lt,
        CompareOp::Ge => CompareOp::Le,
        other => other,
    }
}

/// Execute the plan: scan each pattern's routes, dedup the generated
/// (subject, object) pairs per pattern (the store's set semantics), join on
/// shared variables, then apply filters, ordering, limit and projection.
pub fn evaluate_virtual(
    plan: &VirtualPlan,
    sources: &[SourceDescriptor],
) -> Result<Vec<SolutionRow>, RewriteError> {
    let mut cache: HashMap<&str, SourceRows> = HashMap::new();
    for pattern_plan in &plan.patterns {
        for route in &pattern_plan.routes {
            if !cache.contains_key(route.source_id.as_str()) {
                let descriptor = sources
                    .iter()
                    .find(|s| s.id == route.source_id)
                    .ok_or_else(|| ConnectorError::InvalidDescriptor(route.source_id.clone()))?;
                cache.insert(route.source_id.as_str(), descriptor.read()?);
            }
        }
    }

    let mut per_pattern: Vec<Vec<BTreeMap<String, Term>>> = Vec::with_capacity(plan.patterns.len());
    for pattern_plan in &plan.patterns {
        let pattern = &plan.query.patterns[pattern_plan.pattern_index];
        let mut matched: BTreeSet<(Term, Term)> = BTreeSet::new();
        for route in &pattern_plan.routes {
            let rows = &cache[route.source_id.as_str()];
            'rows: for row in &rows.rows {
                for equality in &route.column_equalities {
                    if !IriTemplate::component_matches(row.get(&equality.column), &equality.component) {
                        continue 'rows;
                    }
                }
                let Some(subject_iri) = route.subject_template.render(row) else {
                    continue;
                };
                let subject = Term::iri(subject_iri);
                if let Some(wanted) = pattern.subject.as_term() {
                    if *wanted != subject {
                        continue;
                    }
                }
                let object = match &route.object {
                    RouteObject::Class(class) => Term::iri(class),
                    RouteObject::Spec(spec) => match spec.make_term(row) {
                        Some(term) => term,
                        None => continue,
                    },
                };
                if let Some(wanted) = pattern.object.as_term() {
                    if *wanted != object {
                        continue;
                    }
                }
                for pushed in &route.pushed_filters {
                    if !filter_compare(pushed.op, &object, &pushed.constant) {
                        continue 'rows;
                    }
                }
                matched.insert((subject, object));
            }
        }

        let mut bindings = Vec::with_capacity(matched.len());
        for (subject, object) in matched {
            let mut binding = BTreeMap::new();
            if let Some(v) = pattern.subject.as_var() {
                binding.insert(v.to_owned(), subject.clone());
            }
            if let Some(v) = pattern.object.as_var() {
                match binding.get(v) {
                    Some(existing) if *existing != object => continue,
                    _ => {
                        binding.insert(v.to_owned(), object);
                    }
                }
            }
            bindings.push(binding);
        }
        per_pattern.push(bindings);
    }

    // Join smallest-first to keep intermediate results small.
    per_pattern.sort_by_key(Vec::len);
    let mut solutions: Vec<BTreeMap<String, Term>> = vec![BTreeMap::new()];
    for pattern_bindings in per_pattern {
        let mut next = Vec::new();
        for solution in &solutions {
            for binding in &pattern_bindings {
                if let Some(merged) = merge_compatible(solution, binding) {
                    next.push(merged);
                }
            }
        }
        solutions = next;
        if solutions.is_empty() {
            break;
        }
    }

    Ok(finish_bindings(&plan.query, solutions))
}

fn merge_compatible(
    a: &BTreeMap<String, Term>,
    b: &BTreeMap<String, Term>,
) -> Option<BTreeMap<String, Term>> {
    let mut merged = a.clone();
    for (var, term) in b {
        match merged.get(var) {
            Some(existing) if existing != term => return None,
            Some(_) => {}
            None => {
                merged.insert(var.clone(), term.clone());
            }
        }
    }
    Some(merged)
}
