//! Slow reference evaluators used to cross-check the engine. These scan the
//! full statement list with no indexes, no join planning, and no shared
//! machinery with the production paths, so agreement is meaningful.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::sparql::{PatternTerm, Projection, QueryAst, QueryForm, TriplePattern};
use crate::{vocab, Graph, Term, Triple};

type Assignment = HashMap<String, Term>;

fn pattern_matches(pattern: &TriplePattern, triple: &Triple, assignment: &Assignment) -> Option<Assignment> {
    let mut next = assignment.clone();
    for (slot, actual) in [
        (&pattern.subject, &triple.subject),
        (&pattern.predicate, &triple.predicate),
        (&pattern.object, &triple.object),
    ] {
        match slot {
            PatternTerm::Term(expected) => {
                if expected != actual {
                    return None;
                }
            }
            PatternTerm::Var(name) => match next.get(name) {
                Some(bound) if bound != actual => return None,
                Some(_) => {}
                None => {
                    next.insert(name.clone(), actual.clone());
                }
            },
        }
    }
    Some(next)
}

fn all_assignments(triples: &[Triple], patterns: &[TriplePattern]) -> Vec<Assignment> {
    let mut partial = vec![Assignment::new()];
    for pattern in patterns {
        let mut next = Vec::new();
        for assignment in &partial {
            for triple in triples {
                if let Some(extended) = pattern_matches(pattern, triple, assignment) {
                    next.push(extended);
                }
            }
        }
        partial = next;
        if partial.is_empty() {
            break;
        }
    }
    partial
}

/// Exhaustive SELECT evaluation by trying every statement against every
/// pattern in written order. Returns the projected rows as a multiset
/// encoded as row -> multiplicity.
pub fn brute_force_select(graph: &Graph, ast: &QueryAst) -> BTreeMap<Vec<Option<Term>>, usize> {
    let QueryForm::Select(select) = &ast.form else {
        panic!("brute_force_select requires a SELECT query");
    };
    let triples: Vec<Triple> = graph.iter().collect();
    let mut assignments = all_assignments(&triples, &ast.patterns);

    for filter in &ast.filters {
        assignments.retain(|assignment| {
            assignment
                .get(&filter.variable)
                .and_then(Term::numeric_value)
                .is_some_and(|v| filter.comparator.test(v, filter.constant))
        });
    }

    let has_aggregate = select
        .projection
        .iter()
        .any(|p| matches!(p, Projection::Count { .. }));

    let mut rows: Vec<Vec<Option<Term>>> = if has_aggregate {
        let mut groups: BTreeMap<Vec<Option<Term>>, Vec<Assignment>> = BTreeMap::new();
        for assignment in assignments {
            let key: Vec<Option<Term>> = select
                .group_by
                .iter()
                .map(|v| assignment.get(v).cloned())
                .collect();
            groups.entry(key).or_default().push(assignment);
        }
        groups
            .into_iter()
            .map(|(key, members)| {
                select
                    .projection
                    .iter()
                    .map(|p| match p {
                        Projection::Var(v) => select
                            .group_by
                            .iter()
                            .position(|g| g == v)
                            .and_then(|i| key[i].clone()),
                        Projection::Count { distinct, variable, .. } => {
                            let count = if *distinct {
                                members
                                    .iter()
                                    .filter_map(|a| a.get(variable))
                                    .collect::<HashSet<_>>()
                                    .len()
                            } else {
                                members.iter().filter(|a| a.contains_key(variable)).count()
                            };
                            Some(Term::typed_literal(count.to_string(), vocab::XSD_INTEGER))
                        }
                    })
                    .collect()
            })
            .collect()
    } else {
        assignments
            .into_iter()
            .map(|assignment| {
                select
                    .projection
                    .iter()
                    .map(|p| match p {
                        Projection::Var(v) => assignment.get(v).cloned(),
                        Projection::Count { .. } => unreachable!(),
                    })
                    .collect()
            })
            .collect()
    };

    if select.distinct {
        let mut seen = HashSet::new();
        rows.retain(|row: &Vec<Option<Term>>| seen.insert(row.clone()));
    }

    let mut multiset = BTreeMap::new();
    for row in rows {
        *multiset.entry(row).or_insert(0) += 1;
    }
    multiset
}

/// Nodes reachable from each node over the given directed edges, excluding
/// the start node unless it lies on a cycle. Plain breadth-first search.
pub fn reachability(edges: &[(String, String)]) -> HashMap<String, HashSet<String>> {
    let mut adjacency: HashMap<&str, Vec<&str>> = HashMap::new();
    let mut nodes: HashSet<&str> = HashSet::new();
    for (from, to) in edges {
        adjacency.entry(from).or_default().push(to);
        nodes.insert(from);
        nodes.insert(to);
    }
    let mut result = HashMap::new();
    for &start in &nodes {
        let mut reached: HashSet<String> = HashSet::new();
        let mut queue: Vec<&str> = adjacency.get(start).cloned().unwrap_or_default();
        while let Some(node) = queue.pop() {
            if reached.insert(node.to_string()) {
                if let Some(next) = adjacency.get(node) {
                    queue.extend(next);
                }
            }
        }
        result.insert(start.to_string(), reached);
    }
    result
}

/// Expected materialized annotation set for one annotation predicate:
/// every (gene, concept) where the gene is annotated to some term from which
/// `concept` is reachable over broader edges (or is that term itself).
pub fn annotation_closure(
    annotations: &[(String, String)],
    broader_edges: &[(String, String)],
) -> HashSet<(String, String)> {
    let reach = reachability(broader_edges);
    let mut expected = HashSet::new();
    for (gene, term) in annotations {
        expected.insert((gene.clone(), term.clone()));
        if let Some(ancestors) = reach.get(term) {
            for ancestor in ancestors {
                expected.insert((gene.clone(), ancestor.clone()));
            }
        }
    }
    expected
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reachability_on_chain() {
        let edges = vec![
            ("a".to_string(), "b".to_string()),
            ("b".to_string(), "c".to_string()),
        ];
        let reach = reachability(&edges);
        assert_eq!(
            reach["a"],
            HashSet::from(["b".to_string(), "c".to_string()])
        );
        assert_eq!(reach["c"], HashSet::new());
    }

    #[test]
    fn closure_includes_direct_annotation() {
        let annotations = vec![("g".to_string(), "t".to_string())];
        let closure = annotation_closure(&annotations, &[]);
        assert_eq!(closure, HashSet::from([("g".to_string(), "t".to_string())]));
    }
}
