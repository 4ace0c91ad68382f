use std::collections::HashSet;

use crate::Graph;

use super::{PatternTerm, TriplePattern};

/// Greedy join-order selection: repeatedly schedule the pattern with the
/// smallest estimated cardinality given the variables bound so far, breaking
/// ties by original pattern order. Returns a permutation of pattern indexes.
pub fn plan_bgp(patterns: &[TriplePattern], graph: &Graph) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..patterns.len()).collect();
    let mut bound: HashSet<&str> = HashSet::new();
    let mut plan = Vec::with_capacity(patterns.len());

    while !remaining.is_empty() {
        let &idx = remaining
            .iter()
            .min_by_key(|&&idx| estimate(&patterns[idx], graph, &bound))
            .expect("remaining nonempty");
        plan.push(idx);
        bound.extend(patterns[idx].variables());
        remaining.retain(|&i| i != idx);
    }
    plan
}

/// Index-count estimate for one pattern. Constant positions use the store's
/// exact counts; already-bound variables shrink the estimate (their binding
/// will act as a constant at execution time, value unknown at planning time).
fn estimate(pattern: &TriplePattern, graph: &Graph, bound: &HashSet<&str>) -> usize {
    let resolve = |t: &PatternTerm| match t {
        PatternTerm::Term(term) => match graph.lookup(term) {
            Some(id) => Ok(Some(id)),
            None => Err(()), // constant absent from the graph: nothing can match
        },
        PatternTerm::Var(_) => Ok(None),
    };
    let (s, p, o) = (
        resolve(&pattern.subject),
        resolve(&pattern.predicate),
        resolve(&pattern.object),
    );
    let (Ok(s), Ok(p), Ok(o)) = (s, p, o) else {
        return 0;
    };
    let base = graph.count_matching(s, p, o);
    let bound_vars = pattern
        .variables()
        .filter(|v| bound.contains(v))
        .count() as u32;
    // quarter the estimate per bound variable, but keep nonempty estimates >= 1
    let shrunk = base >> (2 * bound_vars);
    if base > 0 {
        shrunk.max(1)
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Term, Triple};

    fn var(v: &str) -> PatternTerm {
        PatternTerm::Var(v.to_string())
    }

    fn term(iri: &str) -> PatternTerm {
        PatternTerm::Term(Term::iri(iri))
    }

    #[test]
    fn constants_scheduled_before_variables() {
        let mut g = Graph::new();
        for i in 0..10 {
            g.insert(
                &Triple::new(
                    Term::iri(format!("http://ex.org/s{i}")),
                    Term::iri("http://ex.org/p"),
                    Term::iri("http://ex.org/o"),
                )
                .unwrap(),
            );
        }
        let patterns = vec![
            TriplePattern {
                subject: var("x"),
                predicate: var("y"),
                object: var("z"),
            },
            TriplePattern {
                subject: term("http://ex.org/s1"),
                predicate: term("http://ex.org/p"),
                object: term("http://ex.org/o"),
            },
        ];
        assert_eq!(plan_bgp(&patterns, &g), vec![1, 0]);
    }

    #[test]
    fn selective_title_pattern_first() {
        let mut g = Graph::new();
        let title = Term::iri("http://purl.org/dc/elements/1.1/title");
        let part_of = Term::iri("http://www.obofoundry.org/ro/ro.owl#part_of");
        g.insert(
            &Triple::new(
                Term::iri("http://ex.org/ds1"),
                title.clone(),
                Term::literal("Methylation Relative"),
            )
            .unwrap(),
        );
        for i in 0..50 {
            g.insert(
                &Triple::new(
                    Term::iri(format!("http://ex.org/obs{i}")),
                    part_of.clone(),
                    Term::iri("http://ex.org/ds1"),
                )
                .unwrap(),
            );
        }
        let patterns = vec![
            TriplePattern {
                subject: var("obs"),
                predicate: PatternTerm::Term(part_of),
                object: var("ds"),
            },
            TriplePattern {
                subject: var("ds"),
                predicate: PatternTerm::Term(title),
                object: PatternTerm::Term(Term::literal("Methylation Relative")),
            },
        ];
        assert_eq!(plan_bgp(&patterns, &g), vec![1, 0]);
    }

    #[test]
    fn ties_break_by_original_order() {
        let g = Graph::new();
        let patterns = vec![
            TriplePattern {
                subject: var("a"),
                predicate: var("b"),
                object: var("c"),
            },
            TriplePattern {
                subject: var("d"),
                predicate: var("e"),
                object: var("f"),
            },
        ];
        assert_eq!(plan_bgp(&patterns, &g), vec![0, 1]);
    }
}
