//! Property-chain materialization: rules of the form R1 ∘ R2 ⊑ R3 applied to
//! a graph until fixpoint. The default rule set composes each annotation
//! predicate with `skos:broader`, so annotations propagate up the concept
//! hierarchy. Evaluation is semi-naive: each round joins only the previous
//! round's delta against the full graph.

use std::collections::HashSet;

use crate::error::TabularError;
use crate::graph::TermId;
use crate::{vocab, Graph, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainAxiom {
    pub first: String,
    pub second: String,
    pub implied: String,
}

impl ChainAxiom {
    pub fn new(
        first: impl Into<String>,
        second: impl Into<String>,
        implied: impl Into<String>,
    ) -> ChainAxiom {
        ChainAxiom {
            first: first.into(),
            second: second.into(),
            implied: implied.into(),
        }
    }
}

/// The three annotation-propagation axioms: participates_in, has_function and
/// part_of each compose with skos:broader into themselves.
pub fn default_axioms() -> Vec<ChainAxiom> {
    [
        vocab::RO_PARTICIPATES_IN,
        vocab::RO_HAS_FUNCTION,
        vocab::RO_PART_OF,
    ]
    .into_iter()
    .map(|p| ChainAxiom::new(p, vocab::SKOS_BROADER, p))
    .collect()
}

/// Loads axioms from a three-column TSV of absolute IRIs
/// (first, second, implied).
pub fn parse_axioms_tsv(text: &str) -> Result<Vec<ChainAxiom>, TabularError> {
    let mut axioms = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if cols.len() != 3 {
            return Err(TabularError::Row {
                line: line_no,
                message: format!("expected 3 tab-separated IRIs, got {}", cols.len()),
            });
        }
        for iri in &cols {
            if !Term::iri_is_absolute(iri) {
                return Err(TabularError::Row {
                    line: line_no,
                    message: format!("'{iri}' is not an absolute IRI"),
                });
            }
        }
        axioms.push(ChainAxiom::new(cols[0], cols[1], cols[2]));
    }
    Ok(axioms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaterializeReport {
    /// Triples derived that were not in the input graph.
    pub derived: usize,
    /// Semi-naive rounds executed (including the final empty round).
    pub rounds: usize,
}

/// Adds the least fixpoint of the chain axioms to `graph`. Terminates by set
/// saturation, so cyclic `second` relations are tolerated.
pub fn materialize(graph: &mut Graph, axioms: &[ChainAxiom]) -> MaterializeReport {
    struct IdAxiom {
        first: TermId,
        second: TermId,
        implied_id: TermId,
    }

    let id_axioms: Vec<IdAxiom> = axioms
        .iter()
        .map(|axiom| IdAxiom {
            first: graph.intern(&Term::iri(axiom.first.clone())),
            second: graph.intern(&Term::iri(axiom.second.clone())),
            implied_id: graph.intern(&Term::iri(axiom.implied.clone())),
        })
        .collect();

    // initial delta: everything already in the graph
    let mut delta: Vec<[TermId; 3]> = graph.match_ids(None, None, None);
    let mut derived = 0usize;
    let mut rounds = 0usize;

    while !delta.is_empty() {
        rounds += 1;
        let delta_set: HashSet<[TermId; 3]> = delta.iter().copied().collect();
        let mut next: Vec<[TermId; 3]> = Vec::new();
        let mut pending: HashSet<[TermId; 3]> = HashSet::new();

        for axiom in &id_axioms {
            // delta(first) ⋈ full(second)
            for [x, _, y] in delta.iter().filter(|[_, p, _]| *p == axiom.first) {
                for [_, _, z] in graph.match_ids(Some(*y), Some(axiom.second), None) {
                    let fact = [*x, axiom.implied_id, z];
                    if !pending.contains(&fact)
                        && graph.count_matching(Some(*x), Some(axiom.implied_id), Some(z)) == 0
                    {
                        pending.insert(fact);
                    }
                }
            }
            // full(first) ⋈ delta(second), skipping pairs already covered above
            for [y, _, z] in delta.iter().filter(|[_, p, _]| *p == axiom.second) {
                for [x, _, _] in graph.match_ids(None, Some(axiom.first), Some(*y)) {
                    if delta_set.contains(&[x, axiom.first, *y]) {
                        continue;
                    }
                    let fact = [x, axiom.implied_id, *z];
                    if !pending.contains(&fact)
                        && graph.count_matching(Some(x), Some(axiom.implied_id), Some(*z)) == 0
                    {
                        pending.insert(fact);
                    }
                }
            }
        }

        for fact in pending {
            let [s, p, o] = fact;
            let triple = crate::Triple {
                subject: graph.term(s).clone(),
                predicate: graph.term(p).clone(),
                object: graph.term(o).clone(),
            };
            if graph.insert(&triple) {
                derived += 1;
                next.push(fact);
            }
        }
        delta = next;
    }

    MaterializeReport { derived, rounds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntriples::serialize_ntriples;
    use crate::Triple;

    fn iri_triple(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(Term::iri(s), Term::iri(p), Term::iri(o)).unwrap()
    }

    fn apoptosis_graph() -> Graph {
        let mut g = Graph::new();
        g.insert(&iri_triple(
            "http://bio2rdf.org/refseq:NM_000546",
            vocab::RO_PARTICIPATES_IN,
            "http://ex.org/apoptosis",
        ));
        g.insert(&iri_triple(
            "http://ex.org/apoptosis",
            vocab::SKOS_BROADER,
            "http://ex.org/cellDeath",
        ));
        g.insert(&iri_triple(
            "http://ex.org/cellDeath",
            vocab::SKOS_BROADER,
            "http://ex.org/biologicalProcess",
        ));
        g
    }

    #[test]
    fn propagates_up_two_levels() {
        let mut g = apoptosis_graph();
        let report = materialize(&mut g, &default_axioms());
        assert_eq!(report.derived, 2);
        assert!(g.contains(&iri_triple(
            "http://bio2rdf.org/refseq:NM_000546",
            vocab::RO_PARTICIPATES_IN,
            "http://ex.org/cellDeath",
        )));
        assert!(g.contains(&iri_triple(
            "http://bio2rdf.org/refseq:NM_000546",
            vocab::RO_PARTICIPATES_IN,
            "http://ex.org/biologicalProcess",
        )));
    }

    #[test]
    fn no_broader_triples_means_no_derivation() {
        let mut g = Graph::new();
        g.insert(&iri_triple(
            "http://ex.org/g",
            vocab::RO_PARTICIPATES_IN,
            "http://ex.org/t",
        ));
        let before = serialize_ntriples(&g);
        let report = materialize(&mut g, &default_axioms());
        assert_eq!(report.derived, 0);
        assert_eq!(serialize_ntriples(&g), before);
    }

    #[test]
    fn second_run_is_a_fixpoint() {
        let mut g = apoptosis_graph();
        materialize(&mut g, &default_axioms());
        let report = materialize(&mut g, &default_axioms());
        assert_eq!(report.derived, 0);
    }

    #[test]
    fn empty_graph_derives_nothing() {
        let mut g = Graph::new();
        let report = materialize(&mut g, &default_axioms());
        assert_eq!(report.derived, 0);
    }

    #[test]
    fn default_axioms_shape() {
        let axioms = default_axioms();
        assert_eq!(axioms.len(), 3);
        for axiom in &axioms {
            assert_eq!(axiom.first, axiom.implied);
            assert_eq!(axiom.second, vocab::SKOS_BROADER);
        }
    }

    #[test]
    fn cyclic_broader_terminates() {
        let mut g = Graph::new();
        g.insert(&iri_triple(
            "http://ex.org/g",
            vocab::RO_PARTICIPATES_IN,
            "http://ex.org/a",
        ));
        g.insert(&iri_triple(
            "http://ex.org/a",
            vocab::SKOS_BROADER,
            "http://ex.org/b",
        ));
        g.insert(&iri_triple(
            "http://ex.org/b",
            vocab::SKOS_BROADER,
            "http://ex.org/a",
        ));
        let report = materialize(&mut g, &default_axioms());
        // g participates in both a and b, nothing more
        assert_eq!(report.derived, 1);
    }

    #[test]
    fn axiom_tsv_round() {
        let text = format!(
            "{}\t{}\t{}\n",
            vocab::RO_PARTICIPATES_IN,
            vocab::SKOS_BROADER,
            vocab::RO_PARTICIPATES_IN
        );
        let axioms = parse_axioms_tsv(&text).unwrap();
        assert_eq!(axioms, vec![default_axioms()[0].clone()]);
        assert!(parse_axioms_tsv("a\tb\n").is_err());
        assert!(parse_axioms_tsv("not-iri\tx:y\tx:z\n").is_err());
    }

    #[test]
    fn order_independent_result() {
        let mut triples = vec![
            iri_triple("http://ex.org/g", vocab::RO_PARTICIPATES_IN, "http://ex.org/a"),
            iri_triple("http://ex.org/a", vocab::SKOS_BROADER, "http://ex.org/b"),
            iri_triple("http://ex.org/b", vocab::SKOS_BROADER, "http://ex.org/c"),
            iri_triple("http://ex.org/h", vocab::RO_PART_OF, "http://ex.org/a"),
        ];
        let mut first: Option<String> = None;
        for _ in 0..4 {
            triples.rotate_left(1);
            let mut g = Graph::new();
            for t in &triples {
                g.insert(t);
            }
            materialize(&mut g, &default_axioms());
            let serialized = serialize_ntriples(&g);
            match &first {
                None => first = Some(serialized),
                Some(expected) => assert_eq!(&serialized, expected),
            }
        }
    }
}
