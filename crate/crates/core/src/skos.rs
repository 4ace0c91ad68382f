//! OBO term hierarchy to SKOS conversion: each non-obsolete term becomes a
//! `skos:Concept` with a `skos:prefLabel`, and each is_a edge a single
//! `skos:broader` triple. No transitive closure and no `skos:narrower`
//! triples are produced here.

use crate::obo::OboOntology;
use crate::{vocab, Graph, Term};

/// Concept IRI for a CURIE like `GO:0006915` under `namespace_base`, e.g.
/// `http://purl.org/obo/owl/GO#` + `0006915`.
pub fn concept_iri(namespace_base: &str, curie: &str) -> String {
    let local = curie.split_once(':').map_or(curie, |(_, local)| local);
    format!("{namespace_base}{local}")
}

pub fn to_skos(onto: &OboOntology, namespace_base: &str) -> Graph {
    let mut graph = Graph::new();
    graph.register_prefix("skos", "http://www.w3.org/2004/02/skos/core#");

    for term in onto.terms.values().filter(|t| !t.is_obsolete) {
        let subject = Term::iri(concept_iri(namespace_base, &term.id));
        graph
            .insert_terms(
                subject.clone(),
                Term::iri(vocab::RDF_TYPE),
                Term::iri(vocab::SKOS_CONCEPT),
            )
            .expect("iri subject");
        graph
            .insert_terms(
                subject.clone(),
                Term::iri(vocab::SKOS_PREF_LABEL),
                Term::literal(&term.name),
            )
            .expect("iri subject");
        for parent in &term.is_a_parents {
            graph
                .insert_terms(
                    subject.clone(),
                    Term::iri(vocab::SKOS_BROADER),
                    Term::iri(concept_iri(namespace_base, parent)),
                )
                .expect("iri subject");
        }
    }
    graph
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntriples::serialize_ntriples;
    use crate::obo::parse_obo;

    const GO_BASE: &str = "http://purl.org/obo/owl/GO#";

    fn fixture() -> OboOntology {
        let text = "format-version: 1.2\n\n\
            [Term]\nid: GO:0006915\nname: apoptosis\nis_a: GO:0008219\n\n\
            [Term]\nid: GO:0008219\nname: cell death\nis_a: GO:0008150\n\n\
            [Term]\nid: GO:0008150\nname: biological_process\n\n\
            [Term]\nid: GO:0000001\nname: obsolete thing\nis_obsolete: true\n";
        parse_obo(text).unwrap().0
    }

    #[test]
    fn broader_edge_for_apoptosis() {
        let g = to_skos(&fixture(), GO_BASE);
        assert!(g.match_terms(
            Some(&Term::iri("http://purl.org/obo/owl/GO#0006915")),
            Some(&Term::iri(vocab::SKOS_BROADER)),
            Some(&Term::iri("http://purl.org/obo/owl/GO#0008219")),
        )
        .len() == 1);
    }

    #[test]
    fn empty_ontology_gives_empty_graph() {
        let g = to_skos(&OboOntology::default(), GO_BASE);
        assert!(g.is_empty());
    }

    #[test]
    fn no_transitive_broader_and_no_obsolete_output() {
        let g = to_skos(&fixture(), GO_BASE);
        // 3 non-obsolete terms: 2 triples each + 2 is_a edges total
        assert_eq!(g.len(), 3 * 2 + 2);
        assert!(g
            .match_terms(
                Some(&Term::iri("http://purl.org/obo/owl/GO#0006915")),
                Some(&Term::iri(vocab::SKOS_BROADER)),
                Some(&Term::iri("http://purl.org/obo/owl/GO#0008150")),
            )
            .is_empty());
        let serialized = serialize_ntriples(&g);
        assert!(!serialized.contains("0000001"));
    }

    #[test]
    fn triple_count_law() {
        let onto = fixture();
        let expected: usize = onto
            .terms
            .values()
            .filter(|t| !t.is_obsolete)
            .map(|t| 2 + t.is_a_parents.len())
            .sum();
        assert_eq!(to_skos(&onto, GO_BASE).len(), expected);
    }

    #[test]
    fn conversion_is_deterministic() {
        let a = serialize_ntriples(&to_skos(&fixture(), GO_BASE));
        let b = serialize_ntriples(&to_skos(&fixture(), GO_BASE));
        assert_eq!(a, b);
    }
}
