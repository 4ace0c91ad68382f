//! Gene annotation ingestion: GAF-style files, HUGO-symbol-to-RefSeq
//! conversion tables, and the RDF mapping that links RefSeq transcripts to
//! SKOS concepts with the three aspect predicates.

use std::collections::BTreeMap;

use crate::error::TabularError;
use crate::{vocab, Graph, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Aspect {
    /// Biological Process -> participates_in
    Process,
    /// Molecular Function -> has_function
    Function,
    /// Cellular Component -> part_of
    Component,
}

impl Aspect {
    pub fn from_code(code: &str) -> Option<Aspect> {
        match code {
            "P" => Some(Aspect::Process),
            "F" => Some(Aspect::Function),
            "C" => Some(Aspect::Component),
            _ => None,
        }
    }

    pub fn predicate_iri(self) -> &'static str {
        match self {
            Aspect::Process => vocab::RO_PARTICIPATES_IN,
            Aspect::Function => vocab::RO_HAS_FUNCTION,
            Aspect::Component => vocab::RO_PART_OF,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationRecord {
    pub gene_symbol: String,
    pub go_id: String,
    pub aspect: Aspect,
    pub qualifier: Option<String>,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct GafWarnings {
    /// Lines dropped because the qualifier contains NOT.
    pub negated: usize,
    /// Lines skipped for a wrong column count or an unknown aspect code.
    pub skipped_lines: Vec<usize>,
}

/// Symbol -> RefSeq accessions (versionless).
#[derive(Debug, Default, PartialEq, Eq)]
pub struct SymbolMap {
    pub entries: BTreeMap<String, Vec<String>>,
}

impl SymbolMap {
    pub fn accessions(&self, symbol: &str) -> &[String] {
        self.entries.get(symbol).map_or(&[], Vec::as_slice)
    }
}

/// Parses a GAF 2.x file. Columns used: 3 (symbol), 4 (qualifier), 5 (GO id),
/// 9 (aspect). Lines starting with `!` are comments. GAF files are dirty in
/// practice, so short lines are skipped with a warning rather than failing.
pub fn parse_gaf(text: &str) -> (Vec<AnnotationRecord>, GafWarnings) {
    let mut records = Vec::new();
    let mut warnings = GafWarnings::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.is_empty() || line.starts_with('!') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 9 {
            warnings.skipped_lines.push(line_no);
            continue;
        }
        let qualifier = cols[3].trim();
        if qualifier.split('|').any(|q| q == "NOT") {
            warnings.negated += 1;
            continue;
        }
        let Some(aspect) = Aspect::from_code(cols[8].trim()) else {
            warnings.skipped_lines.push(line_no);
            continue;
        };
        records.push(AnnotationRecord {
            gene_symbol: cols[2].trim().to_string(),
            go_id: cols[4].trim().to_string(),
            aspect,
            qualifier: if qualifier.is_empty() {
                None
            } else {
                Some(qualifier.to_string())
            },
        });
    }
    (records, warnings)
}

/// Parses a two-column TSV of symbol -> comma-separated RefSeq accessions.
/// Version suffixes (".N") are stripped; duplicate symbol rows union.
pub fn parse_symbol_map(text: &str) -> Result<SymbolMap, TabularError> {
    let mut map = SymbolMap::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((symbol, accessions)) = line.split_once('\t') else {
            return Err(TabularError::Row {
                line: line_no,
                message: "expected two tab-separated columns".to_string(),
            });
        };
        let entry = map.entries.entry(symbol.trim().to_string()).or_default();
        for acc in accessions.split(',') {
            let acc = acc.trim();
            if acc.is_empty() {
                continue;
            }
            let versionless = acc.split_once('.').map_or(acc, |(base, _)| base);
            if !is_refseq_accession(versionless) {
                return Err(TabularError::Row {
                    line: line_no,
                    message: format!("'{acc}' is not a RefSeq accession"),
                });
            }
            if !entry.contains(&versionless.to_string()) {
                entry.push(versionless.to_string());
            }
        }
    }
    Ok(map)
}

pub fn is_refseq_accession(acc: &str) -> bool {
    let Some((prefix, digits)) = acc.split_once('_') else {
        return false;
    };
    prefix.len() == 2
        && prefix.chars().all(|c| c.is_ascii_uppercase())
        && !digits.is_empty()
        && digits.chars().all(|c| c.is_ascii_digit())
}

#[derive(Debug)]
pub struct AnnotationRdf {
    pub graph: Graph,
    /// Symbols with no entry in the conversion table, in input order.
    pub unmapped_symbols: Vec<String>,
}

/// Emits, per record and mapped accession: a `so:transcript` typing triple and
/// one aspect triple from the Bio2RDF RefSeq IRI to the GO concept IRI.
pub fn annotations_to_rdf(records: &[AnnotationRecord], symbols: &SymbolMap) -> AnnotationRdf {
    let mut graph = Graph::new();
    let mut unmapped = Vec::new();
    for record in records {
        let accessions = symbols.accessions(&record.gene_symbol);
        if accessions.is_empty() {
            if !unmapped.contains(&record.gene_symbol) {
                unmapped.push(record.gene_symbol.clone());
            }
            continue;
        }
        let concept = Term::iri(vocab::go_concept_iri(
            record.go_id.split_once(':').map_or(record.go_id.as_str(), |(_, l)| l),
        ));
        for accession in accessions {
            let gene = Term::iri(vocab::bio2rdf_refseq(accession));
            graph
                .insert_terms(
                    gene.clone(),
                    Term::iri(vocab::RDF_TYPE),
                    Term::iri(vocab::SO_TRANSCRIPT),
                )
                .expect("iri subject");
            graph
                .insert_terms(
                    gene,
                    Term::iri(record.aspect.predicate_iri()),
                    concept.clone(),
                )
                .expect("iri subject");
        }
    }
    AnnotationRdf {
        graph,
        unmapped_symbols: unmapped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaf_line(symbol: &str, qualifier: &str, go_id: &str, aspect: &str) -> String {
        [
            "UniProtKB", "P00000", symbol, qualifier, go_id, "PMID:1", "IDA", "", aspect,
            "some gene", "", "protein", "taxon:9606", "20100101", "UniProt", "", "",
        ]
        .join("\t")
    }

    #[test]
    fn basic_record() {
        let (records, warnings) = parse_gaf(&gaf_line("TP53", "", "GO:0006915", "P"));
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].gene_symbol, "TP53");
        assert_eq!(records[0].go_id, "GO:0006915");
        assert_eq!(records[0].aspect, Aspect::Process);
        assert_eq!(warnings, GafWarnings::default());
    }

    #[test]
    fn comment_only_file() {
        let (records, _) = parse_gaf("!gaf-version: 2.1\n! generated\n");
        assert!(records.is_empty());
    }

    #[test]
    fn not_qualifier_dropped() {
        let (records, warnings) = parse_gaf(&gaf_line("TP53", "NOT", "GO:0006915", "P"));
        assert!(records.is_empty());
        assert_eq!(warnings.negated, 1);
    }

    #[test]
    fn short_line_skipped_with_warning() {
        let (records, warnings) = parse_gaf("too\tfew\tcolumns\n");
        assert!(records.is_empty());
        assert_eq!(warnings.skipped_lines, vec![1]);
    }

    #[test]
    fn symbol_map_strips_versions_and_unions() {
        let map = parse_symbol_map("TP53\tNM_000546.5\nG\tNM_1\nG\tNM_2\n").unwrap();
        assert_eq!(map.accessions("TP53"), ["NM_000546"]);
        assert_eq!(map.accessions("G"), ["NM_1", "NM_2"]);
        assert!(parse_symbol_map("").unwrap().entries.is_empty());
    }

    #[test]
    fn process_record_maps_to_participates_in() {
        let (records, _) = parse_gaf(&gaf_line("TP53", "", "GO:0006915", "P"));
        let map = parse_symbol_map("TP53\tNM_000546.5\n").unwrap();
        let out = annotations_to_rdf(&records, &map);
        assert_eq!(out.graph.len(), 2);
        assert!(out.graph.contains(
            &crate::Triple::new(
                Term::iri("http://bio2rdf.org/refseq:NM_000546"),
                Term::iri(vocab::RO_PARTICIPATES_IN),
                Term::iri("http://purl.org/obo/owl/GO#0006915"),
            )
            .unwrap()
        ));
        assert!(out.graph.contains(
            &crate::Triple::new(
                Term::iri("http://bio2rdf.org/refseq:NM_000546"),
                Term::iri(vocab::RDF_TYPE),
                Term::iri(vocab::SO_TRANSCRIPT),
            )
            .unwrap()
        ));
    }

    #[test]
    fn component_record_maps_to_part_of() {
        let (records, _) = parse_gaf(&gaf_line("TP53", "", "GO:0005634", "C"));
        let map = parse_symbol_map("TP53\tNM_000546\n").unwrap();
        let out = annotations_to_rdf(&records, &map);
        assert!(!out
            .graph
            .match_terms(None, Some(&Term::iri(vocab::RO_PART_OF)), None)
            .is_empty());
    }

    #[test]
    fn unmapped_symbol_reported_without_triples() {
        let (records, _) = parse_gaf(&gaf_line("UNKNOWN1", "", "GO:0006915", "P"));
        let out = annotations_to_rdf(&records, &SymbolMap::default());
        assert!(out.graph.is_empty());
        assert_eq!(out.unmapped_symbols, vec!["UNKNOWN1".to_string()]);
    }

    #[test]
    fn fanout_duplicates_annotation_per_accession() {
        let (records, _) = parse_gaf(&gaf_line("MITF", "", "GO:0003677", "F"));
        let map = parse_symbol_map("MITF\tNM_000248,NM_198159\n").unwrap();
        let out = annotations_to_rdf(&records, &map);
        assert_eq!(
            out.graph
                .match_terms(None, Some(&Term::iri(vocab::RO_HAS_FUNCTION)), None)
                .len(),
            2
        );
    }
}
