//! Tabular observation ingestion and the measurement-datum RDF mapping:
//! datasets, samples, reporters, and one observation node per row.

use std::collections::BTreeSet;

use crate::annotations::is_refseq_accession;
use crate::error::TabularError;
use crate::{vocab, Graph, Term};

pub const OBSERVATION_CSV_HEADER: [&str; 6] = [
    "dataset_title",
    "sample_title",
    "reporter_refseq",
    "quality",
    "unit",
    "value",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ObservationRow {
    pub dataset_title: String,
    pub sample_title: String,
    pub reporter_accession: String,
    pub quality: String,
    pub unit: String,
    /// Lexical form as read from the file; validated to parse as a finite
    /// decimal. Kept verbatim so the emitted literal round-trips.
    pub value: String,
}

/// Deterministic IRI minting for datasets, samples, and observations.
#[derive(Debug, Clone)]
pub struct IriPolicy {
    pub base: String,
}

impl IriPolicy {
    pub fn new(base: impl Into<String>) -> IriPolicy {
        let mut base = base.into();
        if !base.ends_with('/') {
            base.push('/');
        }
        IriPolicy { base }
    }

    /// lowercase, spaces to '-', strip anything outside [a-z0-9-].
    pub fn slug(text: &str) -> String {
        text.to_lowercase()
            .chars()
            .map(|c| if c == ' ' { '-' } else { c })
            .filter(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || *c == '-')
            .collect()
    }

    pub fn dataset_iri(&self, title: &str) -> String {
        format!("{}dataset/{}", self.base, Self::slug(title))
    }

    pub fn sample_iri(&self, title: &str) -> String {
        format!("{}sample/{}", self.base, Self::slug(title))
    }

    pub fn observation_iri(&self, dataset: &str, sample: &str, accession: &str) -> String {
        format!(
            "{}observation/{}/{}/{}",
            self.base,
            Self::slug(dataset),
            Self::slug(sample),
            accession
        )
    }
}

impl Default for IriPolicy {
    fn default() -> Self {
        IriPolicy::new("http://example.org/omics/")
    }
}

/// Parses the observation CSV. Header must be exactly
/// `dataset_title,sample_title,reporter_refseq,quality,unit,value`.
pub fn parse_observations(text: &str) -> Result<Vec<ObservationRow>, TabularError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    {
        let headers = reader.headers()?;
        for (i, expected) in OBSERVATION_CSV_HEADER.iter().enumerate() {
            match headers.get(i) {
                Some(h) if h == *expected => {}
                _ => return Err(TabularError::MissingColumn((*expected).to_string())),
            }
        }
    }
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2; // 1-based, after the header
        let record = record?;
        if record.len() < 6 {
            return Err(TabularError::Row {
                line,
                message: format!("expected 6 columns, got {}", record.len()),
            });
        }
        let value = record[5].trim().to_string();
        match value.parse::<f64>() {
            Ok(v) if v.is_finite() => {}
            _ => {
                return Err(TabularError::Row {
                    line,
                    message: format!("value '{value}' is not a finite decimal"),
                })
            }
        }
        let dataset_title = record[0].trim().to_string();
        let sample_title = record[1].trim().to_string();
        let accession = record[2].trim().to_string();
        if dataset_title.is_empty() || sample_title.is_empty() {
            return Err(TabularError::Row {
                line,
                message: "dataset_title and sample_title must be nonempty".to_string(),
            });
        }
        if !is_refseq_accession(&accession) {
            return Err(TabularError::Row {
                line,
                message: format!("'{accession}' is not a RefSeq accession"),
            });
        }
        rows.push(ObservationRow {
            dataset_title,
            sample_title,
            reporter_accession: accession,
            quality: record[3].trim().to_string(),
            unit: record[4].trim().to_string(),
            value,
        });
    }
    Ok(rows)
}

/// Maps rows into the measurement vocabulary. Per row, seven
/// observation-scoped triples; dataset, sample, and reporter entity triples
/// are shared across rows by set semantics.
pub fn rows_to_rdf(rows: &[ObservationRow], policy: &IriPolicy) -> Graph {
    let mut graph = Graph::new();
    let mut seen_datasets = BTreeSet::new();
    let mut seen_samples = BTreeSet::new();
    let mut seen_reporters = BTreeSet::new();

    let add = |g: &mut Graph, s: &str, p: &str, o: Term| {
        g.insert_terms(Term::iri(s), Term::iri(p), o).expect("iri subject");
    };

    for row in rows {
        let dataset = policy.dataset_iri(&row.dataset_title);
        if seen_datasets.insert(row.dataset_title.clone()) {
            add(&mut graph, &dataset, vocab::RDF_TYPE, Term::iri(vocab::IAO_DATA_SET));
            add(
                &mut graph,
                &dataset,
                vocab::DC_TITLE,
                Term::literal(&row.dataset_title),
            );
        }
        let sample = policy.sample_iri(&row.sample_title);
        if seen_samples.insert(row.sample_title.clone()) {
            add(
                &mut graph,
                &sample,
                vocab::RDF_TYPE,
                Term::iri(vocab::OBI_CELL_CULTURE),
            );
            add(
                &mut graph,
                &sample,
                vocab::DC_TITLE,
                Term::literal(&row.sample_title),
            );
        }
        let reporter = vocab::bio2rdf_refseq(&row.reporter_accession);
        if seen_reporters.insert(row.reporter_accession.clone()) {
            add(
                &mut graph,
                &reporter,
                vocab::RDF_TYPE,
                Term::iri(vocab::SO_TRANSCRIPT),
            );
            add(
                &mut graph,
                &reporter,
                vocab::DC_IDENTIFIER,
                Term::literal(&row.reporter_accession),
            );
        }

        let obs = policy.observation_iri(
            &row.dataset_title,
            &row.sample_title,
            &row.reporter_accession,
        );
        add(
            &mut graph,
            &obs,
            vocab::RDF_TYPE,
            Term::iri(vocab::IAO_MEASUREMENT_DATUM),
        );
        add(
            &mut graph,
            &obs,
            vocab::IAO_HAS_MEASUREMENT_VALUE,
            Term::typed_literal(&row.value, vocab::XSD_DOUBLE),
        );
        add(&mut graph, &obs, vocab::RO_PART_OF, Term::iri(&dataset));
        add(&mut graph, &obs, vocab::IAO_IS_ABOUT, Term::iri(&sample));
        add(&mut graph, &obs, vocab::IAO_IS_ABOUT, Term::iri(&reporter));
        add(
            &mut graph,
            &obs,
            vocab::IAO_IS_QUALITY_MEASUREMENT_OF,
            Term::literal(&row.quality),
        );
        add(
            &mut graph,
            &obs,
            vocab::IAO_HAS_MEASUREMENT_UNIT_LABEL,
            Term::literal(&row.unit),
        );
    }
    graph
}

/// The canonical four-variable subset-extraction DESCRIBE query for one
/// sample title.
pub fn describe_retrieval_reference(sample_title: &str) -> String {
    format!(
        "PREFIX obo: <{obo}>\n\
         PREFIX dc: <{dc}>\n\
         PREFIX ro: <{ro}>\n\
         \n\
         DESCRIBE ?rep ?obs ?data ?samp\n\
         WHERE {{\n\
         \x20 ?samp dc:title \"{sample_title}\" .\n\
         \x20 # IAO_0000136 = 'is_about'\n\
         \x20 ?obs obo:IAO_0000136 ?samp .\n\
         \x20 ?obs ro:part_of ?data .\n\
         \x20 ?obs obo:IAO_0000136 ?rep .\n\
         }}\n",
        obo = vocab::OBO_NS,
        dc = vocab::DC_NS,
        ro = vocab::RO_NS,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntriples::serialize_ntriples;

    const HEADER: &str = "dataset_title,sample_title,reporter_refseq,quality,unit,value\n";

    #[test]
    fn parses_basic_row() {
        let rows = parse_observations(&format!(
            "{HEADER}Methylation Relative,YUMAC,NM_000546,relative methylation,ratio,2.73\n"
        ))
        .unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].value, "2.73");
        assert_eq!(rows[0].sample_title, "YUMAC");
    }

    #[test]
    fn header_only_is_empty() {
        assert!(parse_observations(HEADER).unwrap().is_empty());
    }

    #[test]
    fn non_numeric_value_names_line() {
        let err = parse_observations(&format!("{HEADER}D,S,NM_1,q,u,abc\n")).unwrap_err();
        match err {
            TabularError::Row { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("abc"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(matches!(
            parse_observations("a,b,c,d,e,f\n1,2,3,4,5,6\n").unwrap_err(),
            TabularError::MissingColumn(_)
        ));
    }

    #[test]
    fn single_row_emits_thirteen_triples() {
        let rows = parse_observations(&format!(
            "{HEADER}Methylation Relative,YUMAC,NM_000546,relative methylation,ratio,2.73\n"
        ))
        .unwrap();
        let g = rows_to_rdf(&rows, &IriPolicy::default());
        // 7 observation-scoped + 2 dataset + 2 sample + 2 reporter
        assert_eq!(g.len(), 13);
    }

    #[test]
    fn shared_entities_emitted_once() {
        let rows = parse_observations(&format!(
            "{HEADER}D,S,NM_1,q,u,1.0\nD,S,NM_1,q2,u2,2.0\n"
        ))
        .unwrap();
        let g = rows_to_rdf(&rows, &IriPolicy::default());
        // same dataset/sample/reporter; the two rows share one observation IRI
        // (one value slot per dataset x sample x reporter), so the second
        // row's distinct quality/unit/value triples pile onto the same node
        assert_eq!(
            g.match_terms(None, Some(&Term::iri(vocab::RDF_TYPE)), None).len(),
            4
        );
    }

    #[test]
    fn deterministic_output() {
        let csv = format!(
            "{HEADER}Methylation Relative,YUMAC,NM_000546,m,ratio,2.73\nAZA Pre-Post Treatment Ratios,WW165,NM_004324,e,fold,0.5\n"
        );
        let a = serialize_ntriples(&rows_to_rdf(
            &parse_observations(&csv).unwrap(),
            &IriPolicy::default(),
        ));
        let b = serialize_ntriples(&rows_to_rdf(
            &parse_observations(&csv).unwrap(),
            &IriPolicy::default(),
        ));
        assert_eq!(a, b);
    }

    #[test]
    fn slugging() {
        assert_eq!(IriPolicy::slug("Methylation Relative"), "methylation-relative");
        assert_eq!(
            IriPolicy::slug("AZA Pre-Post Treatment Ratios"),
            "aza-pre-post-treatment-ratios"
        );
        assert_eq!(IriPolicy::slug("It's 100% (raw)"), "its-100-raw");
    }

    #[test]
    fn describe_reference_mentions_sample() {
        let q = describe_retrieval_reference("YUMAC");
        assert!(q.contains("?samp dc:title \"YUMAC\""));
        assert!(q.contains("DESCRIBE ?rep ?obs ?data ?samp"));
    }
}
