//! IRI constants for the vocabularies used by the mapping pipeline.

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";

pub const SKOS_CONCEPT: &str = "http://www.w3.org/2004/02/skos/core#Concept";
pub const SKOS_BROADER: &str = "http://www.w3.org/2004/02/skos/core#broader";
pub const SKOS_PREF_LABEL: &str = "http://www.w3.org/2004/02/skos/core#prefLabel";

/// OBO Relation Ontology namespace, as used in the analysis queries.
pub const RO_NS: &str = "http://www.obofoundry.org/ro/ro.owl#";
pub const RO_PART_OF: &str = "http://www.obofoundry.org/ro/ro.owl#part_of";
pub const RO_PARTICIPATES_IN: &str = "http://www.obofoundry.org/ro/ro.owl#participates_in";
pub const RO_HAS_FUNCTION: &str = "http://www.obofoundry.org/ro/ro.owl#has_function";

/// OBO Foundry purl namespace for IAO/OBI numeric identifiers.
pub const OBO_NS: &str = "http://purl.obolibrary.org/obo/";
/// is about
pub const IAO_IS_ABOUT: &str = "http://purl.obolibrary.org/obo/IAO_0000136";
/// has measurement value
pub const IAO_HAS_MEASUREMENT_VALUE: &str = "http://purl.obolibrary.org/obo/IAO_0000004";
/// measurement datum
pub const IAO_MEASUREMENT_DATUM: &str = "http://purl.obolibrary.org/obo/IAO_0000109";
/// data set
pub const IAO_DATA_SET: &str = "http://purl.obolibrary.org/obo/IAO_0000100";
/// is quality measurement of
pub const IAO_IS_QUALITY_MEASUREMENT_OF: &str = "http://purl.obolibrary.org/obo/IAO_0000221";
/// has measurement unit label
pub const IAO_HAS_MEASUREMENT_UNIT_LABEL: &str = "http://purl.obolibrary.org/obo/IAO_0000039";
/// cell culture
pub const OBI_CELL_CULTURE: &str = "http://purl.obolibrary.org/obo/OBI_0100060";

/// SO transcript class, OBO-owl form.
pub const SO_TRANSCRIPT: &str = "http://purl.org/obo/owl/SO#SO_0000673";

/// GO concept namespace matching the `go:` prefix of the analysis queries.
pub const GO_NS: &str = "http://purl.org/obo/owl/GO#";

pub const DC_NS: &str = "http://purl.org/dc/elements/1.1/";
pub const DC_TITLE: &str = "http://purl.org/dc/elements/1.1/title";
pub const DC_IDENTIFIER: &str = "http://purl.org/dc/elements/1.1/identifier";

/// Bio2RDF-normalized RefSeq IRI (versionless accession).
pub fn bio2rdf_refseq(accession: &str) -> String {
    format!("http://bio2rdf.org/refseq:{accession}")
}

/// SKOS concept IRI for a GO CURIE like "GO:0006915".
pub fn go_concept_iri(local_id: &str) -> String {
    format!("{GO_NS}{local_id}")
}
