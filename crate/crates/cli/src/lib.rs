//! Pipeline driver: build a merged, materialized graph from ontology,
//! annotation and observation inputs; query a serialized graph; serve it
//! over HTTP.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ograph::annotations::{annotations_to_rdf, parse_gaf, parse_symbol_map};
use ograph::ntriples::{parse_ntriples, serialize_ntriples};
use ograph::obo::parse_obo;
use ograph::observations::{parse_observations, rows_to_rdf, IriPolicy};
use ograph::reasoner::{default_axioms, materialize, parse_axioms_tsv};
use ograph::skos::to_skos;
use ograph::sparql::results::{to_sparql_json, to_tsv};
use ograph::sparql::{evaluate_describe, evaluate_select, parse_query, QueryForm};
use ograph::{vocab, Graph};

/// Error carrying the process exit code: 1 for I/O, 2 for query syntax,
/// 3 for data validation.
#[derive(Debug)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn io(message: impl Into<String>) -> CliError {
        CliError { exit_code: 1, message: message.into() }
    }
    pub fn query(message: impl Into<String>) -> CliError {
        CliError { exit_code: 2, message: message.into() }
    }
    pub fn data(message: impl Into<String>) -> CliError {
        CliError { exit_code: 3, message: message.into() }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub obo_path: Option<PathBuf>,
    pub gaf_path: Option<PathBuf>,
    pub symbol_map_path: Option<PathBuf>,
    pub observation_csv_paths: Vec<PathBuf>,
    pub axioms_path: Option<PathBuf>,
    pub output_graph_path: Option<PathBuf>,
    pub base_iri: String,
    pub listen_address: String,
    pub port: u16,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            obo_path: None,
            gaf_path: None,
            symbol_map_path: None,
            observation_csv_paths: Vec::new(),
            axioms_path: None,
            output_graph_path: None,
            base_iri: "http://example.org/omics/".to_string(),
            listen_address: "127.0.0.1".to_string(),
            port: 2020,
        }
    }
}

impl PipelineConfig {
    /// Flat `key = value` file; `#` starts a comment. Paths are resolved
    /// relative to the config file's directory.
    pub fn from_file(path: &Path) -> Result<PipelineConfig, CliError> {
        let text = read_file(path)?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let resolve = |v: &str| -> PathBuf { dir.join(v) };
        let mut config = PipelineConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::data(format!(
                    "{}:{}: expected 'key = value'",
                    path.display(),
                    idx + 1
                )));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "obo" => config.obo_path = Some(resolve(value)),
                "gaf" => config.gaf_path = Some(resolve(value)),
                "symbols" => config.symbol_map_path = Some(resolve(value)),
                "observations" => {
                    config.observation_csv_paths = value
                        .split(',')
                        .map(str::trim)
                        .filter(|v| !v.is_empty())
                        .map(resolve)
                        .collect();
                }
                "axioms" => config.axioms_path = Some(resolve(value)),
                "output" => config.output_graph_path = Some(resolve(value)),
                "base-iri" => config.base_iri = value.to_string(),
                "listen" => config.listen_address = value.to_string(),
                "port" => {
                    config.port = value.parse().map_err(|_| {
                        CliError::data(format!("port '{value}' is not in 1..65535"))
                    })?;
                }
                other => {
                    return Err(CliError::data(format!(
                        "{}:{}: unknown config key '{other}'",
                        path.display(),
                        idx + 1
                    )))
                }
            }
        }
        Ok(config)
    }
}

#[derive(Debug, Default)]
pub struct BuildReport {
    pub concept_triples: usize,
    pub annotation_triples: usize,
    pub observation_triples: usize,
    pub shared_subjects: usize,
    pub merged_before_inference: usize,
    pub derived_triples: usize,
    pub inference_rounds: usize,
    pub total_triples: usize,
    pub unmapped_symbols: Vec<String>,
    pub dangling_ontology_refs: Vec<String>,
}

impl BuildReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "concept triples:       {}", self.concept_triples);
        let _ = writeln!(out, "annotation triples:    {}", self.annotation_triples);
        let _ = writeln!(out, "observation triples:   {}", self.observation_triples);
        let _ = writeln!(out, "shared gene subjects:  {}", self.shared_subjects);
        let _ = writeln!(out, "merged (pre-infer):    {}", self.merged_before_inference);
        let _ = writeln!(
            out,
            "derived triples:       {} ({} rounds)",
            self.derived_triples, self.inference_rounds
        );
        let _ = writeln!(out, "total triples:         {}", self.total_triples);
        if !self.unmapped_symbols.is_empty() {
            let _ = writeln!(out, "unmapped symbols:      {}", self.unmapped_symbols.join(", "));
        }
        if !self.dangling_ontology_refs.is_empty() {
            let _ = writeln!(
                out,
                "dangling is_a targets: {}",
                self.dangling_ontology_refs.join(", ")
            );
        }
        out
    }
}

/// Runs the whole pipeline: ontology conversion, annotation mapping,
/// observation ingestion, merge, materialization, and serialization of the
/// sealed graph to the configured output path.
pub fn run_build(config: &PipelineConfig) -> Result<BuildReport, CliError> {
    let obo_path = config
        .obo_path
        .as_deref()
        .ok_or_else(|| CliError::data("no ontology input (key 'obo' or --obo)"))?;
    let gaf_path = config
        .gaf_path
        .as_deref()
        .ok_or_else(|| CliError::data("no annotation input (key 'gaf' or --gaf)"))?;
    let symbols_path = config
        .symbol_map_path
        .as_deref()
        .ok_or_else(|| CliError::data("no symbol map (key 'symbols' or --symbols)"))?;
    let output_path = config
        .output_graph_path
        .as_deref()
        .ok_or_else(|| CliError::data("no output path (key 'output' or --output)"))?;

    let mut report = BuildReport::default();

    let (onto, obo_warnings) = parse_obo(&read_file(obo_path)?)
        .map_err(|e| CliError::data(format!("ontology stage: {e}")))?;
    report.dangling_ontology_refs = obo_warnings.dangling_references;
    let concept_graph = to_skos(&onto, vocab::GO_NS);
    report.concept_triples = concept_graph.len();

    let (records, _gaf_warnings) = parse_gaf(&read_file(gaf_path)?);
    let symbols = parse_symbol_map(&read_file(symbols_path)?)
        .map_err(|e| CliError::data(format!("symbol-map stage: {e}")))?;
    let annotation_rdf = annotations_to_rdf(&records, &symbols);
    report.annotation_triples = annotation_rdf.graph.len();
    report.unmapped_symbols = annotation_rdf.unmapped_symbols;

    let policy = IriPolicy::new(config.base_iri.clone());
    let mut rows = Vec::new();
    for csv_path in &config.observation_csv_paths {
        rows.extend(parse_observations(&read_file(csv_path)?).map_err(|e| {
            CliError::data(format!("observation stage ({}): {e}", csv_path.display()))
        })?);
    }
    let observation_graph = rows_to_rdf(&rows, &policy);
    report.observation_triples = observation_graph.len();

    // the observation graph is by far the largest, so it becomes the merge
    // base instead of being copied
    let mut merged = observation_graph;
    merged.merge(&concept_graph);
    // annotations last: their subjects are the gene IRIs observations share
    let merge_report = merged.merge(&annotation_rdf.graph);
    report.shared_subjects = merge_report.shared_subjects;
    report.merged_before_inference = merged.len();

    let axioms = match &config.axioms_path {
        Some(path) => parse_axioms_tsv(&read_file(path)?)
            .map_err(|e| CliError::data(format!("axiom stage: {e}")))?,
        None => default_axioms(),
    };
    let inference = materialize(&mut merged, &axioms);
    report.derived_triples = inference.derived;
    report.inference_rounds = inference.rounds;
    report.total_triples = merged.len();

    std::fs::write(output_path, serialize_ntriples(&merged))
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", output_path.display())))?;
    Ok(report)
}

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    parse_ntriples(&read_file(path)?)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Tsv,
    NTriples,
}

/// Evaluates a query against a loaded graph. SELECT renders as SPARQL
/// Results JSON or TSV; DESCRIBE as N-Triples.
pub fn run_query(graph: &Graph, query_text: &str, format: Option<OutputFormat>) -> Result<String, CliError> {
    let ast = parse_query(query_text).map_err(|e| CliError::query(e.to_string()))?;
    match &ast.form {
        QueryForm::Select(_) => {
            let table = evaluate_select(graph, &ast).map_err(|e| CliError::query(e.to_string()))?;
            match format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Json => Ok(to_sparql_json(&table)),
                OutputFormat::Tsv => Ok(to_tsv(&table)),
                OutputFormat::NTriples => {
                    Err(CliError::data("ntriples format applies to DESCRIBE queries only"))
                }
            }
        }
        QueryForm::Describe { .. } => {
            let described =
                evaluate_describe(graph, &ast).map_err(|e| CliError::query(e.to_string()))?;
            match format.unwrap_or(OutputFormat::NTriples) {
                OutputFormat::NTriples => Ok(serialize_ntriples(&described)),
                _ => Err(CliError::data("DESCRIBE answers are N-Triples only")),
            }
        }
    }
}

pub mod server {
    use super::*;
    use axum::extract::{Query as UrlQuery, State};
    use axum::http::{header, HeaderMap, StatusCode};
    use axum::response::{IntoResponse, Response};
    use axum::routing::get;
    use axum::Router;

    type Shared = Arc<Graph>;

    pub fn router(graph: Shared) -> Router {
        Router::new()
            .route("/sparql", get(handle_get).post(handle_post))
            .with_state(graph)
    }

    /// Binds and serves until the process is stopped.
    pub async fn serve(graph: Graph, address: &str, port: u16) -> Result<(), CliError> {
        let listener = tokio::net::TcpListener::bind((address, port))
            .await
            .map_err(|e| CliError::io(format!("cannot bind {address}:{port}: {e}")))?;
        eprintln!("listening on http://{address}:{port}/sparql");
        axum::serve(listener, router(Arc::new(graph)))
            .await
            .map_err(|e| CliError::io(e.to_string()))
    }

    async fn handle_get(
        State(graph): State<Shared>,
        UrlQuery(params): UrlQuery<HashMap<String, String>>,
    ) -> Response {
        match params.get("query") {
            Some(q) => answer(&graph, q),
            None => (StatusCode::BAD_REQUEST, "missing 'query' parameter\n").into_response(),
        }
    }

    async fn handle_post(
        State(graph): State<Shared>,
        headers: HeaderMap,
        body: String,
    ) -> Response {
        let content_type = headers
            .get(header::CONTENT_TYPE)
            .and_then(|v| v.to_str().ok())
            .unwrap_or("")
            .split(';')
            .next()
            .unwrap_or("")
            .trim()
            .to_ascii_lowercase();
        match content_type.as_str() {
            "application/sparql-query" => answer(&graph, &body),
            "application/x-www-form-urlencoded" => {
                match url_form_value(&body, "query") {
                    Some(q) => answer(&graph, &q),
                    None => {
                        (StatusCode::BAD_REQUEST, "missing 'query' form field\n").into_response()
                    }
                }
            }
            other => (
                StatusCode::BAD_REQUEST,
                format!("unsupported content type '{other}'\n"),
            )
                .into_response(),
        }
    }

    /// Minimal x-www-form-urlencoded field extraction.
    fn url_form_value(body: &str, field: &str) -> Option<String> {
        for pair in body.split('&') {
            let (key, value) = pair.split_once('=').unwrap_or((pair, ""));
            if key == field {
                return percent_decode(&value.replace('+', " "));
            }
        }
        None
    }

    fn percent_decode(text: &str) -> Option<String> {
        let bytes = text.as_bytes();
        let mut out = Vec::with_capacity(bytes.len());
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] == b'%' {
                let hex = bytes.get(i + 1..i + 3)?;
                let code = u8::from_str_radix(std::str::from_utf8(hex).ok()?, 16).ok()?;
                out.push(code);
                i += 3;
            } else {
                out.push(bytes[i]);
                i += 1;
            }
        }
        String::from_utf8(out).ok()
    }

    fn answer(graph: &Graph, query_text: &str) -> Response {
        let ast = match parse_query(query_text) {
            Ok(ast) => ast,
            Err(e) => return (StatusCode::BAD_REQUEST, format!("{e}\n")).into_response(),
        };
        let content_type = if ast.is_select() {
            "application/sparql-results+json"
        } else {
            "application/n-triples"
        };
        match run_query(graph, query_text, None) {
            Ok(body) => ([(header::CONTENT_TYPE, content_type)], body).into_response(),
            Err(e) => (StatusCode::BAD_REQUEST, format!("{}\n", e.message)).into_response(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults() {
        let config = PipelineConfig::default();
        assert_eq!(config.port, 2020);
        assert_eq!(config.listen_address, "127.0.0.1");
        assert!(config.obo_path.is_none());
    }

    #[test]
    fn error_exit_codes() {
        assert_eq!(CliError::io("x").exit_code, 1);
        assert_eq!(CliError::query("x").exit_code, 2);
        assert_eq!(CliError::data("x").exit_code, 3);
    }
}
