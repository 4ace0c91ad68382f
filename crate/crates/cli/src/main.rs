use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ograph_cli::{load_graph, run_build, run_query, server, CliError, OutputFormat, PipelineConfig};

#[derive(Parser)]
#[command(name = "ograph", about = "Semantic data-integration engine", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert, ingest, merge and materialize inputs into a sealed graph
    Build {
        /// Flat key = value config file; flags below override it
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        obo: Option<PathBuf>,
        #[arg(long)]
        gaf: Option<PathBuf>,
        #[arg(long)]
        symbols: Option<PathBuf>,
        /// Observation CSV files (repeatable or comma-separated)
        #[arg(long, value_delimiter = ',')]
        observations: Vec<PathBuf>,
        /// Chain-axiom TSV (first, second, implied); defaults to the
        /// annotation-propagation axioms
        #[arg(long)]
        axioms: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        base_iri: Option<String>,
    },
    /// Evaluate a query against a serialized graph
    Query {
        #[arg(long)]
        graph: PathBuf,
        /// Query text, or a path to a file containing it
        #[arg(long)]
        query: String,
        #[arg(long, value_parser = parse_format)]
        format: Option<OutputFormat>,
    },
    /// Serve a graph read-only over HTTP at /sparql
    Serve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        listen: Option<String>,
        #[arg(long)]
        port: Option<u16>,
    },
}

fn parse_format(value: &str) -> Result<OutputFormat, String> {
    match value {
        "json" => Ok(OutputFormat::Json),
        "tsv" => Ok(OutputFormat::Tsv),
        "ntriples" => Ok(OutputFormat::NTriples),
        other => Err(format!("unknown format '{other}' (json, tsv, ntriples)")),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build {
            config,
            obo,
            gaf,
            symbols,
            observations,
            axioms,
            output,
            base_iri,
        } => {
            let mut pipeline = match config {
                Some(path) => PipelineConfig::from_file(&path)?,
                None => PipelineConfig::default(),
            };
            if obo.is_some() {
                pipeline.obo_path = obo;
            }
            if gaf.is_some() {
                pipeline.gaf_path = gaf;
            }
            if symbols.is_some() {
                pipeline.symbol_map_path = symbols;
            }
            if !observations.is_empty() {
                pipeline.observation_csv_paths = observations;
            }
            if axioms.is_some() {
                pipeline.axioms_path = axioms;
            }
            if output.is_some() {
                pipeline.output_graph_path = output;
            }
            if let Some(base) = base_iri {
                pipeline.base_iri = base;
            }
            let report = run_build(&pipeline)?;
            print!("{}", report.render());
            Ok(())
        }
        Command::Query { graph, query, format } => {
            let graph = load_graph(&graph)?;
            // --query takes inline text or a file path; a path never parses
            // as a query, so the file wins if it exists
            let text = if std::path::Path::new(&query).is_file() {
                std::fs::read_to_string(&query)
                    .map_err(|e| CliError::io(format!("cannot read {query}: {e}")))?
            } else {
                query
            };
            print!("{}", run_query(&graph, &text, format)?);
            Ok(())
        }
        Command::Serve { graph, listen, port } => {
            let graph = load_graph(&graph)?;
            let defaults = PipelineConfig::default();
            let address = listen.unwrap_or(defaults.listen_address);
            let port = port.unwrap_or(defaults.port);
            tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|e| CliError::io(e.to_string()))?
                .block_on(server::serve(graph, &address, port))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code as u8)
        }
    }
}
