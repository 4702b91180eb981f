use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use normcheck::compliance::{check, load_data, CheckError, CheckOptions};
use normcheck::norms::{compile, parse_norms};
use normcheck::rdf::{parse_turtle, serialize_turtle, PrefixMap};
use normcheck::shacl::{parse_shapes, shapes_to_graph, ShapesDocument};

/// Check RDF states of affairs against deontic norms.
#[derive(Parser)]
#[command(name = "normcheck", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run inference and validation, print a compliance report.
    ///
    /// Exits 0 when the data conforms, 1 on violations, 2 on errors.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["norms", "shapes"]))]
struct CheckArgs {
    /// Turtle data file; repeat to merge several graphs.
    #[arg(long, required = true)]
    data: Vec<PathBuf>,
    /// Norm file to compile.
    #[arg(long)]
    norms: Option<PathBuf>,
    /// SHACL shapes and rules in Turtle.
    #[arg(long)]
    shapes: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// List the authorities ruling on each communication behind a
    /// transparency violation.
    #[arg(long)]
    explain: bool,
    /// Validate the data as given, without running rules.
    #[arg(long)]
    no_infer: bool,
    /// Write the graph after inference as Turtle.
    #[arg(long, value_name = "FILE")]
    dump_inferred: Option<PathBuf>,
    /// Write the shapes in use as SHACL Turtle.
    #[arg(long, value_name = "FILE")]
    emit_shapes: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: CheckError },
    #[error("{0}")]
    Check(#[from] CheckError),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn input_error(path: &Path) -> impl FnOnce(CheckError) -> CliError + '_ {
    move |source| CliError::Input { path: path.to_path_buf(), source }
}

fn load_shapes(args: &CheckArgs) -> Result<(ShapesDocument, PrefixMap), CliError> {
    if let Some(path) = &args.norms {
        let set = parse_norms(&read(path)?).map_err(|e| input_error(path)(e.into()))?;
        let doc = compile(&set).map_err(|e| input_error(path)(e.into()))?;
        Ok((doc, set.prefixes))
    } else {
        let path = args.shapes.as_ref().expect("clap requires a shape source");
        let g = parse_turtle(&read(path)?).map_err(|e| input_error(path)(e.into()))?;
        let doc = parse_shapes(&g).map_err(|e| input_error(path)(e.into()))?;
        Ok((doc, g.prefixes().clone()))
    }
}

fn run(args: CheckArgs) -> Result<i32, CliError> {
    let mut data = normcheck::rdf::Graph::new();
    for path in &args.data {
        let text = read(path)?;
        let g = load_data([text.as_str()]).map_err(input_error(path))?;
        data.merge(&g);
    }
    let (shapes, shape_prefixes) = load_shapes(&args)?;
    if let Some(path) = &args.emit_shapes {
        write(path, &serialize_turtle(&shapes_to_graph(&shapes, &shape_prefixes)))?;
    }

    let options = CheckOptions { infer: !args.no_infer, explain: args.explain, ..CheckOptions::default() };
    let outcome = check(&data, &shapes, &options)?;
    if let Some(path) = &args.dump_inferred {
        write(path, &serialize_turtle(&outcome.graph))?;
    }

    match args.format {
        Format::Json => println!("{}", outcome.report.to_json()),
        Format::Text => print!("{}", outcome.report.render_text(outcome.graph.prefixes())),
    }
    Ok(outcome.report.exit_code())
}

fn main() -> ExitCode {
    let Command::Check(args) = Cli::parse().command;
    match run(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("normcheck: {e}");
            ExitCode::from(2)
        }
    }
}
