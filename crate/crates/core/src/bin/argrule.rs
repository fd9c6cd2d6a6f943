use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;

use argrule::dataset::{load_for_prediction, load_table, RawTable, TableOptions};
use argrule::dot::{contextual_to_dot, matrix_to_dot};
use argrule::eval::{evaluate, EvalConfig};
use argrule::explain::{explain_prediction, render, DefenceMode};
use argrule::induction::SearchConfig;
use argrule::model::{learn, LearnConfig, ModelFile};
use argrule::{EdgeKind, Error, Result, Variant};

#[derive(Parser)]
#[command(version, about = "Learn, apply and explain argumentation-graph classifiers")]
struct Cli {
    /// Suppress progress output on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a model from a labelled table.
    Learn(LearnArgs),
    /// Classify the rows of a table.
    Predict(PredictArgs),
    /// Explain the classification of one row.
    Explain(ExplainArgs),
    /// Repeated train/test evaluation.
    Eval(EvalArgs),
    /// Export a model's graph.
    Export(ExportArgs),
}

#[derive(Args)]
struct TableArgs {
    /// Delimited input file with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Column holding the class.
    #[arg(long, default_value = "class")]
    label_column: String,
    /// Class value predicted as true.
    #[arg(long)]
    positive_class: String,
    /// Columns to drop, comma separated.
    #[arg(long, value_delimiter = ',')]
    ignore_columns: Vec<String>,
    /// Numeric columns to treat as nominal, comma separated.
    #[arg(long, value_delimiter = ',')]
    nominal: Vec<String>,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
}

impl TableArgs {
    fn options(&self) -> Result<TableOptions> {
        Ok(TableOptions {
            delimiter: delimiter_byte(self.delimiter)?,
            ignore_columns: self.ignore_columns.clone(),
            ..Default::default()
        })
    }

    fn load(&self) -> Result<RawTable> {
        load_table(&self.data, &self.label_column, &self.positive_class, &self.options()?)
    }
}

fn delimiter_byte(c: char) -> Result<u8> {
    u8::try_from(c).map_err(|_| Error::Config(format!("delimiter `{c}` is not a single byte")))
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value = "base")]
    variant: Variant,
    /// Intervals per numeric column.
    #[arg(long, default_value_t = 6)]
    segments: usize,
    /// Node expansions before the search stops.
    #[arg(long, default_value_t = 100)]
    iterations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SearchArgs {
    fn config(&self, table: &TableArgs) -> SearchConfig {
        SearchConfig {
            max_iterations: self.iterations,
            variant: self.variant,
            seed: self.seed,
            target_name: format!("{}={}", table.label_column, table.positive_class),
        }
    }
}

#[derive(Args)]
struct LearnArgs {
    #[command(flatten)]
    table: TableArgs,
    #[command(flatten)]
    search: SearchArgs,
    /// Model file to write; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    /// Edge list.
    Json,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_delimiter = ',')]
    ignore_columns: Vec<String>,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    #[arg(long, value_enum, default_value = "text")]
    format: Report,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// A counter-attacker needs a supporter in the extension, if it has any.
    Supported,
    /// A counter-attacker needs a supporter in the extension.
    Strict,
    /// Every supporter of the attacker must be attacked.
    Attacking,
}

#[derive(Args)]
struct ExplainArgs {
    #[arg(long)]
    model: PathBuf,
    /// Table to take the row from.
    #[arg(long, requires = "row")]
    data: Option<PathBuf>,
    /// Zero-based row index in --data.
    #[arg(long)]
    row: Option<usize>,
    /// The row given inline instead, as `column=value` pairs separated by commas.
    #[arg(long, conflicts_with_all = ["data", "row"])]
    facts: Option<String>,
    #[arg(long, value_delimiter = ',')]
    ignore_columns: Vec<String>,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Defence notion when the graph has supports.
    #[arg(long, value_enum, default_value = "supported")]
    mode: Mode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    table: TableArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, default_value_t = 0.7)]
    train_ratio: f64,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Report,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum, default_value = "dot")]
    format: GraphFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_error(path, e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| io_error(Path::new("<stdout>"), e))
        }
    }
}

fn io_error(path: &Path, source: io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_learn(args: &LearnArgs) -> Result<()> {
    let table = args.table.load()?;
    info!("{} rows, {} columns", table.len(), table.columns.len());
    let config = LearnConfig {
        label_column: args.table.label_column.clone(),
        positive_class: args.table.positive_class.clone(),
        segments: args.search.segments,
        nominal: args.table.nominal.clone(),
        search: args.search.config(&args.table),
    };
    let (file, outcome) = learn(&table, &config, |p| {
        info!(
            "iteration {:>4}  frontier {:>6}  current {} errors / {} edges  best {} errors",
            p.iteration, p.frontier, p.current.errors, p.current.edge_count, p.best.errors
        )
    })?;
    let summary = format!(
        "train accuracy {:.2}%, {} edges, {} iterations",
        outcome.train_accuracy * 100.0,
        outcome.matrix.edge_count(),
        outcome.iterations
    );
    match &args.out {
        Some(path) => {
            file.save(path)?;
            println!("{summary}");
        }
        None => {
            emit(None, &file.to_json())?;
            info!("{summary}");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Predictions {
    predictions: Vec<bool>,
    accuracy: Option<f64>,
}

fn cmd_predict(args: &PredictArgs) -> Result<()> {
    let file = ModelFile::load(&args.model)?;
    let matrix = file.relation_matrix()?;
    let opts = TableOptions {
        delimiter: delimiter_byte(args.delimiter)?,
        ignore_columns: args.ignore_columns.clone(),
        ..Default::default()
    };
    let table = load_for_prediction(&args.data, &file.label_column, &file.positive_class, &opts)?;
    let data = table.atomize(matrix.universe().schema())?;
    let predictions = matrix.predictions(&data);
    let accuracy = table
        .labels
        .as_ref()
        .filter(|_| !data.is_empty())
        .map(|_| matrix.accuracy(&data));
    let text = match args.format {
        Report::Json => json(&Predictions {
            predictions,
            accuracy,
        }),
        Report::Text => {
            let mut s = String::new();
            for (i, p) in predictions.iter().enumerate() {
                s.push_str(&format!("{i},{p}\n"));
            }
            if let Some(a) = accuracy {
                eprintln!("accuracy {:.2}%", a * 100.0);
            }
            s
        }
    };
    emit(args.out.as_deref(), &text)
}

fn parse_facts(spec: &str) -> Result<(Vec<String>, Vec<Option<String>>)> {
    let mut columns = Vec::new();
    let mut cells = Vec::new();
    for pair in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (column, value) = pair
            .split_once('=')
            .ok_or_else(|| Error::Schema(format!("malformed fact `{pair}`, expected column=value")))?;
        columns.push(column.trim().to_string());
        cells.push(Some(value.trim().to_string()));
    }
    Ok((columns, cells))
}

fn cmd_explain(args: &ExplainArgs) -> Result<()> {
    let file = ModelFile::load(&args.model)?;
    let matrix = file.relation_matrix()?;
    let schema = matrix.universe().schema().clone();
    let facts = match (&args.data, args.row, &args.facts) {
        (Some(data), Some(row), None) => {
            let opts = TableOptions {
                delimiter: delimiter_byte(args.delimiter)?,
                ignore_columns: args.ignore_columns.clone(),
                ..Default::default()
            };
            let table = load_for_prediction(data, &file.label_column, &file.positive_class, &opts)?;
            let cells = table.rows.get(row).ok_or_else(|| {
                Error::Config(format!("row {row} out of range ({} rows)", table.len()))
            })?;
            schema.atomize(&table.columns, cells)?
        }
        (None, None, Some(spec)) => {
            let (mut columns, mut cells) = parse_facts(spec)?;
            // attributes left out are missing
            for a in &schema.attributes {
                if !columns.contains(&a.name) {
                    columns.push(a.name.clone());
                    cells.push(None);
                }
            }
            if let Some(c) = columns.iter().find(|c| schema.attribute(c).is_none()) {
                return Err(Error::Schema(format!("unknown column `{c}`")));
            }
            schema.atomize(&columns, &cells)?
        }
        _ => return Err(Error::Config("give either --data with --row, or --facts".into())),
    };
    let mode = match args.mode {
        Mode::Supported => DefenceMode::Supported { strict: false },
        Mode::Strict => DefenceMode::Supported { strict: true },
        Mode::Attacking => DefenceMode::Attacking,
    };
    let explained = explain_prediction(&matrix, &facts, mode)?;
    let text = match args.format {
        Format::Text => render(&explained.set),
        Format::Json => json(&explained.set),
        Format::Dot => contextual_to_dot(&explained.graph, Some(&explained.labelling)),
    };
    emit(args.out.as_deref(), &text)
}

fn cmd_eval(args: &EvalArgs, quiet: bool) -> Result<()> {
    let table = args.table.load()?;
    let config = EvalConfig {
        runs: args.runs,
        train_ratio: args.train_ratio,
        seed: args.search.seed,
        segments: args.search.segments,
        nominal: args.table.nominal.clone(),
        search: args.search.config(&args.table),
    };
    if !quiet {
        info!("{} runs on {} rows", config.runs, table.len());
    }
    let report = evaluate(&table, &config)?;
    let text = match args.format {
        Report::Json => json(&report),
        Report::Text => report.to_string(),
    };
    emit(args.out.as_deref(), &text)
}

#[derive(Serialize)]
struct EdgeRecord {
    from: String,
    to: String,
    kind: &'static str,
}

fn cmd_export(args: &ExportArgs) -> Result<()> {
    let file = ModelFile::load(&args.model)?;
    let matrix = file.relation_matrix()?;
    let text = match args.format {
        GraphFormat::Json => {
            let u = matrix.universe();
            let edges: Vec<EdgeRecord> = matrix
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    from: u.name(e.from),
                    to: u.name(e.to),
                    kind: match e.kind {
                        EdgeKind::Attack => "attack",
                        EdgeKind::Support => "support",
                    },
                })
                .collect();
            json(&edges)
        }
        GraphFormat::Dot => matrix_to_dot(&matrix),
    };
    emit(args.out.as_deref(), &text)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Precondition(_) => 2,
        Error::Io { .. } | Error::Csv { .. } => 3,
        Error::Schema(_) | Error::Parse { .. } | Error::Model(_) | Error::Json(_) => 4,
        Error::Cycle(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .format_target(false)
        .init();
    let result = match &cli.command {
        Command::Learn(a) => cmd_learn(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Explain(a) => cmd_explain(a),
        Command::Eval(a) => cmd_eval(a, cli.quiet),
        Command::Export(a) => cmd_export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
