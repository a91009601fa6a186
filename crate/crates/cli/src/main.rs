use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use musitopo::ingest::Beats;
use musitopo::{homology_summary, poincare_polynomial, Metric, SpaceDescriptor};
use musitopo_cli::config::parse_beats;
use musitopo_cli::{list_datasets, run, AnalysisConfig, CliError, Mode, OutputFormat, Window};

#[derive(Parser)]
#[command(name = "musitopo", version, about = "Persistent homology of musical point clouds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the barcode of a MIDI file, distance matrix or built-in dataset.
    Run(RunArgs),
    /// List the built-in datasets.
    Datasets,
    /// Show the tabulated homology of a space, or list the known spaces.
    Theory {
        /// e.g. circle, torus:2, symm:3, symm-a3-3, symm-z4-4, chord-delay:4:2, exp:3
        space: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// File path, or a dataset name when no such file exists.
    input: String,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// necklace (pitch-class), tuple, chord-class, hausdorff, tde, rhythm,
    /// rhythm-anchored or rhythm-continuous.
    #[arg(long, value_parser = parse_metric)]
    metric: Option<Metric>,
    /// Delay-embedding window for melodies and chord sequences.
    #[arg(long, default_value_t = 1)]
    delay: usize,
    /// Required notes per chord.
    #[arg(long)]
    chord_size: Option<usize>,
    /// Highest homology dimension to report.
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    /// Largest scale; defaults to the cloud diameter.
    #[arg(long)]
    eps_max: Option<f64>,
    /// Prime coefficient field.
    #[arg(long, default_value_t = 2)]
    field: u32,
    /// Keep points at distance zero from each other as separate vertices.
    #[arg(long)]
    keep_duplicates: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Space to compare the barcode against; needs --window.
    #[arg(long, value_parser = parse_space, requires = "window")]
    compare_space: Option<SpaceDescriptor>,
    /// Scale window lo:hi for --compare-space.
    #[arg(long, requires = "compare_space")]
    window: Option<Window>,
    /// Chord segmentation window in beats, e.g. 1/32.
    #[arg(long, value_parser = parse_beats, default_value = "1/32")]
    quantize: Beats,
    /// Rhythm cycle length in beats.
    #[arg(long, value_parser = parse_beats, default_value = "4")]
    cycle: Beats,
    /// Only notes from this track.
    #[arg(long)]
    track: Option<u16>,
    /// Only notes from this channel.
    #[arg(long)]
    channel: Option<u8>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// Write the output here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write the comparison report as JSON.
    #[arg(long, requires = "compare_space")]
    report: Option<PathBuf>,
    /// Also write the distance matrix in the plain-text format.
    #[arg(long)]
    export_matrix: Option<PathBuf>,
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: musitopo::Error| e.to_string())
}

fn parse_space(s: &str) -> Result<SpaceDescriptor, String> {
    s.parse().map_err(|e: musitopo::Error| e.to_string())
}

fn write(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn execute(args: RunArgs) -> Result<(), CliError> {
    let config = AnalysisConfig {
        input: args.input,
        mode: args.mode,
        metric: args.metric,
        delay: args.delay,
        chord_size: args.chord_size,
        max_dim: args.max_dim,
        eps_max: args.eps_max,
        field: args.field,
        keep_duplicates: args.keep_duplicates,
        format: args.format,
        compare: args.compare_space.zip(args.window),
        quantize: args.quantize,
        cycle: args.cycle,
        track: args.track,
        channel: args.channel,
        threads: args.threads,
    };
    let analysis = run(&config)?;
    if let Some(path) = &args.export_matrix {
        write(Some(path), &analysis.matrix.to_text())?;
    }
    if let (Some(path), Some(report)) = (&args.report, &analysis.comparison) {
        write(Some(path), &(report.to_json() + "\n"))?;
    }
    write(args.output.as_deref(), &analysis.render(config.format))
}

fn theory(space: Option<String>, json: bool) -> Result<(), CliError> {
    let Some(space) = space else {
        for (space, description) in musitopo::theory::catalogue() {
            println!("{:<16}  {description}", space.to_string());
        }
        return Ok(());
    };
    let space: SpaceDescriptor = space.parse()?;
    let poincare = poincare_polynomial(space)?;
    let summary = homology_summary(space)?;
    if json {
        let value = serde_json::json!({
            "space": space.to_string(),
            "poincare": poincare.coefficients(),
            "homology": summary,
        });
        println!("{}", serde_json::to_string_pretty(&value).expect("serialisable"));
    } else {
        println!("{space}: Poincare polynomial {poincare}");
        for (k, group) in summary.groups.iter().enumerate() {
            println!("  H{k} = {group}");
        }
        for note in &summary.notes {
            println!("  note: {note}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => execute(args),
        Command::Datasets => {
            print!("{}", list_datasets());
            Ok(())
        }
        Command::Theory { space, json } => theory(space, json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
