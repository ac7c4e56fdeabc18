//! `coset-ricci`: analyze binary linear codes through their coset leader graphs.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use coset_ricci::construct::construct;
use coset_ricci::graph::MAX_GRAPH_DIM;
use coset_ricci::report::{self, AnalyzeOptions, CodeIdentity, Format, Render};
use coset_ricci::{zoo, LinearCode};

#[derive(Parser)]
#[command(
    name = "coset-ricci",
    version,
    about = "Coset leader graphs, Ricci curvature and local-code bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: graph, curvature, local structure, every bound. Exits 1 if a certifying bound fails.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = MAX_GRAPH_DIM)]
        dim_cap: usize,
        /// Locality used for the asymptotic LCC entries.
        #[arg(long, default_value_t = 3)]
        q: usize,
        /// Record wall-clock seconds per stage (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Exact curvature per direction and the Bonnet-Myers comparison.
    Curvature {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = MAX_GRAPH_DIM)]
        dim_cap: usize,
    },
    /// Local-structure checks: pair packing, perfect 3-LCC search, sphere growth. Exits 1 on a failed check.
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
        q: u8,
        #[arg(long, default_value_t = MAX_GRAPH_DIM)]
        dim_cap: usize,
    },
    /// Repeated draws of the random restriction set.
    Montecarlo {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = 3)]
        q: usize,
        /// Sampling parameter as `p/q` or an integer.
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Print the generator matrix of a constructed code.
    Gen {
        #[arg(long)]
        construct: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Generator matrix file: rows of 0/1, `#` comments.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Constructor spec, e.g. `hadamard:3`, `repetition:4,5`, `hadamard:2*hadamard:2`.
    #[arg(long)]
    construct: Option<String>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        }
    }
}

struct Loaded {
    code: LinearCode,
    identity: CodeIdentity,
    ltc_layout: Option<(usize, usize)>,
}

fn load(input: &Input) -> Result<Loaded> {
    if let Some(path) = &input.code {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let code = zoo::parse_code(&text).with_context(|| format!("parsing {}", path.display()))?;
        let identity = CodeIdentity::file(&path.display().to_string(), &code);
        return Ok(Loaded {
            code,
            identity,
            ltc_layout: None,
        });
    }
    let spec = input.construct.as_deref().expect("clap requires one input");
    let built = construct(spec)?;
    Ok(Loaded {
        identity: CodeIdentity::constructed(&built.name, &built.code),
        code: built.code,
        ltc_layout: built.ltc_layout,
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write<R: Render>(record: &R, output: &Output) -> Result<()> {
    emit(&record.render(output.format.into()), output.out.as_ref())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Analyze {
            input,
            output,
            dim_cap,
            q,
            timing,
        } => {
            let loaded = load(&input)?;
            let options = AnalyzeOptions {
                dim_cap,
                q,
                timing,
                ltc_layout: loaded.ltc_layout,
            };
            let report = report::analyze(&loaded.code, loaded.identity, options)?;
            write(&report, &output)?;
            Ok(report.all_certifying_pass())
        }
        Command::Curvature {
            input,
            output,
            dim_cap,
        } => {
            let loaded = load(&input)?;
            let summary = report::curvature_summary(&loaded.code, loaded.identity, dim_cap)?;
            write(&summary, &output)?;
            Ok(summary.bonnet_myers != "fail")
        }
        Command::Verify {
            input,
            output,
            q,
            dim_cap,
        } => {
            let loaded = load(&input)?;
            let summary = report::verify_summary(&loaded.code, loaded.identity, q.into(), dim_cap)?;
            write(&summary, &output)?;
            Ok(summary.pass)
        }
        Command::Montecarlo {
            input,
            output,
            q,
            a,
            seed,
            trials,
        } => {
            let loaded = load(&input)?;
            let a = report::parse_rational(&a)?;
            let summary =
                report::monte_carlo_report(&loaded.code, loaded.identity, q, a, seed, trials)?;
            write(&summary, &output)?;
            Ok(true)
        }
        Command::Gen {
            construct: spec,
            out,
        } => {
            emit(&zoo::serialize_code(&construct(&spec)?.code), out.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
