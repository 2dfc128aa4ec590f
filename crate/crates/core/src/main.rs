use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use xclab::cli::{cmd_gadget, cmd_sample, cmd_separation, cmd_verify, ExperimentConfig, Exit, Format, GadgetKind, Suite};
use xclab::{Error, Result};

/// Exact experiments on extension complexity, nonnegative and PSD rank.
#[derive(Parser)]
#[command(name = "xclab", version)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// JSON experiment configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Single n, or the first n of a range ending at --n-max.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    n_max: Option<usize>,
    /// Wall-clock limit per search; output is reproducible only if it is never hit.
    #[arg(long, global = true)]
    budget_ms: Option<u64>,
    /// Deterministic step budget per rectangle-cover search.
    #[arg(long, global = true)]
    cover_steps: Option<u64>,
    #[arg(long, global = true)]
    max_rectangles: Option<usize>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// CSV of rank, cover and nonnegative-rank bounds against the PSD-rank upper bound of M(n).
    Separation,
    /// Run an invariant suite and print a JSON summary.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Export a gadget.
    Gadget {
        #[arg(value_enum)]
        kind: GadgetKind,
        #[arg(long, value_enum)]
        format: Format,
    },
    /// Monte Carlo CSV for the protocol from the PSD factorization of M(n) (or --input).
    Sample,
}

fn config(o: &Overrides) -> Result<ExperimentConfig> {
    let mut c = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        None => ExperimentConfig::default(),
    };
    match (o.n, o.n_max) {
        (Some(n), Some(m)) => (c.n_min, c.n_max) = (n, m),
        (Some(n), None) => (c.n_min, c.n_max) = (n, n),
        (None, Some(m)) => c.n_max = m,
        (None, None) => {}
    }
    if o.budget_ms.is_some() {
        c.budget_ms = o.budget_ms;
    }
    c.cover_steps = o.cover_steps.unwrap_or(c.cover_steps);
    c.max_rectangles = o.max_rectangles.unwrap_or(c.max_rectangles);
    c.samples = o.samples.unwrap_or(c.samples);
    c.seed = o.seed.unwrap_or(c.seed);
    if o.out.is_some() {
        c.out = o.out.clone();
    }
    if o.input.is_some() {
        c.input = o.input.clone();
    }
    c.validate()?;
    Ok(c)
}

fn emit(c: &ExperimentConfig, text: &str) -> Result<()> {
    match &c.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Exit> {
    let c = config(&cli.overrides)?;
    match cli.command {
        Command::Separation => {
            let report = cmd_separation(&c)?;
            emit(&c, &report.to_csv()?)?;
            if !report.consistent() || report.rows.iter().any(|r| !r.psd_verified) {
                eprintln!("separation report is inconsistent");
                Ok(Exit::AssertionFailure)
            } else if report.partial() {
                eprintln!("cover search ran out of budget; cover columns are bounds only");
                Ok(Exit::BudgetPartial)
            } else {
                Ok(Exit::Pass)
            }
        }
        Command::Verify { suite } => {
            let summary = cmd_verify(suite, &c)?;
            let json = serde_json::to_string_pretty(&summary).map_err(|e| Error::Codec(e.to_string()))?;
            emit(&c, &(json + "\n"))?;
            Ok(if summary.passed { Exit::Pass } else { Exit::AssertionFailure })
        }
        Command::Gadget { kind, format } => {
            emit(&c, &cmd_gadget(kind, c.n_min, format)?)?;
            Ok(Exit::Pass)
        }
        Command::Sample => {
            emit(&c, &cmd_sample(c.n_min, &c)?)?;
            Ok(Exit::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exit = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        Exit::for_error(&e)
    });
    ExitCode::from(exit.code() as u8)
}
