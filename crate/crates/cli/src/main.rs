use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use psproj_cli::{run_dump, run_verify, Algorithm, CliError, RunConfig};
use psproj_core::report::Status;

#[derive(Parser)]
#[command(
    name = "psproj",
    version,
    about = "Symbols of pseudodifferential projections: build and verify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a model and run every check.
    Verify(Flags),
    /// Write the projection symbols as text.
    Dump(Flags),
}

#[derive(Args)]
struct Flags {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// full, simplified or both
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    twist: Option<f64>,
    /// Skip the rebuild from perturbed initial symbols.
    #[arg(long)]
    no_tails: bool,
    /// JSON report path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Markdown report path.
    #[arg(long)]
    markdown: Option<PathBuf>,
    /// Symbol dump path.
    #[arg(long)]
    dump: Option<PathBuf>,
}

impl Flags {
    fn config(self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(m) = self.model {
            cfg.model = m
                .parse()
                .map_err(|e: psproj_core::Error| CliError::Config(e.to_string()))?;
        }
        if let Some(a) = self.algorithm {
            cfg.algorithm = match a.as_str() {
                "full" => Algorithm::Full,
                "simplified" => Algorithm::Simplified,
                "both" => Algorithm::Both,
                _ => return Err(CliError::Config(format!("unknown algorithm `{a}`"))),
            };
        }
        macro_rules! set {
            ($($flag:ident => $($field:ident).+),*) => {$(
                if let Some(v) = self.$flag { cfg.$($field).+ = v; }
            )*};
        }
        set!(order => order, samples => samples, seed => params.seed, tol => tolerance,
             lambda => params.lambda, mu => params.mu, twist => params.twist);
        if self.no_tails {
            cfg.tail_uniqueness = false;
        }
        if self.report.is_some() {
            cfg.report = self.report;
        }
        if self.markdown.is_some() {
            cfg.markdown = self.markdown;
        }
        if self.dump.is_some() {
            cfg.dump = self.dump;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn verify(cfg: RunConfig) -> Result<i32, CliError> {
    let report = run_verify(&cfg)?;
    if cfg.dump.is_some() && report.error.is_none() {
        run_dump(&cfg)?;
    }
    for r in report.rows.iter().filter(|r| r.status == Status::Fail) {
        println!(
            "FAIL {} [{}] order {:?}: residual {:.3e} > {:.1e}",
            r.check, r.index, r.order, r.residual, r.tolerance
        );
    }
    let s = &report.summary;
    println!(
        "{}: {} checks, {} passed, {} failed, {} not applicable",
        cfg.model, s.total, s.passed, s.failed, s.not_applicable
    );
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(f) => f.config().and_then(verify),
        Command::Dump(f) => f.config().and_then(|cfg| {
            let text = run_dump(&cfg)?;
            if cfg.dump.is_none() {
                print!("{text}");
            }
            Ok(0)
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
