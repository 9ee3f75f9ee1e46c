use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lagmult::experiments::{run, summary_path, Experiment, ExperimentConfig, Outcome};

#[derive(Parser)]
#[command(name = "lagmult", version, about = "Laguerre multiplier experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suite.
    Verify(Common),
    /// Compare wbv_{2,1} norms with M^2_{alpha;alpha+1} singular-value estimates.
    WbvEq(Common),
    /// Abel-Poisson norms at orders alpha and beta.
    MpinfEmbed(Common),
    /// Search lower bounds over the embedding grids.
    EmbedSweep(Common),
    /// Compare wbv_{2,2} norms with M^2_{alpha;alpha+2} singular-value estimates.
    Charex(Common),
    /// Random two-weight Hardy instances.
    Hardy(Common),
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Exponent, a number or `inf`.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    /// Basis size.
    #[arg(long = "N")]
    n: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Comma-separated sequence specs, e.g. `constant:1,abel:0.9,riesz:128:1.5`.
    #[arg(long)]
    bank: Option<String>,
    /// CSV destination; the JSON summary goes next to it. Without it the CSV goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<String>,
    /// Fault injection for testing the identity suite.
    #[arg(long, hide = true)]
    sabotage: Option<String>,
}

impl Command {
    fn split(self) -> (Experiment, Common) {
        match self {
            Command::Verify(c) => (Experiment::Verify, c),
            Command::WbvEq(c) => (Experiment::WbvEquivalence, c),
            Command::MpinfEmbed(c) => (Experiment::MpinftyEmbedding, c),
            Command::EmbedSweep(c) => (Experiment::EmbeddingSweep, c),
            Command::Charex(c) => (Experiment::Charex, c),
            Command::Hardy(c) => (Experiment::HardySuite, c),
        }
    }
}

fn build_config(exp: Experiment, args: Common) -> lagmult::Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_file(path, Some(exp))?,
        None => ExperimentConfig::defaults(exp),
    };
    let flags = [
        ("alpha", args.alpha),
        ("beta", args.beta),
        ("p", args.p),
        ("q", args.q),
        ("N", args.n),
        ("seed", args.seed),
        ("bank", args.bank),
        ("workers", args.workers),
        ("sabotage", args.sabotage),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    if let Some(out) = args.out {
        cfg.out = Some(out);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn report(outcome: &Outcome) {
    for c in &outcome.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        eprintln!("{status} {}: {:.3e} (limit {:.3e}) {}", c.name, c.value, c.threshold, c.detail);
    }
}

fn main() -> ExitCode {
    let (exp, args) = Cli::parse().command.split();
    let cfg = match build_config(exp, args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("lagmult {exp}: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("lagmult {exp}: {e}");
            return ExitCode::from(1);
        }
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = outcome.write(path) {
                eprintln!("lagmult {exp}: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            eprintln!("wrote {} and {}", path.display(), summary_path(path).display());
        }
        None => print!("{}", outcome.csv()),
    }
    report(&outcome);
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
