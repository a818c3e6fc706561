use clap::{Args, Parser, Subcommand};
use parhyp::cli;
use parhyp::config::RunConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "parhyp",
    version,
    about = "Mixed parabolic-hyperbolic transmission problem: solve, verify, and spectral experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named built-in configuration (zero, hyperbolic-constant, smooth-bump).
    #[arg(long)]
    preset: Option<String>,
    /// Output directory (overrides the config's output.directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Double every grid and quadrature resolution.
    #[arg(long)]
    refine: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the boundary value problem and write solution, trace and
    /// residual files.
    Solve(CommonArgs),
    /// Compute the trace of the squared inverse and the Nystrom spectrum.
    Spectrum(CommonArgs),
    /// Run the oracle suites (Volterra, heat kernel, sign resolution,
    /// manufactured solution, stability probe).
    Verify(CommonArgs),
    /// Evaluate the solution kernel at one point pair.
    KernelEval {
        #[command(flatten)]
        common: CommonArgs,
        x: f64,
        y: f64,
        x1: f64,
        y1: f64,
    },
}

fn load_config(common: &CommonArgs) -> parhyp::Result<RunConfig> {
    let mut cfg = match (&common.config, &common.preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            RunConfig::from_json(&text)?
        }
        (None, Some(name)) => RunConfig::preset(name)?,
        (Some(_), Some(_)) => {
            return Err(parhyp::Error::Config(
                "--config and --preset are mutually exclusive".into(),
            ))
        }
        (None, None) => RunConfig::default(),
    };
    if common.refine {
        cfg = cfg.refined();
    }
    if let Some(out) = &common.out {
        cfg.output.directory = out.clone();
    }
    Ok(cfg)
}

fn run() -> parhyp::Result<i32> {
    if let Ok(threads) = std::env::var("PARHYP_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Solve(c) => {
            let cfg = load_config(&c)?;
            let dir = cfg.output.directory.clone();
            cli::cmd_solve(&cfg, &dir)
        }
        Command::Spectrum(c) => {
            let cfg = load_config(&c)?;
            let dir = cfg.output.directory.clone();
            cli::cmd_spectrum(&cfg, &dir)
        }
        Command::Verify(c) => {
            let cfg = load_config(&c)?;
            let dir = cfg.output.directory.clone();
            cli::cmd_verify(&cfg, &dir)
        }
        Command::KernelEval {
            common,
            x,
            y,
            x1,
            y1,
        } => {
            let cfg = load_config(&common)?;
            cli::cmd_kernel_eval(&cfg, [x, y, x1, y1])
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            // machine-readable error on stdout, human text on stderr
            let payload = serde_json::json!({
                "error": e.to_string(),
                "kind": match &e {
                    parhyp::Error::Config(_) => "config",
                    parhyp::Error::Io(_) => "io",
                    _ => "numeric",
                },
            });
            println!("{payload}");
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
