use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hesseig_cli::config::{self, Command, RunConfig};
use hesseig_cli::runner::{self, RunError, RunOutcome};

/// Eigenvalues, Dirichlet problems and inequality audits for twisted complex
/// m-Hessian operators on balls and boxes in ℂⁿ.
#[derive(Parser)]
#[command(name = "hesseig", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// run configuration (key = value text)
    #[arg(long)]
    config: PathBuf,
    /// output directory (overrides config `out`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed (overrides config `seed`)
    #[arg(long)]
    seed: Option<u64>,
    /// solver tolerance (overrides config `tol`)
    #[arg(long)]
    tol: Option<f64>,
    /// iteration budget (overrides config `max_iter`)
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// First eigenvalue and eigenfunction by inverse iteration
    Eig(Common),
    /// Dirichlet problem (dd^c u)^m ∧ β^{n−m} = f βⁿ
    Dirichlet(Common),
    /// Semilinear problem (dd^c u)^m ∧ β^{n−m} = G(·,u) μ
    Semilinear(Common),
    /// Condenser capacity c_m(K) with the energy/mass factor audit
    Capacity(Common),
    /// m-subharmonic envelope / relative extremal function
    Envelope(Common),
    /// Inequality and scaling audits over seeded corpora
    Check {
        /// blocki | sobolev | capacity-energy | monotonicity | dini
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Integrability/Hölder exponents ℓ, p*, τ, k
    Exponents(Common),
}

fn load_config(common: &Common, command: Command) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| format!("cannot read {}: {e}", common.config.display()))?;
    let mut cfg = config::parse_config(&text).map_err(|e| e.to_string())?;
    if let Some(declared) = cfg.command {
        if declared != command {
            return Err(format!(
                "config declares command = {}, but '{}' was invoked",
                declared.name(),
                command.name()
            ));
        }
    }
    if let Some(out) = &common.out {
        cfg.out_dir = out.clone();
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = common.tol {
        cfg.tol = tol;
    }
    if let Some(max_iter) = common.max_iter {
        cfg.max_iter = max_iter;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not errors
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };

    let (command, check_name, common) = match &cli.command {
        Cmd::Eig(c) => (Command::Eig, None, c),
        Cmd::Dirichlet(c) => (Command::Dirichlet, None, c),
        Cmd::Semilinear(c) => (Command::Semilinear, None, c),
        Cmd::Capacity(c) => (Command::Capacity, None, c),
        Cmd::Envelope(c) => (Command::Envelope, None, c),
        Cmd::Check { name, common } => (Command::Check, Some(name.as_str()), common),
        Cmd::Exponents(c) => (Command::Exponents, None, c),
    };

    let cfg = match load_config(common, command) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };

    match runner::run(command, check_name, &cfg) {
        Ok(RunOutcome::Converged) => ExitCode::SUCCESS,
        Ok(RunOutcome::NotConverged(msg)) => {
            eprintln!("not converged: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(RunError::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
