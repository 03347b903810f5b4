use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stratakit::{run, Command, RunConfig, Which};

#[derive(Parser)]
#[command(
    name = "stratakit",
    version,
    about = "Orbit-type and reduced-space stratifications of linear torus-by-finite actions"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// Action spec file.
    spec: PathBuf,
    #[arg(long, env = "STRATAKIT_SEED", default_value_t = stratakit::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = stratakit::DEFAULT_SAMPLES)]
    samples: usize,
    /// Residual tolerance of the invariant relations.
    #[arg(long, default_value_t = stratakit::DEFAULT_TOL)]
    tol: f64,
    /// Report (or DOT) destination.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Isotropy classes, witnesses and Hasse edges.
    Lattice(Common),
    /// Pieces and stratification lattices of the reduced space.
    Reduce(Common),
    /// Sampling checks of the fiber structure and invariant relations.
    Verify(Common),
    /// DOT digraph of one stratification lattice.
    ExportDot {
        #[command(flatten)]
        common: Common,
        /// symplectic, coisotropic or secondary:<class-id>.
        #[arg(long, default_value = "coisotropic")]
        which: Which,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, common, which) = match cli.command {
        Cmd::Lattice(c) => (Command::Lattice, c, Which::Coisotropic),
        Cmd::Reduce(c) => (Command::Reduce, c, Which::Coisotropic),
        Cmd::Verify(c) => (Command::Verify, c, Which::Coisotropic),
        Cmd::ExportDot { common, which } => (Command::ExportDot, common, which),
    };
    let config = RunConfig {
        command,
        spec_path: common.spec,
        seed: common.seed,
        samples: common.samples,
        tol: common.tol,
        which,
        output_path: common.out,
    };
    let mut out = String::new();
    let result = run(&config, &mut out);
    print!("{out}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
