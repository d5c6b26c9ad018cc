//! Argument parsing and exit codes for the `fracgs` binary.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::commands::Command;
use super::config::RunConfig;
use super::manifest::RunWriter;

/// Environment variable naming the root for default run directories.
pub const OUT_ROOT_VAR: &str = "FRACGS_OUT_ROOT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fracgs", version, about = "Constrained minimizers of fractional-gradient energies")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Run directory; defaults to `$FRACGS_OUT_ROOT/<command>-<hash>`
    /// (root `runs` when unset).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress the summary on standard output.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Sample the growth and scaling hypotheses on the default lattice.
    CheckHypotheses(RunArgs),
    /// Minimize J on the mass sphere.
    Minimize(RunArgs),
    /// Minimize at each mass in `c_values`.
    ScanMass(RunArgs),
    /// Evaluate J along dilations of a profile.
    DilationTest(RunArgs),
    /// Check the splitting inequalities on `pairs`.
    SubaddTest(RunArgs),
    /// Check I_{theta c} <= theta^2 I_c along `thetas`.
    ThetaTest(RunArgs),
    /// Classify a sequence as vanishing, dichotomy or compactness.
    CcClassify(RunArgs),
    /// Compare the spectral and quadrature fractional seminorms.
    ValidateKinetic(RunArgs),
}

impl Sub {
    fn split(self) -> (Command, RunArgs) {
        match self {
            Sub::CheckHypotheses(a) => (Command::CheckHypotheses, a),
            Sub::Minimize(a) => (Command::Minimize, a),
            Sub::ScanMass(a) => (Command::ScanMass, a),
            Sub::DilationTest(a) => (Command::DilationTest, a),
            Sub::SubaddTest(a) => (Command::SubaddTest, a),
            Sub::ThetaTest(a) => (Command::ThetaTest, a),
            Sub::CcClassify(a) => (Command::CcClassify, a),
            Sub::ValidateKinetic(a) => (Command::ValidateKinetic, a),
        }
    }
}

fn default_out(command: Command, cfg: &RunConfig) -> PathBuf {
    let root = std::env::var_os(OUT_ROOT_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("runs"));
    root.join(format!("{}-{}", command.name(), &cfg.hash()[..12]))
}

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (command, args) = cli.command.split();
    if !Path::new(&args.config).is_file() {
        eprintln!("error: config file {} not found", args.config.display());
        return EXIT_USAGE;
    }
    let cfg = match RunConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            return EXIT_DOMAIN;
        }
    };
    let dir = args.out.unwrap_or_else(|| default_out(command, &cfg));
    let mut writer = match RunWriter::create(&dir) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            return EXIT_DOMAIN;
        }
    };
    let outcome = command.run(&cfg, &mut writer);
    let status = match &outcome {
        Ok(_) => "ok",
        Err(e) => e.name(),
    };
    if let Err(e) = writer.finish(command.name(), &cfg, status) {
        eprintln!("{}: {e}", e.name());
        return EXIT_DOMAIN;
    }
    match outcome {
        Ok(summary) => {
            if !args.quiet {
                println!("{summary}");
                println!("run directory: {}", dir.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            EXIT_DOMAIN
        }
    }
}
