//! `spectre` command-line front end.
//!
//! Exit codes: 0 success, 1 checks failed, 2 I/O or input error, 3 solver failure.
//! Errors are reported as one JSON object on stderr.

mod commands;
mod failure;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use failure::Failure;
use output::Format;

#[derive(Parser, Debug)]
#[command(name = "spectre", version, about = "Finite spectral geometry toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Tolerance; each command has its own default.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the artifact here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the axioms of a finite spectral triple.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// KO sign table, optionally with a gauge-covariance check on random unitaries.
    Ko {
        #[arg(long)]
        dim: Option<i64>,
        #[arg(long, default_value_t = 0)]
        gauge_samples: usize,
    },
    /// Product of two triples.
    Product {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "in2")]
        input2: PathBuf,
    },
    /// Connes distance between characters of a commutative triple.
    DistanceRiemannian {
        #[arg(long = "in")]
        input: PathBuf,
        /// Character index; with --to gives one distance, otherwise the full matrix.
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: Option<usize>,
    },
    /// Lorentzian distance on a lattice by path DP and/or the variational program.
    DistanceLorentzian {
        #[arg(long)]
        lattice: PathBuf,
        /// `t,x` node indices.
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, value_enum, default_value_t = commands::LorentzMethod::Both)]
        method: commands::LorentzMethod,
    },
    /// Explicit function attaining the Lorentzian distance up to epsilon.
    EqualityWitness {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
    },
    /// Dixmier-trace estimate of a singular-value profile.
    Dixmier {
        /// JSON array of singular values.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Built-in profile `(n+1)^{-p}`.
        #[arg(long)]
        power: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        length: usize,
        #[arg(long, default_value = "log_fit")]
        method: String,
        /// Rows in the profile table.
        #[arg(long, default_value_t = 40)]
        points: usize,
    },
    /// Integral of a trigonometric polynomial against its Dixmier-trace formula.
    NcIntegral {
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Fourier cutoff on the circle, modes per direction on the torus.
        #[arg(long, default_value_t = 4000)]
        cutoff: usize,
        #[command(flatten)]
        f: commands::TrigArgs,
        #[arg(long, default_value = "log_fit")]
        method: String,
    },
    /// Signature recovery on the flat two-torus.
    Signature {
        #[arg(long, default_value_t = 60)]
        modes: usize,
        #[arg(long, default_value = "lorentzian")]
        signature: String,
        /// Power of Δ_J in D²Δ_J^{-p}; defaults to n + 2.
        #[arg(long)]
        exponent: Option<i32>,
        #[command(flatten)]
        f: commands::TrigArgs,
        #[arg(long, default_value = "log_fit")]
        method: String,
    },
    /// Axioms of a temporal triple from a file or a built-in cylinder fixture.
    TemporalValidate {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// `cylinder` or `fault`.
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long, default_value_t = 1.0 / 64.0)]
        h: f64,
    },
    /// Order generated by a cone of functions, with closure and separation checks.
    OrderReconstruct {
        /// JSON list of generator vectors.
        #[arg(long)]
        cone: Option<PathBuf>,
        /// Use the light-cone coordinates of this lattice as the cone and its causal order as reference.
        #[arg(long)]
        lattice: Option<PathBuf>,
        #[arg(long)]
        poset: Option<PathBuf>,
        #[arg(long)]
        with_time: bool,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Junk forms of a triple in the given degree.
    Junk {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match commands::run(&cli) {
        Ok(out) => match out.write(cli.common.format, cli.common.out.as_deref()) {
            Ok(()) => i32::from(out.failed),
            Err(f) => report(f),
        },
        Err(f) => report(f),
    };
    std::process::exit(code);
}

fn report(f: Failure) -> i32 {
    eprintln!("{}", f.to_json());
    f.exit_code()
}
