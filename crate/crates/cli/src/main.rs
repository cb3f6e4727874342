mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Reidemeister traces of n-valued circle maps.
#[derive(Debug, Parser)]
#[command(name = "rtrace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute RT, the Lefschetz number and the Nielsen lower bound.
    Rt {
        #[command(subcommand)]
        input: RtInput,
    },
    /// Verify an identity; exits 3 when the two sides differ.
    Check {
        #[command(subcommand)]
        which: CheckKind,
    },
    /// CSV table `n,d,L,N,exact` over a grid of linear maps.
    Grid {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 6)]
        d_max: i64,
        #[arg(long, value_enum, default_value_t = MethodArg::Trace)]
        method: MethodArg,
    },
    /// Print equivariant chain data for a PL map file as JSON.
    Chain {
        #[arg(long)]
        file: PathBuf,
    },
    /// Print a built-in example as JSON.
    Example {
        #[arg(value_enum)]
        which: ExampleKind,
    },
}

#[derive(Debug, Subcommand)]
enum RtInput {
    /// The linear map `t ↦ (d/n)t + j/n`.
    Linear {
        #[command(flatten)]
        map: LinearArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Trace)]
        method: MethodArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// A PL map from a JSON file.
    Pl {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Geometric)]
        method: MethodArg,
        /// Add this rational to every value before computing.
        #[arg(long, allow_hyphen_values = true)]
        nudge: Option<String>,
        /// Restrict to open arcs, e.g. `1/13:5/13,7/13:12/13`.
        #[arg(long)]
        arcs: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Equivariant chain data from a JSON file.
    Chain {
        #[arg(long)]
        file: PathBuf,
        /// Search bound for deciding classes over free groups of rank ≥ 2.
        #[arg(long)]
        bound: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Subcommand)]
enum CheckKind {
    /// Closed form, fixed points and chain traces agree.
    Oracle {
        #[command(flatten)]
        map: LinearArgs,
    },
    /// `m·RT(f) = Σ_c μ ι RT(β_c f̄)` over the m-fold cover.
    Averaging {
        #[command(flatten)]
        map: LinearArgs,
        #[arg(long)]
        cover: u64,
        #[arg(long)]
        arcs: Option<String>,
    },
    /// RT of a split map is the sum of its branches' traces.
    Splitting {
        /// A PL map whose branches each close up; defaults to `{2t, 2t + 1/2}`.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// `μ_Φ RT(f, Φf̃) = RT(f, f̃)`.
    Lift {
        #[command(flatten)]
        map: LinearArgs,
        /// An element of the semidirect product, e.g. `(1,1;(1 2))`.
        #[arg(long)]
        phi: String,
    },
    /// Isolated point, reconstruction, excision and additivity.
    Local {
        #[command(flatten)]
        map: LinearArgs,
    },
}

#[derive(Debug, Args)]
struct LinearArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Trace,
    Geometric,
    Closed,
}

impl From<MethodArg> for rtrace::Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Trace => rtrace::Method::Trace,
            MethodArg::Geometric => rtrace::Method::Geometric,
            MethodArg::Closed => rtrace::Method::Closed,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExampleKind {
    /// The perturbed degree-5 two-valued map.
    Map,
    /// Its chain data.
    Chain,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let degenerate = e
                .downcast_ref::<rtrace::Error>()
                .is_some_and(rtrace::Error::is_degenerate_geometry);
            ExitCode::from(if degenerate { 2 } else { 1 })
        }
    }
}
