//! `mz`: nets, Chebyshev constants, approximation fits and
//! Marcinkiewicz-Zygmund experiments from the command line.
//!
//! Exit codes: 0 success, 1 a checked inequality failed, 2 usage or input error.

mod artifact;
mod commands;
mod range;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad parameter values or unreadable input.
    Usage(String),
    /// A checked mathematical inequality does not hold.
    Assertion(String),
    Io(String),
}

impl From<mz_core::Error> for CliError {
    fn from(e: mz_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "mz", version, about = "Sampling nets and discretization experiments for entire functions of exponential type")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Out {
    /// Output file; stdout when omitted. CSV outputs also get a `<file>.json` sidecar.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct WindowArgs {
    /// Window center as a comma list; the origin when omitted.
    #[arg(long, value_name = "X1,X2,..")]
    pub window_center: Option<String>,
    /// Window half-side; the bounding cube of the input when omitted.
    #[arg(long)]
    pub window_half: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Covering verdict, separation and packing multiplicity of a point set.
    NetCheck {
        /// Point CSV, one point per line, no header.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        delta: f64,
        /// Also report the packing multiplicity for this δ₁.
        #[arg(long)]
        delta1: Option<f64>,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = mz_core::nets::DEFAULT_MAX_DEPTH)]
        max_depth: u32,
        /// Exit 1 unless the window is covered.
        #[arg(long)]
        expect_covered: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Greedy δ-thinning; writes the kept points as CSV.
    NetThin {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Splits the cubes Q_h(X) into families of pairwise disjoint cubes.
    NetPartition {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        h: f64,
        /// Intersection bound N; measured when omitted.
        #[arg(long)]
        n_bound: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Discretization constants C1, C2, C3, d, δ* and the intersection bound.
    Constants {
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        delta1: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        m: usize,
        /// Exponent q ≥ 1 or `inf`.
        #[arg(long, default_value = "2")]
        q: mz_core::Lq,
        #[arg(long, default_value_t = 0)]
        n_mult: usize,
        #[arg(long, default_value_t = mz_core::verify::DEFAULT_C_MQ)]
        c_mq: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Root γ₀(α) of ψ(τ) + ln α.
    Gamma0 {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Decimal places printed on stdout.
        #[arg(long, default_value_t = 4)]
        digits: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Root τ₀(b) of G(τ, b).
    Tau0 {
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 4)]
        digits: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Tensor Chebyshev fit of a test function on [−b, b]^m.
    ChebFit {
        /// exp: e^{σΣx}; cos: cos(σΣx); sinc: sin(σ|x|)/|x|.
        #[arg(long, default_value = "exp")]
        function: String,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Gauss-Chebyshev nodes per axis; chosen from n, σ and b when omitted.
        #[arg(long)]
        k: Option<usize>,
        /// For `exp`, exit 1 if the measured error exceeds the a priori bound.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Approximation rate of e^{σw} on [−n/(στ), n/(στ)]; CSV rows per n.
    RateExperiment {
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 2.0)]
        tau: f64,
        /// Degrees, e.g. `20:40:4`.
        #[arg(long)]
        n: String,
        #[command(flatten)]
        out: Out,
    },
    /// Lattice experiments: sup inequality, upper MZ bound, perturbation.
    MzVerify(commands::MzVerifyArgs),
    /// Discretization factor of random exponential polynomials on Chebyshev knot grids.
    CubeMz {
        /// Degrees N, e.g. `1:6:1`.
        #[arg(long, default_value = "1:6:1")]
        n: String,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Knot grid factors c (cN + 1 knots per axis), e.g. `2,4,8`.
        #[arg(long, default_value = "4")]
        c: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Allowed factor excess γ: exit 1 if some factor exceeds 1 + γ.
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        /// Draw real coefficients in [0, 1] instead of the complex unit square.
        #[arg(long)]
        positive: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Shifted sinc that is small on a net with a hole larger than 1/(C3 σ).
    Witness {
        /// Net CSV; a punched lattice is generated when omitted.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0.5)]
        c3: f64,
        /// Dimension of the generated lattice.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Spacing of the generated lattice.
        #[arg(long, default_value_t = 0.5)]
        spacing: f64,
        /// Half-side of the generated lattice.
        #[arg(long, default_value_t = 20.0)]
        half: f64,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        out: Out,
    },
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.command, &argv[1..]) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Assertion(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            ExitCode::from(2)
        }
    }
}
