use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use totient_density::census::MAX_BOUND_K;
use totient_density::sieve::DEFAULT_MEMORY_CEILING;

/// Environment variable naming a directory for the default sieve cache.
pub const CACHE_DIR_ENV: &str = "TOTDENS_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "totdens", version, about = "Totient-image census, bounds and numeric checks")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Sieve cache file; loaded when valid, written after a fresh build.
    #[arg(long = "cache", global = true, value_name = "PATH")]
    pub cache_path: Option<PathBuf>,

    #[arg(long = "format", global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output_format: OutputFormat,

    /// Write the report here instead of standard output.
    #[arg(long = "output", global = true, value_name = "PATH")]
    pub output_path: Option<PathBuf>,

    /// Refuse sieves whose estimated footprint exceeds this many bytes.
    #[arg(long, global = true, default_value_t = DEFAULT_MEMORY_CEILING, value_name = "BYTES")]
    pub memory_ceiling: u64,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Build (or load) the arithmetic-function tables and optionally query one n.
    Sieve {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: Option<u64>,
    },
    /// V(x), the number of totient values up to x.
    Vcount {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        x: u64,
    },
    /// Record gaps between consecutive totient values up to x.
    Gaps {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        x: u64,
    },
    /// Counts of n <= x by number of distinct prime factors.
    Rho {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        x: u64,
        /// Defaults to floor(log2 x), which covers every n <= x.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
        kmax: Option<u32>,
    },
    /// Exact check of V(x) <= rho_1 + ... + rho_k + x/2^k.
    Bound {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        x: u64,
        /// Defaults to ceil(c ln ln x).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_BOUND_K as i64))]
        k: Option<u32>,
        /// Balancing constant used when --k is absent; defaults to the optimum.
        #[arg(long, value_parser = parse_unit_interval)]
        c: Option<f64>,
    },
    /// Solve 1 - c + c ln c = c ln 2 for the optimal exponent.
    Constant {
        #[arg(long = "tol", value_parser = parse_tolerance, default_value = "1e-12")]
        tolerance: f64,
    },
    /// Mertens sums at powers of ten up to x.
    Mertens {
        #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
        x: u64,
    },
    /// Stirling constant estimates at powers of ten up to n.
    Stirling {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Abel summation identity on the built-in test families.
    Abel {
        /// Endpoint for all families (default: 100 for the integer families, 10^4 for primes).
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        x: Option<u64>,
        /// Quadrature panels per segment.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..), default_value_t = 64)]
        n: u32,
    },
    /// Run the full property suite.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(100..), default_value_t = 100_000)]
        x_max: u64,
    },
}

impl RunConfig {
    pub fn command_name(&self) -> &'static str {
        match self.command {
            Command::Sieve { .. } => "sieve",
            Command::Vcount { .. } => "vcount",
            Command::Gaps { .. } => "gaps",
            Command::Rho { .. } => "rho",
            Command::Bound { .. } => "bound",
            Command::Constant { .. } => "constant",
            Command::Mertens { .. } => "mertens",
            Command::Stirling { .. } => "stirling",
            Command::Abel { .. } => "abel",
            Command::Verify { .. } => "verify",
        }
    }
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 1e-14 && v.is_finite() {
        Ok(v)
    } else {
        Err("tolerance must be a finite number >= 1e-14".into())
    }
}

fn parse_unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("c must lie strictly between 0 and 1".into())
    }
}

/// Parses a full argument list, without the program name.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = std::iter::once(OsString::from("totdens")).chain(argv.into_iter().map(Into::into));
    RunConfig::try_parse_from(args)
}
