use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use totient_density::analytic::{abel_check, mertens_grid, stirling_grid, AbelInput, IntegralMode};
use totient_density::census::{bound_chain, rho_table};
use totient_density::image::{certified_preimage_limit, totient_image_up_to, ImageReport};
use totient_density::numeric::round_sig15;
use totient_density::optimizer::{k_of_x, solve_cstar};
use totient_density::sieve::{estimated_bytes, SieveTable};
use totient_density::{cache, verify, Error};

use crate::config::{Command, OutputFormat, RunConfig, CACHE_DIR_ENV};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CORRUPT_CACHE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Compute(#[from] Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0} of the verification checks failed")]
    Verification(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(Error::CorruptCache(_)) => EXIT_CORRUPT_CACHE,
            _ => EXIT_FAILURE,
        }
    }
}

/// Runs the command and returns the process exit status. Reports go to the
/// configured output; diagnostics and errors go to standard error.
pub fn run(config: &RunConfig) -> u8 {
    match execute(config) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("totdens {}: {e}", config.command_name());
            e.exit_code()
        }
    }
}

fn execute(config: &RunConfig) -> Result<(), CliError> {
    let report = match &config.command {
        Command::Sieve { limit, n } => sieve_report(config, *limit, *n)?,
        Command::Vcount { x } => {
            let table = obtain_table(config, certified_preimage_limit(*x).max(*x))?;
            let report = ImageReport::new(&totient_image_up_to(*x, &table)?);
            #[derive(Serialize)]
            struct Row {
                x: u64,
                v_count: u64,
                preimage_limit: u64,
            }
            let row = Row {
                x: report.x,
                v_count: report.v_count,
                preimage_limit: report.preimage_limit,
            };
            Report::new(&report, [row])?
        }
        Command::Gaps { x } => {
            let table = obtain_table(config, certified_preimage_limit(*x).max(*x))?;
            let report = ImageReport::new(&totient_image_up_to(*x, &table)?);
            Report::new(&report, report.records.iter())?
        }
        Command::Rho { x, kmax } => {
            let table = obtain_table(config, *x)?;
            let kmax = kmax.unwrap_or_else(|| (63 - x.leading_zeros()).max(1));
            let rho = rho_table(*x, kmax, &table)?;
            #[derive(Serialize)]
            struct Row {
                x: u64,
                k: u32,
                rho_k: u64,
            }
            let rows = (1..=kmax).map(|k| Row {
                x: *x,
                k,
                rho_k: rho.rho(k),
            });
            Report::new(&rho, rows)?
        }
        Command::Bound { x, k, c } => {
            let k = match k {
                Some(k) => *k,
                None => {
                    let c = match c {
                        Some(c) => *c,
                        None => solve_cstar(1e-12)?.c_star,
                    };
                    k_of_x(*x as f64, c)?
                }
            };
            let table = obtain_table(config, certified_preimage_limit(*x).max(*x))?;
            let image = totient_image_up_to(*x, &table)?;
            let row = bound_chain(*x, k, &table, &image)?.to_row();
            Report::new(&row, [&row])?
        }
        Command::Constant { tolerance } => {
            let s = solve_cstar(*tolerance)?;
            #[derive(Serialize)]
            struct Row {
                c_star: f64,
                exponent: f64,
                residual: f64,
                iterations: u32,
            }
            let row = Row {
                c_star: round_sig15(s.c_star),
                exponent: round_sig15(s.exponent),
                residual: round_sig15(s.residual),
                iterations: s.iterations,
            };
            Report::new(&row, [&row])?
        }
        Command::Mertens { x } => {
            let table = obtain_table(config, *x)?;
            let grid = power_grid(10, *x);
            let rows: Vec<_> = mertens_grid(&grid, &table)?
                .into_iter()
                .map(|mut r| {
                    r.sum_inv_p = round_sig15(r.sum_inv_p);
                    r.sum_logp_over_p = round_sig15(r.sum_logp_over_p);
                    r.m_estimate = round_sig15(r.m_estimate);
                    r.first_residual = round_sig15(r.first_residual);
                    r
                })
                .collect();
            Report::new(&rows, &rows)?
        }
        Command::Stirling { n } => {
            let rows: Vec<_> = stirling_grid(&power_grid(1, *n))
                .into_iter()
                .map(|mut r| {
                    r.ln_factorial = round_sig15(r.ln_factorial);
                    r.main_term = round_sig15(r.main_term);
                    r.c_estimate = round_sig15(r.c_estimate);
                    r
                })
                .collect();
            Report::new(&rows, &rows)?
        }
        Command::Abel { x, n } => {
            let rows = abel_rows(config, *x, *n)?;
            Report::new(&rows, &rows)?
        }
        Command::Verify { x_max } => {
            let table = obtain_table(config, verify::required_limit(*x_max))?;
            let outcomes = verify::run_suite(*x_max, &table);
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            for o in &outcomes {
                eprintln!(
                    "{:<32} {}  {}",
                    o.check,
                    if o.passed { "PASS" } else { "FAIL" },
                    o.detail
                );
            }
            let report = Report::new(&outcomes, &outcomes)?;
            write_report(config, &report)?;
            if failed > 0 {
                return Err(CliError::Verification(failed));
            }
            return Ok(());
        }
    };
    write_report(config, &report)
}

/// A report rendered both ways; only the requested one is written.
struct Report {
    json: String,
    csv: Vec<u8>,
}

impl Report {
    fn new<J, R, I>(json: &J, rows: I) -> Result<Self, CliError>
    where
        J: Serialize + ?Sized,
        R: Serialize,
        I: IntoIterator<Item = R>,
    {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for row in rows {
            writer.serialize(row)?;
        }
        let csv = writer.into_inner().map_err(|e| e.into_error())?;
        Ok(Report {
            json: serde_json::to_string_pretty(json)?,
            csv,
        })
    }
}

fn write_report(config: &RunConfig, report: &Report) -> Result<(), CliError> {
    let mut out: Box<dyn Write> = match &config.output_path {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    match config.output_format {
        OutputFormat::Json => writeln!(out, "{}", report.json)?,
        OutputFormat::Csv => out.write_all(&report.csv)?,
    }
    out.flush()?;
    Ok(())
}

/// `from, 10 from, 100 from, ...` up to `top`, with `top` appended.
fn power_grid(from: u64, top: u64) -> Vec<u64> {
    let mut grid: Vec<u64> = std::iter::successors(Some(from), |v| v.checked_mul(10))
        .take_while(|&v| v <= top)
        .collect();
    if grid.last() != Some(&top) {
        grid.push(top);
    }
    grid
}

fn cache_path(config: &RunConfig) -> Option<PathBuf> {
    config.cache_path.clone().or_else(|| {
        std::env::var_os(CACHE_DIR_ENV).map(|dir| PathBuf::from(dir).join("sieve.tatl"))
    })
}

/// Loads the cached table when it is valid and large enough, otherwise
/// builds one and refreshes the cache. A corrupt cache is an error and is
/// never overwritten.
fn obtain_table(config: &RunConfig, limit: u64) -> Result<SieveTable, CliError> {
    let path = cache_path(config);
    if let Some(path) = path.as_ref().filter(|p| p.exists()) {
        let table = cache::load(path)?;
        if table.limit() >= limit {
            eprintln!("loaded sieve to {} from {}", table.limit(), path.display());
            return Ok(table);
        }
        eprintln!(
            "cached sieve limit {} is below {limit}; rebuilding",
            table.limit()
        );
    }
    let started = Instant::now();
    let table = SieveTable::build_with_ceiling(limit, config.memory_ceiling)?;
    eprintln!(
        "built sieve to {limit} (~{} MB) in {:.2?}",
        estimated_bytes(limit) >> 20,
        started.elapsed()
    );
    if let Some(path) = path {
        cache::save(&table, &path)?;
        eprintln!("wrote sieve cache {}", path.display());
    }
    Ok(table)
}

fn sieve_report(config: &RunConfig, limit: u64, n: Option<u64>) -> Result<Report, CliError> {
    let table = obtain_table(config, limit)?;
    #[derive(Serialize)]
    struct Summary {
        limit: u64,
        prime_count: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        query: Option<Query>,
    }
    #[derive(Serialize)]
    struct Query {
        n: u64,
        spf: u64,
        phi: u64,
        mobius: i8,
        omega: u8,
        factors: Vec<(u64, u32)>,
    }
    #[derive(Serialize)]
    struct Row {
        limit: u64,
        prime_count: u64,
        n: Option<u64>,
        spf: Option<u64>,
        phi: Option<u64>,
        mobius: Option<i8>,
        omega: Option<u8>,
    }
    let query = match n {
        Some(n) => Some(Query {
            n,
            spf: table.spf(n)?,
            phi: table.phi(n)?,
            mobius: table.mobius(n)?,
            omega: table.omega(n)?,
            factors: table.factorize(n)?.factors,
        }),
        None => None,
    };
    let summary = Summary {
        limit: table.limit(),
        prime_count: table.primes().len() as u64,
        query,
    };
    let row = Row {
        limit: summary.limit,
        prime_count: summary.prime_count,
        n: summary.query.as_ref().map(|q| q.n),
        spf: summary.query.as_ref().map(|q| q.spf),
        phi: summary.query.as_ref().map(|q| q.phi),
        mobius: summary.query.as_ref().map(|q| q.mobius),
        omega: summary.query.as_ref().map(|q| q.omega),
    };
    Report::new(&summary, [row])
}

#[derive(Serialize)]
struct AbelRow {
    family: &'static str,
    x: f64,
    mode: String,
    discrepancy: f64,
}

fn abel_rows(config: &RunConfig, x: Option<u64>, panels: u32) -> Result<Vec<AbelRow>, CliError> {
    let int_x = x.unwrap_or(100);
    let prime_x = x.unwrap_or(10_000);
    let table = obtain_table(config, prime_x)?;

    let naturals: Vec<f64> = (1..=int_x).map(|k| k as f64).collect();
    let ones = vec![1.0; naturals.len()];
    let primes: Vec<f64> = table.primes_up_to(prime_x).iter().map(|&p| p as f64).collect();
    let prime_ones = vec![1.0; primes.len()];
    let inv = |t: f64| 1.0 / t;
    let inv_prime = |t: f64| -1.0 / (t * t);

    let families: [(&str, AbelInput); 3] = [
        ("constant", AbelInput {
            points: &naturals,
            weights: &ones,
            f: &|_| 1.0,
            f_prime: Some(&|_| 0.0),
            x: int_x as f64,
        }),
        ("log_factorial", AbelInput {
            points: &naturals,
            weights: &ones,
            f: &f64::ln,
            f_prime: Some(&inv),
            x: int_x as f64,
        }),
        ("prime_reciprocals", AbelInput {
            points: &primes,
            weights: &prime_ones,
            f: &inv,
            f_prime: Some(&inv_prime),
            x: prime_x as f64,
        }),
    ];
    let mut rows = Vec::new();
    for (family, input) in &families {
        for mode in [IntegralMode::ExactSegments, IntegralMode::Quadrature { panels }] {
            rows.push(AbelRow {
                family,
                x: input.x,
                mode: match mode {
                    IntegralMode::ExactSegments => "exact".to_string(),
                    IntegralMode::Quadrature { panels } => format!("quadrature:{panels}"),
                },
                discrepancy: round_sig15(abel_check(input, mode)?),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(power_grid(10, 10), vec![10]);
        assert_eq!(power_grid(10, 3), vec![3]);
        assert_eq!(power_grid(10, 1234), vec![10, 100, 1000, 1234]);
        assert_eq!(power_grid(1, 100), vec![1, 10, 100]);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Compute(Error::CorruptCache("x".into())).exit_code(), 3);
        assert_eq!(CliError::Compute(Error::ZeroLimit).exit_code(), 1);
        assert_eq!(CliError::Verification(2).exit_code(), 1);
    }
}
