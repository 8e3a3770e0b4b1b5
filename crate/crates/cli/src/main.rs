use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mangulations::series::{integer_coeffs, integer_zpoly, series_f, series_g, series_i, series_t};
use mangulations::verify::run_all;
use mangulations::{enumerate_dissections, phi, poly_for_dissection, run_suite, Error, FlipPoset, Guard, Suite};
use serde_json::{json, Value};

/// Exhaustive computations on m-angulations and their flip posets.
///
/// Size limits apply unless MANGULATIONS_UNGUARDED=1 is set.
#[derive(Parser)]
#[command(name = "mangulations", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every m-angulation of the (mn+2)-gon.
    Enumerate {
        #[arg(long, value_parser = positive)]
        m: usize,
        #[arg(long, value_parser = positive)]
        n: usize,
        /// Only dissections sharing no diagonal with the fan.
        #[arg(long = "final")]
        final_only: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Export the flip poset.
    Poset {
        #[arg(long, value_parser = positive)]
        m: usize,
        #[arg(long, value_parser = positive)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Emit::Dot)]
        emit: Emit,
    },
    /// Run verification suites and print their reports as JSON.
    Verify {
        #[arg(long, value_parser = positive)]
        m: usize,
        #[arg(long, value_parser = positive)]
        n: usize,
        /// all, poset, bijection, divisibility, qsym, intervals or series.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Coefficients of a generating series.
    Series {
        #[arg(long, value_parser = positive)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        order: usize,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "verbatim")]
enum Which {
    T,
    F,
    G,
    I,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

enum Failure {
    Verification,
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

/// Integers as JSON numbers when they fit, otherwise as decimal strings.
fn int_json(s: &str) -> Value {
    s.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::from(s))
}

fn print_json(v: &Value) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn enumerate(m: usize, n: usize, final_only: bool, format: Format, guard: &Guard) -> Result<(), Failure> {
    let qs = enumerate_dissections(m, n, guard)?;
    let mut rows = Vec::new();
    for q in qs.iter().filter(|q| !final_only || q.is_final()) {
        let p = poly_for_dissection(q);
        rows.push((q, p.to_string(), p.leading_monomial().to_string(), phi(q)?));
    }
    match format {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|(q, p, lm, v)| {
                    json!({
                        "diagonals": q.to_json()["diagonals"],
                        "rank": q.rank(),
                        "final": q.is_final(),
                        "dyck": v.to_string(),
                        "polynomial": p,
                        "leadingMonomial": lm,
                    })
                })
                .collect();
            print_json(&Value::Array(v))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["diagonals", "rank", "final", "dyck", "polynomial", "leading_monomial"])?;
            for (q, p, lm, v) in &rows {
                w.write_record([
                    q.to_string(),
                    q.rank().to_string(),
                    q.is_final().to_string(),
                    v.to_string(),
                    p.clone(),
                    lm.clone(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn poset(m: usize, n: usize, emit: Emit, guard: &Guard) -> Result<(), Failure> {
    let p = FlipPoset::build(m, n, guard)?;
    match emit {
        Emit::Dot => {
            io::stdout().lock().write_all(p.to_dot().as_bytes())?;
            Ok(())
        }
        Emit::Json => print_json(&p.to_json()?),
    }
}

fn verify(m: usize, n: usize, suite: &str, guard: &Guard) -> Result<(), Failure> {
    let reports = if suite == "all" {
        run_all(m, n, guard)?
    } else {
        vec![run_suite(suite.parse::<Suite>()?, m, n, guard)?]
    };
    let pass = reports.iter().all(|r| r.pass);
    print_json(&serde_json::to_value(&reports).map_err(io::Error::from)?)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn series(m: usize, order: usize, which: Which, format: Format) -> Result<(), Failure> {
    // One row per (n, k): k is 0 except for G, where it is the rank.
    let mut rows: Vec<(usize, usize, String)> = Vec::new();
    let name = match which {
        Which::G => {
            let g = series_g(m, order)?;
            for n in 1..=order {
                for (k, c) in integer_zpoly(g.coeff(n))?.coeffs().iter().enumerate() {
                    rows.push((n, k, c.to_string()));
                }
            }
            "G"
        }
        _ => {
            let (s, name) = match which {
                Which::T => (series_t(m, order)?, "T"),
                Which::F => (series_f(m, order)?, "F"),
                _ => (series_i(m, order)?, "I"),
            };
            for (i, c) in integer_coeffs(s.positive_part())?.iter().enumerate() {
                rows.push((i + 1, 0, c.to_string()));
            }
            name
        }
    };
    match format {
        Format::Json => {
            let coeffs: Value = if matches!(which, Which::G) {
                (1..=order)
                    .map(|n| rows.iter().filter(|r| r.0 == n).map(|r| int_json(&r.2)).collect::<Value>())
                    .collect()
            } else {
                rows.iter().map(|r| int_json(&r.2)).collect()
            };
            print_json(&json!({ "series": name, "m": m, "order": order, "coefficients": coeffs }))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            if matches!(which, Which::G) {
                w.write_record(["n", "rank", "coefficient"])?;
                for (n, k, c) in &rows {
                    w.write_record([n.to_string(), k.to_string(), c.clone()])?;
                }
            } else {
                w.write_record(["n", "coefficient"])?;
                for (n, _, c) in &rows {
                    w.write_record([n.to_string(), c.clone()])?;
                }
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let guard = Guard::from_env();
    let result = match cli.command {
        Command::Enumerate { m, n, final_only, format } => enumerate(m, n, final_only, format, &guard),
        Command::Poset { m, n, emit } => poset(m, n, emit, &guard),
        Command::Verify { m, n, suite } => verify(m, n, &suite, &guard),
        Command::Series { m, order, which, format } => series(m, order, which, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
