use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use feasible::document::{canonical_json, parse_document, selection_document, Document};
use feasible::rational::{format_decimal, format_rational, parse_rational, Rational};
use feasible::selection::{exact_distance_distribution, sample_distance_ref};
use feasible::subadditive::fw_table;
use feasible::verify::{verify_construction, verify_transform};
use feasible::{build_dyadic_space, build_transform, sample_theta, Spec, StreamFactory};
use num_traits::{One, Pow, Zero};

const EXIT_VERIFY: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "feasible",
    version,
    about = "Build metric measure spaces whose distance has a prescribed distribution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input document: a target spec, or the output of `synthesize`.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,

    /// Output file (default: standard output).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Number of samples.
    #[arg(long, global = true)]
    n: Option<usize>,

    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Truncation budget for lazily enumerated targets: a decimal, `p/q`, or
    /// scientific form such as `1e-9`.
    #[arg(long, global = true, default_value = "1e-9", value_parser = parse_delta)]
    delta: Rational,

    /// Number of grid points.
    #[arg(long, global = true, default_value_t = 101)]
    grid: usize,

    /// Comma-separated alpha values (fw-table).
    #[arg(long, global = true, value_delimiter = ',', default_value = "0.02,0.05,0.1,0.125")]
    alpha: Vec<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Rational)]
    format: Format,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Write the selection construction or transform record for a spec.
    Synthesize,
    /// Write n sampled distances as CSV.
    Sample,
    /// Write the exact distance law, or the target CDF on a grid.
    Dist,
    /// Run every check and write a verification report.
    Verify,
    /// Tabulate F_W for each alpha.
    FwTable,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Rational,
    Decimal,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<feasible::Error> for Failure {
    fn from(e: feasible::Error) -> Self {
        invalid(e.to_string())
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn validate(cli: &Cli) -> Result<(), Failure> {
    if cli.n == Some(0) {
        return Err(invalid("--n must be at least 1"));
    }
    if !(cli.delta > Rational::zero() && cli.delta < Rational::one()) {
        return Err(invalid("--delta must lie in (0, 1)"));
    }
    if cli.grid < 2 {
        return Err(invalid("--grid must be at least 2"));
    }
    Ok(())
}

fn read_document(cli: &Cli) -> Result<Document, Failure> {
    let path = cli.spec.as_ref().ok_or_else(|| invalid("--spec is required"))?;
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    Ok(parse_document(&text)?)
}

fn write_output(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

/// Exact value of a decimal, `p/q`, or `mantissa e exponent` string.
fn parse_delta(text: &str) -> Result<Rational, String> {
    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|e| e.to_string())?),
        None => (text, 0),
    };
    let m = parse_rational(mantissa).map_err(|e| e.to_string())?;
    let ten = Rational::from_integer(10.into());
    Ok(m * ten.pow(exponent))
}

fn format_value(cli: &Cli, r: &Rational) -> String {
    match cli.format {
        Format::Rational => format_rational(r),
        Format::Decimal => format_decimal(r),
    }
}

/// Resolves the input to a construction (with its target, if known) or a
/// transform, synthesizing from a spec when needed.
enum Resolved {
    Selection {
        construction: feasible::SelectionConstruction,
        target: Option<feasible::DiscreteSpec>,
    },
    Transform(feasible::TransformRecord),
}

fn resolve(cli: &Cli, doc: Document) -> Result<Resolved, Failure> {
    Ok(match doc {
        Document::Spec(Spec::Discrete(d)) => Resolved::Selection {
            construction: build_dyadic_space(&d, &cli.delta)?,
            target: Some(d),
        },
        Document::Spec(Spec::Density(d)) => Resolved::Transform(build_transform(&d)?),
        Document::Selection {
            construction,
            target,
        } => Resolved::Selection {
            construction,
            target,
        },
        Document::Transform(t) => Resolved::Transform(t),
    })
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    validate(cli)?;
    match cli.command {
        Command::Synthesize => {
            let json = match read_document(cli)? {
                Document::Spec(Spec::Discrete(d)) => {
                    selection_document(&build_dyadic_space(&d, &cli.delta)?, Some(&d))
                }
                Document::Spec(Spec::Density(d)) => build_transform(&d)?.to_json(),
                _ => return Err(invalid("synthesize expects a target spec")),
            };
            write_output(cli, &canonical_json(&json))?;
        }
        Command::Sample => {
            let n = cli.n.unwrap_or(1000);
            let factory = StreamFactory::new(cli.seed);
            let mut out = String::from("distance\n");
            match resolve(cli, read_document(cli)?)? {
                Resolved::Selection { construction, .. } => {
                    let zero = Rational::from_integer(0.into());
                    let draws = factory.par_draw(n, |rng| sample_distance_ref(&construction, rng));
                    for d in draws {
                        let _ = writeln!(out, "{}", format_value(cli, d.unwrap_or(&zero)));
                    }
                }
                Resolved::Transform(t) => {
                    for v in factory.par_draw(n, |rng| sample_theta(&t, rng)) {
                        let _ = writeln!(out, "{v}");
                    }
                }
            }
            write_output(cli, &out)?;
        }
        Command::Dist => {
            let mut out = String::new();
            match resolve(cli, read_document(cli)?)? {
                Resolved::Selection { construction, .. } => {
                    out.push_str("value,prob\n");
                    for (v, p) in exact_distance_distribution(&construction).atoms {
                        let _ = writeln!(out, "{},{}", format_value(cli, &v), format_value(cli, &p));
                    }
                }
                Resolved::Transform(t) => {
                    out.push_str("t,cdf\n");
                    for i in 0..cli.grid {
                        let x = i as f64 / (cli.grid - 1) as f64;
                        let _ = writeln!(out, "{x},{}", t.density().cdf(x)?);
                    }
                }
            }
            write_output(cli, &out)?;
        }
        Command::Verify => {
            let n = cli.n.unwrap_or(100_000);
            let report = match resolve(cli, read_document(cli)?)? {
                Resolved::Selection {
                    construction,
                    target,
                } => verify_construction(&construction, target.as_ref(), n, cli.seed)?,
                Resolved::Transform(t) => verify_transform(&t, n, cli.seed)?,
            };
            eprint!("{}", report.to_text());
            write_output(cli, &canonical_json(&report.to_json()))?;
            if !report.overall {
                return Ok(EXIT_VERIFY);
            }
        }
        Command::FwTable => {
            let rows = fw_table(&cli.alpha, cli.grid)?;
            let mut out = String::from("t,alpha,F_W\n");
            for (t, a, f) in rows {
                let _ = writeln!(out, "{t},{a},{f}");
            }
            write_output(cli, &out)?;
        }
    }
    Ok(0)
}
