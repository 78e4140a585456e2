//! `multihilb`: command-line front end.
//!
//! Exit codes: 0 success or certified, 1 negative verdict, 2 input error,
//! 3 resource budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use multihilb::certificate::{GasharovOutcome, ModuleSlice};
use multihilb::io::{parse_coefficient_list, parse_ideal, parse_polynomial, parse_rational, PolynomialJson};
use multihilb::oracle::{compute_grid_with, verify_persistence_with, DEFAULT_HORIZON};
use multihilb::{
    certify_constant_with, gasharov_check, gotzmann_rep, hilbert_polynomial, macaulay_growth, macaulay_rep,
    min_certificate_point_2d, module_slice_along, CertificateVerdict, Error, Execution, Limits,
    MultigradedIdeal, Multidegree, NumericalPolynomial, RankMethod,
};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Plain,
}

#[derive(Debug, Parser)]
#[command(name = "multihilb", version, about = "Multigraded Hilbert functions and persistence certificates")]
struct Cli {
    /// Cap on monomials enumerated or search nodes visited per evaluation.
    #[arg(long, global = true, env = "MULTIHILB_BUDGET", default_value_t = multihilb::budget::DEFAULT_MAX_MONOMIALS)]
    budget: u64,

    /// Cap on rows of a single coefficient matrix.
    #[arg(long, global = true, default_value_t = multihilb::budget::DEFAULT_MAX_MATRIX_ROWS)]
    max_rows: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Use rank over a random prime field on the general path. Results are marked unverified.
    #[arg(long, global = true)]
    allow_probabilistic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate H_I at one multidegree.
    HilbertEval {
        ideal: PathBuf,
        #[arg(long)]
        degree: String,
    },
    /// Recover the Hilbert polynomial of a monomial ideal.
    HilbertPoly { ideal: PathBuf },
    /// Hypercube certificate for the constant Hilbert polynomial m.
    Certify {
        ideal: PathBuf,
        #[arg(long)]
        d: String,
        #[arg(long)]
        m: u64,
    },
    /// Gotzmann number of a univariate polynomial given by ascending coefficients.
    Gotzmann {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// The Macaulay growth alpha^<d>.
    MacaulayGrowth {
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        d: u32,
    },
    /// Module slice along one factor with the other coordinates fixed.
    Slice {
        ideal: PathBuf,
        /// Fixed degrees of the other factors, in order.
        #[arg(long, allow_hyphen_values = true)]
        prefix: String,
        #[arg(long)]
        u_max: u32,
        /// Sliced factor, 1-based (default: the last one).
        #[arg(long)]
        axis: Option<usize>,
    },
    /// Gasharov growth and persistence check on a slice file.
    Gasharov {
        slice: PathBuf,
        #[arg(long)]
        d: u32,
    },
    /// Hilbert function table over a box, as CSV (or JSON with --format json).
    Grid {
        ideal: PathBuf,
        #[arg(long)]
        lower: String,
        #[arg(long)]
        upper: String,
    },
    /// Compare H_I with a polynomial on [d, d + horizon]^s.
    Verify {
        ideal: PathBuf,
        #[arg(long)]
        d: String,
        /// Polynomial JSON, inline or as a file path.
        #[arg(long, conflicts_with = "constant", required_unless_present = "constant")]
        poly: Option<String>,
        /// Shorthand for a constant polynomial.
        #[arg(long)]
        constant: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u32,
    },
    /// (d1, Gotzmann number of P(d1, t)) for a bivariate P.
    MinPoint {
        /// Polynomial JSON, inline or as a file path.
        #[arg(long)]
        poly: String,
        #[arg(long)]
        d1: u32,
    },
}

enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

/// What a command prints, and whether its verdict was positive.
struct Report {
    json: Value,
    plain: String,
    positive: bool,
}

impl Report {
    fn ok(json: Value, plain: impl Into<String>) -> Self {
        Report {
            json,
            plain: plain.into(),
            positive: true,
        }
    }
}

struct Context {
    limits: Limits,
    method: RankMethod,
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_ideal(path: &Path) -> Result<MultigradedIdeal, Failure> {
    Ok(parse_ideal(&read_file(path)?)?)
}

/// Inline JSON when it starts with `{`, otherwise a file path.
fn load_polynomial(arg: &str) -> Result<NumericalPolynomial, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read_file(Path::new(arg))?
    };
    Ok(parse_polynomial(&text)?)
}

fn degree(text: &str) -> Result<Multidegree, Failure> {
    Ok(Multidegree::parse(text)?)
}

fn polynomial_json(p: &NumericalPolynomial) -> Value {
    let mut v = serde_json::to_value(PolynomialJson::from_polynomial(p)).expect("polynomial serializes");
    v["display"] = json!(p.to_string());
    v["binomial_basis"] = json!(p.binomial_display());
    v
}

fn verdict_plain(v: &CertificateVerdict) -> String {
    match v {
        CertificateVerdict::Certified => "certified".into(),
        CertificateVerdict::FailedAtVertex { vertex, observed, expected } => {
            format!("failed at vertex {vertex}: observed {observed}, expected {expected}")
        }
        CertificateVerdict::PreconditionViolated { reason } => {
            let code = serde_json::to_value(reason).expect("reason serializes");
            format!("precondition violated: {}", code.as_str().unwrap_or_default())
        }
    }
}

fn run(cmd: Command, ctx: &Context) -> Result<Report, Failure> {
    let limits = &ctx.limits;
    let exec = Execution::Parallel;
    match cmd {
        Command::HilbertEval { ideal, degree: e } => {
            let ideal = load_ideal(&ideal)?;
            let value = ideal.hilbert_value(&degree(&e)?, limits, ctx.method)?;
            let plain = if value.verified {
                value.value.to_string()
            } else {
                format!("{} (unverified)", value.value)
            };
            Ok(Report::ok(serde_json::to_value(&value).expect("serializes"), plain))
        }
        Command::HilbertPoly { ideal } => {
            let ideal = load_ideal(&ideal)?;
            let p = hilbert_polynomial(&ideal, limits, exec)?;
            let plain = format!("{p}\n{}", p.binomial_display());
            Ok(Report::ok(polynomial_json(&p), plain))
        }
        Command::Certify { ideal, d, m } => {
            let ideal = load_ideal(&ideal)?;
            let verdict = certify_constant_with(&ideal, &degree(&d)?, m, limits, exec)?;
            Ok(Report {
                json: serde_json::to_value(&verdict).expect("serializes"),
                plain: verdict_plain(&verdict),
                positive: verdict.is_certified(),
            })
        }
        Command::Gotzmann { poly } => {
            let p = if poly.trim_start().starts_with('{') {
                load_polynomial(&poly)?
            } else {
                parse_coefficient_list(&poly)?
            };
            let rep = gotzmann_rep(&p)?;
            let runs: Vec<Value> = rep.runs().iter().map(|(a, n)| json!({"a": a, "count": n})).collect();
            Ok(Report::ok(
                json!({"polynomial": p.to_string(), "gotzmann_number": rep.number(), "runs": runs}),
                rep.number().to_string(),
            ))
        }
        Command::MacaulayGrowth { alpha, d } => {
            let rep = macaulay_rep(alpha, d)?;
            let growth = macaulay_growth(alpha, d)?;
            Ok(Report::ok(
                json!({"alpha": alpha, "d": d, "kappas": rep.kappas, "growth": growth.to_string()}),
                growth.to_string(),
            ))
        }
        Command::Slice { ideal, prefix, u_max, axis } => {
            let ideal = load_ideal(&ideal)?;
            let s = ideal.ring().factors();
            let axis = match axis {
                None => s - 1,
                Some(a) if (1..=s).contains(&a) => a - 1,
                Some(a) => return Err(Failure::Input(format!("axis {a} out of range 1..={s}"))),
            };
            let fixed = if prefix.trim().is_empty() {
                Vec::new()
            } else {
                degree(&prefix)?.into_entries()
            };
            let slice = module_slice_along(&ideal, axis, &fixed, u_max, limits, exec)?;
            let plain = slice
                .hf
                .iter()
                .map(|(u, h)| format!("{u}\t{h}"))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Report::ok(serde_json::to_value(&slice).expect("serializes"), plain))
        }
        Command::Gasharov { slice, d } => {
            let slice: ModuleSlice = serde_json::from_str(&read_file(&slice)?)
                .map_err(|e| Failure::Input(format!("slice: {e}")))?;
            let report = gasharov_check(&slice, d)?;
            let outcome = serde_json::to_value(report.outcome).expect("serializes");
            let plain = format!(
                "{}: dim M_{} = {}, dim M_{} = {}, bound {}",
                outcome.as_str().unwrap_or_default(),
                report.d,
                report.current,
                report.d + 1,
                report.next,
                report.bound
            );
            Ok(Report {
                json: serde_json::to_value(&report).expect("serializes"),
                plain,
                positive: report.outcome != GasharovOutcome::BoundViolated,
            })
        }
        Command::Grid { ideal, lower, upper } => {
            let ideal = load_ideal(&ideal)?;
            let grid = compute_grid_with(&ideal, &degree(&lower)?, &degree(&upper)?, limits, exec)?;
            Ok(Report::ok(serde_json::to_value(&grid).expect("serializes"), grid.to_csv()))
        }
        Command::Verify { ideal, d, poly, constant, horizon } => {
            let ideal = load_ideal(&ideal)?;
            let d = degree(&d)?;
            let p = match (poly, constant) {
                (Some(text), _) => load_polynomial(&text)?,
                (None, Some(m)) => NumericalPolynomial::constant(d.len(), parse_rational(&m.to_string())?),
                (None, None) => return Err(Failure::Input("need --poly or --constant".into())),
            };
            let report = verify_persistence_with(&ideal, &d, &p, horizon, limits, exec)?;
            let plain = match &report.witness {
                None => format!("holds on {} points ({})", report.points_checked, report.note),
                Some(w) => format!("fails at {}: observed {}, expected {}", w.point, w.observed, w.expected),
            };
            Ok(Report {
                json: serde_json::to_value(&report).expect("serializes"),
                plain,
                positive: report.holds,
            })
        }
        Command::MinPoint { poly, d1 } => {
            let p = load_polynomial(&poly)?;
            let point = min_certificate_point_2d(&p, d1)?;
            Ok(Report::ok(json!({"point": point}), point.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let ctx = Context {
        limits: Limits {
            max_monomials: cli.budget,
            max_matrix_rows: cli.max_rows,
        },
        method: if cli.allow_probabilistic {
            RankMethod::Modular { seed: rand_seed() }
        } else {
            RankMethod::Exact
        },
    };
    match run(cli.command, &ctx) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("serializes")),
                Format::Plain => println!("{}", report.plain.trim_end()),
            }
            if report.positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn rand_seed() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0)
}
