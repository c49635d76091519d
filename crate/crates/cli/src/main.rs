use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use torus_bessel::conditions::strichartz_case_numbers;
use torus_bessel::grid::default_points;
use torus_bessel::io::field_to_json;
use torus_bessel::multiplier::ReportOptions;
use torus_bessel::sweep::{run_sweep, SweepField, SweepSpec};
use torus_bessel::verify::{run_suite, Suite, VerifyConfig};
use torus_bessel::{
    action, apply_j, duality_pair, equivalence_report_with, gen_distribution, hs_norm,
    parse_coeff_file, pointwise_product, DistributionKind, Error, Lattice, MultiplierProblem,
    Number, ProductMode, SpaceIndex, SpectralField,
};

/// Bessel potential spaces on the torus: norms, products, multipliers.
#[derive(Debug, Parser)]
#[command(name = "torus-bessel", version)]
struct Cli {
    /// JSON file of default option values, keyed by long flag name.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// H^s_p norm of a coefficient file.
    Norm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: Number,
        #[arg(long, default_value = "2")]
        p: Number,
        /// Grid size per axis for p ≠ 2.
        #[arg(long, short = 'N')]
        points: Option<usize>,
    },
    /// Applies J_s = (1-Δ)^{s/2}.
    ApplyJ {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: Number,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Duality pairing <u; v>_s, or the action u(f).
    Pair {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: PathBuf,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        s: Number,
        #[arg(long, value_enum, default_value_t = PairMode::Duality)]
        mode: PairMode,
    },
    /// Pointwise product f·u.
    Product {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        u: PathBuf,
        /// Keep the full product on the doubled lattice instead of truncating.
        #[arg(long)]
        exact_product: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Multiplier norm of M[H^s_p → H^{-t}_q] against the intersection norm.
    MultNorm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: Number,
        #[arg(long)]
        t: Number,
        #[arg(long, default_value = "2")]
        p: Number,
        #[arg(long, default_value = "2")]
        q: Number,
        /// Extra radii for the refinement study.
        #[arg(long, value_delimiter = ',')]
        radii: Vec<usize>,
        #[arg(long, short = 'N')]
        points: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Runs a verification suite.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, short = 'R', default_value_t = 8)]
        radius: usize,
        #[arg(long, short = 'n', default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1")]
        s: Number,
        #[arg(long, default_value = "1")]
        t: Number,
        #[arg(long, default_value = "2")]
        p: Number,
        #[arg(long, default_value = "2")]
        q: Number,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Multiplier reports over a grid of (s, t, p, q, R).
    Sweep {
        #[arg(long, short = 'n', default_value_t = 1)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<Number>,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<Number>,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        p: Vec<Number>,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        q: Vec<Number>,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<usize>,
        /// power-decay, random-smooth, dirac, or delta (the basis function at 0).
        #[arg(long, default_value = "power-decay")]
        u_kind: String,
        /// Fixed multiplier read from a coefficient file; overrides --u-kind.
        #[arg(long)]
        u_file: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        real: bool,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Writes a generated distribution as a coefficient file.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long, short = 'n', default_value_t = 1)]
        n: usize,
        #[arg(long, short = 'R')]
        radius: usize,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        real: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PairMode {
    Duality,
    Action,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

/// A run that completed but whose checks failed.
#[derive(Debug)]
struct CheckFailure(String);

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<CheckFailure>().is_some() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::CertificateViolated { .. } | Error::NoConvergence { .. }) => 1,
        _ => 2,
    }
}

/// Appends `--key value` for every config entry the subcommand accepts
/// and the command line does not already set.
fn merge_config(args: Vec<String>) -> anyhow::Result<Vec<String>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            path = args.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).with_context(|| format!("reading config {path}"))?;
    let Value::Object(map) =
        serde_json::from_str::<Value>(&text).with_context(|| format!("parsing config {path}"))?
    else {
        bail!("config {path} must be a JSON object");
    };

    let cmd = Cli::command();
    let Some(sub) = args.iter().skip(1).find_map(|a| cmd.find_subcommand(a)) else {
        return Ok(args);
    };
    let mut merged = args.clone();
    for (key, value) in map {
        let Some(arg) = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
        else {
            continue;
        };
        let flag = format!("--{key}");
        let given = args
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
            || arg
                .get_short()
                .is_some_and(|c| args.iter().any(|a| *a == format!("-{c}")));
        if given {
            continue;
        }
        let text = match value {
            Value::Bool(true) => {
                merged.push(flag);
                continue;
            }
            Value::Bool(false) | Value::Null => continue,
            Value::String(s) => s,
            Value::Array(items) => items
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(","),
            other => other.to_string(),
        };
        merged.push(format!("{flag}={text}"));
    }
    Ok(merged)
}

fn read_field(path: &Path) -> anyhow::Result<SpectralField> {
    parse_coeff_file(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json(value: &impl Serialize) -> anyhow::Result<()> {
    emit(None, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn float_warning(values: &[Number]) {
    if values.iter().any(|v| v.as_exact().is_none()) {
        eprintln!("warning: index hypotheses compared in floating point with zero tolerance");
    }
}

#[derive(Serialize)]
struct NormOut {
    s: f64,
    p: f64,
    points: usize,
    norm: f64,
}

#[derive(Serialize)]
struct PairOut {
    re: f64,
    im: f64,
    abs: f64,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Norm {
            input,
            s,
            p,
            points,
        } => {
            let u = read_field(&input)?;
            let points = points.unwrap_or_else(|| default_points(u.lattice().radius()));
            let (s, p) = (s.to_f64(), p.to_f64());
            let norm = hs_norm(&u, SpaceIndex::new(s, p), points)?;
            emit_json(&NormOut { s, p, points, norm })
        }
        Command::ApplyJ { input, s, output } => {
            let u = read_field(&input)?;
            emit(
                output.as_deref(),
                &(field_to_json(&apply_j(s.to_f64(), &u)) + "\n"),
            )
        }
        Command::Pair { u, v, s, mode } => {
            let (u, v) = (read_field(&u)?, read_field(&v)?);
            let z = match mode {
                PairMode::Duality => duality_pair(&u, &v, s.to_f64())?,
                PairMode::Action => action(&u, &v)?,
            };
            emit_json(&PairOut {
                re: z.re,
                im: z.im,
                abs: z.norm(),
            })
        }
        Command::Product {
            f,
            u,
            exact_product,
            output,
        } => {
            let mode = if exact_product {
                ProductMode::Exact
            } else {
                ProductMode::Truncate
            };
            let w = pointwise_product(&read_field(&f)?, &read_field(&u)?, mode)?;
            emit(output.as_deref(), &(field_to_json(&w) + "\n"))
        }
        Command::MultNorm {
            input,
            s,
            t,
            p,
            q,
            radii,
            points,
            seed,
            force,
            format,
        } => {
            let u = read_field(&input)?;
            float_warning(&[s, t, p, q]);
            let (verdict, _) = strichartz_case_numbers(s, t, p, q, u.lattice().dim())?;
            if !verdict.holds && force {
                eprintln!(
                    "warning: index hypotheses fail ({}); computing anyway",
                    verdict.detail
                );
            }
            let prob = MultiplierProblem::new(u, s.to_f64(), p.to_f64(), t.to_f64(), q.to_f64())?;
            let opts = ReportOptions {
                force,
                points,
                family_seed: seed,
                ..ReportOptions::default()
            };
            let report = equivalence_report_with(&prob, &radii, &opts, verdict)?;
            match format {
                Format::Json => emit_json(&report),
                Format::Csv => emit(
                    None,
                    &format!(
                        "{}\n{}\n",
                        torus_bessel::multiplier::CSV_HEADER,
                        report.csv_row()
                    ),
                ),
            }
        }
        Command::Verify {
            suite,
            radius,
            n,
            seed,
            s,
            t,
            p,
            q,
            format,
        } => {
            let cfg = VerifyConfig {
                n,
                radius,
                seed,
                s: s.to_f64(),
                t: t.to_f64(),
                p: p.to_f64(),
                q: q.to_f64(),
            };
            let report = run_suite(suite, &cfg)?;
            match format {
                ReportFormat::Json => emit_json(&report)?,
                ReportFormat::Text => {
                    let mut text = String::new();
                    for check in &report.checks {
                        text.push_str(&format!("{check}\n"));
                    }
                    let failed = report.checks.iter().filter(|c| !c.passed).count();
                    text.push_str(&format!(
                        "{}: {} checks, {} failed\n",
                        suite.name(),
                        report.checks.len(),
                        failed
                    ));
                    emit(None, &text)?;
                }
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CheckFailure(format!("suite {} failed", suite.name())).into())
            }
        }
        Command::Sweep {
            n,
            s,
            t,
            p,
            q,
            radii,
            u_kind,
            u_file,
            alpha,
            samples,
            seed,
            real,
            force,
            output,
        } => {
            let field = match (&u_file, u_kind.as_str()) {
                (Some(path), _) => SweepField::Fixed {
                    label: format!("file:{}", path.display()),
                    field: read_field(path)?,
                },
                (None, "delta") => {
                    let lattice = Lattice::new(n, 0)?;
                    SweepField::Fixed {
                        label: "delta".into(),
                        field: SpectralField::delta(&lattice, &vec![0; n])?,
                    }
                }
                (None, name) => SweepField::Generated(DistributionKind::parse(name, alpha)?),
            };
            let all: Vec<Number> = s.iter().chain(&t).chain(&p).chain(&q).copied().collect();
            float_warning(&all);
            let spec = SweepSpec {
                n,
                s,
                t,
                p,
                q,
                radii,
                field,
                samples,
                seed,
                real,
                force,
            };
            let out = run_sweep(&spec)?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            emit(output.as_deref(), &out.to_csv())
        }
        Command::Gen {
            kind,
            n,
            radius,
            alpha,
            seed,
            real,
            output,
        } => {
            let kind = DistributionKind::parse(&kind, alpha)?;
            let u = gen_distribution(&Lattice::new(n, radius)?, kind, seed, real)?;
            emit(output.as_deref(), &(field_to_json(&u) + "\n"))
        }
    }
}

fn main() -> ExitCode {
    let args = match merge_config(std::env::args().collect()) {
        Ok(args) => args,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
