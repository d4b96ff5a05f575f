//! Argument handling and command execution for the `gmrep` binary.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gmrep_core::harness::tables::{self, SweepGrid, Table};
use gmrep_core::harness::{run_verify, VerifyConfig, VerifyReport};
use gmrep_core::{evaluate, ComplexPoint, ContourSpec, Error, QuadratureSpec, Sequence};
use num_complex::Complex64;
use serde_json::{json, Value};

pub const OUT_DIR_ENV: &str = "GMREP_OUT_DIR";

pub mod exit {
    pub const CONFIG: i32 = 1;
    pub const CUT: i32 = 2;
    pub const QUADRATURE: i32 = 3;
    pub const SUITE_FAILURE: i32 = 4;
    pub const OUTPUT: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(
    name = "gmrep",
    version,
    about = "Principal-branch geometric means and their integral representation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Compare the direct and representation values of G_n(a + z).
    Eval(Common),
    /// Boundary values on each segment: closed form vs. offset evaluation.
    Density {
        #[command(flatten)]
        common: Common,
        /// Sample points per segment.
        #[arg(long, default_value_t = 64)]
        per_segment: usize,
        /// Emit the raw densities (t, density, weighted_density, segment_index).
        #[arg(long)]
        raw: bool,
    },
    /// A_n - G_n computed directly and through the representation at z = 0.
    Gap(Common),
    /// Keyhole-contour evaluation of h_n(z).
    Contour(Common),
    /// Run every invariant suite over seeded random instances.
    Verify(Common),
    /// Representation error over a grid of z.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(
            long,
            value_name = "LO,HI",
            default_value = "-0.9,5",
            allow_hyphen_values = true
        )]
        re_range: String,
        #[arg(
            long,
            value_name = "LO,HI",
            default_value = "-3,3",
            allow_hyphen_values = true
        )]
        im_range: String,
        /// Grid points per axis.
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Comma-separated positive entries, e.g. `1,2,3`.
    #[arg(long = "a", value_name = "A1,A2,...")]
    pub a: Option<String>,
    /// Complex point such as `0.5`, `1+2i` or `-3i`. Use `--z=-1.5` for negatives.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    /// Contour radius (default 1e-3) or boundary offset for density (default 1e-6).
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 1e3)]
    pub r: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub cases: usize,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output file; defaults to stdout, or to `$GMREP_OUT_DIR/<command>.<ext>`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Scale the densities in the equivalence suite by 1 + X (verify only).
    #[arg(long, value_name = "X")]
    pub perturb_density: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Csv => "csv",
            Self::Table => "txt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Eval,
    Density,
    Gap,
    Contour,
    Verify,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Eval => "eval",
            Self::Density => "density",
            Self::Gap => "gap",
            Self::Contour => "contour",
            Self::Verify => "verify",
            Self::Sweep => "sweep",
        }
    }
}

/// Extra options of individual commands.
#[derive(Debug, Clone, PartialEq)]
pub enum Extra {
    None,
    Density {
        per_segment: usize,
        raw: bool,
        eps: f64,
    },
    Sweep(SweepGrid),
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub sequence: Option<Sequence>,
    pub z: Option<ComplexPoint>,
    pub quad: QuadratureSpec,
    pub contour: Option<ContourSpec>,
    pub seed: u64,
    pub cases: usize,
    pub perturb_density: f64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: exit::CONFIG,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CutViolation { .. } => exit::CUT,
            Error::QuadratureFailure { .. } => exit::QUADRATURE,
            _ => exit::CONFIG,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_range(text: &str, name: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || CliError::config(format!("--{name} expects LO,HI with LO < HI, got {text:?}"));
    let [lo, hi] = parts[..] else {
        return Err(bad());
    };
    let (lo, hi): (f64, f64) = (
        lo.parse().map_err(|_| bad())?,
        hi.parse().map_err(|_| bad())?,
    );
    if lo < hi && lo.is_finite() && hi.is_finite() {
        Ok((lo, hi))
    } else {
        Err(bad())
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let (command, common, extra) = match cli.command {
            CommandArgs::Eval(c) => (Command::Eval, c, Extra::None),
            CommandArgs::Gap(c) => (Command::Gap, c, Extra::None),
            CommandArgs::Contour(c) => (Command::Contour, c, Extra::None),
            CommandArgs::Verify(c) => (Command::Verify, c, Extra::None),
            CommandArgs::Density {
                common,
                per_segment,
                raw,
            } => {
                if per_segment == 0 {
                    return Err(CliError::config("--per-segment must be at least 1"));
                }
                let eps = common.eps.unwrap_or(1e-6);
                (
                    Command::Density,
                    common,
                    Extra::Density {
                        per_segment,
                        raw,
                        eps,
                    },
                )
            }
            CommandArgs::Sweep {
                common,
                re_range,
                im_range,
                steps,
            } => {
                if steps == 0 {
                    return Err(CliError::config("--steps must be at least 1"));
                }
                let grid = SweepGrid {
                    re: parse_range(&re_range, "re-range")?,
                    im: parse_range(&im_range, "im-range")?,
                    steps,
                };
                (Command::Sweep, common, Extra::Sweep(grid))
            }
        };

        let sequence = common
            .a
            .as_deref()
            .map(|s| s.parse::<Sequence>())
            .transpose()
            .map_err(|e| CliError::config(e.to_string()))?;
        if sequence.is_none() && command != Command::Verify {
            return Err(CliError::config(format!("{} needs --a", command.name())));
        }
        let z = common
            .z
            .as_deref()
            .map(|s| s.parse::<ComplexPoint>())
            .transpose()
            .map_err(|e| CliError::config(e.to_string()))?;
        if z.is_none() && matches!(command, Command::Eval | Command::Contour) {
            return Err(CliError::config(format!("{} needs --z", command.name())));
        }
        let quad = QuadratureSpec::with_tolerances(common.abs_tol, common.rel_tol)
            .map_err(|e| CliError::config(e.to_string()))?;
        let contour = if command == Command::Contour {
            let eps = common.eps.unwrap_or(1e-3);
            Some(ContourSpec::new(eps, common.r).map_err(|e| CliError::config(e.to_string()))?)
        } else {
            None
        };
        if common.eps.is_some_and(|e| !(e > 0.0 && e.is_finite())) {
            return Err(CliError::config("--eps must be positive"));
        }
        if command == Command::Verify && common.cases == 0 {
            return Err(CliError::config("--cases must be at least 1"));
        }
        let perturb_density = match common.perturb_density {
            Some(_) if command != Command::Verify => {
                return Err(CliError::config("--perturb-density applies to verify only"))
            }
            Some(x) if !x.is_finite() => {
                return Err(CliError::config("--perturb-density must be finite"))
            }
            Some(x) => x,
            None => 0.0,
        };
        let output_format = common.format.unwrap_or(match command {
            Command::Eval | Command::Verify | Command::Contour => OutputFormat::Json,
            _ => OutputFormat::Csv,
        });
        Ok(Self {
            command,
            sequence,
            z,
            quad,
            contour,
            seed: common.seed,
            cases: common.cases,
            perturb_density,
            output_format,
            output_path: common.out,
            extra,
        })
    }

    fn sequence(&self) -> &Sequence {
        self.sequence.as_ref().expect("validated")
    }

    fn z(&self) -> Complex64 {
        self.z.expect("validated").value()
    }

    /// Where output goes: `--out`, then the environment directory, then stdout.
    pub fn destination(&self) -> Option<PathBuf> {
        if let Some(p) = &self.output_path {
            return Some(p.clone());
        }
        std::env::var_os(OUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|dir| {
                PathBuf::from(dir).join(format!(
                    "{}.{}",
                    self.command.name(),
                    self.output_format.extension()
                ))
            })
    }
}

/// Rendered output plus the exit code it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub exit_code: i32,
    /// Diagnostics for stderr; never part of the report.
    pub notes: Vec<String>,
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn number_or_string(cell: &str) -> Value {
    match cell.parse::<f64>() {
        Ok(x) if x.is_finite() => json!(x),
        _ => json!(cell),
    }
}

fn table_json(table: &Table, sequence: &Sequence) -> Value {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: serde_json::Map<String, Value> = table
                .header
                .iter()
                .zip(row)
                .map(|(h, c)| {
                    (
                        h.to_string(),
                        if *h == "a" || *h == "piece" {
                            json!(c)
                        } else {
                            number_or_string(c)
                        },
                    )
                })
                .collect();
            Value::Object(obj)
        })
        .collect();
    json!({ "sequence": sequence.values(), "rows": rows })
}

fn render_table(table: &Table, sequence: &Sequence, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Table => format!("a (sorted) = {sequence}\n{}", table.to_text()),
        OutputFormat::Json => pretty(&table_json(table, sequence)),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn verify_csv(report: &VerifyReport) -> String {
    let mut out = String::from("suite,passed,cases_run,checks,failure_count,max_error\n");
    for s in &report.suites {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.suite,
            s.passed,
            s.cases_run,
            s.checks,
            s.failure_count,
            tables::fmt_num(s.max_error)
        ));
    }
    out
}

/// Executes a validated config and renders its output.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let format = config.output_format;
    let mut notes = Vec::new();
    let mut exit_code = 0;
    let body = match config.command {
        Command::Eval => {
            let a = config.sequence();
            let z = config.z();
            let report = evaluate(a, z, &config.quad)?;
            match format {
                OutputFormat::Json => {
                    let mut v = serde_json::to_value(report).expect("report serializes");
                    let obj = v.as_object_mut().expect("report is an object");
                    obj.insert("sequence".into(), json!(a.values()));
                    obj.insert("z".into(), complex_json(z));
                    pretty(&v)
                }
                OutputFormat::Csv => format!(
                    "a,re_z,im_z,direct_re,direct_im,repr_re,repr_im,abs_error,quad_error,segments\n\"{a}\",{},{},{},{},{},{},{},{},{}\n",
                    tables::fmt_num(z.re),
                    tables::fmt_num(z.im),
                    tables::fmt_num(report.direct_value.re),
                    tables::fmt_num(report.direct_value.im),
                    tables::fmt_num(report.repr_value.re),
                    tables::fmt_num(report.repr_value.im),
                    tables::fmt_num(report.abs_error),
                    tables::fmt_num(report.quad_error_estimate),
                    report.segments_evaluated
                ),
                OutputFormat::Table => format!(
                    "a (sorted)   {a}\nz            {}\ndirect       {}\nrepr         {}\nabs_error    {:e}\nquad_error   {:e}\nsegments     {}\n",
                    ComplexPoint::try_from(z).expect("validated"),
                    report.direct_value,
                    report.repr_value,
                    report.abs_error,
                    report.quad_error_estimate,
                    report.segments_evaluated
                ),
            }
        }
        Command::Density => {
            let a = config.sequence();
            let Extra::Density {
                per_segment,
                raw,
                eps,
            } = config.extra
            else {
                unreachable!()
            };
            let table = if raw {
                tables::raw_density_table(a, per_segment)
            } else {
                tables::density_table(a, eps, per_segment)?
            };
            render_table(&table, a, format)
        }
        Command::Gap => {
            let a = config.sequence();
            render_table(&tables::gap_table(a, &config.quad)?, a, format)
        }
        Command::Contour => {
            let a = config.sequence();
            let spec = config.contour.expect("validated");
            let table = tables::contour_table(a, config.z(), &spec)?;
            match format {
                OutputFormat::Json => {
                    let b = gmrep_core::cauchy_eval(a, config.z(), &spec)?;
                    let direct = gmrep_core::h_n(a, config.z())?;
                    pretty(&json!({
                        "sequence": a.values(),
                        "z": complex_json(config.z()),
                        "eps": spec.eps,
                        "r": spec.r,
                        "breakdown": b,
                        "direct": complex_json(direct),
                        "abs_error": (b.total - direct).norm(),
                    }))
                }
                _ => render_table(&table, a, format),
            }
        }
        Command::Sweep => {
            let a = config.sequence();
            let Extra::Sweep(grid) = config.extra else {
                unreachable!()
            };
            render_table(&tables::sweep_table(a, &grid, &config.quad)?, a, format)
        }
        Command::Verify => {
            let verify = VerifyConfig {
                seed: config.seed,
                cases: config.cases,
                quad: config.quad,
                perturb_density: config.perturb_density,
                sequence: config.sequence.clone(),
                ..VerifyConfig::default()
            };
            let start = Instant::now();
            let report = run_verify(&verify);
            notes.push(format!(
                "verify finished in {:.2} s",
                start.elapsed().as_secs_f64()
            ));
            if !report.passed {
                exit_code = exit::SUITE_FAILURE;
                for s in report.suites.iter().filter(|s| !s.passed) {
                    notes.push(format!(
                        "suite {} failed ({} failures)",
                        s.suite, s.failure_count
                    ));
                }
            }
            match format {
                OutputFormat::Json => {
                    pretty(&serde_json::to_value(&report).expect("report serializes"))
                }
                OutputFormat::Csv => verify_csv(&report),
                OutputFormat::Table => report.to_table(),
            }
        }
    };
    Ok(Outcome {
        body,
        exit_code,
        notes,
    })
}

/// Writes `body` to the configured destination, or returns it for stdout.
pub fn deliver(config: &RunConfig, body: &str) -> Result<Option<PathBuf>, CliError> {
    let Some(path) = config.destination() else {
        return Ok(None);
    };
    fs::write(&path, body).map_err(|e| CliError {
        code: exit::OUTPUT,
        message: format!("cannot write {}: {e}", path.display()),
    })?;
    Ok(Some(path))
}

/// Parses `args`, runs the command and returns `(stdout, stderr, exit code)`.
pub fn main_with_args<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::CONFIG } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (text, String::new(), 0)
            } else {
                (String::new(), text, code)
            };
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|config| {
        let outcome = run(&config)?;
        let written = deliver(&config, &outcome.body)?;
        Ok((config, outcome, written))
    });
    match result {
        Ok((config, outcome, written)) => {
            let mut stderr: String = outcome.notes.iter().map(|n| format!("{n}\n")).collect();
            let stdout = match written {
                Some(path) => {
                    stderr.push_str(&format!(
                        "wrote {} to {}\n",
                        config.command.name(),
                        path.display()
                    ));
                    String::new()
                }
                None => outcome.body,
            };
            (stdout, stderr, outcome.exit_code)
        }
        Err(e) => (String::new(), format!("error: {e}\n"), e.code),
    }
}
