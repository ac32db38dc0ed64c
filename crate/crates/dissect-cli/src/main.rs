use clap::{Parser, Subcommand, ValueEnum};
use dissect::diagram::{count_closed, enumerate};
use dissect::hopf::{coproduct_diagram, HopfError, XParam};
use dissect::json;
use dissect::numeric::{eval_dissection, NumericError, PathPlan, QuadratureConfig};
use dissect::reduction::{reduce, ReductionError};
use dissect::verify::{run_suite, VerifyOptions, DEFAULT_SEED, SUITES};
use dissect::{arrangement::BiArrangement, render, DecoratedDiagram};
use serde_json::Value;
use std::io::{Read, Write};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dissect", version, about = "Decorated dissection diagrams: coproducts, reduction, evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Tikz,
    Json,
    /// The bi-arrangement of the diagram, as JSON.
    Arrangement,
}

#[derive(Subcommand)]
enum Command {
    /// Count (and optionally list) the diagrams of degree n.
    Enumerate {
        n: usize,
        #[arg(long)]
        list: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Coproduct Δ^(x) of a diagram read from a JSON file (`-` for stdin).
    Coproduct {
        input: String,
        /// A rational value or `formal`.
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Reduce a generic decorated diagram to iterated-integral symbols.
    Reduce {
        input: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate a diagram with numeric decorations; prints a JSON record.
    Eval {
        input: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Path clearance; defaults to half the distance to the nearest letter.
        #[arg(long)]
        clearance: Option<f64>,
        #[arg(long, default_value_t = 14)]
        max_depth: usize,
        #[arg(long, default_value_t = 16)]
        nodes: usize,
    },
    /// Run a named check suite, or `all`.
    Verify {
        suite: String,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Export a diagram as DOT, TikZ or JSON.
    Export {
        input: String,
        #[arg(long, value_enum, default_value = "json")]
        format: ExportFormat,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0} check(s) failed")]
    Verification(usize),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<json::JsonError> for CliError {
    fn from(e: json::JsonError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<HopfError> for CliError {
    fn from(e: HopfError) -> Self {
        match e {
            HopfError::NonGeneric(_) => CliError::Input(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Internal(_) | ReductionError::ExtraZeroCycle | ReductionError::LostGenericity(_) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::Reduction(r) => r.into(),
            NumericError::NonConvergence(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn read_json(path: &str) -> Result<Value, CliError> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s)?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    }
    serde_json::from_str(&s).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn read_diagram(path: &str) -> Result<DecoratedDiagram, CliError> {
    Ok(json::decorated_from_json(&read_json(path)?)?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap_or_default()
}

fn run(cmd: Command, out: &mut String) -> Result<(), CliError> {
    match cmd {
        Command::Enumerate { n, list, format } => {
            let count = count_closed(n);
            let all = if list { enumerate(n).map_err(|e| CliError::Input(e.to_string()))? } else { vec![] };
            match format {
                Format::Text => {
                    out.push_str(&format!("{count}\n"));
                    for d in &all {
                        let p: Vec<String> = d.parents().iter().map(|x| x.to_string()).collect();
                        out.push_str(&format!("[{}]\n", p.join(",")));
                    }
                }
                Format::Json => {
                    let mut v = serde_json::json!({ "degree": n, "count": count.to_string() });
                    if list {
                        v["diagrams"] = Value::Array(all.iter().map(json::diagram_to_json).collect());
                    }
                    out.push_str(&pretty(&v));
                    out.push('\n');
                }
            }
        }
        Command::Coproduct { input, x, format } => {
            let xp = XParam::parse(&x).ok_or_else(|| CliError::Input(format!("bad value for --x: `{x}`")))?;
            let t = coproduct_diagram(&xp, &read_diagram(&input)?)?;
            match format {
                Format::Text => out.push_str(&format!("{t}\n")),
                Format::Json => out.push_str(&format!("{}\n", pretty(&json::tensor_to_json(&t)))),
            }
        }
        Command::Reduce { input, format } => {
            let s = reduce(&read_diagram(&input)?)?;
            match format {
                Format::Text => out.push_str(&format!("{s}\n")),
                Format::Json => out.push_str(&format!("{}\n", pretty(&json::formal_sum_to_json(&s)))),
            }
        }
        Command::Eval { input, tol, clearance, max_depth, nodes } => {
            if !(tol > 0.0) || nodes == 0 || max_depth == 0 || clearance.is_some_and(|c| !(c > 0.0)) {
                return Err(CliError::Input("--tol, --clearance, --max-depth and --nodes must be positive".into()));
            }
            let plan = PathPlan { clearance, quadrature: QuadratureConfig { nodes, tol, max_depth } };
            let r = eval_dissection(&read_diagram(&input)?, &plan)?;
            out.push_str(&format!("{}\n", pretty(&json::eval_record_to_json(&r))));
        }
        Command::Verify { suite, max_degree, seed } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let opts = VerifyOptions { max_degree, seed };
            let mut failed = 0;
            for name in names {
                let r = run_suite(name, &opts).map_err(|e| CliError::Input(e.to_string()))?;
                let status = if r.ok() { "pass" } else { "FAIL" };
                out.push_str(&format!(
                    "{}: {status} ({} passed, {} failed, max degree {}, seed {seed})\n",
                    r.name,
                    r.passed,
                    r.failures.len(),
                    r.max_degree
                ));
                for f in r.failures.iter().take(10) {
                    out.push_str(&format!("  {f}\n"));
                }
                failed += r.failures.len();
            }
            if failed > 0 {
                return Err(CliError::Verification(failed));
            }
        }
        Command::Export { input, format } => {
            let d = read_diagram(&input)?;
            match format {
                ExportFormat::Dot => out.push_str(&render::to_dot(&d)),
                ExportFormat::Tikz => out.push_str(&render::to_tikz(&d)),
                ExportFormat::Json => out.push_str(&format!("{}\n", pretty(&json::decorated_to_json(&d)))),
                ExportFormat::Arrangement => {
                    let a = BiArrangement::from_diagram(&d).map_err(|e| CliError::Input(e.to_string()))?;
                    out.push_str(&format!("{}\n", pretty(&json::arrangement_to_json(&a))));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(cli.command, &mut out)))
        .unwrap_or_else(|_| Err(CliError::Internal("assertion failed".into())));
    let _ = std::io::stdout().write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dissect: {e}");
            ExitCode::from(e.code())
        }
    }
}
