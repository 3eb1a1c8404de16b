//! Command-line front end: loads catalogs, evaluates splice expressions and
//! runs the self-test suites.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use splice_conway::link::{builtin_catalog, emit_catalog, format_linking, Catalog, LinkSpec};
use splice_conway::selftest;
use splice_conway::splice::{omega, parse_expr, torres_remove, Engine, SpliceError};
use splice_conway::torsion::{parse_complex, TorsionError};

#[derive(Parser, Debug)]
#[command(
    name = "splice-conway",
    version,
    about = "Conway functions of spliced links and torsion of based complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conway function, components and linking matrix of an expression.
    Conway {
        #[command(flatten)]
        input: ExprInput,
        /// Print the result as a catalog entry instead.
        #[arg(long)]
        emit_catalog: bool,
        /// Catalog name used with --emit-catalog.
        #[arg(long, default_value = "result")]
        name: String,
    },
    /// Reduced Conway function (t - t^-1) * conway(t, ..., t).
    Omega {
        #[command(flatten)]
        input: ExprInput,
    },
    /// Components and linking matrix of an expression.
    Linking {
        #[command(flatten)]
        input: ExprInput,
    },
    /// The sublink obtained by removing one component.
    Torres {
        #[command(flatten)]
        input: ExprInput,
        #[arg(long)]
        component: String,
    },
    /// Torsion and counts of a based complex file.
    Torsion {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Runs the property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random expressions; the torsion suites use 5x and 2x.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct ExprInput {
    /// Inline splice expression.
    #[arg(short = 'e', value_name = "EXPR", conflicts_with = "file")]
    expr: Option<String>,
    /// File containing a splice expression.
    #[arg(value_name = "FILE", required_unless_present = "expr")]
    file: Option<PathBuf>,
    /// Extra catalog files, searched after the builtins in order.
    #[arg(long = "catalog", value_name = "FILE")]
    catalogs: Vec<PathBuf>,
    /// Cross-check derived operations against their closed forms.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// An error with the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn syntax(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn splice(context: &str, e: SpliceError) -> Self {
        let message = format!("{context}{e}");
        if e.is_syntax() {
            Failure::syntax(message)
        } else {
            Failure::domain(message)
        }
    }

    fn torsion(context: &str, e: TorsionError) -> Self {
        let message = format!("{context}{e}");
        match e {
            TorsionError::Syntax { .. } => Failure::syntax(message),
            _ => Failure::domain(message),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::domain(format!("IoError: {}: {e}", path.display())))
}

fn load_catalog(paths: &[PathBuf]) -> Result<Catalog, Failure> {
    let mut catalog = builtin_catalog();
    for path in paths {
        let text = read(path)?;
        catalog
            .load_str(&text)
            .map_err(|e| Failure::splice(&format!("{}: ", path.display()), e.into()))?;
    }
    Ok(catalog)
}

fn evaluate(input: &ExprInput) -> Result<LinkSpec, Failure> {
    let catalog = load_catalog(&input.catalogs)?;
    let (text, context) = match (&input.expr, &input.file) {
        (Some(e), _) => (e.clone(), String::new()),
        (None, Some(path)) => (
            read(path)?.trim_end().to_string(),
            format!("{}: ", path.display()),
        ),
        (None, None) => return Err(Failure::syntax("SyntaxError: no expression given")),
    };
    let expr = parse_expr(&text, &catalog).map_err(|e| Failure::splice(&context, e))?;
    let engine = Engine {
        verify: input.verify,
    };
    engine.eval(&expr).map_err(|e| Failure::splice(&context, e))
}

fn render_spec(spec: &LinkSpec, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "conway: {}", spec.conway).unwrap();
            writeln!(out, "components: {}", spec.components.join(" ")).unwrap();
            writeln!(out, "linking:").unwrap();
            out.push_str(&format_linking(&spec.components, &spec.lk));
            out
        }
        Format::Json => json_line(json!({
            "conway": spec.conway.to_string(),
            "components": spec.components,
            "linking": spec.lk.rows(),
        })),
    }
}

fn render_linking(spec: &LinkSpec, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = format!("components: {}\nlinking:\n", spec.components.join(" "));
            out.push_str(&format_linking(&spec.components, &spec.lk));
            out
        }
        Format::Json => json_line(json!({
            "components": spec.components,
            "linking": spec.lk.rows(),
        })),
    }
}

fn json_line(v: Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
}

fn execute(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Conway {
            input,
            emit_catalog: emit,
            name,
        } => {
            let mut spec = evaluate(&input)?;
            if emit {
                spec.name = name;
                Ok(emit_catalog(&spec))
            } else {
                Ok(render_spec(&spec, input.format))
            }
        }
        Command::Omega { input } => {
            let spec = evaluate(&input)?;
            let value = omega(&spec).map_err(|e| Failure::splice("", e))?;
            Ok(match input.format {
                Format::Text => format!("{value}\n"),
                Format::Json => json_line(json!({ "omega": value.to_string() })),
            })
        }
        Command::Linking { input } => Ok(render_linking(&evaluate(&input)?, input.format)),
        Command::Torres { input, component } => {
            let spec = evaluate(&input)?;
            let sub = torres_remove(&spec, &component).map_err(|e| Failure::splice("", e))?;
            Ok(render_spec(&sub, input.format))
        }
        Command::Torsion { file, format } => {
            let text = read(&file)?;
            let context = format!("{}: ", file.display());
            let c = parse_complex(&text).map_err(|e| Failure::torsion(&context, e))?;
            let tau = c.torsion().map_err(|e| Failure::torsion(&context, e))?;
            let counts = c.counts();
            Ok(match format {
                Format::Text => {
                    let join = |v: &[usize]| {
                        v.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    format!(
                        "tau: {tau}\nbeta: {}\ngamma: {}\n|C|: {}\n",
                        join(&counts.beta),
                        join(&counts.gamma),
                        counts.sign_exponent
                    )
                }
                Format::Json => json_line(json!({
                    "tau": tau.to_string(),
                    "beta": counts.beta,
                    "gamma": counts.gamma,
                    "|C|": counts.sign_exponent,
                })),
            })
        }
        Command::Selftest {
            seed,
            trials,
            format,
        } => {
            let reports = selftest::run_all(seed, trials);
            let passed = reports.iter().filter(|r| r.ok()).count();
            let all_ok = passed == reports.len();
            let rerun = format!("splice-conway selftest --seed {seed} --trials {trials}");
            let out = match format {
                Format::Text => {
                    let mut out = format!("seed: {seed}\n");
                    for r in &reports {
                        writeln!(out, "{r}").unwrap();
                        for f in &r.failures {
                            writeln!(out, "  {f}").unwrap();
                        }
                    }
                    writeln!(out, "selftest: {passed}/{} suites passed", reports.len()).unwrap();
                    if !all_ok {
                        writeln!(out, "rerun: {rerun}").unwrap();
                    }
                    out
                }
                Format::Json => json_line(json!({
                    "seed": seed,
                    "suites": reports.iter().map(|r| json!({
                        "name": r.name,
                        "verdict": if r.ok() { "PASS" } else { "FAIL" },
                        "passed": r.passed,
                        "failed": r.failed,
                        "failures": r.failures,
                    })).collect::<Vec<_>>(),
                    "selftest": format!("{passed}/{} suites passed", reports.len()),
                    "rerun": if all_ok { Value::Null } else { Value::String(rerun) },
                })),
            };
            if all_ok {
                Ok(out)
            } else {
                Err(Failure::domain(out))
            }
        }
    }
}

/// Runs one invocation; `args` excludes the program name.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("splice-conway"))
        .chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let is_selftest = matches!(cli.command, Command::Selftest { .. });
    match execute(cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(f) if is_selftest => Outcome {
            code: f.code,
            stdout: f.message,
            stderr: "selftest failed\n".to_string(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}
