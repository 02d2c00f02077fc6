mod commands;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use logzeta::model::KValue;
use logzeta::Exec;
use num_bigint::BigInt;

use commands::{AsymKind, Input};
use report::{envelope, render_json, render_text, InputError, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Exact topological and monodromy zeta functions from log resolution data.
///
/// Exit codes: 0 computed (verdict true where applicable), 1 computed with
/// verdict false, 2 input or validation error.
#[derive(Parser, Debug)]
#[command(name = "logzeta", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print nothing; only the exit code reports the outcome.
    #[arg(long, global = true)]
    quiet: bool,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check a datum against the schema invariants.
    Validate { file: PathBuf },
    /// Topological zeta function in normal form.
    Topzeta {
        file: PathBuf,
        /// Specialize to s1 = ... = sq.
        #[arg(long)]
        diagonal: bool,
    },
    /// Candidate poles and their orders.
    Poles { file: PathBuf },
    /// Local monodromy zeta function at a point and its divisor on the torus.
    Monzeta {
        file: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Monodromy support.
    Support {
        file: PathBuf,
        /// Also intersect with the diagonal torus.
        #[arg(long)]
        diagonal: bool,
    },
    /// Test Exp(polar hyperplanes) against the monodromy support.
    CheckMc { file: PathBuf },
    /// Add a generic section of L^k.
    Augment {
        file: PathBuf,
        #[arg(long, required_unless_present = "symbolic", conflicts_with = "symbolic")]
        k: Option<BigInt>,
        #[arg(long)]
        symbolic: bool,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Non-resonance of the ample class.
    Avg {
        #[command(subcommand)]
        cmd: AvgCmd,
    },
    /// Root and polar-hyperplane certificate for the generic section.
    StrongMc {
        file: PathBuf,
        #[arg(long)]
        k: BigInt,
    },
    /// Leading terms in k of Euler characteristics.
    Asym {
        #[command(subcommand)]
        cmd: AsymCmd,
    },
    /// Print a bundled dataset.
    Example {
        name: String,
        #[arg(long, requires = "b2")]
        b1: Option<i64>,
        #[arg(long, requires = "b1")]
        b2: Option<i64>,
        #[arg(long, requires = "b1")]
        d: Option<i64>,
    },
}

#[derive(Subcommand, Debug)]
enum AvgCmd {
    /// Report every adjacent pair with an integral ratio.
    Check { file: PathBuf },
    /// Perturb the ample class into the non-resonant subcone.
    Make {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Cone membership for the two-blow-up chain.
    Cones { b1: i64, b2: i64 },
}

#[derive(Subcommand, Debug)]
enum AsymCmd {
    /// chi(V \ H) for V of dimension DIM and top degree DEG.
    Complement { dim: u32, deg: BigInt },
    /// chi(V ∩ H).
    Section { dim: u32, deg: BigInt },
    /// chi(H \ V) in ambient dimension N.
    Ambient { n: u32, deg: BigInt },
    /// Top-degree sum of terms such as +5k^2 -3k 7 (global flags go before
    /// the subcommand here).
    Dominance {
        #[arg(allow_hyphen_values = true, required = true)]
        terms: Vec<String>,
    },
}

/// What to print and how to exit.
struct Run {
    command: String,
    digest: Option<String>,
    outcome: Result<Outcome, InputError>,
    /// Forces exit code 2 on a computed report (invalid data under `validate`).
    invalid: bool,
}

impl Run {
    fn new(command: impl Into<String>, digest: Option<String>, outcome: Result<Outcome, InputError>) -> Self {
        Run {
            command: command.into(),
            digest,
            outcome,
            invalid: false,
        }
    }
}

fn with_datum(
    command: String,
    file: &Path,
    f: impl FnOnce(&logzeta::model::ResolutionDatum) -> Result<Outcome, InputError>,
) -> Run {
    match commands::read_input(file) {
        Ok(input) => {
            let outcome = commands::load(&input).and_then(|d| f(&d));
            Run::new(command, Some(input.digest), outcome)
        }
        Err(e) => Run::new(command, None, Err(e)),
    }
}

fn run(cli: &Cli) -> Run {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match &cli.cmd {
        Cmd::Validate { file } => match commands::read_input(file) {
            Ok(Input { text, digest }) => {
                let input = Input { text, digest: digest.clone() };
                match commands::cmd_validate(&input) {
                    Ok((out, valid)) => Run {
                        invalid: !valid,
                        ..Run::new("validate", Some(digest), Ok(out))
                    },
                    Err(e) => Run::new("validate", Some(digest), Err(e)),
                }
            }
            Err(e) => Run::new("validate", None, Err(e)),
        },
        Cmd::Topzeta { file, diagonal } => {
            let name = if *diagonal { "topzeta --diagonal" } else { "topzeta" };
            with_datum(name.into(), file, |d| commands::cmd_topzeta(d, *diagonal, exec))
        }
        Cmd::Poles { file } => with_datum("poles".into(), file, |d| commands::cmd_poles(d, exec)),
        Cmd::Monzeta { file, point } => with_datum(format!("monzeta --point {point}"), file, |d| {
            commands::cmd_monzeta(d, point)
        }),
        Cmd::Support { file, diagonal } => {
            let name = if *diagonal { "support --diagonal" } else { "support" };
            with_datum(name.into(), file, |d| commands::cmd_support(d, *diagonal, exec))
        }
        Cmd::CheckMc { file } => with_datum("check-mc".into(), file, |d| commands::cmd_check_mc(d, exec)),
        Cmd::Augment {
            file,
            k,
            symbolic: _,
            output,
        } => {
            let kv = match k {
                Some(k) => KValue::Numeric(k.clone()),
                None => KValue::Symbolic,
            };
            let name = match k {
                Some(k) => format!("augment --k {k}"),
                None => "augment --symbolic".into(),
            };
            with_datum(name, file, |d| commands::cmd_augment(d, &kv, output.as_ref()))
        }
        Cmd::Avg { cmd } => match cmd {
            AvgCmd::Check { file } => with_datum("avg check".into(), file, commands::cmd_avg_check),
            AvgCmd::Make { file, output } => with_datum("avg make".into(), file, |d| {
                commands::cmd_avg_make(d, output.as_ref())
            }),
            AvgCmd::Cones { b1, b2 } => {
                Run::new(format!("avg cones {b1} {b2}"), None, commands::cmd_avg_cones(*b1, *b2))
            }
        },
        Cmd::StrongMc { file, k } => with_datum(format!("strong-mc --k {k}"), file, |d| {
            commands::cmd_strong_mc(d, k, exec)
        }),
        Cmd::Asym { cmd } => match cmd {
            AsymCmd::Complement { dim, deg } => Run::new(
                format!("asym complement {dim} {deg}"),
                None,
                commands::cmd_asym_term(AsymKind::Complement, *dim, deg),
            ),
            AsymCmd::Section { dim, deg } => Run::new(
                format!("asym section {dim} {deg}"),
                None,
                commands::cmd_asym_term(AsymKind::Section, *dim, deg),
            ),
            AsymCmd::Ambient { n, deg } => Run::new(
                format!("asym ambient {n} {deg}"),
                None,
                commands::cmd_asym_term(AsymKind::Ambient, *n, deg),
            ),
            AsymCmd::Dominance { terms } => Run::new(
                format!("asym dominance {}", terms.join(" ")),
                None,
                commands::cmd_asym_dominance(terms),
            ),
        },
        Cmd::Example { .. } => unreachable!("handled before dispatch"),
    }
}

fn print_stdout(s: &str) {
    let mut out = std::io::stdout().lock();
    // A closed pipe is not an error worth reporting.
    let _ = out.write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Cmd::Example { name, b1, b2, d } = &cli.cmd {
        let b = b1.zip(*b2);
        return match commands::example_json(name, b, *d) {
            Ok(text) => {
                if !cli.quiet {
                    print_stdout(&text);
                }
                ExitCode::from(0)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        };
    }

    let r = run(&cli);
    let digest = r.digest.as_deref();
    match &r.outcome {
        Ok(out) => {
            if !cli.quiet {
                let text = match cli.format {
                    Format::Json => render_json(&envelope(
                        &r.command,
                        digest,
                        ("result", out.result.clone()),
                        out.verdict,
                    )),
                    Format::Text => render_text(&r.command, digest, out),
                };
                print_stdout(&text);
            }
            ExitCode::from(if r.invalid { 2 } else { out.exit_code() as u8 })
        }
        Err(e) => {
            if cli.format == Format::Json && !cli.quiet {
                let body = serde_json::json!({ "kind": e.kind, "message": e.message });
                print_stdout(&render_json(&envelope(&r.command, digest, ("error", body), None)));
            }
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
