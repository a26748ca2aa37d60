//! `gsd`: runs one computation on a JSON project file and prints a JSON report.
//!
//! Exit codes: 0 success, 1 verification failure, 2 schema or input error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gsd_core::gs::{Kind, DEFAULT_IDEMPOTENT_BOUND};
use gsd_core::project::{Project, SchemaError, IDEMPOTENT_CONSTRUCTION, SCHEMA_VERSION};
use serde_json::{json, Value};

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "gsd", version, about = "Gerstenhaber-Schack cohomology and twisted deformations of presheaves of algebras")]
struct Cli {
    /// Suppress progress messages on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    /// Degree bound for Eulerian idempotents (overrides GSD_IDEMPOTENT_BOUND).
    #[arg(long, global = true)]
    idempotent_bound: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the twisted presheaf axioms.
    Check { project: PathBuf },
    /// Betti number of one complex in one degree.
    Cohomology {
        project: PathBuf,
        #[arg(long, value_enum)]
        complex: Complex,
        #[arg(long)]
        degree: usize,
        /// gs: full | normalized | normalized_reduced | truncated | truncated_normalized_reduced;
        /// hoch: full | normalized; simp: full | reduced; cech: alternating | full.
        #[arg(long)]
        kind: Option<String>,
        /// Row `q` of the double complex for `simp` (coefficients `A^{⊗q}`).
        #[arg(long, default_value_t = 0)]
        row: usize,
    },
    /// Hodge components of H^n_GS for a commutative presheaf.
    Hodge {
        project: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Build the first-order deformation of a named 2-cochain.
    Deform {
        project: PathBuf,
        #[arg(long)]
        cocycle: String,
    },
    /// Decide whether two named cocycles give equivalent deformations.
    Equiv {
        project: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Check this named (g₁, τ₁) instead of searching for one.
        #[arg(long)]
        via: Option<String>,
    },
    /// Compare simplicial and alternating Cech cohomology on a meet poset.
    CompareCech {
        project: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Classify a named pre-descent datum.
    DescentCheck {
        project: PathBuf,
        #[arg(long)]
        datum: String,
    },
    /// Lift a Hodge top-component cochain through (f^σ)^{⊗r}.
    Factor {
        project: PathBuf,
        #[arg(long)]
        cochain: String,
        /// Simplicial degree of the blocks to lift.
        #[arg(long)]
        p: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Complex {
    Hoch,
    Simp,
    Cech,
    Gs,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Cohomology { .. } => "cohomology",
            Command::Hodge { .. } => "hodge",
            Command::Deform { .. } => "deform",
            Command::Equiv { .. } => "equiv",
            Command::CompareCech { .. } => "compare-cech",
            Command::DescentCheck { .. } => "descent-check",
            Command::Factor { .. } => "factor",
        }
    }

    fn project(&self) -> &PathBuf {
        match self {
            Command::Check { project }
            | Command::Cohomology { project, .. }
            | Command::Hodge { project, .. }
            | Command::Deform { project, .. }
            | Command::Equiv { project, .. }
            | Command::CompareCech { project, .. }
            | Command::DescentCheck { project, .. }
            | Command::Factor { project, .. } => project,
        }
    }
}

enum Failure {
    Schema(SchemaError),
    Input(String),
}

fn bound(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("GSD_IDEMPOTENT_BOUND") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("GSD_IDEMPOTENT_BOUND must be a non-negative integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_IDEMPOTENT_BOUND),
    }
}

fn run(cli: &Cli, bound: usize) -> Result<Outcome, Failure> {
    let path = cli.command.project();
    if !cli.quiet {
        eprintln!("gsd: loading {}", path.display());
    }
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let p = Project::from_json(&text).map_err(Failure::Schema)?;
    if !cli.quiet {
        eprintln!("gsd: running {}", cli.command.name());
    }
    let r = match &cli.command {
        Command::Check { .. } => commands::check(&p),
        Command::Cohomology { complex, degree, kind, row, .. } => match complex {
            Complex::Gs => {
                let kind = match kind {
                    Some(k) => k.parse::<Kind>().map_err(Failure::Input)?,
                    None => Kind::Full,
                };
                commands::cohomology_gs(&p, *degree, kind)
            }
            Complex::Hoch => commands::cohomology_hoch(&p, *degree, kind.as_deref().unwrap_or("full")),
            Complex::Simp => commands::cohomology_simp(&p, *degree, *row, kind.as_deref().unwrap_or("full")),
            Complex::Cech => commands::cohomology_cech(&p, *degree, kind.as_deref().unwrap_or("alternating")),
        },
        Command::Hodge { degree, .. } => commands::hodge(&p, *degree, bound),
        Command::Deform { cocycle, .. } => commands::deform(&p, cocycle),
        Command::Equiv { from, to, via, .. } => commands::equiv(&p, from, to, via.as_deref()),
        Command::CompareCech { max_degree, .. } => commands::compare_cech(&p, *max_degree),
        Command::DescentCheck { datum, .. } => commands::descent_check(&p, datum),
        Command::Factor { cochain, p: deg, .. } => commands::factor(&p, cochain, *deg, bound),
    };
    r.map_err(|e| match e {
        commands::Error::Schema(s) => Failure::Schema(s),
        commands::Error::Input(s) => Failure::Input(s),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "idempotent_construction": IDEMPOTENT_CONSTRUCTION,
        "command": cli.command.name(),
    });
    let result = bound(cli.idempotent_bound).and_then(|b| {
        out["idempotent_bound"] = json!(b);
        run(&cli, b)
    });
    let code = match result {
        Ok(o) => {
            out["status"] = json!(if o.passed { "ok" } else { "verification_failed" });
            out["report"] = o.report;
            if o.passed {
                0
            } else {
                1
            }
        }
        Err(Failure::Schema(e)) => {
            out["status"] = json!("schema_error");
            out["error"] = json!({"pointer": e.pointer, "message": e.message});
            2
        }
        Err(Failure::Input(m)) => {
            out["status"] = json!("input_error");
            out["error"] = json!({"message": m});
            2
        }
    };
    println!("{}", serde_json::to_string_pretty(&out).unwrap_or_else(|_| Value::Null.to_string()));
    ExitCode::from(code)
}
