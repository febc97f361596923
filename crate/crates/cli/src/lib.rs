//! The `varbi` command-line tool. [`run`] parses arguments, loads the model
//! file, dispatches to exactly one library operation and renders a report.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand};

mod commands;

use varbi::frontend::{Report, Verdict};
use varbi::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NONZERO: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;

/// A subcommand and the library operations it reaches.
#[derive(Clone, Copy, Debug)]
pub struct CommandEntry {
    pub name: &'static str,
    pub operations: &'static [&'static str],
}

pub const COMMANDS: &[CommandEntry] = &[
    CommandEntry { name: "fmt", operations: &["frontend::parse_model", "frontend::render_form"] },
    CommandEntry { name: "calc", operations: &["GradedPoly::mul", "Form::wedge"] },
    CommandEntry { name: "partial", operations: &["GradedPoly::partial"] },
    CommandEntry { name: "total", operations: &["GradedPoly::total_derivative", "GradedPoly::total_derivative_multi"] },
    CommandEntry { name: "evaluate", operations: &["GradedPoly::evaluate"] },
    CommandEntry { name: "d", operations: &["Form::d"] },
    CommandEntry { name: "split", operations: &["Form::split_d"] },
    CommandEntry { name: "project", operations: &["Form::project"] },
    CommandEntry { name: "interior", operations: &["Form::interior"] },
    CommandEntry { name: "lie", operations: &["Form::lie_derivative"] },
    CommandEntry { name: "rho", operations: &["variational::rho"] },
    CommandEntry { name: "el", operations: &["variational::euler_lagrange"] },
    CommandEntry { name: "lepage", operations: &["variational::lepagean"] },
    CommandEntry { name: "decompose", operations: &["variational::check_decomposition"] },
    CommandEntry { name: "trivial", operations: &["variational::triviality_test"] },
    CommandEntry { name: "prolong", operations: &["SuperSymmetry::prolong"] },
    CommandEntry { name: "contact", operations: &["symmetry::contact_preservation_check"] },
    CommandEntry { name: "check-fvf", operations: &["symmetry::first_variational_residual"] },
    CommandEntry { name: "noether", operations: &["symmetry::noether_current"] },
    CommandEntry { name: "div-sym", operations: &["symmetry::divergence_symmetry_test"] },
    CommandEntry { name: "defect", operations: &["symmetry::el_symmetry_defect"] },
    CommandEntry { name: "brst-build", operations: &["BrstModel::build"] },
    CommandEntry { name: "nilpotent", operations: &["brst::nilpotency_check"] },
    CommandEntry { name: "s", operations: &["brst::s_operator"] },
    CommandEntry { name: "dh-solve", operations: &["brst::dh_solve"] },
    CommandEntry { name: "descent", operations: &["brst::descent_solve", "brst::descent_verify"] },
    CommandEntry { name: "cocycle", operations: &["brst::iterated_cocycle_check"] },
    CommandEntry { name: "selfcheck", operations: &["checks::all"] },
];

#[derive(Parser, Debug)]
#[command(name = "varbi", version, about = "Exact computations in the variational bicomplex")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub(crate) struct Model {
    /// Model file (`.vb`).
    pub model: PathBuf,
    /// Emit the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Escalation cap for the ansatz solvers.
    #[arg(long, env = "VARBI_BOUND", default_value_t = 3)]
    pub bound: usize,
}

#[derive(Args, Debug, Clone)]
pub(crate) struct WithForm {
    #[command(flatten)]
    pub m: Model,
    /// An expression; item names may be used inside it.
    #[arg(long)]
    pub form: String,
}

#[derive(Args, Debug, Clone)]
pub(crate) struct WithLagrangian {
    #[command(flatten)]
    pub m: Model,
    /// A `(0, n)` expression or the name of a Lagrangian item.
    #[arg(long)]
    pub lagrangian: String,
}

#[derive(Args, Debug, Clone)]
pub(crate) struct WithSymmetry {
    #[command(flatten)]
    pub m: Model,
    /// Symmetry item; defaults to the only one declared, or to the BRST
    /// symmetry of the structure constants.
    #[arg(long)]
    pub symmetry: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a model file and print it canonically.
    Fmt(Model),
    /// Evaluate an expression and print it canonically.
    Calc {
        #[command(flatten)]
        m: Model,
        expr: String,
    },
    /// Left partial derivative of a function.
    Partial {
        #[command(flatten)]
        f: WithForm,
        /// A single generator such as `x1` or `y_{1}`.
        #[arg(long)]
        wrt: String,
    },
    /// Total derivative `d_Λ` of a form's coefficients.
    Total {
        #[command(flatten)]
        f: WithForm,
        /// Comma-separated directions.
        #[arg(long, value_delimiter = ',', required = true)]
        index: Vec<u8>,
    },
    /// Substitute rationals for even generators.
    Evaluate {
        #[command(flatten)]
        f: WithForm,
        /// `GENERATOR=RATIONAL`, repeated.
        #[arg(long = "at")]
        at: Vec<String>,
    },
    /// Exterior differential.
    D(WithForm),
    /// Horizontal and vertical differentials.
    Split(WithForm),
    /// Bidegree projection.
    Project {
        #[command(flatten)]
        f: WithForm,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
    /// Interior product with a symmetry.
    Interior {
        #[command(flatten)]
        s: WithSymmetry,
        #[arg(long)]
        form: String,
    },
    /// Lie derivative along a symmetry.
    Lie {
        #[command(flatten)]
        s: WithSymmetry,
        #[arg(long)]
        form: String,
    },
    /// Interior Euler operator on a `(k, n)`-form.
    Rho(WithForm),
    /// Euler-Lagrange form.
    El(WithLagrangian),
    /// Lepagean equivalent.
    Lepage(WithLagrangian),
    /// Residual of `dL = δL - d_H Ξ`.
    Decompose(WithLagrangian),
    /// Decide whether a Lagrangian is variationally trivial.
    Trivial(WithLagrangian),
    /// Prolonged component of a symmetry.
    Prolong {
        #[command(flatten)]
        s: WithSymmetry,
        /// A jet such as `y_{1,1}`.
        #[arg(long)]
        jet: String,
    },
    /// Contact-ideal preservation residuals.
    Contact {
        #[command(flatten)]
        s: WithSymmetry,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// First variational formula residual.
    CheckFvf {
        #[command(flatten)]
        s: WithSymmetry,
        #[arg(long)]
        lagrangian: String,
    },
    /// Noether current of a vertical divergence symmetry.
    Noether {
        #[command(flatten)]
        s: WithSymmetry,
        #[arg(long)]
        lagrangian: String,
        /// Divergence witness with `L_υ L = d_H σ`.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Decide whether `L_υ L` is `d_H`-exact.
    DivSym {
        #[command(flatten)]
        s: WithSymmetry,
        #[arg(long)]
        lagrangian: String,
    },
    /// Compare `δ(L_υ L)` with `L_υ δL`.
    Defect {
        #[command(flatten)]
        s: WithSymmetry,
        #[arg(long)]
        lagrangian: String,
    },
    /// BRST symmetry of the declared structure constants.
    BrstBuild(Model),
    /// Check `L_υ(υ^A) = 0` for every field.
    Nilpotent(WithSymmetry),
    /// The BRST operator on a horizontal form.
    S {
        #[command(flatten)]
        s: WithSymmetry,
        #[arg(long)]
        form: String,
    },
    /// Solve `d_H σ = φ`.
    DhSolve(WithForm),
    /// Solve and verify the descent equations from a top form.
    Descent {
        #[command(flatten)]
        s: WithSymmetry,
        #[arg(long)]
        form: String,
    },
    /// Classify a horizontal form as closed, exact or neither.
    Cocycle {
        #[command(flatten)]
        s: WithSymmetry,
        #[arg(long)]
        form: String,
    },
    /// Run the seeded randomized identity suites.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Exit code, standard output and standard error of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Names of the subcommands clap knows about.
pub fn subcommand_names() -> Vec<String> {
    Cli::command()
        .get_subcommands()
        .map(|c| c.get_name().to_string())
        .collect()
}

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Verified | Verdict::Computed => EXIT_OK,
        Verdict::Nonzero | Verdict::Obstruction => EXIT_NONZERO,
        Verdict::Undecided => EXIT_UNDECIDED,
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        Error::DivergenceMismatch(_) => EXIT_NONZERO,
        _ => EXIT_USAGE,
    }
}

pub(crate) enum Failure {
    Engine(Error),
    Missing(PathBuf, String),
    /// A parse error located in a model file.
    ParseIn(PathBuf, Error),
    /// A parse error in the value of a command-line flag.
    ParseArg(&'static str, Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let (json, result) = commands::dispatch(cli.command);
    match result {
        Ok(report) => {
            let stdout = if json {
                serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"
            } else {
                format!("{}\n", report)
            };
            Outcome {
                code: exit_code(report.verdict),
                stdout,
                stderr: String::new(),
            }
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Engine(e) => (error_code(&e), e.to_string()),
                Failure::ParseIn(p, e) => (EXIT_PARSE, format!("{}:{}", p.display(), e)),
                Failure::ParseArg(flag, e) => (EXIT_PARSE, format!("--{}:{}", flag, e)),
                Failure::Missing(p, why) => (EXIT_NO_INPUT, format!("cannot read {}: {}", p.display(), why)),
                Failure::Usage(m) => (EXIT_USAGE, m),
            };
            Outcome {
                code,
                stdout: String::new(),
                stderr: format!("varbi: error: {}\n", msg),
            }
        }
    }
}

pub(crate) type Reported = Result<Report, Failure>;
