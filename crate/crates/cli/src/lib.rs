//! Front end of `derived-intersect`: problem files in, JSON reports out.
//!
//! Exit codes: `0` verified success, `1` negative verdict, `2` input error,
//! `3` internal invariant violation or degree cap.

pub mod commands;
pub mod problem;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use di_core::groebner::set_degree_cap;
use di_core::Error;

use commands::{Setup, Trace};
use problem::{Kind, ProblemFile};
use report::{Report, Status, ENGINE};

pub const DEGREE_CAP_VAR: &str = "DI_MAX_DEGREE";

#[derive(Debug, Parser)]
#[command(name = "derived-intersect", version, about = "Derived intersections of linear cycles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Coefficient field: `qq` or `fp:<prime>`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Monomial order: degrevlex, deglex or lex.
    #[arg(long, global = true)]
    pub order: Option<String>,
    /// Seed for randomized frame changes; overrides the file's seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print a human-readable summary besides the JSON report.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tor ranks and the comparison with the excess bundle.
    Tor { file: PathBuf },
    /// Excess sequence and its splitting.
    Excess { file: PathBuf },
    /// AK complex, resolution check, change of quantization, restriction.
    Ak { file: PathBuf },
    /// Θ, its quasi-isomorphism verdict and the extracted retraction.
    Formality { file: PathBuf },
    /// Module splitting of the (optionally sheared) excess sequence.
    Split { file: PathBuf },
    /// Reduction to the diagonal and the full pipeline on the doubled pair.
    Diag { file: PathBuf },
    /// Graded section or non-split certificate for a map of line bundle sums.
    GradedSplit { file: PathBuf },
}

impl Command {
    pub fn kind(&self) -> Kind {
        match self {
            Command::Tor { .. } => Kind::Tor,
            Command::Excess { .. } => Kind::Excess,
            Command::Ak { .. } => Kind::Ak,
            Command::Formality { .. } => Kind::Formality,
            Command::Split { .. } => Kind::Split,
            Command::Diag { .. } => Kind::Diag,
            Command::GradedSplit { .. } => Kind::GradedSplit,
        }
    }

    pub fn file(&self) -> &PathBuf {
        match self {
            Command::Tor { file }
            | Command::Excess { file }
            | Command::Ak { file }
            | Command::Formality { file }
            | Command::Split { file }
            | Command::Diag { file }
            | Command::GradedSplit { file } => file,
        }
    }
}

/// Flags that apply to a problem independently of where it came from.
#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub field: Option<String>,
    pub order: Option<String>,
    pub seed: Option<u64>,
    pub degree_cap: Option<u32>,
}

fn empty_report(kind: Kind, flags: &Flags) -> Report {
    Report {
        engine: ENGINE.into(),
        command: kind,
        status: Status::InputError,
        verdict: "input-error".into(),
        field: None,
        order: None,
        seed: flags.seed,
        degree_cap: flags.degree_cap,
        input: None,
        stages: Vec::new(),
        error: None,
        result: None,
    }
}

fn input_error(mut report: Report, msg: String) -> Report {
    report.status = Status::InputError;
    report.verdict = "input-error".into();
    report.error = Some(msg);
    report
}

/// Runs one problem given as JSON text.
pub fn run_problem(kind: Kind, text: &str, flags: &Flags) -> Report {
    let mut report = empty_report(kind, flags);
    let problem = match ProblemFile::from_json(text) {
        Ok(p) => p,
        Err(e) => return input_error(report, e),
    };
    report.input = Some(problem.clone());
    report.seed = flags.seed.or(problem.seed);
    if let Err(e) = problem.validate(kind) {
        return input_error(report, e);
    }
    let field = match problem.field(flags.field.as_deref()) {
        Ok(f) => f,
        Err(e) => return input_error(report, e),
    };
    let order = match problem.order(flags.order.as_deref()) {
        Ok(o) => o,
        Err(e) => return input_error(report, e),
    };
    report.field = Some(field.to_string());
    report.order = Some(order.name().into());
    let setup = Setup { field, order, seed: report.seed };

    let mut trace = Trace::default();
    set_degree_cap(flags.degree_cap);
    let outcome = match kind {
        Kind::Tor => commands::tor(&problem, &setup, &mut trace),
        Kind::Excess => commands::excess(&problem, &setup, &mut trace),
        Kind::Ak => commands::ak(&problem, &setup, &mut trace),
        Kind::Formality => commands::formality(&problem, &setup, &mut trace),
        Kind::Split => commands::split(&problem, &setup, &mut trace),
        Kind::Diag => commands::diag(&problem, &setup, &mut trace),
        Kind::GradedSplit => commands::graded_split(&problem, &setup, &mut trace),
    };
    set_degree_cap(None);
    report.stages = trace.stages;
    match outcome {
        Ok(done) => {
            report.status = if done.positive { Status::Ok } else { Status::Negative };
            report.verdict = done.verdict;
            report.result = Some(done.result);
        }
        Err(e) => {
            let (status, verdict) = match e {
                Error::DegreeCap { .. } => (Status::DegreeCap, "degree-cap"),
                Error::Invariant(_) => (Status::InternalError, "internal-error"),
                _ => (Status::InputError, "input-error"),
            };
            report.status = status;
            report.verdict = verdict.into();
            report.error = Some(e.to_string());
        }
    }
    report
}

/// Reads the problem file named on the command line and runs it.
pub fn run(cli: &Cli, degree_cap: Option<u32>) -> Report {
    let flags = Flags { field: cli.field.clone(), order: cli.order.clone(), seed: cli.seed, degree_cap };
    let kind = cli.command.kind();
    let path = cli.command.file();
    match std::fs::read_to_string(path) {
        Ok(text) => run_problem(kind, &text, &flags),
        Err(e) => input_error(empty_report(kind, &flags), format!("cannot read {}: {e}", path.display())),
    }
}

/// Parses `DI_MAX_DEGREE`.
pub fn degree_cap_from_env(value: Option<String>) -> Result<Option<u32>, String> {
    match value {
        None => Ok(None),
        Some(v) => v.trim().parse().map(Some).map_err(|_| format!("{DEGREE_CAP_VAR}={v} is not a degree")),
    }
}

/// Short text rendering of a report.
pub fn summary(report: &Report) -> String {
    use report::CommandResult as R;
    let mut lines = vec![
        format!("command: {}", report.command),
        format!("status:  {} (exit {})", report.status.name(), report.exit_code()),
        format!("verdict: {}", report.verdict),
    ];
    if let Some(f) = &report.field {
        lines.push(format!("field:   {f}"));
    }
    if let Some(e) = &report.error {
        lines.push(format!("error:   {e}"));
        if !report.stages.is_empty() {
            lines.push(format!("completed stages: {}", report.stages.join(", ")));
        }
    }
    match &report.result {
        Some(R::Tor(t)) => {
            let b = t.pair.blocks;
            lines.push(format!("blocks (p, q, r, s): ({}, {}, {}, {})", b.p, b.q, b.r, b.s));
            lines.push(format!("tor ranks: {:?}", t.tor_ranks));
        }
        Some(R::Excess(e)) => lines.push(format!("exact: {}", e.exactness.holds())),
        Some(R::Ak(a)) => {
            lines.push(format!("term ranks: {:?} (expected {:?})", a.term_ranks, a.expected_ranks));
            lines.push(format!("restricted ranks: {:?}", a.restriction.ranks));
        }
        Some(R::Formality(f)) => {
            lines.push(format!("tor ranks: {:?}", f.tor_ranks));
            lines.push(format!("theta quasi-iso: {}", f.theta.quasi_iso.quasi_isomorphism));
        }
        Some(R::Split(s)) => {
            if let Some(seed) = s.sheared_by {
                lines.push(format!("sheared by seed {seed}"));
            }
        }
        Some(R::Diag(d)) => {
            lines.push(format!("codim: {}, excess rank: {}", d.codim, d.excess_rank));
            lines.push(format!("tor ranks: {:?}", d.tor.tor_ranks));
        }
        Some(R::GradedSplit(g)) => {
            lines.push(format!("candidate sections: {}", g.hom_dimension));
            if let report::GradedOutcome::NonSplit(c) = &g.outcome {
                lines.push(format!("rank {} vs augmented {}", c.rank_matrix, c.rank_augmented));
                lines.push(format!("unsatisfiable: {}", c.inconsistent_equation));
            }
        }
        None => {}
    }
    lines.join("\n")
}
