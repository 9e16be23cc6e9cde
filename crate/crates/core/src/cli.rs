//! Command-line surface. Every command prints one JSON document (or DOT) to
//! stdout; exit code 0 means success, 1 a validation or module error, and 2 a
//! failed check with its witness in the report.

use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::completion::{
    dense_pseudogroup, distributive_completion, idl_completion, schein_completion,
    tight_completion, CompletionSemigroup,
};
use crate::coverage::{check_axioms, separative_quotient, Coverage, CoverageKind};
use crate::duality::{boolean_duality_roundtrip, first_booleanization, is_spatial};
use crate::error::{Error, Result};
use crate::filters::{class_mins, filter_groupoid, FilterClass};
use crate::gen;
use crate::morphism::MorphismFile;
use crate::semigroup::{InvSemigroup, SemigroupFile};
use crate::topology::{basic_topology, patch_topology};
use crate::universal::{coarse_grained_check, compactness_condition};

#[derive(Parser, Debug)]
#[command(
    name = "ncstone",
    version,
    about = "Finite inverse semigroups and their Stone duals"
)]
pub struct Cli {
    /// Bound on cover sizes in coverage axiom checks.
    #[arg(long, global = true, default_value_t = 4)]
    pub cap: usize,
    /// Indent JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a builtin semigroup, e.g. `sym_inv:2`, `brandt:3`, `group0:z2`.
    Gen { name: String },
    /// Check the axioms and report structural predicates.
    Verify { input: String },
    /// List filters of a class by their least elements.
    Filters {
        input: String,
        #[arg(long, value_enum, default_value_t = ClassArg::All)]
        class: ClassArg,
    },
    /// Build a completion and print it as a semigroup file.
    Complete {
        input: String,
        #[arg(long, value_enum)]
        kind: CompletionArg,
        /// Print the morphism from the input instead.
        #[arg(long)]
        map: bool,
    },
    /// Emit a filter groupoid with a topology.
    Groupoid {
        input: String,
        #[arg(long, value_enum, default_value_t = ClassArg::All)]
        class: ClassArg,
        #[arg(long, value_enum, default_value_t = TopologyArg::Basic)]
        topology: TopologyArg,
        #[arg(long, value_enum, default_value_t = EmitArg::Json)]
        emit: EmitArg,
    },
    /// Run a duality check.
    Duality {
        input: String,
        #[arg(long, value_enum)]
        check: CheckArg,
    },
    /// Separative quotient under a coverage, printed as a semigroup file.
    Quotient {
        input: String,
        #[arg(long, value_enum, default_value_t = CoverageArg::Tight)]
        coverage: CoverageArg,
        /// Print the quotient map instead.
        #[arg(long)]
        map: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ClassArg {
    All,
    Ultra,
    Prime,
    Tight,
    Dense,
}

impl From<ClassArg> for FilterClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::All => FilterClass::All,
            ClassArg::Ultra => FilterClass::Ultra,
            ClassArg::Prime => FilterClass::Prime,
            ClassArg::Tight => FilterClass::Tight,
            ClassArg::Dense => FilterClass::Dense,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CompletionArg {
    Schein,
    Idl,
    Dist,
    Tight,
    DensePseudogroup,
    Booleanization,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TopologyArg {
    Basic,
    Patch,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EmitArg {
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CheckArg {
    Spatial,
    Sober,
    Roundtrip,
    Compactness,
    Coarse,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CoverageArg {
    Tight,
    Dense,
}

/// What a command produced.
pub struct Output {
    pub text: String,
    pub code: i32,
}

/// Reads a semigroup file, or a generator name when no such file exists.
pub fn load(input: &str) -> Result<InvSemigroup> {
    if Path::new(input).exists() {
        let text =
            std::fs::read_to_string(input).map_err(|e| Error::Parse(format!("{input}: {e}")))?;
        let file: SemigroupFile =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{input}: {e}")))?;
        InvSemigroup::from_file(&file)
    } else {
        gen::by_name(input)
    }
}

fn render<T: Serialize>(v: &T, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .expect("serializable");
    s.push('\n');
    s
}

fn error_report(e: &Error) -> Value {
    json!({ "error": e.kind(), "message": e.to_string() })
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = if code == 0 {
                e.to_string()
            } else {
                render(
                    &json!({ "error": "ParseError", "message": e.to_string() }),
                    false,
                )
            };
            Output { text, code }
        }
    }
}

pub fn run(cli: &Cli) -> Output {
    match execute(cli) {
        Ok((value, passed)) => Output {
            text: match value {
                Rendered::Json(v) => render(&v, cli.pretty),
                Rendered::Text(t) => t,
            },
            code: if passed { 0 } else { 2 },
        },
        Err(e) => Output {
            text: render(&error_report(&e), cli.pretty),
            code: if matches!(e, Error::CheckFailed(_)) {
                2
            } else {
                1
            },
        },
    }
}

enum Rendered {
    Json(Value),
    Text(String),
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn morphism_json(source: &InvSemigroup, target: &InvSemigroup, map: &[usize]) -> Value {
    to_value(&MorphismFile {
        source: source.to_file(),
        target: target.to_file(),
        map: map.to_vec(),
    })
}

fn completion_output(s: &InvSemigroup, c: &CompletionSemigroup, map: bool) -> Value {
    if map {
        morphism_json(s, &c.semigroup, &c.iota)
    } else {
        to_value(&c.semigroup.to_file())
    }
}

fn execute(cli: &Cli) -> Result<(Rendered, bool)> {
    use Rendered::Json;
    Ok(match &cli.command {
        Command::Gen { name } => (Json(to_value(&gen::by_name(name)?.to_file())), true),
        Command::Verify { input } => {
            let s = load(input)?;
            let predicates = s.zero().map(|_| s.predicates()).transpose()?;
            (
                Json(json!({
                    "valid": true,
                    "n": s.n(),
                    "zero": s.zero(),
                    "one": s.one(),
                    "idempotents": s.idempotents().iter().collect::<Vec<_>>(),
                    "predicates": predicates,
                })),
                true,
            )
        }
        Command::Filters { input, class } => {
            let s = load(input)?;
            let class = FilterClass::from(*class);
            let mins = class_mins(&s, class)?;
            let labels: Vec<&str> = mins.iter().map(|&m| s.label(m)).collect();
            (
                Json(json!({ "class": class.as_str(), "filters": mins, "labels": labels })),
                true,
            )
        }
        Command::Complete { input, kind, map } => {
            let s = load(input)?;
            let v = match kind {
                CompletionArg::Schein => completion_output(&s, &schein_completion(&s)?, *map),
                CompletionArg::Dist => completion_output(&s, &distributive_completion(&s)?, *map),
                CompletionArg::Idl => completion_output(&s, &idl_completion(&s)?, *map),
                CompletionArg::Tight => {
                    completion_output(&s, &tight_completion(&s)?.completion, *map)
                }
                CompletionArg::DensePseudogroup => {
                    completion_output(&s, &dense_pseudogroup(&s)?.completion, *map)
                }
                CompletionArg::Booleanization => {
                    let b = first_booleanization(&s)?;
                    if *map {
                        morphism_json(&s, &b.bisections.semigroup, &b.beta.map)
                    } else {
                        to_value(&b.bisections.semigroup.to_file())
                    }
                }
            };
            (Json(v), true)
        }
        Command::Groupoid {
            input,
            class,
            topology,
            emit,
        } => {
            let s = load(input)?;
            let fg = filter_groupoid(&s, FilterClass::from(*class))?;
            let tg = match topology {
                TopologyArg::Basic => basic_topology(&s, fg)?,
                TopologyArg::Patch => patch_topology(&s, fg)?,
            };
            match emit {
                EmitArg::Dot => (Rendered::Text(tg.to_dot()), true),
                EmitArg::Json => (Json(tg.to_json()), true),
            }
        }
        Command::Duality { input, check } => {
            let s = load(input)?;
            duality(&s, *check)?
        }
        Command::Quotient {
            input,
            coverage,
            map,
        } => {
            let s = load(input)?;
            let kind = match coverage {
                CoverageArg::Tight => CoverageKind::Tight,
                CoverageArg::Dense => CoverageKind::Dense,
            };
            let cov = Coverage::builtin(&s, kind)?;
            let axioms = check_axioms(&cov, cli.cap);
            if !axioms.passed {
                return Ok((Json(json!({ "axioms": to_value(&axioms) })), false));
            }
            let q = separative_quotient(&cov)?;
            let v = if *map {
                morphism_json(&s, &q.quotient, &q.sigma)
            } else {
                to_value(&q.quotient.to_file())
            };
            (Json(v), true)
        }
    })
}

fn duality(s: &InvSemigroup, check: CheckArg) -> Result<(Rendered, bool)> {
    use Rendered::Json;
    Ok(match check {
        CheckArg::Spatial => {
            let r = is_spatial(s)?;
            let ok = r.spatial;
            (Json(to_value(&r)), ok)
        }
        CheckArg::Sober => {
            let class = if s.is_distributive() {
                FilterClass::Prime
            } else {
                FilterClass::All
            };
            let tg = basic_topology(s, filter_groupoid(s, class)?)?;
            let sober = tg.is_sober()?;
            let identities_sober = tg.identities_sober()?;
            (
                Json(json!({
                    "class": class.as_str(),
                    "points": tg.groupoid.n(),
                    "sober": sober,
                    "identities_sober": identities_sober,
                })),
                sober,
            )
        }
        CheckArg::Roundtrip => {
            let r = boolean_duality_roundtrip(s)?;
            (
                Json(json!({
                    "points": r.epsilon.groupoid.groupoid.n(),
                    "bisections": r.epsilon.bisections.semigroup.n(),
                    "epsilon": r.iso.forward.map,
                    "inverse": r.iso.inverse.map,
                })),
                true,
            )
        }
        CheckArg::Compactness => {
            let r = compactness_condition(s)?;
            let ok = r.all();
            (Json(to_value(&r)), ok)
        }
        CheckArg::Coarse => {
            let r = coarse_grained_check(s)?;
            let ok = r.coarse_grained;
            (Json(to_value(&r)), ok)
        }
    })
}
