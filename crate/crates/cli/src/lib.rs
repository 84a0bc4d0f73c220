//! Batch front-end: JSON requests in, JSON (and optionally SVG) out.

mod commands;
mod faces;
mod schema;
pub mod svg;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use btgit_core::apartment::ApartmentError;
use btgit_core::interval::IntervalError;
use btgit_core::models::ModelError;
use btgit_core::polyhedra::PolyError;
use btgit_core::rootdata::RootError;
use btgit_core::torusgit::GitError;
use btgit_core::treebuilding::TreeError;
use btgit_core::valfield::ValError;

pub use commands::Rat;
pub use svg::{render_svg, Figure};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid request: {0}")]
    Validation(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit status for this error.
    pub fn code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Unsupported(_) => "unsupported",
            CliError::Io(_) => "io",
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({ "error": { "code": self.code(), "kind": self.kind(), "message": self.to_string() } })
    }
}

fn poly_unsupported(e: &PolyError) -> bool {
    matches!(
        e,
        PolyError::PivotLimit(_) | PolyError::TooManyDimensions(..)
    )
}

fn root_unsupported(e: &RootError) -> bool {
    matches!(
        e,
        RootError::Unsupported(..) | RootError::UnknownFamily(_) | RootError::UnsupportedPreset(_)
    )
}

fn git_unsupported(e: &GitError) -> bool {
    match e {
        GitError::Unsupported(_) => true,
        GitError::Root(r) => root_unsupported(r),
        GitError::Poly(p) => poly_unsupported(p),
        _ => false,
    }
}

fn apartment_unsupported(e: &ApartmentError) -> bool {
    match e {
        ApartmentError::NotSplit => true,
        ApartmentError::Poly(p) => poly_unsupported(p),
        _ => false,
    }
}

fn interval_unsupported(e: &IntervalError) -> bool {
    match e {
        IntervalError::Poly(p) => poly_unsupported(p),
        IntervalError::Apartment(a) => apartment_unsupported(a),
        _ => false,
    }
}

fn model_unsupported(e: &ModelError) -> bool {
    match e {
        ModelError::UnknownModel(_) | ModelError::Unsupported(_) => true,
        ModelError::Git(g) => git_unsupported(g),
        _ => false,
    }
}

fn tree_unsupported(e: &TreeError) -> bool {
    match e {
        TreeError::NotProjectiveLine(_) => true,
        TreeError::Model(m) => model_unsupported(m),
        TreeError::Interval(i) => interval_unsupported(i),
        TreeError::Poly(p) => poly_unsupported(p),
        _ => false,
    }
}

macro_rules! classify_error {
    ($($ty:ty => $pred:expr),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                let pred: fn(&$ty) -> bool = $pred;
                if pred(&e) {
                    CliError::Unsupported(e.to_string())
                } else {
                    CliError::Validation(e.to_string())
                }
            }
        })*
    };
}

classify_error! {
    PolyError => poly_unsupported,
    RootError => root_unsupported,
    GitError => git_unsupported,
    ApartmentError => apartment_unsupported,
    IntervalError => interval_unsupported,
    ModelError => model_unsupported,
    TreeError => tree_unsupported,
    ValError => |_| false,
}

#[derive(
    Debug,
    Clone,
    Copy,
    PartialEq,
    Eq,
    PartialOrd,
    Ord,
    Hash,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Rootsys,
    Classify,
    Chambers,
    Status,
    Interval,
    Tree,
    Models,
    Chi,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Rootsys,
        Command::Classify,
        Command::Chambers,
        Command::Status,
        Command::Interval,
        Command::Tree,
        Command::Models,
        Command::Chi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Rootsys => "rootsys",
            Command::Classify => "classify",
            Command::Chambers => "chambers",
            Command::Status => "status",
            Command::Interval => "interval",
            Command::Tree => "tree",
            Command::Models => "models",
            Command::Chi => "chi",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Validation(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandRequest {
    pub command: Command,
    pub payload: Value,
}

#[derive(Debug, Clone)]
pub struct CommandResult {
    pub json: Value,
    /// Drawable data when the command has a rank ≤ 2 picture.
    pub figure: Option<Figure>,
}

/// Validates the payload against its schema, then runs the command.
pub fn run(req: &CommandRequest) -> Result<CommandResult, CliError> {
    schema::validate_payload(req.command, &req.payload)?;
    commands::dispatch(req.command, &req.payload)
}

/// Parses a request document: one request object or an array of them.
pub fn parse_requests(doc: &Value) -> Result<Vec<CommandRequest>, CliError> {
    schema::validate_envelope(doc)?;
    let bad = |e: serde_json::Error| CliError::Validation(e.to_string());
    match doc {
        Value::Array(items) => items
            .iter()
            .map(|v| serde_json::from_value(v.clone()).map_err(bad))
            .collect(),
        _ => Ok(vec![serde_json::from_value(doc.clone()).map_err(bad)?]),
    }
}

/// Runs every request on a small worker pool; results keep the input order.
pub fn run_batch(reqs: &[CommandRequest]) -> Vec<Result<CommandResult, CliError>> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(reqs.len())
        .max(1);
    let mut slots: Vec<Option<Result<CommandResult, CliError>>> =
        (0..reqs.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..reqs.len())
                        .step_by(workers)
                        .map(|i| (i, run(&reqs[i])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

/// Stable pretty JSON with a trailing newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
