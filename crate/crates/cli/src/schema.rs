use std::collections::HashMap;
use std::sync::OnceLock;

use jsonschema::{Retrieve, Uri, Validator};
use serde_json::Value;

use crate::{CliError, Command};

const BASE: &str = "https://btgit.invalid/schemas/";

const DEFS: &str = include_str!("../../../schemas/defs.json");
const REQUEST: &str = include_str!("../../../schemas/request.json");

fn payload_source(c: Command) -> &'static str {
    match c {
        Command::Rootsys => include_str!("../../../schemas/rootsys.json"),
        Command::Classify => include_str!("../../../schemas/classify.json"),
        Command::Chambers => include_str!("../../../schemas/chambers.json"),
        Command::Status => include_str!("../../../schemas/status.json"),
        Command::Interval => include_str!("../../../schemas/interval.json"),
        Command::Tree => include_str!("../../../schemas/tree.json"),
        Command::Models => include_str!("../../../schemas/models.json"),
        Command::Chi => include_str!("../../../schemas/chi.json"),
    }
}

/// Serves the shipped shared definitions; nothing is fetched from the network.
struct Shipped;

impl Retrieve for Shipped {
    fn retrieve(
        &self,
        uri: &Uri<String>,
    ) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        if uri.as_str() == format!("{BASE}defs.json") {
            Ok(serde_json::from_str(DEFS)?)
        } else {
            Err(format!("no shipped schema at {}", uri.as_str()).into())
        }
    }
}

fn compile(src: &str) -> Validator {
    let schema: Value = serde_json::from_str(src).expect("shipped schema is JSON");
    jsonschema::options()
        .with_retriever(Shipped)
        .build(&schema)
        .expect("shipped schema compiles")
}

fn validators() -> &'static HashMap<Command, Validator> {
    static V: OnceLock<HashMap<Command, Validator>> = OnceLock::new();
    V.get_or_init(|| {
        Command::ALL
            .into_iter()
            .map(|c| (c, compile(payload_source(c))))
            .collect()
    })
}

fn check(v: &Validator, doc: &Value, what: &str) -> Result<(), CliError> {
    let errs: Vec<String> = v
        .iter_errors(doc)
        .map(|e| format!("{} at `{}`", e, e.instance_path()))
        .collect();
    if errs.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("{what}: {}", errs.join("; "))))
    }
}

pub fn validate_payload(c: Command, payload: &Value) -> Result<(), CliError> {
    check(&validators()[&c], payload, &format!("{c} payload"))
}

pub fn validate_envelope(doc: &Value) -> Result<(), CliError> {
    static V: OnceLock<Validator> = OnceLock::new();
    check(V.get_or_init(|| compile(REQUEST)), doc, "request")
}
