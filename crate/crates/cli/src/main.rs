use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::Value;

use btgit_cli::{
    parse_requests, render_svg, run_batch, to_json_string, CliError, Command, CommandRequest,
};

/// Exact computations on Bruhat-Tits buildings and GIT stability.
///
/// Reads a request `{"command": ..., "payload": ...}` or an array of them.
/// With `--command` the input is the payload alone.
#[derive(Debug, Parser)]
#[command(name = "btgit", version)]
struct Args {
    /// Treat the input as the payload of this command.
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Input file, `-` for stdin.
    #[arg(long = "in", default_value = "-")]
    input: String,
    /// Output file for the JSON result; stdout by default.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG figure (single request with a rank ≤ 2 picture).
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Returns the JSON document to write and the exit status.
fn execute(args: &Args) -> Result<(Value, i32), CliError> {
    let text = read_input(&args.input)?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("input is not JSON: {e}")))?;
    let batch = doc.is_array() && args.command.is_none();
    let reqs = match args.command {
        Some(command) => vec![CommandRequest {
            command,
            payload: doc,
        }],
        None => parse_requests(&doc)?,
    };
    if args.svg.is_some() && (batch || reqs.len() != 1) {
        return Err(CliError::Validation("--svg needs a single request".into()));
    }
    let results = run_batch(&reqs);
    if batch {
        let code = results
            .iter()
            .find_map(|r| r.as_ref().err().map(CliError::code))
            .unwrap_or(0);
        let items = results
            .into_iter()
            .map(|r| r.map_or_else(|e| e.to_json(), |r| r.json))
            .collect();
        return Ok((Value::Array(items), code));
    }
    let res = results.into_iter().next().expect("one request")?;
    if let Some(path) = &args.svg {
        let fig = res.figure.as_ref().ok_or_else(|| {
            CliError::Unsupported(format!(
                "`{}` has no figure for this input",
                reqs[0].command
            ))
        })?;
        fs::write(path, render_svg(fig)?)?;
    }
    Ok((res.json, 0))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (doc, code) = execute(&args).unwrap_or_else(|e| (e.to_json(), e.code()));
    if let Err(e) = emit(&args.out, &to_json_string(&doc)) {
        eprintln!("btgit: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
