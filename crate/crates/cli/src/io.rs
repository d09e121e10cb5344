//! Input and output helpers shared by the subcommands.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::{bail, Context};
use serde::de::DeserializeOwned;
use serde::Serialize;

use csp_comm::structures::{make_named, CatalogName, Structure};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAP: u8 = 3;

/// Reads a file, or standard input when `source` is `-`.
pub fn read_source(source: &str) -> anyhow::Result<String> {
    if source == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading standard input")?;
        return Ok(text);
    }
    fs::read_to_string(source).with_context(|| format!("reading {source}"))
}

/// Parses a catalog reference such as `clique:3` or `directed_edge`.
pub fn parse_catalog(spec: &str) -> anyhow::Result<Option<Structure>> {
    let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
    let Ok(name) = name.parse::<CatalogName>() else { return Ok(None) };
    let params = params
        .split(',')
        .filter(|p| !p.is_empty())
        .map(|p| p.trim().parse::<usize>().with_context(|| format!("bad parameter `{p}` in `{spec}`")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Some(make_named(name, &params)?))
}

/// Loads a structure from inline JSON, a catalog reference, `-` for
/// standard input, or a file path, in that order of precedence.
pub fn load_structure(source: &str) -> anyhow::Result<Structure> {
    let trimmed = source.trim_start();
    if trimmed.starts_with('{') {
        return Structure::from_json(source).context("parsing inline structure");
    }
    if !Path::new(source).exists() {
        if let Some(s) = parse_catalog(source)? {
            return Ok(s);
        }
        if source != "-" {
            bail!("`{source}` is neither a file, inline JSON, nor a catalog name");
        }
    }
    let text = read_source(source)?;
    Structure::from_json(&text).with_context(|| format!("parsing structure from {source}"))
}

/// Loads any JSON document from a file, `-`, or inline text.
pub fn load_json<T: DeserializeOwned>(source: &str) -> anyhow::Result<T> {
    let trimmed = source.trim_start();
    let text =
        if trimmed.starts_with('{') || trimmed.starts_with('[') { source.to_string() } else { read_source(source)? };
    serde_json::from_str(&text).with_context(|| format!("parsing JSON from {source}"))
}

/// Writes `text` plus a newline to `output`, or to standard output.
pub fn emit_text(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")?;
            Ok(())
        }
    }
}

pub fn emit_json<T: Serialize + ?Sized>(output: Option<&Path>, value: &T) -> anyhow::Result<()> {
    emit_text(output, &serde_json::to_string_pretty(value)?)
}

/// Maps an error to an exit code: resource caps give 3, everything else 2.
pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    let capped = err.chain().any(|e| e.downcast_ref::<csp_comm::Error>().is_some_and(|e| e.is_cap_exceeded()));
    if capped {
        EXIT_CAP
    } else {
        EXIT_USAGE
    }
}
