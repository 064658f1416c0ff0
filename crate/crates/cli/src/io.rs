//! Reading JSON arguments and printing results.

use std::fs;

use anyhow::{bail, Context, Result};
use racb_core::{BuildingModel, Chamber, Diagram, IndexPartition, Word};
use serde::de::DeserializeOwned;
use serde_json::Value;

/// Parses `arg` as inline JSON when it starts with `{` or `[`, and
/// otherwise as the path of a JSON file.
pub fn read_json<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {}", short(arg)))
}

fn short(arg: &str) -> String {
    if arg.len() > 40 {
        format!("{}...", &arg[..40])
    } else {
        arg.to_string()
    }
}

/// A word given as a JSON array of index names; numbers are read as names.
pub fn read_word(arg: &str, d: &Diagram) -> Result<Word> {
    let v: Vec<Value> = serde_json::from_str(arg).with_context(|| format!("word {arg}"))?;
    v.iter()
        .map(|x| {
            let name = match x {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                other => bail!("word letters are names, got {other}"),
            };
            Ok(d.index_of(&name)?)
        })
        .collect()
}

pub fn word_json(w: &[usize], d: &Diagram) -> Value {
    Value::from(w.iter().map(|&i| d.name(i).to_string()).collect::<Vec<_>>())
}

/// `{"parts": [["1a", "1b"], ["2"], ...]}`.
#[derive(serde::Deserialize)]
struct PartitionFile {
    parts: Vec<Vec<String>>,
}

pub fn read_partition(arg: &str, d: &Diagram) -> Result<IndexPartition> {
    let p: PartitionFile = read_json(arg)?;
    Ok(IndexPartition::from_names(d, &p.parts)?)
}

pub fn parts_json(p: &IndexPartition, d: &Diagram) -> Value {
    Value::from(
        p.parts()
            .iter()
            .map(|part| part.iter().map(|&i| d.name(i).to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    )
}

/// A chamber given by its id, `[[type, a], ...]`.
pub fn read_chamber(arg: &str, model: &BuildingModel) -> Result<Chamber> {
    let raw: Vec<(usize, u32)> = serde_json::from_str(arg).with_context(|| format!("chamber {arg}"))?;
    if let Some(&(t, _)) = raw.iter().find(|s| s.0 >= model.rank()) {
        bail!("chamber {arg}: type {t} is outside the index set");
    }
    Ok(model.chamber(&raw)?)
}

pub fn print(json: bool, value: &Value, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("json value"));
    } else {
        println!("{}", text());
    }
}
