//! JSON and CSV emission. Both formats carry the same metadata and rows; CSV
//! puts the metadata in leading `#` comment lines.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use severi_core::exactalg::parse_rational;
use severi_core::genfun::{InvariantRow, Surface, SERIES_CONVENTION};
use severi_core::operators::CONVENTION_VERSION;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format '{s}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub schema_version: u32,
    pub convention: String,
    pub convention_version: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<Surface>,
    pub parameters: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl Meta {
    pub fn new(command: &str) -> Self {
        Meta {
            schema_version: SCHEMA_VERSION,
            convention: SERIES_CONVENTION.into(),
            convention_version: CONVENTION_VERSION,
            command: command.into(),
            surface: None,
            parameters: BTreeMap::new(),
            pass: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    pub fn surface(mut self, s: Surface) -> Self {
        self.surface = Some(s);
        self
    }

    fn comment_lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("schema_version={}", self.schema_version),
            format!("convention={}", self.convention),
            format!("convention_version={}", self.convention_version),
            format!("command={}", self.command),
        ];
        if let Some(s) = self.surface {
            out.push(format!("surface={}", serde_json::to_value(s).unwrap().as_str().unwrap()));
        }
        for (k, v) in &self.parameters {
            out.push(format!("param.{k}={v}"));
        }
        if let Some(p) = self.pass {
            out.push(format!("pass={p}"));
        }
        out
    }

    fn from_comment_lines<'a>(lines: impl Iterator<Item = &'a str>) -> CliResult<Self> {
        let bad = |m: &str| CliError::Usage(format!("malformed CSV header: {m}"));
        let mut meta = Meta::new("");
        for line in lines {
            let (k, v) = line.split_once('=').ok_or_else(|| bad(line))?;
            match k {
                "schema_version" => meta.schema_version = v.parse().map_err(|_| bad(line))?,
                "convention" => meta.convention = v.into(),
                "convention_version" => meta.convention_version = v.parse().map_err(|_| bad(line))?,
                "command" => meta.command = v.into(),
                "surface" => meta.surface = Some(serde_json::from_value(v.into()).map_err(|_| bad(line))?),
                "pass" => meta.pass = Some(v.parse().map_err(|_| bad(line))?),
                _ => {
                    let key = k.strip_prefix("param.").ok_or_else(|| bad(line))?;
                    meta.parameters.insert(key.into(), v.into());
                }
            }
        }
        Ok(meta)
    }
}

#[derive(Deserialize)]
struct Document<T> {
    #[serde(flatten)]
    meta: Meta,
    rows: Vec<T>,
}

/// A row of an invariant table in CSV, where the class is joined with `;`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatInvariantRow {
    pub g: i32,
    pub class: String,
    pub n: u32,
    pub value: String,
    pub connected: bool,
}

impl From<&InvariantRow> for FlatInvariantRow {
    fn from(r: &InvariantRow) -> Self {
        let class: Vec<String> = r.class.iter().map(|k| k.to_string()).collect();
        let row = serde_json::to_value(r).expect("rows serialize");
        FlatInvariantRow {
            g: r.g,
            class: class.join(";"),
            n: r.n,
            value: row["value"].as_str().unwrap_or_default().to_string(),
            connected: r.connected,
        }
    }
}

impl TryFrom<FlatInvariantRow> for InvariantRow {
    type Error = CliError;
    fn try_from(r: FlatInvariantRow) -> CliResult<Self> {
        let class = if r.class.is_empty() {
            Vec::new()
        } else {
            r.class
                .split(';')
                .map(|k| k.parse().map_err(|_| CliError::Usage(format!("bad class '{}'", r.class))))
                .collect::<CliResult<_>>()?
        };
        Ok(InvariantRow { g: r.g, class, n: r.n, value: parse_rational(&r.value)?, connected: r.connected })
    }
}

#[derive(Serialize)]
struct DocumentRef<'a, T> {
    #[serde(flatten)]
    meta: &'a Meta,
    rows: &'a [T],
}

pub fn to_json<T: Serialize>(meta: &Meta, rows: &[T]) -> String {
    let doc = DocumentRef { meta, rows };
    let mut s = serde_json::to_string_pretty(&doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn to_csv<T: Serialize>(meta: &Meta, rows: &[T]) -> CliResult<String> {
    let mut out = String::new();
    for line in meta.comment_lines() {
        out.push_str(&format!("# {line}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
    Ok(out)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> CliResult<(Meta, Vec<T>)> {
    let doc: Document<T> = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("json: {e}")))?;
    Ok((doc.meta, doc.rows))
}

pub fn from_csv<T: DeserializeOwned>(text: &str) -> CliResult<(Meta, Vec<T>)> {
    let meta = Meta::from_comment_lines(text.lines().filter_map(|l| l.strip_prefix("# ")))?;
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let rows = r
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    Ok((meta, rows))
}

/// Serializes an invariant table; JSON keeps the class as an array.
pub fn emit_table(meta: &Meta, rows: &[InvariantRow], format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(to_json(meta, rows)),
        Format::Csv => to_csv(meta, &rows.iter().map(FlatInvariantRow::from).collect::<Vec<_>>()),
    }
}

pub fn emit<T: Serialize>(meta: &Meta, rows: &[T], format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(to_json(meta, rows)),
        Format::Csv => to_csv(meta, rows),
    }
}

/// Parses either format back into an invariant table.
pub fn parse_table(text: &str) -> CliResult<(Meta, Vec<InvariantRow>)> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        let (meta, flat) = from_csv::<FlatInvariantRow>(text)?;
        Ok((meta, flat.into_iter().map(InvariantRow::try_from).collect::<CliResult<_>>()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use severi_core::exactalg::rat;

    fn table() -> Vec<InvariantRow> {
        vec![
            InvariantRow { g: -1, class: vec![1, 1], n: 1, value: rat(2, 1), connected: false },
            InvariantRow { g: 0, class: vec![2], n: 2, value: rat(-3, 4), connected: true },
        ]
    }

    #[test]
    fn csv_and_json_agree() {
        let meta = Meta::new("p1xp1").surface(Surface::P1xP1).param("d1", 1);
        let j = parse_table(&emit_table(&meta, &table(), Format::Json).unwrap()).unwrap();
        let c = parse_table(&emit_table(&meta, &table(), Format::Csv).unwrap()).unwrap();
        assert_eq!(j, c);
        assert_eq!(j.1, table());
        assert_eq!(j.0, meta);
    }

    #[test]
    fn json_values_are_strings() {
        let s = emit_table(&Meta::new("x"), &table(), Format::Json).unwrap();
        assert!(s.contains("\"value\": \"-3/4\""), "{s}");
        assert!(s.contains("\"convention\": \"t^n/n!\""));
    }
}
