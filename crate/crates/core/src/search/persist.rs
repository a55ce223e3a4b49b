//! CSV and JSON persistence of search results.
//!
//! CSV columns: `index`, `family`, `log_<slot>` for each slot, `bent`,
//! `regular`, `crit_<id>` for each criterion, `agreement`, `side_<name>` for
//! each side value. The summary goes to a sibling `<path>.summary` JSON file.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{CriterionVerdict, SearchRecord, SearchSummary, SideValue, SlotValue};
use crate::cyclo::CycInt;
use crate::dillon::{Criterion, Family, Verdict};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<OutputFormat, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonDocument {
    records: Vec<SearchRecord>,
    summary: SearchSummary,
}

pub fn summary_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".summary");
    PathBuf::from(s)
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

fn fmt_err(path: &Path, msg: impl std::fmt::Display) -> Error {
    Error::Format {
        path: path.to_owned(),
        msg: msg.to_string(),
    }
}

pub fn persist(
    records: &[SearchRecord],
    summary: &SearchSummary,
    format: OutputFormat,
    path: &Path,
) -> Result<()> {
    match format {
        OutputFormat::Json => {
            let file = File::create(path).map_err(io_err(path))?;
            let mut w = BufWriter::new(file);
            let doc = JsonDocument {
                records: records.to_vec(),
                summary: summary.clone(),
            };
            serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| fmt_err(path, e))?;
            w.write_all(b"\n").map_err(io_err(path))?;
            w.flush().map_err(io_err(path))
        }
        OutputFormat::Csv => {
            write_csv(records, path)?;
            let sp = summary_path(path);
            let text = serde_json::to_string_pretty(summary).map_err(|e| fmt_err(&sp, e))?;
            std::fs::write(&sp, text + "\n").map_err(io_err(&sp))
        }
    }
}

fn write_csv(records: &[SearchRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| fmt_err(path, e))?;
    let first = records.first();
    let mut header = vec!["index".to_owned(), "family".to_owned()];
    if let Some(r) = first {
        header.extend(r.params.iter().map(|s| format!("log_{}", s.name)));
    }
    header.extend(["bent".to_owned(), "regular".to_owned()]);
    if let Some(r) = first {
        header.extend(r.verdicts.iter().map(|v| format!("crit_{}", v.criterion.id())));
    }
    header.push("agreement".to_owned());
    if let Some(r) = first {
        header.extend(r.side.iter().map(|s| format!("side_{}", s.name)));
    }
    w.write_record(&header).map_err(|e| fmt_err(path, e))?;
    for r in records {
        let mut row = vec![r.index.to_string(), r.family.name().to_owned()];
        row.extend(
            r.params
                .iter()
                .map(|s| s.log.map_or_else(|| "zero".to_owned(), |l| l.to_string())),
        );
        row.extend([r.bent.to_string(), r.regular.to_string()]);
        row.extend(r.verdicts.iter().map(|v| v.verdict.label().to_owned()));
        row.push(r.agreement.to_string());
        row.extend(r.side.iter().map(|s| s.value.to_string()));
        if row.len() != header.len() {
            return Err(Error::Invariant("records with differing column sets".into()));
        }
        w.write_record(&row).map_err(|e| fmt_err(path, e))?;
    }
    w.flush().map_err(io_err(path))
}

/// Reads records (and the summary, when present) back from disk.
pub fn load(path: &Path, format: OutputFormat) -> Result<(Vec<SearchRecord>, Option<SearchSummary>)> {
    match format {
        OutputFormat::Json => {
            let file = File::open(path).map_err(io_err(path))?;
            let doc: JsonDocument =
                serde_json::from_reader(BufReader::new(file)).map_err(|e| fmt_err(path, e))?;
            Ok((doc.records, Some(doc.summary)))
        }
        OutputFormat::Csv => {
            let records = read_csv(path)?;
            let sp = summary_path(path);
            let summary = match std::fs::read_to_string(&sp) {
                Ok(text) => Some(serde_json::from_str(&text).map_err(|e| fmt_err(&sp, e))?),
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
                Err(e) => return Err(io_err(&sp)(e)),
            };
            Ok((records, summary))
        }
    }
}

fn parse_bool(path: &Path, s: &str) -> Result<bool> {
    s.parse().map_err(|_| fmt_err(path, format!("bad boolean '{s}'")))
}

/// Parses the `[c0,c1,...]` form written by `CycInt`'s `Display`.
fn parse_cyc(path: &Path, s: &str) -> Result<CycInt> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| fmt_err(path, format!("bad cyclotomic value '{s}'")))?;
    let coeffs = inner
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| fmt_err(path, e))?;
    CycInt::from_coeffs(coeffs.len() as u32 + 1, coeffs).map_err(|e| fmt_err(path, e))
}

fn read_csv(path: &Path) -> Result<Vec<SearchRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| fmt_err(path, e))?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| fmt_err(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| fmt_err(path, e))?;
        let mut rec = SearchRecord {
            index: 0,
            family: Family::B1,
            params: Vec::new(),
            bent: false,
            regular: false,
            verdicts: Vec::new(),
            agreement: false,
            side: Vec::new(),
        };
        for (col, cell) in header.iter().zip(row.iter()) {
            if let Some(name) = col.strip_prefix("log_") {
                let log = match cell {
                    "zero" => None,
                    v => Some(v.parse().map_err(|e| fmt_err(path, e))?),
                };
                rec.params.push(SlotValue {
                    name: name.to_owned(),
                    log,
                });
            } else if let Some(id) = col.strip_prefix("crit_") {
                let criterion = Criterion::from_id(id)
                    .ok_or_else(|| fmt_err(path, format!("unknown criterion '{id}'")))?;
                let verdict = Verdict::from_label(cell)
                    .ok_or_else(|| fmt_err(path, format!("bad verdict '{cell}'")))?;
                rec.verdicts.push(CriterionVerdict { criterion, verdict });
            } else if let Some(name) = col.strip_prefix("side_") {
                rec.side.push(SideValue {
                    name: name.to_owned(),
                    value: parse_cyc(path, cell)?,
                });
            } else {
                match col.as_str() {
                    "index" => rec.index = cell.parse().map_err(|e| fmt_err(path, e))?,
                    "family" => rec.family = cell.parse().map_err(|e| fmt_err(path, e))?,
                    "bent" => rec.bent = parse_bool(path, cell)?,
                    "regular" => rec.regular = parse_bool(path, cell)?,
                    "agreement" => rec.agreement = parse_bool(path, cell)?,
                    other => return Err(fmt_err(path, format!("unknown column '{other}'"))),
                }
            }
        }
        out.push(rec);
    }
    Ok(out)
}
