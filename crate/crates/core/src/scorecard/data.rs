//! Checked-in criterion matrices, symbolic rows and calibrations.
//!
//! The files are compiled in; setting `IBEKIT_DATA_DIR` reads them from
//! that directory instead, where every file must be present.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

pub const DATA_DIR_ENV: &str = "IBEKIT_DATA_DIR";

pub const FILES: [(&str, &str); 11] = [
    ("table1.csv", include_str!("../../data/scorecard/table1.csv")),
    ("table5.csv", include_str!("../../data/scorecard/table5.csv")),
    ("final.csv", include_str!("../../data/scorecard/final.csv")),
    ("properties.csv", include_str!("../../data/scorecard/properties.csv")),
    ("opcounts.csv", include_str!("../../data/scorecard/opcounts.csv")),
    (
        "opcount_adjust.csv",
        include_str!("../../data/scorecard/opcount_adjust.csv"),
    ),
    ("boyen_ss.cal", include_str!("../../data/scorecard/boyen_ss.cal")),
    ("boyen_mnt.cal", include_str!("../../data/scorecard/boyen_mnt.cal")),
    ("boyen_exprs.csv", include_str!("../../data/scorecard/boyen_exprs.csv")),
    (
        "hibe_compare.csv",
        include_str!("../../data/scorecard/hibe_compare.csv"),
    ),
    ("fs_compare.csv", include_str!("../../data/scorecard/fs_compare.csv")),
];

#[derive(Clone, Debug)]
pub struct DataSet {
    files: BTreeMap<String, String>,
}

impl DataSet {
    pub fn embedded() -> DataSet {
        DataSet {
            files: FILES.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect(),
        }
    }

    pub fn from_dir(dir: &Path) -> Result<DataSet> {
        let mut files = BTreeMap::new();
        for (name, _) in FILES {
            let path = dir.join(name);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Io(format!("missing data file {}: {e}", path.display())))?;
            files.insert(name.to_string(), text);
        }
        Ok(DataSet { files })
    }

    /// The directory named by `IBEKIT_DATA_DIR`, or the compiled-in copy.
    pub fn load() -> Result<DataSet> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) if !dir.is_empty() => DataSet::from_dir(Path::new(&dir)),
            _ => Ok(DataSet::embedded()),
        }
    }

    /// Replace one file's text, mostly for tests.
    pub fn with_file(mut self, name: &str, text: &str) -> DataSet {
        self.files.insert(name.to_string(), text.to_string());
        self
    }

    pub fn text(&self, name: &str) -> Result<&str> {
        self.files
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| Error::Io(format!("missing data file {name}")))
    }
}

/// Header, then `(line number, cells)` per record.
pub type Records = (Vec<String>, Vec<(usize, Vec<String>)>);

/// Records of a `#`-commented CSV with a header row, each paired with its
/// 1-based line number.
pub fn csv_records(text: &str) -> Result<Records> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| parse_err(&e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_err(&e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        rows.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok((header, rows))
}

fn parse_err(e: &csv::Error) -> Error {
    Error::Parse {
        line: e.position().map_or(0, |p| p.line() as usize),
        msg: e.to_string(),
    }
}

/// `key = value` lines with `#` comments.
pub fn key_values(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            msg: "expected `key = value`".into(),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(Error::Parse {
                line: i + 1,
                msg: "empty key or value".into(),
            });
        }
        out.push((i + 1, k.to_string(), v.to_string()));
    }
    Ok(out)
}
