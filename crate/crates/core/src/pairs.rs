//! Real-data cause-effect pairs: whitespace-delimited numeric text files.

use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

use crate::confidence::ConfidenceSet;
use crate::dist::RngSeed;
use crate::error::{Error, Result};
use crate::method::{run_method, Method, MethodConfig};
use crate::model::Dataset;

pub const MIN_PAIR_ROWS: usize = 10;

/// Ground-truth orientation of a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `x1` causes `x2`.
    Forward,
    /// `x2` causes `x1`.
    Backward,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub id: String,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub direction: Direction,
}

impl PairRecord {
    pub fn new(id: impl Into<String>, x1: Vec<f64>, x2: Vec<f64>, direction: Direction) -> Result<Self> {
        if x1.len() != x2.len() {
            return Err(Error::LengthMismatch(format!("{} vs {} values", x1.len(), x2.len())));
        }
        if x1.len() < MIN_PAIR_ROWS {
            return Err(Error::LengthMismatch(format!("{} rows, need {MIN_PAIR_ROWS}", x1.len())));
        }
        Ok(PairRecord { id: id.into(), x1, x2, direction })
    }

    pub fn swapped(self) -> Self {
        let direction = match self.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
            Direction::Unknown => Direction::Unknown,
        };
        PairRecord { id: self.id, x1: self.x2, x2: self.x1, direction }
    }

    pub fn dataset(&self) -> Result<Dataset> {
        Dataset::from_columns(&[&self.x1, &self.x2])
    }
}

/// Parses a numeric table; fields may be separated by whitespace or commas.
/// Blank lines and lines starting with `#` are skipped. Every row must have
/// the same number of fields.
pub fn parse_table(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let row = t
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .map(|f| match f.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Parse { line: line_no, msg: format!("not a finite number: {f:?}") }),
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("{} fields, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse { line: 0, msg: "no data rows".into() });
    }
    Ok(rows)
}

pub fn load_table(path: &Path) -> Result<Vec<Vec<f64>>> {
    parse_table(&fs::read_to_string(path)?)
}

/// Loads a pair from columns `cols` (zero based) of a table file.
pub fn load_pair_columns(path: &Path, cols: (usize, usize), swap: bool) -> Result<PairRecord> {
    let rows = load_table(path)?;
    let width = rows[0].len();
    if cols.0 >= width || cols.1 >= width || cols.0 == cols.1 {
        return Err(Error::Parse { line: 1, msg: format!("columns {cols:?} not available in {width} fields") });
    }
    let x1 = rows.iter().map(|r| r[cols.0]).collect();
    let x2 = rows.iter().map(|r| r[cols.1]).collect();
    let id = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let rec = PairRecord::new(id, x1, x2, Direction::Unknown)?;
    Ok(if swap { rec.swapped() } else { rec })
}

/// Loads the first two columns of `path`.
pub fn load_pair_file(path: &Path, swap: bool) -> Result<PairRecord> {
    load_pair_columns(path, (0, 1), swap)
}

/// Reads orientation from a `pairmeta.txt` line
/// `id cause_first cause_last effect_first effect_last weight` (1-based
/// column ranges). Only single-column pairs are oriented.
pub fn parse_pairmeta(text: &str, id: &str) -> Option<Direction> {
    let numeric_id = id.trim_start_matches("pair");
    text.lines().find_map(|line| {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() < 5 || f[0] != numeric_id {
            return None;
        }
        let v: Vec<usize> = f[1..5].iter().filter_map(|s| s.parse().ok()).collect();
        Some(match v.as_slice() {
            [1, 1, 2, 2] => Direction::Forward,
            [2, 2, 1, 1] => Direction::Backward,
            _ => Direction::Unknown,
        })
    })
}

pub fn pair_path(dir: &Path, id: &str) -> PathBuf {
    dir.join(format!("{id}.txt"))
}

/// Loads `dir/<id>.txt`, orienting it from `dir/pairmeta.txt` when present.
pub fn load_pair_by_id(dir: &Path, id: &str, swap: bool) -> Result<PairRecord> {
    let mut rec = load_pair_file(&pair_path(dir, id), false)?;
    rec.id = id.to_string();
    if let Ok(meta) = fs::read_to_string(dir.join("pairmeta.txt")) {
        rec.direction = parse_pairmeta(&meta, id).unwrap_or(Direction::Unknown);
    }
    Ok(if swap { rec.swapped() } else { rec })
}

/// Downloads `<base_url>/<id>.txt` into `dir` unless it is already there.
pub fn fetch_pair(base_url: &str, id: &str, dir: &Path) -> Result<PathBuf> {
    let path = pair_path(dir, id);
    if path.exists() {
        return Ok(path);
    }
    let url = format!("{}/{id}.txt", base_url.trim_end_matches('/'));
    let body = ureq::get(&url)
        .call()
        .and_then(|mut r| r.body_mut().read_to_string())
        .map_err(|e| Error::Fetch(format!("{url}: {e}")))?;
    fs::create_dir_all(dir)?;
    fs::write(&path, body)?;
    Ok(path)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: Method,
    pub set: Option<ConfidenceSet>,
    pub error: Option<String>,
}

impl MethodReport {
    pub fn empty(&self) -> bool {
        self.set.as_ref().is_some_and(|s| s.is_empty())
    }

    pub fn torn(&self) -> bool {
        self.set.as_ref().is_some_and(|s| s.is_torn())
    }
}

/// Results for one preprocessing of a pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariantReport {
    /// `"raw"` (centered only) or `"standardized"` (centered, unit variance).
    pub variant: String,
    pub methods: Vec<MethodReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub id: String,
    pub n: usize,
    pub direction: Direction,
    pub variants: Vec<VariantReport>,
}

pub fn analyze_pair(record: &PairRecord, methods: &[Method], cfg: &MethodConfig, seed: RngSeed) -> Result<PairReport> {
    let data = record.dataset()?.centered();
    let variants = [("raw", data.clone()), ("standardized", data.standardized())]
        .into_iter()
        .map(|(name, d)| VariantReport {
            variant: name.into(),
            methods: methods
                .iter()
                .map(|&m| match run_method(m, &d, cfg, seed) {
                    Ok(set) => MethodReport { method: m, set: Some(set), error: None },
                    Err(e) => MethodReport { method: m, set: None, error: Some(e.to_string()) },
                })
                .collect(),
        })
        .collect();
    Ok(PairReport { id: record.id.clone(), n: record.x1.len(), direction: record.direction, variants })
}
