use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{FeatureVector, TargetKind, TargetVector};

/// Declares how each CSV column is interpreted. Columns not listed are
/// numeric features.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CsvSchema {
    pub targets: Vec<String>,
    pub categorical: Vec<String>,
    pub ignore: Vec<String>,
    pub task: Option<TargetKind>,
}

impl CsvSchema {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnRole {
    Numeric,
    Categorical,
    Target,
    Ignored,
}

/// One input column and the encoded coordinates it occupies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnMeta {
    pub name: String,
    pub role: ColumnRole,
    /// First encoded coordinate in the feature (or target) vector.
    pub offset: usize,
    /// Categories in first-appearance order; empty for numeric columns.
    pub categories: Vec<String>,
}

impl ColumnMeta {
    pub fn width(&self) -> usize {
        match self.role {
            ColumnRole::Numeric => 1,
            ColumnRole::Categorical => self.categories.len(),
            ColumnRole::Target if self.categories.is_empty() => 1,
            ColumnRole::Target if self.categories.len() == 2 => 1,
            ColumnRole::Target => self.categories.len(),
            ColumnRole::Ignored => 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub features: Vec<FeatureVector<f64>>,
    pub targets: Vec<TargetVector<f64>>,
    pub columns: Vec<ColumnMeta>,
    pub kind: TargetKind,
}

impl Dataset {
    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, |x| x.dim())
    }

    pub fn n_targets(&self) -> usize {
        self.targets.first().map_or(0, |y| y.dim())
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<&ColumnMeta> {
        self.columns.iter().find(|c| c.name == name)
    }

    /// Class names in encoding order, for classification datasets.
    pub fn class_labels(&self) -> Option<&[String]> {
        match self.kind {
            TargetKind::Classification => self
                .columns
                .iter()
                .find(|c| c.role == ColumnRole::Target)
                .map(|c| c.categories.as_slice()),
            TargetKind::Regression => None,
        }
    }

    /// Original value of categorical column `name` for an encoded row.
    pub fn decode_categorical<'a>(&'a self, name: &str, x: &[f64]) -> Option<&'a str> {
        let col = self.column(name).filter(|c| c.role == ColumnRole::Categorical)?;
        let block = &x[col.offset..col.offset + col.width()];
        block.iter().position(|&v| v == 1.0).map(|k| col.categories[k].as_str())
    }

    /// Class name for an encoded (or predicted) target.
    pub fn decode_class<'a>(&'a self, y: &[f64]) -> Option<&'a str> {
        let labels = self.class_labels()?;
        let k = if y.len() == 1 {
            usize::from(y[0] >= 0.5)
        } else {
            argmax(y)
        };
        labels.get(k).map(String::as_str)
    }
}

pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = i;
        }
    }
    best
}

pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    read_csv(file, schema)
}

fn csv_error(row: usize, column: &str, message: impl Into<String>) -> Error {
    Error::Csv {
        row,
        column: column.to_string(),
        message: message.into(),
    }
}

/// Parses CSV text. Rows are numbered from 1 for the first data row.
pub(crate) fn read_csv<R: Read>(reader: R, schema: &CsvSchema) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_error(0, "", e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();

    for name in schema.targets.iter().chain(&schema.categorical).chain(&schema.ignore) {
        if !header.contains(name) {
            return Err(Error::config(format!("schema names unknown column {name:?}")));
        }
    }
    if schema.targets.is_empty() {
        return Err(Error::config("schema declares no target column"));
    }
    let kind = schema.task.unwrap_or(TargetKind::Regression);
    if kind == TargetKind::Classification && schema.targets.len() != 1 {
        return Err(Error::config("classification needs exactly one target column"));
    }

    let roles: Vec<ColumnRole> = header
        .iter()
        .map(|h| {
            if schema.targets.contains(h) {
                ColumnRole::Target
            } else if schema.ignore.contains(h) {
                ColumnRole::Ignored
            } else if schema.categorical.contains(h) {
                ColumnRole::Categorical
            } else {
                ColumnRole::Numeric
            }
        })
        .collect();

    let mut cells: Vec<Vec<String>> = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| csv_error(r + 1, "", e.to_string()))?;
        if record.len() != header.len() {
            return Err(csv_error(
                r + 1,
                "",
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
        }
        cells.push(record.iter().map(str::to_string).collect());
    }
    if cells.is_empty() {
        return Err(Error::EmptyPool);
    }

    let mut columns: Vec<ColumnMeta> = Vec::with_capacity(header.len());
    let mut codes: Vec<HashMap<String, usize>> = vec![HashMap::new(); header.len()];
    for (c, name) in header.iter().enumerate() {
        let categorical = roles[c] == ColumnRole::Categorical
            || (roles[c] == ColumnRole::Target && kind == TargetKind::Classification);
        let mut categories = Vec::new();
        if categorical {
            for row in &cells {
                let v = &row[c];
                if !codes[c].contains_key(v) {
                    codes[c].insert(v.clone(), categories.len());
                    categories.push(v.clone());
                }
            }
        }
        columns.push(ColumnMeta {
            name: name.clone(),
            role: roles[c].clone(),
            offset: 0,
            categories,
        });
    }
    if kind == TargetKind::Classification {
        let target = columns.iter().find(|c| c.role == ColumnRole::Target).expect("target present");
        if target.categories.len() < 2 {
            return Err(Error::config("classification target has fewer than two classes"));
        }
    }

    let (mut fo, mut to) = (0, 0);
    for col in &mut columns {
        match col.role {
            ColumnRole::Target => {
                col.offset = to;
                to += col.width();
            }
            ColumnRole::Ignored => {}
            _ => {
                col.offset = fo;
                fo += col.width();
            }
        }
    }
    if fo == 0 {
        return Err(Error::config("dataset has no feature columns"));
    }

    let mut features = Vec::with_capacity(cells.len());
    let mut targets = Vec::with_capacity(cells.len());
    for (r, row) in cells.iter().enumerate() {
        let mut x = vec![0.0; fo];
        let mut y = vec![0.0; to];
        for (c, col) in columns.iter().enumerate() {
            let cell = row[c].as_str();
            let dest = match col.role {
                ColumnRole::Ignored => continue,
                ColumnRole::Target => &mut y,
                _ => &mut x,
            };
            if col.categories.is_empty() {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| csv_error(r + 1, &col.name, format!("cannot parse {cell:?} as a number")))?;
                if !v.is_finite() {
                    return Err(csv_error(r + 1, &col.name, "non-finite value"));
                }
                dest[col.offset] = v;
            } else {
                let k = codes[c][cell];
                if col.role == ColumnRole::Target && col.categories.len() == 2 {
                    dest[col.offset] = k as f64;
                } else {
                    dest[col.offset + k] = 1.0;
                }
            }
        }
        features.push(FeatureVector::from_finite(x));
        targets.push(TargetVector::from_finite(y));
    }

    Ok(Dataset {
        features,
        targets,
        columns,
        kind,
    })
}
