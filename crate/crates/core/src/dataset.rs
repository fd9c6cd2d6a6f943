//! Tabular input: loading delimited files, interval binning of numeric
//! columns, and conversion of rows into fact sets over a fixed atom universe.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How a delimited file is read.
#[derive(Debug, Clone)]
pub struct TableOptions {
    pub delimiter: u8,
    /// Columns dropped on load (identifiers and the like).
    pub ignore_columns: Vec<String>,
    /// Cells treated as missing values.
    pub missing_markers: Vec<String>,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            delimiter: b',',
            ignore_columns: Vec::new(),
            missing_markers: vec!["?".into(), String::new(), "NA".into()],
        }
    }
}

/// Rows of a table with the label column split off. Cells are trimmed;
/// missing cells are stored as `None`.
#[derive(Debug, Clone)]
pub struct RawTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<String>>>,
    /// One-vs-rest labels, absent when the file carried no label column.
    pub labels: Option<Vec<bool>>,
}

impl RawTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn subset(&self, indices: &[usize]) -> RawTable {
        RawTable {
            columns: self.columns.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i]).collect()),
        }
    }

    /// Converts every row into an [`Instance`]. Unlabelled tables get
    /// `false` labels.
    pub fn atomize(&self, schema: &Arc<Schema>) -> Result<Dataset> {
        let mapping = schema.column_mapping(&self.columns)?;
        let instances = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let facts = schema.atomize_mapped(&mapping, &self.columns, row, i)?;
                let label = self.labels.as_ref().is_some_and(|l| l[i]);
                Ok(Instance { facts, label })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset {
            schema: Arc::clone(schema),
            instances,
        })
    }
}

fn read_records(path: &Path, opts: &TableOptions) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(opts.delimiter)
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let header: Vec<String> = reader
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

fn build_table(
    header: Vec<String>,
    records: Vec<Vec<String>>,
    label_column: Option<usize>,
    positive_class: &str,
    opts: &TableOptions,
) -> RawTable {
    let keep: Vec<usize> = (0..header.len())
        .filter(|&i| Some(i) != label_column && !opts.ignore_columns.contains(&header[i]))
        .collect();
    let columns = keep.iter().map(|&i| header[i].clone()).collect();
    let mut rows = Vec::with_capacity(records.len());
    let mut labels = Vec::with_capacity(records.len());
    for record in &records {
        rows.push(
            keep.iter()
                .map(|&i| {
                    let cell = &record[i];
                    (!opts.missing_markers.iter().any(|m| m == cell)).then(|| cell.clone())
                })
                .collect(),
        );
        if let Some(l) = label_column {
            labels.push(record[l] == positive_class);
        }
    }
    RawTable {
        columns,
        rows,
        labels: label_column.map(|_| labels),
    }
}

/// Reads a labelled table. The label of a row is `cell == positive_class`.
pub fn load_table(
    path: impl AsRef<Path>,
    label_column: &str,
    positive_class: &str,
    opts: &TableOptions,
) -> Result<RawTable> {
    let path = path.as_ref();
    let (header, records) = read_records(path, opts)?;
    let label = header.iter().position(|c| c == label_column).ok_or_else(|| {
        Error::Config(format!(
            "label column `{label_column}` not found in {}",
            path.display()
        ))
    })?;
    if !records.is_empty() && !records.iter().any(|r| r[label] == positive_class) {
        return Err(Error::Config(format!(
            "positive class `{positive_class}` never occurs in column `{label_column}`"
        )));
    }
    Ok(build_table(header, records, Some(label), positive_class, opts))
}

/// Reads a table for prediction: the label column is optional and the
/// positive class need not occur.
pub fn load_for_prediction(
    path: impl AsRef<Path>,
    label_column: &str,
    positive_class: &str,
    opts: &TableOptions,
) -> Result<RawTable> {
    let path = path.as_ref();
    let (header, records) = read_records(path, opts)?;
    let label = header.iter().position(|c| c == label_column);
    Ok(build_table(header, records, label, positive_class, opts))
}

/// Equal-width binning of a numeric column.
///
/// The first interval is closed, the others are open on the left: a value
/// lying exactly on an interior boundary belongs to the lower interval.
/// Labels render each lower bound just above the previous upper bound, at
/// the coarsest decimal precision that keeps the labels distinct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segmentation {
    pub min: f64,
    pub max: f64,
    /// Upper boundary of every interval, the last one equals `max`.
    pub bounds: Vec<f64>,
    pub labels: Vec<String>,
}

fn snap(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

fn render_number(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

impl Segmentation {
    pub fn fit(values: &[f64], segments: usize) -> Result<Segmentation> {
        if segments == 0 {
            return Err(Error::Config("segments must be at least 1".into()));
        }
        let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        if finite.is_empty() {
            return Err(Error::Config("column has no finite value to segment".into()));
        }
        let min = finite.iter().copied().fold(f64::INFINITY, f64::min);
        let max = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if min == max {
            let v = render_number(min, 10);
            return Ok(Segmentation {
                min,
                max,
                bounds: vec![max],
                labels: vec![format!("{v}-{v}")],
            });
        }
        let width = (max - min) / segments as f64;
        let bounds: Vec<f64> = (1..=segments)
            .map(|k| {
                if k == segments {
                    max
                } else {
                    snap(min + (max - min) * k as f64 / segments as f64)
                }
            })
            .collect();
        let mut decimals = 1;
        while decimals < 12 && 10f64.powi(-(decimals as i32)) >= width {
            decimals += 1;
        }
        loop {
            let labels = Self::render(min, &bounds, decimals);
            let distinct: BTreeSet<&String> = labels.iter().collect();
            if distinct.len() == labels.len() || decimals >= 12 {
                return Ok(Segmentation {
                    min,
                    max,
                    bounds,
                    labels,
                });
            }
            decimals += 1;
        }
    }

    fn render(min: f64, bounds: &[f64], decimals: usize) -> Vec<String> {
        let step = 10f64.powi(-(decimals as i32));
        let mut labels = Vec::with_capacity(bounds.len());
        let mut lower = render_number(min, decimals);
        for &b in bounds {
            let upper = render_number(b, decimals);
            labels.push(format!("{lower}-{upper}"));
            let rounded: f64 = upper.parse().unwrap_or(b);
            lower = render_number(rounded + step, decimals);
        }
        labels
    }

    /// Index of the interval holding `x`. Values outside the fitted range
    /// are clamped to the first or last interval.
    pub fn interval(&self, x: f64) -> usize {
        self.bounds
            .iter()
            .position(|&b| x <= b)
            .unwrap_or(self.bounds.len() - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AttributeKind {
    Nominal,
    Continuous(Segmentation),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSchema {
    pub name: String,
    #[serde(flatten)]
    pub kind: AttributeKind,
    /// Atom values: observed categories, or interval labels.
    pub values: Vec<String>,
}

impl AttributeSchema {
    pub fn is_continuous(&self) -> bool {
        matches!(self.kind, AttributeKind::Continuous(_))
    }

    fn value_of(&self, cell: &str, row: usize) -> Result<Option<u32>> {
        match &self.kind {
            AttributeKind::Nominal => {
                Ok(self.values.iter().position(|v| v == cell).map(|i| i as u32))
            }
            AttributeKind::Continuous(seg) => {
                let x: f64 = cell.parse().map_err(|_| Error::Parse {
                    row,
                    column: self.name.clone(),
                    value: cell.to_string(),
                })?;
                Ok(Some(seg.interval(x) as u32))
            }
        }
    }
}

/// The fitted attribute set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    pub attributes: Vec<AttributeSchema>,
}

impl Schema {
    /// Fits the schema on a table: numeric columns become `segments`
    /// equal-width intervals, other columns keep their observed values.
    pub fn fit(table: &RawTable, segments: usize) -> Result<Arc<Schema>> {
        Self::fit_with(table, segments, &[])
    }

    /// Like [`Schema::fit`], treating the `nominal` columns as categorical
    /// even when every cell is numeric.
    pub fn fit_with(table: &RawTable, segments: usize, nominal: &[String]) -> Result<Arc<Schema>> {
        if segments == 0 {
            return Err(Error::Config("segments must be at least 1".into()));
        }
        let mut attributes = Vec::new();
        for (c, name) in table.columns.iter().enumerate() {
            let cells: Vec<&str> = table.rows.iter().filter_map(|r| r[c].as_deref()).collect();
            if cells.is_empty() {
                log::warn!("column `{name}` has no observed value, skipped");
                continue;
            }
            let numbers: Option<Vec<f64>> = cells
                .iter()
                .map(|s| s.parse::<f64>().ok().filter(|v| v.is_finite()))
                .collect();
            match numbers {
                Some(values) if !nominal.contains(name) => {
                    let seg = Segmentation::fit(&values, segments)?;
                    attributes.push(AttributeSchema {
                        name: name.clone(),
                        values: seg.labels.clone(),
                        kind: AttributeKind::Continuous(seg),
                    });
                }
                _ => {
                    let values: BTreeSet<&str> = cells.into_iter().collect();
                    attributes.push(AttributeSchema {
                        name: name.clone(),
                        kind: AttributeKind::Nominal,
                        values: values.into_iter().map(str::to_string).collect(),
                    });
                }
            }
        }
        Ok(Arc::new(Schema { attributes }))
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    /// Σ|Val_i| over all attributes.
    pub fn atom_count(&self) -> usize {
        self.attributes.iter().map(|a| a.values.len()).sum()
    }

    pub fn attribute(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn atom(&self, attribute: usize, value: u32) -> Atom {
        let a = &self.attributes[attribute];
        Atom {
            attribute: a.name.clone(),
            value: a.values[value as usize].clone(),
        }
    }

    fn column_mapping(&self, columns: &[String]) -> Result<Vec<usize>> {
        self.attributes
            .iter()
            .map(|a| {
                columns
                    .iter()
                    .position(|c| *c == a.name)
                    .ok_or_else(|| Error::Schema(format!("column `{}` missing from input", a.name)))
            })
            .collect()
    }

    fn atomize_mapped(
        &self,
        mapping: &[usize],
        columns: &[String],
        row: &[Option<String>],
        row_index: usize,
    ) -> Result<Facts> {
        if row.len() != columns.len() {
            return Err(Error::Schema(format!(
                "row {row_index} has {} cells, expected {}",
                row.len(),
                columns.len()
            )));
        }
        let values = self
            .attributes
            .iter()
            .zip(mapping)
            .map(|(attr, &col)| match &row[col] {
                Some(cell) => attr.value_of(cell, row_index),
                None => Ok(None),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Facts(values))
    }

    /// Maps one row, whose cells follow `columns`, onto the schema.
    /// Continuous cells land in their interval (clamped outside the fitted
    /// range); missing cells and unseen categories yield no atom.
    pub fn atomize(&self, columns: &[String], row: &[Option<String>]) -> Result<Facts> {
        let mapping = self.column_mapping(columns)?;
        self.atomize_mapped(&mapping, columns, row, 0)
    }
}

/// An attribute valuation, rendered `attribute=value`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub attribute: String,
    pub value: String,
}

impl Atom {
    pub fn new(attribute: impl Into<String>, value: impl Into<String>) -> Self {
        Atom {
            attribute: attribute.into(),
            value: value.into(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.attribute, self.value)
    }
}

/// At most one value index per schema attribute; `None` means no fact for
/// that attribute.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Facts(pub Vec<Option<u32>>);

impl Facts {
    pub fn empty(schema: &Schema) -> Facts {
        Facts(vec![None; schema.len()])
    }

    /// Builds facts from atoms; atoms unknown to the schema are ignored.
    pub fn from_atoms<'a>(schema: &Schema, atoms: impl IntoIterator<Item = &'a Atom>) -> Facts {
        let mut facts = Facts::empty(schema);
        for atom in atoms {
            if let Some(a) = schema.attribute(&atom.attribute) {
                if let Some(v) = schema.attributes[a].values.iter().position(|v| *v == atom.value) {
                    facts.0[a] = Some(v as u32);
                }
            }
        }
        facts
    }

    pub fn holds(&self, attribute: usize, value: u32) -> bool {
        self.0[attribute] == Some(value)
    }

    pub fn atoms(&self, schema: &Schema) -> Vec<Atom> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(a, v)| v.map(|v| schema.atom(a, v)))
            .collect()
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|v| v.is_some()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub facts: Facts,
    pub label: bool,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub schema: Arc<Schema>,
    pub instances: Vec<Instance>,
}

impl Dataset {
    pub fn new(schema: Arc<Schema>, instances: Vec<Instance>) -> Self {
        Dataset { schema, instances }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.instances.iter().filter(|i| i.label).count()
    }

    pub fn split(&self, train_ratio: f64, seed: u64) -> Result<(Dataset, Dataset)> {
        let (train, test) = split_indices(self.len(), train_ratio, seed)?;
        let pick = |idx: &[usize]| Dataset {
            schema: Arc::clone(&self.schema),
            instances: idx.iter().map(|&i| self.instances[i].clone()).collect(),
        };
        Ok((pick(&train), pick(&test)))
    }
}

/// Deterministic shuffle-and-cut: the first ⌊n·ratio⌋ shuffled indices go
/// to the training side.
pub fn split_indices(n: usize, train_ratio: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if n == 0 {
        return Err(Error::Config("cannot split an empty dataset".into()));
    }
    if !(train_ratio > 0.0 && train_ratio < 1.0) {
        return Err(Error::Config(format!(
            "train ratio must lie in (0, 1), got {train_ratio}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let cut = (n as f64 * train_ratio).floor() as usize;
    let test = order.split_off(cut);
    Ok((order, test))
}
