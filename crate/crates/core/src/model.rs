//! Self-contained model files: schema, argument table, relation matrix and
//! training metadata, as JSON.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dataset::{RawTable, Schema};
use crate::framework::{ArgId, Argument, ArgumentUniverse, RelationMatrix, Variant};
use crate::induction::{search_with_progress, Progress, SearchConfig, SearchOutcome};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArgumentKind {
    Target,
    Top,
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgumentRecord {
    pub id: usize,
    pub name: String,
    pub kind: ArgumentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attribute: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Training {
    pub seed: u64,
    pub max_iterations: usize,
    pub iterations: usize,
    pub segments: usize,
    pub train_size: usize,
    pub train_accuracy: f64,
    pub edge_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub variant: String,
    pub label_column: String,
    pub positive_class: String,
    pub target_name: String,
    pub schema: Schema,
    pub arguments: Vec<ArgumentRecord>,
    /// One string per row, entries separated by spaces: −1 forbidden,
    /// 0 no edge, 1 attack, 2 support.
    pub matrix: Vec<String>,
    pub training: Training,
}

fn records(universe: &ArgumentUniverse) -> Vec<ArgumentRecord> {
    let schema = universe.schema();
    universe
        .ids()
        .map(|id| {
            let (kind, atom) = match universe.argument(id) {
                Argument::Target => (ArgumentKind::Target, None),
                Argument::Top => (ArgumentKind::Top, None),
                Argument::Positive { attribute, value } => {
                    (ArgumentKind::Positive, Some(schema.atom(attribute as usize, value)))
                }
                Argument::Negative { attribute, value } => {
                    (ArgumentKind::Negative, Some(schema.atom(attribute as usize, value)))
                }
            };
            let (attribute, value) = match atom {
                Some(a) => (Some(a.attribute), Some(a.value)),
                None => (None, None),
            };
            ArgumentRecord {
                id: id.0,
                name: universe.name(id),
                kind,
                attribute,
                value,
            }
        })
        .collect()
}

impl ModelFile {
    pub fn new(
        matrix: &RelationMatrix,
        label_column: impl Into<String>,
        positive_class: impl Into<String>,
        training: Training,
    ) -> ModelFile {
        let universe = matrix.universe();
        ModelFile {
            format_version: FORMAT_VERSION,
            variant: universe.variant().name().to_string(),
            label_column: label_column.into(),
            positive_class: positive_class.into(),
            target_name: universe.target_name().to_string(),
            schema: universe.schema().as_ref().clone(),
            arguments: records(universe),
            matrix: matrix
                .to_grid()
                .iter()
                .map(|row| row.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
                .collect(),
            training,
        }
    }

    pub fn variant(&self) -> Result<Variant> {
        self.variant.parse()
    }

    /// Rebuilds the relation matrix, checking the argument table and every
    /// matrix cell against the schema.
    pub fn relation_matrix(&self) -> Result<RelationMatrix> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Model(format!(
                "unsupported format version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let universe = Arc::new(ArgumentUniverse::new(
            Arc::new(self.schema.clone()),
            self.variant()?,
            self.target_name.clone(),
        ));
        if records(&universe) != self.arguments {
            return Err(Error::Model("argument table does not match the schema".into()));
        }
        let grid = self
            .matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.split_whitespace()
                    .map(|c| {
                        c.parse::<i8>()
                            .map_err(|_| Error::Model(format!("invalid matrix entry `{c}` in row {i}")))
                    })
                    .collect::<Result<Vec<i8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        RelationMatrix::from_grid(universe, &grid)
    }

    pub fn schema(&self) -> Arc<Schema> {
        Arc::new(self.schema.clone())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<ModelFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<ModelFile> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ModelFile::from_json(&text)
    }

    /// Id of the argument named `name`, as printed in the argument table.
    pub fn find(&self, name: &str) -> Option<ArgId> {
        self.arguments.iter().find(|a| a.name == name).map(|a| ArgId(a.id))
    }
}

/// Everything needed to turn a labelled table into a model.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnConfig {
    pub label_column: String,
    pub positive_class: String,
    pub segments: usize,
    /// Numeric columns to treat as nominal.
    pub nominal: Vec<String>,
    pub search: SearchConfig,
}

/// Fits the schema on `table`, runs the search and packages the result.
pub fn learn(
    table: &RawTable,
    config: &LearnConfig,
    progress: impl FnMut(&Progress),
) -> Result<(ModelFile, SearchOutcome)> {
    let schema = Schema::fit_with(table, config.segments, &config.nominal)?;
    let train = table.atomize(&schema)?;
    let outcome = search_with_progress(&train, &config.search, progress)?;
    let file = ModelFile::new(
        &outcome.matrix,
        config.label_column.clone(),
        config.positive_class.clone(),
        Training {
            seed: config.search.seed,
            max_iterations: config.search.max_iterations,
            iterations: outcome.iterations,
            segments: config.segments,
            train_size: train.len(),
            train_accuracy: outcome.train_accuracy,
            edge_count: outcome.matrix.edge_count(),
        },
    );
    Ok((file, outcome))
}
