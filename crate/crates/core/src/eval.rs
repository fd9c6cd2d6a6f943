//! Repeated random-split evaluation.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{split_indices, RawTable, Schema};
use crate::induction::{search, SearchConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub runs: usize,
    pub train_ratio: f64,
    /// Run `r` splits with seed `seed + r`.
    pub seed: u64,
    pub segments: usize,
    /// Columns kept nominal even when every value is numeric.
    pub nominal: Vec<String>,
    pub search: SearchConfig,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            runs: 10,
            train_ratio: 0.7,
            seed: 0,
            segments: 6,
            nominal: Vec::new(),
            search: SearchConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub run: usize,
    pub seed: u64,
    pub train_size: usize,
    pub test_size: usize,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub edges: usize,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub variant: String,
    pub runs: usize,
    pub train_ratio: f64,
    pub seed: u64,
    pub segments: usize,
    pub max_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub config: ConfigEcho,
    pub runs: Vec<RunReport>,
    /// Mean test accuracy, as a fraction.
    pub mean: f64,
    /// Sample standard deviation; undefined for a single run.
    pub std: Option<f64>,
}

/// Mean and sample standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, Option<f64>) {
    if values.is_empty() {
        return (f64::NAN, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = (values.len() > 1).then(|| {
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (n - 1.0)).sqrt()
    });
    (mean, std)
}

/// Learns and tests on `config.runs` independent splits. The schema is
/// fitted on each training part only.
pub fn evaluate(table: &RawTable, config: &EvalConfig) -> Result<EvalReport> {
    if config.runs == 0 {
        return Err(Error::Config("runs must be at least 1".into()));
    }
    if table.labels.is_none() {
        return Err(Error::Config("evaluation needs a labelled table".into()));
    }
    let runs = (0..config.runs)
        .into_par_iter()
        .map(|r| run_once(table, config, r))
        .collect::<Result<Vec<_>>>()?;
    let accuracies: Vec<f64> = runs.iter().map(|r| r.test_accuracy).collect();
    let (mean, std) = mean_std(&accuracies);
    Ok(EvalReport {
        config: ConfigEcho {
            variant: config.search.variant.name().to_string(),
            runs: config.runs,
            train_ratio: config.train_ratio,
            seed: config.seed,
            segments: config.segments,
            max_iterations: config.search.max_iterations,
        },
        runs,
        mean,
        std,
    })
}

fn run_once(table: &RawTable, config: &EvalConfig, run: usize) -> Result<RunReport> {
    let seed = config.seed.wrapping_add(run as u64);
    let (train_rows, test_rows) = split_indices(table.len(), config.train_ratio, seed)?;
    let train_table = table.subset(&train_rows);
    let schema = Schema::fit_with(&train_table, config.segments, &config.nominal)?;
    let train = train_table.atomize(&schema)?;
    let test = table.subset(&test_rows).atomize(&schema)?;
    let search_config = SearchConfig {
        seed,
        ..config.search.clone()
    };
    let outcome = search(&train, &search_config)?;
    Ok(RunReport {
        run,
        seed,
        train_size: train.len(),
        test_size: test.len(),
        train_accuracy: outcome.train_accuracy,
        test_accuracy: outcome.matrix.accuracy(&test),
        edges: outcome.matrix.edge_count(),
        iterations: outcome.iterations,
    })
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "variant {}  runs {}  train ratio {}  seed {}  segments {}  iterations {}",
            c.variant, c.runs, c.train_ratio, c.seed, c.segments, c.max_iterations
        )?;
        for r in &self.runs {
            writeln!(
                f,
                "run {:>3}  seed {:>5}  train {:>6.2}%  test {:>6.2}%  edges {:>3}",
                r.run,
                r.seed,
                r.train_accuracy * 100.0,
                r.test_accuracy * 100.0,
                r.edges
            )?;
        }
        match self.std {
            Some(s) => writeln!(f, "accuracy {:.2}% ± {:.2}", self.mean * 100.0, s * 100.0),
            None => writeln!(f, "accuracy {:.2}%", self.mean * 100.0),
        }
    }
}
