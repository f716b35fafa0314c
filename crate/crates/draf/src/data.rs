//! Dataset ingestion, bootstrap resampling and random feature-subspace
//! selection shared by every forest variant.
//!
//! # Random streams
//!
//! A 64-bit master seed owns all randomness. Per-tree streams are derived by
//! mixing `(master, tree_index)`; inside a tree each node owns a stream
//! derived from its parent's by mixing in the branch side. Truncating a
//! subtree therefore never perturbs the draws made anywhere else, and results
//! are identical regardless of how trees are scheduled across workers.

use std::fs;
use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numeric sample matrix with integer class labels and class metadata.
///
/// Row-major storage; immutable once built, so it can be shared freely
/// across worker threads.
#[derive(Debug, Clone)]
pub struct Dataset {
    samples: Vec<f64>,
    n_rows: usize,
    n_features: usize,
    labels: Vec<usize>,
    label_names: Vec<String>,
    feature_names: Vec<String>,
    label_column: String,
}

impl Dataset {
    /// Builds a dataset from row-major features and class indices.
    /// `label_names[k]` names class `k`; classes absent from `labels` are
    /// still legal (a subsample need not contain every class).
    pub fn new(
        samples: Vec<Vec<f64>>,
        labels: Vec<usize>,
        label_names: Vec<String>,
        feature_names: Vec<String>,
        label_column: String,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let n_features = samples[0].len();
        if n_features == 0 {
            return Err(Error::NoFeatureColumns);
        }
        if samples.len() != labels.len() {
            return Err(Error::invalid("label count does not match row count"));
        }
        if feature_names.len() != n_features {
            return Err(Error::invalid("feature name count does not match columns"));
        }
        let n_classes = label_names.len();
        let mut flat = Vec::with_capacity(samples.len() * n_features);
        for (i, row) in samples.iter().enumerate() {
            if row.len() != n_features {
                return Err(Error::invalid(format!("row {} has ragged width", i + 1)));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonNumericCell {
                        row: i + 1,
                        col: j + 1,
                        cell: v.to_string(),
                    });
                }
                flat.push(v);
            }
        }
        for &l in &labels {
            if l >= n_classes {
                return Err(Error::invalid(format!(
                    "label index {l} out of range for {n_classes} classes"
                )));
            }
        }
        Ok(Dataset {
            samples: flat,
            n_rows: samples.len(),
            n_features,
            labels,
            label_names,
            feature_names,
            label_column,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.label_names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.samples[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn label_name(&self, class: usize) -> &str {
        &self.label_names[class]
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn label_column(&self) -> &str {
        &self.label_column
    }

    /// Index of the majority class over the whole dataset (lowest index on
    /// ties) and its frequency — the baseline any classifier must beat.
    pub fn majority_class(&self) -> (usize, f64) {
        let mut counts = vec![0usize; self.n_classes().max(1)];
        for &l in &self.labels {
            counts[l] += 1;
        }
        let best = counts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(k, _)| k)
            .unwrap_or(0);
        (best, counts[best] as f64 / self.n_rows as f64)
    }

    /// New dataset keeping only the given rows (duplicates allowed), with
    /// the parent's class metadata.
    pub fn subset(&self, indices: &SampleIndexSet) -> Dataset {
        let mut samples = Vec::with_capacity(indices.len() * self.n_features);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices.indices() {
            samples.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            samples,
            n_rows: indices.len(),
            n_features: self.n_features,
            labels,
            label_names: self.label_names.clone(),
            feature_names: self.feature_names.clone(),
            label_column: self.label_column.clone(),
        }
    }
}

/// Which column of an input file holds the class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Last,
    Named(String),
}

impl LabelColumn {
    pub fn parse(selector: &str) -> LabelColumn {
        if selector.eq_ignore_ascii_case("last") {
            LabelColumn::Last
        } else {
            LabelColumn::Named(selector.to_string())
        }
    }
}

/// Loads a comma-separated file with a header row. Label names are mapped to
/// class indices in first-appearance order; every feature cell must parse as
/// a finite real.
pub fn load_dataset(path: impl AsRef<Path>, label_column: &LabelColumn) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_dataset(&text, label_column).map_err(|e| match e {
        Error::EmptyDataset => Error::Parse {
            path: path.to_path_buf(),
            message: "no data rows".into(),
        },
        other => other,
    })
}

/// CSV-text body of [`load_dataset`]; split out so in-memory text can be
/// parsed in tests and examples.
pub fn parse_dataset(text: &str, label_column: &LabelColumn) -> Result<Dataset> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header_line = lines.next().ok_or(Error::EmptyDataset)?;
    let header: Vec<String> = split_csv(header_line);
    if header.is_empty() {
        return Err(Error::EmptyDataset);
    }

    let label_idx = match label_column {
        LabelColumn::Last => header.len() - 1,
        LabelColumn::Named(name) => header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingLabelColumn { name: name.clone() })?,
    };
    if header.len() < 2 {
        return Err(Error::NoFeatureColumns);
    }

    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != label_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut samples: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    let mut label_names: Vec<String> = Vec::new();

    for (row_no, line) in lines.enumerate() {
        let cells = split_csv(line);
        if cells.len() != header.len() {
            return Err(Error::invalid(format!(
                "row {} has {} cells, header has {}",
                row_no + 1,
                cells.len(),
                header.len()
            )));
        }
        let mut row = Vec::with_capacity(header.len() - 1);
        for (j, cell) in cells.iter().enumerate() {
            if j == label_idx {
                continue;
            }
            let value: f64 = cell.parse().unwrap_or(f64::NAN);
            if !value.is_finite() {
                return Err(Error::NonNumericCell {
                    row: row_no + 1,
                    col: j + 1,
                    cell: cell.clone(),
                });
            }
            row.push(value);
        }
        let name = &cells[label_idx];
        let class = match label_names.iter().position(|n| n == name) {
            Some(k) => k,
            None => {
                label_names.push(name.clone());
                label_names.len() - 1
            }
        };
        samples.push(row);
        labels.push(class);
    }

    Dataset::new(
        samples,
        labels,
        label_names,
        feature_names,
        header[label_idx].clone(),
    )
}

fn split_csv(line: &str) -> Vec<String> {
    line.trim_end_matches('\r')
        .split(',')
        .map(|c| c.trim().to_string())
        .collect()
}

/// Ordered multiset of row indices into a parent [`Dataset`]; duplicates are
/// the whole point (bootstrap semantics).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleIndexSet(Vec<usize>);

impl SampleIndexSet {
    pub fn new(indices: Vec<usize>) -> Self {
        SampleIndexSet(indices)
    }

    pub fn full(n: usize) -> Self {
        SampleIndexSet((0..n).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Uniform with-replacement resample of `source`, same cardinality.
pub fn bootstrap(source: &SampleIndexSet, rng: &mut impl Rng) -> Result<SampleIndexSet> {
    if source.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let n = source.len();
    let out = (0..n)
        .map(|_| source.indices()[rng.random_range(0..n)])
        .collect();
    Ok(SampleIndexSet::new(out))
}

/// Ordered set of distinct column indices, the candidate features evaluated
/// at one node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSubset(Vec<usize>);

impl FeatureSubset {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        FeatureSubset(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Gathers this subset's coordinates out of a full feature row.
    pub fn gather(&self, row: &[f64]) -> Vec<f64> {
        self.0.iter().map(|&j| row[j]).collect()
    }
}

/// `min(mtry, n)` distinct feature indices, uniform without replacement,
/// returned in ascending order.
pub fn sample_feature_subset(n: usize, mtry: usize, rng: &mut impl Rng) -> FeatureSubset {
    assert!(n >= 1 && mtry >= 1, "need n >= 1 and mtry >= 1");
    let k = mtry.min(n);
    // Partial Fisher-Yates over the index pool.
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool.sort_unstable();
    FeatureSubset(pool)
}

/// Default number of candidate features: `round(sqrt(n))`, floor 1.
pub fn default_mtry(n_features: usize) -> usize {
    ((n_features as f64).sqrt().round() as usize).max(1)
}

const MIX_CONST: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(MIX_CONST);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the stream owned by tree `index` under `master`.
pub fn tree_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_mul(2).wrapping_add(1)))
}

/// Seed for a derived sub-stream (root bootstrap, node children, replicate
/// draws); `tag` separates the different uses of one parent seed.
pub fn derive_seed(parent: u64, tag: u64) -> u64 {
    splitmix64(parent ^ splitmix64(tag.wrapping_mul(2)))
}

/// Deterministic stream for a seed.
pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
