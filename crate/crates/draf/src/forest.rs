//! Ensemble construction over L trees and majority-vote prediction, plus the
//! JSON model document the CLI persists.
//!
//! Training fans trees out over the current rayon pool; every tree owns a
//! stream derived from `(master_seed, tree_index)` and results are gathered
//! in tree order, so the model is bit-identical no matter how many workers
//! run.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{bootstrap, derive_seed, stream, tree_seed, Dataset, SampleIndexSet};
use crate::error::{Error, Result};
use crate::tree::{argmax, grow_tree, TrainedTree, TreeConfig, Variant, ROOT_BOOTSTRAP_TAG};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Ensemble settings: the per-tree config, the learner count L and the
/// master seed all randomness derives from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub tree: TreeConfig,
    pub n_trees: usize,
    pub master_seed: u64,
}

impl ForestConfig {
    pub fn new(variant: Variant) -> Self {
        ForestConfig {
            tree: TreeConfig::new(variant),
            n_trees: 50,
            master_seed: 0,
        }
    }

    pub fn with_trees(mut self, n: usize) -> Self {
        self.n_trees = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn variant(&self) -> Variant {
        self.tree.variant
    }
}

/// A trained ensemble together with the label/feature metadata needed to
/// apply it to new files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    config: ForestConfig,
    label_names: Vec<String>,
    feature_names: Vec<String>,
    label_column: String,
    trees: Vec<TrainedTree>,
}

/// Accuracy plus the per-sample predictions it came from.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub accuracy: f64,
    pub predictions: Vec<usize>,
}

/// Trains the ensemble. Standard variants bootstrap each tree's root sample;
/// double variants hand every tree the full data and bootstrap per node.
pub fn train_forest(dataset: &Dataset, config: &ForestConfig) -> Result<Forest> {
    if config.n_trees < 1 {
        return Err(Error::invalid("n_trees must be at least 1"));
    }
    let trees: Vec<TrainedTree> = (0..config.n_trees)
        .into_par_iter()
        .map(|i| {
            let seed = tree_seed(config.master_seed, i as u64);
            let root = if config.variant().is_double() {
                SampleIndexSet::full(dataset.n_samples())
            } else {
                bootstrap(
                    &SampleIndexSet::full(dataset.n_samples()),
                    &mut stream(derive_seed(seed, ROOT_BOOTSTRAP_TAG)),
                )?
            };
            grow_tree(dataset, &root, &config.tree, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Forest {
        config: config.clone(),
        label_names: dataset.label_names().to_vec(),
        feature_names: dataset.feature_names().to_vec(),
        label_column: dataset.label_column().to_string(),
        trees,
    })
}

impl Forest {
    pub fn config(&self) -> &ForestConfig {
        &self.config
    }

    pub fn trees(&self) -> &[TrainedTree] {
        &self.trees
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn n_classes(&self) -> usize {
        self.label_names.len()
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn label_column(&self) -> &str {
        &self.label_column
    }

    fn check_row(&self, row: &[f64]) -> Result<()> {
        if row.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                got: row.len(),
            });
        }
        Ok(())
    }

    /// Per-class vote counts over the trees; always sums to L.
    pub fn vote_counts(&self, row: &[f64]) -> Result<Vec<usize>> {
        self.check_row(row)?;
        let mut votes = vec![0usize; self.n_classes()];
        for tree in &self.trees {
            votes[tree.predict(row)] += 1;
        }
        Ok(votes)
    }

    /// Majority vote with lowest-index tie break.
    pub fn predict(&self, row: &[f64]) -> Result<usize> {
        let votes = self.vote_counts(row)?;
        let as_f: Vec<f64> = votes.iter().map(|&v| v as f64).collect();
        Ok(argmax(&as_f))
    }

    /// Translates a dataset's label indices into this model's class indices
    /// by label name. Needed because a test file builds its own
    /// first-appearance mapping.
    pub fn remap_labels(&self, dataset: &Dataset) -> Result<Vec<usize>> {
        let translation: Vec<usize> = dataset
            .label_names()
            .iter()
            .map(|name| {
                self.label_names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::UnknownLabel { name: name.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(dataset.labels().iter().map(|&l| translation[l]).collect())
    }

    /// Accuracy and per-sample predictions on a labeled dataset.
    pub fn evaluate(&self, dataset: &Dataset) -> Result<Evaluation> {
        if dataset.n_features() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                got: dataset.n_features(),
            });
        }
        let truth = self.remap_labels(dataset)?;
        let predictions: Vec<usize> = (0..dataset.n_samples())
            .map(|i| self.predict(dataset.row(i)))
            .collect::<Result<Vec<_>>>()?;
        let correct = predictions
            .iter()
            .zip(&truth)
            .filter(|(p, t)| p == t)
            .count();
        Ok(Evaluation {
            accuracy: correct as f64 / dataset.n_samples() as f64,
            predictions,
        })
    }

    /// Same metadata, different trees; used by the diagnostics tests to
    /// build hand-crafted ensembles.
    #[cfg(test)]
    pub(crate) fn clone_with_trees(&self, trees: Vec<TrainedTree>) -> Forest {
        Forest {
            trees,
            ..self.clone()
        }
    }

    /// Confusion matrix on a labeled dataset: `matrix[actual][predicted]`.
    pub fn confusion_matrix(&self, dataset: &Dataset) -> Result<Vec<Vec<usize>>> {
        let truth = self.remap_labels(dataset)?;
        let eval = self.evaluate(dataset)?;
        let c = self.n_classes();
        let mut matrix = vec![vec![0usize; c]; c];
        for (&t, &p) in truth.iter().zip(&eval.predictions) {
            matrix[t][p] += 1;
        }
        Ok(matrix)
    }
}

/// The versioned on-disk model: config, label mapping, feature names and
/// every serialized tree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format_version: u32,
    pub variant: String,
    pub forest: Forest,
}

impl ModelDocument {
    pub fn from_forest(forest: Forest) -> Self {
        ModelDocument {
            format_version: MODEL_FORMAT_VERSION,
            variant: forest.config.variant().name().to_string(),
            forest,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }

    pub fn from_json(text: &str, origin: &Path) -> Result<ModelDocument> {
        let doc: ModelDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        if doc.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                message: format!(
                    "unsupported format_version {} (expected {MODEL_FORMAT_VERSION})",
                    doc.format_version
                ),
            });
        }
        Ok(doc)
    }
}

/// Writes the model document with a trailing newline, LF line endings.
pub fn save_model(forest: &Forest, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let doc = ModelDocument::from_forest(forest.clone());
    let mut text = doc.to_json();
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Forest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(ModelDocument::from_json(&text, path)?.forest)
}
