//! Decision-forest ensembles beyond axis-parallel splits.
//!
//! `draf` trains twelve random-forest variants that share one induction
//! engine and differ along two axes:
//!
//! * **Split geometry** — plain axis-parallel Gini cuts, oblique hyperplane
//!   pairs from a multisurface proximal SVM (with Tikhonov, axis-parallel or
//!   null-space regularization for small nodes), or per-node PCA/LDA
//!   rotations of the candidate feature subspace.
//! * **Bootstrap placement** — the standard regime resamples once at the
//!   root of each tree, while the double regime trains every tree on the
//!   full data and bootstraps transiently at each node, growing deeper
//!   trees from more unique samples.
//!
//! Alongside training and prediction the crate ships the measurement tools
//! used to compare such ensembles: kappa-error diversity diagrams, a
//! 0-1-loss bias-variance decomposition, tree-size profiling, and
//! Friedman/Nemenyi/sign-test statistics over benchmark accuracy tables.
//!
//! The `examples/` directory holds one runnable walkthrough per capability;
//! the thin `draf` binary exposes the same flows as subcommands
//! (`train`, `predict`, `evaluate`, `benchmark`, `diagnose`, `stats`).
//!
//! ```
//! use draf::forest::{train_forest, ForestConfig};
//! use draf::tree::Variant;
//!
//! let data = draf::synth::xor_blobs(200, 7);
//! let config = ForestConfig::new(Variant::MpDrafT).with_trees(25).with_seed(42);
//! let forest = train_forest(&data, &config).unwrap();
//! assert!(forest.evaluate(&data).unwrap().accuracy > 0.9);
//! ```

pub mod cli;
pub mod data;
pub mod diagnostics;
pub mod error;
pub mod forest;
pub mod linalg;
pub mod split;
pub mod stats;
pub mod synth;
pub mod tree;

pub use error::{Error, Result};
pub use forest::{load_model, save_model, train_forest, Forest, ForestConfig};
pub use tree::{TreeConfig, Variant};
