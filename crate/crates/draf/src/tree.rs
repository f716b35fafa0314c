//! Recursive decision-tree induction for the standard (root-bootstrap) and
//! double (per-node bootstrap) regimes over any split strategy, plus
//! single-tree prediction.
//!
//! Double variants resample the node's data transiently to pick the split,
//! then send the original samples down to the children. Node randomness is
//! derived from the tree seed along the root-to-node path, so pruning a
//! subtree (say, with a larger `minleaf`) never changes the draws made
//! anywhere else in the tree.

use serde::{Deserialize, Serialize};

use crate::data::{
    bootstrap, default_mtry, derive_seed, sample_feature_subset, stream, Dataset, SampleIndexSet,
};
use crate::error::{Error, Result};
use crate::split::{
    best_axis_split, class_gaussians, group_classes, lda_rotation_split, mpsvm_split,
    pca_rotation_split, MpsvmRegularization, RotationKind, RoutingMode, SplitOutcome, SplitRule,
    COV_REG_EPS,
};

/// The twelve ensemble variants: axis, MPSVM-oblique (three regularizations)
/// and PCA/LDA rotation splits, each in a standard and a double flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "raf")]
    Raf,
    #[serde(rename = "draf")]
    Draf,
    #[serde(rename = "mpraf-t")]
    MpRafT,
    #[serde(rename = "mpraf-p")]
    MpRafP,
    #[serde(rename = "mpraf-n")]
    MpRafN,
    #[serde(rename = "mpdraf-t")]
    MpDrafT,
    #[serde(rename = "mpdraf-p")]
    MpDrafP,
    #[serde(rename = "mpdraf-n")]
    MpDrafN,
    #[serde(rename = "raf-pca")]
    RafPca,
    #[serde(rename = "raf-lda")]
    RafLda,
    #[serde(rename = "draf-pca")]
    DrafPca,
    #[serde(rename = "draf-lda")]
    DrafLda,
}

/// Split family a variant uses at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitStrategy {
    Axis,
    Mpsvm(MpsvmRegularization),
    Rotation(RotationKind),
}

impl Variant {
    pub const ALL: [Variant; 12] = [
        Variant::Raf,
        Variant::Draf,
        Variant::MpRafT,
        Variant::MpRafP,
        Variant::MpRafN,
        Variant::MpDrafT,
        Variant::MpDrafP,
        Variant::MpDrafN,
        Variant::RafPca,
        Variant::RafLda,
        Variant::DrafPca,
        Variant::DrafLda,
    ];

    /// The six (standard, double) pairings sharing a split strategy.
    pub const PAIRS: [(Variant, Variant); 6] = [
        (Variant::Raf, Variant::Draf),
        (Variant::MpRafT, Variant::MpDrafT),
        (Variant::MpRafP, Variant::MpDrafP),
        (Variant::MpRafN, Variant::MpDrafN),
        (Variant::RafPca, Variant::DrafPca),
        (Variant::RafLda, Variant::DrafLda),
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Raf => "raf",
            Variant::Draf => "draf",
            Variant::MpRafT => "mpraf-t",
            Variant::MpRafP => "mpraf-p",
            Variant::MpRafN => "mpraf-n",
            Variant::MpDrafT => "mpdraf-t",
            Variant::MpDrafP => "mpdraf-p",
            Variant::MpDrafN => "mpdraf-n",
            Variant::RafPca => "raf-pca",
            Variant::RafLda => "raf-lda",
            Variant::DrafPca => "draf-pca",
            Variant::DrafLda => "draf-lda",
        }
    }

    pub fn from_name(name: &str) -> Result<Variant> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == name)
            .ok_or_else(|| Error::UnknownVariant {
                name: name.to_string(),
                valid: Variant::ALL
                    .iter()
                    .map(|v| v.name())
                    .collect::<Vec<_>>()
                    .join(", "),
            })
    }

    /// Double variants train each tree on the full data and bootstrap
    /// transiently at every eligible node.
    pub fn is_double(&self) -> bool {
        matches!(
            self,
            Variant::Draf
                | Variant::MpDrafT
                | Variant::MpDrafP
                | Variant::MpDrafN
                | Variant::DrafPca
                | Variant::DrafLda
        )
    }

    pub fn strategy(&self) -> SplitStrategy {
        match self {
            Variant::Raf | Variant::Draf => SplitStrategy::Axis,
            Variant::MpRafT | Variant::MpDrafT => {
                SplitStrategy::Mpsvm(MpsvmRegularization::Tikhonov)
            }
            Variant::MpRafP | Variant::MpDrafP => {
                SplitStrategy::Mpsvm(MpsvmRegularization::AxisParallel)
            }
            Variant::MpRafN | Variant::MpDrafN => {
                SplitStrategy::Mpsvm(MpsvmRegularization::NullSpace)
            }
            Variant::RafPca | Variant::DrafPca => SplitStrategy::Rotation(RotationKind::Pca),
            Variant::RafLda | Variant::DrafLda => SplitStrategy::Rotation(RotationKind::Lda),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Scope of the axis-parallel fallback for oblique splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FallbackScope {
    /// Children of a fallen-back node try MPSVM again.
    #[serde(rename = "per-node")]
    PerNode,
    /// Once a node falls back, its whole subtree grows axis-parallel.
    #[serde(rename = "subtree")]
    Subtree,
}

/// Per-tree induction settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    pub variant: Variant,
    /// Candidate features per node; `None` means `round(sqrt(n))`.
    pub mtry: Option<usize>,
    /// Maximum samples allowed in an impure node before it becomes a leaf.
    pub minleaf: usize,
    /// Double variants bootstrap a node only while it holds more than
    /// `node_bootstrap_fraction * N` samples (N = full training size).
    pub node_bootstrap_fraction: f64,
    /// Hard recursion cap.
    pub max_depth: usize,
    pub routing: RoutingMode,
    pub fallback: FallbackScope,
}

impl TreeConfig {
    pub fn new(variant: Variant) -> Self {
        TreeConfig {
            variant,
            mtry: None,
            minleaf: 1,
            node_bootstrap_fraction: 0.1,
            max_depth: 10_000,
            routing: RoutingMode::Proximity,
            fallback: FallbackScope::PerNode,
        }
    }

    pub fn with_mtry(mut self, mtry: usize) -> Self {
        self.mtry = Some(mtry);
        self
    }

    pub fn with_minleaf(mut self, minleaf: usize) -> Self {
        self.minleaf = minleaf;
        self
    }

    pub fn with_routing(mut self, routing: RoutingMode) -> Self {
        self.routing = routing;
        self
    }

    pub fn with_fallback(mut self, fallback: FallbackScope) -> Self {
        self.fallback = fallback;
        self
    }

    pub fn resolved_mtry(&self, n_features: usize) -> usize {
        self.mtry.unwrap_or_else(|| default_mtry(n_features)).max(1)
    }

    fn validate(&self) -> Result<()> {
        if self.minleaf < 1 {
            return Err(Error::invalid("minleaf must be at least 1"));
        }
        if !(self.node_bootstrap_fraction > 0.0 && self.node_bootstrap_fraction <= 1.0) {
            return Err(Error::invalid("node_bootstrap_fraction must be in (0, 1]"));
        }
        if self.max_depth < 1 {
            return Err(Error::invalid("max_depth must be at least 1"));
        }
        Ok(())
    }
}

/// One tree node in the flat arena. Children are arena indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Internal {
        rule: SplitRule,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Per-class proportions of the training samples that settled here.
        distribution: Vec<f64>,
        class: usize,
    },
}

/// A grown tree. `nodes[0]` is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedTree {
    nodes: Vec<Node>,
    depth: usize,
    seed: u64,
}

impl TrainedTree {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Routes a full feature row to its leaf class.
    pub fn predict(&self, row: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Internal { rule, left, right } => {
                    at = if rule.route(row) { *left } else { *right };
                }
                Node::Leaf { class, .. } => return *class,
            }
        }
    }

    /// Leaf class distribution a row lands in.
    pub fn predict_distribution(&self, row: &[f64]) -> &[f64] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Internal { rule, left, right } => {
                    at = if rule.route(row) { *left } else { *right };
                }
                Node::Leaf { distribution, .. } => return distribution,
            }
        }
    }
}

/// Grows one tree from `root_indices` with the stream identified by `seed`.
pub fn grow_tree(
    dataset: &Dataset,
    root_indices: &SampleIndexSet,
    config: &TreeConfig,
    seed: u64,
) -> Result<TrainedTree> {
    if root_indices.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    config.validate()?;
    let mut grower = Grower {
        dataset,
        config,
        mtry: config.resolved_mtry(dataset.n_features()),
        // The bootstrap threshold compares against the original dataset
        // size, not the root sample count.
        bootstrap_threshold: dataset.n_samples() as f64 * config.node_bootstrap_fraction,
        nodes: Vec::new(),
        max_depth_seen: 0,
    };
    let root_seed = derive_seed(seed, NODE_TAG);
    grower.grow(root_seed, root_indices.indices().to_vec(), 0, false)?;
    Ok(TrainedTree {
        nodes: grower.nodes,
        depth: grower.max_depth_seen,
        seed,
    })
}

const NODE_TAG: u64 = 3;
const LEFT_TAG: u64 = 0;
const RIGHT_TAG: u64 = 1;
pub(crate) const ROOT_BOOTSTRAP_TAG: u64 = 2;

struct Grower<'a> {
    dataset: &'a Dataset,
    config: &'a TreeConfig,
    mtry: usize,
    bootstrap_threshold: f64,
    nodes: Vec<Node>,
    max_depth_seen: usize,
}

impl Grower<'_> {
    /// Grows the subtree for `indices`, returning its arena index.
    fn grow(
        &mut self,
        node_seed: u64,
        indices: Vec<usize>,
        depth: usize,
        force_axis: bool,
    ) -> Result<usize> {
        self.max_depth_seen = self.max_depth_seen.max(depth);
        let counts = self.class_counts(&indices);
        let present = counts.iter().filter(|&&c| c > 0).count();
        if present <= 1 || indices.len() <= self.config.minleaf || depth >= self.config.max_depth {
            return Ok(self.push_leaf(&counts));
        }

        let mut rng = stream(node_seed);
        // Fixed draw order per node: bootstrap first, then feature subset.
        let work: Vec<usize> =
            if self.config.variant.is_double() && indices.len() as f64 > self.bootstrap_threshold {
                bootstrap(&SampleIndexSet::new(indices.clone()), &mut rng)?
                    .indices()
                    .to_vec()
            } else {
                indices.clone()
            };
        let subset = sample_feature_subset(self.dataset.n_features(), self.mtry, &mut rng);

        let rows: Vec<Vec<f64>> = work
            .iter()
            .map(|&i| subset.gather(self.dataset.row(i)))
            .collect();
        let labels: Vec<usize> = work.iter().map(|&i| self.dataset.label(i)).collect();
        let n_classes = self.dataset.n_classes();

        let strategy = if force_axis {
            SplitStrategy::Axis
        } else {
            self.config.variant.strategy()
        };
        let outcome: Option<SplitOutcome> = match strategy {
            SplitStrategy::Axis => best_axis_split(&rows, &labels, n_classes, &subset),
            SplitStrategy::Mpsvm(reg) => {
                let gaussians = class_gaussians(&rows, &labels, COV_REG_EPS);
                match group_classes(&gaussians) {
                    Ok(grouping) => mpsvm_split(
                        &rows,
                        &labels,
                        n_classes,
                        &subset,
                        &grouping,
                        reg,
                        self.config.routing,
                    )?,
                    // The bootstrapped working sample can collapse to one
                    // class even when the node itself is impure.
                    Err(Error::SingleClass) => None,
                    Err(other) => return Err(other),
                }
            }
            SplitStrategy::Rotation(RotationKind::Pca) => {
                pca_rotation_split(&rows, &labels, n_classes, &subset)?
            }
            SplitStrategy::Rotation(RotationKind::Lda) => {
                lda_rotation_split(&rows, &labels, n_classes, &subset)?
            }
        };

        let Some(outcome) = outcome else {
            return Ok(self.push_leaf(&counts));
        };

        // Split the original node samples, not the bootstrapped copies.
        let mut left_idx = Vec::new();
        let mut right_idx = Vec::new();
        for &i in &indices {
            if outcome.rule.route(self.dataset.row(i)) {
                left_idx.push(i);
            } else {
                right_idx.push(i);
            }
        }
        if left_idx.is_empty() || right_idx.is_empty() {
            return Ok(self.push_leaf(&counts));
        }

        let force_axis_children =
            force_axis || (outcome.fallback_used && self.config.fallback == FallbackScope::Subtree);
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf {
            distribution: Vec::new(),
            class: 0,
        }); // placeholder until children exist
        let left = self.grow(
            derive_seed(node_seed, LEFT_TAG),
            left_idx,
            depth + 1,
            force_axis_children,
        )?;
        let right = self.grow(
            derive_seed(node_seed, RIGHT_TAG),
            right_idx,
            depth + 1,
            force_axis_children,
        )?;
        self.nodes[at] = Node::Internal {
            rule: outcome.rule,
            left,
            right,
        };
        Ok(at)
    }

    fn class_counts(&self, indices: &[usize]) -> Vec<usize> {
        let mut counts = vec![0usize; self.dataset.n_classes()];
        for &i in indices {
            counts[self.dataset.label(i)] += 1;
        }
        counts
    }

    fn push_leaf(&mut self, counts: &[usize]) -> usize {
        let total: usize = counts.iter().sum();
        let distribution: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
        let class = argmax(&distribution);
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf {
            distribution,
            class,
        });
        at
    }
}

/// Lowest index wins ties.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}
