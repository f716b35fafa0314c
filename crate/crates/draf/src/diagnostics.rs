//! Analysis instruments for trained ensembles: kappa-error diversity
//! diagrams, the 0-1-loss bias-variance decomposition, and tree-size
//! profiling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{bootstrap, derive_seed, stream, Dataset, SampleIndexSet};
use crate::error::{Error, Result};
use crate::forest::{train_forest, Forest, ForestConfig};

/// One classifier pair's agreement/error coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct CoincidencePoint {
    pub tree_i: usize,
    pub tree_j: usize,
    pub kappa: f64,
    /// `(E_i + E_j) / 2` over the test set.
    pub avg_error: f64,
}

/// All `L(L-1)/2` pairwise points plus their component-wise centroid.
#[derive(Debug, Clone)]
pub struct KappaErrorDiagram {
    pub points: Vec<CoincidencePoint>,
    pub centroid_kappa: f64,
    pub centroid_error: f64,
}

/// Inter-rater agreement of two prediction vectors, corrected for chance.
///
/// Builds the joint coincidence matrix, takes `pr(a)` from its diagonal and
/// `pr(e)` from the product of marginals, and returns
/// `(pr(a) - pr(e)) / (1 - pr(e))` — exactly 1 when both classifiers always
/// emit the same single class.
pub fn kappa(preds_i: &[usize], preds_j: &[usize], n_classes: usize) -> Result<f64> {
    if preds_i.len() != preds_j.len() {
        return Err(Error::LengthMismatch {
            left: preds_i.len(),
            right: preds_j.len(),
        });
    }
    if preds_i.is_empty() {
        return Err(Error::invalid("kappa of empty prediction vectors"));
    }
    let n = preds_i.len() as f64;
    let mut joint = vec![vec![0usize; n_classes]; n_classes];
    for (&a, &b) in preds_i.iter().zip(preds_j) {
        joint[a][b] += 1;
    }
    // Counting first and dividing once keeps self-agreement exactly 1.
    let pr_a: f64 = (0..n_classes).map(|k| joint[k][k]).sum::<usize>() as f64 / n;
    let pr_e: f64 = (0..n_classes)
        .map(|k| {
            let row: usize = joint[k].iter().sum();
            let col: usize = (0..n_classes).map(|r| joint[r][k]).sum();
            (row as f64 / n) * (col as f64 / n)
        })
        .sum();
    if pr_e >= 1.0 - 1e-12 {
        return Ok(1.0);
    }
    Ok((pr_a - pr_e) / (1.0 - pr_e))
}

/// Kappa-error diagram of a forest on a labeled test set: one point per
/// unordered tree pair, ordered lexicographically by `(i, j)`.
pub fn kappa_error_diagram(forest: &Forest, test: &Dataset) -> Result<KappaErrorDiagram> {
    let l = forest.n_trees();
    if l < 2 {
        return Err(Error::TooFewTrees { got: l });
    }
    let truth = forest.remap_labels(test)?;
    let n = test.n_samples();
    let per_tree: Vec<Vec<usize>> = forest
        .trees()
        .iter()
        .map(|t| (0..n).map(|i| t.predict(test.row(i))).collect())
        .collect();
    let errors: Vec<f64> = per_tree
        .iter()
        .map(|preds| preds.iter().zip(&truth).filter(|(p, t)| p != t).count() as f64 / n as f64)
        .collect();

    let mut points = Vec::with_capacity(l * (l - 1) / 2);
    for i in 0..l {
        for j in (i + 1)..l {
            points.push(CoincidencePoint {
                tree_i: i,
                tree_j: j,
                kappa: kappa(&per_tree[i], &per_tree[j], forest.n_classes())?,
                avg_error: 0.5 * (errors[i] + errors[j]),
            });
        }
    }
    let m = points.len() as f64;
    let centroid_kappa = points.iter().map(|p| p.kappa).sum::<f64>() / m;
    let centroid_error = points.iter().map(|p| p.avg_error).sum::<f64>() / m;
    Ok(KappaErrorDiagram {
        points,
        centroid_kappa,
        centroid_error,
    })
}

/// Renders the diagram in the interchange layout: a header, one row per
/// pair, and a trailing `centroid` row.
pub fn kappa_error_csv(diagram: &KappaErrorDiagram) -> String {
    let mut out = String::from("tree_i,tree_j,kappa,avg_error\n");
    for p in &diagram.points {
        out.push_str(&format!(
            "{},{},{:.6},{:.6}\n",
            p.tree_i, p.tree_j, p.kappa, p.avg_error
        ));
    }
    out.push_str(&format!(
        "centroid,,{:.6},{:.6}\n",
        diagram.centroid_kappa, diagram.centroid_error
    ));
    out
}

/// Mean 0-1-loss decomposition over a test set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasVarianceReport {
    pub bias_sq: f64,
    pub variance: f64,
    /// Mean 0-1 loss of the individual trained models.
    pub error: f64,
    pub repeats: usize,
}

/// Core of the decomposition, computable from any family of prediction
/// vectors: `model_preds[r][d]` is replicate r's prediction on test point d.
///
/// Per point, with `P(Y_H = y)` the fraction of models voting y and
/// `P(Y_F = y)` a point mass on the observed label:
/// `bias_d^2 = 1/2 sum_y [P(Y_F=y) - P(Y_H=y)]^2` and
/// `variance_d = 1/2 [1 - sum_y P(Y_H=y)^2]`. Noise stays folded into bias.
pub fn bias_variance_from_predictions(
    model_preds: &[Vec<usize>],
    truth: &[usize],
    n_classes: usize,
) -> Result<BiasVarianceReport> {
    let t = model_preds.len();
    if t < 1 {
        return Err(Error::invalid("need at least one replicate"));
    }
    let n = truth.len();
    if n == 0 {
        return Err(Error::invalid("empty test set"));
    }
    for preds in model_preds {
        if preds.len() != n {
            return Err(Error::LengthMismatch {
                left: preds.len(),
                right: n,
            });
        }
    }

    let mut bias_total = 0.0;
    let mut var_total = 0.0;
    let mut err_total = 0.0;
    for d in 0..n {
        let mut p_h = vec![0.0; n_classes];
        for preds in model_preds {
            p_h[preds[d]] += 1.0 / t as f64;
        }
        let mut bias_d = 0.0;
        let mut sq_sum = 0.0;
        for (y, &p) in p_h.iter().enumerate() {
            let p_f = if y == truth[d] { 1.0 } else { 0.0 };
            bias_d += (p_f - p).powi(2);
            sq_sum += p * p;
        }
        bias_total += 0.5 * bias_d;
        var_total += 0.5 * (1.0 - sq_sum);
        err_total += 1.0 - p_h[truth[d]];
    }
    Ok(BiasVarianceReport {
        bias_sq: bias_total / n as f64,
        variance: var_total / n as f64,
        error: err_total / n as f64,
        repeats: t,
    })
}

/// Trains `repeats` models on bootstrap replicates of the training pool and
/// decomposes their test error. The learner itself keeps the configured
/// master seed, so identical replicates produce identical models and the
/// variance estimate reflects training-set perturbation only.
pub fn bias_variance(
    pool: &Dataset,
    test: &Dataset,
    config: &ForestConfig,
    repeats: usize,
    seed: u64,
) -> Result<BiasVarianceReport> {
    if repeats < 2 {
        return Err(Error::invalid("bias-variance needs at least 2 repeats"));
    }
    // Truth expressed in the pool's class indices, which every replicate
    // model inherits.
    let truth = pool_label_view(pool, test)?;
    let all = SampleIndexSet::full(pool.n_samples());
    let replicate_indices: Vec<SampleIndexSet> = (0..repeats)
        .map(|r| bootstrap(&all, &mut stream(derive_seed(seed, 0xB1A5 + r as u64))))
        .collect::<Result<Vec<_>>>()?;
    let model_preds: Vec<Vec<usize>> = replicate_indices
        .into_par_iter()
        .map(|idx| {
            let replicate = pool.subset(&idx);
            let forest = train_forest(&replicate, config)?;
            (0..test.n_samples())
                .map(|i| forest.predict(test.row(i)))
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    bias_variance_from_predictions(&model_preds, &truth, pool.n_classes())
}

/// Test labels expressed in the pool's class indices.
fn pool_label_view(pool: &Dataset, test: &Dataset) -> Result<Vec<usize>> {
    let translation: Vec<usize> = test
        .label_names()
        .iter()
        .map(|name| {
            pool.label_names()
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownLabel { name: name.clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(test.labels().iter().map(|&l| translation[l]).collect())
}

/// Flat key-value rendering of a bias-variance report.
pub fn bias_variance_kv(report: &BiasVarianceReport) -> String {
    format!(
        "bias_sq={:.6}\nvariance={:.6}\nerror={:.6}\nrepeats={}\n",
        report.bias_sq, report.variance, report.error, report.repeats
    )
}

/// Tree-size statistics of an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeProfile {
    pub node_counts: Vec<usize>,
    pub mean_nodes: f64,
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub depths: Vec<usize>,
    pub mean_depth: f64,
    pub min_depth: usize,
    pub max_depth: usize,
}

pub fn node_profile(forest: &Forest) -> NodeProfile {
    let node_counts: Vec<usize> = forest.trees().iter().map(|t| t.node_count()).collect();
    let depths: Vec<usize> = forest.trees().iter().map(|t| t.depth()).collect();
    let mean = |v: &[usize]| v.iter().sum::<usize>() as f64 / v.len() as f64;
    NodeProfile {
        mean_nodes: mean(&node_counts),
        min_nodes: *node_counts.iter().min().expect("nonempty forest"),
        max_nodes: *node_counts.iter().max().expect("nonempty forest"),
        mean_depth: mean(&depths),
        min_depth: *depths.iter().min().expect("nonempty forest"),
        max_depth: *depths.iter().max().expect("nonempty forest"),
        node_counts,
        depths,
    }
}
