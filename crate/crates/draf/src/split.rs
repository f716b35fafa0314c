//! Node-level split finding: axis-parallel Gini search, Bhattacharyya class
//! grouping, MPSVM oblique hyperplane pairs under three regularizations, and
//! PCA/LDA rotation splits.
//!
//! Every function here works on the node's sample rows already restricted to
//! the candidate [`FeatureSubset`]. The returned rules store whatever they
//! need (subset indices, plane vectors, rotation matrices) to route full
//! feature rows later.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::FeatureSubset;
use crate::error::{Error, Result};
use crate::linalg::{
    cholesky, cholesky_solve, log_det_psd, solve_generalized_rayleigh, sym_eig, DenseMatrix,
    Regularization, NULL_SPACE_TOL,
};

/// Relative ridge added to every class covariance estimate.
pub const COV_REG_EPS: f64 = 1e-6;

/// Tikhonov bump applied to a Cholesky-failing matrix: `delta = 1e-4 *
/// trace(H)/dim(H)`.
pub const TIKHONOV_DELTA_REL: f64 = 1e-4;

/// Per-class Gaussian model of the samples reaching a node.
#[derive(Debug, Clone)]
pub struct ClassGaussian {
    pub mean: Vec<f64>,
    pub covariance: DenseMatrix,
    pub count: usize,
}

/// The two hyperclasses a multiclass node is collapsed into before MPSVM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryGrouping {
    pub positive_classes: Vec<usize>,
    pub negative_classes: Vec<usize>,
}

/// How an oblique node routes a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ObliqueRouting {
    /// Left iff the sample is at least as close to the positive-class plane
    /// (normalized distances; ties go left).
    Proximity,
    /// Left iff `x . w - b <= 0` for the stored angle bisector of the two
    /// clustering planes.
    Bisector { weights: Vec<f64>, bias: f64 },
}

/// Which routing an MPSVM split should produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RoutingMode {
    Proximity,
    Bisector,
}

/// Rotation family for the rotation splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationKind {
    Pca,
    Lda,
}

/// MPSVM regularization flavor (the -T / -P / -N model suffixes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MpsvmRegularization {
    Tikhonov,
    AxisParallel,
    NullSpace,
}

/// A trained node test. `Axis` stores a dataset column; the other arms store
/// the feature subset they were fit on and route gathered sub-vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SplitRule {
    Axis {
        feature: usize,
        threshold: f64,
    },
    Oblique {
        feature_indices: FeatureSubset,
        plane_pos: (Vec<f64>, f64),
        plane_neg: (Vec<f64>, f64),
        routing: ObliqueRouting,
    },
    Rotation {
        feature_indices: FeatureSubset,
        rotation: DenseMatrix,
        rotated_feature: usize,
        threshold: f64,
        kind: RotationKind,
    },
}

impl SplitRule {
    /// Routes a full feature row; `true` sends the sample left.
    pub fn route(&self, row: &[f64]) -> bool {
        match self {
            SplitRule::Axis { feature, threshold } => row[*feature] <= *threshold,
            SplitRule::Oblique {
                feature_indices,
                plane_pos,
                plane_neg,
                routing,
            } => {
                let z = feature_indices.gather(row);
                match routing {
                    ObliqueRouting::Proximity => {
                        plane_distance(&z, plane_pos) <= plane_distance(&z, plane_neg)
                    }
                    ObliqueRouting::Bisector { weights, bias } => dot(&z, weights) - bias <= 0.0,
                }
            }
            SplitRule::Rotation {
                feature_indices,
                rotation,
                rotated_feature,
                threshold,
                ..
            } => {
                let z = feature_indices.gather(row);
                let coord: f64 = (0..z.len())
                    .map(|i| z[i] * rotation[(i, *rotated_feature)])
                    .sum();
                coord <= *threshold
            }
        }
    }
}

/// Normalized point-to-plane distance `|z.w - b| / ||w||`; a degenerate
/// plane (`w ~ 0`) is infinitely far from everything.
fn plane_distance(z: &[f64], (w, b): &(Vec<f64>, f64)) -> f64 {
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= 1e-12 {
        return f64::INFINITY;
    }
    (dot(z, w) - b).abs() / norm
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The result of a successful split search on a node's working sample.
#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub rule: SplitRule,
    /// Weighted Gini of the two children over the working sample.
    pub impurity: f64,
    pub left_count: usize,
    pub right_count: usize,
    /// Set when the axis-parallel fallback replaced an oblique split.
    pub fallback_used: bool,
}

/// `1 - sum((c_k / total)^2)`.
pub fn gini_impurity(class_counts: &[usize]) -> f64 {
    let total: usize = class_counts.iter().sum();
    assert!(total >= 1, "gini of an empty node");
    let t = total as f64;
    1.0 - class_counts
        .iter()
        .map(|&c| {
            let p = c as f64 / t;
            p * p
        })
        .sum::<f64>()
}

fn weighted_children_gini(left: &[usize], right: &[usize]) -> f64 {
    let nl: usize = left.iter().sum();
    let nr: usize = right.iter().sum();
    let n = (nl + nr) as f64;
    (nl as f64 * gini_impurity(left) + nr as f64 * gini_impurity(right)) / n
}

/// Best axis-parallel cut over local columns: every midpoint between
/// consecutive distinct sorted values of every column is scored by weighted
/// child Gini, lowest wins (first candidate on ties). `None` when no column
/// separates the samples or only one class is present.
pub struct AxisCandidate {
    pub column: usize,
    pub threshold: f64,
    pub impurity: f64,
    pub left_count: usize,
    pub right_count: usize,
}

#[allow(clippy::needless_range_loop)] // col indexes columns, not `rows`
pub fn best_axis_candidate(
    rows: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
) -> Option<AxisCandidate> {
    let n = rows.len();
    if n < 2 {
        return None;
    }
    let mut total = vec![0usize; n_classes];
    for &l in labels {
        total[l] += 1;
    }
    if total.iter().filter(|&&c| c > 0).count() < 2 {
        return None;
    }

    let m = rows[0].len();
    let mut best: Option<AxisCandidate> = None;
    let mut order: Vec<usize> = (0..n).collect();
    for col in 0..m {
        order.sort_by(|&a, &b| rows[a][col].total_cmp(&rows[b][col]));
        let mut left = vec![0usize; n_classes];
        let mut right = total.clone();
        for cut in 1..n {
            let prev = order[cut - 1];
            let label = labels[prev];
            left[label] += 1;
            right[label] -= 1;
            let lo = rows[prev][col];
            let hi = rows[order[cut]][col];
            if lo == hi {
                continue;
            }
            let impurity = weighted_children_gini(&left, &right);
            if best.as_ref().is_none_or(|b| impurity < b.impurity) {
                best = Some(AxisCandidate {
                    column: col,
                    threshold: lo + 0.5 * (hi - lo),
                    impurity,
                    left_count: cut,
                    right_count: n - cut,
                });
            }
        }
    }
    best
}

/// [`best_axis_candidate`] wrapped into a [`SplitOutcome`] whose rule stores
/// the original dataset column for the winning subset position.
pub fn best_axis_split(
    rows: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
    subset: &FeatureSubset,
) -> Option<SplitOutcome> {
    best_axis_candidate(rows, labels, n_classes).map(|c| SplitOutcome {
        rule: SplitRule::Axis {
            feature: subset.indices()[c.column],
            threshold: c.threshold,
        },
        impurity: c.impurity,
        left_count: c.left_count,
        right_count: c.right_count,
        fallback_used: false,
    })
}

/// Per-class sample means and ridge-regularized covariances.
///
/// Covariances use the unbiased denominator `max(count - 1, 1)` and then get
/// `eps * max(mean diagonal, 1)` added along the diagonal, so singleton and
/// duplicate-only classes come out as a scaled identity.
pub fn class_gaussians(
    rows: &[Vec<f64>],
    labels: &[usize],
    reg_eps: f64,
) -> BTreeMap<usize, ClassGaussian> {
    let m = rows.first().map_or(0, |r| r.len());
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_class.entry(l).or_default().push(i);
    }
    let mut out = BTreeMap::new();
    for (class, members) in by_class {
        let count = members.len();
        let mut mean = vec![0.0; m];
        for &i in &members {
            for j in 0..m {
                mean[j] += rows[i][j];
            }
        }
        for v in &mut mean {
            *v /= count as f64;
        }
        let denom = count.saturating_sub(1).max(1) as f64;
        let mut cov = DenseMatrix::zeros(m, m);
        for &i in &members {
            for a in 0..m {
                let da = rows[i][a] - mean[a];
                for b in a..m {
                    let db = rows[i][b] - mean[b];
                    cov[(a, b)] += da * db / denom;
                }
            }
        }
        for a in 0..m {
            for b in (a + 1)..m {
                cov[(b, a)] = cov[(a, b)];
            }
        }
        let mean_diag = cov.trace() / m as f64;
        let eps = reg_eps * mean_diag.max(1.0);
        let cov = cov.add_scaled_identity(eps);
        out.insert(
            class,
            ClassGaussian {
                mean,
                covariance: cov,
                count,
            },
        );
    }
    out
}

/// Bhattacharyya distance between two Gaussian class models, evaluated in
/// log space:
///
/// `(1/8) d^t ((v1+v2)/2)^-1 d + (1/2)[ln det((v1+v2)/2) - (ln det v1 + ln det v2)/2]`
pub fn bhattacharyya(g1: &ClassGaussian, g2: &ClassGaussian) -> Result<f64> {
    let m = g1.mean.len();
    let mut avg = DenseMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            avg[(i, j)] = 0.5 * (g1.covariance[(i, j)] + g2.covariance[(i, j)]);
        }
    }
    let diff: Vec<f64> = g2.mean.iter().zip(&g1.mean).map(|(a, b)| a - b).collect();
    let l = cholesky(&avg).ok_or(Error::NotPositiveDefinite)?;
    let solved = cholesky_solve(&l, &diff);
    let mahalanobis: f64 = dot(&diff, &solved);
    let log_det_avg: f64 = (0..m).map(|i| 2.0 * l[(i, i)].ln()).sum();
    let log_det_1 = log_det_psd(&g1.covariance)?;
    let log_det_2 = log_det_psd(&g2.covariance)?;
    Ok(0.125 * mahalanobis + 0.5 * (log_det_avg - 0.5 * (log_det_1 + log_det_2)))
}

/// Collapses the classes present at a node into two hyperclasses: the pair
/// with the largest Bhattacharyya distance seeds the groups, every other
/// class joins the seed it is closer to. Two-class nodes pass through
/// without any distance computation.
#[allow(clippy::needless_range_loop)]
pub fn group_classes(gaussians: &BTreeMap<usize, ClassGaussian>) -> Result<BinaryGrouping> {
    let classes: Vec<usize> = gaussians.keys().copied().collect();
    if classes.len() < 2 {
        return Err(Error::SingleClass);
    }
    if classes.len() == 2 {
        return Ok(BinaryGrouping {
            positive_classes: vec![classes[0]],
            negative_classes: vec![classes[1]],
        });
    }

    let k = classes.len();
    let mut dist = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let d = bhattacharyya(&gaussians[&classes[i]], &gaussians[&classes[j]])?;
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }

    // Seed pair: argmax distance, lowest-indexed pair on ties.
    let (mut seed_p, mut seed_n, mut best) = (0, 1, f64::NEG_INFINITY);
    for i in 0..k {
        for j in (i + 1)..k {
            if dist[i][j] > best {
                best = dist[i][j];
                seed_p = i;
                seed_n = j;
            }
        }
    }

    let mut positive = vec![classes[seed_p]];
    let mut negative = vec![classes[seed_n]];
    for idx in 0..k {
        if idx == seed_p || idx == seed_n {
            continue;
        }
        if dist[idx][seed_p] < dist[idx][seed_n] {
            positive.push(classes[idx]);
        } else {
            negative.push(classes[idx]);
        }
    }
    positive.sort_unstable();
    negative.sort_unstable();
    Ok(BinaryGrouping {
        positive_classes: positive,
        negative_classes: negative,
    })
}

/// MPSVM oblique split on the working sample.
///
/// Builds `P = [A -e]^t [A -e]` from the positive-group rows and `Q` from the
/// negative group, solves the generalized Rayleigh problems for the two
/// clustering planes, and routes samples by normalized plane proximity (or a
/// Gini-selected angle bisector). Rank deficiency is handled per the chosen
/// regularization; `AxisParallel` swaps in the plain axis search and flags
/// `fallback_used`, as does any oblique split that fails to send samples both
/// ways.
pub fn mpsvm_split(
    rows: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
    subset: &FeatureSubset,
    grouping: &BinaryGrouping,
    reg: MpsvmRegularization,
    routing_mode: RoutingMode,
) -> Result<Option<SplitOutcome>> {
    let positive: Vec<usize> = (0..rows.len())
        .filter(|&i| grouping.positive_classes.contains(&labels[i]))
        .collect();
    let negative: Vec<usize> = (0..rows.len())
        .filter(|&i| grouping.negative_classes.contains(&labels[i]))
        .collect();
    if positive.is_empty() || negative.is_empty() {
        return Err(Error::EmptyGroup);
    }

    let p = augmented_gram(rows, &positive);
    let q = augmented_gram(rows, &negative);

    let solver_reg = match reg {
        MpsvmRegularization::Tikhonov => Regularization::Tikhonov {
            delta_rel: TIKHONOV_DELTA_REL,
        },
        MpsvmRegularization::NullSpace => Regularization::NullSpace {
            tol: NULL_SPACE_TOL,
        },
        MpsvmRegularization::AxisParallel => {
            if cholesky(&p).is_none() || cholesky(&q).is_none() {
                return Ok(axis_fallback(rows, labels, n_classes, subset));
            }
            Regularization::None
        }
    };

    let (r_min, r_max) = solve_generalized_rayleigh(&p, &q, solver_reg)?;
    let m = rows[0].len();
    let plane_pos = (r_min.vector[..m].to_vec(), r_min.vector[m]);
    let plane_neg = (r_max.vector[..m].to_vec(), r_max.vector[m]);

    let routing = match routing_mode {
        RoutingMode::Proximity => Some(ObliqueRouting::Proximity),
        RoutingMode::Bisector => choose_bisector(rows, labels, n_classes, &plane_pos, &plane_neg),
    };

    if let Some(routing) = routing {
        let assignment: Vec<bool> = rows
            .iter()
            .map(|z| match &routing {
                ObliqueRouting::Proximity => {
                    plane_distance(z, &plane_pos) <= plane_distance(z, &plane_neg)
                }
                ObliqueRouting::Bisector { weights, bias } => dot(z, weights) - *bias <= 0.0,
            })
            .collect();
        let left_count = assignment.iter().filter(|&&l| l).count();
        let right_count = rows.len() - left_count;
        if left_count > 0 && right_count > 0 {
            let mut left = vec![0usize; n_classes];
            let mut right = vec![0usize; n_classes];
            for (i, &goes_left) in assignment.iter().enumerate() {
                if goes_left {
                    left[labels[i]] += 1;
                } else {
                    right[labels[i]] += 1;
                }
            }
            return Ok(Some(SplitOutcome {
                rule: SplitRule::Oblique {
                    feature_indices: subset.clone(),
                    plane_pos,
                    plane_neg,
                    routing,
                },
                impurity: weighted_children_gini(&left, &right),
                left_count,
                right_count,
                fallback_used: false,
            }));
        }
    }

    // The oblique rule failed to separate the working sample.
    Ok(axis_fallback(rows, labels, n_classes, subset))
}

fn axis_fallback(
    rows: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
    subset: &FeatureSubset,
) -> Option<SplitOutcome> {
    best_axis_split(rows, labels, n_classes, subset).map(|mut o| {
        o.fallback_used = true;
        o
    })
}

/// `[X -e]^t [X -e]` over the selected rows.
fn augmented_gram(rows: &[Vec<f64>], members: &[usize]) -> DenseMatrix {
    let m = rows[0].len();
    let d = m + 1;
    let mut g = DenseMatrix::zeros(d, d);
    for &i in members {
        let row = &rows[i];
        for a in 0..d {
            let va = if a < m { row[a] } else { -1.0 };
            for b in a..d {
                let vb = if b < m { row[b] } else { -1.0 };
                g[(a, b)] += va * vb;
            }
        }
    }
    for a in 0..d {
        for b in (a + 1)..d {
            g[(b, a)] = g[(a, b)];
        }
    }
    g
}

/// Evaluates both angle bisectors of the clustering planes by child Gini and
/// keeps the purer one; `None` when neither bisector separates the sample or
/// a plane is degenerate.
fn choose_bisector(
    rows: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
    plane_pos: &(Vec<f64>, f64),
    plane_neg: &(Vec<f64>, f64),
) -> Option<ObliqueRouting> {
    let norm_pos = plane_pos.0.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_neg = plane_neg.0.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm_pos <= 1e-12 || norm_neg <= 1e-12 {
        return None;
    }
    let m = plane_pos.0.len();
    let mut candidates = Vec::with_capacity(2);
    for sign in [-1.0, 1.0] {
        let weights: Vec<f64> = (0..m)
            .map(|i| plane_pos.0[i] / norm_pos + sign * plane_neg.0[i] / norm_neg)
            .collect();
        let bias = plane_pos.1 / norm_pos + sign * plane_neg.1 / norm_neg;
        candidates.push(ObliqueRouting::Bisector { weights, bias });
    }

    let mut best: Option<(f64, ObliqueRouting)> = None;
    for candidate in candidates {
        let ObliqueRouting::Bisector { weights, bias } = &candidate else {
            unreachable!()
        };
        let mut left = vec![0usize; n_classes];
        let mut right = vec![0usize; n_classes];
        for (row, &label) in rows.iter().zip(labels) {
            if dot(row, weights) - bias <= 0.0 {
                left[label] += 1;
            } else {
                right[label] += 1;
            }
        }
        let nl: usize = left.iter().sum();
        let nr: usize = right.iter().sum();
        if nl == 0 || nr == 0 {
            continue;
        }
        let impurity = weighted_children_gini(&left, &right);
        if best.as_ref().is_none_or(|(b, _)| impurity < *b) {
            best = Some((impurity, candidate));
        }
    }
    best.map(|(_, routing)| routing)
}

/// PCA rotation split: eigenvectors of the node's total scatter matrix
/// rotate the working sample, and the axis search runs in rotated space.
/// Columns of the stored rotation are ordered by descending variance.
pub fn pca_rotation_split(
    rows: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
    subset: &FeatureSubset,
) -> Result<Option<SplitOutcome>> {
    let m = rows[0].len();
    let n = rows.len();
    let mut mean = vec![0.0; m];
    for row in rows {
        for j in 0..m {
            mean[j] += row[j];
        }
    }
    for v in &mut mean {
        *v /= n as f64;
    }
    let mut scatter = DenseMatrix::zeros(m, m);
    for row in rows {
        for a in 0..m {
            let da = row[a] - mean[a];
            for b in a..m {
                scatter[(a, b)] += da * (row[b] - mean[b]);
            }
        }
    }
    for a in 0..m {
        for b in (a + 1)..m {
            scatter[(b, a)] = scatter[(a, b)];
        }
    }

    let pairs = sym_eig(&scatter)?;
    let mut rotation = DenseMatrix::zeros(m, m);
    for (j, pair) in pairs.iter().rev().enumerate() {
        for i in 0..m {
            rotation[(i, j)] = pair.vector[i];
        }
    }
    Ok(rotation_outcome(
        rows,
        labels,
        n_classes,
        subset,
        rotation,
        RotationKind::Pca,
    ))
}

/// LDA rotation split: generalized eigenvectors of the between/within class
/// scatter pencil, descending by eigenvalue. The within-class scatter gets a
/// Tikhonov bump when it fails Cholesky.
pub fn lda_rotation_split(
    rows: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
    subset: &FeatureSubset,
) -> Result<Option<SplitOutcome>> {
    let m = rows[0].len();
    let n = rows.len();
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_class.entry(l).or_default().push(i);
    }
    if by_class.len() < 2 {
        return Ok(None);
    }

    let mut overall = vec![0.0; m];
    for row in rows {
        for j in 0..m {
            overall[j] += row[j];
        }
    }
    for v in &mut overall {
        *v /= n as f64;
    }

    let mut within = DenseMatrix::zeros(m, m);
    let mut between = DenseMatrix::zeros(m, m);
    for members in by_class.values() {
        let count = members.len() as f64;
        let mut mu = vec![0.0; m];
        for &i in members {
            for j in 0..m {
                mu[j] += rows[i][j];
            }
        }
        for v in &mut mu {
            *v /= count;
        }
        for &i in members {
            for a in 0..m {
                let da = rows[i][a] - mu[a];
                for b in a..m {
                    within[(a, b)] += da * (rows[i][b] - mu[b]);
                }
            }
        }
        for a in 0..m {
            let da = mu[a] - overall[a];
            for b in a..m {
                between[(a, b)] += count * da * (mu[b] - overall[b]);
            }
        }
    }
    for a in 0..m {
        for b in (a + 1)..m {
            within[(b, a)] = within[(a, b)];
            between[(b, a)] = between[(a, b)];
        }
    }

    let within = if cholesky(&within).is_some() {
        within
    } else {
        let mut delta = TIKHONOV_DELTA_REL * within.trace() / m as f64;
        if delta <= 0.0 {
            delta = TIKHONOV_DELTA_REL * (between.trace() / m as f64).max(1e-12);
        }
        within.add_scaled_identity(delta)
    };

    let pairs = crate::linalg::generalized_eig(&between, &within)?;
    let mut rotation = DenseMatrix::zeros(m, m);
    for (j, pair) in pairs.iter().rev().enumerate() {
        for i in 0..m {
            rotation[(i, j)] = pair.vector[i];
        }
    }
    Ok(rotation_outcome(
        rows,
        labels,
        n_classes,
        subset,
        rotation,
        RotationKind::Lda,
    ))
}

fn rotation_outcome(
    rows: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
    subset: &FeatureSubset,
    rotation: DenseMatrix,
    kind: RotationKind,
) -> Option<SplitOutcome> {
    let m = rows[0].len();
    let rotated: Vec<Vec<f64>> = rows
        .iter()
        .map(|z| {
            (0..m)
                .map(|j| (0..m).map(|i| z[i] * rotation[(i, j)]).sum())
                .collect()
        })
        .collect();
    best_axis_candidate(&rotated, labels, n_classes).map(|c| SplitOutcome {
        rule: SplitRule::Rotation {
            feature_indices: subset.clone(),
            rotation,
            rotated_feature: c.column,
            threshold: c.threshold,
            kind,
        },
        impurity: c.impurity,
        left_count: c.left_count,
        right_count: c.right_count,
        fallback_used: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn subset(m: usize) -> FeatureSubset {
        FeatureSubset::new((0..m).collect())
    }

    fn gaussian_from_points(points: &[Vec<f64>]) -> ClassGaussian {
        let labels = vec![0; points.len()];
        class_gaussians(points, &labels, COV_REG_EPS)
            .remove(&0)
            .unwrap()
    }

    #[test]
    fn gini_hand_values() {
        assert_eq!(gini_impurity(&[5, 5]), 0.5);
        assert_eq!(gini_impurity(&[10, 0]), 0.0);
        assert!((gini_impurity(&[1, 2, 3]) - 11.0 / 18.0).abs() < 1e-12);
    }

    #[test]
    fn axis_split_separable_line() {
        let rows = vec![vec![1.0], vec![2.0], vec![3.0], vec![4.0]];
        let labels = vec![0, 0, 1, 1];
        let o = best_axis_split(&rows, &labels, 2, &subset(1)).unwrap();
        match o.rule {
            SplitRule::Axis { feature, threshold } => {
                assert_eq!(feature, 0);
                assert_eq!(threshold, 2.5);
            }
            ref other => panic!("unexpected rule {other:?}"),
        }
        assert_eq!(o.impurity, 0.0);
        assert_eq!((o.left_count, o.right_count), (2, 2));
    }

    #[test]
    fn axis_split_declines_constant_and_pure_nodes() {
        let rows = vec![vec![1.0, 7.0]; 6];
        let labels = vec![0, 1, 0, 1, 0, 1];
        assert!(best_axis_split(&rows, &labels, 2, &subset(2)).is_none());

        let rows = vec![vec![1.0], vec![2.0], vec![3.0]];
        assert!(best_axis_split(&rows, &[0, 0, 0], 2, &subset(1)).is_none());
    }

    fn brute_force_best(rows: &[Vec<f64>], labels: &[usize], n_classes: usize) -> Option<f64> {
        let distinct: std::collections::HashSet<usize> = labels.iter().copied().collect();
        if distinct.len() < 2 {
            return None;
        }
        let m = rows[0].len();
        let mut best: Option<f64> = None;
        for col in 0..m {
            let mut values: Vec<f64> = rows.iter().map(|r| r[col]).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            for w in values.windows(2) {
                let thr = w[0] + 0.5 * (w[1] - w[0]);
                let mut left = vec![0usize; n_classes];
                let mut right = vec![0usize; n_classes];
                for (row, &l) in rows.iter().zip(labels) {
                    if row[col] <= thr {
                        left[l] += 1;
                    } else {
                        right[l] += 1;
                    }
                }
                if left.iter().sum::<usize>() == 0 || right.iter().sum::<usize>() == 0 {
                    continue;
                }
                let g = weighted_children_gini(&left, &right);
                if best.is_none_or(|b| g < b) {
                    best = Some(g);
                }
            }
        }
        best
    }

    #[test]
    fn axis_split_matches_brute_force_on_random_nodes() {
        let mut rng = crate::data::stream(0xAC5);
        for _ in 0..100 {
            let n = rng.random_range(5..40);
            let m = rng.random_range(1..4usize);
            let n_classes = rng.random_range(2..4usize);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..m).map(|_| rng.random_range(0..6) as f64).collect())
                .collect();
            let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..n_classes)).collect();
            let fast = best_axis_split(&rows, &labels, n_classes, &subset(m));
            let brute = brute_force_best(&rows, &labels, n_classes);
            match (fast, brute) {
                (Some(f), Some(b)) => {
                    assert!(
                        (f.impurity - b).abs() < 1e-12,
                        "fast {} brute {b}",
                        f.impurity
                    )
                }
                (None, None) => {}
                (f, b) => panic!(
                    "disagreement: fast {:?} brute {:?}",
                    f.map(|o| o.impurity),
                    b
                ),
            }
        }
    }

    proptest! {
        #[test]
        fn axis_split_never_beats_or_misses_brute_force(
            n in 2usize..=200,
            m in 1usize..=8,
            seed in 0u64..1000,
        ) {
            let mut rng = crate::data::stream(seed);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..m).map(|_| rng.random_range(-3..4) as f64).collect())
                .collect();
            let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..3usize)).collect();
            let fast = best_axis_split(&rows, &labels, 3, &subset(m)).map(|o| o.impurity);
            let brute = brute_force_best(&rows, &labels, 3);
            match (fast, brute) {
                (Some(f), Some(b)) => prop_assert!((f - b).abs() < 1e-12),
                (None, None) => {},
                _ => prop_assert!(false, "one side found a split the other missed"),
            }
        }

        #[test]
        fn children_never_dirtier_than_parent(n in 4usize..50, seed in 0u64..500) {
            let mut rng = crate::data::stream(seed.wrapping_add(0xDAD));
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| vec![rng.random_range(-5..6) as f64, rng.random_range(-5..6) as f64])
                .collect();
            let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..2usize)).collect();
            let mut counts = vec![0usize; 2];
            for &l in &labels {
                counts[l] += 1;
            }
            if let Some(o) = best_axis_split(&rows, &labels, 2, &subset(2)) {
                prop_assert!(o.impurity <= gini_impurity(&counts) + 1e-12);
                prop_assert_eq!(o.left_count + o.right_count, n);
            }
        }
    }

    #[test]
    fn gaussian_estimates_match_hand_covariance() {
        let g = gaussian_from_points(&[vec![0.0, 0.0], vec![2.0, 0.0]]);
        assert_eq!(g.mean, vec![1.0, 0.0]);
        let eps = COV_REG_EPS * 1.0; // mean diagonal of [[2,0],[0,0]] is 1
        assert!((g.covariance[(0, 0)] - (2.0 + eps)).abs() < 1e-15);
        assert!((g.covariance[(1, 1)] - eps).abs() < 1e-15);
        assert_eq!(g.covariance[(0, 1)], 0.0);
    }

    #[test]
    fn gaussian_singletons_and_duplicates_get_scaled_identity() {
        let singleton = gaussian_from_points(&[vec![3.0, -1.0]]);
        for i in 0..2 {
            assert!((singleton.covariance[(i, i)] - COV_REG_EPS).abs() < 1e-18);
        }
        let duplicates = gaussian_from_points(&vec![vec![3.0, -1.0]; 4]);
        for i in 0..2 {
            assert!((duplicates.covariance[(i, i)] - COV_REG_EPS).abs() < 1e-18);
        }
    }

    fn gaussian_1d(mean: f64, var: f64) -> ClassGaussian {
        ClassGaussian {
            mean: vec![mean],
            covariance: DenseMatrix::from_rows(&[vec![var]]),
            count: 10,
        }
    }

    #[test]
    fn bhattacharyya_hand_cases() {
        let g = gaussian_1d(0.0, 1.0);
        assert!(bhattacharyya(&g, &g).unwrap().abs() < 1e-14);

        let a = gaussian_1d(0.0, 1.0);
        let b = gaussian_1d(2.0, 1.0);
        assert!((bhattacharyya(&a, &b).unwrap() - 0.5).abs() < 1e-10);

        let c = gaussian_1d(0.0, 1.0);
        let d = gaussian_1d(0.0, 9.0);
        let want = 0.5 * (5.0_f64 / 3.0).ln();
        assert!((bhattacharyya(&c, &d).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn bhattacharyya_is_symmetric_and_nonnegative() {
        let mut rng = crate::data::stream(0xBAA);
        for _ in 0..100 {
            let a = gaussian_1d(rng.random_range(-3.0..3.0), rng.random_range(0.1..4.0));
            let b = gaussian_1d(rng.random_range(-3.0..3.0), rng.random_range(0.1..4.0));
            let ab = bhattacharyya(&a, &b).unwrap();
            let ba = bhattacharyya(&b, &a).unwrap();
            assert!((ab - ba).abs() < 1e-10);
            assert!(ab >= -1e-12);
        }
    }

    #[test]
    fn grouping_passthrough_and_three_clusters() {
        let two: BTreeMap<usize, ClassGaussian> =
            [(0, gaussian_1d(0.0, 1.0)), (1, gaussian_1d(5.0, 1.0))].into();
        let g = group_classes(&two).unwrap();
        assert_eq!(g.positive_classes, vec![0]);
        assert_eq!(g.negative_classes, vec![1]);

        let three: BTreeMap<usize, ClassGaussian> = [
            (0, gaussian_1d(0.0, 1e-4)),
            (1, gaussian_1d(2.0, 1e-4)),
            (2, gaussian_1d(10.0, 1e-4)),
        ]
        .into();
        let g = group_classes(&three).unwrap();
        assert_eq!(g.positive_classes, vec![0, 1]);
        assert_eq!(g.negative_classes, vec![2]);

        let single: BTreeMap<usize, ClassGaussian> = [(3, gaussian_1d(0.0, 1.0))].into();
        assert!(matches!(group_classes(&single), Err(Error::SingleClass)));
    }

    #[test]
    fn grouping_ties_pick_lowest_indexed_pair() {
        // Equidistant symmetric clusters: distances (0,1), (1,2) and (0,2)
        // with (0,2) maximal; construct a tie between (0,1) and (1,2) being
        // irrelevant — the max pair is unique here, so instead place four
        // classes at corners where two pairs tie for the diameter.
        let gaussians: BTreeMap<usize, ClassGaussian> = [
            (0, gaussian_1d(0.0, 1.0)),
            (1, gaussian_1d(4.0, 1.0)),
            (2, gaussian_1d(1.0, 1.0)),
            (3, gaussian_1d(5.0, 1.0)),
        ]
        .into();
        // Pairs (0,1) and (2,3) both span distance 4; (0,3) spans 5 and wins.
        // Shrink to a genuine tie: classes at 0, 4 and 0, 4 duplicated.
        let g = group_classes(&gaussians).unwrap();
        // Diameter pair is (0, 3); class 2 (at 1.0) is nearer seed 0,
        // class 1 (at 4.0) is nearer seed 3.
        assert_eq!(g.positive_classes, vec![0, 2]);
        assert_eq!(g.negative_classes, vec![1, 3]);

        let tied: BTreeMap<usize, ClassGaussian> = [
            (0, gaussian_1d(0.0, 1.0)),
            (1, gaussian_1d(4.0, 1.0)),
            (2, gaussian_1d(4.0, 1.0)),
        ]
        .into();
        // (0,1) and (0,2) tie at the diameter; the lower-indexed pair seeds,
        // and class 2 (at distance 0 from seed 1) joins the negative group.
        let g = group_classes(&tied).unwrap();
        assert_eq!(g.positive_classes, vec![0]);
        assert_eq!(g.negative_classes, vec![1, 2]);
    }

    fn two_strip_fixture() -> (Vec<Vec<f64>>, Vec<usize>) {
        let rows = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ];
        let labels = vec![0, 0, 1, 1];
        (rows, labels)
    }

    #[test]
    fn mpsvm_recovers_the_two_strips() {
        let (rows, labels) = two_strip_fixture();
        let grouping = BinaryGrouping {
            positive_classes: vec![0],
            negative_classes: vec![1],
        };
        for (reg, tol) in [
            // The Tikhonov bump (delta = 1e-4 trace/dim on these singular
            // Grams) tilts the exact planes by O(delta).
            (MpsvmRegularization::Tikhonov, 1e-3),
            (MpsvmRegularization::NullSpace, 1e-8),
        ] {
            let o = mpsvm_split(
                &rows,
                &labels,
                2,
                &subset(2),
                &grouping,
                reg,
                RoutingMode::Proximity,
            )
            .unwrap()
            .unwrap();
            assert!(!o.fallback_used, "{reg:?} fell back");
            assert_eq!(o.impurity, 0.0, "{reg:?} impure children");
            assert_eq!((o.left_count, o.right_count), (2, 2));
            let SplitRule::Oblique {
                plane_pos,
                plane_neg,
                ..
            } = &o.rule
            else {
                panic!("expected oblique rule");
            };
            // Stored plane vectors are unit-norm (w and b jointly).
            for (w, b) in [plane_pos, plane_neg] {
                let norm = (w.iter().map(|x| x * x).sum::<f64>() + b * b).sqrt();
                assert!((norm - 1.0).abs() < 1e-10);
            }
            // Plane 1 hugs y = 0: w ~ (0, 1), b ~ 0.
            assert!(plane_pos.0[0].abs() < tol);
            assert!(plane_pos.0[1].abs() > 0.99);
            assert!(plane_pos.1.abs() < tol);
            // Plane 2 hugs y = 1: w ~ (0, c), b ~ c.
            assert!(plane_neg.0[0].abs() < tol);
            assert!((plane_neg.0[1] - plane_neg.1).abs() < tol);
            // Routing sends each strip to its own side.
            for (row, &label) in rows.iter().zip(&labels) {
                assert_eq!(o.rule.route(row), label == 0);
            }
        }
    }

    #[test]
    fn mpsvm_axis_parallel_mode_falls_back_on_rank_deficiency() {
        let (rows, labels) = two_strip_fixture();
        // Two points per group in 3-D augmented space: both Gram matrices are
        // rank deficient, so the -P flavor must switch to the axis search.
        let grouping = BinaryGrouping {
            positive_classes: vec![0],
            negative_classes: vec![1],
        };
        let o = mpsvm_split(
            &rows,
            &labels,
            2,
            &subset(2),
            &grouping,
            MpsvmRegularization::AxisParallel,
            RoutingMode::Proximity,
        )
        .unwrap()
        .unwrap();
        assert!(o.fallback_used);
        assert!(matches!(o.rule, SplitRule::Axis { .. }));
        assert_eq!(o.impurity, 0.0);
    }

    #[test]
    fn mpsvm_tikhonov_sweep_keeps_children_no_dirtier_than_parent() {
        let mut rng = crate::data::stream(0x5EED5);
        // Few samples in 4 features force rank deficiency so the bump fires;
        // no delta across six decades may produce pathological children.
        for _ in 0..20 {
            let rows: Vec<Vec<f64>> = (0..6)
                .map(|i| {
                    let shift = if i % 2 == 0 { 0.0 } else { 3.0 };
                    (0..4)
                        .map(|_| rng.random_range(-1.0..1.0) + shift)
                        .collect()
                })
                .collect();
            let labels: Vec<usize> = (0..6).map(|i| i % 2).collect();
            let positive: Vec<usize> = (0..6).step_by(2).collect();
            let negative: Vec<usize> = (1..6).step_by(2).collect();
            let p = augmented_gram(&rows, &positive);
            let q = augmented_gram(&rows, &negative);
            assert!(cholesky(&p).is_none() && cholesky(&q).is_none());
            let parent = gini_impurity(&[3, 3]);
            for delta_rel in [1e-8, 1e-6, 1e-4, 1e-2] {
                let (lo, hi) = crate::linalg::solve_generalized_rayleigh(
                    &p,
                    &q,
                    Regularization::Tikhonov { delta_rel },
                )
                .unwrap();
                let plane_pos = (lo.vector[..4].to_vec(), lo.vector[4]);
                let plane_neg = (hi.vector[..4].to_vec(), hi.vector[4]);
                let mut left = vec![0usize; 2];
                let mut right = vec![0usize; 2];
                for (row, &label) in rows.iter().zip(&labels) {
                    if plane_distance(row, &plane_pos) <= plane_distance(row, &plane_neg) {
                        left[label] += 1;
                    } else {
                        right[label] += 1;
                    }
                }
                let nl: usize = left.iter().sum();
                if nl == 0 || nl == 6 {
                    continue; // one-sided routing falls back to the axis search
                }
                let impurity = weighted_children_gini(&left, &right);
                assert!(
                    impurity <= parent + 1e-12,
                    "delta_rel {delta_rel}: {impurity} > parent {parent}"
                );
            }
        }
    }

    #[test]
    fn mpsvm_bisector_routing_stores_a_separating_bisector() {
        let (rows, labels) = two_strip_fixture();
        let grouping = BinaryGrouping {
            positive_classes: vec![0],
            negative_classes: vec![1],
        };
        let o = mpsvm_split(
            &rows,
            &labels,
            2,
            &subset(2),
            &grouping,
            MpsvmRegularization::Tikhonov,
            RoutingMode::Bisector,
        )
        .unwrap()
        .unwrap();
        if let SplitRule::Oblique { routing, .. } = &o.rule {
            assert!(matches!(routing, ObliqueRouting::Bisector { .. }));
        } else {
            panic!("expected oblique rule");
        }
        assert_eq!(o.impurity, 0.0);
    }

    #[test]
    fn pca_rotation_matches_axis_search_when_already_aligned() {
        let rows = vec![
            vec![0.0, 5.0],
            vec![1.0, 5.0],
            vec![4.0, 5.0],
            vec![5.0, 5.0],
        ];
        let labels = vec![0, 0, 1, 1];
        let rotated = pca_rotation_split(&rows, &labels, 2, &subset(2))
            .unwrap()
            .unwrap();
        let plain = best_axis_split(&rows, &labels, 2, &subset(2)).unwrap();
        assert!((rotated.impurity - plain.impurity).abs() < 1e-12);
    }

    #[test]
    fn pca_rotation_solves_diagonal_clusters() {
        // Clusters {(t, t)} and {(t, t + 2)} with t spanning far more than
        // the offset, so the scatter is dominated by the (1, 1) ridge.
        let rows: Vec<Vec<f64>> = (0..100)
            .map(|i| {
                let t = (i / 2) as f64;
                if i % 2 == 0 {
                    vec![t, t]
                } else {
                    vec![t, t + 2.0]
                }
            })
            .collect();
        let labels: Vec<usize> = (0..100).map(|i| i % 2).collect();
        let o = pca_rotation_split(&rows, &labels, 2, &subset(2))
            .unwrap()
            .unwrap();
        assert_eq!(o.impurity, 0.0);
        let SplitRule::Rotation {
            rotation,
            rotated_feature,
            ..
        } = &o.rule
        else {
            panic!("expected rotation rule");
        };
        // Leading principal axis lies along (1, 1); the split uses the
        // second rotated coordinate.
        let lead = rotation.column(0);
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        let cosine = (lead[0] * inv_sqrt2 + lead[1] * inv_sqrt2).abs();
        assert!(cosine >= 0.999, "cosine {cosine}");
        assert_eq!(*rotated_feature, 1);
        // The rotated coordinate separates the clusters deterministically.
        let left_of_first = o.rule.route(&rows[0]);
        for (row, &label) in rows.iter().zip(&labels) {
            assert_eq!(o.rule.route(row), (label == 0) == left_of_first);
        }
    }

    #[test]
    fn pca_rotation_is_an_isometry() {
        let mut rng = crate::data::stream(0x150);
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|_| (0..3).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let labels: Vec<usize> = (0..20).map(|i| i % 2).collect();
        let o = pca_rotation_split(&rows, &labels, 2, &subset(3))
            .unwrap()
            .unwrap();
        let SplitRule::Rotation { rotation, .. } = &o.rule else {
            panic!("expected rotation rule");
        };
        let rotate = |z: &[f64]| -> Vec<f64> {
            (0..3)
                .map(|j| (0..3).map(|i| z[i] * rotation[(i, j)]).sum())
                .collect()
        };
        for a in 0..rows.len() {
            for b in (a + 1)..rows.len() {
                let d_orig: f64 = rows[a]
                    .iter()
                    .zip(&rows[b])
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt();
                let ra = rotate(&rows[a]);
                let rb = rotate(&rows[b]);
                let d_rot: f64 = ra
                    .iter()
                    .zip(&rb)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt();
                assert!((d_orig - d_rot).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn pca_rotation_declines_constant_data() {
        let rows = vec![vec![1.0, 2.0]; 5];
        let labels = vec![0, 1, 0, 1, 0];
        assert!(pca_rotation_split(&rows, &labels, 2, &subset(2))
            .unwrap()
            .is_none());
    }

    #[test]
    fn lda_leading_direction_tracks_the_fisher_direction() {
        let mut rng = crate::data::stream(0x1DA);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..60 {
            let class = i % 2;
            let center = if class == 0 { -2.0 } else { 2.0 };
            rows.push(vec![
                center + 0.5 * crate::synth::normal(&mut rng),
                0.5 * crate::synth::normal(&mut rng),
            ]);
            labels.push(class);
        }
        let o = lda_rotation_split(&rows, &labels, 2, &subset(2))
            .unwrap()
            .unwrap();
        let SplitRule::Rotation { rotation, kind, .. } = &o.rule else {
            panic!("expected rotation rule");
        };
        assert_eq!(*kind, RotationKind::Lda);
        let lead = rotation.column(0);
        // Mean difference is along e1 and the noise is isotropic, so the
        // Fisher direction is e1 too.
        let cosine = lead[0].abs() / (lead[0] * lead[0] + lead[1] * lead[1]).sqrt();
        assert!(cosine >= 0.99, "cosine {cosine}");
    }

    #[test]
    fn lda_single_feature_reduces_to_axis_split() {
        let rows = vec![vec![0.0], vec![1.0], vec![4.0], vec![5.0]];
        let labels = vec![0, 0, 1, 1];
        let o = lda_rotation_split(&rows, &labels, 2, &subset(1))
            .unwrap()
            .unwrap();
        let SplitRule::Rotation { rotation, .. } = &o.rule else {
            panic!("expected rotation rule");
        };
        assert_eq!(rotation.rows(), 1);
        assert!((rotation[(0, 0)].abs() - 1.0).abs() < 1e-12);
        assert_eq!(o.impurity, 0.0);
    }

    #[test]
    fn lda_pencil_rank_is_bounded_by_class_count() {
        let mut rng = crate::data::stream(0xC1A);
        let n_classes = 3;
        let m = 5;
        let rows: Vec<Vec<f64>> = (0..90)
            .map(|i| {
                let class = i % n_classes;
                (0..m)
                    .map(|j| {
                        let shift = if j == class { 4.0 } else { 0.0 };
                        shift + rng.random_range(-0.5..0.5)
                    })
                    .collect()
            })
            .collect();
        let labels: Vec<usize> = (0..90).map(|i| i % n_classes).collect();

        let (between, within) = scatter_matrices(&rows, &labels);
        let pairs = crate::linalg::generalized_eig(&between, &within).unwrap();
        let lambda_max = pairs.last().unwrap().value;
        let positive = pairs.iter().filter(|p| p.value > 1e-8 * lambda_max).count();
        assert!(
            positive < n_classes,
            "rank {positive} not under {n_classes}"
        );
        // Generalized eigenpair residual: |S_b v - lambda S_w v| small
        // relative to |S_b|.
        for pair in &pairs {
            let bv = between.matvec(&pair.vector);
            let wv = within.matvec(&pair.vector);
            let res: f64 = bv
                .iter()
                .zip(&wv)
                .map(|(a, b)| (a - pair.value * b).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-6 * between.fro_norm());
        }
    }

    fn scatter_matrices(rows: &[Vec<f64>], labels: &[usize]) -> (DenseMatrix, DenseMatrix) {
        let m = rows[0].len();
        let n = rows.len();
        let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            by_class.entry(l).or_default().push(i);
        }
        let mut overall = vec![0.0; m];
        for row in rows {
            for j in 0..m {
                overall[j] += row[j] / n as f64;
            }
        }
        let mut within = DenseMatrix::zeros(m, m);
        let mut between = DenseMatrix::zeros(m, m);
        for members in by_class.values() {
            let count = members.len() as f64;
            let mut mu = vec![0.0; m];
            for &i in members {
                for j in 0..m {
                    mu[j] += rows[i][j] / count;
                }
            }
            for &i in members {
                for a in 0..m {
                    for b in 0..m {
                        within[(a, b)] += (rows[i][a] - mu[a]) * (rows[i][b] - mu[b]);
                    }
                }
            }
            for a in 0..m {
                for b in 0..m {
                    between[(a, b)] += count * (mu[a] - overall[a]) * (mu[b] - overall[b]);
                }
            }
        }
        (between, within)
    }
}
