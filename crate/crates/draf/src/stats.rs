//! Cross-model comparison statistics: the Friedman rank test, the Nemenyi
//! post-hoc critical difference, and the win-tie-loss sign test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-dataset ranks of competing models (fractional on ties) and their
/// column means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub model_names: Vec<String>,
    /// `ranks[dataset][model]`, each row summing to K(K+1)/2.
    pub ranks: Vec<Vec<f64>>,
    pub avg_ranks: Vec<f64>,
}

/// Ranks an N-datasets x K-models score table. With `higher_is_better`,
/// rank 1 goes to the best score; ties receive average ranks.
pub fn rank_accuracies(
    model_names: &[String],
    table: &[Vec<f64>],
    higher_is_better: bool,
) -> Result<RankTable> {
    let k = model_names.len();
    let n = table.len();
    if k < 2 || n < 1 {
        return Err(Error::invalid("ranking needs at least 2 models and 1 row"));
    }
    let mut ranks = Vec::with_capacity(n);
    for (i, row) in table.iter().enumerate() {
        if row.len() != k {
            return Err(Error::invalid(format!(
                "row {} has {} scores for {k} models",
                i + 1,
                row.len()
            )));
        }
        ranks.push(rank_row(row, higher_is_better));
    }
    let avg_ranks: Vec<f64> = (0..k)
        .map(|j| ranks.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    Ok(RankTable {
        model_names: model_names.to_vec(),
        ranks,
        avg_ranks,
    })
}

fn rank_row(row: &[f64], higher_is_better: bool) -> Vec<f64> {
    let k = row.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        if higher_is_better {
            row[b].total_cmp(&row[a])
        } else {
            row[a].total_cmp(&row[b])
        }
    });
    let mut ranks = vec![0.0; k];
    let mut at = 0;
    while at < k {
        let mut end = at + 1;
        while end < k && row[order[end]] == row[order[at]] {
            end += 1;
        }
        // Positions at..end share the average of ranks at+1 ..= end.
        let avg = (at + 1 + end) as f64 / 2.0;
        for &idx in &order[at..end] {
            ranks[idx] = avg;
        }
        at = end;
    }
    ranks
}

/// Friedman omnibus statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedmanStats {
    pub chi2_f: f64,
    pub f_f: f64,
    pub df1: usize,
    pub df2: usize,
    pub n_datasets: usize,
    pub n_models: usize,
}

/// Friedman statistics straight from average ranks:
/// `chi2_F = 12N/(K(K+1)) [sum R_j^2 - K(K+1)^2/4]` and the less
/// conservative `F_F = (N-1) chi2_F / (N(K-1) - chi2_F)`.
pub fn friedman_from_mean_ranks(avg_ranks: &[f64], n_datasets: usize) -> Result<FriedmanStats> {
    let k = avg_ranks.len();
    if k < 2 || n_datasets < 2 {
        return Err(Error::invalid(
            "friedman needs at least 2 models and 2 datasets",
        ));
    }
    let kf = k as f64;
    let nf = n_datasets as f64;
    let sum_sq: f64 = avg_ranks.iter().map(|r| r * r).sum();
    let chi2_f = 12.0 * nf / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0) * (kf + 1.0) / 4.0);
    let denom = nf * (kf - 1.0) - chi2_f;
    if denom.abs() < 1e-9 {
        return Err(Error::DegenerateFriedman);
    }
    let f_f = (nf - 1.0) * chi2_f / denom;
    Ok(FriedmanStats {
        chi2_f,
        f_f,
        df1: k - 1,
        df2: (k - 1) * (n_datasets - 1),
        n_datasets,
        n_models: k,
    })
}

pub fn friedman(table: &RankTable) -> Result<FriedmanStats> {
    friedman_from_mean_ranks(&table.avg_ranks, table.ranks.len())
}

/// Nemenyi critical difference `q_alpha * sqrt(K(K+1) / (6N))`.
pub fn nemenyi_cd(k: usize, n: usize, q_alpha: f64) -> f64 {
    let kf = k as f64;
    q_alpha * (kf * (kf + 1.0) / (6.0 * n as f64)).sqrt()
}

/// Studentized-range-over-sqrt(2) critical values at alpha = 0.05 for
/// K = 2..=20 models.
pub fn q_alpha_05(k: usize) -> Option<f64> {
    const TABLE: [f64; 19] = [
        1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164, 3.219, 3.268, 3.313, 3.354,
        3.391, 3.426, 3.458, 3.489, 3.517, 3.544,
    ];
    if (2..=20).contains(&k) {
        Some(TABLE[k - 2])
    } else {
        None
    }
}

/// Omnibus + post-hoc report: Friedman statistics, the critical difference,
/// and the pairwise significance matrix `|R_i - R_j| >= CD`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub chi2_f: f64,
    pub f_f: f64,
    pub df1: usize,
    pub df2: usize,
    pub n_datasets: usize,
    pub q_alpha: f64,
    pub cd: f64,
    pub model_names: Vec<String>,
    pub avg_ranks: Vec<f64>,
    pub pairwise_significant: Vec<Vec<bool>>,
}

pub fn test_report(table: &RankTable, q_alpha: Option<f64>) -> Result<TestReport> {
    report_from_mean_ranks(
        &table.model_names,
        &table.avg_ranks,
        table.ranks.len(),
        q_alpha,
    )
}

pub fn report_from_mean_ranks(
    model_names: &[String],
    avg_ranks: &[f64],
    n_datasets: usize,
    q_alpha: Option<f64>,
) -> Result<TestReport> {
    let stats = friedman_from_mean_ranks(avg_ranks, n_datasets)?;
    let k = avg_ranks.len();
    let q = match q_alpha {
        Some(q) => q,
        None => q_alpha_05(k).ok_or_else(|| {
            Error::invalid(format!(
                "no built-in q value for K={k}; pass one explicitly"
            ))
        })?,
    };
    let cd = nemenyi_cd(k, n_datasets, q);
    let pairwise_significant: Vec<Vec<bool>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| i != j && (avg_ranks[i] - avg_ranks[j]).abs() >= cd)
                .collect()
        })
        .collect();
    Ok(TestReport {
        chi2_f: stats.chi2_f,
        f_f: stats.f_f,
        df1: stats.df1,
        df2: stats.df2,
        n_datasets,
        q_alpha: q,
        cd,
        model_names: model_names.to_vec(),
        avg_ranks: avg_ranks.to_vec(),
        pairwise_significant,
    })
}

/// Sign-test verdict for a row model against a column model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignVerdict {
    RowBetter,
    ColumnBetter,
    NoDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignTestReport {
    pub n: usize,
    pub adjusted_wins: usize,
    pub adjusted_losses: usize,
    /// `N/2 + z * sqrt(N)/2`; a side at or above it is significantly better.
    pub threshold: f64,
    pub verdict: SignVerdict,
}

/// Win-tie-loss sign test: ties split evenly between the sides (one dropped
/// when odd), and a side wins significantly when its adjusted count reaches
/// `N/2 + z_alpha sqrt(N)/2` with N the full comparison count.
pub fn sign_test(wins: usize, ties: usize, losses: usize, alpha: f64) -> Result<SignTestReport> {
    let n = wins + ties + losses;
    if n == 0 {
        return Err(Error::invalid("sign test over zero comparisons"));
    }
    let z = z_for_alpha(alpha)?;
    let half_ties = ties / 2;
    let adjusted_wins = wins + half_ties;
    let adjusted_losses = losses + half_ties;
    let nf = n as f64;
    let threshold = nf / 2.0 + z * nf.sqrt() / 2.0;
    let verdict = if adjusted_wins as f64 >= threshold {
        SignVerdict::RowBetter
    } else if adjusted_losses as f64 >= threshold {
        SignVerdict::ColumnBetter
    } else {
        SignVerdict::NoDifference
    };
    Ok(SignTestReport {
        n,
        adjusted_wins,
        adjusted_losses,
        threshold,
        verdict,
    })
}

/// Two-sided normal critical values for the supported significance levels.
fn z_for_alpha(alpha: f64) -> Result<f64> {
    for (a, z) in [(0.10, 1.645), (0.05, 1.96), (0.01, 2.576)] {
        if (alpha - a).abs() < 1e-12 {
            return Ok(z);
        }
    }
    Err(Error::invalid(format!(
        "unsupported alpha {alpha}; use 0.10, 0.05 or 0.01"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("m{i}")).collect()
    }

    #[test]
    fn ranking_hand_rows() {
        let t = rank_accuracies(&names(3), &[vec![0.9, 0.8, 0.7]], true).unwrap();
        assert_eq!(t.ranks[0], vec![1.0, 2.0, 3.0]);

        let t = rank_accuracies(&names(3), &[vec![0.9, 0.9, 0.7]], true).unwrap();
        assert_eq!(t.ranks[0], vec![1.5, 1.5, 3.0]);

        // Lower-is-better flips the order (bias/variance tables).
        let t = rank_accuracies(&names(3), &[vec![0.9, 0.8, 0.7]], false).unwrap();
        assert_eq!(t.ranks[0], vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn rank_rows_conserve_their_sum() {
        let mut rng = crate::data::stream(0x4A4);
        use rand::Rng;
        for _ in 0..50 {
            let k = rng.random_range(2..8);
            let row: Vec<f64> = (0..k)
                .map(|_| rng.random_range(0..5) as f64 / 4.0)
                .collect();
            let t = rank_accuracies(&names(k), &[row], true).unwrap();
            let sum: f64 = t.ranks[0].iter().sum();
            let want = (k * (k + 1)) as f64 / 2.0;
            assert!((sum - want).abs() < 1e-9);
        }
    }

    /// Published twelve-model mean ranks over 121 comparisons.
    pub const PUBLISHED_ACCURACY_RANKS: [f64; 12] = [
        6.99, 6.81, 6.48, 8.0, 7.31, 6.12, 6.27, 6.38, 5.45, 7.3, 5.84, 5.04,
    ];

    #[test]
    fn friedman_reproduces_published_statistics() {
        let stats = friedman_from_mean_ranks(&PUBLISHED_ACCURACY_RANKS, 121).unwrap();
        assert!(
            (stats.chi2_f - 71.0559).abs() < 5e-3,
            "chi2 {}",
            stats.chi2_f
        );
        assert!((stats.f_f - 6.7675).abs() < 5e-3, "f {}", stats.f_f);
        assert_eq!((stats.df1, stats.df2), (11, 1320));
    }

    #[test]
    fn friedman_of_equal_ranks_is_zero() {
        // All models tie on every dataset: every rank is (K+1)/2.
        let stats = friedman_from_mean_ranks(&[2.0; 3], 10).unwrap();
        assert!(stats.chi2_f.abs() < 1e-9);
        assert_eq!(stats.f_f, 0.0);
    }

    #[test]
    fn friedman_perfectly_consistent_rankings_are_degenerate() {
        // Identical orderings on every dataset drive chi2 to N(K-1).
        let table = rank_accuracies(&names(2), &[vec![0.9, 0.1], vec![0.8, 0.2]], true).unwrap();
        assert!(matches!(friedman(&table), Err(Error::DegenerateFriedman)));
    }

    #[test]
    fn friedman_is_invariant_under_consistent_relabeling() {
        let rows = vec![
            vec![0.9, 0.7, 0.8],
            vec![0.6, 0.65, 0.7],
            vec![0.55, 0.9, 0.55],
            vec![0.7, 0.6, 0.9],
        ];
        let base = friedman(&rank_accuracies(&names(3), &rows, true).unwrap()).unwrap();
        let swapped: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[2], r[0], r[1]]).collect();
        let moved = friedman(&rank_accuracies(&names(3), &swapped, true).unwrap()).unwrap();
        assert!((base.chi2_f - moved.chi2_f).abs() < 1e-12);
        assert!((base.f_f - moved.f_f).abs() < 1e-12);
    }

    #[test]
    fn nemenyi_reproduces_published_cd_and_hand_case() {
        assert!((nemenyi_cd(12, 121, 3.268) - 1.5149).abs() < 1e-4);
        let hand = nemenyi_cd(2, 6, 12.0_f64.sqrt());
        assert!((hand - 2.0_f64.sqrt()).abs() < 1e-12);
        // CD shrinks with more datasets.
        let mut last = f64::INFINITY;
        for n in [10, 50, 121, 500] {
            let cd = nemenyi_cd(12, n, 3.268);
            assert!(cd < last);
            last = cd;
        }
        assert_eq!(q_alpha_05(12), Some(3.268));
        assert_eq!(q_alpha_05(1), None);
    }

    #[test]
    fn report_builds_symmetric_pairwise_matrix() {
        let report =
            report_from_mean_ranks(&names(12), &PUBLISHED_ACCURACY_RANKS, 121, None).unwrap();
        assert!((report.cd - 1.5149).abs() < 1e-3);
        for i in 0..12 {
            assert!(!report.pairwise_significant[i][i]);
            for j in 0..12 {
                assert_eq!(
                    report.pairwise_significant[i][j],
                    report.pairwise_significant[j][i]
                );
            }
        }
        // Best (5.04) vs worst (8.0) differ by 2.96 >= CD.
        assert!(report.pairwise_significant[11][3]);
        // 6.99 vs 6.81 differ by 0.18 < CD.
        assert!(!report.pairwise_significant[0][1]);
    }

    #[test]
    fn sign_test_reproduces_published_threshold_and_verdicts() {
        let report = sign_test(69, 11, 41, 0.05).unwrap();
        assert!((report.threshold - 71.28).abs() < 1e-9);
        assert_eq!(report.adjusted_wins, 74);
        assert_eq!(report.verdict, SignVerdict::RowBetter);

        let report = sign_test(56, 14, 51, 0.05).unwrap();
        assert_eq!(report.verdict, SignVerdict::NoDifference);

        let report = sign_test(60, 0, 60, 0.05).unwrap();
        assert_eq!(report.verdict, SignVerdict::NoDifference);

        let report = sign_test(41, 11, 69, 0.05).unwrap();
        assert_eq!(report.verdict, SignVerdict::ColumnBetter);
    }

    #[test]
    fn sign_test_sides_are_never_both_significant() {
        use rand::Rng;
        let mut rng = crate::data::stream(0x51);
        for _ in 0..200 {
            let w = rng.random_range(0..80);
            let t = rng.random_range(0..20);
            let l = rng.random_range(0..80);
            if w + t + l == 0 {
                continue;
            }
            let a = sign_test(w, t, l, 0.05).unwrap();
            let b = sign_test(l, t, w, 0.05).unwrap();
            let both = a.verdict == SignVerdict::RowBetter && b.verdict == SignVerdict::RowBetter;
            assert!(!both, "w={w} t={t} l={l}");
        }
        assert!(sign_test(1, 0, 0, 0.03).is_err());
    }
}
