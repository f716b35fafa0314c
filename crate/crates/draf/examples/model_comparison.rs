//! Rank-based comparison of several variants over the fixture suite: build
//! the accuracy matrix, run the Friedman omnibus test, derive the Nemenyi
//! critical difference, and finish with pairwise sign tests.
//!
//! Run with: `cargo run --release --example model_comparison`

use draf::forest::{train_forest, ForestConfig};
use draf::stats::{rank_accuracies, sign_test, test_report, SignVerdict};
use draf::synth;
use draf::tree::Variant;

fn main() {
    let variants = [
        Variant::Raf,
        Variant::Draf,
        Variant::MpDrafT,
        Variant::MpDrafP,
        Variant::DrafPca,
        Variant::DrafLda,
    ];
    let names: Vec<String> = variants.iter().map(|v| v.name().to_string()).collect();

    // Accuracy matrix: one row per fixture, one column per variant.
    let mut matrix: Vec<Vec<f64>> = Vec::new();
    println!("accuracy matrix (rows = fixtures):");
    print!("{:10}", "");
    for name in &names {
        print!(" {name:>9}");
    }
    println!();
    for (fixture, data) in synth::standard_fixtures() {
        let (train, test) = synth::split_train_test(&data, 0.3, 17);
        let row: Vec<f64> = variants
            .iter()
            .map(|&v| {
                let config = ForestConfig::new(v).with_trees(50).with_seed(23);
                train_forest(&train, &config)
                    .unwrap()
                    .evaluate(&test)
                    .unwrap()
                    .accuracy
            })
            .collect();
        print!("{fixture:10}");
        for value in &row {
            print!(" {value:>9.4}");
        }
        println!();
        matrix.push(row);
    }

    // Friedman + Nemenyi.
    let table = rank_accuracies(&names, &matrix, true).unwrap();
    match test_report(&table, None) {
        Ok(report) => {
            println!("\naverage ranks (lower is better):");
            for (name, rank) in report.model_names.iter().zip(&report.avg_ranks) {
                println!("  {name:10} {rank:.3}");
            }
            println!(
                "chi2_F = {:.4}, F_F = {:.4}, df = ({}, {}), CD = {:.4} at q = {:.3}",
                report.chi2_f, report.f_f, report.df1, report.df2, report.cd, report.q_alpha
            );
            for i in 0..names.len() {
                for j in (i + 1)..names.len() {
                    if report.pairwise_significant[i][j] {
                        println!("  {} vs {}: rank gap beyond CD", names[i], names[j]);
                    }
                }
            }
        }
        Err(e) => println!("\nfriedman test degenerate on this tiny grid: {e}"),
    }

    // Sign test between the top double variant and plain raf, counting
    // per-fixture wins.
    let (mut wins, mut ties, mut losses) = (0, 0, 0);
    for row in &matrix {
        let raf = row[0];
        let challenger = row[5]; // draf-lda column
        if challenger > raf {
            wins += 1;
        } else if challenger < raf {
            losses += 1;
        } else {
            ties += 1;
        }
    }
    let verdict = sign_test(wins, ties, losses, 0.05).unwrap();
    println!(
        "\nsign test draf-lda vs raf: [{wins},{ties},{losses}], threshold {:.2} -> {}",
        verdict.threshold,
        match verdict.verdict {
            SignVerdict::RowBetter => "draf-lda significantly better",
            SignVerdict::ColumnBetter => "raf significantly better",
            SignVerdict::NoDifference => "no significant difference at this scale",
        }
    );
    println!("(six fixtures cannot reach significance; the machinery is the point)");
}
