//! A single node's view of the split strategies: the plain axis search,
//! the MPSVM clustering-plane pair, and the PCA/LDA rotations, all on the
//! same two-class sample.
//!
//! Run with: `cargo run --release --example split_strategies`

use draf::data::FeatureSubset;
use draf::split::{
    best_axis_split, bhattacharyya, class_gaussians, group_classes, lda_rotation_split,
    mpsvm_split, pca_rotation_split, MpsvmRegularization, RoutingMode, SplitRule, COV_REG_EPS,
};
use draf::synth;

fn main() {
    // Two elongated diagonal clusters: hard for one axis cut, easy for an
    // oblique plane.
    let data = synth::oblique_gaussians(120, 9);
    let rows: Vec<Vec<f64>> = (0..data.n_samples())
        .map(|i| data.row(i).to_vec())
        .collect();
    let labels: Vec<usize> = data.labels().to_vec();
    let subset = FeatureSubset::new(vec![0, 1]);
    let n_classes = data.n_classes();

    println!("node sample: {} rows, 2 features, 2 classes\n", rows.len());

    // 1. Axis-parallel Gini search.
    let axis = best_axis_split(&rows, &labels, n_classes, &subset).unwrap();
    if let SplitRule::Axis { feature, threshold } = &axis.rule {
        println!(
            "axis search:     split f{feature} <= {threshold:.3}, weighted child gini {:.4}",
            axis.impurity
        );
    }

    // 2. Class Gaussians, their separability, and the MPSVM plane pair.
    let gaussians = class_gaussians(&rows, &labels, COV_REG_EPS);
    let distance = bhattacharyya(&gaussians[&0], &gaussians[&1]).unwrap();
    println!("bhattacharyya distance between the class models: {distance:.4}");
    let grouping = group_classes(&gaussians).unwrap();
    println!(
        "hyperclass grouping: positive {:?}, negative {:?}",
        grouping.positive_classes, grouping.negative_classes
    );

    for reg in [
        MpsvmRegularization::Tikhonov,
        MpsvmRegularization::AxisParallel,
        MpsvmRegularization::NullSpace,
    ] {
        let outcome = mpsvm_split(
            &rows,
            &labels,
            n_classes,
            &subset,
            &grouping,
            reg,
            RoutingMode::Proximity,
        )
        .unwrap()
        .unwrap();
        match &outcome.rule {
            SplitRule::Oblique {
                plane_pos,
                plane_neg,
                ..
            } => println!(
                "mpsvm {reg:?}: planes w1={:?} b1={:.3} / w2={:?} b2={:.3}, gini {:.4}{}",
                rounded(&plane_pos.0),
                plane_pos.1,
                rounded(&plane_neg.0),
                plane_neg.1,
                outcome.impurity,
                if outcome.fallback_used {
                    " (fell back)"
                } else {
                    ""
                }
            ),
            SplitRule::Axis { feature, threshold } => println!(
                "mpsvm {reg:?}: fell back to axis f{feature} <= {threshold:.3}, gini {:.4}",
                outcome.impurity
            ),
            _ => unreachable!(),
        }
    }

    // 3. Rotation splits: PCA scatter directions vs LDA discriminants.
    let pca = pca_rotation_split(&rows, &labels, n_classes, &subset)
        .unwrap()
        .unwrap();
    let lda = lda_rotation_split(&rows, &labels, n_classes, &subset)
        .unwrap()
        .unwrap();
    for (name, outcome) in [("pca", &pca), ("lda", &lda)] {
        if let SplitRule::Rotation {
            rotation,
            rotated_feature,
            threshold,
            ..
        } = &outcome.rule
        {
            println!(
                "{name} rotation:    leading axis {:?}, split rotated f{rotated_feature} <= {threshold:.3}, gini {:.4}",
                rounded(&rotation.column(0)),
                outcome.impurity
            );
        }
    }

    println!(
        "\nthe oblique and rotation splits reach gini {:.4}-{:.4} where the best axis cut stalls at {:.4}",
        pca.impurity.min(lda.impurity),
        pca.impurity.max(lda.impurity),
        axis.impurity
    );
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1000.0).round() / 1000.0).collect()
}
