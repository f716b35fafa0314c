//! Train a forest, score it on held-out data, persist it, and predict.
//!
//! Run with: `cargo run --release --example train_and_predict`

use draf::forest::{load_model, save_model, train_forest, ForestConfig};
use draf::synth;
use draf::tree::Variant;

fn main() {
    // A 3-class Gaussian fixture, 70/30 train/test.
    let data = synth::three_gaussians(450, 4, 42);
    let (train, test) = synth::split_train_test(&data, 0.3, 1);
    println!(
        "dataset: {} samples, {} features, {} classes ({} train / {} test)",
        data.n_samples(),
        data.n_features(),
        data.n_classes(),
        train.n_samples(),
        test.n_samples()
    );

    // An oblique double random forest: MPSVM hyperplanes at each node,
    // per-node bootstrapping, axis-parallel fallback on rank deficiency.
    let config = ForestConfig::new(Variant::MpDrafP)
        .with_trees(50)
        .with_seed(7);
    let forest = train_forest(&train, &config).unwrap();

    let on_train = forest.evaluate(&train).unwrap();
    let on_test = forest.evaluate(&test).unwrap();
    println!(
        "{}: train accuracy {:.4}, test accuracy {:.4}",
        config.variant(),
        on_train.accuracy,
        on_test.accuracy
    );

    // Majority-class floor for context.
    let (_, baseline) = test.majority_class();
    println!("majority-class baseline: {:.4}", baseline);

    // The model document round-trips losslessly.
    let dir = std::env::temp_dir().join("draf_example_model.json");
    save_model(&forest, &dir).unwrap();
    let reloaded = load_model(&dir).unwrap();
    println!("saved and reloaded model from {}", dir.display());

    println!("\nfirst five test predictions:");
    for i in 0..5 {
        let row = test.row(i);
        let class = reloaded.predict(row).unwrap();
        let votes = reloaded.vote_counts(row).unwrap();
        println!(
            "  sample {i}: true={} predicted={} votes={votes:?}",
            test.label_name(test.label(i)),
            reloaded.label_names()[class]
        );
    }
}
