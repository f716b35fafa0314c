//! Tree-size behavior: double variants grow bigger trees than their
//! standard counterparts (more unique samples per tree), and raising
//! minleaf shrinks every tree monotonically.
//!
//! Run with: `cargo run --release --example node_growth`

use draf::diagnostics::node_profile;
use draf::forest::{train_forest, ForestConfig};
use draf::synth;
use draf::tree::{TreeConfig, Variant};

fn main() {
    let data = synth::spirals(400, 0x5195);
    println!(
        "spirals fixture, {} samples, 25 trees per forest\n",
        data.n_samples()
    );

    println!("mean nodes per tree, standard vs double:");
    println!(
        "{:22} {:>9} {:>9} {:>7}",
        "pair", "standard", "double", "ratio"
    );
    for (standard, double) in Variant::PAIRS {
        let mk = |variant| ForestConfig::new(variant).with_trees(25).with_seed(4);
        let s = node_profile(&train_forest(&data, &mk(standard)).unwrap());
        let d = node_profile(&train_forest(&data, &mk(double)).unwrap());
        println!(
            "{:22} {:>9.1} {:>9.1} {:>6.2}x",
            format!("{} / {}", standard.name(), double.name()),
            s.mean_nodes,
            d.mean_nodes,
            d.mean_nodes / s.mean_nodes
        );
    }

    println!("\nmean nodes per tree as minleaf grows (draf):");
    for minleaf in [1usize, 2, 3, 5, 8] {
        let config = ForestConfig {
            tree: TreeConfig::new(Variant::Draf).with_minleaf(minleaf),
            n_trees: 25,
            master_seed: 4,
        };
        let profile = node_profile(&train_forest(&data, &config).unwrap());
        println!(
            "  minleaf {minleaf}: mean {:7.1} nodes, depth {:4.1}",
            profile.mean_nodes, profile.mean_depth
        );
    }
    println!("\nbigger impure leaves allowed -> earlier stops -> strictly smaller trees");
}
