//! Seeded synthetic datasets used by the examples, the test suites and the
//! benchmark walkthroughs. Every generator is deterministic in its seed.

use rand::prelude::*;

use crate::data::{derive_seed, stream, Dataset, SampleIndexSet};

pub(crate) fn normal(rng: &mut impl Rng) -> f64 {
    // Box-Muller.
    let u1: f64 = loop {
        let u: f64 = rng.random();
        if u > f64::MIN_POSITIVE {
            break u;
        }
    };
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn build(samples: Vec<Vec<f64>>, labels: Vec<usize>, n_classes: usize) -> Dataset {
    let n_features = samples[0].len();
    let feature_names = (0..n_features).map(|j| format!("f{j}")).collect();
    let label_names = (0..n_classes).map(|k| format!("c{k}")).collect();
    Dataset::new(samples, labels, label_names, feature_names, "class".into())
        .expect("generator produced a valid dataset")
}

/// Two well-separated isotropic Gaussian blobs in `n_features` dimensions.
pub fn two_gaussians(n: usize, n_features: usize, seed: u64) -> Dataset {
    let mut rng = stream(seed);
    let mut samples = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % 2;
        let shift = if class == 0 { 0.0 } else { 2.5 };
        let row: Vec<f64> = (0..n_features)
            .map(|j| normal(&mut rng) + if j < 2 { shift } else { 0.0 })
            .collect();
        samples.push(row);
        labels.push(class);
    }
    build(samples, labels, 2)
}

/// Three Gaussian blobs (classes 0..3) in `n_features >= 2` dimensions.
pub fn three_gaussians(n: usize, n_features: usize, seed: u64) -> Dataset {
    let centers = [(0.0, 0.0), (3.2, 0.0), (1.6, 2.8)];
    let mut rng = stream(seed);
    let mut samples = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % 3;
        let (cx, cy) = centers[class];
        let mut row: Vec<f64> = (0..n_features).map(|_| normal(&mut rng)).collect();
        row[0] += cx;
        row[1] += cy;
        samples.push(row);
        labels.push(class);
    }
    build(samples, labels, 3)
}

/// Two Gaussians sharing a covariance strongly elongated along the (1, 1)
/// diagonal, with means separated across that ridge. The Bayes boundary is
/// an oblique line, which axis-parallel splits can only staircase.
pub fn oblique_gaussians(n: usize, seed: u64) -> Dataset {
    let mut rng = stream(seed);
    let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
    let along = (inv_sqrt2, inv_sqrt2);
    let across = (-inv_sqrt2, inv_sqrt2);
    let sigma_along = 8.0;
    let sigma_across = 0.3;
    let offset = 0.45;
    let mut samples = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % 2;
        let side = if class == 0 { -offset } else { offset };
        let a = sigma_along * normal(&mut rng);
        let b = sigma_across * normal(&mut rng) + side;
        samples.push(vec![a * along.0 + b * across.0, a * along.1 + b * across.1]);
        labels.push(class);
    }
    build(samples, labels, 2)
}

/// Two interleaved spirals with mild radial noise.
pub fn spirals(n: usize, seed: u64) -> Dataset {
    let mut rng = stream(seed);
    let mut samples = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % 2;
        let t: f64 = 0.2 + 0.8 * rng.random::<f64>();
        let angle = 3.0 * std::f64::consts::PI * t + class as f64 * std::f64::consts::PI;
        let radius = 4.0 * t;
        samples.push(vec![
            radius * angle.cos() + 0.15 * normal(&mut rng),
            radius * angle.sin() + 0.15 * normal(&mut rng),
        ]);
        labels.push(class);
    }
    build(samples, labels, 2)
}

/// Four blobs at the corners of a square labeled in an XOR pattern.
pub fn xor_blobs(n: usize, seed: u64) -> Dataset {
    let mut rng = stream(seed);
    let corners = [(2.0, 2.0), (-2.0, -2.0), (2.0, -2.0), (-2.0, 2.0)];
    let mut samples = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let corner = i % 4;
        let (cx, cy) = corners[corner];
        samples.push(vec![cx + normal(&mut rng), cy + normal(&mut rng)]);
        labels.push(if corner < 2 { 0 } else { 1 });
    }
    build(samples, labels, 2)
}

/// Two concentric rings.
pub fn rings(n: usize, seed: u64) -> Dataset {
    let mut rng = stream(seed);
    let mut samples = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % 2;
        let radius = if class == 0 { 1.5 } else { 3.5 } + 0.25 * normal(&mut rng);
        let angle = std::f64::consts::TAU * rng.random::<f64>();
        samples.push(vec![radius * angle.cos(), radius * angle.sin()]);
        labels.push(class);
    }
    build(samples, labels, 2)
}

/// A linearly separable two-class set with a comfortable margin, handy for
/// memorization and sanity checks.
pub fn separable(n: usize, seed: u64) -> Dataset {
    let mut rng = stream(seed);
    let mut samples = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % 2;
        let shift = if class == 0 { -3.0 } else { 3.0 };
        samples.push(vec![shift + normal(&mut rng), normal(&mut rng)]);
        labels.push(class);
    }
    build(samples, labels, 2)
}

/// The six standing fixtures the benchmark and test suites run on.
pub fn standard_fixtures() -> Vec<(&'static str, Dataset)> {
    vec![
        ("blobs", two_gaussians(300, 4, 0xB10B)),
        ("oblique", oblique_gaussians(400, 0x0B11)),
        ("spirals", spirals(400, 0x5195)),
        ("xor", xor_blobs(320, 0x1021)),
        ("rings", rings(360, 0x7146)),
        ("triple", three_gaussians(450, 4, 0x3333)),
    ]
}

/// Deterministic shuffled train/test partition.
pub fn split_train_test(ds: &Dataset, test_fraction: f64, seed: u64) -> (Dataset, Dataset) {
    assert!((0.0..1.0).contains(&test_fraction));
    let n = ds.n_samples();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = stream(derive_seed(seed, 0x5EED));
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    let n_test = ((n as f64) * test_fraction).round() as usize;
    let test_idx = SampleIndexSet::new(order[..n_test].to_vec());
    let train_idx = SampleIndexSet::new(order[n_test..].to_vec());
    (ds.subset(&train_idx), ds.subset(&test_idx))
}

/// Renders a dataset in the same comma-separated layout `load_dataset`
/// ingests (features, then the label column).
pub fn to_csv(ds: &Dataset) -> String {
    let mut out = String::new();
    for name in ds.feature_names() {
        out.push_str(name);
        out.push(',');
    }
    out.push_str(ds.label_column());
    out.push('\n');
    for i in 0..ds.n_samples() {
        for v in ds.row(i) {
            out.push_str(&format!("{v},"));
        }
        out.push_str(ds.label_name(ds.label(i)));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = to_csv(&spirals(50, 7));
        let b = to_csv(&spirals(50, 7));
        assert_eq!(a, b);
        let c = to_csv(&spirals(50, 8));
        assert_ne!(a, c);
    }

    #[test]
    fn fixtures_have_expected_shapes() {
        for (name, ds) in standard_fixtures() {
            assert!(ds.n_samples() <= 2000, "{name} too large");
            assert!(ds.n_classes() >= 2);
            assert!(ds.n_features() >= 2);
        }
    }

    #[test]
    fn split_partitions_without_overlap() {
        let ds = two_gaussians(100, 3, 5);
        let (train, test) = split_train_test(&ds, 0.3, 11);
        assert_eq!(train.n_samples(), 70);
        assert_eq!(test.n_samples(), 30);
        assert_eq!(train.n_classes(), ds.n_classes());
    }
}
