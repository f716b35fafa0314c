//! Command-line surface: train/predict/evaluate workflows, the benchmark
//! grid, and the diagnostic/statistics report generators.
//!
//! Every report is machine-first (CSV or JSON); human summaries go to
//! standard output. Worker count comes from the `DRAF_THREADS` environment
//! variable (default: all cores); a fixed seed makes every output file
//! byte-identical regardless of worker count.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{load_dataset, parse_dataset, Dataset, LabelColumn};
use crate::diagnostics::{
    bias_variance, bias_variance_kv, kappa_error_csv, kappa_error_diagram, node_profile,
};
use crate::error::{Error, Result};
use crate::forest::{load_model, save_model, train_forest, Forest, ForestConfig};
use crate::split::RoutingMode;
use crate::stats::{rank_accuracies, report_from_mean_ranks, sign_test, test_report, SignVerdict};
use crate::tree::{FallbackScope, TreeConfig, Variant};

#[derive(Debug, Parser)]
#[command(
    name = "draf",
    version,
    about = "Oblique and rotation double random forests with diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a forest and write the model document.
    Train(TrainArgs),
    /// Predict labels for a feature file with a saved model.
    Predict(PredictArgs),
    /// Score a saved model on a labeled file (accuracy + confusion matrix).
    Evaluate(EvaluateArgs),
    /// Run a manifest of datasets x variants and emit benchmark tables.
    Benchmark(BenchmarkArgs),
    /// Ensemble diagnostics: kappa-error diagrams, bias-variance, node sizes.
    #[command(subcommand)]
    Diagnose(DiagnoseCommand),
    /// Model-comparison statistics over benchmark tables.
    #[command(subcommand)]
    Stats(StatsCommand),
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    Variant::from_name(s).map_err(|e| e.to_string())
}

fn parse_routing(s: &str) -> std::result::Result<RoutingMode, String> {
    match s {
        "proximity" => Ok(RoutingMode::Proximity),
        "bisector" => Ok(RoutingMode::Bisector),
        other => Err(format!(
            "unknown routing {other:?} (valid: proximity, bisector)"
        )),
    }
}

fn parse_fallback(s: &str) -> std::result::Result<FallbackScope, String> {
    match s {
        "per-node" => Ok(FallbackScope::PerNode),
        "subtree" => Ok(FallbackScope::Subtree),
        other => Err(format!(
            "unknown fallback {other:?} (valid: per-node, subtree)"
        )),
    }
}

#[derive(Debug, Args, Clone)]
struct ForestFlags {
    /// Ensemble variant (raf, draf, mpraf-t/p/n, mpdraf-t/p/n, raf-pca,
    /// raf-lda, draf-pca, draf-lda).
    #[arg(long, value_parser = parse_variant)]
    variant: Variant,
    /// Number of trees (L).
    #[arg(long, default_value_t = 50)]
    trees: usize,
    /// Candidate features per node; defaults to round(sqrt(n)).
    #[arg(long)]
    mtry: Option<usize>,
    /// Maximum samples in an impure node before it leafs out.
    #[arg(long, default_value_t = 1)]
    minleaf: usize,
    /// Master seed for all randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Oblique routing rule: proximity | bisector.
    #[arg(long, default_value = "proximity", value_parser = parse_routing)]
    routing: RoutingMode,
    /// Axis fallback scope for oblique nodes: per-node | subtree.
    #[arg(long, default_value = "per-node", value_parser = parse_fallback)]
    fallback: FallbackScope,
}

impl ForestFlags {
    fn to_config(&self) -> ForestConfig {
        let mut tree = TreeConfig::new(self.variant)
            .with_minleaf(self.minleaf)
            .with_routing(self.routing)
            .with_fallback(self.fallback);
        if let Some(mtry) = self.mtry {
            tree = tree.with_mtry(mtry);
        }
        ForestConfig {
            tree,
            n_trees: self.trees,
            master_seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Training file: comma-separated with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Label column name, or "last".
    #[arg(long, default_value = "last")]
    label_column: String,
    #[command(flatten)]
    forest: ForestFlags,
    /// Model output path.
    #[arg(long, default_value = "model.json")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    /// Feature file; a label column matching the model's is ignored.
    #[arg(long)]
    data: PathBuf,
    /// Predictions output (`row_index,predicted_label`).
    #[arg(long, default_value = "predictions.csv")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Label column name; defaults to the one recorded in the model.
    #[arg(long)]
    label_column: Option<String>,
    /// Optional JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchmarkArgs {
    /// Manifest file (JSON).
    #[arg(long)]
    manifest: PathBuf,
    /// Overrides the manifest's output directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum DiagnoseCommand {
    /// Pairwise kappa/error scatter of a trained model over a test set.
    Kappa {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[arg(long, default_value = "kappa_error.csv")]
        out: PathBuf,
    },
    /// 0-1-loss bias-variance decomposition over bootstrap replicates.
    Biasvar {
        /// Training pool.
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[arg(long, default_value = "last")]
        label_column: String,
        #[command(flatten)]
        forest: ForestFlags,
        /// Bootstrap replicates (T).
        #[arg(long, default_value_t = 10)]
        repeats: usize,
        #[arg(long, default_value = "bias_variance.txt")]
        out: PathBuf,
    },
    /// Tree-size profile of a trained model.
    Nodes {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "node_profile.json")]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum StatsCommand {
    /// Friedman test plus Nemenyi critical difference over an accuracy
    /// matrix (or a precomputed mean-rank vector).
    Friedman {
        /// Accuracy matrix: header of model names, optional leading
        /// `dataset` column, one row per dataset.
        #[arg(long, conflicts_with = "avg_ranks")]
        input: Option<PathBuf>,
        /// Comma-separated mean ranks, e.g. "6.99,6.81,...".
        #[arg(long, requires = "n")]
        avg_ranks: Option<String>,
        /// Dataset count when passing --avg-ranks.
        #[arg(long)]
        n: Option<usize>,
        /// Critical value q_alpha; defaults to the built-in 0.05 table.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nemenyi critical difference for K models over N datasets.
    Nemenyi {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: Option<f64>,
    },
    /// Win-tie-loss sign test between two models.
    Signtest {
        #[arg(long)]
        wins: usize,
        #[arg(long)]
        ties: usize,
        #[arg(long)]
        losses: usize,
        /// Expected comparison count (validated against wins+ties+losses).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
}

/// Entry point shared by the binary and the integration tests. `workers`
/// overrides the `DRAF_THREADS` environment variable.
pub fn run<I, T>(args: I, workers: Option<usize>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let workers = workers.or_else(|| {
        std::env::var("DRAF_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    let mut builder = rayon::ThreadPoolBuilder::new().stack_size(8 * 1024 * 1024);
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot build worker pool: {e}");
            return 1;
        }
    };
    match pool.install(|| execute(cli.command)) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::UnknownVariant { .. } | Error::InvalidInput(_) => 2,
        Error::Read { .. }
        | Error::Parse { .. }
        | Error::NonNumericCell { .. }
        | Error::EmptyDataset
        | Error::MissingLabelColumn { .. }
        | Error::NoFeatureColumns
        | Error::UnknownLabel { .. } => 3,
        Error::Write { .. } => 4,
        Error::DimensionMismatch { .. } => 5,
        _ => 1,
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Train(args) => cmd_train(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Benchmark(args) => cmd_benchmark(args),
        Command::Diagnose(cmd) => cmd_diagnose(cmd),
        Command::Stats(cmd) => cmd_stats(cmd),
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|source| Error::Write {
                path: path.to_path_buf(),
                source,
            })?;
        }
    }
    fs::write(path, text).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn cmd_train(args: TrainArgs) -> Result<i32> {
    let dataset = load_dataset(&args.data, &LabelColumn::parse(&args.label_column))?;
    let config = args.forest.to_config();
    let start = Instant::now();
    let forest = train_forest(&dataset, &config)?;
    let elapsed = start.elapsed().as_secs_f64();
    let train_eval = forest.evaluate(&dataset)?;
    let profile = node_profile(&forest);
    save_model(&forest, &args.out)?;
    println!(
        "trained {}: trees={} train_acc={:.4} mean_nodes={:.1} time={:.2}s -> {}",
        config.variant(),
        forest.n_trees(),
        train_eval.accuracy,
        profile.mean_nodes,
        elapsed,
        args.out.display()
    );
    Ok(0)
}

/// Reads a prediction input for a model: either exactly the model's feature
/// columns, or those plus the model's label column (which is ignored).
fn load_rows_for_model(path: &Path, forest: &Forest) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let header_line = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or(Error::EmptyDataset)?;
    let header: Vec<&str> = header_line
        .trim_end_matches('\r')
        .split(',')
        .map(str::trim)
        .collect();
    let has_label = header.iter().any(|h| *h == forest.label_column());
    if has_label {
        let ds = parse_dataset(
            &text,
            &LabelColumn::Named(forest.label_column().to_string()),
        )?;
        if ds.n_features() != forest.n_features() {
            return Err(Error::DimensionMismatch {
                expected: forest.n_features(),
                got: ds.n_features(),
            });
        }
        return Ok((0..ds.n_samples()).map(|i| ds.row(i).to_vec()).collect());
    }
    if header.len() != forest.n_features() {
        return Err(Error::DimensionMismatch {
            expected: forest.n_features(),
            got: header.len(),
        });
    }
    let mut rows = Vec::new();
    for (row_no, line) in text.lines().skip(1).enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(header.len());
        for (col, cell) in line.trim_end_matches('\r').split(',').enumerate() {
            let value: f64 = cell.trim().parse().unwrap_or(f64::NAN);
            if !value.is_finite() {
                return Err(Error::NonNumericCell {
                    row: row_no + 1,
                    col: col + 1,
                    cell: cell.trim().to_string(),
                });
            }
            row.push(value);
        }
        if row.len() != forest.n_features() {
            return Err(Error::DimensionMismatch {
                expected: forest.n_features(),
                got: row.len(),
            });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(rows)
}

fn cmd_predict(args: PredictArgs) -> Result<i32> {
    let forest = load_model(&args.model)?;
    let rows = load_rows_for_model(&args.data, &forest)?;
    let mut out = String::from("row_index,predicted_label\n");
    for (i, row) in rows.iter().enumerate() {
        let class = forest.predict(row)?;
        out.push_str(&format!("{i},{}\n", forest.label_names()[class]));
    }
    write_text(&args.out, &out)?;
    println!("wrote {} predictions -> {}", rows.len(), args.out.display());
    Ok(0)
}

#[derive(Debug, Serialize)]
struct EvaluateReport<'a> {
    accuracy: f64,
    n_samples: usize,
    labels: &'a [String],
    /// `confusion[actual][predicted]` in model label order.
    confusion: Vec<Vec<usize>>,
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<i32> {
    let forest = load_model(&args.model)?;
    let label_column = args
        .label_column
        .clone()
        .unwrap_or_else(|| forest.label_column().to_string());
    let dataset = load_dataset(&args.data, &LabelColumn::Named(label_column))?;
    let eval = forest.evaluate(&dataset)?;
    let confusion = forest.confusion_matrix(&dataset)?;
    let report = EvaluateReport {
        accuracy: eval.accuracy,
        n_samples: dataset.n_samples(),
        labels: forest.label_names(),
        confusion,
    };
    if let Some(out) = &args.out {
        let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
        text.push('\n');
        write_text(out, &text)?;
    }
    println!(
        "accuracy {:.4} on {} samples",
        report.accuracy, report.n_samples
    );
    for (name, row) in forest.label_names().iter().zip(&report.confusion) {
        println!(
            "  {name}: {}",
            row.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
    }
    Ok(0)
}

#[derive(Debug, Clone, Deserialize)]
struct ManifestDataset {
    name: String,
    train_path: PathBuf,
    test_path: PathBuf,
}

/// Benchmark manifest: which datasets, which variants, and the shared forest
/// settings of the grid.
#[derive(Debug, Clone, Deserialize)]
struct Manifest {
    datasets: Vec<ManifestDataset>,
    variants: Vec<String>,
    #[serde(default = "default_trees")]
    trees: usize,
    #[serde(default)]
    mtry: Option<usize>,
    #[serde(default = "default_minleaf")]
    minleaf: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_label_column")]
    label_column: String,
    #[serde(default)]
    output_dir: Option<PathBuf>,
}

fn default_trees() -> usize {
    50
}

fn default_minleaf() -> usize {
    1
}

fn default_label_column() -> String {
    "last".into()
}

fn cmd_benchmark(args: BenchmarkArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.manifest).map_err(|source| Error::Read {
        path: args.manifest.clone(),
        source,
    })?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: args.manifest.clone(),
        message: e.to_string(),
    })?;
    let out_dir = args
        .out_dir
        .clone()
        .or(manifest.output_dir.clone())
        .ok_or_else(|| Error::invalid("no output directory (set output_dir or --out-dir)"))?;

    let variants: Vec<Variant> = manifest
        .variants
        .iter()
        .map(|name| Variant::from_name(name))
        .collect::<Result<Vec<_>>>()?;
    if variants.is_empty() || manifest.datasets.is_empty() {
        return Err(Error::invalid("manifest needs datasets and variants"));
    }
    for d in &manifest.datasets {
        if d.train_path == d.test_path {
            return Err(Error::invalid(format!(
                "dataset {:?} reuses one file for train and test",
                d.name
            )));
        }
    }

    let label_column = LabelColumn::parse(&manifest.label_column);
    let mut failures: Vec<String> = Vec::new();
    let mut loaded: Vec<Option<(Dataset, Dataset)>> = Vec::new();
    for d in &manifest.datasets {
        let pair = load_dataset(&d.train_path, &label_column)
            .and_then(|train| load_dataset(&d.test_path, &label_column).map(|test| (train, test)));
        match pair {
            Ok(pair) => loaded.push(Some(pair)),
            Err(e) => {
                failures.push(format!("{}: {e}", d.name));
                loaded.push(None);
            }
        }
    }

    struct RunResult {
        accuracy: f64,
        mean_nodes: f64,
        seconds: f64,
    }

    // Row-major grid of runs; collect preserves order, so run (di, vi)
    // lands at index di * variants.len() + vi.
    let grid: Vec<(usize, usize)> = (0..manifest.datasets.len())
        .flat_map(|di| (0..variants.len()).map(move |vi| (di, vi)))
        .collect();
    let results: Vec<std::result::Result<RunResult, String>> = grid
        .par_iter()
        .map(|&(di, vi)| match &loaded[di] {
            None => Err("dataset failed to load".to_string()),
            Some((train, test)) => {
                let mut tree = TreeConfig::new(variants[vi]).with_minleaf(manifest.minleaf);
                if let Some(mtry) = manifest.mtry {
                    tree = tree.with_mtry(mtry);
                }
                let config = ForestConfig {
                    tree,
                    n_trees: manifest.trees,
                    master_seed: manifest.seed,
                };
                let start = Instant::now();
                train_forest(train, &config)
                    .and_then(|forest| {
                        let eval = forest.evaluate(test)?;
                        Ok(RunResult {
                            accuracy: eval.accuracy,
                            mean_nodes: node_profile(&forest).mean_nodes,
                            seconds: start.elapsed().as_secs_f64(),
                        })
                    })
                    .map_err(|e| e.to_string())
            }
        })
        .collect();

    let header: String = std::iter::once("dataset".to_string())
        .chain(variants.iter().map(|v| v.name().to_string()))
        .collect::<Vec<_>>()
        .join(",");
    let mut accuracy_csv = format!("{header}\n");
    let mut nodes_csv = format!("{header}\n");
    let mut timing_csv = format!("{header}\n");
    let mut matrix: Vec<Vec<f64>> = Vec::new();
    let mut complete_rows = 0usize;
    let mut time_sums = vec![0.0; variants.len()];

    for (di, d) in manifest.datasets.iter().enumerate() {
        let mut acc_row = vec![d.name.clone()];
        let mut node_row = vec![d.name.clone()];
        let mut time_row = vec![d.name.clone()];
        let mut row_values = Vec::with_capacity(variants.len());
        for vi in 0..variants.len() {
            match &results[di * variants.len() + vi] {
                Ok(run) => {
                    acc_row.push(format!("{:.6}", run.accuracy));
                    node_row.push(format!("{:.4}", run.mean_nodes));
                    time_row.push(format!("{:.6}", run.seconds));
                    row_values.push(run.accuracy);
                    time_sums[vi] += run.seconds;
                }
                Err(msg) => {
                    acc_row.push(String::new());
                    node_row.push(String::new());
                    time_row.push(String::new());
                    failures.push(format!("{} x {}: {msg}", d.name, variants[vi].name()));
                }
            }
        }
        if row_values.len() == variants.len() {
            matrix.push(row_values);
            complete_rows += 1;
        }
        accuracy_csv.push_str(&format!("{}\n", acc_row.join(",")));
        nodes_csv.push_str(&format!("{}\n", node_row.join(",")));
        timing_csv.push_str(&format!("{}\n", time_row.join(",")));
    }

    write_text(&out_dir.join("accuracy.csv"), &accuracy_csv)?;
    write_text(&out_dir.join("nodes.csv"), &nodes_csv)?;
    write_text(&out_dir.join("timing.csv"), &timing_csv)?;

    // Overall comparison: rank by average rank over the complete rows.
    let mut summary_csv = String::from("model,avg_accuracy,avg_time_s,avg_rank,rank\n");
    if complete_rows >= 1 && variants.len() >= 2 {
        let model_names: Vec<String> = variants.iter().map(|v| v.name().to_string()).collect();
        let table = rank_accuracies(&model_names, &matrix, true)?;
        let mut order: Vec<usize> = (0..variants.len()).collect();
        order.sort_by(|&a, &b| table.avg_ranks[a].total_cmp(&table.avg_ranks[b]));
        for (place, &vi) in order.iter().enumerate() {
            let avg_acc = matrix.iter().map(|row| row[vi]).sum::<f64>() / complete_rows as f64;
            summary_csv.push_str(&format!(
                "{},{:.6},{:.6},{:.4},{}\n",
                variants[vi].name(),
                avg_acc,
                time_sums[vi] / complete_rows as f64,
                table.avg_ranks[vi],
                place + 1
            ));
        }
    }
    write_text(&out_dir.join("summary.csv"), &summary_csv)?;

    println!(
        "benchmark: {} datasets x {} variants -> {}",
        manifest.datasets.len(),
        variants.len(),
        out_dir.display()
    );
    if failures.is_empty() {
        Ok(0)
    } else {
        for f in &failures {
            eprintln!("failed: {f}");
        }
        Ok(1)
    }
}

fn cmd_diagnose(cmd: DiagnoseCommand) -> Result<i32> {
    match cmd {
        DiagnoseCommand::Kappa { model, test, out } => {
            let forest = load_model(&model)?;
            let label_column = LabelColumn::Named(forest.label_column().to_string());
            let test = load_dataset(&test, &label_column)?;
            let diagram = kappa_error_diagram(&forest, &test)?;
            write_text(&out, &kappa_error_csv(&diagram))?;
            println!(
                "kappa-error: {} points, centroid kappa={:.4} error={:.4} -> {}",
                diagram.points.len(),
                diagram.centroid_kappa,
                diagram.centroid_error,
                out.display()
            );
            Ok(0)
        }
        DiagnoseCommand::Biasvar {
            train,
            test,
            label_column,
            forest,
            repeats,
            out,
        } => {
            let label_column = LabelColumn::parse(&label_column);
            let pool = load_dataset(&train, &label_column)?;
            let test = load_dataset(&test, &label_column)?;
            let config = forest.to_config();
            let report = bias_variance(&pool, &test, &config, repeats, config.master_seed)?;
            write_text(&out, &bias_variance_kv(&report))?;
            println!(
                "bias_sq={:.6} variance={:.6} error={:.6} repeats={} -> {}",
                report.bias_sq,
                report.variance,
                report.error,
                report.repeats,
                out.display()
            );
            Ok(0)
        }
        DiagnoseCommand::Nodes { model, out } => {
            let forest = load_model(&model)?;
            let profile = node_profile(&forest);
            let mut text = serde_json::to_string_pretty(&profile).expect("profile serializes");
            text.push('\n');
            write_text(&out, &text)?;
            println!(
                "nodes: mean={:.2} min={} max={} depth_mean={:.2} -> {}",
                profile.mean_nodes,
                profile.min_nodes,
                profile.max_nodes,
                profile.mean_depth,
                out.display()
            );
            Ok(0)
        }
    }
}

/// Parses an accuracy matrix: header of model names with an optional leading
/// `dataset` column of row labels.
fn read_accuracy_matrix(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or(Error::EmptyDataset)?
        .trim_end_matches('\r')
        .split(',')
        .map(|c| c.trim().to_string())
        .collect();
    let skip_first = header.first().map(String::as_str) == Some("dataset");
    let names: Vec<String> = if skip_first {
        header[1..].to_vec()
    } else {
        header
    };
    let mut rows = Vec::new();
    for (row_no, line) in lines.enumerate() {
        let cells: Vec<&str> = line.trim_end_matches('\r').split(',').collect();
        let data = if skip_first { &cells[1..] } else { &cells[..] };
        if data.len() != names.len() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                message: format!(
                    "row {} has {} cells for {} models",
                    row_no + 1,
                    data.len(),
                    names.len()
                ),
            });
        }
        let mut row = Vec::with_capacity(names.len());
        for cell in data {
            let v: f64 = cell.trim().parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                message: format!("non-numeric accuracy cell {cell:?} in row {}", row_no + 1),
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok((names, rows))
}

fn cmd_stats(cmd: StatsCommand) -> Result<i32> {
    match cmd {
        StatsCommand::Friedman {
            input,
            avg_ranks,
            n,
            q,
            out,
        } => {
            let report = match (input, avg_ranks) {
                (Some(path), None) => {
                    let (names, rows) = read_accuracy_matrix(&path)?;
                    let table = rank_accuracies(&names, &rows, true)?;
                    test_report(&table, q)?
                }
                (None, Some(ranks)) => {
                    let ranks: Vec<f64> = ranks
                        .split(',')
                        .map(|c| {
                            c.trim()
                                .parse::<f64>()
                                .map_err(|_| Error::invalid(format!("bad rank value {c:?}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let n = n.ok_or_else(|| Error::invalid("--avg-ranks needs --n"))?;
                    let names: Vec<String> =
                        (1..=ranks.len()).map(|i| format!("model_{i}")).collect();
                    report_from_mean_ranks(&names, &ranks, n, q)?
                }
                _ => return Err(Error::invalid("pass exactly one of --input or --avg-ranks")),
            };
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            if let Some(out) = &out {
                write_text(out, &text)?;
            } else {
                print!("{text}");
            }
            println!(
                "chi2_F={:.4} F_F={:.4} df=({}, {}) CD={:.4}",
                report.chi2_f, report.f_f, report.df1, report.df2, report.cd
            );
            Ok(0)
        }
        StatsCommand::Nemenyi { k, n, q } => {
            let q = match q {
                Some(q) => q,
                None => crate::stats::q_alpha_05(k).ok_or_else(|| {
                    Error::invalid(format!("no built-in q value for K={k}; pass --q"))
                })?,
            };
            let cd = crate::stats::nemenyi_cd(k, n, q);
            println!(
                "{}",
                serde_json::json!({ "k": k, "n": n, "q_alpha": q, "cd": cd })
            );
            Ok(0)
        }
        StatsCommand::Signtest {
            wins,
            ties,
            losses,
            n,
            alpha,
        } => {
            if let Some(n) = n {
                if n != wins + ties + losses {
                    return Err(Error::invalid(format!(
                        "--n {n} does not match wins+ties+losses = {}",
                        wins + ties + losses
                    )));
                }
            }
            let report = sign_test(wins, ties, losses, alpha)?;
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            print!("{text}");
            let verdict = match report.verdict {
                SignVerdict::RowBetter => "row significantly better",
                SignVerdict::ColumnBetter => "column significantly better",
                SignVerdict::NoDifference => "no significant difference",
            };
            println!("{verdict}");
            Ok(0)
        }
    }
}
