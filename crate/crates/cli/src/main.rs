//! `qsvm`: train and run the simulated quantum LS-SVM character recognizer.
//!
//! Subcommands:
//! * `reproduce`: end-to-end run over the bundled glyphs with the reference
//!   kernel comparison;
//! * `classify` : train on image paths or inline vectors, classify queries;
//! * `features` : extract raw and converted features from one glyph image.
//!
//! Exit codes: 0 success, 1 error, 2 at least one ambiguous classification.

mod options;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qsvm_core::ocr::{self, ConversionMap, FeatureVector};
use qsvm_core::qsvm::{self, QsvmError};
use qsvm_core::svm::{self, Label, TrainingSet};

use options::{OptionLayer, Options, OutputFormat, Preset};
use report::{
    round6, ConfigEcho, Features, KernelReport, QueryRecord, RunReport, TrainingReport,
};

/// Reference tomography measurement of the trace-normalized kernel.
const KERNEL_REFERENCE: [[f64; 2]; 2] = [[0.5065, 0.2425], [0.2425, 0.4935]];

const HANDWRITTEN: [&str; 8] = [
    "handwritten_6_a.pgm",
    "handwritten_6_b.pgm",
    "handwritten_6_c.pgm",
    "handwritten_6_d.pgm",
    "handwritten_9_a.pgm",
    "handwritten_9_b.pgm",
    "handwritten_9_c.pgm",
    "handwritten_9_d.pgm",
];

#[derive(Debug)]
enum CliError {
    Config(String),
    Assets(String),
    Input(String),
    Pipeline(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Assets(msg) => write!(f, "asset error: {msg}"),
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::Pipeline(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<QsvmError> for CliError {
    fn from(e: QsvmError) -> Self {
        match e {
            QsvmError::EigenphaseOverflow { .. } => {
                CliError::Pipeline(format!("{e}; try a smaller --t0"))
            }
            other => CliError::Pipeline(other.to_string()),
        }
    }
}

impl From<svm::SvmError> for CliError {
    fn from(e: svm::SvmError) -> Self {
        CliError::Pipeline(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "qsvm", version, about = "Quantum LS-SVM character recognition simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonFlags {
    /// Training-error weight gamma (> 0)
    #[arg(long)]
    gamma: Option<f64>,
    /// Eigenvalue-register size for the matrix inversion
    #[arg(long)]
    phase_qubits: Option<usize>,
    /// Evolution time t0 for the phase estimation
    #[arg(long)]
    t0: Option<f64>,
    /// Feature conversion preset
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    /// Report format
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Key = value settings file (flags take precedence)
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PresetArg {
    Paper,
    Identity,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the bundled reproduction: standard glyph training, reference
    /// kernel comparison, and all handwritten test glyphs.
    Reproduce {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Train on the given specs and classify each query.
    Classify {
        /// Training spec: `[LABEL:]SOURCE` where LABEL is +1/-1/6/9 and
        /// SOURCE is an image path or an inline `v,h` vector. With exactly
        /// two unlabeled specs the first is +1 ('6'), the second -1 ('9').
        #[arg(long = "train", required = true)]
        train: Vec<String>,
        /// Query spec: an image path or an inline `v,h` vector.
        #[arg(long = "query", required = true)]
        query: Vec<String>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Print raw ink ratios and converted features for one image.
    Features {
        image: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Reproduce { flags } => run_reproduce(&flags),
        Command::Classify { train, query, flags } => run_classify(&train, &query, &flags),
        Command::Features { image, flags } => run_features(&image, &flags),
    };
    match outcome {
        Ok(ambiguous) => {
            if ambiguous {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn resolve_options(flags: &CommonFlags) -> Result<Options, CliError> {
    let layer = OptionLayer {
        gamma: flags.gamma,
        phase_qubits: flags.phase_qubits,
        t0: flags.t0,
        preset: flags.preset.map(|p| match p {
            PresetArg::Paper => Preset::Paper,
            PresetArg::Identity => Preset::Identity,
        }),
        format: flags.format.map(|f| match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }),
    };
    Options::resolve(layer, flags.config.as_deref())
}

/// Bundled glyph location: `QSVM_ASSET_DIR`, then `./assets`, then the
/// workspace copy next to the sources (for `cargo run`).
fn asset_dir() -> Result<PathBuf, CliError> {
    if let Ok(dir) = std::env::var("QSVM_ASSET_DIR") {
        let path = PathBuf::from(&dir);
        if path.is_dir() {
            return Ok(path);
        }
        return Err(CliError::Assets(format!("QSVM_ASSET_DIR={dir} is not a directory")));
    }
    let local = PathBuf::from("assets");
    if local.is_dir() {
        return Ok(local);
    }
    let workspace = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../assets");
    if workspace.is_dir() {
        return Ok(workspace);
    }
    Err(CliError::Assets(
        "bundled assets not found; set QSVM_ASSET_DIR to the glyph directory".into(),
    ))
}

fn load_glyph(path: &Path) -> Result<ocr::GlyphImage, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    ocr::load_image(&bytes)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn glyph_features(
    path: &Path,
    map: &ConversionMap<f64>,
) -> Result<FeatureVector<f64>, CliError> {
    let img = load_glyph(path)?;
    ocr::featurize(&img, map).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// A training or query source: inline `v,h` or an image path. Inline
/// sources get no name; image sources are named by their file stem.
fn parse_source(
    text: &str,
    map: &ConversionMap<f64>,
) -> Result<(Option<String>, [f64; 2]), CliError> {
    if let Some((a, b)) = text.split_once(',') {
        if let (Ok(v), Ok(h)) = (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
            return Ok((None, [v, h]));
        }
    }
    let path = PathBuf::from(text);
    let features = glyph_features(&path, map)?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| text.to_string());
    Ok((Some(id), features.as_array()))
}

fn parse_train_spec(
    text: &str,
    map: &ConversionMap<f64>,
) -> Result<(Option<i8>, [f64; 2]), CliError> {
    let (label, rest) = match text.split_once(':') {
        Some((l, rest)) => {
            let label = match l.trim() {
                "+1" | "1" | "6" => Some(1i8),
                "-1" | "9" => Some(-1i8),
                _ => None,
            };
            match label {
                Some(l) => (Some(l), rest),
                // Not a label prefix; treat the whole text as a source
                // (Windows-style paths are not expected here).
                None => (None, text),
            }
        }
        None => (None, text),
    };
    let (_, vec) = parse_source(rest, map)?;
    Ok((label, vec))
}

fn build_training_set(
    specs: &[String],
    map: &ConversionMap<f64>,
) -> Result<TrainingSet<f64>, CliError> {
    let mut labels: Vec<Option<i8>> = Vec::new();
    let mut vectors = Vec::new();
    for spec in specs {
        let (label, vec) = parse_train_spec(spec, map)?;
        labels.push(label);
        vectors.push(vec.to_vec());
    }
    let labels: Vec<i8> = if labels.iter().all(|l| l.is_some()) {
        labels.into_iter().map(|l| l.unwrap()).collect()
    } else if labels.iter().all(|l| l.is_none()) && labels.len() == 2 {
        vec![1, -1]
    } else {
        return Err(CliError::Input(
            "label every training spec as LABEL:SOURCE (or give exactly two unlabeled \
             specs for the default 6/9 assignment)"
                .into(),
        ));
    };
    TrainingSet::new(vectors, labels).map_err(|e| CliError::Input(e.to_string()))
}

fn label_string(label: Label) -> String {
    label.to_string()
}

fn classify_queries(
    ts: &TrainingSet<f64>,
    model: &svm::SvmModel<f64>,
    queries: &[(String, [f64; 2])],
    opts: &Options,
) -> Result<(Vec<QueryRecord>, bool), CliError> {
    let cfg = opts.qsvm_config();
    let mut records = Vec::with_capacity(queries.len());
    let mut any_ambiguous = false;
    for (id, vec) in queries {
        let classical_decision = svm::decision_value(model, vec)?;
        let classical_label = Label::from_decision(classical_decision);
        let quantum = qsvm::qsvm_classify(ts, vec, &cfg)?;
        let agree = classical_label == quantum.label && classical_label != Label::Ambiguous;
        if quantum.label == Label::Ambiguous {
            any_ambiguous = true;
        }
        records.push(QueryRecord {
            id: id.clone(),
            features: Features { v: round6(vec[0]), h: round6(vec[1]) },
            classical_decision: round6(classical_decision),
            quantum_expectation_re: round6(quantum.expectation.re),
            quantum_expectation_im: round6(quantum.expectation.im),
            classical_label: label_string(classical_label),
            quantum_label: label_string(quantum.label),
            agree,
            postselect_probability: round6(quantum.postselect_probability),
        });
    }
    Ok((records, any_ambiguous))
}

fn kernel_report(
    ts: &TrainingSet<f64>,
    with_reference: bool,
) -> Result<KernelReport, CliError> {
    let chi = qsvm::build_chi(ts)?;
    let rho = qsvm::kernel_via_discard(&chi, ts)?;
    let m = ts.len();
    let ideal: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| round6(rho.entry(i, j).re)).collect())
        .collect();
    let (reference, max_abs_deviation) = if with_reference && m == 2 {
        let mut dev = 0.0f64;
        for (i, row) in KERNEL_REFERENCE.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                dev = dev.max((rho.entry(i, j).re - want).abs());
            }
        }
        (
            Some(KERNEL_REFERENCE.iter().map(|r| r.to_vec()).collect()),
            Some(round6(dev)),
        )
    } else {
        (None, None)
    };
    Ok(KernelReport { ideal, reference, max_abs_deviation })
}

fn config_echo(opts: &Options) -> ConfigEcho {
    let cfg = opts.qsvm_config();
    ConfigEcho {
        gamma: round6(opts.gamma),
        phase_qubits: opts.phase_qubits,
        t0: round6(opts.t0),
        inversion_constant: round6(cfg.effective_inversion_constant()),
        postselect: "exact".into(),
        preset: opts.preset.name().into(),
        format: opts.format.name().into(),
    }
}

fn emit(report: &RunReport, format: OutputFormat) {
    match format {
        OutputFormat::Json => println!("{}", report.to_json()),
        OutputFormat::Csv => print!("{}", report.to_csv()),
    }
}

fn run_reproduce(flags: &CommonFlags) -> Result<bool, CliError> {
    let opts = resolve_options(flags)?;
    let dir = asset_dir()?;
    let map = opts.preset.conversion_map();

    let six = glyph_features(&dir.join("standard_6.pgm"), &map)?;
    let nine = glyph_features(&dir.join("standard_9.pgm"), &map)?;
    let ts = TrainingSet::new(
        vec![six.as_array().to_vec(), nine.as_array().to_vec()],
        vec![1, -1],
    )
    .map_err(|e| CliError::Input(e.to_string()))?;

    let model = svm::solve_ls_svm(&ts, opts.gamma)?;
    let kernel = kernel_report(&ts, true)?;

    let mut queries: Vec<(String, [f64; 2])> = vec![
        ("standard_6".into(), six.as_array()),
        ("standard_9".into(), nine.as_array()),
    ];
    for name in HANDWRITTEN {
        let features = glyph_features(&dir.join(name), &map)?;
        let id = name.trim_end_matches(".pgm").to_string();
        queries.push((id, features.as_array()));
    }
    let (records, ambiguous) = classify_queries(&ts, &model, &queries, &opts)?;

    let report = RunReport {
        command: "reproduce".into(),
        config: config_echo(&opts),
        kernel,
        training: TrainingReport {
            offset: round6(model.offset),
            alphas: model.alphas.iter().map(|&a| round6(a)).collect(),
        },
        queries: records,
    };
    emit(&report, opts.format);
    Ok(ambiguous)
}

fn run_classify(
    train: &[String],
    query: &[String],
    flags: &CommonFlags,
) -> Result<bool, CliError> {
    let opts = resolve_options(flags)?;
    let map = opts.preset.conversion_map();
    let ts = build_training_set(train, &map)?;
    let model = svm::solve_ls_svm(&ts, opts.gamma)?;
    let kernel = kernel_report(&ts, false)?;

    let queries: Vec<(String, [f64; 2])> = query
        .iter()
        .enumerate()
        .map(|(i, q)| {
            parse_source(q, &map)
                .map(|(id, vec)| (id.unwrap_or_else(|| format!("inline-{}", i + 1)), vec))
        })
        .collect::<Result<_, _>>()?;
    let (records, ambiguous) = classify_queries(&ts, &model, &queries, &opts)?;

    let report = RunReport {
        command: "classify".into(),
        config: config_echo(&opts),
        kernel,
        training: TrainingReport {
            offset: round6(model.offset),
            alphas: model.alphas.iter().map(|&a| round6(a)).collect(),
        },
        queries: records,
    };
    emit(&report, opts.format);
    Ok(ambiguous)
}

fn run_features(image: &Path, flags: &CommonFlags) -> Result<bool, CliError> {
    let opts = resolve_options(flags)?;
    let img = load_glyph(image)?;
    let mask = ocr::binarize(&img, ocr::DEFAULT_THRESHOLD)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let raw: FeatureVector<f64> =
        ocr::ratios(&mask).map_err(|e| CliError::Input(format!("{}: {e}", image.display())))?;
    let converted = opts.preset.conversion_map().apply(raw);

    let payload = report::FeaturesReport {
        image: image.display().to_string(),
        preset: opts.preset.name().into(),
        raw: Features { v: round6(raw.v), h: round6(raw.h) },
        converted: Features { v: round6(converted.v), h: round6(converted.h) },
    };
    println!("{}", serde_json::to_string_pretty(&payload).expect("json"));
    Ok(false)
}
