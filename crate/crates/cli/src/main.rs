use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use osg_core::demos::{self, LARGE_VOCABULARY, SMALL_VOCABULARY};
use osg_core::language::{canonical_descriptors, select_salient, simplified_paths};
use osg_core::shape::{write_pbm, write_pgm};
use osg_core::{
    define_gesture, evaluate, normalize, rasterize, recognize, segment_stream, AugmentConfig, DescriptorSet,
    GestureLanguage, GestureTrajectory, KeypointStream, RasterConfig, SessionConfig,
};

#[derive(Parser)]
#[command(name = "osg", version, about = "One-shot shape-based gesture recognition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Add the single gesture in a stream to a language file.
    Define(DefineArgs),
    /// Recognize every gesture in a stream.
    Recognize(RecognizeArgs),
    /// Confusion matrix and accuracy over an augmented dataset.
    Evaluate(EvaluateArgs),
    /// Generate a seeded augmented dataset from demonstration streams.
    Augment(AugmentArgs),
    /// Rasterize the first gesture of a stream to PBM (or PGM for `.pgm`).
    Render(RenderArgs),
    /// Print the descriptor set of every gesture in a stream.
    Describe(DescribeArgs),
    /// Time recognition of the first gesture in a stream.
    Bench(BenchArgs),
    /// Write the scripted demonstration streams.
    Demos(DemosArgs),
}

#[derive(Args)]
struct DefineArgs {
    /// Keypoint stream, `-` for stdin.
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    label: String,
    /// Language file; created if absent.
    #[arg(long)]
    lang: PathBuf,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    raster_size: Option<usize>,
    #[arg(long)]
    stroke: Option<usize>,
}

#[derive(Args)]
struct RecognizeArgs {
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    lang: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Dataset manifest written by `osg augment`.
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    lang: PathBuf,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AugmentArgs {
    /// Directory of `<label>.jsonl` demonstration streams.
    #[arg(long, alias = "lang")]
    demos: PathBuf,
    /// Samples per label.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Override the positional noise (fraction of gesture extent).
    #[arg(long)]
    noise: Option<f64>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated keypoint ids; salient keypoints by default.
    #[arg(long, value_delimiter = ',')]
    salient: Option<Vec<String>>,
    /// Language whose settings to use; defaults otherwise.
    #[arg(long)]
    lang: Option<PathBuf>,
}

#[derive(Args)]
struct DescribeArgs {
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    lang: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    lang: PathBuf,
    #[arg(long = "in")]
    input: String,
    #[arg(long, default_value_t = 50)]
    iters: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Vocabulary {
    Small,
    Large,
}

#[derive(Args)]
struct DemosArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "large")]
    vocabulary: Vocabulary,
    #[arg(long, default_value_t = demos::DEFAULT_FRAMES)]
    frames: usize,
}

/// Failure in the caller's request rather than in the data.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use osg_core::Error as E;
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 2;
        }
        if cause.is::<io::Error>() || cause.is::<serde_json::Error>() {
            return 3;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Parse { .. } | E::VersionMismatch { .. } | E::Io(_) => 3,
                E::DuplicateLabel(_) | E::EmptyLanguage | E::InvalidArgument(_) | E::UnknownLabel(_) => 2,
                _ => 1,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("OSG_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Define(a) => cmd_define(a),
        Command::Recognize(a) => cmd_recognize(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Augment(a) => cmd_augment(a),
        Command::Render(a) => cmd_render(a),
        Command::Describe(a) => cmd_describe(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Demos(a) => cmd_demos(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn read_gestures(path: &str) -> Result<Vec<GestureTrajectory>> {
    let stream = KeypointStream::parse(&read_input(path)?).with_context(|| format!("parsing {path}"))?;
    Ok(segment_stream(&stream.events, SessionConfig::default())?)
}

fn load_language(path: &Path) -> Result<GestureLanguage> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    GestureLanguage::load(&bytes).with_context(|| format!("loading {}", path.display()))
}

fn language_or_default(path: Option<&Path>) -> Result<GestureLanguage> {
    path.map_or_else(|| Ok(GestureLanguage::default()), load_language)
}

/// Replace `path` via a temporary file in the same directory.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(fs::Permissions::from_mode(0o644))?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct DefineReport<'a> {
    label: &'a str,
    salient_keypoints: &'a [String],
    polyline_points: std::collections::BTreeMap<&'a str, usize>,
}

fn cmd_define(a: DefineArgs) -> Result<()> {
    let gestures = read_gestures(&a.input)?;
    if gestures.len() != 1 {
        return Err(usage(format!("expected exactly one gesture in the stream, found {}", gestures.len())));
    }
    let lang = if a.lang.exists() {
        if a.epsilon.is_some() || a.alpha.is_some() || a.raster_size.is_some() || a.stroke.is_some() {
            log::warn!("language exists; its own settings are kept");
        }
        load_language(&a.lang)?
    } else {
        let d = GestureLanguage::default();
        let raster = RasterConfig {
            size: a.raster_size.unwrap_or(d.raster_config.size),
            stroke: a.stroke.unwrap_or(d.raster_config.stroke),
        };
        GestureLanguage::new(raster, a.epsilon.unwrap_or(d.rdp_epsilon), a.alpha.unwrap_or(d.salience_alpha))?
    };
    let lang = define_gesture(&gestures[0], &a.label, &lang)?;
    write_atomic(&a.lang, &lang.save())?;
    let g = lang.get(&a.label).expect("just defined");
    print_json(&DefineReport {
        label: &g.label,
        salient_keypoints: &g.salient_keypoints,
        polyline_points: g.polylines.iter().map(|(k, p)| (k.as_str(), p.len())).collect(),
    })
}

fn cmd_recognize(a: RecognizeArgs) -> Result<()> {
    let lang = load_language(&a.lang)?;
    if lang.is_empty() {
        return Err(osg_core::Error::EmptyLanguage.into());
    }
    let gestures = read_gestures(&a.input)?;
    let results = gestures.iter().map(|g| recognize(g, &lang)).collect::<osg_core::Result<Vec<_>>>()?;
    if a.json {
        return print_json(&results);
    }
    let mut out = io::stdout().lock();
    if results.is_empty() {
        writeln!(out, "no complete gesture in stream")?;
    }
    for (i, r) in results.iter().enumerate() {
        let votes = r.tally[&r.predicted];
        writeln!(out, "gesture {}: {} ({votes}/7 votes{})", i + 1, r.predicted, if r.tie_broken { ", tie broken" } else { "" })?;
        for v in &r.votes {
            writeln!(out, "  {:<16} {}", v.voter.as_str(), v.chosen_label)?;
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ManifestEntry {
    path: String,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    seed: u64,
    config: AugmentConfig,
    files: Vec<ManifestEntry>,
}

fn cmd_evaluate(a: EvaluateArgs) -> Result<()> {
    if a.parallel == 0 {
        return Err(usage("--parallel must be at least 1"));
    }
    let lang = load_language(&a.lang)?;
    if lang.is_empty() {
        return Err(osg_core::Error::EmptyLanguage.into());
    }
    let text = fs::read_to_string(&a.dataset).with_context(|| format!("reading {}", a.dataset.display()))?;
    let manifest: Manifest = serde_json::from_str(&text).with_context(|| format!("parsing {}", a.dataset.display()))?;
    let base = a.dataset.parent().unwrap_or(Path::new("."));
    let mut samples = Vec::with_capacity(manifest.files.len());
    for f in &manifest.files {
        let path = base.join(&f.path);
        let gestures = read_gestures(&path.to_string_lossy())?;
        if gestures.is_empty() {
            log::warn!("{}: no complete gesture", f.path);
        }
        samples.extend(gestures.into_iter().map(|g| (g, f.label.clone())));
    }
    let ev = evaluate(&samples, &lang, a.parallel)?;
    if a.json {
        print_json(&ev)
    } else {
        println!("{ev}");
        Ok(())
    }
}

fn cmd_augment(a: AugmentArgs) -> Result<()> {
    if a.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let mut entries: Vec<(String, PathBuf)> = fs::read_dir(&a.demos)
        .with_context(|| format!("listing {}", a.demos.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
        .filter_map(|p| Some((p.file_stem()?.to_str()?.to_string(), p)))
        .collect();
    entries.sort();
    if entries.is_empty() {
        return Err(usage(format!("no <label>.jsonl demonstrations in {}", a.demos.display())));
    }
    let mut demos = Vec::with_capacity(entries.len());
    for (label, path) in &entries {
        let mut g = read_gestures(&path.to_string_lossy())?;
        if g.len() != 1 {
            return Err(usage(format!("{}: expected one gesture, found {}", path.display(), g.len())));
        }
        demos.push((label.clone(), g.remove(0)));
    }
    let mut cfg = AugmentConfig { seed: a.seed, ..Default::default() };
    if let Some(n) = a.noise {
        cfg.noise_sigma = n;
    }
    let dataset = osg_core::make_dataset(&demos, a.n, &cfg)?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let mut files = Vec::with_capacity(dataset.len());
    let header = osg_core::StreamHeader::default();
    for (i, (traj, label)) in dataset.iter().enumerate() {
        let name = format!("{label}_{:04}.jsonl", i % a.n);
        let stream = KeypointStream::bracket(traj, header, 0.2);
        fs::write(a.out.join(&name), stream.to_jsonl()).with_context(|| format!("writing {name}"))?;
        files.push(ManifestEntry { path: name, label: label.clone() });
    }
    let manifest = Manifest { seed: a.seed, config: cfg, files };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    write_atomic(&a.out.join("manifest.json"), text.as_bytes())?;
    println!("wrote {} samples to {}", dataset.len(), a.out.display());
    Ok(())
}

/// Simplified salient paths of a recording under a language's settings.
fn salient_paths(
    traj: &GestureTrajectory,
    lang: &GestureLanguage,
    ids: Option<Vec<String>>,
) -> Result<(Vec<String>, Vec<osg_core::Polyline2D>)> {
    let norm = normalize(traj)?;
    let ids = match ids {
        Some(ids) => ids,
        None => select_salient(&norm, lang.salience_alpha)?,
    };
    let polys = simplified_paths(&norm, &ids, lang.rdp_epsilon)?;
    Ok((ids, polys))
}

fn cmd_render(a: RenderArgs) -> Result<()> {
    let lang = language_or_default(a.lang.as_deref())?;
    let gestures = read_gestures(&a.input)?;
    let first = gestures.first().ok_or_else(|| usage("no complete gesture in stream"))?;
    let (_, polys) = salient_paths(first, &lang, a.salient)?;
    let img = rasterize(&polys, lang.raster_config)?;
    let bytes = if a.out.extension().is_some_and(|x| x == "pgm") { write_pgm(&img) } else { write_pbm(&img) };
    write_atomic(&a.out, &bytes)
}

#[derive(Serialize)]
struct Described {
    salient_keypoints: Vec<String>,
    descriptors: DescriptorSet,
}

fn cmd_describe(a: DescribeArgs) -> Result<()> {
    let lang = language_or_default(a.lang.as_deref())?;
    let mut out = Vec::new();
    for g in read_gestures(&a.input)? {
        let (ids, polys) = salient_paths(&g, &lang, None)?;
        let descriptors = canonical_descriptors(&polys, lang.raster_config)?;
        out.push(Described { salient_keypoints: ids, descriptors });
    }
    print_json(&out)
}

#[derive(Serialize)]
struct BenchReport {
    frames: usize,
    references: usize,
    iters: usize,
    mean_ms: f64,
    median_ms: f64,
    p95_ms: f64,
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    if a.iters == 0 {
        return Err(usage("--iters must be at least 1"));
    }
    let lang = load_language(&a.lang)?;
    let gestures = read_gestures(&a.input)?;
    let g = gestures.first().ok_or_else(|| usage("no complete gesture in stream"))?;
    let mut ms = Vec::with_capacity(a.iters);
    for _ in 0..a.iters {
        let t = Instant::now();
        std::hint::black_box(recognize(std::hint::black_box(g), &lang)?);
        ms.push(t.elapsed().as_secs_f64() * 1e3);
    }
    ms.sort_by(f64::total_cmp);
    let pick = |q: f64| ms[((q * (ms.len() - 1) as f64).round() as usize).min(ms.len() - 1)];
    let report = BenchReport {
        frames: g.len(),
        references: lang.len(),
        iters: a.iters,
        mean_ms: ms.iter().sum::<f64>() / ms.len() as f64,
        median_ms: pick(0.5),
        p95_ms: pick(0.95),
    };
    if a.json {
        return print_json(&report);
    }
    println!(
        "{} frames vs {} references, {} iterations: mean {:.2} ms, median {:.2} ms, p95 {:.2} ms",
        report.frames, report.references, report.iters, report.mean_ms, report.median_ms, report.p95_ms
    );
    Ok(())
}

fn cmd_demos(a: DemosArgs) -> Result<()> {
    let names: &[&str] = match a.vocabulary {
        Vocabulary::Small => &SMALL_VOCABULARY,
        Vocabulary::Large => &LARGE_VOCABULARY,
    };
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    for name in names {
        let stream = demos::demonstration_stream(name, a.frames)
            .ok_or_else(|| usage(format!("cannot script `{name}` with {} frames", a.frames)))?;
        fs::write(a.out.join(format!("{name}.jsonl")), stream.to_jsonl())?;
    }
    println!("wrote {} demonstrations to {}", names.len(), a.out.display());
    Ok(())
}
