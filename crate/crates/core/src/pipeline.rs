//! Batch dataset transformation and directory evaluation.
//!
//! Input corpora are flat directories of `<stem>.png` (8-bit RGB) and
//! `<stem>_depth.png` (16-bit depth) pairs. Every frame is re-imaged at each
//! configured focal length and written as `<stem>_f<focal>.png` /
//! `<stem>_f<focal>_depth.png` next to a `manifest.json`.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Intrinsics, RecenterAxis, RecenteringSpec};
use crate::holefill;
use crate::io;
use crate::metrics::{self, MetricsAccumulator, MetricsReport};
use crate::transform::transform_frame;

pub const DEFAULT_FOCALS: [f64; 6] = [460.0, 500.0, 540.0, 620.0, 660.0, 700.0];
pub const DEFAULT_SOURCE_FOCAL: f64 = 580.0;
pub const MAX_ROTATION_DEG: f64 = 5.0;
pub const MANIFEST_FILE: &str = "manifest.json";
pub const DEPTH_SUFFIX: &str = "_depth.png";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotAxis {
    #[default]
    None,
    X,
    Y,
}

impl FromStr for RotAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "x" => Ok(Self::X),
            "y" => Ok(Self::Y),
            _ => Err(Error::Input(format!("rotation axis must be none, x or y, got {s:?}"))),
        }
    }
}

/// Fixed angle in degrees, or a fresh draw from `[-5°, 5°]` per output.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RotDeg {
    Fixed(f64),
    Uniform(UniformTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UniformTag {
    Uniform,
}

impl RotDeg {
    pub const UNIFORM: Self = Self::Uniform(UniformTag::Uniform);
}

impl Default for RotDeg {
    fn default() -> Self {
        Self::Fixed(0.0)
    }
}

impl FromStr for RotDeg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "uniform" {
            return Ok(Self::UNIFORM);
        }
        s.parse::<f64>()
            .map(Self::Fixed)
            .map_err(|_| Error::Input(format!("rotation must be degrees or \"uniform\", got {s:?}")))
    }
}

impl fmt::Display for RotDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fixed(d) => write!(f, "{d}"),
            Self::Uniform(_) => f.write_str("uniform"),
        }
    }
}

fn default_focals() -> Vec<f64> {
    DEFAULT_FOCALS.to_vec()
}

fn default_source_focal() -> f64 {
    DEFAULT_SOURCE_FOCAL
}

fn default_depth_scale() -> f64 {
    io::DEFAULT_DEPTH_SCALE
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformConfig {
    pub input_dir: PathBuf,
    pub output_dir: PathBuf,
    #[serde(default = "default_focals")]
    pub focals: Vec<f64>,
    #[serde(default = "default_source_focal")]
    pub source_focal: f64,
    #[serde(default)]
    pub rot_axis: RotAxis,
    #[serde(default)]
    pub rot_deg: RotDeg,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_depth_scale")]
    pub depth_scale: f64,
    /// Draw one rotation per frame and reuse it for every focal.
    #[serde(default)]
    pub share_rotation: bool,
    /// Worker threads; 0 picks the number of CPUs. Never affects outputs.
    #[serde(default)]
    pub workers: usize,
}

impl TransformConfig {
    pub fn new(input_dir: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            input_dir: input_dir.into(),
            output_dir: output_dir.into(),
            focals: default_focals(),
            source_focal: DEFAULT_SOURCE_FOCAL,
            rot_axis: RotAxis::None,
            rot_deg: RotDeg::default(),
            seed: 0,
            depth_scale: io::DEFAULT_DEPTH_SCALE,
            share_rotation: false,
            workers: 0,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read { path: path.into(), source })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.focals.is_empty() {
            return Err(Error::Input("focal list is empty".into()));
        }
        if let Some(f) = self.focals.iter().find(|f| !(f.is_finite() && **f > 0.0)) {
            return Err(Error::Input(format!("focal lengths must be positive, got {f}")));
        }
        if !(self.source_focal.is_finite() && self.source_focal > 0.0) {
            return Err(Error::Input(format!("source focal must be positive, got {}", self.source_focal)));
        }
        if let RotDeg::Fixed(d) = self.rot_deg {
            if !d.is_finite() || d.abs() > MAX_ROTATION_DEG {
                return Err(Error::Input(format!("rotation must lie within ±{MAX_ROTATION_DEG}°, got {d}")));
            }
        }
        if !(self.depth_scale.is_finite() && self.depth_scale > 0.0) {
            return Err(Error::Input(format!("depth scale must be positive, got {}", self.depth_scale)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Color file of the source pair, relative to the input directory.
    pub source_path: String,
    /// Color file of the output pair, relative to the output directory;
    /// `None` when the entry failed.
    pub output_path: Option<String>,
    pub output_depth_path: Option<String>,
    pub focal_px: f64,
    pub rot_axis: RotAxis,
    pub rot_deg: f64,
    /// Camera translation `[Cx, Cy, Cz]` in meters.
    pub translation: Option<[f64; 3]>,
    pub seed: u64,
    pub hole_fraction_before_fill: Option<f64>,
    /// Depth samples clamped into the 16-bit range when writing.
    pub depth_clamped: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ManifestEntry {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub source_focal: f64,
    pub depth_scale: f64,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.failed()).count()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read { path: path.into(), source })?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Stems with both `<stem>.png` and `<stem>_depth.png`, sorted.
pub fn discover_pairs(dir: &Path) -> Result<Vec<String>> {
    let names = file_names(dir)?;
    Ok(names
        .iter()
        .filter_map(|n| n.strip_suffix(DEPTH_SUFFIX))
        .filter(|stem| names.contains(&format!("{stem}.png")))
        .map(str::to_owned)
        .collect())
}

fn file_names(dir: &Path) -> Result<BTreeSet<String>> {
    let read = |source| Error::Read { path: dir.into(), source };
    let mut names = BTreeSet::new();
    for entry in std::fs::read_dir(dir).map_err(read)? {
        let entry = entry.map_err(read)?;
        if entry.file_type().map_err(read)?.is_file() {
            if let Some(name) = entry.file_name().to_str() {
                names.insert(name.to_owned());
            }
        }
    }
    Ok(names)
}

fn keyed_u64(seed: u64, stream: u64, word: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(word as u128 * 2);
    rng.next_u64()
}

/// Hole-fill seed of output `(frame, focal)`.
pub fn output_seed(seed: u64, frame: usize, focal: usize) -> u64 {
    keyed_u64(seed, frame as u64, 2 * focal as u64)
}

/// Rotation in degrees for output `(frame, focal)`.
pub fn rotation_deg(config: &TransformConfig, frame: usize, focal: usize) -> f64 {
    match (config.rot_axis, config.rot_deg) {
        (RotAxis::None, _) => 0.0,
        (_, RotDeg::Fixed(d)) => d,
        (_, RotDeg::Uniform(_)) => {
            let key = if config.share_rotation { 0 } else { focal };
            let mut rng = ChaCha8Rng::seed_from_u64(keyed_u64(config.seed, frame as u64, 2 * key as u64 + 1));
            rng.random_range(-MAX_ROTATION_DEG..=MAX_ROTATION_DEG)
        }
    }
}

pub fn output_stem(stem: &str, focal: f64) -> String {
    format!("{stem}_f{focal}")
}

struct Job<'a> {
    config: &'a TransformConfig,
    stem: &'a str,
    frame_idx: usize,
    focal_idx: usize,
}

impl Job<'_> {
    fn focal(&self) -> f64 {
        self.config.focals[self.focal_idx]
    }

    fn entry(&self) -> ManifestEntry {
        ManifestEntry {
            source_path: format!("{}.png", self.stem),
            output_path: None,
            output_depth_path: None,
            focal_px: self.focal(),
            rot_axis: self.config.rot_axis,
            rot_deg: rotation_deg(self.config, self.frame_idx, self.focal_idx),
            translation: None,
            seed: output_seed(self.config.seed, self.frame_idx, self.focal_idx),
            hole_fraction_before_fill: None,
            depth_clamped: 0,
            error: None,
        }
    }

    fn run(&self, frame: &crate::frame::RgbdFrame) -> ManifestEntry {
        let mut entry = self.entry();
        if let Err(e) = self.run_into(frame, &mut entry) {
            entry.output_path = None;
            entry.output_depth_path = None;
            entry.error = Some(e.to_string());
        }
        entry
    }

    fn run_into(&self, frame: &crate::frame::RgbdFrame, entry: &mut ManifestEntry) -> Result<()> {
        let source = Intrinsics::centered(self.config.source_focal, frame.width, frame.height)?;
        let axis = match self.config.rot_axis {
            RotAxis::X => RecenterAxis::X,
            RotAxis::Y | RotAxis::None => RecenterAxis::Y,
        };
        let spec = RecenteringSpec::new(axis, entry.rot_deg.to_radians(), self.focal())?;
        let out = transform_frame(frame, &source, &spec)?;
        entry.translation = Some(out.translation().into());
        entry.hole_fraction_before_fill = Some(out.sparse.hole_fraction());
        let filled = holefill::fill(&out.sparse, entry.seed)?;

        let stem = output_stem(self.stem, self.focal());
        let (color_name, depth_name) = (format!("{stem}.png"), format!("{stem}{DEPTH_SUFFIX}"));
        entry.depth_clamped = io::save_rgbd(
            &filled,
            &self.config.output_dir.join(&color_name),
            &self.config.output_dir.join(&depth_name),
            self.config.depth_scale,
        )?;
        entry.output_path = Some(color_name);
        entry.output_depth_path = Some(depth_name);
        Ok(())
    }
}

/// Transform every RGB-D pair of `config.input_dir` at every focal length and
/// write the outputs plus `manifest.json` to `config.output_dir`. Per-output
/// failures are recorded in the manifest and do not stop the batch.
pub fn run_transform(config: &TransformConfig) -> Result<DatasetManifest> {
    config.validate()?;
    let stems = discover_pairs(&config.input_dir)?;
    if stems.is_empty() {
        return Err(Error::Input(format!("no RGB-D pairs found in {}", config.input_dir.display())));
    }
    std::fs::create_dir_all(&config.output_dir)
        .map_err(|source| Error::Write { path: config.output_dir.clone(), source })?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Input(format!("cannot start worker pool: {e}")))?;

    let per_frame: Vec<Vec<ManifestEntry>> = pool.install(|| {
        stems
            .par_iter()
            .enumerate()
            .map(|(frame_idx, stem)| {
                let jobs: Vec<Job> = (0..config.focals.len())
                    .map(|focal_idx| Job { config, stem, frame_idx, focal_idx })
                    .collect();
                let loaded = io::load_rgbd(
                    &config.input_dir.join(format!("{stem}.png")),
                    &config.input_dir.join(format!("{stem}{DEPTH_SUFFIX}")),
                    config.depth_scale,
                );
                match loaded {
                    Ok(frame) => jobs.par_iter().map(|job| job.run(&frame)).collect(),
                    Err(e) => jobs
                        .iter()
                        .map(|job| ManifestEntry { error: Some(e.to_string()), ..job.entry() })
                        .collect(),
                }
            })
            .collect()
    });

    let manifest = DatasetManifest {
        source_focal: config.source_focal,
        depth_scale: config.depth_scale,
        entries: per_frame.into_iter().flatten().collect(),
    };
    let path = config.output_dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&path, json + "\n").map_err(|source| Error::Write { path, source })?;
    Ok(manifest)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub stem: String,
    #[serde(flatten)]
    pub report: MetricsReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub aggregate: MetricsReport,
    pub frames: Vec<FrameReport>,
    /// Depth files present in only one of the two directories.
    pub unmatched: Vec<String>,
    /// Matched frames that could not be evaluated, with the reason.
    pub skipped: Vec<(String, String)>,
}

impl EvalReport {
    pub fn to_table(&self) -> String {
        let width = self.frames.iter().map(|f| f.stem.len()).chain([9]).max().unwrap_or(9);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>8}  {:>8}  {:>8}  {:>7}  {:>7}  {:>7}  {:>9}",
            "frame", "rel", "rms", "log10", "d1", "d2", "d3", "pixels"
        );
        let row = |out: &mut String, name: &str, r: &MetricsReport| {
            let _ = writeln!(
                out,
                "{:<width$}  {:>8.4}  {:>8.4}  {:>8.4}  {:>7.4}  {:>7.4}  {:>7.4}  {:>9}",
                name, r.rel, r.rms, r.log10, r.delta1, r.delta2, r.delta3, r.valid_pixel_count
            );
        };
        for f in &self.frames {
            row(&mut out, &f.stem, &f.report);
        }
        row(&mut out, "aggregate", &self.aggregate);
        out
    }
}

/// Evaluate every `<stem>_depth.png` of `pred_dir` against the same file in
/// `gt_dir`. The aggregate pools all valid pixels of all frames.
pub fn run_eval(pred_dir: &Path, gt_dir: &Path, cap: Option<f64>, depth_scale: f64) -> Result<EvalReport> {
    let depth_files = |dir: &Path| -> Result<BTreeSet<String>> {
        Ok(file_names(dir)?.into_iter().filter(|n| n.ends_with(DEPTH_SUFFIX)).collect())
    };
    let pred = depth_files(pred_dir)?;
    let gt = depth_files(gt_dir)?;
    let unmatched: Vec<String> = pred.symmetric_difference(&gt).cloned().collect();
    let matched: Vec<&String> = pred.intersection(&gt).collect();
    if matched.is_empty() {
        return Err(Error::Input(format!(
            "no depth files shared by {} and {}",
            pred_dir.display(),
            gt_dir.display()
        )));
    }

    let results: Vec<(String, Result<MetricsAccumulator>)> = matched
        .par_iter()
        .map(|name| {
            let stem = name.strip_suffix(DEPTH_SUFFIX).unwrap_or(name).to_owned();
            let acc = io::load_depth(&pred_dir.join(name), depth_scale).and_then(|p| {
                let g = io::load_depth(&gt_dir.join(name), depth_scale)?;
                metrics::accumulate(&p, &g, cap)
            });
            (stem, acc)
        })
        .collect();

    let mut total = MetricsAccumulator::default();
    let mut frames = Vec::new();
    let mut skipped = Vec::new();
    for (stem, acc) in results {
        match acc.and_then(|a| a.finish().map(|r| (a, r))) {
            Ok((acc, report)) => {
                total.merge(&acc);
                frames.push(FrameReport { stem, report });
            }
            Err(e) => skipped.push((stem, e.to_string())),
        }
    }
    Ok(EvalReport { aggregate: total.finish()?, frames, unmatched, skipped })
}
