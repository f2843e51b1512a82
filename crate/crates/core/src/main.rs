use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vfl::ambiguity::{generate_pair, PlaneScene};
use vfl::geometry::Intrinsics;
use vfl::pipeline::{run_eval, run_transform, RotAxis, RotDeg, TransformConfig};
use vfl::receptive_field::{count_map, load_architecture, minimal_input, plane_sizes};
use vfl::{io, Error, Result};

#[derive(Parser)]
#[command(name = "vfl", version, about = "Varying-focal-length RGB-D synthesis and depth evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Re-image an RGB-D corpus at several focal lengths.
    Transform(TransformArgs),
    /// Compare predicted depth maps against ground truth.
    Eval(EvalArgs),
    /// Effective receptive field count map of one output node.
    Rf(RfArgs),
    /// Render an image pair that is identical under two focal lengths.
    Ambiguity(AmbiguityArgs),
}

#[derive(Args)]
struct TransformArgs {
    /// JSON file with any TransformConfig fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input_dir: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    focals: Option<Vec<f64>>,
    #[arg(long)]
    source_focal: Option<f64>,
    /// none, x or y
    #[arg(long)]
    rot_axis: Option<RotAxis>,
    /// Degrees in [-5, 5] or "uniform".
    #[arg(long, allow_hyphen_values = true)]
    rot_deg: Option<RotDeg>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    depth_scale: Option<f64>,
    #[arg(long)]
    share_rotation: bool,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    pred_dir: PathBuf,
    #[arg(long)]
    gt_dir: PathBuf,
    /// Ignore ground truth beyond this many meters (70 for Make3D).
    #[arg(long)]
    cap: Option<f64>,
    #[arg(long, default_value_t = io::DEFAULT_DEPTH_SCALE)]
    depth_scale: f64,
    /// Also write the report as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct RfArgs {
    /// JSON array of {"kind", "kernel", "stride", "padding"} records.
    #[arg(long)]
    arch: PathBuf,
    /// Input plane as WxH; defaults to the theoretical receptive field size.
    #[arg(long)]
    input: Option<String>,
    /// Output node as X,Y; defaults to the center of the output plane.
    #[arg(long)]
    node: Option<String>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    pgm: Option<PathBuf>,
}

#[derive(Args)]
struct AmbiguityArgs {
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 580.0)]
    f1: f64,
    #[arg(long, default_value_t = 700.0)]
    f2: f64,
    /// Plane depth under f1, meters.
    #[arg(long, default_value_t = 2.0)]
    d1: f64,
    #[arg(long, default_value_t = 320)]
    width: usize,
    #[arg(long, default_value_t = 224)]
    height: usize,
    /// Checkerboard cells per side.
    #[arg(long, default_value_t = 12)]
    cells: usize,
    /// Checkerboard cell size, meters.
    #[arg(long, default_value_t = 0.05)]
    cell_size: f64,
    #[arg(long, default_value_t = io::DEFAULT_DEPTH_SCALE)]
    depth_scale: f64,
}

fn parse_pair(s: &str, sep: char) -> Result<(usize, usize)> {
    let bad = || Error::Input(format!("expected two integers separated by '{sep}', got {s:?}"));
    let (a, b) = s.split_once(sep).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn transform(args: TransformArgs) -> Result<bool> {
    let mut config = match (&args.config, &args.input_dir, &args.output_dir) {
        (Some(path), _, _) => TransformConfig::load(path)?,
        (None, Some(i), Some(o)) => TransformConfig::new(i, o),
        _ => return Err(Error::Input("need --config or both --input-dir and --output-dir".into())),
    };
    if let Some(v) = args.input_dir {
        config.input_dir = v;
    }
    if let Some(v) = args.output_dir {
        config.output_dir = v;
    }
    if let Some(v) = args.focals {
        config.focals = v;
    }
    if let Some(v) = args.source_focal {
        config.source_focal = v;
    }
    if let Some(v) = args.rot_axis {
        config.rot_axis = v;
    }
    if let Some(v) = args.rot_deg {
        config.rot_deg = v;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = args.depth_scale {
        config.depth_scale = v;
    }
    if let Some(v) = args.workers {
        config.workers = v;
    }
    config.share_rotation |= args.share_rotation;

    let manifest = run_transform(&config)?;
    for e in manifest.entries.iter().filter(|e| e.failed()) {
        eprintln!("failed: {} at f={}: {}", e.source_path, e.focal_px, e.error.as_deref().unwrap_or(""));
    }
    println!(
        "wrote {} outputs ({} failed) to {}",
        manifest.entries.len() - manifest.failures(),
        manifest.failures(),
        config.output_dir.display()
    );
    Ok(manifest.failures() == 0)
}

fn eval(args: EvalArgs) -> Result<bool> {
    let report = run_eval(&args.pred_dir, &args.gt_dir, args.cap, args.depth_scale)?;
    for name in &report.unmatched {
        eprintln!("unmatched: {name}");
    }
    for (stem, why) in &report.skipped {
        eprintln!("skipped {stem}: {why}");
    }
    print!("{}", report.to_table());
    if let Some(path) = args.json {
        let json = serde_json::to_string_pretty(&report)?;
        std::fs::write(&path, json + "\n").map_err(|source| Error::Write { path, source })?;
    }
    Ok(true)
}

fn rf(args: RfArgs) -> Result<bool> {
    let arch = load_architecture(&args.arch)?;
    let input = match args.input {
        Some(s) => parse_pair(&s, 'x')?,
        None => {
            let n = minimal_input(&arch);
            (n, n)
        }
    };
    let node = match args.node {
        Some(s) => parse_pair(&s, ',')?,
        None => {
            let (w, h) = *plane_sizes(&arch, input)?.last().expect("non-empty");
            (w / 2, h / 2)
        }
    };
    let map = count_map(&arch, input, node)?;
    match &args.csv {
        Some(path) => map.write_csv(path)?,
        None => print!("{}", map.to_csv()),
    }
    if let Some(path) = &args.pgm {
        map.write_pgm(path)?;
    }
    eprintln!(
        "{}x{} support at {:?}, total {}, peak {}",
        map.width,
        map.height,
        map.anchor,
        map.total(),
        map.max()
    );
    Ok(true)
}

fn ambiguity(args: AmbiguityArgs) -> Result<bool> {
    let template = Intrinsics::centered(args.f1, args.width, args.height)?;
    let scene = PlaneScene::checkerboard(
        args.cells,
        args.cells,
        1,
        args.cell_size,
        [[230, 120, 40], [30, 60, 160]],
        args.d1,
    );
    let pair = generate_pair(&scene, args.f1, args.f2, &template)?;
    let dir = &args.out_dir;
    std::fs::create_dir_all(dir).map_err(|source| Error::Write { path: dir.clone(), source })?;
    io::save_rgbd(&pair.first, &dir.join("first.png"), &dir.join("first_depth.png"), args.depth_scale)?;
    io::save_rgbd(&pair.second, &dir.join("second.png"), &dir.join("second_depth.png"), args.depth_scale)?;
    let path = dir.join("pair.json");
    let json = serde_json::to_string_pretty(&pair.record())?;
    std::fs::write(&path, json + "\n").map_err(|source| Error::Write { path, source })?;
    println!("f1={} d1={} | f2={} d2={}", pair.f1, pair.d1, pair.f2, pair.d2);
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Transform(a) => transform(a),
        Command::Eval(a) => eval(a),
        Command::Rf(a) => rf(a),
        Command::Ambiguity(a) => ambiguity(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
