//! Expand a small RGB-D set into six focal lengths with random ±5° yaw, then
//! evaluate the outputs against themselves as a sanity check.
//!
//! `cargo run --release --example transform_dataset -- work/`

use std::path::PathBuf;

use vfl::io::save_rgbd;
use vfl::pipeline::{run_eval, run_transform, RotAxis, RotDeg, TransformConfig};
use vfl::synthetic::corpus;

fn main() -> vfl::Result<()> {
    let work = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "transform_out".into()));
    let (input, output) = (work.join("input"), work.join("output"));
    std::fs::create_dir_all(&input).map_err(|source| vfl::Error::Write { path: input.clone(), source })?;
    for (i, frame) in corpus(4, 0).iter().enumerate() {
        save_rgbd(frame, &input.join(format!("frame{i}.png")), &input.join(format!("frame{i}_depth.png")), 1000.0)?;
    }

    let mut config = TransformConfig::new(&input, &output);
    config.rot_axis = RotAxis::Y;
    config.rot_deg = RotDeg::UNIFORM;
    config.seed = 2024;
    let manifest = run_transform(&config)?;
    for e in &manifest.entries {
        println!(
            "{:<14} f {:>3} yaw {:+.2} holes {:.2}%",
            e.output_path.as_deref().unwrap_or("-"),
            e.focal_px,
            e.rot_deg,
            100.0 * e.hole_fraction_before_fill.unwrap_or(f64::NAN)
        );
    }
    println!("manifest: {}", output.join(vfl::pipeline::MANIFEST_FILE).display());

    let report = run_eval(&output, &output, None, config.depth_scale)?;
    print!("{}", report.to_table());
    Ok(())
}
