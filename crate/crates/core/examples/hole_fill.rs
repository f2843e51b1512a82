//! Fill the holes of a rotated re-rendering and write before/after images.
//!
//! `cargo run --example hole_fill -- out/`

use std::path::PathBuf;

use vfl::geometry::{RecenterAxis, RecenteringSpec};
use vfl::holefill::fill;
use vfl::io::{save_rgbd, DEFAULT_DEPTH_SCALE};
use vfl::synthetic::{corpus, corpus_intrinsics};
use vfl::transform::transform_frame;

fn main() -> vfl::Result<()> {
    let out_dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "hole_fill_out".into()));
    std::fs::create_dir_all(&out_dir).map_err(|source| vfl::Error::Write { path: out_dir.clone(), source })?;

    let k = corpus_intrinsics();
    let frame = &corpus(1, 1)[0];
    let spec = RecenteringSpec::new(RecenterAxis::X, 4f64.to_radians(), 660.0)?;
    let sparse = transform_frame(frame, &k, &spec)?.sparse;
    let filled = fill(&sparse, 42)?;
    println!("{} holes ({:.2}%) filled", sparse.hole_count(), 100.0 * sparse.hole_fraction());

    save_rgbd(&sparse.to_frame(), &out_dir.join("sparse.png"), &out_dir.join("sparse_depth.png"), DEFAULT_DEPTH_SCALE)?;
    save_rgbd(&filled, &out_dir.join("filled.png"), &out_dir.join("filled_depth.png"), DEFAULT_DEPTH_SCALE)?;
    println!("wrote sparse/filled pairs to {}", out_dir.display());
    Ok(())
}
