//! Re-render a frame at every target focal length with the camera moved
//! along its axis. On a frontoparallel plane the image is unchanged and all
//! depths scale by f'/f; on a scene with depth variation the single shared
//! translation leaves a few holes.

use vfl::geometry::{backproject, Intrinsics, RecenteringSpec};
use vfl::pipeline::DEFAULT_FOCALS;
use vfl::synthetic::{corpus, corpus_intrinsics};
use vfl::transform::transform_frame;
use vfl::RgbdFrame;

fn sweep(name: &str, frame: &RgbdFrame, k: &Intrinsics) -> vfl::Result<()> {
    println!("{name}: {} points, f = {}", backproject(frame, k)?.len(), k.f);
    for &f_new in &DEFAULT_FOCALS {
        let out = transform_frame(frame, k, &RecenteringSpec::focal_only(f_new)?)?;
        let worst = out
            .sparse
            .depth
            .iter()
            .zip(&frame.depth)
            .filter(|(a, _)| **a > 0.0)
            .map(|(a, b)| (a / b - f_new / k.f).abs())
            .fold(0.0, f64::max);
        println!(
            "  f' = {f_new:>3}: camera z {:+.3} m, holes {:.2}%, image unchanged: {}, max |ratio - f'/f| {worst:.1e}",
            out.translation().z,
            100.0 * out.sparse.hole_fraction(),
            out.sparse.color == frame.color,
        );
    }
    Ok(())
}

fn main() -> vfl::Result<()> {
    let k = corpus_intrinsics();
    let scene = &corpus(1, 0)[0];
    let plane = RgbdFrame::new(k.width, k.height, scene.color.clone(), vec![2.5; k.width * k.height])?;
    sweep("plane at 2.5 m", &plane, &k)?;
    sweep("synthetic room", scene, &k)?;
    Ok(())
}
