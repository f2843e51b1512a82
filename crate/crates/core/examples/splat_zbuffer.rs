//! Forward-project a cloud with a rotated camera. The nearest point wins each
//! pixel; pixels that receive nothing are holes.

use vfl::geometry::{apply_motion, backproject, recentering_motion, RecenterAxis, RecenteringSpec};
use vfl::reproject::splat;
use vfl::synthetic::{corpus, corpus_intrinsics};

fn main() -> vfl::Result<()> {
    let k = corpus_intrinsics();
    let frame = &corpus(1, 3)[0];
    let cloud = backproject(frame, &k)?;

    for deg in [-5.0f64, -2.5, 0.0, 2.5, 5.0] {
        let spec = RecenteringSpec::new(RecenterAxis::Y, deg.to_radians(), 620.0)?;
        let motion = recentering_motion(&cloud, &k, &spec)?;
        let moved = apply_motion(&cloud, &motion);
        let sparse = splat(&moved, &k.with_focal(spec.f_new)?);
        let hit = sparse.width * sparse.height - sparse.hole_count();
        println!(
            "yaw {deg:+.1} deg, f' = 620: {} points -> {hit} pixels, {} holes ({:.2}%)",
            moved.len(),
            sparse.hole_count(),
            100.0 * sparse.hole_fraction()
        );
    }
    Ok(())
}
