//! A textured plane seen through two focal lengths at conjugate depths gives
//! identical images, so a single image cannot fix absolute depth.

use vfl::ambiguity::{conjugate_depth, generate_pair, PlaneScene};
use vfl::geometry::Intrinsics;

fn main() -> vfl::Result<()> {
    let template = Intrinsics::centered(1.0, 160, 120)?;
    let scene = PlaneScene::checkerboard(16, 12, 2, 0.02, [[240, 200, 40], [20, 40, 120]], 2.0);

    for (f1, f2) in [(580.0, 460.0), (580.0, 700.0), (50.0, 105.0)] {
        let pair = generate_pair(&scene, f1, f2, &template)?;
        println!(
            "f1 {f1:>5} at {:.3} m | f2 {f2:>5} at {:.3} m | identical images: {}",
            pair.d1,
            pair.d2,
            pair.first.color == pair.second.color
        );
    }
    println!("conjugate_depth(3.0, 50, 105) = {}", conjugate_depth(3.0, 50.0, 105.0)?);
    Ok(())
}
