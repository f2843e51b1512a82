//! Score a predicted depth map against ground truth and compute both
//! training losses.

use vfl::metrics::{berhu_loss, evaluate, mse_loss, MetricsAccumulator};
use vfl::DepthMap;

fn main() -> vfl::Result<()> {
    // 0 in the ground truth marks a missing measurement
    let gt = DepthMap::new(4, 2, vec![1.0, 2.0, 3.0, 0.0, 5.0, 6.0, 8.0, 12.0])?;
    let pred = DepthMap::new(4, 2, vec![1.1, 1.8, 3.5, 4.0, 4.0, 6.2, 9.9, 11.0])?;

    let report = evaluate(&pred, &gt, None)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    println!("capped at 10 m: {:?}", evaluate(&pred, &gt, Some(10.0))?);
    println!("mse {:.4}, berhu {:.4}", mse_loss(&pred, &gt)?, berhu_loss(&pred, &gt)?);

    // pooled over frames, weighted by valid pixels
    let mut total = MetricsAccumulator::default();
    for (p, g) in [(&pred, &gt), (&gt, &gt)] {
        total.merge(&vfl::metrics::accumulate(p, g, None)?);
    }
    println!("pooled over {} pixels: rel {:.4}", total.count(), total.finish()?.rel);
    Ok(())
}
