//! Procedural indoor-like RGB-D frames: a gently slanted textured back wall
//! with a few frontoparallel panels in front of it. Used as the bundled test
//! corpus for the transform pipeline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frame::{Rgb, RgbdFrame};
use crate::geometry::Intrinsics;

#[derive(Clone, Debug)]
struct Panel {
    depth: f64,
    x: (f64, f64),
    y: (f64, f64),
    base: Rgb,
}

#[derive(Clone, Debug)]
pub struct SyntheticScene {
    wall_depth: f64,
    wall_slope: (f64, f64),
    wall_base: Rgb,
    panels: Vec<Panel>,
}

fn random_color(rng: &mut ChaCha8Rng) -> Rgb {
    [rng.random_range(40..=220), rng.random_range(40..=220), rng.random_range(40..=220)]
}

impl SyntheticScene {
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let wall_depth = rng.random_range(2.5..4.0);
        let wall_slope = (rng.random_range(-0.15..0.15), rng.random_range(-0.1..0.1));
        let wall_base = random_color(&mut rng);
        let panels = (0..rng.random_range(1..=3))
            .map(|_| {
                let depth = wall_depth * rng.random_range(0.85..0.95);
                let (cx, cy) = (rng.random_range(-0.5..0.5) * depth * 0.4, rng.random_range(-0.5..0.5) * depth * 0.3);
                let (hw, hh) = (rng.random_range(0.1..0.3), rng.random_range(0.1..0.3));
                Panel { depth, x: (cx - hw, cx + hw), y: (cy - hh, cy + hh), base: random_color(&mut rng) }
            })
            .collect();
        Self { wall_depth, wall_slope, wall_base, panels }
    }

    /// Nearest surface along the ray through normalized image point `(a, b)`.
    fn trace(&self, a: f64, b: f64) -> (f64, Rgb) {
        let mut z = self.wall_depth / (1.0 - self.wall_slope.0 * a - self.wall_slope.1 * b);
        let mut color = shade(self.wall_base, a * z, b * z, 0.25);
        for p in &self.panels {
            let (x, y) = (a * p.depth, b * p.depth);
            if p.depth < z && (p.x.0..p.x.1).contains(&x) && (p.y.0..p.y.1).contains(&y) {
                z = p.depth;
                color = shade(p.base, x, y, 0.08);
            }
        }
        (z, color)
    }

    pub fn render(&self, k: &Intrinsics) -> RgbdFrame {
        let n = k.width * k.height;
        let (mut color, mut depth) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for v in 0..k.height {
            for u in 0..k.width {
                let (z, c) = self.trace((u as f64 - k.u0) / k.f, (v as f64 - k.v0) / k.f);
                depth.push(z);
                color.push(c);
            }
        }
        RgbdFrame { width: k.width, height: k.height, color, depth }
    }
}

/// Checker of `cell`-meter squares modulating `base`, plus a soft gradient.
fn shade(base: Rgb, x: f64, y: f64, cell: f64) -> Rgb {
    let checker = ((x / cell).floor() + (y / cell).floor()).rem_euclid(2.0);
    let gain = 0.75 + 0.25 * checker + 0.05 * (x * 3.0).sin();
    base.map(|c| (c as f64 * gain).clamp(0.0, 255.0) as u8)
}

/// Camera of the bundled corpus.
pub fn corpus_intrinsics() -> Intrinsics {
    Intrinsics::centered(580.0, 320, 224).expect("valid corpus intrinsics")
}

/// `count` frames; frame `i` depends only on `(seed, i)`.
pub fn corpus(count: usize, seed: u64) -> Vec<RgbdFrame> {
    let k = corpus_intrinsics();
    (0..count)
        .map(|i| SyntheticScene::random(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64)).render(&k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frames_are_dense_and_reproducible() {
        let a = corpus(3, 7);
        let b = corpus(3, 7);
        assert_eq!(a, b);
        for f in &a {
            assert_eq!(f.valid_count(), f.width * f.height);
            assert!(f.depth.iter().all(|&d| (1.5..6.0).contains(&d)));
        }
        assert_ne!(a[0], a[1]);
    }
}
