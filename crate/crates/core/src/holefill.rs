//! Hole filling with 3×3 neighborhood templates.
//!
//! Holes are classified by which of their eight neighbors hold data:
//!
//! * **A**: all four 4-neighbors valid. Filled with their mean.
//! * **C**: all eight neighbors empty. Copies the left (`m`) or top (`n`)
//!   neighbor once raster order has reached it, picked by a seeded coin.
//! * **B**: anything else. Filled with the mean of the valid 3×3 neighbors.
//!
//! Passes repeat until no holes remain. Depth and color share one
//! classification so the RGB-D pair stays aligned.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::{Rgb, RgbdFrame};
use crate::reproject::SparseRgbdFrame;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NeighborhoodClass {
    A,
    B,
    C,
}

/// 3×3 validity window, `window[row][col]`, `true` = pixel has data.
pub type Window = [[bool; 3]; 3];

pub fn classify(window: &Window) -> Result<NeighborhoodClass> {
    if window[1][1] {
        return Err(Error::NotAHole);
    }
    let four = [window[0][1], window[1][0], window[1][2], window[2][1]];
    if four.iter().all(|&v| v) {
        return Ok(NeighborhoodClass::A);
    }
    if window.iter().flatten().all(|&v| !v) {
        return Ok(NeighborhoodClass::C);
    }
    Ok(NeighborhoodClass::B)
}

const FOUR: [(isize, isize); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];
const EIGHT: [(isize, isize); 8] = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];

struct Raster {
    width: usize,
    height: usize,
    depth: Vec<f64>,
    color: Vec<Rgb>,
    filled: Vec<bool>,
}

impl Raster {
    fn neighbor(&self, x: usize, y: usize, dx: isize, dy: isize) -> Option<usize> {
        let nx = x.checked_add_signed(dx)?;
        let ny = y.checked_add_signed(dy)?;
        (nx < self.width && ny < self.height).then(|| ny * self.width + nx)
    }

    /// Off-image neighbors count as holes.
    fn window(&self, x: usize, y: usize) -> Window {
        let mut w = [[false; 3]; 3];
        for (dy, row) in (-1isize..=1).zip(w.iter_mut()) {
            for (dx, cell) in (-1isize..=1).zip(row.iter_mut()) {
                *cell = self.neighbor(x, y, dx, dy).is_some_and(|i| self.filled[i]);
            }
        }
        w
    }

    fn mean_of(&self, x: usize, y: usize, offsets: &[(isize, isize)]) -> Option<(f64, Rgb)> {
        let mut n = 0usize;
        let mut depth = 0.0;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut rgb = [0u32; 3];
        for &(dx, dy) in offsets {
            let Some(i) = self.neighbor(x, y, dx, dy).filter(|&i| self.filled[i]) else {
                continue;
            };
            n += 1;
            depth += self.depth[i];
            lo = lo.min(self.depth[i]);
            hi = hi.max(self.depth[i]);
            for (acc, &c) in rgb.iter_mut().zip(&self.color[i]) {
                *acc += c as u32;
            }
        }
        if n == 0 {
            return None;
        }
        // clamp absorbs last-ulp rounding in the division
        let depth = (depth / n as f64).clamp(lo, hi);
        let color = rgb.map(|s| (s as f64 / n as f64 + 0.5).floor() as u8);
        Some((depth, color))
    }
}

/// One fair coin per pixel, keyed on `(seed, pixel index)` so the outcome
/// does not depend on traversal order.
struct PixelCoin(ChaCha8Rng);

impl PixelCoin {
    fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// `true` selects the left neighbor.
    fn pick_left(&mut self, idx: usize) -> bool {
        self.0.set_word_pos(idx as u128);
        self.0.next_u32() & 1 == 0
    }
}

/// Fill every hole of `frame`. Identical `(frame, seed)` give bit-identical
/// output.
pub fn fill(frame: &SparseRgbdFrame, seed: u64) -> Result<RgbdFrame> {
    let mut r = Raster {
        width: frame.width,
        height: frame.height,
        depth: frame.depth.clone(),
        color: frame.color.clone(),
        filled: frame.hole_mask.iter().map(|&h| !h).collect(),
    };
    let mut holes: Vec<usize> = (0..r.filled.len()).filter(|&i| !r.filled[i]).collect();
    if holes.is_empty() {
        return Ok(RgbdFrame { width: r.width, height: r.height, color: r.color, depth: r.depth });
    }
    if holes.len() == r.filled.len() {
        return Err(Error::Unfillable);
    }

    let mut coin = PixelCoin::new(seed);
    while !holes.is_empty() {
        let before = holes.len();
        let classes: Vec<NeighborhoodClass> = holes
            .iter()
            .map(|&i| classify(&r.window(i % r.width, i / r.width)).expect("hole"))
            .collect();

        // A and B read only the previous pass.
        let interpolated: Vec<Option<(f64, Rgb)>> = holes
            .par_iter()
            .zip(&classes)
            .map(|(&i, class)| {
                let (x, y) = (i % r.width, i / r.width);
                match class {
                    NeighborhoodClass::A => r.mean_of(x, y, &FOUR),
                    NeighborhoodClass::B => r.mean_of(x, y, &EIGHT),
                    NeighborhoodClass::C => None,
                }
            })
            .collect();
        for (&i, value) in holes.iter().zip(&interpolated) {
            if let Some((d, c)) = *value {
                r.depth[i] = d;
                r.color[i] = c;
                r.filled[i] = true;
            }
        }

        // C propagates in raster order from already filled left/top pixels.
        for (&i, class) in holes.iter().zip(&classes) {
            if *class != NeighborhoodClass::C {
                continue;
            }
            let (x, y) = (i % r.width, i / r.width);
            let left = (x > 0 && r.filled[i - 1]).then(|| i - 1);
            let top = (y > 0 && r.filled[i - r.width]).then(|| i - r.width);
            let src = match (left, top) {
                (Some(m), Some(n)) => {
                    if coin.pick_left(i) {
                        m
                    } else {
                        n
                    }
                }
                (Some(m), None) => m,
                (None, Some(n)) => n,
                (None, None) => continue,
            };
            r.depth[i] = r.depth[src];
            r.color[i] = r.color[src];
            r.filled[i] = true;
        }

        holes.retain(|&i| !r.filled[i]);
        if holes.len() == before {
            break;
        }
    }

    if !holes.is_empty() {
        fill_nearest(&mut r, &holes);
    }
    Ok(RgbdFrame { width: r.width, height: r.height, color: r.color, depth: r.depth })
}

/// Copy the closest filled pixel (Euclidean, lowest index on ties).
fn fill_nearest(r: &mut Raster, holes: &[usize]) {
    let sources: Vec<usize> = (0..r.filled.len()).filter(|&i| r.filled[i]).collect();
    let w = r.width as i64;
    for &h in holes {
        let (hx, hy) = (h as i64 % w, h as i64 / w);
        let src = *sources
            .iter()
            .min_by_key(|&&s| {
                let (dx, dy) = (s as i64 % w - hx, s as i64 / w - hy);
                (dx * dx + dy * dy, s)
            })
            .expect("at least one filled pixel");
        r.depth[h] = r.depth[src];
        r.color[h] = r.color[src];
    }
    for &h in holes {
        r.filled[h] = true;
    }
}
