//! Z-buffered forward splatting of a colored point cloud onto a pixel grid.

use crate::frame::{is_valid_depth, Rgb, RgbdFrame};
use crate::geometry::{ColoredPointCloud, Intrinsics};

/// Splat output: a raster where pixels no point landed on are holes
/// (depth 0, black, `hole_mask` set).
#[derive(Clone, Debug, PartialEq)]
pub struct SparseRgbdFrame {
    pub width: usize,
    pub height: usize,
    pub color: Vec<Rgb>,
    pub depth: Vec<f64>,
    pub hole_mask: Vec<bool>,
}

impl SparseRgbdFrame {
    pub fn empty(width: usize, height: usize) -> Self {
        let n = width * height;
        Self {
            width,
            height,
            color: vec![[0; 3]; n],
            depth: vec![0.0; n],
            hole_mask: vec![true; n],
        }
    }

    /// Treat invalid depths of a dense frame as holes.
    pub fn from_frame(frame: &RgbdFrame) -> Self {
        let hole_mask: Vec<bool> = frame.depth.iter().map(|&d| !is_valid_depth(d)).collect();
        let depth = frame.depth.iter().zip(&hole_mask).map(|(&d, &h)| if h { 0.0 } else { d }).collect();
        let color = frame.color.iter().zip(&hole_mask).map(|(&c, &h)| if h { [0; 3] } else { c }).collect();
        Self { width: frame.width, height: frame.height, color, depth, hole_mask }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn hole_count(&self) -> usize {
        self.hole_mask.iter().filter(|&&h| h).count()
    }

    pub fn hole_fraction(&self) -> f64 {
        self.hole_count() as f64 / self.hole_mask.len() as f64
    }

    /// Dense view; holes keep depth 0.
    pub fn to_frame(&self) -> RgbdFrame {
        RgbdFrame {
            width: self.width,
            height: self.height,
            color: self.color.clone(),
            depth: self.depth.clone(),
        }
    }
}

/// Round half up.
#[inline]
pub fn quantize(x: f64) -> f64 {
    (x + 0.5).floor()
}

/// Project every point through `k_new`, quantize to the nearest pixel and
/// keep the closest point per pixel. Points behind the camera or outside the
/// raster are dropped. On an exact depth tie the earlier point wins.
pub fn splat(cloud: &ColoredPointCloud, k_new: &Intrinsics) -> SparseRgbdFrame {
    let (width, height) = k_new.dims();
    let mut out = SparseRgbdFrame::empty(width, height);
    for cp in cloud.iter() {
        let p = &cp.position;
        if p.z <= 0.0 || !p.z.is_finite() {
            continue;
        }
        let u = quantize(k_new.f * p.x / p.z + k_new.u0);
        let v = quantize(k_new.f * p.y / p.z + k_new.v0);
        // NaN fails both comparisons and is dropped here as well
        if !(u >= 0.0 && u < width as f64 && v >= 0.0 && v < height as f64) {
            continue;
        }
        let idx = v as usize * width + u as usize;
        if out.hole_mask[idx] || p.z < out.depth[idx] {
            out.hole_mask[idx] = false;
            out.depth[idx] = p.z;
            out.color[idx] = cp.color;
        }
    }
    out
}
