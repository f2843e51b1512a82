//! In-memory RGB-D rasters.

use crate::error::{Error, Result};

pub type Rgb = [u8; 3];

/// A depth sample is valid when it is finite and strictly positive.
#[inline]
pub fn is_valid_depth(d: f64) -> bool {
    d.is_finite() && d > 0.0
}

/// Row-major metric depth raster. Non-positive or non-finite samples are invalid.
#[derive(Clone, Debug, PartialEq)]
pub struct DepthMap {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl DepthMap {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Input(format!("empty depth map {width}x{height}")));
        }
        if data.len() != width * height {
            return Err(Error::Input(format!(
                "depth buffer has {} samples, expected {}",
                data.len(),
                width * height
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self { width, height, data: vec![value; width * height] }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }
}

/// Color image plus metric depth (meters). Depth 0 marks a missing reading.
#[derive(Clone, Debug, PartialEq)]
pub struct RgbdFrame {
    pub width: usize,
    pub height: usize,
    pub color: Vec<Rgb>,
    pub depth: Vec<f64>,
}

impl RgbdFrame {
    pub fn new(width: usize, height: usize, color: Vec<Rgb>, depth: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Input(format!("empty frame {width}x{height}")));
        }
        let n = width * height;
        if color.len() != n || depth.len() != n {
            return Err(Error::Input(format!(
                "frame buffers have {} color and {} depth samples, expected {n}",
                color.len(),
                depth.len()
            )));
        }
        Ok(Self { width, height, color, depth })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    pub fn is_valid(&self, idx: usize) -> bool {
        is_valid_depth(self.depth[idx])
    }

    pub fn validity_mask(&self) -> Vec<bool> {
        self.depth.iter().map(|&d| is_valid_depth(d)).collect()
    }

    pub fn valid_count(&self) -> usize {
        self.depth.iter().filter(|&&d| is_valid_depth(d)).count()
    }

    pub fn depth_map(&self) -> DepthMap {
        DepthMap { width: self.width, height: self.height, data: self.depth.clone() }
    }
}
