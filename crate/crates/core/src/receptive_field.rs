//! Effective receptive field as path counts.
//!
//! Starting from a single output node with count 1, each layer is walked
//! backwards and every node adds its count to each input position its window
//! reads. The final grid says how many distinct computation paths from the
//! output node touch each input pixel, independent of weights. Pooling
//! windows are counted exactly like convolution windows; reads that fall in
//! the padding are dropped.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayerKind {
    Conv,
    Pool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub kind: LayerKind,
    pub kernel: usize,
    pub stride: usize,
    #[serde(default)]
    pub padding: usize,
}

impl LayerSpec {
    pub fn conv(kernel: usize, stride: usize, padding: usize) -> Self {
        Self { kind: LayerKind::Conv, kernel, stride, padding }
    }

    pub fn pool(kernel: usize, stride: usize) -> Self {
        Self { kind: LayerKind::Pool, kernel, stride, padding: 0 }
    }

    fn validate(&self) -> Result<()> {
        if self.kernel == 0 || self.stride == 0 {
            return Err(Error::Input(format!("layer {self:?} needs kernel >= 1 and stride >= 1")));
        }
        Ok(())
    }

    /// Output length along one axis, `None` when the window does not fit.
    pub fn output_len(&self, input: usize) -> Option<usize> {
        let span = input + 2 * self.padding;
        (span >= self.kernel).then(|| (span - self.kernel) / self.stride + 1)
    }
}

/// Read a JSON array of layer records.
pub fn load_architecture(path: &Path) -> Result<Vec<LayerSpec>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Read { path: path.into(), source })?;
    Ok(serde_json::from_str(&text)?)
}

/// Per-axis plane lengths from the input plane through every layer.
pub fn plane_sizes(arch: &[LayerSpec], input: (usize, usize)) -> Result<Vec<(usize, usize)>> {
    let mut sizes = vec![input];
    for layer in arch {
        layer.validate()?;
        let (w, h) = *sizes.last().expect("non-empty");
        match (layer.output_len(w), layer.output_len(h)) {
            (Some(ow), Some(oh)) => sizes.push((ow, oh)),
            _ => {
                return Err(Error::Input(format!(
                    "layer {layer:?} does not fit its {w}x{h} input plane"
                )))
            }
        }
    }
    Ok(sizes)
}

/// Theoretical receptive field side of one output node ignoring borders:
/// `r = 1 + Σ (k_l - 1) Π_{j<l} s_j`.
pub fn theoretical_size(arch: &[LayerSpec]) -> usize {
    let mut size = 1;
    let mut jump = 1;
    for layer in arch {
        size += (layer.kernel - 1) * jump;
        jump *= layer.stride;
    }
    size
}

/// Input plane just large enough to hold the full theoretical receptive field
/// of output node `(0, 0)` when there is no padding.
pub fn minimal_input(arch: &[LayerSpec]) -> usize {
    theoretical_size(arch)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountMap {
    pub width: usize,
    pub height: usize,
    /// Input-plane coordinate `(x, y)` of grid cell `(0, 0)`.
    pub anchor: (usize, usize),
    pub counts: Vec<u64>,
}

impl CountMap {
    pub fn get(&self, x: usize, y: usize) -> u64 {
        self.counts[y * self.width + x]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.counts.chunks(self.width)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    /// Counts scaled so the maximum maps to 255.
    pub fn to_heatmap(&self) -> Vec<u8> {
        let max = self.max().max(1) as f64;
        self.counts.iter().map(|&c| (c as f64 / max * 255.0).round() as u8).collect()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|source| Error::Write { path: path.into(), source })
    }

    /// Binary 8-bit PGM heatmap.
    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|source| Error::Write { path: path.into(), source })?;
        let encoder = image::codecs::pnm::PnmEncoder::new(std::io::BufWriter::new(file))
            .with_subtype(image::codecs::pnm::PnmSubtype::Graymap(image::codecs::pnm::SampleEncoding::Binary));
        image::ImageEncoder::write_image(
            encoder,
            &self.to_heatmap(),
            self.width as u32,
            self.height as u32,
            image::ExtendedColorType::L8,
        )
        .map_err(|source| Error::Encode { path: path.into(), source })
    }
}

/// Count map of output node `(x, y)` over an input plane of `input` size.
/// The returned grid is cropped to the nonzero bounding box.
pub fn count_map(arch: &[LayerSpec], input: (usize, usize), output_node: (usize, usize)) -> Result<CountMap> {
    if arch.is_empty() {
        return Err(Error::Input("architecture has no layers".into()));
    }
    let sizes = plane_sizes(arch, input)?;
    let (ow, oh) = *sizes.last().expect("non-empty");
    if output_node.0 >= ow || output_node.1 >= oh {
        return Err(Error::Input(format!(
            "output node {output_node:?} outside the {ow}x{oh} output plane"
        )));
    }

    let mut plane = vec![0u64; ow * oh];
    plane[output_node.1 * ow + output_node.0] = 1;
    for (layer, window) in arch.iter().zip(sizes.windows(2)).rev() {
        let ((iw, ih), (lw, _)) = (window[0], window[1]);
        let mut below = vec![0u64; iw * ih];
        for (idx, &count) in plane.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let (ox, oy) = (idx % lw, idx / lw);
            let xs = window_range(ox, layer, iw);
            for iy in window_range(oy, layer, ih) {
                for ix in xs.clone() {
                    below[iy * iw + ix] += count;
                }
            }
        }
        plane = below;
    }

    crop_nonzero(&plane, input.0)
}

/// Unpadded input positions read by output position `o`.
fn window_range(o: usize, layer: &LayerSpec, len: usize) -> std::ops::Range<usize> {
    let start = (o * layer.stride) as isize - layer.padding as isize;
    let end = start + layer.kernel as isize;
    start.clamp(0, len as isize) as usize..end.clamp(0, len as isize) as usize
}

fn crop_nonzero(plane: &[u64], width: usize) -> Result<CountMap> {
    let nonzero = plane.iter().enumerate().filter(|&(_, &c)| c > 0).map(|(i, _)| (i % width, i / width));
    let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
    for (x, y) in nonzero {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if x0 == usize::MAX {
        return Err(Error::Input("output node reads only padding".into()));
    }
    let (w, h) = (x1 - x0 + 1, y1 - y0 + 1);
    let mut counts = Vec::with_capacity(w * h);
    for y in y0..=y1 {
        counts.extend_from_slice(&plane[y * width + x0..=y * width + x1]);
    }
    Ok(CountMap { width: w, height: h, anchor: (x0, y0), counts })
}
