//! PNG storage for RGB-D frames: 8-bit RGB color and 16-bit grayscale depth
//! holding `round(depth_m * depth_scale)`, with 0 meaning "no reading".

use std::path::Path;

use image::{DynamicImage, ImageBuffer, Luma, Rgb as RgbPixel};

use crate::error::{Error, Result};
use crate::frame::{is_valid_depth, DepthMap, Rgb, RgbdFrame};

pub const DEFAULT_DEPTH_SCALE: f64 = 1000.0;

fn open(path: &Path) -> Result<DynamicImage> {
    let reader = image::ImageReader::open(path).map_err(|source| Error::Read { path: path.into(), source })?;
    let reader = reader
        .with_guessed_format()
        .map_err(|source| Error::Read { path: path.into(), source })?;
    reader.decode().map_err(|source| Error::Decode { path: path.into(), source })
}

fn check_scale(depth_scale: f64) -> Result<()> {
    if !(depth_scale.is_finite() && depth_scale > 0.0) {
        return Err(Error::Input(format!("depth scale must be positive, got {depth_scale}")));
    }
    Ok(())
}

pub fn load_color(path: &Path) -> Result<(usize, usize, Vec<Rgb>)> {
    match open(path)? {
        DynamicImage::ImageRgb8(img) => {
            let (w, h) = img.dimensions();
            Ok((w as usize, h as usize, img.pixels().map(|p| p.0).collect()))
        }
        other => Err(Error::BitDepth { path: path.into(), expected: "8-bit RGB", found: format!("{:?}", other.color()) }),
    }
}

pub fn load_depth(path: &Path, depth_scale: f64) -> Result<DepthMap> {
    check_scale(depth_scale)?;
    match open(path)? {
        DynamicImage::ImageLuma16(img) => {
            let (w, h) = img.dimensions();
            let data = img.pixels().map(|p| p.0[0] as f64 / depth_scale).collect();
            DepthMap::new(w as usize, h as usize, data)
        }
        other => Err(Error::BitDepth {
            path: path.into(),
            expected: "16-bit grayscale",
            found: format!("{:?}", other.color()),
        }),
    }
}

pub fn load_rgbd(color_path: &Path, depth_path: &Path, depth_scale: f64) -> Result<RgbdFrame> {
    let (w, h, color) = load_color(color_path)?;
    let depth = load_depth(depth_path, depth_scale)?;
    if depth.dims() != (w, h) {
        return Err(Error::DimensionMismatch { expected: (w, h), actual: depth.dims() });
    }
    RgbdFrame::new(w, h, color, depth.data)
}

/// Quantized depth plus the number of valid samples that had to be clamped
/// into `1..=65535`.
pub fn quantize_depth(depth: &[f64], depth_scale: f64) -> (Vec<u16>, usize) {
    let mut clamped = 0;
    let raw = depth
        .iter()
        .map(|&d| {
            if !is_valid_depth(d) {
                return 0;
            }
            let q = (d * depth_scale).round();
            if q > u16::MAX as f64 {
                clamped += 1;
                u16::MAX
            } else if q < 1.0 {
                clamped += 1;
                1
            } else {
                q as u16
            }
        })
        .collect();
    (raw, clamped)
}

pub fn save_color(path: &Path, width: usize, height: usize, color: &[Rgb]) -> Result<()> {
    let buf: Vec<u8> = color.iter().flatten().copied().collect();
    let img = ImageBuffer::<RgbPixel<u8>, _>::from_raw(width as u32, height as u32, buf)
        .ok_or_else(|| Error::Input("color buffer does not match its dimensions".into()))?;
    img.save(path).map_err(|source| Error::Encode { path: path.into(), source })
}

/// Returns the clamped-sample count.
pub fn save_depth(path: &Path, depth: &DepthMap, depth_scale: f64) -> Result<usize> {
    check_scale(depth_scale)?;
    let (raw, clamped) = quantize_depth(&depth.data, depth_scale);
    let img = ImageBuffer::<Luma<u16>, _>::from_raw(depth.width as u32, depth.height as u32, raw)
        .ok_or_else(|| Error::Input("depth buffer does not match its dimensions".into()))?;
    img.save(path).map_err(|source| Error::Encode { path: path.into(), source })?;
    Ok(clamped)
}

/// Returns the number of depth samples clamped into the 16-bit range.
pub fn save_rgbd(frame: &RgbdFrame, color_path: &Path, depth_path: &Path, depth_scale: f64) -> Result<usize> {
    save_color(color_path, frame.width, frame.height, &frame.color)?;
    save_depth(depth_path, &frame.depth_map(), depth_scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantization_rules() {
        let (raw, clamped) = quantize_depth(&[2.0, 0.0, -3.0, f64::NAN, 0.0001, 70.0, 1.2345], 1000.0);
        assert_eq!(raw, vec![2000, 0, 0, 0, 1, 65535, 1235]);
        assert_eq!(clamped, 2);
    }

    #[test]
    fn round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let (c, d) = (dir.path().join("a.png"), dir.path().join("a_depth.png"));
        let frame = RgbdFrame::new(
            3,
            2,
            vec![[1, 2, 3], [4, 5, 6], [7, 8, 9], [10, 11, 12], [13, 14, 15], [16, 17, 18]],
            vec![2.0, 0.0, 1.0004, 3.25, 0.5, 65.0],
        )
        .unwrap();
        assert_eq!(save_rgbd(&frame, &c, &d, 1000.0).unwrap(), 0);
        let back = load_rgbd(&c, &d, 1000.0).unwrap();
        assert_eq!(back.color, frame.color);
        assert_eq!(back.depth[0], 2.0);
        assert_eq!(back.depth[1], 0.0);
        assert!(!back.is_valid(1));
        for (a, b) in back.depth.iter().zip(&frame.depth) {
            assert!((a - b).abs() <= 0.5 / 1000.0 + 1e-12);
        }

        // color in place of depth and vice versa
        assert!(matches!(load_rgbd(&d, &c, 1000.0), Err(Error::BitDepth { .. })));
        assert!(matches!(load_depth(&c, 1000.0), Err(Error::BitDepth { .. })));
        assert!(matches!(load_rgbd(&dir.path().join("nope.png"), &d, 1000.0), Err(Error::Read { .. })));

        let small = dir.path().join("small_depth.png");
        save_depth(&small, &DepthMap::filled(2, 2, 1.0), 1000.0).unwrap();
        assert!(matches!(load_rgbd(&c, &small, 1000.0), Err(Error::DimensionMismatch { .. })));
    }
}
