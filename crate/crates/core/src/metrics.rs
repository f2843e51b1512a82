//! Depth evaluation metrics and the reference MSE / BerHu losses.
//!
//! A pixel takes part when its ground truth is finite and positive and, if a
//! cap is set, not beyond the cap.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{is_valid_depth, DepthMap};

/// Accuracy thresholds `1.25`, `1.25²`, `1.25³`.
pub const DELTA_THRESHOLDS: [f64; 3] = [1.25, 1.25 * 1.25, 1.25 * 1.25 * 1.25];

/// Fraction of the maximum residual used as the BerHu switch point.
pub const BERHU_C_FRACTION: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub rel: f64,
    pub rms: f64,
    /// Mean over valid pixels with a positive prediction; NaN if there are none.
    pub log10: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub valid_pixel_count: usize,
    /// Valid pixels whose prediction was not positive. They are left out of
    /// `log10` and never count as accurate.
    pub nonpositive_pred_count: usize,
}

/// Running sums behind a [`MetricsReport`]; merging accumulators gives the
/// pooled, pixel-weighted report over several frames.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MetricsAccumulator {
    count: usize,
    abs_rel: f64,
    sq: f64,
    log10: f64,
    log10_count: usize,
    within: [usize; 3],
}

impl MetricsAccumulator {
    pub fn push(&mut self, pred: f64, gt: f64) {
        let diff = pred - gt;
        self.count += 1;
        self.abs_rel += diff.abs() / gt;
        self.sq += diff * diff;
        if pred > 0.0 && pred.is_finite() {
            self.log10 += (pred.log10() - gt.log10()).abs();
            self.log10_count += 1;
            let ratio = (pred / gt).max(gt / pred);
            for (hit, t) in self.within.iter_mut().zip(DELTA_THRESHOLDS) {
                if ratio < t {
                    *hit += 1;
                }
            }
        }
    }

    pub fn merge(&mut self, other: &Self) {
        self.count += other.count;
        self.abs_rel += other.abs_rel;
        self.sq += other.sq;
        self.log10 += other.log10;
        self.log10_count += other.log10_count;
        for (a, b) in self.within.iter_mut().zip(other.within) {
            *a += b;
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn finish(&self) -> Result<MetricsReport> {
        if self.count == 0 {
            return Err(Error::EmptyEvaluation);
        }
        let n = self.count as f64;
        let log10 = if self.log10_count > 0 { self.log10 / self.log10_count as f64 } else { f64::NAN };
        Ok(MetricsReport {
            rel: self.abs_rel / n,
            rms: (self.sq / n).sqrt(),
            log10,
            delta1: self.within[0] as f64 / n,
            delta2: self.within[1] as f64 / n,
            delta3: self.within[2] as f64 / n,
            valid_pixel_count: self.count,
            nonpositive_pred_count: self.count - self.log10_count,
        })
    }
}

fn check_dims(pred: &DepthMap, gt: &DepthMap) -> Result<()> {
    if pred.dims() != gt.dims() {
        return Err(Error::DimensionMismatch { expected: gt.dims(), actual: pred.dims() });
    }
    Ok(())
}

fn is_evaluated(gt: f64, cap: Option<f64>) -> bool {
    is_valid_depth(gt) && cap.is_none_or(|c| gt <= c)
}

/// Valid `(pred, gt)` pairs in raster order.
pub fn valid_pairs<'a>(
    pred: &'a DepthMap,
    gt: &'a DepthMap,
    cap: Option<f64>,
) -> Result<impl Iterator<Item = (f64, f64)> + 'a> {
    check_dims(pred, gt)?;
    Ok(pred
        .data
        .iter()
        .zip(&gt.data)
        .filter(move |&(_, &g)| is_evaluated(g, cap))
        .map(|(&p, &g)| (p, g)))
}

pub fn accumulate(pred: &DepthMap, gt: &DepthMap, cap: Option<f64>) -> Result<MetricsAccumulator> {
    let mut acc = MetricsAccumulator::default();
    for (p, g) in valid_pairs(pred, gt, cap)? {
        acc.push(p, g);
    }
    Ok(acc)
}

/// rel, rms, log10 and δ accuracies over the valid pixels of `gt`.
pub fn evaluate(pred: &DepthMap, gt: &DepthMap, cap: Option<f64>) -> Result<MetricsReport> {
    accumulate(pred, gt, cap)?.finish()
}

/// Mean squared error over valid ground-truth pixels.
pub fn mse_loss(pred: &DepthMap, gt: &DepthMap) -> Result<f64> {
    let (n, sum) = valid_pairs(pred, gt, None)?.fold((0usize, 0.0), |(n, s), (p, g)| (n + 1, s + (p - g) * (p - g)));
    if n == 0 {
        return Err(Error::EmptyEvaluation);
    }
    Ok(sum / n as f64)
}

/// Per-residual reverse Huber value: L1 up to `c`, `(r² + c²) / 2c` beyond.
#[inline]
pub fn berhu(residual: f64, c: f64) -> f64 {
    let a = residual.abs();
    if a <= c {
        a
    } else {
        (residual * residual + c * c) / (2.0 * c)
    }
}

/// Mean BerHu penalty with `c = 0.05 · max |residual|` over the evaluated set.
pub fn berhu_loss(pred: &DepthMap, gt: &DepthMap) -> Result<f64> {
    let residuals: Vec<f64> = valid_pairs(pred, gt, None)?.map(|(p, g)| p - g).collect();
    if residuals.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let max = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    if max == 0.0 {
        return Ok(0.0);
    }
    let c = BERHU_C_FRACTION * max;
    Ok(residuals.iter().map(|&r| berhu(r, c)).sum::<f64>() / residuals.len() as f64)
}
