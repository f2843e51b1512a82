//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::Point3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vfl::geometry::{ColoredPoint, ColoredPointCloud, Intrinsics};
use vfl::receptive_field::LayerSpec;
use vfl::{DepthMap, Rgb, RgbdFrame, SparseRgbdFrame};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Group points by their rounded pixel and keep the minimum depth; ties keep
/// the lowest cloud index.
pub fn splat_oracle(cloud: &ColoredPointCloud, k: &Intrinsics) -> SparseRgbdFrame {
    let mut groups: BTreeMap<(i64, i64), Vec<(f64, usize)>> = BTreeMap::new();
    for (i, cp) in cloud.points.iter().enumerate() {
        let p = cp.position;
        if p.z <= 0.0 {
            continue;
        }
        let u = ((k.f * p.x / p.z + k.u0) + 0.5).floor() as i64;
        let v = ((k.f * p.y / p.z + k.v0) + 0.5).floor() as i64;
        groups.entry((u, v)).or_default().push((p.z, i));
    }
    let mut out = SparseRgbdFrame::empty(k.width, k.height);
    for ((u, v), members) in groups {
        if u < 0 || v < 0 || u >= k.width as i64 || v >= k.height as i64 {
            continue;
        }
        let (z, i) = members
            .into_iter()
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)))
            .unwrap();
        let idx = v as usize * k.width + u as usize;
        out.hole_mask[idx] = false;
        out.depth[idx] = z;
        out.color[idx] = cloud.points[i].color;
    }
    out
}

/// Random cloud in front of the camera. Depths are drawn from a small set so
/// exact ties occur.
pub fn random_cloud(rng: &mut ChaCha8Rng, k: &Intrinsics, max_points: usize) -> ColoredPointCloud {
    let n = rng.random_range(0..=max_points);
    let depths: Vec<f64> = (0..8).map(|_| rng.random_range(0.5..8.0)).collect();
    (0..n)
        .map(|i| {
            let z = if rng.random_bool(0.5) { depths[rng.random_range(0..depths.len())] } else { rng.random_range(0.5..8.0) };
            let u = rng.random_range(-5.0..k.width as f64 + 5.0);
            let v = rng.random_range(-5.0..k.height as f64 + 5.0);
            ColoredPoint {
                position: Point3::new((u - k.u0) * z / k.f, (v - k.v0) * z / k.f, z),
                color: [rng.random(), rng.random(), rng.random()],
                source_pixel: (i as u32, 0),
            }
        })
        .collect()
}

pub fn random_frame(rng: &mut ChaCha8Rng, width: usize, height: usize, depth: Option<f64>) -> RgbdFrame {
    let n = width * height;
    let color: Vec<Rgb> = (0..n).map(|_| [rng.random(), rng.random(), rng.random()]).collect();
    let depth = match depth {
        Some(z) => vec![z; n],
        None => (0..n).map(|_| rng.random_range(0.5..10.0)).collect(),
    };
    RgbdFrame::new(width, height, color, depth).unwrap()
}

/// Dense frame with up to `max_hole_fraction` of its pixels knocked out.
pub fn random_sparse(rng: &mut ChaCha8Rng, width: usize, height: usize, max_hole_fraction: f64) -> SparseRgbdFrame {
    let frame = random_frame(rng, width, height, None);
    let mut sparse = SparseRgbdFrame::from_frame(&frame);
    let holes = (rng.random_range(0.0..=max_hole_fraction) * (width * height) as f64) as usize;
    let mut idx: Vec<usize> = (0..width * height).collect();
    for i in 0..holes.min(width * height - 1) {
        let j = rng.random_range(i..idx.len());
        idx.swap(i, j);
        let p = idx[i];
        sparse.hole_mask[p] = true;
        sparse.depth[p] = 0.0;
        sparse.color[p] = [0; 3];
    }
    sparse
}

#[derive(Debug, Clone, Copy)]
pub struct NaiveMetrics {
    pub rel: f64,
    pub rms: f64,
    pub log10: f64,
    pub delta: [f64; 3],
    pub count: usize,
}

/// Textbook per-pixel metrics over gt > 0 (and gt <= cap). Predictions are
/// assumed positive.
pub fn naive_metrics(pred: &[f64], gt: &[f64], cap: Option<f64>) -> NaiveMetrics {
    let keep: Vec<usize> = (0..gt.len())
        .filter(|&i| gt[i] > 0.0 && gt[i].is_finite() && cap.is_none_or(|c| gt[i] <= c))
        .collect();
    let n = keep.len() as f64;
    let mut rel = 0.0;
    let mut sq = 0.0;
    let mut lg = 0.0;
    let mut delta = [0.0; 3];
    for &i in &keep {
        let (y, t) = (pred[i], gt[i]);
        rel += (y - t).abs() / t;
        sq += (y - t).powi(2);
        lg += (y.log10() - t.log10()).abs();
        let ratio = if y / t > t / y { y / t } else { t / y };
        for (k, d) in delta.iter_mut().enumerate() {
            if ratio < 1.25f64.powi(k as i32 + 1) {
                *d += 1.0;
            }
        }
    }
    NaiveMetrics { rel: rel / n, rms: (sq / n).sqrt(), log10: lg / n, delta: delta.map(|d| d / n), count: keep.len() }
}

pub fn naive_mse(pred: &[f64], gt: &[f64]) -> f64 {
    let pairs: Vec<(f64, f64)> = pred.iter().zip(gt).filter(|(_, &g)| g > 0.0).map(|(&p, &g)| (p, g)).collect();
    pairs.iter().map(|(p, g)| (p - g) * (p - g)).sum::<f64>() / pairs.len() as f64
}

pub fn naive_berhu(pred: &[f64], gt: &[f64]) -> f64 {
    let r: Vec<f64> = pred.iter().zip(gt).filter(|(_, &g)| g > 0.0).map(|(&p, &g)| p - g).collect();
    let c = 0.05 * r.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if c == 0.0 {
        return 0.0;
    }
    r.iter()
        .map(|&x| if x.abs() < c { x.abs() } else if x.abs() > c { (x * x + c * c) / (2.0 * c) } else { c })
        .sum::<f64>()
        / r.len() as f64
}

pub fn random_maps(rng: &mut ChaCha8Rng) -> (DepthMap, DepthMap) {
    let (w, h) = (rng.random_range(1..=16), rng.random_range(1..=16));
    let gt: Vec<f64> = (0..w * h)
        .map(|i| if i == 0 || rng.random_bool(0.85) { rng.random_range(0.1..80.0) } else { 0.0 })
        .collect();
    let pred: Vec<f64> = gt.iter().map(|&g| if g > 0.0 && rng.random_bool(0.1) { g } else { rng.random_range(0.1..80.0) }).collect();
    (DepthMap::new(w, h, pred).unwrap(), DepthMap::new(w, h, gt).unwrap())
}

/// Count, for every input position, the computation paths from `node`
/// through the stack by explicit recursion.
pub fn path_count_oracle(arch: &[LayerSpec], input: (usize, usize), node: (usize, usize)) -> BTreeMap<(usize, usize), u64> {
    let mut sizes = vec![input];
    for l in arch {
        let (w, h) = *sizes.last().unwrap();
        let out = |n: usize| (n + 2 * l.padding - l.kernel) / l.stride + 1;
        sizes.push((out(w), out(h)));
    }
    let mut counts = BTreeMap::new();
    fn walk(
        arch: &[LayerSpec],
        sizes: &[(usize, usize)],
        layer: usize,
        pos: (i64, i64),
        counts: &mut BTreeMap<(usize, usize), u64>,
    ) {
        if layer == 0 {
            *counts.entry((pos.0 as usize, pos.1 as usize)).or_insert(0) += 1;
            return;
        }
        let l = &arch[layer - 1];
        let (w, h) = sizes[layer - 1];
        for dy in 0..l.kernel as i64 {
            for dx in 0..l.kernel as i64 {
                let x = pos.0 * l.stride as i64 - l.padding as i64 + dx;
                let y = pos.1 * l.stride as i64 - l.padding as i64 + dy;
                if x >= 0 && y >= 0 && x < w as i64 && y < h as i64 {
                    walk(arch, sizes, layer - 1, (x, y), counts);
                }
            }
        }
    }
    walk(arch, &sizes, arch.len(), (node.0 as i64, node.1 as i64), &mut counts);
    counts
}

/// Every architecture of 1..=3 layers with kernels 1..=5, strides 1..=2,
/// mixing conv and pool, no padding.
pub fn small_architectures() -> Vec<Vec<LayerSpec>> {
    let mut singles = Vec::new();
    for kernel in 1..=5 {
        for stride in 1..=2 {
            singles.push(LayerSpec::conv(kernel, stride, 0));
            singles.push(LayerSpec::pool(kernel, stride));
        }
    }
    let mut out: Vec<Vec<LayerSpec>> = singles.iter().map(|&l| vec![l]).collect();
    for &a in &singles {
        for &b in &singles {
            out.push(vec![a, b]);
            for &c in &singles {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}
