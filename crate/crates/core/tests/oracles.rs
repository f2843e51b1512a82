mod common;

use nalgebra::Point3;
use proptest::prelude::*;
use rand::Rng;

use common::*;
use vfl::ambiguity::{generate_pair, PlaneScene};
use vfl::geometry::{
    apply_motion, backproject, project, recentering_motion, recentering_translation, rotation_about_axis, Axis,
    Intrinsics, RecenterAxis, RecenteringSpec,
};
use vfl::holefill::fill;
use vfl::metrics::{berhu_loss, evaluate, mse_loss};
use vfl::receptive_field::{count_map, theoretical_size, LayerSpec};
use vfl::reproject::splat;
use vfl::transform::transform_frame;
use vfl::DepthMap;

proptest! {
    #[test]
    fn project_inverts_backproject(
        f in 50.0f64..2000.0,
        u0 in 0.0f64..640.0,
        v0 in 0.0f64..480.0,
        u in 0u32..640,
        v in 0u32..480,
        z in 0.05f64..100.0,
    ) {
        let k = Intrinsics::new(f, u0, v0, 640, 480).unwrap();
        let x = (u as f64 - u0) * z / f;
        let y = (v as f64 - v0) * z / f;
        let p = project(&Point3::new(x, y, z), &k).unwrap();
        prop_assert!((p.u - u as f64).abs() < 1e-9);
        prop_assert!((p.v - v as f64).abs() < 1e-9);
        prop_assert_eq!(p.depth, z);
    }

    #[test]
    fn rotations_are_orthonormal(angle in -10.0f64..10.0, axis in 0usize..3) {
        let axis = [Axis::X, Axis::Y, Axis::Z][axis];
        let r = rotation_about_axis(axis, angle).unwrap();
        let gram = r.transpose() * r;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((gram[(i, j)] - want).abs() <= 1e-12);
            }
        }
        prop_assert!((r.determinant() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn berhu_dominates_l1(r in -100.0f64..100.0, c in 1e-6f64..10.0) {
        let b = vfl::metrics::berhu(r, c);
        prop_assert!(b >= r.abs());
        if r.abs() <= c {
            prop_assert_eq!(b, r.abs());
        } else {
            prop_assert!(b > r.abs());
        }
    }

    #[test]
    fn metrics_are_permutation_invariant(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (pred, gt) = random_maps(&mut rng);
        let n = pred.data.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let shuffle = |m: &DepthMap| DepthMap::new(n, 1, perm.iter().map(|&i| m.data[i]).collect()).unwrap();
        let (a, b) = (evaluate(&pred, &gt, None).unwrap(), evaluate(&shuffle(&pred), &shuffle(&gt), None).unwrap());
        prop_assert!((a.rel - b.rel).abs() < 1e-12);
        prop_assert!((a.rms - b.rms).abs() < 1e-12);
        prop_assert!((a.log10 - b.log10).abs() < 1e-12);
        prop_assert_eq!((a.delta1, a.delta2, a.delta3), (b.delta1, b.delta2, b.delta3));
        prop_assert!((mse_loss(&pred, &gt).unwrap() - mse_loss(&shuffle(&pred), &shuffle(&gt)).unwrap()).abs() < 1e-9);
        prop_assert!((berhu_loss(&pred, &gt).unwrap() - berhu_loss(&shuffle(&pred), &shuffle(&gt)).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn metrics_scale_correctly(seed in any::<u64>(), a in 0.01f64..100.0) {
        let mut rng = rng(seed);
        let (pred, gt) = random_maps(&mut rng);
        let scale = |m: &DepthMap| DepthMap::new(m.width, m.height, m.data.iter().map(|v| v * a).collect()).unwrap();
        let base = evaluate(&pred, &gt, None).unwrap();
        let scaled = evaluate(&scale(&pred), &scale(&gt), None).unwrap();
        prop_assert!((scaled.rms - a * base.rms).abs() <= 1e-9 * (1.0 + a * base.rms));
        prop_assert!((scaled.rel - base.rel).abs() < 1e-9);
        prop_assert!((scaled.log10 - base.log10).abs() < 1e-9);
        prop_assert!(base.delta1 <= base.delta2 && base.delta2 <= base.delta3);
        let mse = mse_loss(&pred, &gt).unwrap();
        prop_assert!((mse_loss(&scale(&pred), &scale(&gt)).unwrap() - a * a * mse).abs() <= 1e-9 * (1.0 + a * a * mse));
    }

    #[test]
    fn fill_is_complete_bounded_deterministic(seed in any::<u64>(), w in 1usize..24, h in 1usize..24) {
        let mut rng = rng(seed);
        let sparse = random_sparse(&mut rng, w, h, 0.9);
        let valid: Vec<f64> = sparse.depth.iter().zip(&sparse.hole_mask).filter(|(_, &m)| !m).map(|(&d, _)| d).collect();
        let (lo, hi) = valid.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &d| (a.min(d), b.max(d)));
        let out = fill(&sparse, seed).unwrap();
        prop_assert!(out.depth.iter().all(|&d| d >= lo && d <= hi));
        prop_assert_eq!(&out, &fill(&sparse, seed).unwrap());
        for i in 0..w * h {
            if !sparse.hole_mask[i] {
                prop_assert_eq!(out.depth[i], sparse.depth[i]);
                prop_assert_eq!(out.color[i], sparse.color[i]);
            }
        }
    }
}

#[test]
fn splat_matches_grouping_oracle() {
    let mut rng = rng(11);
    for _ in 0..50 {
        let (w, h) = (rng.random_range(1..60), rng.random_range(1..60));
        let k = Intrinsics::new(rng.random_range(20.0..800.0), w as f64 / 2.0, h as f64 / 2.0, w, h).unwrap();
        let cloud = random_cloud(&mut rng, &k, 3000);
        let out = splat(&cloud, &k);
        assert_eq!(out, splat_oracle(&cloud, &k));
        assert!(w * h - out.hole_count() <= cloud.len().min(w * h));
    }
}

#[test]
fn splat_ignores_order_without_ties() {
    let mut rng = rng(5);
    let k = Intrinsics::centered(300.0, 40, 30).unwrap();
    let mut cloud = random_cloud(&mut rng, &k, 2000);
    // unique depths
    for (i, p) in cloud.points.iter_mut().enumerate() {
        p.position.z += i as f64 * 1e-7;
    }
    let forward = splat(&cloud, &k);
    cloud.points.reverse();
    assert_eq!(forward, splat(&cloud, &k));
}

#[test]
fn dolly_zoom_is_exact_for_planes() {
    let mut rng = rng(3);
    for _ in 0..20 {
        let (w, h) = (rng.random_range(4..80), rng.random_range(4..80));
        let k = Intrinsics::new(580.0, rng.random_range(0.0..w as f64), rng.random_range(0.0..h as f64), w, h).unwrap();
        let z = rng.random_range(0.3..20.0);
        let frame = random_frame(&mut rng, w, h, Some(z));
        for f_new in [460.0, 500.0, 540.0, 580.0, 620.0, 660.0, 700.0] {
            let out = transform_frame(&frame, &k, &RecenteringSpec::focal_only(f_new).unwrap()).unwrap();
            assert_eq!(out.sparse.hole_count(), 0);
            assert_eq!(out.sparse.color, frame.color);
            for (a, b) in out.sparse.depth.iter().zip(&frame.depth) {
                assert!((a - b * f_new / 580.0).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn per_point_dolly_zoom_identity() {
    // With β = 0 each point's own translation keeps its pixel and scales depth by f'/f.
    let mut rng = rng(8);
    let k = Intrinsics::centered(580.0, 64, 48).unwrap();
    let frame = random_frame(&mut rng, 64, 48, None);
    let cloud = backproject(&frame, &k).unwrap();
    for f_new in [460.0, 700.0, 1234.5] {
        let spec = RecenteringSpec::focal_only(f_new).unwrap();
        let k_new = k.with_focal(f_new).unwrap();
        for cp in cloud.iter() {
            let single = vfl::ColoredPointCloud { points: vec![*cp] };
            let m = recentering_motion(&single, &k, &spec).unwrap();
            let p = project(&m.apply(&cp.position), &k_new).unwrap();
            let (u, v) = cp.source_pixel;
            assert!((p.u - u as f64).abs() < 1e-9 && (p.v - v as f64).abs() < 1e-9);
            assert!((p.depth - cp.position.z * f_new / 580.0).abs() < 1e-9);
        }
    }
}

#[test]
fn recentering_is_symmetric_between_axes() {
    // Swapping X and Y while flipping the angle sign mirrors the translation.
    let mut rng = rng(21);
    let k = Intrinsics::centered(580.0, 64, 64).unwrap();
    let frame = random_frame(&mut rng, 64, 64, None);
    let cloud = backproject(&frame, &k).unwrap();
    let swapped = vfl::ColoredPointCloud {
        points: cloud
            .iter()
            .map(|cp| vfl::ColoredPoint { position: Point3::new(cp.position.y, cp.position.x, cp.position.z), ..*cp })
            .collect(),
    };
    for deg in [-5.0f64, -1.0, 2.0, 5.0] {
        let ty = recentering_translation(&cloud, &k, &RecenteringSpec::new(RecenterAxis::Y, deg.to_radians(), 640.0).unwrap()).unwrap();
        let tx = recentering_translation(&swapped, &k, &RecenteringSpec::new(RecenterAxis::X, -deg.to_radians(), 640.0).unwrap()).unwrap();
        assert!((ty.x - tx.y).abs() < 1e-12 && (ty.z - tx.z).abs() < 1e-12);
        assert_eq!((ty.y, tx.x), (0.0, 0.0));
    }
}

#[test]
fn metrics_match_naive_oracle() {
    let mut rng = rng(1);
    for _ in 0..200 {
        let (pred, gt) = random_maps(&mut rng);
        let cap = if rng.random_bool(0.5) { Some(70.0) } else { None };
        let got = evaluate(&pred, &gt, cap).unwrap();
        let want = naive_metrics(&pred.data, &gt.data, cap);
        assert_eq!(got.valid_pixel_count, want.count);
        assert!((got.rel - want.rel).abs() < 1e-12);
        assert!((got.rms - want.rms).abs() < 1e-12);
        assert!((got.log10 - want.log10).abs() < 1e-12);
        assert_eq!([got.delta1, got.delta2, got.delta3], want.delta);
        assert!((mse_loss(&pred, &gt).unwrap() - naive_mse(&pred.data, &gt.data)).abs() < 1e-12 * (1.0 + naive_mse(&pred.data, &gt.data)));
        assert!((berhu_loss(&pred, &gt).unwrap() - naive_berhu(&pred.data, &gt.data)).abs() < 1e-12 * (1.0 + naive_berhu(&pred.data, &gt.data)));
    }
}

fn interior_setup(arch: &[LayerSpec]) -> ((usize, usize), (usize, usize)) {
    let jump: usize = arch.iter().map(|l| l.stride).product();
    let n = theoretical_size(arch) + 2 * jump;
    let sizes = vfl::receptive_field::plane_sizes(arch, (n, n)).unwrap();
    let (w, h) = *sizes.last().unwrap();
    ((n, n), (w / 2, h / 2))
}

#[test]
fn count_maps_match_path_enumeration() {
    for arch in common::small_architectures().iter().step_by(7) {
        let (input, node) = interior_setup(arch);
        let map = count_map(arch, input, node).unwrap();
        let oracle = path_count_oracle(arch, input, node);
        let expected_total: u64 = arch.iter().map(|l| (l.kernel * l.kernel) as u64).product();
        assert_eq!(map.total(), expected_total, "{arch:?}");
        let side = theoretical_size(arch);
        assert_eq!((map.width, map.height), (side, side), "{arch:?}");
        for y in 0..map.height {
            for x in 0..map.width {
                let pos = (map.anchor.0 + x, map.anchor.1 + y);
                assert_eq!(map.get(x, y), oracle.get(&pos).copied().unwrap_or(0), "{arch:?} at {pos:?}");
            }
        }
        // 180° symmetry
        for i in 0..map.counts.len() {
            assert_eq!(map.counts[i], map.counts[map.counts.len() - 1 - i], "{arch:?}");
        }
    }
}

#[test]
fn padded_count_maps_match_path_enumeration() {
    let arch = [LayerSpec::conv(3, 1, 1), LayerSpec::conv(5, 2, 2), LayerSpec::pool(2, 2)];
    let input = (13, 11);
    let sizes = vfl::receptive_field::plane_sizes(&arch, input).unwrap();
    let (w, h) = *sizes.last().unwrap();
    for ny in 0..h {
        for nx in 0..w {
            let map = count_map(&arch, input, (nx, ny)).unwrap();
            let oracle = path_count_oracle(&arch, input, (nx, ny));
            let total: u64 = oracle.values().sum();
            assert_eq!(map.total(), total);
            for (&(x, y), &c) in &oracle {
                assert_eq!(map.get(x - map.anchor.0, y - map.anchor.1), c);
            }
        }
    }
}

#[test]
fn stride_one_stacks_peak_in_the_center() {
    for depth in 2..=5 {
        for kernel in [3usize, 5] {
            let arch = vec![LayerSpec::conv(kernel, 1, 0); depth];
            let (input, node) = interior_setup(&arch);
            let m = count_map(&arch, input, node).unwrap();
            let c = m.width / 2;
            let center = m.get(c, c);
            for x in 0..m.width {
                for y in 0..m.height {
                    if x == 0 || y == 0 || x == m.width - 1 || y == m.height - 1 {
                        assert!(m.get(x, y) < center);
                    }
                }
            }
            for x in c..m.width - 1 {
                assert!(m.get(x, c) >= m.get(x + 1, c));
                assert!(m.get(c, x) >= m.get(c, x + 1));
            }
        }
    }
}

#[test]
fn ambiguity_agrees_with_reprojection() {
    let mut rng = rng(4);
    for _ in 0..10 {
        let template = Intrinsics::centered(1.0, 48, 40).unwrap();
        let (f1, f2) = (rng.random_range(300.0..900.0), rng.random_range(300.0..900.0));
        let d1 = rng.random_range(0.5..6.0);
        // plane big enough to fill the view
        let texel = 2.0 * d1 * 48.0 / f1 / 10.0;
        let scene = PlaneScene::checkerboard(10, 10, 1, texel, [[rng.random(), 0, 0], [0, rng.random(), 255]], d1);
        let pair = generate_pair(&scene, f1, f2, &template).unwrap();
        assert_eq!(pair.first.color, pair.second.color);
        assert_eq!(pair.first.valid_count(), 48 * 40);

        let k1 = template.with_focal(f1).unwrap();
        let via = transform_frame(&pair.first, &k1, &RecenteringSpec::focal_only(f2).unwrap()).unwrap();
        assert_eq!(via.sparse.color, pair.second.color);
        for (a, b) in via.sparse.depth.iter().zip(&pair.second.depth) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn motion_round_trip_preserves_payload() {
    let mut rng = rng(9);
    let k = Intrinsics::centered(580.0, 30, 20).unwrap();
    let frame = random_frame(&mut rng, 30, 20, None);
    let cloud = backproject(&frame, &k).unwrap();
    let spec = RecenteringSpec::new(RecenterAxis::X, 0.05, 660.0).unwrap();
    let m = recentering_motion(&cloud, &k, &spec).unwrap();
    let moved = apply_motion(&cloud, &m);
    assert_eq!(moved.len(), cloud.len());
    let back = apply_motion(&moved, &m.inverse());
    for (a, b) in back.iter().zip(cloud.iter()) {
        assert!((a.position - b.position).norm() < 1e-9);
        assert_eq!((a.color, a.source_pixel), (b.color, b.source_pixel));
    }
}
