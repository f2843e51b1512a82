//! Per-frame focal-length transform: back-project, re-center, splat.

use nalgebra::Vector3;

use crate::error::Result;
use crate::frame::RgbdFrame;
use crate::geometry::{apply_motion, backproject, recentering_motion, Intrinsics, RecenteringSpec, RigidMotion};
use crate::reproject::{splat, SparseRgbdFrame};

#[derive(Clone, Debug)]
pub struct TransformedFrame {
    pub sparse: SparseRgbdFrame,
    pub motion: RigidMotion,
    pub intrinsics: Intrinsics,
}

impl TransformedFrame {
    pub fn translation(&self) -> Vector3<f64> {
        *self.motion.translation()
    }
}

/// Re-image `frame` (taken with `source`) through a camera with focal
/// `spec.f_new`, turned by `spec.angle` and moved to the re-centering
/// translation. The raster size and principal point are kept.
pub fn transform_frame(frame: &RgbdFrame, source: &Intrinsics, spec: &RecenteringSpec) -> Result<TransformedFrame> {
    let cloud = backproject(frame, source)?;
    let motion = recentering_motion(&cloud, source, spec)?;
    let intrinsics = source.with_focal(spec.f_new)?;
    let sparse = splat(&apply_motion(&cloud, &motion), &intrinsics);
    Ok(TransformedFrame { sparse, motion, intrinsics })
}
