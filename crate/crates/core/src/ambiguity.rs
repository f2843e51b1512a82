//! Focal length / depth ambiguity: a frontoparallel textured plane seen at
//! depth `D1` through focal `f1` renders to exactly the same image as the
//! plane at `D2 = f2 D1 / f1` through `f2`.

use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Rgb, RgbdFrame};
use crate::geometry::Intrinsics;

/// Depth at which focal `f2` reproduces the image seen at `d1` through `f1`.
pub fn conjugate_depth(d1: f64, f1: f64, f2: f64) -> Result<f64> {
    for (name, v) in [("depth", d1), ("f1", f1), ("f2", f2)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Input(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(f2 * d1 / f1)
}

/// Textured rectangle parallel to the image plane. Texel `(0, 0)` has its
/// top-left corner at plane coordinates `origin` (meters, camera X/Y).
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneScene {
    pub texture: Vec<Rgb>,
    pub texture_width: usize,
    pub texture_height: usize,
    /// Side of one texel in meters.
    pub texel_size: f64,
    pub origin: (f64, f64),
    /// Plane depth seen by the first camera.
    pub depth: f64,
}

impl PlaneScene {
    /// Checkerboard with `cols × rows` cells of `cell` texels, centered on the
    /// optical axis.
    pub fn checkerboard(cols: usize, rows: usize, cell: usize, texel_size: f64, colors: [Rgb; 2], depth: f64) -> Self {
        let (tw, th) = (cols * cell, rows * cell);
        let texture = (0..tw * th)
            .map(|i| colors[((i % tw) / cell + (i / tw) / cell) % 2])
            .collect();
        Self {
            texture,
            texture_width: tw,
            texture_height: th,
            texel_size,
            origin: (-(tw as f64) * texel_size / 2.0, -(th as f64) * texel_size / 2.0),
            depth,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.texture_width == 0 || self.texture_height == 0 {
            return Err(Error::Input("empty texture".into()));
        }
        if self.texture.len() != self.texture_width * self.texture_height {
            return Err(Error::Input("texture size does not match its dimensions".into()));
        }
        if !(self.texel_size.is_finite() && self.texel_size > 0.0) {
            return Err(Error::Input(format!("texel size must be positive, got {}", self.texel_size)));
        }
        if !(self.origin.0.is_finite() && self.origin.1.is_finite()) {
            return Err(Error::Input("plane origin must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmbiguityPair {
    pub f1: f64,
    pub f2: f64,
    pub d1: f64,
    pub d2: f64,
    pub first: RgbdFrame,
    pub second: RgbdFrame,
}

/// JSON record written next to the rendered pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbiguityRecord {
    pub f1: f64,
    pub f2: f64,
    pub d1: f64,
    pub d2: f64,
}

impl AmbiguityPair {
    pub fn record(&self) -> AmbiguityRecord {
        AmbiguityRecord { f1: self.f1, f2: self.f2, d1: self.d1, d2: self.d2 }
    }
}

fn rational(v: f64) -> Result<BigRational> {
    BigRational::from_f64(v).ok_or_else(|| Error::Input(format!("{v} is not a finite number")))
}

/// Texel index hit by each pixel center along one axis. Ray/plane
/// intersection and the texel lookup run in exact rational arithmetic, so the
/// result depends on `depth / f` only through its exact value.
fn texel_lookup(
    pixels: usize,
    principal: f64,
    lateral_scale: &BigRational,
    origin: f64,
    texel: f64,
    texels: usize,
) -> Result<Vec<Option<usize>>> {
    let principal = rational(principal)?;
    let origin = rational(origin)?;
    let texel = rational(texel)?;
    (0..pixels)
        .map(|p| {
            let lateral = (BigRational::from_integer(p.into()) - &principal) * lateral_scale;
            let idx = ((lateral - &origin) / &texel).floor().to_integer();
            Ok(idx.to_usize().filter(|&i| i < texels))
        })
        .collect()
}

fn render(
    scene: &PlaneScene,
    depth: &BigRational,
    f: f64,
    template: &Intrinsics,
) -> Result<(RgbdFrame, usize)> {
    let scale = depth / rational(f)?;
    let cols = texel_lookup(template.width, template.u0, &scale, scene.origin.0, scene.texel_size, scene.texture_width)?;
    let rows = texel_lookup(template.height, template.v0, &scale, scene.origin.1, scene.texel_size, scene.texture_height)?;
    let depth_m = depth.to_f64().expect("finite depth");

    let n = template.width * template.height;
    let mut color = vec![[0u8; 3]; n];
    let mut z = vec![0.0; n];
    let mut hits = 0;
    for (v, row) in rows.iter().enumerate() {
        let Some(ty) = row else { continue };
        for (u, col) in cols.iter().enumerate() {
            let Some(tx) = col else { continue };
            let idx = v * template.width + u;
            color[idx] = scene.texture[ty * scene.texture_width + tx];
            z[idx] = depth_m;
            hits += 1;
        }
    }
    Ok((RgbdFrame::new(template.width, template.height, color, z)?, hits))
}

/// Render `scene` at its depth through `f1` and at the conjugate depth
/// through `f2`, both on the raster and principal point of `template`.
/// Pixels missing the plane are black with depth 0.
pub fn generate_pair(scene: &PlaneScene, f1: f64, f2: f64, template: &Intrinsics) -> Result<AmbiguityPair> {
    scene.validate()?;
    let d2 = conjugate_depth(scene.depth, f1, f2)?;
    let d1_exact = rational(scene.depth)?;
    let d2_exact = rational(f2)? * &d1_exact / rational(f1)?;

    let (first, hits1) = render(scene, &d1_exact, f1, template)?;
    let (second, hits2) = render(scene, &d2_exact, f2, template)?;
    if hits1 == 0 || hits2 == 0 {
        return Err(Error::Input("plane is outside the field of view".into()));
    }
    Ok(AmbiguityPair { f1, f2, d1: scene.depth, d2, first, second })
}
