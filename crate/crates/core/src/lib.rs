//! Synthesize varying-focal-length RGB-D datasets from fixed-focal-length
//! ones, and evaluate depth predictions.
//!
//! The transform chain for one frame is [`geometry::backproject`] →
//! [`geometry::recentering_motion`] → [`geometry::apply_motion`] →
//! [`reproject::splat`] → [`holefill::fill`]; [`pipeline::run_transform`]
//! runs it over a directory. Alongside sit depth [`metrics`], effective
//! [`receptive_field`] count maps and the focal/depth [`ambiguity`]
//! constructor.

pub mod ambiguity;
pub mod error;
pub mod frame;
pub mod geometry;
pub mod holefill;
pub mod io;
pub mod metrics;
pub mod pipeline;
pub mod presets;
pub mod receptive_field;
pub mod reproject;
pub mod synthetic;
pub mod transform;

pub use error::{Error, Result};
pub use frame::{DepthMap, Rgb, RgbdFrame};
pub use geometry::{ColoredPoint, ColoredPointCloud, Intrinsics, RecenteringSpec, RigidMotion};
pub use reproject::SparseRgbdFrame;
