//! Bundled camera presets (`data/intrinsics.json`).

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::Intrinsics;

const PRESETS_JSON: &str = include_str!("../data/intrinsics.json");

#[derive(Debug, Deserialize)]
struct PresetRecord {
    name: String,
    #[serde(flatten)]
    intrinsics: Intrinsics,
}

pub fn presets() -> Vec<(String, Intrinsics)> {
    let records: Vec<PresetRecord> = serde_json::from_str(PRESETS_JSON).expect("bundled presets parse");
    records.into_iter().map(|r| (r.name, r.intrinsics)).collect()
}

pub fn preset(name: &str) -> Result<Intrinsics> {
    presets()
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, k)| k)
        .ok_or_else(|| Error::Input(format!("unknown camera preset {name:?}")))
}
