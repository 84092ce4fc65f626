//! Point set files, planar point files and input hashing.

use std::path::Path;

use ordplanes::circles::PlanarPointSet;
use ordplanes::{PointSet, Scalar};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// `{"points": [["a/b", "c/d"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarFile {
    pub points: Vec<(Scalar, Scalar)>,
}

pub struct Input {
    pub hash: String,
    pub points: Option<PointSet>,
    pub planar: Option<PlanarPointSet>,
}

impl Input {
    pub fn point_set(&self) -> &PointSet {
        self.points.as_ref().expect("point set input")
    }
}

pub fn hash_bytes(b: &[u8]) -> String {
    format!("sha256:{:x}", Sha256::digest(b))
}

pub fn to_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializes");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

/// Parses a point set file, re-checking it through the constructor.
pub fn parse_point_set(bytes: &[u8], max_field_order: u32) -> Result<PointSet, String> {
    let raw: PointSet = serde_json::from_slice(bytes).map_err(|e| format!("malformed point set: {e}"))?;
    if raw.field_order > max_field_order {
        return Err(format!(
            "field order {} exceeds --max-field-order {max_field_order}",
            raw.field_order
        ));
    }
    PointSet::new(raw.field_order, raw.points, raw.labels).map_err(|e| e.to_string())
}

pub fn load_point_set(path: &Path, max_field_order: u32) -> Result<Input, String> {
    let bytes = read(path)?;
    Ok(Input {
        hash: hash_bytes(&bytes),
        points: Some(parse_point_set(&bytes, max_field_order)?),
        planar: None,
    })
}

pub fn parse_planar(bytes: &[u8]) -> Result<PlanarPointSet, String> {
    let raw: PlanarFile = serde_json::from_slice(bytes).map_err(|e| format!("malformed planar file: {e}"))?;
    PlanarPointSet::new(raw.points).map_err(|e| e.to_string())
}

pub fn load_planar(path: &Path) -> Result<Input, String> {
    let bytes = read(path)?;
    Ok(Input {
        hash: hash_bytes(&bytes),
        points: None,
        planar: Some(parse_planar(&bytes)?),
    })
}
