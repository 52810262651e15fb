//! The JSON map-file format.
//!
//! ```json
//! {"surface": "P2", "components": ["x*z + y^2", "y*z + x^2", "x^2 + y^2"]}
//! ```
//!
//! Maps of `P1xP1` list two pairs in `t0, t1, w0, w1`. Optional
//! `"parameters"` map names to rational strings and are substituted while
//! parsing.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use surfdyn_core::number::parse_rational;
use surfdyn_core::{Rational, RationalSelfMap, Surface};

#[derive(Debug, thiserror::Error)]
pub enum MapIoError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("malformed map file: {0}")]
    Json(#[from] serde_json::Error),

    #[error("unknown surface `{0}` (expected P2 or P1xP1)")]
    UnknownSurface(String),

    #[error("{0}")]
    Shape(String),

    #[error("parameter `{name}` has non-rational value `{value}`")]
    BadParameter { name: String, value: String },

    #[error(transparent)]
    Core(#[from] surfdyn_core::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Components {
    /// Three forms in `x, y, z`.
    Plane(Vec<String>),
    /// Two pairs of bihomogeneous forms.
    Product(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub surface: String,
    pub components: Components,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, String>,
}

impl MapFile {
    pub fn plane(components: [&str; 3]) -> Self {
        MapFile {
            surface: "P2".into(),
            components: Components::Plane(components.iter().map(|s| s.to_string()).collect()),
            parameters: BTreeMap::new(),
        }
    }

    pub fn product(first: [&str; 2], second: [&str; 2]) -> Self {
        let pair = |p: [&str; 2]| p.iter().map(|s| s.to_string()).collect();
        MapFile {
            surface: "P1xP1".into(),
            components: Components::Product(vec![pair(first), pair(second)]),
            parameters: BTreeMap::new(),
        }
    }

    pub fn with_parameter(mut self, name: &str, value: &Rational) -> Self {
        self.parameters.insert(name.into(), surfdyn_core::number::format_rational(value));
        self
    }

    pub fn from_json(text: &str) -> Result<Self, MapIoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, MapIoError> {
        let text =
            fs::read_to_string(path).map_err(|source| MapIoError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map files serialize")
    }

    pub fn surface(&self) -> Result<Surface, MapIoError> {
        match self.surface.as_str() {
            "P2" => Ok(Surface::P2),
            "P1xP1" => Ok(Surface::P1xP1),
            other => Err(MapIoError::UnknownSurface(other.into())),
        }
    }

    pub fn parameter_values(&self) -> Result<BTreeMap<String, Rational>, MapIoError> {
        self.parameters
            .iter()
            .map(|(k, v)| {
                parse_rational(v)
                    .map(|q| (k.clone(), q))
                    .ok_or_else(|| MapIoError::BadParameter { name: k.clone(), value: v.clone() })
            })
            .collect()
    }
}

/// Parses, checks gradings and normalizes.
pub fn load_map(file: &MapFile) -> Result<RationalSelfMap, MapIoError> {
    let surface = file.surface()?;
    let params = file.parameter_values()?;
    match (surface, &file.components) {
        (Surface::P2, Components::Plane(c)) if c.len() == 3 => {
            Ok(RationalSelfMap::from_expressions(surface, &[c.as_slice()], &params)?)
        }
        (Surface::P1xP1, Components::Product(pairs)) if pairs.len() == 2 && pairs.iter().all(|p| p.len() == 2) => {
            Ok(RationalSelfMap::from_expressions(surface, &[pairs[0].as_slice(), pairs[1].as_slice()], &params)?)
        }
        (Surface::P2, _) => Err(MapIoError::Shape("P2 maps need a list of 3 components".into())),
        (Surface::P1xP1, _) => Err(MapIoError::Shape("P1xP1 maps need two pairs of components".into())),
    }
}
