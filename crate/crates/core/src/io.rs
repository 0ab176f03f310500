//! Input documents: domains and zero sets as JSON.
//!
//! ```json
//! {"type": "polygon", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}
//! {"type": "disk", "center": [0, 0], "radius": 1}
//! {"type": "ellipse", "center": [0, 0], "a": 1, "b": 0.5, "rotation": 0}
//! {"zeros": [[0.5, 0], [-0.5, 0.25]]}
//! {"type": "segment", "a": [-1, 0], "b": [1, 0]}
//! ```

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize};

use crate::capacity::CompactSet;
use crate::error::{Error, Result};
use crate::geometry::ConvexDomain;
use crate::polynomials::MonicPolynomial;

/// The on-disk form of a domain, before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum DomainSpec {
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Disk {
        center: [f64; 2],
        radius: f64,
    },
    Ellipse {
        center: [f64; 2],
        a: f64,
        b: f64,
        #[serde(default)]
        rotation: f64,
    },
}

fn point(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl TryFrom<DomainSpec> for ConvexDomain {
    type Error = Error;

    fn try_from(spec: DomainSpec) -> Result<Self> {
        match spec {
            DomainSpec::Polygon { vertices } => {
                ConvexDomain::polygon(vertices.into_iter().map(point).collect())
            }
            DomainSpec::Disk { center, radius } => ConvexDomain::disk(point(center), radius),
            DomainSpec::Ellipse {
                center,
                a,
                b,
                rotation,
            } => ConvexDomain::ellipse(point(center), a, b, rotation),
        }
    }
}

impl<'de> Deserialize<'de> for ConvexDomain {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = DomainSpec::deserialize(d)?;
        ConvexDomain::try_from(spec).map_err(serde::de::Error::custom)
    }
}

pub fn parse_domain(text: &str) -> Result<ConvexDomain> {
    let spec: DomainSpec = serde_json::from_str(text)?;
    spec.try_into()
}

pub fn parse_zeros(text: &str) -> Result<MonicPolynomial> {
    let spec: crate::polynomials::ZeroSet = serde_json::from_str(text)?;
    MonicPolynomial::from_zeros(spec.zeros)
}

/// A domain document, or a `segment` (`"a"`, `"b"`) or `real_intervals`
/// (`"intervals": [[a, b], ...]`) document.
pub fn parse_compact_set(text: &str) -> Result<CompactSet> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    match value.get("type").and_then(|t| t.as_str()) {
        Some("segment") | Some("real_intervals") => match serde_json::from_value(value)? {
            CompactSet::Segment { a, b } => CompactSet::segment(a, b),
            CompactSet::RealIntervals { intervals } => CompactSet::intervals(intervals),
            CompactSet::Domain { domain } => Ok(CompactSet::Domain { domain }),
        },
        _ => Ok(CompactSet::Domain {
            domain: parse_domain(text)?,
        }),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

pub fn read_domain(path: &Path) -> Result<ConvexDomain> {
    parse_domain(&read(path)?)
}

pub fn read_compact_set(path: &Path) -> Result<CompactSet> {
    parse_compact_set(&read(path)?)
}

pub fn read_zeros(path: &Path) -> Result<MonicPolynomial> {
    parse_zeros(&read(path)?)
}
