//! Instance files: JSON as the canonical format, CSV as an import path.
//!
//! JSON numbers are written with the shortest representation that parses
//! back to the same `f64`, so a write/read cycle reproduces coordinates bit
//! for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::matching::{Matching, PointSet};
use crate::miner::MinedInstance;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        *self == Metadata::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matching: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    pub metadata: Metadata,
}

impl InstanceFile {
    pub fn new(ps: &PointSet, matching: Option<&Matching>) -> Self {
        InstanceFile {
            points: ps.points().to_vec(),
            matching: matching.map(|m| m.pairs().to_vec()),
            metadata: Metadata::default(),
        }
    }

    /// Points and local matching of a mined instance, with the search
    /// search settings and the ratio recorded as metadata.
    pub fn from_mined(mined: &MinedInstance, budget: usize) -> Self {
        let mut inst = InstanceFile::new(&mined.point_set, Some(&mined.local_matching));
        inst.metadata = Metadata {
            seed: Some(mined.rng_seed),
            provenance: Some(format!("mined, restart {}", mined.restart)),
            budget: Some(budget),
            ratio: Some(mined.ratio),
            k: Some(mined.k),
        };
        inst
    }

    pub fn point_set(&self) -> Result<PointSet> {
        PointSet::new(self.points.clone())
    }

    /// The stored matching, checked to be a perfect matching of the points.
    pub fn matching(&self) -> Result<Option<Matching>> {
        let Some(pairs) = &self.matching else {
            return Ok(None);
        };
        let m = Matching::new(pairs.iter().copied());
        m.validate_perfect(self.points.len())?;
        Ok(Some(m))
    }

    /// Point set and matching, failing if either is invalid.
    pub fn validate(&self) -> Result<(PointSet, Option<Matching>)> {
        let ps = self.point_set()?;
        let m = self.matching()?;
        Ok((ps, m))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    /// Reads `x,y` rows. A non-numeric first row is taken as a header, and
    /// blank or `#` lines are ignored.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(Error::Format(format!(
                    "line {}: expected 2 fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
                (Ok(x), Ok(y)) => points.push(Point::try_new(x, y)?),
                _ if points.is_empty() && lineno == first_content_line(text) => continue,
                _ => {
                    return Err(Error::Format(format!("line {}: cannot parse '{line}'", lineno + 1)));
                }
            }
        }
        let inst = InstanceFile {
            points,
            matching: None,
            metadata: Metadata::default(),
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Loads JSON, or CSV when the extension is `.csv`.
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        let is_csv = path.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
        if is_csv {
            Self::from_csv(&text)
        } else {
            Self::from_json(&text)
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json() + "\n").map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }
}

fn first_content_line(text: &str) -> usize {
    text.lines()
        .position(|l| {
            let l = l.trim();
            !l.is_empty() && !l.starts_with('#')
        })
        .unwrap_or(0)
}
