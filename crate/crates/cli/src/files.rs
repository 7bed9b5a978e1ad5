//! Scheme and point files.

use std::fs;
use std::path::Path;

use meyerion_core::cps::{parse_vector, Hyperplane, PointPattern, Provenance, Scheme, SchemeDescription, Window};
use meyerion_core::FieldScalar;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub name: String,
    pub physical_dim: usize,
    pub internal_dim: usize,
    pub discriminant: u32,
    pub p1: Vec<Vec<String>>,
    pub p2: Vec<Vec<String>>,
    pub window: WindowFile,
    pub hyperplanes: Vec<HyperplaneFile>,
    pub transversal: Vec<Vec<i64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowFile {
    pub normals: Vec<Vec<String>>,
    pub offsets: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneFile {
    pub form: Vec<String>,
    pub offset_point: Vec<String>,
}

fn strings(v: &[FieldScalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn scalars(v: &[String], d: u32) -> Result<Vec<FieldScalar>, CliError> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    Ok(parse_vector(&v.join(","), d)?)
}

impl SchemeFile {
    pub fn from_description(d: &SchemeDescription) -> Self {
        SchemeFile {
            name: d.name.clone(),
            physical_dim: d.physical_dim,
            internal_dim: d.internal_dim,
            discriminant: d.discriminant,
            p1: d.p1.iter().map(|r| strings(r)).collect(),
            p2: d.p2.iter().map(|r| strings(r)).collect(),
            window: WindowFile {
                normals: d.window.normals.iter().map(|r| strings(r)).collect(),
                offsets: strings(&d.window.offsets),
            },
            hyperplanes: d
                .hyperplanes
                .iter()
                .map(|h| HyperplaneFile {
                    form: strings(&h.form),
                    offset_point: strings(&h.offset_point),
                })
                .collect(),
            transversal: d.transversal.clone(),
        }
    }

    pub fn to_description(&self) -> Result<SchemeDescription, CliError> {
        let d = self.discriminant;
        let matrix = |m: &[Vec<String>]| m.iter().map(|r| scalars(r, d)).collect::<Result<Vec<_>, _>>();
        Ok(SchemeDescription {
            name: self.name.clone(),
            physical_dim: self.physical_dim,
            internal_dim: self.internal_dim,
            discriminant: d,
            p1: matrix(&self.p1)?,
            p2: matrix(&self.p2)?,
            window: Window::new(matrix(&self.window.normals)?, scalars(&self.window.offsets, d)?),
            hyperplanes: self
                .hyperplanes
                .iter()
                .map(|h| {
                    Ok(Hyperplane {
                        form: scalars(&h.form, d)?,
                        offset_point: scalars(&h.offset_point, d)?,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?,
            transversal: self.transversal.clone(),
        })
    }
}

/// File contents with their SHA-256.
pub struct Input {
    pub bytes: Vec<u8>,
    pub sha256: String,
}

pub fn read_input(path: &Path) -> Result<Input, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(Input {
        sha256: sha256_hex(&bytes),
        bytes,
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn parse_scheme_description(input: &Input) -> Result<SchemeDescription, CliError> {
    let file: SchemeFile =
        serde_json::from_slice(&input.bytes).map_err(|e| CliError::Input(format!("scheme file: {e}")))?;
    file.to_description()
}

pub fn load_scheme(path: &Path) -> Result<(Scheme, Input), CliError> {
    let input = read_input(path)?;
    let scheme = Scheme::new(parse_scheme_description(&input)?)?;
    Ok((scheme, input))
}

pub fn points_json(p: &PointPattern) -> serde_json::Value {
    p.points().iter().map(|v| strings(v)).collect::<Vec<_>>().into()
}

/// Reads a JSON array of points; `radius` is the ball the points were generated in.
pub fn load_points(path: &Path, radius: &FieldScalar) -> Result<(PointPattern, Input), CliError> {
    let input = read_input(path)?;
    let raw: Vec<Vec<String>> =
        serde_json::from_slice(&input.bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let dim = raw.first().map_or(0, Vec::len);
    let points = raw
        .iter()
        .map(|v| v.iter().map(|s| s.parse()).collect::<Result<Vec<FieldScalar>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let provenance = Provenance {
        source: path.display().to_string(),
        ..Provenance::default()
    };
    Ok((PointPattern::new(dim, points, radius.clone(), provenance)?, input))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use meyerion_core::cps::{fibonacci, octagonal};

    #[test]
    fn builtin_schemes_round_trip() {
        for s in [octagonal(), fibonacci()] {
            let file = SchemeFile::from_description(s.description());
            let text = serde_json::to_string(&file).unwrap();
            let back: SchemeFile = serde_json::from_str(&text).unwrap();
            assert_eq!(&back.to_description().unwrap(), s.description());
        }
    }
}
