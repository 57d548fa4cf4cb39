//! JSON file formats: matrices, models, and verification reports.
//!
//! Quaternions are serialized as `[q0, q1, q2, q3]` arrays of decimal
//! doubles. Every float is written with 17 significant digits, which makes
//! the parse-serialize round trip bit-exact for finite doubles, and all
//! containers have a fixed field and key order, so identical inputs produce
//! byte-identical files.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hmod::QVector;
use crate::model::DiscreteModel;
use crate::quat::{Frame, Quaternion};
use crate::spectral::QMatrix;

struct Sig17Formatter;

impl serde_json::ser::Formatter for Sig17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes with 17 significant digits on every double.
pub fn to_json_17<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter);
    value
        .serialize(&mut ser)
        .expect("serialization cannot fail for plain data");
    String::from_utf8(out).expect("json output is utf8")
}

/// Hex SHA-256 of raw input bytes, used to key reports to their input.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn quat_to_arr(q: Quaternion) -> [f64; 4] {
    q.coords()
}

fn arr_to_quat(a: [f64; 4]) -> Quaternion {
    Quaternion::from_coords(a)
}

pub fn qvector_to_arrays(v: &QVector) -> Vec<[f64; 4]> {
    v.iter().map(|&q| quat_to_arr(q)).collect()
}

pub fn qmatrix_to_arrays(m: &QMatrix) -> Vec<Vec<[f64; 4]>> {
    (0..m.dim())
        .map(|r| (0..m.dim()).map(|c| quat_to_arr(m.get(r, c))).collect())
        .collect()
}

/// A square quaternion matrix on disk.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 4]>>,
}

impl MatrixFile {
    pub fn from_matrix(a: &QMatrix) -> Self {
        MatrixFile {
            n: a.dim(),
            entries: qmatrix_to_arrays(a),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidFile(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidFile("dimension must be at least 1".into()));
        }
        if self.entries.len() != self.n || self.entries.iter().any(|row| row.len() != self.n) {
            return Err(Error::InvalidFile(format!(
                "entries are not a {0} x {0} array",
                self.n
            )));
        }
        if self
            .entries
            .iter()
            .flatten()
            .flatten()
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Result<QMatrix> {
        self.validate()?;
        QMatrix::from_rows(
            self.entries
                .iter()
                .map(|row| row.iter().map(|&a| arr_to_quat(a)).collect())
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        to_json_17(self)
    }
}

/// Frame serialization: `f` and `phi` as 4-arrays.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FrameJson {
    pub f: [f64; 4],
    pub phi: [f64; 4],
}

impl FrameJson {
    pub fn from_frame(frame: &Frame) -> Self {
        FrameJson {
            f: quat_to_arr(frame.f()),
            phi: quat_to_arr(frame.phi()),
        }
    }
}

/// The discrete model on disk: measure, generating vector, atom columns.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModelFile {
    pub frame: FrameJson,
    pub atoms: Vec<f64>,
    pub weights: Vec<f64>,
    pub g: Vec<[f64; 4]>,
    pub columns: Vec<Vec<[f64; 4]>>,
}

impl ModelFile {
    pub fn from_model(m: &DiscreteModel) -> Self {
        ModelFile {
            frame: FrameJson::from_frame(m.measure().frame()),
            atoms: m.measure().atoms().to_vec(),
            weights: m.measure().weights().to_vec(),
            g: qvector_to_arrays(m.g()),
            columns: m.columns().iter().map(qvector_to_arrays).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        to_json_17(self)
    }
}

/// A verification report.
///
/// `pass` is true exactly when every named residual is at most `tolerance`.
/// Reports carry no timestamps; identical inputs and flags serialize to
/// byte-identical reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub input_sha256: String,
    pub frame: FrameJson,
    pub atoms: Vec<f64>,
    pub h_ranks: Vec<usize>,
    pub simple: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_action: Option<Vec<Vec<[f64; 4]>>>,
    pub residuals: BTreeMap<String, f64>,
    pub pass: bool,
    pub tolerance: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        to_json_17(self)
    }
}
