//! File formats: JSON for clouds, invariants and comparison reports, CSV for
//! raw input. Every real is written with 17 significant digits so values
//! read back bit-exact and output is byte-identical across runs.

use std::io::{self, Read};

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::invariants::{Pdd, Rdd, Sdd};
use crate::mmspace::{Wdd, Wsd};
use crate::{Cloud, CloudKind, Error, Result};

/// Compact JSON with floats in `d.dddddddddddddddde±x` form.
struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{:.16e}", value + 0.0)
    }
}

/// Serializes any value with the fixed float format and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// On-disk layout of a cloud.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl CloudFile {
    pub fn from_cloud(cloud: &Cloud) -> Self {
        let weights = cloud.has_explicit_weights().then(|| cloud.weights().to_vec());
        match cloud.kind() {
            CloudKind::Coordinates => Self {
                kind: "coords".into(),
                dim: Some(cloud.dim()),
                points: cloud.points(),
                matrix: None,
                weights,
            },
            CloudKind::Matrix => Self {
                kind: "matrix".into(),
                dim: None,
                points: None,
                matrix: Some(cloud.distance_matrix()),
                weights,
            },
        }
    }

    pub fn into_cloud(self, validate_triangle: bool) -> Result<Cloud> {
        let weights = self.weights.as_deref();
        match self.kind.as_str() {
            "coords" => {
                let points = self
                    .points
                    .ok_or_else(|| Error::Parse("coords file needs \"points\"".into()))?;
                if let (Some(dim), Some(p)) = (self.dim, points.first()) {
                    if p.len() != dim {
                        return Err(Error::DimensionMismatch {
                            index: 0,
                            expected: dim,
                            found: p.len(),
                        });
                    }
                }
                Cloud::from_coordinates(&points, weights)
            }
            "matrix" => {
                let matrix = self
                    .matrix
                    .ok_or_else(|| Error::Parse("matrix file needs \"matrix\"".into()))?;
                Cloud::from_matrix(&matrix, weights, validate_triangle)
            }
            other => Err(Error::Parse(format!(
                "\"kind\" must be \"coords\" or \"matrix\", got {other:?}"
            ))),
        }
    }
}

pub fn cloud_to_json(cloud: &Cloud) -> String {
    to_json(&CloudFile::from_cloud(cloud))
}

pub fn cloud_from_json(text: &str, validate_triangle: bool) -> Result<Cloud> {
    parse::<CloudFile>(text)?.into_cloud(validate_triangle)
}

pub fn cloud_file_from_json(text: &str) -> Result<CloudFile> {
    parse(text)
}

/// Numeric rows of a headerless CSV; blank lines and `#` comments are skipped.
pub fn read_csv_rows<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(reader);
    for (line, record) in csv.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let row = record
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("row {}: {f:?} is not a number", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if !row.is_empty() {
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Reads a headerless CSV: one point per row, or a square distance grid.
pub fn cloud_from_csv<R: Read>(reader: R, kind: CloudKind, validate_triangle: bool) -> Result<Cloud> {
    let rows = read_csv_rows(reader)?;
    match kind {
        CloudKind::Coordinates => Cloud::from_coordinates(&rows, None),
        CloudKind::Matrix => Cloud::from_matrix(&rows, None, validate_triangle),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SddItemFile {
    weight_num: u64,
    weight_den: u64,
    #[serde(rename = "D")]
    d: Vec<f64>,
    #[serde(rename = "R")]
    r: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SddFile {
    h: usize,
    k: u64,
    items: Vec<SddItemFile>,
}

/// Converts a weight `num/den` into a multiplicity out of `k`.
fn count_of(num: u64, den: u64, k: u64) -> Result<u64> {
    if den == 0 || !(num as u128 * k as u128).is_multiple_of(den as u128) {
        return Err(Error::Parse(format!("weight {num}/{den} is not a multiple of 1/{k}")));
    }
    Ok((num as u128 * k as u128 / den as u128) as u64)
}

fn columns_of(rows: &[Vec<f64>], h: usize) -> Result<Vec<Vec<f64>>> {
    if rows.len() != h {
        return Err(Error::Parse(format!("expected {h} rows, got {}", rows.len())));
    }
    let n = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("rows have different lengths".into()));
    }
    Ok((0..n).map(|c| rows.iter().map(|r| r[c]).collect()).collect())
}

pub fn sdd_to_json(sdd: &Sdd) -> String {
    let items = sdd
        .items()
        .iter()
        .map(|it| SddItemFile {
            weight_num: it.count,
            weight_den: sdd.k(),
            d: it.rdd.d().to_vec(),
            r: it.rdd.r_rows(),
        })
        .collect();
    to_json(&SddFile {
        h: sdd.h(),
        k: sdd.k(),
        items,
    })
}

pub fn sdd_from_json(text: &str) -> Result<Sdd> {
    let file: SddFile = parse(text)?;
    let first = file
        .items
        .first()
        .ok_or_else(|| Error::Parse("an SDD has at least one item".into()))?;
    let m = file.h + first.r.first().map_or(0, Vec::len);
    let items = file
        .items
        .iter()
        .map(|it| {
            let rdd = Rdd::from_parts(file.h, it.d.clone(), &columns_of(&it.r, file.h)?)?;
            Ok((rdd, count_of(it.weight_num, it.weight_den, file.k)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let sdd = Sdd::from_items(file.h, m, items)?;
    if sdd.k() != file.k {
        return Err(Error::Parse(format!("k = {} but C({m},{}) = {}", file.k, file.h, sdd.k())));
    }
    Ok(sdd)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct WsdItemFile {
    weight_num: u64,
    weight_den: u64,
    #[serde(rename = "D")]
    d: Vec<f64>,
    #[serde(rename = "D_weights")]
    d_weights: Vec<f64>,
    #[serde(rename = "M")]
    m: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct WsdFile {
    h: usize,
    k: u64,
    items: Vec<WsdItemFile>,
}

pub fn wsd_to_json(wsd: &Wsd) -> String {
    let items = wsd
        .items()
        .iter()
        .map(|(w, count)| WsdItemFile {
            weight_num: *count,
            weight_den: wsd.k(),
            d: w.distances().to_vec(),
            d_weights: w.basis_weights().to_vec(),
            m: w.rows(),
        })
        .collect();
    to_json(&WsdFile {
        h: wsd.h(),
        k: wsd.k(),
        items,
    })
}

pub fn wsd_from_json(text: &str) -> Result<Wsd> {
    let file: WsdFile = parse(text)?;
    let first = file
        .items
        .first()
        .ok_or_else(|| Error::Parse("a WSD has at least one item".into()))?;
    let m = file.h + first.m.first().map_or(0, Vec::len);
    let items = file
        .items
        .iter()
        .map(|it| {
            let w = Wdd::from_parts(
                file.h,
                it.d.clone(),
                it.d_weights.clone(),
                &columns_of(&it.m, file.h + 1)?,
            )?;
            Ok((w, count_of(it.weight_num, it.weight_den, file.k)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Wsd::from_items(file.h, m, items)
}

/// PDD rows as `[weight, d_1, ..., d_{m-1}]`.
pub fn pdd_to_json(pdd: &Pdd) -> String {
    let rows: Vec<Vec<f64>> = pdd
        .rows()
        .iter()
        .zip(pdd.weights())
        .map(|(r, w)| std::iter::once(w).chain(r.distances.iter().copied()).collect())
        .collect();
    to_json(&rows)
}

pub fn vector_to_json(v: &[f64]) -> String {
    to_json(v)
}

pub fn matrix_from_json(text: &str) -> Result<Vec<Vec<f64>>> {
    parse(text)
}

pub fn vector_from_json(text: &str) -> Result<Vec<f64>> {
    parse(text)
}

/// Result of comparing two clouds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub metric: String,
    pub h: usize,
    pub value: f64,
    pub lower_bound_sdm: f64,
    pub elapsed_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        parse(text)
    }
}
