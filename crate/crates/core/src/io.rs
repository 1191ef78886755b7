//! Interval CSV files, model files and atomic writes.
//!
//! A CSV header names each variable through a pair of columns, either
//! `<var>_lo` and `<var>_hi` (bounds) or `<var>_c` and `<var>_r` (centre and
//! range), plus an optional `label` column.

use std::collections::HashMap;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::classifier::FittedModel;
use crate::diagnostics::FarnessParams;
use crate::error::{Error, Result};
use crate::fisher::{DiscriminantBasis, FisherConfig, OrthogonalityMode};
use crate::interval::{IntervalFrame, Labels};

pub const LABEL_COLUMN: &str = "label";
pub const MODEL_SCHEMA_VERSION: u32 = 1;

/// Writes `bytes` to a temporary file next to `path`, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    Bounds,
    CentreRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Lo,
    Hi,
    C,
    R,
}

#[derive(Default)]
struct VarColumns {
    lo: Option<usize>,
    hi: Option<usize>,
    c: Option<usize>,
    r: Option<usize>,
}

fn split_column(name: &str) -> Option<(&str, Part)> {
    let (var, suffix) = name.rsplit_once('_')?;
    if var.is_empty() {
        return None;
    }
    let part = match suffix {
        "lo" => Part::Lo,
        "hi" => Part::Hi,
        "c" => Part::C,
        "r" => Part::R,
        _ => return None,
    };
    Some((var, part))
}

/// Reads an interval CSV. When `classes` is given, labels are mapped onto
/// that class list (e.g. the classes of a fitted model); a `label` column is
/// then still optional.
pub fn read_csv<R: Read>(reader: R, classes: Option<&[String]>) -> Result<IntervalFrame> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|s| s.to_string()).collect();

    let mut order: Vec<String> = Vec::new();
    let mut vars: HashMap<String, VarColumns> = HashMap::new();
    let mut label_col = None;
    for (idx, name) in header.iter().enumerate() {
        if name == LABEL_COLUMN {
            if label_col.replace(idx).is_some() {
                return Err(Error::Schema("duplicate column `label`".into()));
            }
            continue;
        }
        let (var, part) = split_column(name).ok_or_else(|| {
            Error::Schema(format!(
                "column `{name}` is neither `label` nor `<var>_lo`, `<var>_hi`, `<var>_c`, `<var>_r`"
            ))
        })?;
        if !vars.contains_key(var) {
            order.push(var.to_string());
        }
        let entry = vars.entry(var.to_string()).or_default();
        let slot = match part {
            Part::Lo => &mut entry.lo,
            Part::Hi => &mut entry.hi,
            Part::C => &mut entry.c,
            Part::R => &mut entry.r,
        };
        if slot.replace(idx).is_some() {
            return Err(Error::Schema(format!("duplicate column `{name}`")));
        }
    }
    if order.is_empty() {
        return Err(Error::Schema("no interval variables in header".into()));
    }
    let mut layout = Vec::with_capacity(order.len());
    for var in &order {
        let v = &vars[var];
        let bounds = v.lo.is_some() || v.hi.is_some();
        let cr = v.c.is_some() || v.r.is_some();
        let pair = match (bounds, cr) {
            (true, true) => {
                return Err(Error::Schema(format!("variable `{var}` mixes bound and centre/range columns")));
            }
            (true, false) => v.lo.zip(v.hi).map(|p| (Pairing::Bounds, p)),
            _ => v.c.zip(v.r).map(|p| (Pairing::CentreRange, p)),
        };
        let pair = pair.ok_or_else(|| Error::Schema(format!("variable `{var}` lacks one column of its pair")))?;
        layout.push(pair);
    }

    let p = order.len();
    let mut centres = Vec::new();
    let mut ranges = Vec::new();
    let mut labels = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let field = |idx: usize| -> Result<f64> {
            let raw = record.get(idx).unwrap_or("");
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Schema(format!("row {}, column `{}`: `{raw}` is not a number", row + 1, header[idx])))
        };
        for (k, &(pairing, (a, b))) in layout.iter().enumerate() {
            let (x, y) = (field(a)?, field(b)?);
            let (c, r) = match pairing {
                Pairing::Bounds => ((x + y) / 2.0, y - x),
                Pairing::CentreRange => (x, y),
            };
            if r < 0.0 {
                return Err(Error::Schema(format!(
                    "row {}, variable `{}`: negative width {r}",
                    row + 1,
                    order[k]
                )));
            }
            centres.push(c);
            ranges.push(r);
        }
        if let Some(l) = label_col {
            labels.push(record.get(l).unwrap_or("").to_string());
        }
    }
    let n = centres.len() / p;
    let frame = IntervalFrame::new(
        DMatrix::from_row_slice(n, p, &centres),
        DMatrix::from_row_slice(n, p, &ranges),
    )?
    .with_variable_names(order)?;
    if label_col.is_none() {
        return Ok(frame);
    }
    let labels = match classes {
        Some(cls) => Labels::with_classes(&labels, cls)?,
        None => Labels::from_strings(&labels),
    };
    frame.with_labels(labels)
}

pub fn read_csv_file(path: &Path, classes: Option<&[String]>) -> Result<IntervalFrame> {
    read_csv(fs::File::open(path)?, classes)
}

/// Serializes a frame; floats use the shortest representation that parses back exactly.
pub fn write_csv<W: Write>(frame: &IntervalFrame, pairing: Pairing, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let (sa, sb) = match pairing {
        Pairing::Bounds => ("lo", "hi"),
        Pairing::CentreRange => ("c", "r"),
    };
    let mut header = Vec::new();
    for name in frame.variable_names() {
        header.push(format!("{name}_{sa}"));
        header.push(format!("{name}_{sb}"));
    }
    if frame.labels().is_some() {
        header.push(LABEL_COLUMN.to_string());
    }
    w.write_record(&header)?;
    for h in 0..frame.n_obs() {
        let mut rec = Vec::with_capacity(header.len());
        for k in 0..frame.n_vars() {
            let (c, r) = (frame.centres()[(h, k)], frame.ranges()[(h, k)]);
            let (a, b) = match pairing {
                Pairing::Bounds => (c - r / 2.0, c + r / 2.0),
                Pairing::CentreRange => (c, r),
            };
            rec.push(a.to_string());
            rec.push(b.to_string());
        }
        if let Some(l) = frame.labels() {
            rec.push(l.label_of(h).to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn matrix_of(rows: &[Vec<f64>], ncols: usize, what: &str) -> Result<DMatrix<f64>> {
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Schema(format!("{what}: ragged rows")));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(DMatrix::from_row_slice(rows.len(), ncols, &flat))
}

/// Persistent form of a fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u32,
    pub delta: f64,
    pub mode: OrthogonalityMode,
    pub s: usize,
    pub s_requested: usize,
    /// p rows, one column per discriminant vector.
    pub basis: Vec<Vec<f64>>,
    pub ratios: Vec<f64>,
    pub converged: Vec<bool>,
    pub metric: Vec<Vec<f64>>,
    pub classes: Vec<String>,
    pub priors: Vec<f64>,
    pub class_centres: Vec<Vec<f64>>,
    pub class_ranges: Vec<Vec<f64>>,
    pub variable_names: Vec<String>,
    pub farness: Option<FarnessParams>,
    pub config: FisherConfig,
}

impl ModelFile {
    pub fn from_model(model: &FittedModel, farness: Option<FarnessParams>, variable_names: &[String]) -> Self {
        ModelFile {
            schema_version: MODEL_SCHEMA_VERSION,
            delta: model.delta,
            mode: model.basis.mode,
            s: model.s(),
            s_requested: model.basis.s_requested,
            basis: rows_of(&model.basis.vectors),
            ratios: model.basis.ratios.clone(),
            converged: model.basis.converged.clone(),
            metric: rows_of(&model.basis.metric),
            classes: model.classes.clone(),
            priors: model.priors.clone(),
            class_centres: rows_of(&model.class_centres),
            class_ranges: rows_of(&model.class_ranges),
            variable_names: variable_names.to_vec(),
            farness,
            config: model.config.clone(),
        }
    }

    pub fn to_model(&self) -> Result<FittedModel> {
        let p = self.variable_names.len();
        let basis = DiscriminantBasis {
            vectors: matrix_of(&self.basis, self.s, "basis")?,
            ratios: self.ratios.clone(),
            s_requested: self.s_requested,
            mode: self.mode,
            metric: matrix_of(&self.metric, p, "metric")?,
            converged: self.converged.clone(),
        };
        if basis.vectors.nrows() != p || self.ratios.len() != self.s || self.converged.len() != self.s {
            return Err(Error::Schema("basis does not match the variable count or s".into()));
        }
        FittedModel::from_parts(
            basis,
            self.delta,
            self.classes.clone(),
            self.priors.clone(),
            matrix_of(&self.class_centres, p, "class_centres")?,
            matrix_of(&self.class_ranges, p, "class_ranges")?,
            self.config.clone(),
        )
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let found = value
            .get("schema_version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Schema("model file has no schema_version".into()))?;
        if found != MODEL_SCHEMA_VERSION as u64 {
            return Err(Error::ModelVersion {
                found: found as u32,
                expected: MODEL_SCHEMA_VERSION,
            });
        }
        Ok(serde_json::from_value(value)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
