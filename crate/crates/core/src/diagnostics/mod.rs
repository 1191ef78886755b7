//! Performance metrics, farness, global outliers, DAC and silhouettes.

mod dac;
mod farness;
mod report;

pub use dac::{class_map, dac_ldac, logistic, silhouette, ClassMapRecord, DacRecord, DistanceScale, SilhouetteReport};
pub use farness::{farness, fit_farness, yeo_johnson, yeo_johnson_mle, FarnessParams, FarnessTable, TransformParams};
pub use report::{evaluate, DiagnosticsReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rows are true classes, columns predicted classes. When present, the
/// extra last column holds correctly classified global outliers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<String>,
    pub counts: Vec<Vec<usize>>,
    pub outliers: Option<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn row_total(&self, j: usize) -> usize {
        self.counts[j].iter().sum::<usize>() + self.outliers.as_ref().map_or(0, |o| o[j])
    }

    pub fn total(&self) -> usize {
        (0..self.n_classes()).map(|j| self.row_total(j)).sum()
    }

    pub fn outlier(&self, j: usize) -> usize {
        self.outliers.as_ref().map_or(0, |o| o[j])
    }

    /// Correct classifications of class `j`, outliers included.
    pub fn correct(&self, j: usize) -> usize {
        self.counts[j][j] + self.outlier(j)
    }

    /// Rows as printed: `g` predicted columns followed by the outlier
    /// column when it exists.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n_classes())
            .map(|j| {
                let mut row = self.counts[j].clone();
                if let Some(o) = &self.outliers {
                    row.push(o[j]);
                }
                row
            })
            .collect()
    }
}

/// Tabulates predictions. With `flags`, flagged observations that were
/// classified correctly move to the outlier column.
pub fn confusion(
    truth: &[usize],
    predicted: &[usize],
    classes: &[String],
    flags: Option<&[bool]>,
) -> Result<ConfusionMatrix> {
    if truth.len() != predicted.len() {
        return Err(Error::LengthMismatch(truth.len(), predicted.len()));
    }
    if let Some(f) = flags {
        if f.len() != truth.len() {
            return Err(Error::LengthMismatch(truth.len(), f.len()));
        }
    }
    let g = classes.len();
    let mut counts = vec![vec![0; g]; g];
    let mut outliers = flags.map(|_| vec![0; g]);
    for (h, (&t, &p)) in truth.iter().zip(predicted).enumerate() {
        if t >= g || p >= g {
            return Err(Error::UnknownClass(format!("class index {} out of {g}", t.max(p))));
        }
        match (&mut outliers, flags) {
            (Some(o), Some(f)) if f[h] && t == p => o[t] += 1,
            _ => counts[t][p] += 1,
        }
    }
    Ok(ConfusionMatrix {
        classes: classes.to_vec(),
        counts,
        outliers,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub recall: Vec<f64>,
    pub precision: Vec<f64>,
    pub f1: Vec<f64>,
    pub macro_f1: f64,
    pub gmean: f64,
    /// Classes never predicted; their precision is reported as 0.
    pub precision_undefined: Vec<bool>,
    /// Classes absent from the truth; their recall is reported as 0.
    pub recall_undefined: Vec<bool>,
}

pub fn metrics(cm: &ConfusionMatrix) -> Result<Metrics> {
    let g = cm.n_classes();
    let total = cm.total();
    if g == 0 || total == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut recall = Vec::with_capacity(g);
    let mut precision = Vec::with_capacity(g);
    let mut f1 = Vec::with_capacity(g);
    let mut precision_undefined = Vec::with_capacity(g);
    let mut recall_undefined = Vec::with_capacity(g);
    for j in 0..g {
        let correct = cm.correct(j) as f64;
        let row = cm.row_total(j);
        let col = (0..g).map(|i| cm.counts[i][j]).sum::<usize>() + cm.outlier(j);
        let rec = if row == 0 { 0.0 } else { correct / row as f64 };
        let pr = if col == 0 { 0.0 } else { correct / col as f64 };
        recall_undefined.push(row == 0);
        precision_undefined.push(col == 0);
        f1.push(if rec + pr > 0.0 { 2.0 * rec * pr / (rec + pr) } else { 0.0 });
        recall.push(rec);
        precision.push(pr);
    }
    let accuracy = (0..g).map(|j| cm.correct(j)).sum::<usize>() as f64 / total as f64;
    let macro_f1 = f1.iter().sum::<f64>() / g as f64;
    let gmean = if recall.contains(&0.0) {
        0.0
    } else {
        (recall.iter().map(|r| r.ln()).sum::<f64>() / g as f64).exp()
    };
    Ok(Metrics {
        accuracy,
        recall,
        precision,
        f1,
        macro_f1,
        gmean,
        precision_undefined,
        recall_undefined,
    })
}
