use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::FarnessTable;
use crate::classifier::FittedModel;
use crate::error::{Error, Result};
use crate::interval::IntervalFrame;

/// Whether the DAC deviation uses distances or squared distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceScale {
    #[default]
    Unsquared,
    Squared,
}

impl FromStr for DistanceScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unsquared" => Ok(DistanceScale::Unsquared),
            "squared" => Ok(DistanceScale::Squared),
            other => Err(Error::InvalidConfig(format!("unknown distance scale `{other}`"))),
        }
    }
}

pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DacRecord {
    /// Distance to the true class.
    pub own: f64,
    /// Distance to the best alternative class.
    pub dac: f64,
    pub ldac: f64,
}

pub fn dac_ldac(model: &FittedModel, frame: &IntervalFrame, scale: DistanceScale) -> Result<Vec<DacRecord>> {
    let labels = frame.require_labels()?;
    if labels.classes() != model.classes.as_slice() {
        return Err(Error::UnknownClass("frame labels differ from the model classes".into()));
    }
    let g = model.n_classes();
    if g < 2 {
        return Err(Error::SingleClass(g));
    }
    let mut d = model.distance_matrix(frame)?;
    if scale == DistanceScale::Unsquared {
        d.apply(|v| *v = v.max(0.0).sqrt());
    }
    Ok(labels
        .assignments()
        .iter()
        .enumerate()
        .map(|(h, &t)| {
            let own = d[(h, t)];
            let dac = (0..g).filter(|&j| j != t).map(|j| d[(h, j)]).fold(f64::INFINITY, f64::min);
            DacRecord {
                own,
                dac,
                ldac: logistic(own - dac),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMapRecord {
    pub id: usize,
    pub true_class: usize,
    pub predicted: usize,
    pub farness: f64,
    pub ldac: f64,
    pub flagged: bool,
}

pub fn class_map(table: &FarnessTable, dac: &[DacRecord], tau: f64) -> Result<Vec<ClassMapRecord>> {
    let truth = table.truth.as_ref().ok_or(Error::MissingLabels)?;
    if dac.len() != table.n_obs() {
        return Err(Error::LengthMismatch(table.n_obs(), dac.len()));
    }
    Ok((0..table.n_obs())
        .map(|h| ClassMapRecord {
            id: h,
            true_class: truth[h],
            predicted: table.predicted[h],
            farness: table.values[h][truth[h]],
            ldac: dac[h].ldac,
            flagged: table.outlyingness[h] > tau,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SilhouetteReport {
    pub classes: Vec<String>,
    pub values: Vec<f64>,
    pub truth: Vec<usize>,
    /// `None` for classes without members.
    pub class_averages: Vec<Option<f64>>,
    pub overall: f64,
}

pub fn silhouette(ldac: &[f64], truth: &[usize], classes: &[String]) -> Result<SilhouetteReport> {
    if ldac.len() != truth.len() {
        return Err(Error::LengthMismatch(ldac.len(), truth.len()));
    }
    if ldac.is_empty() {
        return Err(Error::EmptyReport);
    }
    if let Some(&t) = truth.iter().find(|&&t| t >= classes.len()) {
        return Err(Error::UnknownClass(format!("class index {t} out of {}", classes.len())));
    }
    let values: Vec<f64> = ldac.iter().map(|l| 1.0 - 2.0 * l).collect();
    let class_averages = (0..classes.len())
        .map(|j| {
            let members: Vec<f64> = values.iter().zip(truth).filter(|(_, &t)| t == j).map(|(v, _)| *v).collect();
            (!members.is_empty()).then(|| members.iter().sum::<f64>() / members.len() as f64)
        })
        .collect();
    let overall = values.iter().sum::<f64>() / values.len() as f64;
    Ok(SilhouetteReport {
        classes: classes.to_vec(),
        values,
        truth: truth.to_vec(),
        class_averages,
        overall,
    })
}
