use serde::{Deserialize, Serialize};

use super::{
    class_map, confusion, dac_ldac, farness, metrics, silhouette, ClassMapRecord, ConfusionMatrix, DacRecord,
    DistanceScale, FarnessParams, FarnessTable, Metrics, SilhouetteReport,
};
use crate::classifier::FittedModel;
use crate::error::{Error, Result};
use crate::interval::IntervalFrame;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub tau: f64,
    pub predicted: Vec<usize>,
    /// Without the outlier column; metrics are computed from this one.
    pub confusion: ConfusionMatrix,
    /// With the outlier column, when farness parameters were supplied.
    pub confusion_with_outliers: Option<ConfusionMatrix>,
    pub metrics: Metrics,
    pub farness: Option<FarnessTable>,
    pub dac: Vec<DacRecord>,
    pub class_map: Option<Vec<ClassMapRecord>>,
    pub silhouette: SilhouetteReport,
}

/// Scores a labelled frame: predictions, confusion matrices, metrics, DAC and
/// silhouettes, plus farness and global outliers at threshold `tau` when
/// `params` is given.
pub fn evaluate(
    model: &FittedModel,
    params: Option<&FarnessParams>,
    frame: &IntervalFrame,
    tau: f64,
    scale: DistanceScale,
) -> Result<DiagnosticsReport> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::InvalidConfig(format!("threshold {tau} must lie in [0, 1]")));
    }
    let labels = frame.require_labels()?;
    let predicted: Vec<usize> = model.predict_frame(frame)?.into_iter().map(|p| p.class).collect();
    let truth = labels.assignments();
    let plain = confusion(truth, &predicted, &model.classes, None)?;
    let metrics = metrics(&plain)?;
    let dac = dac_ldac(model, frame, scale)?;
    let ldac: Vec<f64> = dac.iter().map(|d| d.ldac).collect();
    let silhouette = silhouette(&ldac, truth, &model.classes)?;
    let (table, with_outliers, map) = match params {
        Some(p) => {
            let table = farness(p, model, frame)?;
            let flags = table.flags(tau);
            let cm = confusion(truth, &predicted, &model.classes, Some(&flags))?;
            let map = class_map(&table, &dac, tau)?;
            (Some(table), Some(cm), Some(map))
        }
        None => (None, None, None),
    };
    Ok(DiagnosticsReport {
        tau,
        predicted,
        confusion: plain,
        confusion_with_outliers: with_outliers,
        metrics,
        farness: table,
        dac,
        class_map: map,
        silhouette,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::fit;
    use crate::diagnostics::fit_farness;
    use crate::fisher::FisherConfig;
    use crate::interval::Labels;
    use nalgebra::DMatrix;

    fn frame() -> IntervalFrame {
        // two 1-D classes around 0 and 10, plus one class-0 member sitting at 9
        let mut c: Vec<f64> = (0..12).map(|k| (k % 4) as f64 * 0.5).collect();
        c.extend((0..12).map(|k| 10.0 + (k % 4) as f64 * 0.5));
        c[11] = 9.0;
        let r: Vec<f64> = (0..24).map(|k| 1.0 + (k % 3) as f64 * 0.1).collect();
        let labels: Vec<&str> = (0..24).map(|h| if h < 12 { "a" } else { "b" }).collect();
        IntervalFrame::new(DMatrix::from_column_slice(24, 1, &c), DMatrix::from_column_slice(24, 1, &r))
            .unwrap()
            .with_labels(Labels::from_strings(&labels))
            .unwrap()
    }

    #[test]
    fn misplaced_member_has_large_ldac() {
        let f = frame();
        let model = fit(&f, &FisherConfig::new(1.0 / 12.0, 1)).unwrap();
        let params = fit_farness(&model, &f).unwrap();
        let rep = evaluate(&model, Some(&params), &f, 1.0, DistanceScale::Unsquared).unwrap();
        assert!(rep.dac[11].ldac > 0.5);
        assert_eq!(rep.predicted[11], 1);
        for h in (0..24).filter(|&h| h != 11) {
            assert!(rep.dac[h].ldac < 0.5);
            assert_eq!(rep.predicted[h], f.labels().unwrap().assignments()[h]);
        }
        // τ = 1 flags nothing
        assert_eq!(rep.confusion_with_outliers.unwrap().outliers, Some(vec![0, 0]));
        let table = rep.farness.unwrap();
        for h in 0..24 {
            assert!(table.outlyingness[h] <= table.own(h).unwrap());
            assert!(table.values[h].iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn tau_out_of_range() {
        let f = frame();
        let model = fit(&f, &FisherConfig::new(0.0, 1)).unwrap();
        assert!(evaluate(&model, None, &f, 1.5, DistanceScale::Unsquared).is_err());
    }
}
