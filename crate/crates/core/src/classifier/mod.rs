//! Minimum-distance classification in the discriminant subspace.

mod tune;

pub use tune::{stratified_split, tune, TuneConfig, TuneOutcome, TuneRow};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fisher::{scatter, solve_basis, DiscriminantBasis, FisherConfig};
use crate::interval::{class_barycentres, IntervalFrame, IntervalVector};

/// A fitted interval Fisher classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub basis: DiscriminantBasis,
    pub delta: f64,
    pub classes: Vec<String>,
    /// Training class proportions. Not used by the decision rule.
    pub priors: Vec<f64>,
    pub class_centres: DMatrix<f64>,
    pub class_ranges: DMatrix<f64>,
    pub projected_centres: DMatrix<f64>,
    pub projected_ranges: DMatrix<f64>,
    pub config: FisherConfig,
}

/// Predicted class index and the squared projected distance to every class.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub class: usize,
    pub distances: Vec<f64>,
}

/// Index of the smallest value; the lowest index wins ties.
pub(crate) fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (j, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = j;
        }
    }
    best
}

impl FittedModel {
    /// Assembles a model from a basis and class barycentres.
    pub fn from_parts(
        basis: DiscriminantBasis,
        delta: f64,
        classes: Vec<String>,
        priors: Vec<f64>,
        class_centres: DMatrix<f64>,
        class_ranges: DMatrix<f64>,
        config: FisherConfig,
    ) -> Result<Self> {
        let g = classes.len();
        if class_centres.shape() != class_ranges.shape() || class_centres.nrows() != g || priors.len() != g {
            return Err(Error::ShapeMismatch("class barycentres, priors and classes disagree".into()));
        }
        if class_centres.ncols() != basis.vectors.nrows() {
            return Err(Error::DimensionMismatch {
                expected: basis.vectors.nrows(),
                got: class_centres.ncols(),
            });
        }
        let projected_centres = &class_centres * &basis.vectors;
        let projected_ranges = &class_ranges * basis.vectors.abs();
        Ok(FittedModel {
            basis,
            delta,
            classes,
            priors,
            class_centres,
            class_ranges,
            projected_centres,
            projected_ranges,
            config,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.basis.vectors.nrows()
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn s(&self) -> usize {
        self.basis.s_effective()
    }

    /// The same model restricted to its first `s` directions.
    pub fn truncated(&self, s: usize) -> FittedModel {
        let basis = self.basis.truncated(s);
        let k = basis.s_effective();
        FittedModel {
            projected_centres: self.projected_centres.columns(0, k).into_owned(),
            projected_ranges: self.projected_ranges.columns(0, k).into_owned(),
            basis,
            delta: self.delta,
            classes: self.classes.clone(),
            priors: self.priors.clone(),
            class_centres: self.class_centres.clone(),
            class_ranges: self.class_ranges.clone(),
            config: FisherConfig {
                s: k,
                ..self.config.clone()
            },
        }
    }

    /// Squared projected Mallows distances, one row per observation and one
    /// column per class.
    pub fn distance_matrix(&self, frame: &IntervalFrame) -> Result<DMatrix<f64>> {
        if frame.n_vars() != self.n_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.n_vars(),
                got: frame.n_vars(),
            });
        }
        let pc = frame.centres() * &self.basis.vectors;
        let pr = frame.ranges() * self.basis.vectors.abs();
        let n = frame.n_obs();
        let g = self.n_classes();
        let mut out = DMatrix::zeros(n, g);
        for h in 0..n {
            for j in 0..g {
                let mut d = 0.0;
                for t in 0..self.s() {
                    let dc = pc[(h, t)] - self.projected_centres[(j, t)];
                    let dr = pr[(h, t)] - self.projected_ranges[(j, t)];
                    d += dc * dc + self.delta * dr * dr;
                }
                out[(h, j)] = d;
            }
        }
        Ok(out)
    }

    pub fn predict(&self, x0: &IntervalVector) -> Result<Prediction> {
        if x0.dim() != self.n_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.n_vars(),
                got: x0.dim(),
            });
        }
        let frame = IntervalFrame::new(
            DMatrix::from_row_slice(1, x0.dim(), x0.centres.as_slice()),
            DMatrix::from_row_slice(1, x0.dim(), x0.ranges.as_slice()),
        )?;
        Ok(self.predict_frame(&frame)?.remove(0))
    }

    pub fn predict_frame(&self, frame: &IntervalFrame) -> Result<Vec<Prediction>> {
        let d = self.distance_matrix(frame)?;
        Ok((0..d.nrows())
            .map(|h| {
                let distances: Vec<f64> = d.row(h).iter().copied().collect();
                Prediction {
                    class: argmin(&distances),
                    distances,
                }
            })
            .collect())
    }

    /// Fraction of rows whose predicted class equals the label.
    pub fn accuracy(&self, frame: &IntervalFrame) -> Result<f64> {
        let labels = frame.require_labels()?;
        let preds = self.predict_frame(frame)?;
        if preds.is_empty() {
            return Err(Error::EmptySubset);
        }
        let hits = preds
            .iter()
            .zip(labels.assignments())
            .filter(|(p, &t)| p.class == t)
            .count();
        Ok(hits as f64 / preds.len() as f64)
    }
}

/// Fits scatter matrices, discriminant basis and class barycentres.
pub fn fit(frame: &IntervalFrame, cfg: &FisherConfig) -> Result<FittedModel> {
    let labels = frame.require_labels()?;
    let s = scatter(frame)?;
    let basis = solve_basis(&s, cfg)?;
    let (class_centres, class_ranges) = class_barycentres(frame)?;
    let n = frame.n_obs() as f64;
    let priors = labels.class_sizes().iter().map(|&c| c as f64 / n).collect();
    FittedModel::from_parts(
        basis,
        cfg.delta,
        labels.classes().to_vec(),
        priors,
        class_centres,
        class_ranges,
        cfg.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fisher::OrthogonalityMode;
    use crate::interval::Labels;

    fn one_dim_model(centres: &[f64], ranges: &[f64], delta: f64) -> FittedModel {
        let g = centres.len();
        let basis = DiscriminantBasis {
            vectors: DMatrix::from_element(1, 1, 1.0),
            ratios: vec![1.0],
            s_requested: 1,
            mode: OrthogonalityMode::Usual,
            metric: DMatrix::identity(1, 1),
            converged: vec![true],
        };
        FittedModel::from_parts(
            basis,
            delta,
            (1..=g).map(|j| j.to_string()).collect(),
            vec![1.0 / g as f64; g],
            DMatrix::from_column_slice(g, 1, centres),
            DMatrix::from_column_slice(g, 1, ranges),
            FisherConfig::new(delta, 1),
        )
        .unwrap()
    }

    #[test]
    fn hand_evaluated_distances() {
        let m = one_dim_model(&[0.0, 10.0], &[0.0, 0.0], 1.0 / 12.0);
        let p = m.predict(&IntervalVector::new(vec![4.0], vec![0.0]).unwrap()).unwrap();
        assert_eq!(p.distances, vec![16.0, 36.0]);
        assert_eq!(p.class, 0);
    }

    #[test]
    fn barycentre_is_distance_zero() {
        let m = one_dim_model(&[0.0, 10.0], &[2.0, 5.0], 0.25);
        let p = m.predict(&IntervalVector::new(vec![10.0], vec![5.0]).unwrap()).unwrap();
        assert_eq!(p.class, 1);
        assert_eq!(p.distances[1], 0.0);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let m = one_dim_model(&[0.0, 10.0, 10.0], &[0.0, 0.0, 0.0], 0.1);
        let p = m.predict(&IntervalVector::new(vec![5.0], vec![0.0]).unwrap()).unwrap();
        assert_eq!(p.class, 0);
        let p = m.predict(&IntervalVector::new(vec![9.0], vec![0.0]).unwrap()).unwrap();
        assert_eq!(p.class, 1);
        assert!(m.predict(&IntervalVector::new(vec![1.0, 2.0], vec![0.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn fit_separable_and_priors() {
        let mut c = Vec::new();
        let mut labels = Vec::new();
        for h in 0..250 {
            let class = if h < 50 { "a" } else { "b" };
            let base = if h < 50 { 0.0 } else { 10.0 };
            c.push(base + (h % 5) as f64 * 0.1);
            labels.push(class);
        }
        let frame = IntervalFrame::new(DMatrix::from_column_slice(250, 1, &c), DMatrix::from_element(250, 1, 1.0))
            .unwrap()
            .with_labels(Labels::from_strings(&labels))
            .unwrap();
        let model = fit(&frame, &FisherConfig::new(0.0, 1)).unwrap();
        assert!((model.priors[0] - 0.2).abs() < 1e-15 && (model.priors[1] - 0.8).abs() < 1e-15);
        assert!((model.priors.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(model.accuracy(&frame).unwrap(), 1.0);
    }

    #[test]
    fn identical_barycentres_give_zero_ratio() {
        let frame = IntervalFrame::new(
            DMatrix::from_row_slice(4, 2, &[0.0, 1.0, 2.0, 3.0, 2.0, 3.0, 0.0, 1.0]),
            DMatrix::from_row_slice(4, 2, &[1.0, 1.0, 3.0, 1.0, 3.0, 1.0, 1.0, 1.0]),
        )
        .unwrap()
        .with_labels(Labels::from_strings(&["a", "a", "b", "b"]))
        .unwrap();
        let model = fit(&frame, &FisherConfig::new(0.1, 1)).unwrap();
        assert!(model.basis.ratios[0].abs() < 1e-12);
        // both classes sit at the same barycentre, so every row ties and goes to class 0
        for p in model.predict_frame(&frame).unwrap() {
            assert_eq!(p.class, 0);
        }
    }
}
