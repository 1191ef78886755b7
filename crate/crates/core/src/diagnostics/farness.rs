use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::classifier::FittedModel;
use crate::error::{Error, Result};
use crate::interval::IntervalFrame;

/// Normal-consistency factor for the median absolute deviation.
const MAD_SCALE: f64 = 1.482_602_218_505_602;
const TRIM: f64 = 0.05;

pub fn yeo_johnson(x: f64, lambda: f64) -> f64 {
    if x >= 0.0 {
        if lambda.abs() < 1e-12 {
            x.ln_1p()
        } else {
            (lambda * x.ln_1p()).exp_m1() / lambda
        }
    } else if (lambda - 2.0).abs() < 1e-12 {
        -(-x).ln_1p()
    } else {
        -((2.0 - lambda) * (-x).ln_1p()).exp_m1() / (2.0 - lambda)
    }
}

fn log_likelihood(xs: &[f64], lambda: f64) -> f64 {
    let n = xs.len() as f64;
    let ys: Vec<f64> = xs.iter().map(|&x| yeo_johnson(x, lambda)).collect();
    let mean = ys.iter().sum::<f64>() / n;
    let var = ys.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / n;
    if var <= 0.0 || !var.is_finite() {
        return f64::NEG_INFINITY;
    }
    let jacobian: f64 = xs.iter().map(|&x| x.signum() * x.abs().ln_1p()).sum();
    -0.5 * n * var.ln() + (lambda - 1.0) * jacobian
}

/// Normal-likelihood estimate of the Yeo-Johnson parameter on `[-4, 4]`:
/// a coarse grid followed by golden-section refinement.
pub fn yeo_johnson_mle(xs: &[f64]) -> f64 {
    let (lo, hi, step) = (-4.0, 4.0, 0.1);
    let steps = ((hi - lo) / step) as usize;
    let mut best = (lo, f64::NEG_INFINITY);
    for k in 0..=steps {
        let l = lo + k as f64 * step;
        let v = log_likelihood(xs, l);
        if v > best.1 {
            best = (l, v);
        }
    }
    let (mut a, mut b) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (log_likelihood(xs, c), log_likelihood(xs, d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = log_likelihood(xs, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = log_likelihood(xs, d);
        }
    }
    let mid = 0.5 * (a + b);
    if log_likelihood(xs, mid) >= best.1 {
        mid
    } else {
        best.0
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Power transform followed by robust standardization, for one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformParams {
    pub lambda: f64,
    pub location: f64,
    pub scale: f64,
}

impl TransformParams {
    /// Fits on the within-class distances of one class. λ maximizes the
    /// normal likelihood of the central 90% of the sample; location and scale
    /// are the median and normal-consistent MAD of all transformed values.
    pub fn fit(distances: &[f64], class: &str) -> Result<Self> {
        let xs = sorted(distances.to_vec());
        let n = xs.len();
        if n < 3 {
            return Err(Error::ClassTooSmall {
                class: class.to_string(),
                count: n,
                needed: 3,
            });
        }
        let cut = (TRIM * n as f64).floor() as usize;
        let core = &xs[cut..n - cut];
        if core[core.len() - 1] - core[0] <= 1e-12 * core[0].abs().max(1.0) {
            return Err(Error::ZeroScale(format!("class {class} has constant distances")));
        }
        let lambda = yeo_johnson_mle(core);
        let ys = sorted(xs.iter().map(|&x| yeo_johnson(x, lambda)).collect());
        let location = median(&ys);
        let scale = MAD_SCALE * median(&sorted(ys.iter().map(|y| (y - location).abs()).collect()));
        if scale <= 1e-12 * location.abs().max(1.0) || !scale.is_finite() {
            return Err(Error::ZeroScale(format!("class {class} has zero median absolute deviation")));
        }
        Ok(TransformParams { lambda, location, scale })
    }

    pub fn z(&self, distance: f64) -> f64 {
        (yeo_johnson(distance, self.lambda) - self.location) / self.scale
    }

    pub fn farness(&self, distance: f64) -> f64 {
        Normal::standard().cdf(self.z(distance))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarnessParams {
    pub classes: Vec<String>,
    pub transforms: Vec<TransformParams>,
}

/// Fits one transformation per class on the squared projected distances of
/// the training members to their own barycentre.
pub fn fit_farness(model: &FittedModel, train: &IntervalFrame) -> Result<FarnessParams> {
    let labels = train.require_labels()?;
    if labels.classes() != model.classes.as_slice() {
        return Err(Error::UnknownClass("training labels differ from the model classes".into()));
    }
    let d = model.distance_matrix(train)?;
    let transforms = (0..model.n_classes())
        .map(|j| {
            let dist: Vec<f64> = labels.members(j).into_iter().map(|h| d[(h, j)]).collect();
            TransformParams::fit(&dist, &model.classes[j])
        })
        .collect::<Result<_>>()?;
    Ok(FarnessParams {
        classes: model.classes.clone(),
        transforms,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarnessTable {
    /// `values[h][j]` is the farness of observation `h` from class `j`.
    pub values: Vec<Vec<f64>>,
    pub truth: Option<Vec<usize>>,
    pub predicted: Vec<usize>,
    /// Minimum farness over classes.
    pub outlyingness: Vec<f64>,
}

impl FarnessTable {
    pub fn n_obs(&self) -> usize {
        self.values.len()
    }

    /// Farness from the true class.
    pub fn own(&self, h: usize) -> Option<f64> {
        self.truth.as_ref().map(|t| self.values[h][t[h]])
    }

    pub fn flags(&self, tau: f64) -> Vec<bool> {
        self.outlyingness.iter().map(|&o| o > tau).collect()
    }
}

pub fn farness(params: &FarnessParams, model: &FittedModel, frame: &IntervalFrame) -> Result<FarnessTable> {
    if params.transforms.len() != model.n_classes() {
        return Err(Error::ShapeMismatch(format!(
            "{} farness transforms for {} classes",
            params.transforms.len(),
            model.n_classes()
        )));
    }
    let d = model.distance_matrix(frame)?;
    let values: Vec<Vec<f64>> = (0..d.nrows())
        .map(|h| params.transforms.iter().enumerate().map(|(j, t)| t.farness(d[(h, j)])).collect())
        .collect();
    let predicted = (0..d.nrows())
        .map(|h| crate::classifier::argmin(&d.row(h).iter().copied().collect::<Vec<_>>()))
        .collect();
    let outlyingness = values.iter().map(|row| row.iter().copied().fold(f64::INFINITY, f64::min)).collect();
    let truth = match frame.labels() {
        Some(l) if l.classes() == model.classes.as_slice() => Some(l.assignments().to_vec()),
        Some(_) => return Err(Error::UnknownClass("frame labels differ from the model classes".into())),
        None => None,
    };
    Ok(FarnessTable {
        values,
        truth,
        predicted,
        outlyingness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, LogNormal};

    #[test]
    fn transform_branches() {
        assert!((yeo_johnson(3.0, 0.0) - 4f64.ln()).abs() < 1e-15);
        assert!((yeo_johnson(3.0, 1.0) - 3.0).abs() < 1e-14);
        assert!((yeo_johnson(3.0, 2.0) - 7.5).abs() < 1e-13);
        assert!((yeo_johnson(-3.0, 2.0) + 4f64.ln()).abs() < 1e-15);
        assert!((yeo_johnson(-3.0, 1.0) + 3.0).abs() < 1e-14);
        // continuous at λ = 0
        assert!((yeo_johnson(3.0, 1e-9) - yeo_johnson(3.0, 0.0)).abs() < 1e-8);
    }

    #[test]
    fn lognormal_recovers_log() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let dist = LogNormal::new(4.0, 0.4).unwrap();
        let xs: Vec<f64> = (0..2000).map(|_| dist.sample(&mut rng)).collect();
        let t = TransformParams::fit(&xs, "a").unwrap();
        assert!(t.lambda.abs() <= 0.2, "lambda {}", t.lambda);
    }

    #[test]
    fn median_maps_to_half() {
        let xs: Vec<f64> = (1..=41).map(|k| (k as f64).powf(1.5)).collect();
        let t = TransformParams::fit(&xs, "a").unwrap();
        assert!((t.farness(xs[20]) - 0.5).abs() < 0.05);
        assert!(t.farness(xs[0]) < t.farness(xs[40]));
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(TransformParams::fit(&[2.0; 10], "a"), Err(Error::ZeroScale(_))));
        assert!(matches!(TransformParams::fit(&[1.0, 2.0], "a"), Err(Error::ClassTooSmall { .. })));
    }

    #[test]
    fn scaling_keeps_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let dist = LogNormal::new(0.5, 0.8).unwrap();
        let xs: Vec<f64> = (0..60).map(|_| dist.sample(&mut rng)).collect();
        let scaled: Vec<f64> = xs.iter().map(|x| x * 10.0).collect();
        let a = TransformParams::fit(&xs, "a").unwrap();
        let b = TransformParams::fit(&scaled, "a").unwrap();
        let rank = |t: &TransformParams, v: &[f64]| {
            let f: Vec<f64> = v.iter().map(|&x| t.farness(x)).collect();
            let mut idx: Vec<usize> = (0..v.len()).collect();
            idx.sort_by(|&i, &j| f[i].total_cmp(&f[j]));
            idx
        };
        assert_eq!(rank(&a, &xs), rank(&b, &scaled));
    }
}
