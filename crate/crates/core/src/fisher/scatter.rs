use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{class_barycentres, IntervalFrame};

/// Between- and within-class scatter of centres and ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterSet {
    pub between_centres: DMatrix<f64>,
    pub between_ranges: DMatrix<f64>,
    pub within_centres: DMatrix<f64>,
    pub within_ranges: DMatrix<f64>,
    pub n: usize,
    pub class_sizes: Vec<usize>,
}

impl ScatterSet {
    pub fn dim(&self) -> usize {
        self.between_centres.nrows()
    }

    pub fn n_classes(&self) -> usize {
        self.class_sizes.len()
    }

    /// Checks shapes, symmetry and positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        let p = self.dim();
        let mats = [
            ("B_C", &self.between_centres),
            ("B_R", &self.between_ranges),
            ("W_C", &self.within_centres),
            ("W_R", &self.within_ranges),
        ];
        for (name, m) in mats {
            if m.shape() != (p, p) {
                return Err(Error::ShapeMismatch(format!("{name} is {:?}, expected ({p}, {p})", m.shape())));
            }
            let scale = m.amax().max(1.0);
            if (m - m.transpose()).amax() > 1e-12 * scale {
                return Err(Error::InvalidConfig(format!("{name} is not symmetric")));
            }
            let min_eig = m.clone().symmetric_eigenvalues().min();
            if min_eig < -1e-9 * scale {
                return Err(Error::InvalidConfig(format!("{name} is not positive semidefinite")));
            }
        }
        if self.class_sizes.iter().sum::<usize>() != self.n {
            return Err(Error::InvalidConfig("class sizes do not sum to n".into()));
        }
        Ok(())
    }
}

fn outer_acc(acc: &mut DMatrix<f64>, v: &DVector<f64>, weight: f64) {
    acc.ger(weight, v, v, 1.0);
}

/// Scatter matrices of a labelled frame.
pub fn scatter(frame: &IntervalFrame) -> Result<ScatterSet> {
    let labels = frame.require_labels()?;
    let sizes = labels.class_sizes();
    let populated = sizes.iter().filter(|&&s| s > 0).count();
    if populated < 2 {
        return Err(Error::SingleClass(populated));
    }
    if let Some(j) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::ClassTooSmall {
            class: labels.classes()[j].clone(),
            count: 0,
            needed: 1,
        });
    }
    let p = frame.n_vars();
    let n = frame.n_obs();
    let (bc, br) = class_barycentres(frame)?;
    let overall_c = frame.centres().row_mean().transpose();
    let overall_r = frame.ranges().row_mean().transpose();
    let mut between_centres = DMatrix::zeros(p, p);
    let mut between_ranges = DMatrix::zeros(p, p);
    for (j, &nj) in sizes.iter().enumerate() {
        let dc = bc.row(j).transpose() - &overall_c;
        let dr = br.row(j).transpose() - &overall_r;
        outer_acc(&mut between_centres, &dc, nj as f64);
        outer_acc(&mut between_ranges, &dr, nj as f64);
    }
    let mut within_centres = DMatrix::zeros(p, p);
    let mut within_ranges = DMatrix::zeros(p, p);
    for h in 0..n {
        let j = labels.assignments()[h];
        let dc = frame.centres().row(h).transpose() - bc.row(j).transpose();
        let dr = frame.ranges().row(h).transpose() - br.row(j).transpose();
        outer_acc(&mut within_centres, &dc, 1.0);
        outer_acc(&mut within_ranges, &dr, 1.0);
    }
    for m in [
        &mut between_centres,
        &mut between_ranges,
        &mut within_centres,
        &mut within_ranges,
    ] {
        let sym = (&*m + m.transpose()) * 0.5;
        *m = sym;
    }
    Ok(ScatterSet {
        between_centres,
        between_ranges,
        within_centres,
        within_ranges,
        n,
        class_sizes: sizes,
    })
}

/// How discriminant vectors are normalised and kept orthogonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OrthogonalityMode {
    /// `M = I`.
    #[default]
    Usual,
    /// `M = W_C / (n - g)`.
    CentreUncorrelated,
}

impl std::str::FromStr for OrthogonalityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "usual" => Ok(OrthogonalityMode::Usual),
            "uncorrelated" | "centre_uncorrelated" => Ok(OrthogonalityMode::CentreUncorrelated),
            other => Err(Error::InvalidConfig(format!("unknown orthogonality mode `{other}`"))),
        }
    }
}

/// The metric `M` of the normalisation and orthogonality constraints.
pub fn orthogonality_matrix(
    mode: OrthogonalityMode,
    within_centres: &DMatrix<f64>,
    n: usize,
    g: usize,
    ridge: f64,
) -> Result<DMatrix<f64>> {
    let p = within_centres.nrows();
    if ridge < 0.0 || !ridge.is_finite() {
        return Err(Error::InvalidConfig(format!("ridge = {ridge} must be non-negative")));
    }
    match mode {
        OrthogonalityMode::Usual => Ok(DMatrix::identity(p, p)),
        OrthogonalityMode::CentreUncorrelated => {
            if n <= g {
                return Err(Error::InvalidConfig(format!("need n > g, got n = {n}, g = {g}")));
            }
            let m = within_centres / (n - g) as f64 + DMatrix::identity(p, p) * ridge;
            let eig = m.clone().symmetric_eigenvalues();
            let max = eig.max();
            let min = eig.min();
            if max <= 0.0 || min <= 1e-12 * max {
                return Err(Error::SingularM);
            }
            Ok(m)
        }
    }
}
