//! Interval-valued observations in centre/range form.
//!
//! A p-dimensional symbolic interval is stored as a centre vector and a
//! non-negative range vector. The latent microdata behind each interval are
//! `c + U r / 2` for a latent variable `U` supported on `[-1, 1]`; only the
//! first two moments of `U` enter the Mallows distance, so they are carried by
//! [`LatentSpec`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Class membership for the rows of a frame.
///
/// Classes are kept in sorted order (numerically when every label parses as a
/// number), and each row stores the index of its class in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct Labels {
    classes: Vec<String>,
    assignments: Vec<usize>,
}

fn label_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => x.partial_cmp(&y).unwrap_or(Ordering::Equal).then(a.cmp(b)),
        _ => a.cmp(b),
    }
}

impl Labels {
    /// Derives the class set from the labels themselves.
    pub fn from_strings<S: AsRef<str>>(labels: &[S]) -> Self {
        let mut classes: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let numeric = classes.iter().all(|c| c.parse::<f64>().is_ok());
        if numeric {
            classes.sort_by(|a, b| label_order(a, b));
        } else {
            classes.sort();
        }
        classes.dedup();
        let assignments = labels
            .iter()
            .map(|l| classes.iter().position(|c| c == l.as_ref()).unwrap())
            .collect();
        Labels {
            classes,
            assignments,
        }
    }

    /// Maps labels onto a fixed, externally supplied class list.
    pub fn with_classes<S: AsRef<str>>(labels: &[S], classes: &[String]) -> Result<Self> {
        let assignments = labels
            .iter()
            .map(|l| {
                classes
                    .iter()
                    .position(|c| c == l.as_ref())
                    .ok_or_else(|| Error::UnknownClass(l.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Labels {
            classes: classes.to_vec(),
            assignments,
        })
    }

    /// Builds labels from class indices into `classes`.
    pub fn from_indices(assignments: Vec<usize>, classes: Vec<String>) -> Result<Self> {
        if let Some(&bad) = assignments.iter().find(|&&a| a >= classes.len()) {
            return Err(Error::UnknownClass(bad.to_string()));
        }
        Ok(Labels {
            classes,
            assignments,
        })
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.classes.len()];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }

    /// Row indices belonging to class `j`, in row order.
    pub fn members(&self, j: usize) -> Vec<usize> {
        self.assignments
            .iter()
            .enumerate()
            .filter(|(_, &a)| a == j)
            .map(|(h, _)| h)
            .collect()
    }

    pub fn label_of(&self, h: usize) -> &str {
        &self.classes[self.assignments[h]]
    }
}

/// A single p-dimensional interval.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalVector {
    pub centres: DVector<f64>,
    pub ranges: DVector<f64>,
}

impl IntervalVector {
    pub fn new(centres: Vec<f64>, ranges: Vec<f64>) -> Result<Self> {
        if centres.len() != ranges.len() {
            return Err(Error::DimensionMismatch {
                expected: centres.len(),
                got: ranges.len(),
            });
        }
        Ok(IntervalVector {
            centres: DVector::from_vec(centres),
            ranges: DVector::from_vec(ranges),
        })
    }

    pub fn dim(&self) -> usize {
        self.centres.len()
    }
}

/// n interval observations on p variables.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalFrame {
    centres: DMatrix<f64>,
    ranges: DMatrix<f64>,
    labels: Option<Labels>,
    variable_names: Vec<String>,
}

impl IntervalFrame {
    pub fn new(centres: DMatrix<f64>, ranges: DMatrix<f64>) -> Result<Self> {
        if centres.shape() != ranges.shape() {
            return Err(Error::ShapeMismatch(format!(
                "centres {:?} vs ranges {:?}",
                centres.shape(),
                ranges.shape()
            )));
        }
        for (idx, &r) in ranges.iter().enumerate() {
            // column-major storage
            if r < 0.0 || r.is_nan() {
                let n = ranges.nrows();
                return Err(Error::NegativeWidth {
                    row: idx % n,
                    col: idx / n,
                });
            }
        }
        let variable_names = (1..=centres.ncols()).map(|i| format!("x{i}")).collect();
        Ok(IntervalFrame {
            centres,
            ranges,
            labels: None,
            variable_names,
        })
    }

    /// Builds a frame from interval bounds: `c = (a + b) / 2`, `r = b - a`.
    pub fn from_bounds(lower: &DMatrix<f64>, upper: &DMatrix<f64>) -> Result<Self> {
        if lower.shape() != upper.shape() {
            return Err(Error::ShapeMismatch(format!(
                "lower {:?} vs upper {:?}",
                lower.shape(),
                upper.shape()
            )));
        }
        for i in 0..lower.nrows() {
            for k in 0..lower.ncols() {
                if upper[(i, k)] < lower[(i, k)] {
                    return Err(Error::NegativeWidth { row: i, col: k });
                }
            }
        }
        let centres = (lower + upper) * 0.5;
        let ranges = upper - lower;
        Self::new(centres, ranges)
    }

    pub fn with_labels(mut self, labels: Labels) -> Result<Self> {
        if labels.len() != self.n_obs() {
            return Err(Error::LengthMismatch(labels.len(), self.n_obs()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_variable_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n_vars() {
            return Err(Error::LengthMismatch(names.len(), self.n_vars()));
        }
        self.variable_names = names;
        Ok(self)
    }

    pub fn n_obs(&self) -> usize {
        self.centres.nrows()
    }

    pub fn n_vars(&self) -> usize {
        self.centres.ncols()
    }

    pub fn centres(&self) -> &DMatrix<f64> {
        &self.centres
    }

    pub fn ranges(&self) -> &DMatrix<f64> {
        &self.ranges
    }

    pub fn lower(&self) -> DMatrix<f64> {
        &self.centres - &self.ranges * 0.5
    }

    pub fn upper(&self) -> DMatrix<f64> {
        &self.centres + &self.ranges * 0.5
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn require_labels(&self) -> Result<&Labels> {
        self.labels.as_ref().ok_or(Error::MissingLabels)
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    pub fn row(&self, h: usize) -> IntervalVector {
        IntervalVector {
            centres: self.centres.row(h).transpose(),
            ranges: self.ranges.row(h).transpose(),
        }
    }

    /// Rows `indices` as a new frame; labels keep the full class list.
    pub fn subset(&self, indices: &[usize]) -> IntervalFrame {
        let centres = self.centres.select_rows(indices.iter());
        let ranges = self.ranges.select_rows(indices.iter());
        let labels = self.labels.as_ref().map(|l| Labels {
            classes: l.classes.clone(),
            assignments: indices.iter().map(|&h| l.assignments[h]).collect(),
        });
        IntervalFrame {
            centres,
            ranges,
            labels,
            variable_names: self.variable_names.clone(),
        }
    }
}

/// Moments of the latent microdata variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatentSpec {
    /// Symmetric `U` shared by every variable; `delta = Var[U] / 4`.
    Symmetric { delta: f64 },
    /// Per-variable `E[U_i^2] / 4` and `E[U_i]`.
    General { delta: Vec<f64>, psi: Vec<f64> },
}

impl LatentSpec {
    pub fn symmetric(delta: f64) -> Result<Self> {
        validate_delta(delta)?;
        Ok(LatentSpec::Symmetric { delta })
    }

    pub fn general(delta: Vec<f64>, psi: Vec<f64>) -> Result<Self> {
        if delta.len() != psi.len() {
            return Err(Error::DimensionMismatch {
                expected: delta.len(),
                got: psi.len(),
            });
        }
        for (&d, &m) in delta.iter().zip(&psi) {
            validate_delta(d)?;
            if !(-1.0..=1.0).contains(&m) {
                return Err(Error::InvalidConfig(format!("E[U] = {m} outside [-1, 1]")));
            }
            // Var[U] >= 0  <=>  E[U]^2 <= E[U^2] = 4 delta
            if m * m > 4.0 * d * (1.0 + 1e-12) + 1e-15 {
                return Err(Error::InvalidConfig(format!(
                    "E[U]^2 = {} exceeds E[U^2] = {}",
                    m * m,
                    4.0 * d
                )));
            }
        }
        Ok(LatentSpec::General { delta, psi })
    }
}

pub(crate) fn validate_delta(delta: f64) -> Result<()> {
    if !(0.0..=0.25).contains(&delta) {
        return Err(Error::InvalidConfig(format!(
            "delta = {delta} outside [0, 1/4]"
        )));
    }
    Ok(())
}

/// Symmetric latent distributions with a known `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedDistribution {
    TwoPointUniform,
    InverseTriangular,
    ContinuousUniform,
    Triangular,
    TruncatedNormal19,
    Degenerate,
}

impl NamedDistribution {
    pub const ALL: [NamedDistribution; 6] = [
        NamedDistribution::TwoPointUniform,
        NamedDistribution::InverseTriangular,
        NamedDistribution::ContinuousUniform,
        NamedDistribution::Triangular,
        NamedDistribution::TruncatedNormal19,
        NamedDistribution::Degenerate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedDistribution::TwoPointUniform => "two_point_uniform",
            NamedDistribution::InverseTriangular => "inverse_triangular",
            NamedDistribution::ContinuousUniform => "continuous_uniform",
            NamedDistribution::Triangular => "triangular",
            NamedDistribution::TruncatedNormal19 => "truncated_normal_1_9",
            NamedDistribution::Degenerate => "degenerate",
        }
    }

    /// `Var[U] / 4` for this distribution.
    pub fn delta(self) -> f64 {
        match self {
            NamedDistribution::TwoPointUniform => 0.25,
            NamedDistribution::InverseTriangular => 0.125,
            NamedDistribution::ContinuousUniform => 1.0 / 12.0,
            NamedDistribution::Triangular => 1.0 / 24.0,
            NamedDistribution::TruncatedNormal19 => {
                // N(0, 1/9) truncated to [-1, 1], i.e. at three standard deviations.
                let std = Normal::standard();
                1.0 / 36.0 - std.pdf(3.0) / (6.0 * (2.0 * std.cdf(3.0) - 1.0))
            }
            NamedDistribution::Degenerate => 0.0,
        }
    }
}

impl fmt::Display for NamedDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedDistribution::ALL
            .iter()
            .copied()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::UnknownDistribution(s.to_string()))
    }
}

/// Looks up `delta` by distribution name.
pub fn delta_of(name: &str) -> Result<f64> {
    Ok(name.parse::<NamedDistribution>()?.delta())
}

/// Squared Mallows distance with a symmetric latent variable, on raw parts.
pub(crate) fn mallows_sq_parts(c1: &[f64], r1: &[f64], c2: &[f64], r2: &[f64], delta: f64) -> f64 {
    let dc: f64 = c1.iter().zip(c2).map(|(a, b)| (a - b) * (a - b)).sum();
    let dr: f64 = r1.iter().zip(r2).map(|(a, b)| (a - b) * (a - b)).sum();
    dc + delta * dr
}

/// Squared Mallows distance between two intervals.
///
/// The general form is `dc'dc + dr' Delta dr + dc' Psi dr` with
/// `dc = c1 - c2` and `dr = r1 - r2`; the symmetric form drops the cross term.
pub fn mallows_sq(x1: &IntervalVector, x2: &IntervalVector, spec: &LatentSpec) -> Result<f64> {
    let p = x1.dim();
    if x2.dim() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: x2.dim(),
        });
    }
    let dc = &x1.centres - &x2.centres;
    let dr = &x1.ranges - &x2.ranges;
    match spec {
        LatentSpec::Symmetric { delta } => Ok(dc.dot(&dc) + delta * dr.dot(&dr)),
        LatentSpec::General { delta, psi } => {
            if delta.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    got: delta.len(),
                });
            }
            let mut total = 0.0;
            for i in 0..p {
                total += dc[i] * dc[i] + delta[i] * dr[i] * dr[i] + psi[i] * dc[i] * dr[i];
            }
            Ok(total)
        }
    }
}

/// Componentwise mean of centres and ranges over `subset`.
pub fn barycentre(frame: &IntervalFrame, subset: &[usize]) -> Result<IntervalVector> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let p = frame.n_vars();
    let mut c = DVector::zeros(p);
    let mut r = DVector::zeros(p);
    for &h in subset {
        if h >= frame.n_obs() {
            return Err(Error::DimensionMismatch {
                expected: frame.n_obs(),
                got: h,
            });
        }
        c += frame.centres.row(h).transpose();
        r += frame.ranges.row(h).transpose();
    }
    let n = subset.len() as f64;
    Ok(IntervalVector {
        centres: c / n,
        ranges: r / n,
    })
}

/// Per-class barycentres, one row per class.
pub fn class_barycentres(frame: &IntervalFrame) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let labels = frame.require_labels()?;
    let g = labels.n_classes();
    let p = frame.n_vars();
    let mut c = DMatrix::zeros(g, p);
    let mut r = DMatrix::zeros(g, p);
    for j in 0..g {
        let members = labels.members(j);
        if members.is_empty() {
            return Err(Error::ClassTooSmall {
                class: labels.classes()[j].clone(),
                count: 0,
                needed: 1,
            });
        }
        let b = barycentre(frame, &members)?;
        c.set_row(j, &b.centres.transpose());
        r.set_row(j, &b.ranges.transpose());
    }
    Ok((c, r))
}

/// Moore linear combination of every row: centre `a'c`, range `|a|'r`.
pub fn moore_project(alpha: &[f64], frame: &IntervalFrame) -> Result<IntervalFrame> {
    let basis = DMatrix::from_column_slice(alpha.len(), 1, alpha);
    project_basis(&basis, frame)
}

/// Projects every row onto each column of `basis` (p x s) with Moore's rule.
pub fn project_basis(basis: &DMatrix<f64>, frame: &IntervalFrame) -> Result<IntervalFrame> {
    if basis.nrows() != frame.n_vars() {
        return Err(Error::DimensionMismatch {
            expected: frame.n_vars(),
            got: basis.nrows(),
        });
    }
    let centres = &frame.centres * basis;
    let ranges = &frame.ranges * basis.abs();
    let names = (1..=basis.ncols()).map(|t| format!("d{t}")).collect();
    Ok(IntervalFrame {
        centres,
        ranges,
        labels: frame.labels.clone(),
        variable_names: names,
    })
}

/// Total, between-class and within-class inertia.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inertia {
    pub total: f64,
    pub between: f64,
    pub within: f64,
}

/// Inertia decomposition under the symmetric squared Mallows distance.
///
/// Each part is summed directly from distances to the barycentres; the caller
/// can check `total == between + within`.
pub fn inertia(frame: &IntervalFrame, delta: f64) -> Result<Inertia> {
    validate_delta(delta)?;
    let labels = frame.require_labels()?;
    let all: Vec<usize> = (0..frame.n_obs()).collect();
    let overall = barycentre(frame, &all)?;
    let oc = overall.centres.as_slice();
    let or = overall.ranges.as_slice();

    let (bc, br) = class_barycentres(frame)?;
    let sizes = labels.class_sizes();
    let mut between = 0.0;
    for (j, &size) in sizes.iter().enumerate() {
        let cj: Vec<f64> = bc.row(j).iter().copied().collect();
        let rj: Vec<f64> = br.row(j).iter().copied().collect();
        between += size as f64 * mallows_sq_parts(&cj, &rj, oc, or, delta);
    }

    let mut total = 0.0;
    let mut within = 0.0;
    for h in 0..frame.n_obs() {
        let ch: Vec<f64> = frame.centres.row(h).iter().copied().collect();
        let rh: Vec<f64> = frame.ranges.row(h).iter().copied().collect();
        total += mallows_sq_parts(&ch, &rh, oc, or, delta);
        let j = labels.assignments()[h];
        let cj: Vec<f64> = bc.row(j).iter().copied().collect();
        let rj: Vec<f64> = br.row(j).iter().copied().collect();
        within += mallows_sq_parts(&ch, &rh, &cj, &rj, delta);
    }
    Ok(Inertia {
        total,
        between,
        within,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(c: &[f64], r: &[f64], labels: &[&str]) -> IntervalFrame {
        let n = c.len();
        IntervalFrame::new(
            DMatrix::from_column_slice(n, 1, c),
            DMatrix::from_column_slice(n, 1, r),
        )
        .unwrap()
        .with_labels(Labels::from_strings(labels))
        .unwrap()
    }

    #[test]
    fn from_bounds_examples() {
        let f = IntervalFrame::from_bounds(&DMatrix::from_element(1, 1, 1.0), &DMatrix::from_element(1, 1, 3.0)).unwrap();
        assert_eq!(f.centres()[(0, 0)], 2.0);
        assert_eq!(f.ranges()[(0, 0)], 2.0);

        let f = IntervalFrame::from_bounds(&DMatrix::from_element(1, 1, 5.0), &DMatrix::from_element(1, 1, 5.0)).unwrap();
        assert_eq!(f.centres()[(0, 0)], 5.0);
        assert_eq!(f.ranges()[(0, 0)], 0.0);

        let lo = DMatrix::from_row_slice(1, 2, &[0.0, 2.0]);
        let hi = DMatrix::from_row_slice(1, 2, &[4.0, 2.0]);
        let f = IntervalFrame::from_bounds(&lo, &hi).unwrap();
        assert_eq!(f.centres().as_slice(), &[2.0, 2.0]);
        assert_eq!(f.ranges().as_slice(), &[4.0, 0.0]);
    }

    #[test]
    fn from_bounds_errors() {
        let lo = DMatrix::from_element(1, 2, 0.0);
        let hi = DMatrix::from_element(2, 2, 1.0);
        assert!(matches!(IntervalFrame::from_bounds(&lo, &hi), Err(Error::ShapeMismatch(_))));
        let lo = DMatrix::from_row_slice(1, 2, &[0.0, 3.0]);
        let hi = DMatrix::from_row_slice(1, 2, &[1.0, 2.0]);
        assert!(matches!(
            IntervalFrame::from_bounds(&lo, &hi),
            Err(Error::NegativeWidth { row: 0, col: 1 })
        ));
    }

    #[test]
    fn negative_range_rejected() {
        let r = IntervalFrame::new(DMatrix::zeros(2, 1), DMatrix::from_column_slice(2, 1, &[1.0, -1.0]));
        assert!(matches!(r, Err(Error::NegativeWidth { row: 1, col: 0 })));
    }

    #[test]
    fn table_deltas() {
        assert_eq!(delta_of("continuous_uniform").unwrap(), 1.0 / 12.0);
        assert_eq!(delta_of("degenerate").unwrap(), 0.0);
        assert_eq!(delta_of("two_point_uniform").unwrap(), 0.25);
        assert_eq!(delta_of("inverse_triangular").unwrap(), 0.125);
        assert_eq!(delta_of("triangular").unwrap(), 1.0 / 24.0);
        assert!(matches!(delta_of("cauchy"), Err(Error::UnknownDistribution(_))));
        let mut previous = f64::INFINITY;
        for d in NamedDistribution::ALL {
            assert!(d.delta() < previous, "table order is descending");
            previous = d.delta();
        }
    }

    #[test]
    fn mallows_examples() {
        let spec = LatentSpec::symmetric(1.0 / 12.0).unwrap();
        let a = IntervalVector::new(vec![0.0], vec![2.0]).unwrap();
        let b = IntervalVector::new(vec![2.0], vec![4.0]).unwrap();
        assert_eq!(mallows_sq(&a, &a, &spec).unwrap(), 0.0);
        assert!((mallows_sq(&a, &b, &spec).unwrap() - 13.0 / 3.0).abs() < 1e-14);

        let point_mass = LatentSpec::general(vec![0.25], vec![1.0]).unwrap();
        let c = IntervalVector::new(vec![1.0], vec![0.0]).unwrap();
        assert_eq!(mallows_sq(&a, &c, &point_mass).unwrap(), 0.0);

        let wide = IntervalVector::new(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        assert!(matches!(mallows_sq(&a, &wide, &spec), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn general_spec_validation() {
        assert!(LatentSpec::general(vec![0.1], vec![0.9]).is_err());
        assert!(LatentSpec::general(vec![0.3], vec![0.0]).is_err());
        assert!(LatentSpec::symmetric(-0.01).is_err());
        assert!(LatentSpec::general(vec![0.25], vec![1.0]).is_ok());
    }

    #[test]
    fn barycentre_examples() {
        let f = frame(&[1.0, 2.0, 3.0], &[0.0, 2.0, 4.0], &["a", "a", "a"]);
        let b = barycentre(&f, &[0, 1, 2]).unwrap();
        assert_eq!((b.centres[0], b.ranges[0]), (2.0, 2.0));
        let b = barycentre(&f, &[2]).unwrap();
        assert_eq!((b.centres[0], b.ranges[0]), (3.0, 4.0));
        assert!(matches!(barycentre(&f, &[]), Err(Error::EmptySubset)));
    }

    #[test]
    fn barycentre_beats_grid() {
        let f = frame(&[0.0, 4.0], &[0.0, 8.0], &["a", "a"]);
        let b = barycentre(&f, &[0, 1]).unwrap();
        assert_eq!((b.centres[0], b.ranges[0]), (2.0, 4.0));
        let delta = 1.0 / 12.0;
        let cost = |c: f64, r: f64| {
            (0..2)
                .map(|h| {
                    mallows_sq_parts(&[f.centres()[(h, 0)]], &[f.ranges()[(h, 0)]], &[c], &[r], delta)
                })
                .sum::<f64>()
        };
        let best = cost(2.0, 4.0);
        for i in 0..=200 {
            for k in 0..=200 {
                let c = -1.0 + 6.0 * i as f64 / 200.0;
                let r = 10.0 * k as f64 / 200.0;
                assert!(cost(c, r) >= best - 1e-12);
            }
        }
    }

    #[test]
    fn moore_examples() {
        let f = IntervalFrame::new(
            DMatrix::from_row_slice(1, 2, &[3.0, 1.0]),
            DMatrix::from_row_slice(1, 2, &[2.0, 2.0]),
        )
        .unwrap();
        let y = moore_project(&[1.0, -2.0], &f).unwrap();
        assert_eq!(y.centres()[(0, 0)], 1.0);
        assert_eq!(y.ranges()[(0, 0)], 6.0);
        let y = moore_project(&[0.0, 1.0], &f).unwrap();
        assert_eq!((y.centres()[(0, 0)], y.ranges()[(0, 0)]), (1.0, 2.0));
        let y = moore_project(&[0.0, 0.0], &f).unwrap();
        assert_eq!((y.centres()[(0, 0)], y.ranges()[(0, 0)]), (0.0, 0.0));
        assert!(matches!(moore_project(&[1.0], &f), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn inertia_edge_cases() {
        let f = frame(&[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0], &["a", "b", "b"]);
        let i = inertia(&f, 1.0 / 12.0).unwrap();
        assert_eq!((i.total, i.between, i.within), (0.0, 0.0, 0.0));

        let f = frame(&[0.0, 3.0, 7.0], &[1.0, 2.0, 5.0], &["a", "b", "c"]);
        let i = inertia(&f, 0.25).unwrap();
        assert_eq!(i.within, 0.0);
        assert!((i.total - i.between).abs() < 1e-12);

        let unlabelled = IntervalFrame::new(DMatrix::zeros(2, 1), DMatrix::zeros(2, 1)).unwrap();
        assert!(matches!(inertia(&unlabelled, 0.0), Err(Error::MissingLabels)));
    }

    #[test]
    fn labels_sort_numerically() {
        let l = Labels::from_strings(&["10", "2", "1", "2"]);
        assert_eq!(l.classes(), &["1", "2", "10"]);
        assert_eq!(l.assignments(), &[2, 1, 0, 1]);
        assert!(Labels::with_classes(&["3"], l.classes()).is_err());
    }
}
