use nalgebra::{DMatrix, DVector};

use super::scatter::ScatterSet;
use crate::error::{Error, Result};

/// Sign vector with `sgn(0) = 1`.
pub(crate) fn signs(alpha: &DVector<f64>) -> DVector<f64> {
    alpha.map(|a| if a < 0.0 { -1.0 } else { 1.0 })
}

/// Numerator and denominator of the interval Fisher ratio.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RatioParts {
    pub between: f64,
    pub within: f64,
}

fn parts(alpha: &DVector<f64>, s: &ScatterSet, delta: f64) -> Result<RatioParts> {
    if alpha.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: alpha.len(),
        });
    }
    let abs = alpha.abs();
    let between = quad(&s.between_centres, alpha) + delta * quad(&s.between_ranges, &abs);
    let within = quad(&s.within_centres, alpha) + delta * quad(&s.within_ranges, &abs);
    let scale = (s.within_centres.norm() + delta * s.within_ranges.norm()) * alpha.norm_squared();
    if !within.is_finite() || within <= 1e-14 * scale || within <= 0.0 {
        return Err(Error::DegenerateDenominator(within));
    }
    Ok(RatioParts { between, within })
}

fn quad(m: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
    v.dot(&(m * v))
}

/// Between over within inertia of the projection onto `alpha`.
pub fn fisher_ratio(alpha: &DVector<f64>, s: &ScatterSet, delta: f64) -> Result<f64> {
    let RatioParts { between, within } = parts(alpha, s, delta)?;
    Ok(between / within)
}

/// Ratio and its gradient.
///
/// The ranges enter through `|alpha|`, whose derivative is taken with the
/// sign convention `sgn(0) = 1`.
pub fn fisher_ratio_with_gradient(
    alpha: &DVector<f64>,
    s: &ScatterSet,
    delta: f64,
) -> Result<(f64, DVector<f64>)> {
    let RatioParts { between, within } = parts(alpha, s, delta)?;
    let xi = between / within;
    let abs = alpha.abs();
    let centre_part = (&s.between_centres - &s.within_centres * xi) * alpha;
    let range_part = (&s.between_ranges - &s.within_ranges * xi) * &abs;
    let grad = (centre_part + range_part.component_mul(&signs(alpha)) * delta) * (2.0 / within);
    Ok((xi, grad))
}

pub fn fisher_ratio_gradient(alpha: &DVector<f64>, s: &ScatterSet, delta: f64) -> Result<DVector<f64>> {
    fisher_ratio_with_gradient(alpha, s, delta).map(|(_, g)| g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_dim() -> ScatterSet {
        ScatterSet {
            between_centres: DMatrix::from_element(1, 1, 16.0),
            between_ranges: DMatrix::from_element(1, 1, 16.0),
            within_centres: DMatrix::from_element(1, 1, 4.0),
            within_ranges: DMatrix::from_element(1, 1, 4.0),
            n: 4,
            class_sizes: vec![2, 2],
        }
    }

    fn two_dim() -> ScatterSet {
        ScatterSet {
            between_centres: DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 2.0]),
            between_ranges: DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 3.0]),
            within_centres: DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]),
            within_ranges: DMatrix::from_row_slice(2, 2, &[1.5, -0.2, -0.2, 0.7]),
            n: 10,
            class_sizes: vec![5, 5],
        }
    }

    #[test]
    fn hand_summed_ratio() {
        let xi = fisher_ratio(&DVector::from_element(1, 1.0), &one_dim(), 1.0 / 12.0).unwrap();
        assert!((xi - 4.0).abs() < 1e-14);
    }

    #[test]
    fn zero_delta_is_rayleigh_quotient() {
        let s = two_dim();
        let a = DVector::from_vec(vec![0.7, -1.3]);
        let expected = a.dot(&(&s.between_centres * &a)) / a.dot(&(&s.within_centres * &a));
        assert!((fisher_ratio(&a, &s, 0.0).unwrap() - expected).abs() < 1e-14);
        let g = fisher_ratio_gradient(&a, &s, 0.0).unwrap();
        let beta = a.dot(&(&s.within_centres * &a));
        let classical = (&s.between_centres - &s.within_centres * expected) * &a * (2.0 / beta);
        assert!((g - classical).amax() < 1e-14);
    }

    #[test]
    fn scale_and_sign_invariance() {
        let s = two_dim();
        let a = DVector::from_vec(vec![0.4, 1.1]);
        let xi = fisher_ratio(&a, &s, 0.1).unwrap();
        assert!((fisher_ratio(&(&a * 2.0), &s, 0.1).unwrap() - xi).abs() < 1e-14);
        assert!((fisher_ratio(&(-&a), &s, 0.1).unwrap() - xi).abs() < 1e-14);
    }

    #[test]
    fn gradient_is_orthogonal_to_alpha() {
        // degree-zero homogeneity
        let s = two_dim();
        let a = DVector::from_vec(vec![-0.4, 1.1]);
        let g = fisher_ratio_gradient(&a, &s, 0.2).unwrap();
        assert!(g.dot(&a).abs() < 1e-13);
    }

    #[test]
    fn zero_component_uses_right_derivative() {
        let s = two_dim();
        let a = DVector::from_vec(vec![0.0, 1.0]);
        let g = fisher_ratio_gradient(&a, &s, 0.2).unwrap();
        let h = 1e-7;
        let up = fisher_ratio(&DVector::from_vec(vec![h, 1.0]), &s, 0.2).unwrap();
        let here = fisher_ratio(&a, &s, 0.2).unwrap();
        assert!(((up - here) / h - g[0]).abs() < 1e-5);
    }

    #[test]
    fn degenerate_denominator() {
        let mut s = one_dim();
        s.within_centres[(0, 0)] = 0.0;
        s.within_ranges[(0, 0)] = 0.0;
        assert!(matches!(
            fisher_ratio(&DVector::from_element(1, 1.0), &s, 0.1),
            Err(Error::DegenerateDenominator(_))
        ));
    }
}
