use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::ratio::{fisher_ratio, fisher_ratio_with_gradient};
use super::scatter::{orthogonality_matrix, OrthogonalityMode, ScatterSet};
use super::sqp::{minimize, ConstrainedProblem, SqpOptions};
use crate::error::{Error, Result};
use crate::interval::validate_delta;

/// Settings of the sequential discriminant-vector solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisherConfig {
    pub delta: f64,
    /// Number of discriminant vectors requested.
    pub s: usize,
    pub mode: OrthogonalityMode,
    /// Starting vector; all ones when absent.
    pub start: Option<Vec<f64>>,
    pub max_iterations: usize,
    pub constraint_tol: f64,
    pub stationarity_tol: f64,
    pub ridge: f64,
    /// Extra random feasible starts tried for every vector.
    pub random_starts: usize,
    pub seed: u64,
}

impl Default for FisherConfig {
    fn default() -> Self {
        FisherConfig {
            delta: 1.0 / 12.0,
            s: 1,
            mode: OrthogonalityMode::Usual,
            start: None,
            max_iterations: 500,
            constraint_tol: 1e-8,
            stationarity_tol: 1e-9,
            ridge: 0.0,
            random_starts: 8,
            seed: 0,
        }
    }
}

impl FisherConfig {
    pub fn new(delta: f64, s: usize) -> Self {
        FisherConfig {
            delta,
            s,
            ..Default::default()
        }
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        validate_delta(self.delta)?;
        if self.s == 0 || self.s > p {
            return Err(Error::InvalidConfig(format!("s = {} must lie in [1, {p}]", self.s)));
        }
        if self.constraint_tol <= 0.0 || self.stationarity_tol <= 0.0 {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        if let Some(start) = &self.start {
            if start.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    got: start.len(),
                });
            }
        }
        Ok(())
    }
}

/// Discriminant vectors (columns) with the ratio reached by each.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminantBasis {
    pub vectors: DMatrix<f64>,
    pub ratios: Vec<f64>,
    pub s_requested: usize,
    pub mode: OrthogonalityMode,
    pub metric: DMatrix<f64>,
    pub converged: Vec<bool>,
}

impl DiscriminantBasis {
    pub fn s_effective(&self) -> usize {
        self.vectors.ncols()
    }

    /// The first `s` vectors.
    pub fn truncated(&self, s: usize) -> DiscriminantBasis {
        let s = s.min(self.s_effective());
        DiscriminantBasis {
            vectors: self.vectors.columns(0, s).into_owned(),
            ratios: self.ratios[..s].to_vec(),
            s_requested: s,
            mode: self.mode,
            metric: self.metric.clone(),
            converged: self.converged[..s].to_vec(),
        }
    }
}

/// Maximise the ratio over `{a : a'Ma = 1, a'M v_j = 0}` for the prior vectors `v_j`.
struct DirectionProblem<'a> {
    scatter: &'a ScatterSet,
    delta: f64,
    metric: &'a DMatrix<f64>,
    priors: &'a [DVector<f64>],
    metric_priors: Vec<DVector<f64>>,
}

impl DirectionProblem<'_> {
    fn deflate(&self, x: &mut DVector<f64>) {
        for _ in 0..2 {
            for (v, mv) in self.priors.iter().zip(&self.metric_priors) {
                let coef = mv.dot(x);
                x.axpy(-coef, v, 1.0);
            }
        }
    }

    fn metric_norm(&self, x: &DVector<f64>) -> f64 {
        x.dot(&(self.metric * x)).max(0.0).sqrt()
    }
}

impl ConstrainedProblem for DirectionProblem<'_> {
    fn dim(&self) -> usize {
        self.scatter.dim()
    }

    fn objective(&self, x: &DVector<f64>) -> Result<(f64, DVector<f64>)> {
        let (xi, grad) = fisher_ratio_with_gradient(x, self.scatter, self.delta)?;
        Ok((-xi, -grad))
    }

    fn constraints(&self, x: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let m = 1 + self.priors.len();
        let p = self.dim();
        let mut c = DVector::zeros(m);
        let mut jac = DMatrix::zeros(m, p);
        let mx = self.metric * x;
        c[0] = x.dot(&mx) - 1.0;
        jac.set_row(0, &(mx * 2.0).transpose());
        for (k, mv) in self.metric_priors.iter().enumerate() {
            c[k + 1] = mv.dot(x);
            jac.set_row(k + 1, &mv.transpose());
        }
        (c, jac)
    }

    fn restore(&self, x: &mut DVector<f64>) -> bool {
        let before = self.metric_norm(x);
        self.deflate(x);
        let norm = self.metric_norm(x);
        // a start lying in the span of the previous vectors has nothing left
        if !norm.is_finite() || norm <= 1e-8 * before || norm <= 1e-300 {
            return false;
        }
        *x /= norm;
        x.iter().all(|v| v.is_finite())
    }
}

/// Sequentially solves for up to `cfg.s` orthonormal discriminant vectors.
pub fn solve_basis(scatter: &ScatterSet, cfg: &FisherConfig) -> Result<DiscriminantBasis> {
    let p = scatter.dim();
    cfg.validate(p)?;
    let metric = orthogonality_matrix(
        cfg.mode,
        &scatter.within_centres,
        scatter.n,
        scatter.n_classes(),
        cfg.ridge,
    )?;
    let opts = SqpOptions {
        max_iterations: cfg.max_iterations,
        constraint_tol: cfg.constraint_tol,
        stationarity_tol: cfg.stationarity_tol,
    };
    let default_start = cfg.start.clone().unwrap_or_else(|| vec![1.0; p]);

    let mut vectors: Vec<DVector<f64>> = Vec::new();
    let mut ratios = Vec::new();
    let mut converged = Vec::new();
    for i in 0..cfg.s {
        let problem = DirectionProblem {
            scatter,
            delta: cfg.delta,
            metric: &metric,
            priors: &vectors,
            metric_priors: vectors.iter().map(|v| &metric * v).collect(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64));
        let mut starts = vec![DVector::from_vec(default_start.clone())];
        for _ in 0..cfg.random_starts {
            starts.push(DVector::from_fn(p, |_, _| StandardNormal.sample(&mut rng)));
        }

        let mut best: Option<(DVector<f64>, f64, bool)> = None;
        for start in starts {
            let mut feasible = start;
            if !problem.restore(&mut feasible) {
                continue;
            }
            let Ok(start_ratio) = fisher_ratio(&feasible, scatter, cfg.delta) else {
                continue;
            };
            let (mut alpha, mut xi, mut ok) = (feasible.clone(), start_ratio, false);
            if let Ok(out) = minimize(&problem, &feasible, &opts) {
                let mut candidate = out.x;
                if problem.restore(&mut candidate) {
                    if let Ok(r) = fisher_ratio(&candidate, scatter, cfg.delta) {
                        if r >= start_ratio {
                            alpha = candidate;
                            xi = r;
                            ok = out.converged;
                        }
                    }
                }
            }
            let better = match &best {
                None => true,
                Some((_, b, _)) => xi > *b + 1e-12 * b.abs().max(1e-300),
            };
            if better {
                best = Some((alpha, xi, ok));
            }
        }

        let Some((alpha, xi, ok)) = best else {
            if i == 0 {
                return Err(Error::SolverFailure("no feasible start for the first vector".into()));
            }
            break;
        };
        if alpha.amax() < 1e-8 || alpha.iter().any(|v| !v.is_finite()) {
            break;
        }
        let norm = alpha.dot(&(&metric * &alpha)).sqrt();
        vectors.push(alpha / norm);
        ratios.push(xi);
        converged.push(ok);
    }

    if vectors.is_empty() {
        return Err(Error::SolverFailure("no discriminant vector found".into()));
    }
    Ok(DiscriminantBasis {
        vectors: DMatrix::from_columns(&vectors),
        ratios,
        s_requested: cfg.s,
        mode: cfg.mode,
        metric,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_scatter(p: usize, seed: u64) -> ScatterSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut psd = |rank: usize| {
            let a = DMatrix::<f64>::from_fn(p, rank, |_, _| StandardNormal.sample(&mut rng));
            &a * a.transpose()
        };
        ScatterSet {
            between_centres: psd(2),
            between_ranges: psd(2),
            within_centres: psd(p + 3),
            within_ranges: psd(p + 3),
            n: 30,
            class_sizes: vec![10, 10, 10],
        }
    }

    fn check_orthonormal(b: &DiscriminantBasis, tol: f64) {
        let gram = b.vectors.transpose() * &b.metric * &b.vectors;
        let eye = DMatrix::<f64>::identity(gram.nrows(), gram.ncols());
        assert!((&gram - eye).amax() <= tol, "{gram}");
    }

    #[test]
    fn constraints_hold_in_both_modes() {
        for mode in [OrthogonalityMode::Usual, OrthogonalityMode::CentreUncorrelated] {
            let s = random_scatter(4, 3);
            let cfg = FisherConfig {
                s: 3,
                mode,
                delta: 0.1,
                ..Default::default()
            };
            let b = solve_basis(&s, &cfg).unwrap();
            assert_eq!(b.s_effective(), 3);
            check_orthonormal(&b, cfg.constraint_tol);
        }
    }

    #[test]
    fn never_worse_than_start() {
        let s = random_scatter(5, 11);
        let cfg = FisherConfig {
            delta: 0.2,
            random_starts: 0,
            ..Default::default()
        };
        let b = solve_basis(&s, &cfg).unwrap();
        let ones = DVector::from_element(5, 1.0);
        let start_ratio = fisher_ratio(&ones, &s, 0.2).unwrap();
        assert!(b.ratios[0] >= start_ratio);
    }

    #[test]
    fn zero_between_scatter_gives_zero_ratio() {
        let mut s = random_scatter(3, 5);
        s.between_centres = DMatrix::zeros(3, 3);
        s.between_ranges = DMatrix::zeros(3, 3);
        let b = solve_basis(&s, &FisherConfig::new(0.1, 2)).unwrap();
        assert!(b.ratios.iter().all(|&r| r == 0.0));
        check_orthonormal(&b, 1e-8);
    }

    #[test]
    fn sign_flip_keeps_ratio() {
        let s = random_scatter(3, 7);
        let b = solve_basis(&s, &FisherConfig::new(0.1, 1)).unwrap();
        let a = b.vectors.column(0).into_owned();
        let r1 = fisher_ratio(&a, &s, 0.1).unwrap();
        let r2 = fisher_ratio(&(-a), &s, 0.1).unwrap();
        assert!((r1 - r2).abs() < 1e-14);
    }

    #[test]
    fn invalid_config() {
        let s = random_scatter(3, 1);
        assert!(solve_basis(&s, &FisherConfig::new(0.1, 4)).is_err());
        assert!(solve_basis(&s, &FisherConfig::new(0.3, 1)).is_err());
        let cfg = FisherConfig {
            start: Some(vec![1.0]),
            ..FisherConfig::new(0.1, 1)
        };
        assert!(matches!(solve_basis(&s, &cfg), Err(Error::DimensionMismatch { .. })));
    }
}
