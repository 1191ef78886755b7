//! Sequential quadratic programming for smooth objectives under equality
//! constraints.
//!
//! Each iteration solves the equality-constrained QP
//! `min g'd + d'Hd/2  s.t.  A d = -c` through its KKT system, where `H` is a
//! damped BFGS approximation of the Lagrangian Hessian. Problems supply a
//! `restore` map onto the feasible set; trial points are restored before
//! the Armijo test, so the line search runs on the objective alone.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub(crate) trait ConstrainedProblem {
    fn dim(&self) -> usize;

    /// Objective value and gradient (minimised).
    fn objective(&self, x: &DVector<f64>) -> Result<(f64, DVector<f64>)>;

    /// Constraint residuals `c(x)` and their Jacobian (one row per constraint).
    fn constraints(&self, x: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>);

    /// Maps `x` onto the feasible set. Must leave feasible points unchanged.
    fn restore(&self, x: &mut DVector<f64>) -> bool;
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SqpOptions {
    pub max_iterations: usize,
    pub constraint_tol: f64,
    pub stationarity_tol: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct SqpOutcome {
    pub x: DVector<f64>,
    pub converged: bool,
}

fn least_squares_multipliers(jac: &DMatrix<f64>, grad: &DVector<f64>) -> DVector<f64> {
    if jac.nrows() == 0 {
        return DVector::zeros(0);
    }
    // min || grad - A' lambda ||
    let at = jac.transpose();
    at.svd(true, true)
        .solve(grad, 1e-13)
        .unwrap_or_else(|_| DVector::zeros(jac.nrows()))
}

fn solve_kkt(
    hess: &DMatrix<f64>,
    jac: &DMatrix<f64>,
    grad: &DVector<f64>,
    cons: &DVector<f64>,
) -> Option<(DVector<f64>, DVector<f64>)> {
    let p = hess.nrows();
    let m = jac.nrows();
    let mut kkt = DMatrix::zeros(p + m, p + m);
    kkt.view_mut((0, 0), (p, p)).copy_from(hess);
    kkt.view_mut((0, p), (p, m)).copy_from(&jac.transpose());
    kkt.view_mut((p, 0), (m, p)).copy_from(jac);
    let mut rhs = DVector::zeros(p + m);
    rhs.rows_mut(0, p).copy_from(&(-grad));
    rhs.rows_mut(p, m).copy_from(&(-cons));
    let sol = kkt
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .or_else(|| kkt.svd(true, true).solve(&rhs, 1e-14).ok())?;
    let step = sol.rows(0, p).into_owned();
    // KKT rows read H d + A' nu = -g, so the Lagrange multipliers are -nu.
    let lambda = -sol.rows(p, m).into_owned();
    Some((step, lambda))
}

fn damped_bfgs(hess: &mut DMatrix<f64>, s: &DVector<f64>, y: &DVector<f64>) {
    let hs = &*hess * s;
    let shs = s.dot(&hs);
    if shs <= 0.0 || !shs.is_finite() {
        return;
    }
    let sy = s.dot(y);
    // Powell damping keeps H positive definite.
    let theta = if sy >= 0.2 * shs {
        1.0
    } else {
        0.8 * shs / (shs - sy)
    };
    let r = y * theta + &hs * (1.0 - theta);
    let sr = s.dot(&r);
    if sr <= 1e-300 {
        return;
    }
    hess.ger(-1.0 / shs, &hs, &hs, 1.0);
    hess.ger(1.0 / sr, &r, &r, 1.0);
}

pub(crate) fn minimize<P: ConstrainedProblem>(
    problem: &P,
    start: &DVector<f64>,
    opts: &SqpOptions,
) -> Result<SqpOutcome> {
    let p = problem.dim();
    let mut x = start.clone();
    if !problem.restore(&mut x) {
        return Err(Error::SolverFailure("start cannot be made feasible".into()));
    }
    let (mut value, mut grad) = problem.objective(&x)?;
    let mut hess = DMatrix::<f64>::identity(p, p);
    let mut scaled = false;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iterations {
        let (cons, jac) = problem.constraints(&x);
        let lambda_ls = least_squares_multipliers(&jac, &grad);
        let lagr_grad = &grad - jac.transpose() * &lambda_ls;
        let tol = opts.stationarity_tol * value.abs().max(1.0);
        if lagr_grad.amax() <= tol && cons.amax() <= opts.constraint_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let Some((mut step, mut lambda)) = solve_kkt(&hess, &jac, &grad, &cons) else {
            return Err(Error::SolverFailure("KKT system is singular".into()));
        };
        let mut slope = grad.dot(&step);
        if slope >= 0.0 {
            hess = DMatrix::identity(p, p);
            match solve_kkt(&hess, &jac, &grad, &cons) {
                Some((st, la)) => {
                    step = st;
                    lambda = la;
                    slope = grad.dot(&step);
                }
                None => return Err(Error::SolverFailure("KKT system is singular".into())),
            }
            if slope >= 0.0 {
                break;
            }
        }

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let mut trial = &x + &step * t;
            if problem.restore(&mut trial) {
                if let Ok((v, g)) = problem.objective(&trial) {
                    if v.is_finite() && v <= value + 1e-4 * t * slope {
                        accepted = Some((trial, v, g));
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        let Some((next, next_value, next_grad)) = accepted else {
            // No decrease along a descent direction: treat as numerically stationary.
            converged = lagr_grad.amax() <= tol.sqrt().max(tol * 1e3);
            break;
        };

        let (_, next_jac) = problem.constraints(&next);
        let s = &next - &x;
        let y = (&next_grad - next_jac.transpose() * &lambda) - (&grad - jac.transpose() * &lambda);
        if !scaled {
            let sy = s.dot(&y);
            let yy = y.dot(&y);
            if sy > 0.0 && yy > 0.0 {
                hess = DMatrix::identity(p, p) * (yy / sy);
            }
            scaled = true;
        }
        damped_bfgs(&mut hess, &s, &y);

        let moved = s.amax();
        x = next;
        value = next_value;
        grad = next_grad;
        if moved <= 1e-15 * x.amax().max(1.0) {
            let (cons, jac) = problem.constraints(&x);
            let lag = &grad - jac.transpose() * least_squares_multipliers(&jac, &grad);
            converged = lag.amax() <= tol && cons.amax() <= opts.constraint_tol;
            break;
        }
    }
    Ok(SqpOutcome { x, converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Minimise a linear objective on the unit circle.
    struct LinearOnCircle {
        weights: DVector<f64>,
    }

    impl ConstrainedProblem for LinearOnCircle {
        fn dim(&self) -> usize {
            self.weights.len()
        }

        fn objective(&self, x: &DVector<f64>) -> Result<(f64, DVector<f64>)> {
            Ok((self.weights.dot(x), self.weights.clone()))
        }

        fn constraints(&self, x: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
            let c = DVector::from_element(1, x.norm_squared() - 1.0);
            let j = DMatrix::from_row_slice(1, x.len(), (x * 2.0).as_slice());
            (c, j)
        }

        fn restore(&self, x: &mut DVector<f64>) -> bool {
            let n = x.norm();
            if n == 0.0 {
                return false;
            }
            *x /= n;
            true
        }
    }

    #[test]
    fn linear_objective_on_circle() {
        let problem = LinearOnCircle {
            weights: DVector::from_vec(vec![3.0, 4.0]),
        };
        let opts = SqpOptions {
            max_iterations: 200,
            constraint_tol: 1e-10,
            stationarity_tol: 1e-10,
        };
        let out = minimize(&problem, &DVector::from_vec(vec![1.0, 0.0]), &opts).unwrap();
        assert!(out.converged);
        assert!((problem.weights.dot(&out.x) + 5.0).abs() < 1e-10);
        assert!((out.x[0] + 0.6).abs() < 1e-6 && (out.x[1] + 0.8).abs() < 1e-6);
    }

    #[test]
    fn bfgs_update_stays_positive_definite() {
        let mut h = DMatrix::identity(2, 2);
        damped_bfgs(&mut h, &DVector::from_vec(vec![1.0, 0.0]), &DVector::from_vec(vec![-1.0, 0.5]));
        assert!(h.symmetric_eigenvalues().min() > 0.0);
    }
}
