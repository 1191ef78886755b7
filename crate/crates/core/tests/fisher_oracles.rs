use ifda::fisher::{
    fisher_ratio, fisher_ratio_gradient, scatter, solve_basis, FisherConfig, OrthogonalityMode, ScatterSet,
};
use ifda::{IntervalFrame, Labels};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn random_psd(p: usize, rank: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let a = DMatrix::<f64>::from_fn(p, rank, |_, _| normal(rng));
    &a * a.transpose()
}

fn random_frame(n_per: usize, g: usize, p: usize, rng: &mut ChaCha8Rng) -> IntervalFrame {
    let n = n_per * g;
    let shifts: Vec<Vec<f64>> = (0..g).map(|_| (0..p).map(|_| 2.0 * normal(rng)).collect()).collect();
    let mut labels = Vec::new();
    let centres = DMatrix::from_fn(n, p, |h, k| shifts[h / n_per][k] + normal(rng));
    let ranges = DMatrix::from_fn(n, p, |h, k| (1.0 + 0.3 * shifts[h / n_per][k]).abs() + rng.random::<f64>());
    for h in 0..n {
        labels.push(format!("c{}", h / n_per));
    }
    IntervalFrame::new(centres, ranges)
        .unwrap()
        .with_labels(Labels::from_strings(&labels))
        .unwrap()
}

/// Largest generalized eigenpair of (B, W) via Cholesky whitening.
fn top_generalized_eigen(b: &DMatrix<f64>, w: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let l = w.clone().cholesky().expect("W positive definite").l();
    let l_inv = l.clone().try_inverse().unwrap();
    let c = &l_inv * b * l_inv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = c.symmetric_eigen();
    let (k, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    let y = eig.eigenvectors.column(k).into_owned();
    let v = l_inv.transpose() * y;
    (value, v)
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let h = 1e-6;
    for _ in 0..100 {
        let p = rng.random_range(2..=6);
        let s = ScatterSet {
            between_centres: random_psd(p, 2, &mut rng),
            between_ranges: random_psd(p, 2, &mut rng),
            within_centres: random_psd(p, p + 2, &mut rng),
            within_ranges: random_psd(p, p + 2, &mut rng),
            n: 20,
            class_sizes: vec![10, 10],
        };
        let delta = rng.random_range(0.0..=0.25);
        let alpha = loop {
            let a = DVector::<f64>::from_fn(p, |_, _| normal(&mut rng));
            if a.iter().all(|v| v.abs() > 0.05) {
                break a;
            }
        };
        let g = fisher_ratio_gradient(&alpha, &s, delta).unwrap();
        for i in 0..p {
            let mut up = alpha.clone();
            let mut down = alpha.clone();
            up[i] += h;
            down[i] -= h;
            let fd = (fisher_ratio(&up, &s, delta).unwrap() - fisher_ratio(&down, &s, delta).unwrap()) / (2.0 * h);
            let scale = g.amax().max(1e-8);
            assert!((fd - g[i]).abs() <= 1e-5 * scale, "component {i}: fd {fd} vs {}", g[i]);
        }
    }
}

#[test]
fn classical_fda_when_ranges_ignored() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..10 {
        let p = rng.random_range(2..=6);
        let g = rng.random_range(2..=4);
        let frame = random_frame(15, g, p, &mut rng);
        let s = scatter(&frame).unwrap();
        let cfg = FisherConfig {
            delta: 0.0,
            s: 1,
            mode: OrthogonalityMode::CentreUncorrelated,
            seed: trial,
            ..Default::default()
        };
        let basis = solve_basis(&s, &cfg).unwrap();
        let (top, v) = top_generalized_eigen(&s.between_centres, &s.within_centres);
        let a = basis.vectors.column(0).into_owned();
        assert!((basis.ratios[0] - top).abs() <= 1e-6, "ratio {} vs {top}", basis.ratios[0]);
        let cos = a.dot(&v).abs() / (a.norm() * v.norm());
        assert!(cos >= 0.999, "cosine {cos}");
    }
}

#[test]
fn two_classes_have_one_informative_direction() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let frame = random_frame(20, 2, 3, &mut rng);
    let s = scatter(&frame).unwrap();
    let cfg = FisherConfig {
        delta: 0.0,
        s: 2,
        mode: OrthogonalityMode::CentreUncorrelated,
        ..Default::default()
    };
    let basis = solve_basis(&s, &cfg).unwrap();
    let eig = {
        let l = s.within_centres.clone().cholesky().unwrap().l();
        let li = l.try_inverse().unwrap();
        let c = &li * &s.between_centres * li.transpose();
        ((&c + c.transpose()) * 0.5).symmetric_eigenvalues()
    };
    let mut sorted: Vec<f64> = eig.iter().copied().collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    assert!((basis.ratios[0] - sorted[0]).abs() < 1e-6);
    assert!(basis.ratios[1].abs() < 1e-9, "second ratio {}", basis.ratios[1]);
    assert!(sorted[1].abs() < 1e-9);
}
