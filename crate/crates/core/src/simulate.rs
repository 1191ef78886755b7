//! Two-class uniform scenarios and a replicated study against a theoretical
//! benchmark.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{fit, FittedModel};
use crate::diagnostics::{confusion, metrics};
use crate::error::{Error, Result};
use crate::fisher::{solve_basis, FisherConfig, ScatterSet};
use crate::interval::{validate_delta, IntervalFrame, Labels};

pub const BASE_CENTRES: [f64; 3] = [20.0, 10.0, 5.0];
pub const BASE_RANGES: [f64; 3] = [16.0, 12.0, 8.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    A,
    B,
    C,
    D,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::A, Case::B, Case::C, Case::D];

    /// Relative shifts (a, b) of the second class centres and ranges.
    pub fn shifts(self) -> (f64, f64) {
        match self {
            Case::A => (0.6, 0.6),
            Case::B => (0.2, 0.2),
            Case::C => (0.2, 0.05),
            Case::D => (0.05, 0.2),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Case::A),
            "B" => Ok(Case::B),
            "C" => Ok(Case::C),
            "D" => Ok(Case::D),
            other => Err(Error::InvalidConfig(format!("unknown case `{other}`, expected A, B, C or D"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub case: Case,
    pub n1: usize,
    pub n2: usize,
    pub test_multiplier: usize,
    pub seed: u64,
    pub delta: f64,
}

impl ScenarioSpec {
    /// 250 training observations split by the first-class proportion `p1`.
    pub fn new(case: Case, p1: f64, seed: u64) -> Result<Self> {
        if !(p1 > 0.0 && p1 < 1.0) {
            return Err(Error::InvalidConfig(format!("p1 = {p1} must lie in (0, 1)")));
        }
        let n1 = (250.0 * p1).round() as usize;
        Ok(ScenarioSpec {
            case,
            n1,
            n2: 250 - n1,
            test_multiplier: 5,
            seed,
            delta: 1.0 / 12.0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n1 < 2 || self.n2 < 2 {
            return Err(Error::InvalidConfig("each class needs at least two training observations".into()));
        }
        if self.test_multiplier == 0 {
            return Err(Error::InvalidConfig("test_multiplier must be positive".into()));
        }
        validate_delta(self.delta)
    }

    fn class_shifts(&self) -> [(f64, f64); 2] {
        [(0.0, 0.0), self.case.shifts()]
    }

    /// Expected centres and ranges per class (rows).
    pub fn class_means(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let shifts = self.class_shifts();
        let c = DMatrix::from_fn(2, 3, |k, i| BASE_CENTRES[i] * (1.0 + shifts[k].0));
        let r = DMatrix::from_fn(2, 3, |k, i| BASE_RANGES[i] * (1.0 + shifts[k].1));
        (c, r)
    }
}

fn class_names() -> Vec<String> {
    vec!["1".to_string(), "2".to_string()]
}

fn draw(sizes: [usize; 2], shifts: [(f64, f64); 2], rng: &mut ChaCha8Rng) -> IntervalFrame {
    let n = sizes[0] + sizes[1];
    let mut centres = DMatrix::zeros(n, 3);
    let mut ranges = DMatrix::zeros(n, 3);
    let mut assignments = Vec::with_capacity(n);
    let support = |mu: f64, k: f64| Uniform::new_inclusive(0.6 * mu * (1.0 + k), 1.4 * mu * (1.0 + k)).unwrap();
    let mut h = 0;
    for (class, &size) in sizes.iter().enumerate() {
        let (a, b) = shifts[class];
        let cd: Vec<_> = BASE_CENTRES.iter().map(|&mu| support(mu, a)).collect();
        let rd: Vec<_> = BASE_RANGES.iter().map(|&mu| support(mu, b)).collect();
        for _ in 0..size {
            for i in 0..3 {
                centres[(h, i)] = cd[i].sample(rng);
                ranges[(h, i)] = rd[i].sample(rng);
            }
            assignments.push(class);
            h += 1;
        }
    }
    let labels = Labels::from_indices(assignments, class_names()).expect("valid class indices");
    IntervalFrame::new(centres, ranges)
        .expect("uniform supports are positive")
        .with_labels(labels)
        .expect("one label per row")
        .with_variable_names(vec!["x1".into(), "x2".into(), "x3".into()])
        .expect("three variables")
}

/// Training and test frames for one scenario, seeded by `spec.seed`.
pub fn generate(spec: &ScenarioSpec) -> Result<(IntervalFrame, IntervalFrame)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let shifts = spec.class_shifts();
    let train = draw([spec.n1, spec.n2], shifts, &mut rng);
    let m = spec.test_multiplier;
    let test = draw([spec.n1 * m, spec.n2 * m], shifts, &mut rng);
    Ok((train, test))
}

/// Population scatter for the training sizes: within-class matrices are
/// `n_j` times the diagonal of uniform variances, between-class matrices use
/// the expected class means.
pub fn theoretical_scatter(spec: &ScenarioSpec) -> Result<ScatterSet> {
    spec.validate()?;
    let (mc, mr) = spec.class_means();
    Ok(population_scatter([spec.n1, spec.n2], &mc, &mr))
}

fn population_scatter(sizes: [usize; 2], mc: &DMatrix<f64>, mr: &DMatrix<f64>) -> ScatterSet {
    let n = (sizes[0] + sizes[1]) as f64;
    let uniform_var = |mean: f64| (0.8 * mean).powi(2) / 12.0;
    let mut wc = DMatrix::zeros(3, 3);
    let mut wr = DMatrix::zeros(3, 3);
    for (k, &nk) in sizes.iter().enumerate() {
        for i in 0..3 {
            wc[(i, i)] += nk as f64 * uniform_var(mc[(k, i)]);
            wr[(i, i)] += nk as f64 * uniform_var(mr[(k, i)]);
        }
    }
    let between = |m: &DMatrix<f64>| {
        let overall: DVector<f64> = (0..2)
            .map(|k| m.row(k).transpose() * sizes[k] as f64)
            .fold(DVector::zeros(3), |a, b| a + b)
            / n;
        let mut out = DMatrix::zeros(3, 3);
        for (k, &nk) in sizes.iter().enumerate() {
            let d = m.row(k).transpose() - &overall;
            out.ger(nk as f64, &d, &d, 1.0);
        }
        out
    };
    ScatterSet {
        between_centres: between(mc),
        between_ranges: between(mr),
        within_centres: wc,
        within_ranges: wr,
        n: sizes[0] + sizes[1],
        class_sizes: sizes.to_vec(),
    }
}

/// The benchmark classifier: theoretical direction and expected class means.
pub fn benchmark_model(spec: &ScenarioSpec, base: &FisherConfig) -> Result<FittedModel> {
    let cfg = FisherConfig {
        delta: spec.delta,
        s: 1,
        ..base.clone()
    };
    let basis = solve_basis(&theoretical_scatter(spec)?, &cfg)?;
    let (mc, mr) = spec.class_means();
    let n = (spec.n1 + spec.n2) as f64;
    FittedModel::from_parts(
        basis,
        spec.delta,
        class_names(),
        vec![spec.n1 as f64 / n, spec.n2 as f64 / n],
        mc,
        mr,
        cfg,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measures {
    pub accuracy: f64,
    pub macro_f1: f64,
    pub gmean: f64,
}

impl Measures {
    fn of(model: &FittedModel, test: &IntervalFrame) -> Result<Self> {
        let predicted: Vec<usize> = model.predict_frame(test)?.into_iter().map(|p| p.class).collect();
        let cm = confusion(test.require_labels()?.assignments(), &predicted, &model.classes, None)?;
        let m = metrics(&cm)?;
        Ok(Measures {
            accuracy: m.accuracy,
            macro_f1: m.macro_f1,
            gmean: m.gmean,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replicate {
    pub index: usize,
    pub seed: u64,
    pub method: Measures,
    pub benchmark: Measures,
    /// |cos| between the estimated and theoretical first directions.
    pub abs_cosine: f64,
    pub direction: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub spec: ScenarioSpec,
    pub m: usize,
    pub theoretical_direction: Vec<f64>,
    pub replicates: Vec<Replicate>,
    /// Mean squared difference between method and benchmark, per measure.
    pub mse: Measures,
    pub one_minus_acv: f64,
}

/// SplitMix64 step, used to derive independent replicate seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs `m` replicates in parallel. Each replicate draws fresh training and
/// test sets, fits one direction on the training set, and scores both the
/// fitted model and the benchmark on the same test set. The benchmark
/// direction is solved once per scenario.
pub fn run_study(spec: &ScenarioSpec, m: usize, base: &FisherConfig) -> Result<StudyResult> {
    if m == 0 {
        return Err(Error::InvalidConfig("m must be at least 1".into()));
    }
    spec.validate()?;
    let bench = benchmark_model(spec, base)?;
    let alpha1 = bench.basis.vectors.column(0).into_owned();
    let cfg = FisherConfig {
        delta: spec.delta,
        s: 1,
        ..base.clone()
    };
    let replicates = (0..m)
        .into_par_iter()
        .map(|index| {
            let seed = derive_seed(spec.seed, index as u64);
            let (train, test) = generate(&ScenarioSpec { seed, ..spec.clone() })?;
            let model = fit(&train, &cfg)?;
            let a = model.basis.vectors.column(0).into_owned();
            Ok(Replicate {
                index,
                seed,
                method: Measures::of(&model, &test)?,
                benchmark: Measures::of(&bench, &test)?,
                abs_cosine: (a.dot(&alpha1).abs() / (a.norm() * alpha1.norm())).min(1.0),
                direction: a.iter().copied().collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mf = m as f64;
    let mse_of = |f: fn(&Measures) -> f64| {
        replicates
            .iter()
            .map(|r| (f(&r.method) - f(&r.benchmark)).powi(2))
            .sum::<f64>()
            / mf
    };
    let mse = Measures {
        accuracy: mse_of(|x| x.accuracy),
        macro_f1: mse_of(|x| x.macro_f1),
        gmean: mse_of(|x| x.gmean),
    };
    let acv = replicates.iter().map(|r| r.abs_cosine).sum::<f64>() / mf;
    Ok(StudyResult {
        spec: spec.clone(),
        m,
        theoretical_direction: alpha1.iter().copied().collect(),
        replicates,
        mse,
        one_minus_acv: (1.0 - acv).max(0.0),
    })
}
