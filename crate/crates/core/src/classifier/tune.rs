//! Grid search over (δ, s) by repeated stratified splits.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fit, FittedModel};
use crate::error::{Error, Result};
use crate::fisher::FisherConfig;
use crate::interval::{validate_delta, IntervalFrame, Labels};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneConfig {
    pub delta_grid: Vec<f64>,
    pub s_grid: Vec<usize>,
    pub n_splits: usize,
    /// Share of each class used for training in a split.
    pub split_fraction: f64,
    pub seed: u64,
}

impl TuneConfig {
    /// Default grids for `p` variables: δ in {0, 0.01, ..., 0.25} and s in {2, ..., min(9, p)}.
    pub fn defaults_for(p: usize) -> Self {
        let s_grid = if p < 2 { vec![1] } else { (2..=p.min(9)).collect() };
        TuneConfig {
            delta_grid: (0..=25).map(|k| k as f64 / 100.0).collect(),
            s_grid,
            n_splits: 30,
            split_fraction: 0.5,
            seed: 0,
        }
    }

    fn normalized(&self, p: usize) -> Result<(Vec<f64>, Vec<usize>)> {
        if self.delta_grid.is_empty() || self.s_grid.is_empty() {
            return Err(Error::InvalidConfig("tuning grids must be non-empty".into()));
        }
        if self.n_splits == 0 {
            return Err(Error::InvalidConfig("n_splits must be positive".into()));
        }
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "split fraction {} must lie in (0, 1)",
                self.split_fraction
            )));
        }
        for &d in &self.delta_grid {
            validate_delta(d)?;
        }
        if let Some(&s) = self.s_grid.iter().find(|&&s| s == 0 || s > p) {
            return Err(Error::InvalidConfig(format!("s = {s} must lie in [1, {p}]")));
        }
        let mut deltas = self.delta_grid.clone();
        deltas.sort_by(f64::total_cmp);
        deltas.dedup();
        let mut ss = self.s_grid.clone();
        ss.sort_unstable();
        ss.dedup();
        Ok((deltas, ss))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneRow {
    pub delta: f64,
    pub s: usize,
    pub mean_accuracy: f64,
}

#[derive(Debug, Clone)]
pub struct TuneOutcome {
    pub delta: f64,
    pub s: usize,
    /// One row per grid pair, ordered by δ then s.
    pub table: Vec<TuneRow>,
    /// Model refit on the full input with the selected pair.
    pub model: FittedModel,
}

/// Stratified partition into (train, test) index sets, both sorted.
///
/// Each class contributes `round(fraction * n_j)` members to the training
/// side, clamped so that both sides keep at least one.
pub fn stratified_split(labels: &Labels, fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidConfig(format!("split fraction {fraction} must lie in (0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for j in 0..labels.n_classes() {
        let mut members = labels.members(j);
        let n = members.len();
        if n < 2 {
            return Err(Error::ClassTooSmall {
                class: labels.classes()[j].clone(),
                count: n,
                needed: 2,
            });
        }
        let k = ((fraction * n as f64).round() as usize).clamp(1, n - 1);
        members.shuffle(&mut rng);
        train.extend_from_slice(&members[..k]);
        test.extend_from_slice(&members[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

fn split_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0xd134_2543_de82_ef95).wrapping_add(i as u64)
}

/// Mean held-out accuracy for every (δ, s) pair, then a refit with the best pair.
///
/// For each δ and split one basis with the largest requested s is solved and
/// truncated for the smaller values, since the sequential solve makes the
/// leading vectors independent of how many follow. Ties favour the smaller δ,
/// then the smaller s.
pub fn tune(frame: &IntervalFrame, cfg: &TuneConfig, base: &FisherConfig) -> Result<TuneOutcome> {
    let labels = frame.require_labels()?;
    let (deltas, ss) = cfg.normalized(frame.n_vars())?;
    let s_max = *ss.last().expect("non-empty");

    let splits: Vec<(IntervalFrame, IntervalFrame)> = (0..cfg.n_splits)
        .map(|i| {
            let (tr, te) = stratified_split(labels, cfg.split_fraction, split_seed(cfg.seed, i))?;
            Ok((frame.subset(&tr), frame.subset(&te)))
        })
        .collect::<Result<_>>()?;

    let cells: Vec<(usize, usize)> = (0..deltas.len())
        .flat_map(|d| (0..splits.len()).map(move |k| (d, k)))
        .collect();
    let accuracies: Vec<Vec<f64>> = cells
        .par_iter()
        .map(|&(d, k)| {
            let fcfg = FisherConfig {
                delta: deltas[d],
                s: s_max,
                ..base.clone()
            };
            let (train, test) = &splits[k];
            let model = fit(train, &fcfg)?;
            ss.iter().map(|&s| model.truncated(s).accuracy(test)).collect()
        })
        .collect::<Result<_>>()?;

    let mut table = Vec::with_capacity(deltas.len() * ss.len());
    for (d, &delta) in deltas.iter().enumerate() {
        for (t, &s) in ss.iter().enumerate() {
            let sum: f64 = (0..splits.len()).map(|k| accuracies[d * splits.len() + k][t]).sum();
            table.push(TuneRow {
                delta,
                s,
                mean_accuracy: sum / splits.len() as f64,
            });
        }
    }
    let mut best = 0;
    for (i, row) in table.iter().enumerate() {
        if row.mean_accuracy > table[best].mean_accuracy + 1e-12 {
            best = i;
        }
    }
    let (delta, s) = (table[best].delta, table[best].s);
    let model = fit(
        frame,
        &FisherConfig {
            delta,
            s,
            ..base.clone()
        },
    )?;
    Ok(TuneOutcome { delta, s, table, model })
}
