//! Sweep of the hand-quality weight: for each candidate weight the game
//! records are re-rated from scratch, a one-feature logistic model learns
//! to predict winners from the pre-game rating difference, and the weight
//! whose model scores the best held-out F1 wins.
//!
//! The intuition: the better the benchmark splits skill from deal luck,
//! the more informative the resulting ratings are about who wins next.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::GameRecord;
use crate::rating::{custom_update, CustomOutcome, RatingParams, RatingState};
use crate::rng::stream_rng;
use rand::seq::SliceRandom;

use std::collections::BTreeMap;

/// One training sample: pre-game rating difference of the first seat over
/// the second, and whether the first seat won.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub d_r: f64,
    pub first_won: bool,
}

/// Replays the records through the score-based system under the given
/// weights and emits one sample per decided game. Draws contribute
/// nothing, so the sample list lines up across different weights.
pub fn rerate(records: &[GameRecord], alpha: f64, beta: f64) -> Result<Vec<Sample>> {
    let params = RatingParams {
        alpha,
        beta,
        ..RatingParams::default()
    };
    params.validate()?;
    let mut states: BTreeMap<String, RatingState> = BTreeMap::new();
    let mut samples = Vec::new();
    for rec in records {
        if rec.w[0] == 0.5 {
            continue;
        }
        let mut one = *states.entry(rec.seats[0].clone()).or_default();
        let mut two = *states.entry(rec.seats[1].clone()).or_default();
        let d_r = one.rating - two.rating;
        match custom_update(&mut one, &mut two, rec, &params) {
            CustomOutcome::Applied(_) => {
                samples.push(Sample {
                    d_r,
                    first_won: rec.w[0] == 1.0,
                });
                states.insert(rec.seats[0].clone(), one);
                states.insert(rec.seats[1].clone(), two);
            }
            CustomOutcome::SkippedDraw => unreachable!("draws filtered above"),
        }
    }
    Ok(samples)
}

/// Logistic model p(win) = sigmoid(w * d_r + b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticModel {
    pub w: f64,
    pub b: f64,
}

impl LogisticModel {
    pub fn probability(&self, x: f64) -> f64 {
        1.0 / (1.0 + (-(self.w * x + self.b)).exp())
    }

    /// Classification at the 0.5 threshold.
    pub fn predicts_positive(&self, x: f64) -> bool {
        self.w * x + self.b >= 0.0
    }
}

fn softplus(z: f64) -> f64 {
    // ln(1 + e^z) without overflow for large |z|.
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Fits the model by batch gradient descent with backtracking steps:
/// a step is accepted only if the mean log-loss does not increase,
/// otherwise the learning rate halves and the step retries. Features are
/// standardized internally; the returned coefficients act on the raw
/// feature.
pub fn fit_logistic(samples: &[Sample]) -> Result<LogisticModel> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::Degenerate("no training samples".into()));
    }
    let positives = samples.iter().filter(|s| s.first_won).count();
    if positives == 0 || positives == n {
        return Err(Error::Degenerate(format!(
            "training labels are single-class ({positives} of {n} positive)"
        )));
    }
    let mean = samples.iter().map(|s| s.d_r).sum::<f64>() / n as f64;
    let var = samples.iter().map(|s| (s.d_r - mean).powi(2)).sum::<f64>() / n as f64;
    let sigma = if var.sqrt() < 1e-12 { 1.0 } else { var.sqrt() };
    let xs: Vec<f64> = samples.iter().map(|s| (s.d_r - mean) / sigma).collect();
    let ys: Vec<f64> = samples
        .iter()
        .map(|s| if s.first_won { 1.0 } else { 0.0 })
        .collect();

    let loss_of = |w: f64, b: f64| {
        xs.iter()
            .zip(&ys)
            .map(|(&x, &y)| softplus(w * x + b) - y * (w * x + b))
            .sum::<f64>()
            / n as f64
    };
    let grad_of = |w: f64, b: f64| {
        let (mut gw, mut gb) = (0.0, 0.0);
        for (&x, &y) in xs.iter().zip(&ys) {
            let p = 1.0 / (1.0 + (-(w * x + b)).exp());
            gw += (p - y) * x;
            gb += p - y;
        }
        (gw / n as f64, gb / n as f64)
    };

    let (mut w, mut b) = (0.0, 0.0);
    let mut loss = loss_of(w, b);
    let mut lr = 1.0;
    'descent: for _ in 0..10_000 {
        let (gw, gb) = grad_of(w, b);
        if (gw * gw + gb * gb).sqrt() < 1e-8 {
            break;
        }
        loop {
            let (nw, nb) = (w - lr * gw, b - lr * gb);
            let next = loss_of(nw, nb);
            if next <= loss {
                (w, b, loss) = (nw, nb, next);
                lr *= 1.2;
                break;
            }
            lr *= 0.5;
            if lr < 1e-18 {
                break 'descent;
            }
        }
    }
    Ok(LogisticModel {
        w: w / sigma,
        b: b - w * mean / sigma,
    })
}

/// Harmonic mean of precision and recall for the positive class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F1Outcome {
    pub value: f64,
    /// True when no positives were predicted nor present, which leaves
    /// the score undefined; it is reported as 0.
    pub degenerate: bool,
}

pub fn f1_score(predictions: &[bool], labels: &[bool]) -> Result<F1Outcome> {
    if predictions.len() != labels.len() || predictions.is_empty() {
        return Err(Error::Config(format!(
            "F1 needs matching non-empty inputs, got {} predictions and {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fn_ = 0u64;
    for (&p, &y) in predictions.iter().zip(labels) {
        match (p, y) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    let denom = 2 * tp + fp + fn_;
    if denom == 0 {
        return Ok(F1Outcome {
            value: 0.0,
            degenerate: true,
        });
    }
    Ok(F1Outcome {
        value: 2.0 * tp as f64 / denom as f64,
        degenerate: false,
    })
}

/// Sweep configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneConfig {
    /// Candidate hand-quality weights, strictly increasing.
    pub beta_grid: Vec<f64>,
    pub alpha: f64,
    /// Train fraction of the held-out split.
    pub split: f64,
    pub split_seed: u64,
}

impl Default for TuneConfig {
    fn default() -> TuneConfig {
        TuneConfig {
            beta_grid: default_beta_grid(),
            alpha: crate::rating::ALPHA,
            split: 0.8,
            split_seed: 0,
        }
    }
}

/// 61 weights uniform on [-0.03, 0.03].
pub fn default_beta_grid() -> Vec<f64> {
    (0..61).map(|i| f64::from(i - 30) / 1000.0).collect()
}

/// One sweep point: the weight and its held-out F1, absent if the fit
/// failed for that weight.
pub type CurvePoint = (f64, Option<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    pub curve: Vec<CurvePoint>,
    pub best_beta: f64,
    pub best_f1: f64,
    /// Sample counts behind every point.
    pub train_games: usize,
    pub test_games: usize,
}

/// Runs the full sweep: one rerate, fit, and evaluation per grid point,
/// all sharing a single seeded train/test split. Failed fits become
/// missing points; the sweep only errors when every point fails.
pub fn tune(records: &[GameRecord], cfg: &TuneConfig) -> Result<TuneResult> {
    if cfg.beta_grid.is_empty() {
        return Err(Error::Config("weight grid is empty".into()));
    }
    if cfg.beta_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("weight grid must strictly increase".into()));
    }
    if !(cfg.split > 0.0 && cfg.split < 1.0) {
        return Err(Error::Config(format!(
            "train fraction must lie in (0, 1), got {}",
            cfg.split
        )));
    }
    // Decided games are weight-independent, so one shuffled index split
    // serves every grid point.
    let decided = records.iter().filter(|r| r.w[0] != 0.5).count();
    let train_games = (decided as f64 * cfg.split).floor() as usize;
    if train_games == 0 || train_games == decided {
        return Err(Error::Degenerate(format!(
            "split {} leaves an empty side of {decided} decided games",
            cfg.split
        )));
    }
    let mut order: Vec<usize> = (0..decided).collect();
    order.shuffle(&mut stream_rng(cfg.split_seed, 0));
    let (train_idx, test_idx) = order.split_at(train_games);

    let curve: Vec<CurvePoint> = cfg
        .beta_grid
        .par_iter()
        .map(|&beta| {
            let point = (|| -> Result<f64> {
                let samples = rerate(records, cfg.alpha, beta)?;
                let train: Vec<Sample> = train_idx.iter().map(|&i| samples[i]).collect();
                let model = fit_logistic(&train)?;
                let predictions: Vec<bool> = test_idx
                    .iter()
                    .map(|&i| model.predicts_positive(samples[i].d_r))
                    .collect();
                let labels: Vec<bool> = test_idx.iter().map(|&i| samples[i].first_won).collect();
                Ok(f1_score(&predictions, &labels)?.value)
            })();
            (beta, point.ok())
        })
        .collect();

    let best = curve
        .iter()
        .filter_map(|&(beta, f1)| f1.map(|v| (beta, v)))
        .reduce(|acc, cand| if cand.1 > acc.1 { cand } else { acc })
        .ok_or_else(|| Error::Degenerate("every sweep point failed to fit".into()))?;
    Ok(TuneResult {
        curve,
        best_beta: best.0,
        best_f1: best.1,
        train_games,
        test_games: decided - train_games,
    })
}
