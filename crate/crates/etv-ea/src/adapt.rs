//! Operator portfolio and the probability-update cycle.
//!
//! Every adaptation interval the stored measurements are interpreted into
//! per-operator scores, normalized, and mixed half-and-half into the current
//! probabilities, with a floor keeping every operator measurable.

use rand::Rng;

use crate::credit::Measurement;
use crate::design::DesignSpec;
use crate::ops::Operator;

/// Minimum stored probability of an adaptable operator.
pub const PROBABILITY_FLOOR: f64 = 0.02;

/// Weight an updated probability keeps from its previous value.
const MIX: f64 = 0.5;

/// Scale factor turning a median absolute deviation into a robust sigma.
const MAD_SCALE: f64 = 1.4826;

/// Robust z-score beyond which a measurement counts as an outlier.
const OUTLIER_Z: f64 = 3.0;

/// Per-operator selection weights with adaptation bookkeeping.
///
/// Stored weights are relative: they are renormalized over the candidate set
/// at draw time, so the probability floor never distorts sampling.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPortfolio {
    weights: [f64; 10],
    adaptable: [bool; 10],
    floor: f64,
}

impl OperatorPortfolio {
    /// Uniform portfolio over the adaptable operators. With diversity
    /// control active the random-reset operator is excluded from adaptation
    /// and its slot records the deterministic base probability instead.
    pub fn adaptive(diversity_control: bool, floor: f64) -> Self {
        let mut weights = [0.0; 10];
        let mut adaptable = [true; 10];
        if diversity_control {
            adaptable[Operator::RandomReset.index()] = false;
            for w in &mut weights[..9] {
                *w = 1.0 / 9.0;
            }
            weights[Operator::RandomReset.index()] = floor;
        } else {
            weights = [0.1; 10];
        }
        OperatorPortfolio {
            weights,
            adaptable,
            floor,
        }
    }

    /// Frozen portfolio (no adaptation), e.g. the plain GA.
    pub fn fixed(weights: [f64; 10], floor: f64) -> Self {
        OperatorPortfolio {
            weights,
            adaptable: [false; 10],
            floor,
        }
    }

    /// Portfolio with explicit weights and adaptability flags.
    pub fn new(weights: [f64; 10], adaptable: [bool; 10], floor: f64) -> Self {
        OperatorPortfolio {
            weights,
            adaptable,
            floor,
        }
    }

    pub fn for_design(design: &DesignSpec, floor: f64) -> Self {
        match design.fixed_weights {
            Some(w) => OperatorPortfolio::fixed(w, floor),
            None => OperatorPortfolio::adaptive(design.diversity_control, floor),
        }
    }

    pub fn weights(&self) -> &[f64; 10] {
        &self.weights
    }

    pub fn is_adaptable(&self, op: Operator) -> bool {
        self.adaptable[op.index()]
    }

    /// Draws an operator by renormalized weight. With `exclude_reset` the
    /// random-reset operator is left out (its use is decided separately by
    /// diversity control).
    pub fn sample<R: Rng>(&self, rng: &mut R, exclude_reset: bool) -> Operator {
        let last = if exclude_reset { 9 } else { 10 };
        let total: f64 = self.weights[..last].iter().sum();
        assert!(total > 0.0, "portfolio has no weight to sample from");
        let mut draw = rng.random::<f64>() * total;
        for op in &Operator::ALL[..last] {
            draw -= self.weights[op.index()];
            if draw <= 0.0 {
                return *op;
            }
        }
        // numeric leftovers land on the last candidate
        Operator::ALL[last - 1]
    }

    /// Mixes normalized scores into the stored probabilities. If every
    /// adaptable operator scored zero the portfolio is held unchanged.
    pub fn update(&mut self, scores: &[f64; 10]) {
        let total: f64 = scores
            .iter()
            .zip(&self.adaptable)
            .filter(|(_, adaptable)| **adaptable)
            .map(|(s, _)| s)
            .sum();
        if total <= 0.0 {
            return;
        }
        for ((weight, score), adaptable) in self.weights.iter_mut().zip(scores).zip(&self.adaptable)
        {
            if !adaptable {
                continue;
            }
            let mixed = MIX * *weight + (1.0 - MIX) * (score / total);
            *weight = if mixed < self.floor {
                self.floor
            } else {
                mixed
            };
        }
    }
}

/// Average-value interpretation: each operator scores the mean of its
/// measurements; operators without measurements score 0.
pub fn interpret_average(measurements: &[Measurement]) -> [f64; 10] {
    let mut sums = [0.0; 10];
    let mut counts = [0usize; 10];
    for m in measurements {
        sums[m.operator.index()] += m.value;
        counts[m.operator.index()] += 1;
    }
    let mut scores = [0.0; 10];
    for i in 0..10 {
        if counts[i] > 0 {
            scores[i] = sums[i] / counts[i] as f64;
        }
    }
    scores
}

/// Outlier interpretation: measurements are pooled, robustly standardized
/// by median and scaled MAD, and each operator scores the per-measurement
/// average of the z-score mass beyond the outlier threshold. A degenerate
/// pool (MAD of zero, e.g. binary survival data) yields all-zero scores.
pub fn interpret_outliers(measurements: &[Measurement]) -> [f64; 10] {
    let mut scores = [0.0; 10];
    if measurements.is_empty() {
        return scores;
    }
    let pooled: Vec<f64> = measurements.iter().map(|m| m.value).collect();
    let m = median(&pooled);
    let deviations: Vec<f64> = pooled.iter().map(|v| (v - m).abs()).collect();
    let sigma = MAD_SCALE * median(&deviations);
    if sigma == 0.0 {
        return scores;
    }
    let mut counts = [0usize; 10];
    for meas in measurements {
        let z = (meas.value - m) / sigma;
        scores[meas.operator.index()] += (z - OUTLIER_Z).max(0.0);
        counts[meas.operator.index()] += 1;
    }
    for i in 0..10 {
        if counts[i] > 0 {
            scores[i] /= counts[i] as f64;
        }
    }
    scores
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}
