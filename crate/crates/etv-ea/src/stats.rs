//! Nonparametric comparison of designs and factorial effect estimation.
//!
//! Design samples are compared pairwise with a one-sided Mann-Whitney U
//! test. Small samples (both sides at most 8) are handled by exhaustive
//! rank-split enumeration; larger samples use the normal approximation with
//! midranks, tie-corrected variance and a continuity correction.

use thiserror::Error;

/// Sample size up to which the exact enumeration is used per side.
const EXACT_LIMIT: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("expected {expected} stopping points, got {got}")]
    WrongStoppingPoints { expected: usize, got: usize },
    #[error("factorial analysis needs at least one problem block")]
    EmptyDesign,
}

/// Confidence (1 - p) that sample `a` is stochastically greater than `b`.
pub fn mann_whitney_confidence(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "samples must be non-empty");
    if a.len() <= EXACT_LIMIT && b.len() <= EXACT_LIMIT {
        exact_confidence(a, b)
    } else {
        normal_confidence(a, b, true)
    }
}

/// U statistic of the `a`-side given pooled midranks and the `a` indices.
fn u_from_ranks(ranks: &[f64], subset: &[usize]) -> f64 {
    let na = subset.len() as f64;
    let rank_sum: f64 = subset.iter().map(|&i| ranks[i]).sum();
    rank_sum - na * (na + 1.0) / 2.0
}

/// Exact one-sided p by enumerating every assignment of the pooled values
/// to the first sample: p = P(U >= U_observed) under the null.
fn exact_confidence(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let na = a.len();
    let n = pooled.len();
    let observed: Vec<usize> = (0..na).collect();
    let u_obs = u_from_ranks(&ranks, &observed);

    let mut at_least = 0u64;
    let mut total = 0u64;
    for_each_combination(n, na, |subset| {
        total += 1;
        if u_from_ranks(&ranks, subset) >= u_obs {
            at_least += 1;
        }
    });
    1.0 - at_least as f64 / total as f64
}

/// Normal approximation with midranks and tie-corrected variance.
fn normal_confidence(a: &[f64], b: &[f64], continuity: bool) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let n = na + nb;
    let observed: Vec<usize> = (0..a.len()).collect();
    let u = u_from_ranks(&ranks, &observed);

    let mean = na * nb / 2.0;
    let tie_sum = tie_correction(&pooled);
    let variance = na * nb / 12.0 * ((n + 1.0) - tie_sum / (n * (n - 1.0)));
    if variance <= 0.0 {
        return 0.5; // every pooled value identical
    }
    let correction = if continuity { 0.5 } else { 0.0 };
    let z = (u - mean - correction) / variance.sqrt();
    normal_cdf(z)
}

/// Average ranks of `values` with ties sharing their midrank.
fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&x, &y| values[x].partial_cmp(&values[y]).unwrap());
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let mid = (i + 1 + j) as f64 / 2.0;
        for k in i..j {
            ranks[order[k]] = mid;
        }
        i = j;
    }
    ranks
}

/// Sum of `t^3 - t` over tie groups.
fn tie_correction(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut sum = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        sum += t * t * t - t;
        i = j;
    }
    sum
}

/// Visits every k-combination of `0..n` in lexicographic order.
fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut visit: F) {
    assert!(k <= n);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut advanced = false;
        for i in (0..k).rev() {
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            return;
        }
    }
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Average pairwise confidence of each design against its competitors,
/// scaled to 0..100. Input and output preserve design order.
pub fn confidence_scores(samples: &[(String, Vec<f64>)]) -> Vec<(String, f64)> {
    samples
        .iter()
        .map(|(name, sample)| {
            let mut total = 0.0;
            let mut competitors = 0;
            for (other_name, other) in samples {
                if other_name == name {
                    continue;
                }
                total += mann_whitney_confidence(sample, other);
                competitors += 1;
            }
            let score = if competitors == 0 {
                50.0
            } else {
                100.0 * total / competitors as f64
            };
            (name.clone(), score)
        })
        .collect()
}

/// Mean over all stopping points and the value at the last one.
pub fn mean_final_measures(
    scores: &[f64],
    expected_points: usize,
) -> Result<(f64, f64), StatsError> {
    if scores.len() != expected_points || scores.is_empty() {
        return Err(StatsError::WrongStoppingPoints {
            expected: expected_points,
            got: scores.len(),
        });
    }
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    Ok((mean, *scores.last().unwrap()))
}

/// Factor codes (interpretation, diversity control, credit route) of the
/// eight adaptive designs in order, using the standard -1/+1 convention.
pub const EA_FACTOR_CODES: [[f64; 3]; 8] = [
    [-1.0, -1.0, -1.0], // EA1
    [1.0, -1.0, -1.0],  // EA2
    [-1.0, 1.0, -1.0],  // EA3
    [1.0, 1.0, -1.0],   // EA4
    [-1.0, -1.0, 1.0],  // EA5
    [1.0, -1.0, 1.0],   // EA6
    [-1.0, 1.0, 1.0],   // EA7
    [1.0, 1.0, 1.0],    // EA8
];

/// Main effects and two-way interactions of the 2^3 design.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorialEffects {
    pub i3: f64,
    pub div: f64,
    pub etv: f64,
    pub i3_div: f64,
    pub i3_etv: f64,
    pub div_etv: f64,
}

impl FactorialEffects {
    pub fn named(&self) -> [(&'static str, f64); 6] {
        [
            ("I3", self.i3),
            ("Div", self.div),
            ("ETV", self.etv),
            ("I3xDiv", self.i3_div),
            ("I3xETV", self.i3_etv),
            ("DivxETV", self.div_etv),
        ]
    }
}

/// Effects pooled over problem blocks. `per_problem[p][d]` is the response
/// of design EA(d+1) on problem block `p`. Responses are centered within
/// each block before pooling; each effect is the mean response difference
/// between its +1 and -1 half of the design.
pub fn factorial_effects(per_problem: &[[f64; 8]]) -> Result<FactorialEffects, StatsError> {
    if per_problem.is_empty() {
        return Err(StatsError::EmptyDesign);
    }
    let mut sums = [0.0; 6];
    let mut count = 0.0;
    for block in per_problem {
        let block_mean = block.iter().sum::<f64>() / 8.0;
        for (d, response) in block.iter().enumerate() {
            let [i3, div, etv] = EA_FACTOR_CODES[d];
            let centered = response - block_mean;
            let codes = [i3, div, etv, i3 * div, i3 * etv, div * etv];
            for (slot, code) in sums.iter_mut().zip(codes) {
                *slot += code * centered;
            }
            count += 1.0;
        }
    }
    // mean(+1 half) - mean(-1 half) == sum(code * response) / (count / 2)
    let scale = 2.0 / count;
    Ok(FactorialEffects {
        i3: sums[0] * scale,
        div: sums[1] * scale,
        etv: sums[2] * scale,
        i3_div: sums[3] * scale,
        i3_etv: sums[4] * scale,
        div_etv: sums[5] * scale,
    })
}
