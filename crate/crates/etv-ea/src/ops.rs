//! The ten search operators, each mapping parent genome(s) to one offspring.
//!
//! Every operator clamps its output to the problem box. Operators 1, 3 and 7
//! use no randomness and are pure functions of their parents.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bench::Bounds;
use crate::scalar::{real, Real};

/// Search operator identifiers, in catalog order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Operator {
    /// Heuristic crossover: step from the worse parent past the better one.
    Wright = 1,
    /// One-point crossover.
    SimpleCrossover = 2,
    /// Extended line crossover with a fixed blend factor.
    ExtendedLine = 3,
    /// Uniform crossover, each gene from either parent with probability 0.5.
    UniformCrossover = 4,
    /// Blend crossover sampling each gene from the extended parent interval.
    BlxAlpha = 5,
    /// Differential step from the fittest of three parents.
    Differential = 6,
    /// Copy the fitter parent except its most dissimilar gene.
    Swap = 7,
    /// Shift all genes by one shared signed fraction of their ranges.
    Raise = 8,
    /// Shift one random gene by a small signed fraction of its range.
    Creep = 9,
    /// Replace one random gene by a uniform draw from its full range.
    RandomReset = 10,
}

impl Operator {
    pub const ALL: [Operator; 10] = [
        Operator::Wright,
        Operator::SimpleCrossover,
        Operator::ExtendedLine,
        Operator::UniformCrossover,
        Operator::BlxAlpha,
        Operator::Differential,
        Operator::Swap,
        Operator::Raise,
        Operator::Creep,
        Operator::RandomReset,
    ];

    /// Catalog number, 1 through 10.
    pub fn id(self) -> u8 {
        self as u8
    }

    /// Zero-based slot used for probability and score arrays.
    pub fn index(self) -> usize {
        self as usize - 1
    }

    pub fn from_id(id: u8) -> Option<Operator> {
        (id >= 1).then(|| Operator::ALL.get(id as usize - 1).copied())?
    }

    /// Number of parents the operator consumes.
    pub fn arity(self) -> usize {
        match self {
            Operator::Differential => 3,
            Operator::Raise | Operator::Creep | Operator::RandomReset => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl From<Operator> for u8 {
    fn from(op: Operator) -> u8 {
        op.id()
    }
}

impl TryFrom<u8> for Operator {
    type Error = String;

    fn try_from(id: u8) -> Result<Self, Self::Error> {
        Operator::from_id(id).ok_or_else(|| format!("operator id out of range: {id}"))
    }
}

/// Tunable operator constants.
#[derive(Clone, Copy, Debug)]
pub struct OperatorParams<T> {
    pub wright_r: T,
    pub line_alpha: T,
    pub blx_alpha: T,
    pub differential_f: T,
    pub raise_amount: T,
    pub creep_amount: T,
}

impl<T: Real> Default for OperatorParams<T> {
    fn default() -> Self {
        OperatorParams {
            wright_r: real(0.5),
            line_alpha: real(0.3),
            blx_alpha: real(0.2),
            differential_f: real(0.5),
            raise_amount: real(0.01),
            creep_amount: real(0.001),
        }
    }
}

/// A parent as seen by an operator: genome slice plus fitness.
pub type Parent<'a, T> = (&'a [T], T);

/// Applies `op` to `parents`, returning one offspring genome clamped to
/// `bounds`. Panics if the parent count does not match the operator arity.
pub fn apply<T: Real, R: Rng>(
    op: Operator,
    parents: &[Parent<'_, T>],
    bounds: &Bounds<T>,
    params: &OperatorParams<T>,
    rng: &mut R,
) -> Vec<T> {
    assert_eq!(
        parents.len(),
        op.arity(),
        "operator {op} expects {} parent(s)",
        op.arity()
    );
    let n = parents[0].0.len();
    let mut child = match op {
        Operator::Wright => {
            let (best, worst) = order_by_fitness(parents[0], parents[1]);
            best.iter()
                .zip(worst)
                .map(|(&b, &w)| params.wright_r * (b - w) + b)
                .collect()
        }
        Operator::SimpleCrossover => {
            let (a, b) = (parents[0].0, parents[1].0);
            if n < 2 {
                a.to_vec()
            } else {
                let cut = rng.random_range(1..n);
                let mut g = a[..cut].to_vec();
                g.extend_from_slice(&b[cut..]);
                g
            }
        }
        Operator::ExtendedLine => {
            let (a, b) = (parents[0].0, parents[1].0);
            a.iter()
                .zip(b)
                .map(|(&x, &y)| x + params.line_alpha * (y - x))
                .collect()
        }
        Operator::UniformCrossover => {
            let (a, b) = (parents[0].0, parents[1].0);
            (0..n)
                .map(|i| if rng.random_bool(0.5) { a[i] } else { b[i] })
                .collect()
        }
        Operator::BlxAlpha => {
            let (a, b) = (parents[0].0, parents[1].0);
            (0..n)
                .map(|i| {
                    let (lo, hi) = (a[i].min(b[i]), a[i].max(b[i]));
                    let spread = params.blx_alpha * (hi - lo);
                    if spread > T::zero() {
                        rng.random_range(lo - spread..hi + spread)
                    } else {
                        a[i]
                    }
                })
                .collect()
        }
        Operator::Differential => {
            let base = fittest_index(parents);
            let rest: Vec<usize> = (0..3).filter(|&k| k != base).collect();
            let (x1, x2, x3) = (parents[base].0, parents[rest[0]].0, parents[rest[1]].0);
            x1.iter()
                .zip(x2.iter().zip(x3))
                .map(|(&b, (&p, &q))| b + params.differential_f * (p - q))
                .collect()
        }
        Operator::Swap => {
            let (fit, weak) = order_by_fitness(parents[0], parents[1]);
            let mut pick = 0;
            let mut best_diff = T::neg_infinity();
            for i in 0..n {
                let diff = ((fit[i] - weak[i]) / bounds.range(i)).abs();
                if diff > best_diff {
                    best_diff = diff;
                    pick = i;
                }
            }
            let mut g = fit.to_vec();
            g[pick] = weak[pick];
            g
        }
        Operator::Raise => {
            let shift = rng.random_range(real::<T>(-1.0)..real::<T>(1.0));
            parents[0]
                .0
                .iter()
                .enumerate()
                .map(|(i, &x)| x + shift * params.raise_amount * bounds.range(i))
                .collect()
        }
        Operator::Creep => {
            let mut g = parents[0].0.to_vec();
            let i = rng.random_range(0..n);
            let shift = rng.random_range(real::<T>(-1.0)..real::<T>(1.0));
            g[i] = g[i] + shift * params.creep_amount * bounds.range(i);
            g
        }
        Operator::RandomReset => {
            let mut g = parents[0].0.to_vec();
            let i = rng.random_range(0..n);
            g[i] = rng.random_range(bounds.lower()[i]..bounds.upper()[i]);
            g
        }
    };
    bounds.clamp(&mut child);
    child
}

/// Orders two parents as (fitter, weaker); the first-listed wins ties.
fn order_by_fitness<'a, T: Real>(a: Parent<'a, T>, b: Parent<'a, T>) -> (&'a [T], &'a [T]) {
    if b.1 > a.1 {
        (b.0, a.0)
    } else {
        (a.0, b.0)
    }
}

/// Index of the fittest parent; the first-listed wins ties.
fn fittest_index<T: Real>(parents: &[Parent<'_, T>]) -> usize {
    let mut best = 0;
    for k in 1..parents.len() {
        if parents[k].1 > parents[best].1 {
            best = k;
        }
    }
    best
}
