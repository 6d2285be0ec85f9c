//! The ten benchmark problems, all expressed as maximization with optima at 0.
//!
//! Each problem negates a classical minimization objective after subtracting
//! the raw minimum, so a perfect solution scores exactly 0 and everything
//! else is negative. Instance data (bounds, shift constants, the linear
//! system matrix) lives in `data/problems.tsv`, committed so that alternate
//! implementations can load identical instances.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use crate::scalar::{real, Real};

/// Embedded copy of the committed instance table.
const PROBLEM_DATA: &str = include_str!("../data/problems.tsv");

/// Per-dimension box constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct Bounds<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Real> Bounds<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Self {
        assert_eq!(lower.len(), upper.len(), "bound arrays must match");
        assert!(
            lower.iter().zip(&upper).all(|(l, u)| *l < *u),
            "each lower bound must be strictly below its upper bound"
        );
        Bounds { lower, upper }
    }

    /// Uniform bounds replicated across `dims` dimensions.
    pub fn uniform(lower: T, upper: T, dims: usize) -> Self {
        Bounds::new(vec![lower; dims], vec![upper; dims])
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    /// Width of dimension `i`.
    pub fn range(&self, i: usize) -> T {
        self.upper[i] - self.lower[i]
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dims()
            && x.iter()
                .enumerate()
                .all(|(i, v)| self.lower[i] <= *v && *v <= self.upper[i])
    }

    /// Clamps every gene into the box.
    pub fn clamp(&self, x: &mut [T]) {
        for (i, v) in x.iter_mut().enumerate() {
            if *v < self.lower[i] {
                *v = self.lower[i];
            } else if *v > self.upper[i] {
                *v = self.upper[i];
            }
        }
    }
}

/// Identifier of a benchmark problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProblemId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
}

impl ProblemId {
    pub const ALL: [ProblemId; 10] = [
        ProblemId::F1,
        ProblemId::F2,
        ProblemId::F3,
        ProblemId::F4,
        ProblemId::F5,
        ProblemId::F6,
        ProblemId::F7,
        ProblemId::F8,
        ProblemId::F9,
        ProblemId::F10,
    ];

    /// Canonical position in the suite (F1 is 0).
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|p| *p == self).unwrap()
    }

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::F1 => "F1",
            ProblemId::F2 => "F2",
            ProblemId::F3 => "F3",
            ProblemId::F4 => "F4",
            ProblemId::F5 => "F5",
            ProblemId::F6 => "F6",
            ProblemId::F7 => "F7",
            ProblemId::F8 => "F8",
            ProblemId::F9 => "F9",
            ProblemId::F10 => "F10",
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemId::ALL
            .iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| format!("unknown problem `{s}` (expected F1..F10)"))
    }
}

/// A fully instantiated benchmark problem.
#[derive(Clone, Debug)]
pub struct ProblemSpec<T> {
    id: ProblemId,
    bounds: Bounds<T>,
    optimum_shift: T,
    success_threshold: T,
    optimizer: Vec<T>,
    /// Scalar constants specific to the instance (Schwefel shift, Neumaier
    /// target vector).
    constants: Vec<T>,
    /// Coefficient matrix of the linear system (F8 only).
    matrix: Vec<Vec<T>>,
    /// Right-hand side of the linear system, derived as row sums of `matrix`.
    rhs: Vec<T>,
}

impl<T: Real> ProblemSpec<T> {
    /// Loads all ten problems from the committed instance table.
    pub fn all() -> Vec<ProblemSpec<T>> {
        ProblemId::ALL.iter().map(|id| Self::get(*id)).collect()
    }

    /// Loads one problem from the committed instance table.
    pub fn get(id: ProblemId) -> ProblemSpec<T> {
        let mut dims = None;
        let mut bounds_lh = None;
        let mut shift = None;
        let mut threshold = None;
        let mut optimizer: Vec<f64> = Vec::new();
        let mut constants: Vec<f64> = Vec::new();
        let mut matrix: Vec<Vec<f64>> = Vec::new();

        for line in PROBLEM_DATA.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let (prob, key, vals) = (
                fields.next().expect("problem column"),
                fields.next().expect("key column"),
                fields.next().expect("value column"),
            );
            if prob != id.name() {
                continue;
            }
            let nums: Vec<f64> = vals
                .split_whitespace()
                .map(|v| v.parse().expect("numeric value in problems.tsv"))
                .collect();
            match key {
                "dims" => dims = Some(nums[0] as usize),
                "bounds" => bounds_lh = Some((nums[0], nums[1])),
                "shift" => shift = Some(nums[0]),
                "threshold" => threshold = Some(nums[0]),
                "optimizer" => optimizer = nums,
                "constant" => constants = nums,
                "matrix" => matrix.push(nums),
                other => panic!("unknown key `{other}` in problems.tsv"),
            }
        }

        let dims = dims.expect("dims entry");
        let (lo, hi) = bounds_lh.expect("bounds entry");
        if optimizer.len() == 1 {
            optimizer = vec![optimizer[0]; dims];
        }
        assert_eq!(optimizer.len(), dims, "optimizer length for {id}");

        let matrix: Vec<Vec<T>> = matrix
            .into_iter()
            .map(|row| row.into_iter().map(real).collect())
            .collect();
        let rhs = matrix
            .iter()
            .map(|row: &Vec<T>| row.iter().fold(T::zero(), |acc, v| acc + *v))
            .collect();

        ProblemSpec {
            id,
            bounds: Bounds::uniform(real(lo), real(hi), dims),
            optimum_shift: real(shift.expect("shift entry")),
            success_threshold: real(threshold.expect("threshold entry")),
            optimizer: optimizer.into_iter().map(real).collect(),
            constants: constants.into_iter().map(real).collect(),
            matrix,
            rhs,
        }
    }

    pub fn id(&self) -> ProblemId {
        self.id
    }

    pub fn dims(&self) -> usize {
        self.bounds.dims()
    }

    pub fn bounds(&self) -> &Bounds<T> {
        &self.bounds
    }

    pub fn success_threshold(&self) -> T {
        self.success_threshold
    }

    /// The canonical minimizer of the raw objective.
    pub fn known_optimizer(&self) -> &[T] {
        &self.optimizer
    }

    /// Fitness of a feasible point: `-(f_raw(x) - f_raw_min)`, so the
    /// optimum scores 0 and every other point scores below it.
    pub fn evaluate(&self, x: &[T]) -> T {
        assert_eq!(x.len(), self.dims(), "dimension mismatch for {}", self.id);
        assert!(
            self.bounds.contains(x),
            "point out of bounds for {}",
            self.id
        );
        let raw = match self.id {
            ProblemId::F1 => foxholes(x),
            ProblemId::F2 => rastrigin(x),
            ProblemId::F3 => schwefel(x, self.constants[0]),
            ProblemId::F4 => griewank(x),
            ProblemId::F5 => bohachevsky(x),
            ProblemId::F6 => watson(x),
            ProblemId::F7 => colville(x),
            ProblemId::F8 => linear_system(x, &self.matrix, &self.rhs),
            ProblemId::F9 => ackley(x),
            ProblemId::F10 => neumaier2(x, &self.constants),
        };
        -(raw - self.optimum_shift)
    }
}

/// Shekel's foxholes (De Jong F5), 2-D, 25 wells on a 5x5 grid.
fn foxholes<T: Real>(x: &[T]) -> T {
    let base = [-32.0, -16.0, 0.0, 16.0, 32.0];
    let mut sum = real::<T>(0.002);
    for j in 0..25 {
        let a1 = real::<T>(base[j % 5]);
        let a2 = real::<T>(base[j / 5]);
        let term = real::<T>((j + 1) as f64) + (x[0] - a1).powi(6) + (x[1] - a2).powi(6);
        sum = sum + term.recip();
    }
    sum.recip()
}

fn rastrigin<T: Real>(x: &[T]) -> T {
    let ten = real::<T>(10.0);
    let two_pi = real::<T>(2.0 * PI);
    x.iter()
        .map(|&v| v * v - ten * (two_pi * v).cos() + ten)
        .fold(T::zero(), |acc, t| acc + t)
}

/// Schwefel's sine-root function with the standard additive shift constant.
fn schwefel<T: Real>(x: &[T], shift_per_dim: T) -> T {
    let sum = x
        .iter()
        .map(|&v| v * v.abs().sqrt().sin())
        .fold(T::zero(), |acc, t| acc + t);
    shift_per_dim * real::<T>(x.len() as f64) - sum
}

fn griewank<T: Real>(x: &[T]) -> T {
    let sum = x.iter().map(|&v| v * v).fold(T::zero(), |acc, t| acc + t) / real::<T>(4000.0);
    let prod = x
        .iter()
        .enumerate()
        .map(|(i, &v)| (v / real::<T>((i + 1) as f64).sqrt()).cos())
        .fold(T::one(), |acc, t| acc * t);
    sum - prod + T::one()
}

/// Bohachevsky #1, 2-D.
fn bohachevsky<T: Real>(x: &[T]) -> T {
    let three_pi = real::<T>(3.0 * PI);
    let four_pi = real::<T>(4.0 * PI);
    x[0] * x[0] + real::<T>(2.0) * x[1] * x[1]
        - real::<T>(0.3) * (three_pi * x[0]).cos()
        - real::<T>(0.4) * (four_pi * x[1]).cos()
        + real::<T>(0.7)
}

/// Watson's function: the 29-term residual sum over t_i = i/29 plus x1^2.
fn watson<T: Real>(x: &[T]) -> T {
    let n = x.len();
    let mut sum = T::zero();
    for i in 1..=29 {
        let t = real::<T>(i as f64 / 29.0);
        let mut p1 = T::zero();
        for j in 2..=n {
            p1 = p1 + real::<T>((j - 1) as f64) * x[j - 1] * t.powi(j as i32 - 2);
        }
        let mut p2 = T::zero();
        for j in 1..=n {
            p2 = p2 + x[j - 1] * t.powi(j as i32 - 1);
        }
        let r = p1 - p2 * p2 - T::one();
        sum = sum + r * r;
    }
    sum + x[0] * x[0]
}

/// Colville's function, 4-D.
fn colville<T: Real>(x: &[T]) -> T {
    let (x1, x2, x3, x4) = (x[0], x[1], x[2], x[3]);
    let one = T::one();
    real::<T>(100.0) * (x1 * x1 - x2).powi(2)
        + (x1 - one).powi(2)
        + (x3 - one).powi(2)
        + real::<T>(90.0) * (x3 * x3 - x4).powi(2)
        + real::<T>(10.1) * ((x2 - one).powi(2) + (x4 - one).powi(2))
        + real::<T>(19.8) * (x2 - one) * (x4 - one)
}

/// Sum of absolute residuals of the fixed 10x10 linear system `A x = b`,
/// where `b = A . 1` so the all-ones vector solves it exactly.
fn linear_system<T: Real>(x: &[T], a: &[Vec<T>], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(row, rhs)| {
            let dot = row
                .iter()
                .zip(x)
                .map(|(c, v)| *c * *v)
                .fold(T::zero(), |acc, t| acc + t);
            (dot - *rhs).abs()
        })
        .fold(T::zero(), |acc, t| acc + t)
}

/// Ackley's function with a = 20, b = 0.2, c = 2*pi. Grouped so both terms
/// cancel exactly at the origin.
fn ackley<T: Real>(x: &[T]) -> T {
    let n = real::<T>(x.len() as f64);
    let a = real::<T>(20.0);
    let b = real::<T>(0.2);
    let c = real::<T>(2.0 * PI);
    let sum_sq = x.iter().map(|&v| v * v).fold(T::zero(), |acc, t| acc + t);
    let sum_cos = x
        .iter()
        .map(|&v| (c * v).cos())
        .fold(T::zero(), |acc, t| acc + t);
    let e1 = (-b * (sum_sq / n).sqrt()).exp();
    let e2 = (sum_cos / n).exp();
    a * (T::one() - e1) + (real::<T>(E) - e2)
}

/// Neumaier's #2: squared moment mismatches against the target vector `b`.
fn neumaier2<T: Real>(x: &[T], b: &[T]) -> T {
    let mut sum = T::zero();
    for (k, target) in b.iter().enumerate() {
        let power = x
            .iter()
            .map(|&v| v.powi(k as i32 + 1))
            .fold(T::zero(), |acc, t| acc + t);
        let r = *target - power;
        sum = sum + r * r;
    }
    sum
}
