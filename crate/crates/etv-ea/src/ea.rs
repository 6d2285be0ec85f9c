//! Population lifecycle: initialization, tournaments, reproduction with
//! uniqueness enforcement, diversity control, culling, and the
//! per-generation credit/adaptation orchestration.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adapt::{interpret_average, interpret_outliers, OperatorPortfolio, PROBABILITY_FLOOR};
use crate::bench::{Bounds, ProblemSpec};
use crate::credit::{assign_direct_credit, EventArchive, Measurement, DEFAULT_BETA};
use crate::design::{CreditMode, DesignSpec, Interpretation};
use crate::genealogy::{
    dominant_parent, EventCounter, EventId, EventLog, LineageWindow, LogRecord,
    DEFAULT_LINEAGE_DEPTH,
};
use crate::ops::{self, Operator, OperatorParams};
use crate::scalar::{real, Real};

/// Reproduction attempts before falling back to gene resets when an
/// offspring keeps duplicating an existing genome.
const UNIQUENESS_RETRIES: usize = 20;

/// One population member.
#[derive(Clone, Debug)]
pub struct Individual<T> {
    pub genome: Vec<T>,
    pub fitness: T,
    /// Event that created this individual; 0 for initialization.
    pub event: EventId,
    pub window: LineageWindow,
}

/// Per-run parameters, all defaulted to the reference configuration.
#[derive(Clone, Debug)]
pub struct EaParams<T> {
    pub population_size: usize,
    pub adaptation_interval: u32,
    pub lineage_depth: usize,
    pub beta: f64,
    /// Probability floor for adaptable operators, also the base probability
    /// of diversity-controlled mutation.
    pub floor: f64,
    pub delta: T,
    pub ops: OperatorParams<T>,
    /// Keep a per-run event log (for genealogy replay in tests).
    pub record_events: bool,
}

impl<T: Real> Default for EaParams<T> {
    fn default() -> Self {
        EaParams {
            population_size: 30,
            adaptation_interval: 20,
            lineage_depth: DEFAULT_LINEAGE_DEPTH,
            beta: DEFAULT_BETA,
            floor: PROBABILITY_FLOOR,
            delta: real(0.001),
            ops: OperatorParams::default(),
            record_events: false,
        }
    }
}

/// Best fitness and portfolio snapshots of one finished run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    /// `(generation, best fitness so far)` at every checkpoint.
    pub checkpoints: Vec<(u32, f64)>,
    /// `(generation, stored weights)` at every adaptation update.
    pub portfolio_trajectory: Vec<(u32, [f64; 10])>,
}

/// Full optimizer state for one run.
pub struct EaState<T: Real> {
    problem: ProblemSpec<T>,
    design: DesignSpec,
    params: EaParams<T>,
    rng: ChaCha8Rng,
    population: Vec<Individual<T>>,
    portfolio: OperatorPortfolio,
    archive: EventArchive,
    direct: Vec<Measurement>,
    counter: EventCounter,
    generation: u32,
    best_so_far: T,
    portfolio_trajectory: Vec<(u32, [f64; 10])>,
    event_log: Option<EventLog>,
    seed: u64,
}

impl<T: Real> EaState<T> {
    pub fn new(
        problem: ProblemSpec<T>,
        design: DesignSpec,
        params: EaParams<T>,
        seed: u64,
    ) -> Self {
        assert!(params.population_size >= 4, "population too small");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let population = initialize_population(&problem, params.population_size, &mut rng);
        let best_so_far = population
            .iter()
            .map(|m| m.fitness)
            .fold(T::neg_infinity(), T::max);
        let portfolio = OperatorPortfolio::for_design(&design, params.floor);
        let archive = EventArchive::new(params.beta, params.lineage_depth);
        let event_log = params.record_events.then(EventLog::new);
        EaState {
            problem,
            design,
            params,
            rng,
            population,
            portfolio,
            archive,
            direct: Vec::new(),
            counter: EventCounter::new(),
            generation: 0,
            best_so_far,
            portfolio_trajectory: Vec::new(),
            event_log,
            seed,
        }
    }

    pub fn generation(&self) -> u32 {
        self.generation
    }

    pub fn population(&self) -> &[Individual<T>] {
        &self.population
    }

    pub fn best_so_far(&self) -> T {
        self.best_so_far
    }

    pub fn portfolio(&self) -> &OperatorPortfolio {
        &self.portfolio
    }

    pub fn archive(&self) -> &EventArchive {
        &self.archive
    }

    pub fn event_log(&self) -> Option<&EventLog> {
        self.event_log.as_ref()
    }

    pub fn problem(&self) -> &ProblemSpec<T> {
        &self.problem
    }

    /// Advances the optimizer by one generation: creates a full batch of
    /// offspring, culls parents plus offspring back to the population size,
    /// runs the active credit pass, and on adaptation generations updates
    /// the portfolio and purges the measurement stores.
    pub fn run_generation(&mut self) {
        let gen = self.generation + 1;
        let lambda = self.params.population_size;

        let mut offspring: Vec<Individual<T>> = Vec::with_capacity(lambda);
        for _ in 0..lambda {
            let child = self.reproduce(gen, &offspring);
            if child.fitness > self.best_so_far {
                self.best_so_far = child.fitness;
            }
            offspring.push(child);
        }
        let offspring_events: Vec<(Operator, EventId)> = offspring
            .iter()
            .map(|c| (c.window.entries()[0].operator, c.event))
            .collect();

        let mut pool = std::mem::take(&mut self.population);
        pool.extend(offspring);
        self.population = cull(pool, lambda, &mut self.rng);

        match self.design.credit {
            CreditMode::Direct => {
                let survivors: HashSet<EventId> = self.population.iter().map(|m| m.event).collect();
                self.direct
                    .extend(assign_direct_credit(&offspring_events, &survivors));
            }
            CreditMode::Etv => {
                self.archive
                    .assign_generation(self.population.iter().map(|m| &m.window));
            }
            CreditMode::None => {}
        }

        if let Some(log) = &mut self.event_log {
            log.push(LogRecord::Survivors {
                gen,
                events: self
                    .population
                    .iter()
                    .map(|m| m.event)
                    .filter(|e| *e != 0)
                    .collect(),
            });
        }

        if self.design.adapts() && gen.is_multiple_of(self.params.adaptation_interval) {
            let measurements = match self.design.credit {
                CreditMode::Direct => self.direct.clone(),
                CreditMode::Etv => self.archive.measurements(),
                CreditMode::None => unreachable!("adapting design without credit"),
            };
            let scores = match self.design.interpretation.expect("adaptive design") {
                Interpretation::Average => interpret_average(&measurements),
                Interpretation::Outliers => interpret_outliers(&measurements),
            };
            self.portfolio.update(&scores);
            self.archive.purge();
            self.direct.clear();
            self.portfolio_trajectory
                .push((gen, *self.portfolio.weights()));
        }

        self.generation = gen;
        debug_assert_eq!(self.population.len(), lambda);
        debug_assert!(self.population_is_unique());
    }

    /// Runs `generations` generations, recording best-so-far fitness at
    /// every checkpoint.
    pub fn run(&mut self, generations: u32, checkpoint_interval: u32) -> RunRecord {
        assert!(checkpoint_interval > 0);
        let mut checkpoints = Vec::new();
        for _ in 0..generations {
            self.run_generation();
            if self.generation.is_multiple_of(checkpoint_interval) {
                checkpoints.push((self.generation, self.best_so_far.to_f64().unwrap()));
            }
        }
        RunRecord {
            seed: self.seed,
            checkpoints,
            portfolio_trajectory: self.portfolio_trajectory.clone(),
        }
    }

    /// Produces one offspring with a unique genome.
    fn reproduce(&mut self, gen: u32, pending: &[Individual<T>]) -> Individual<T> {
        let mut last: Option<(Vec<usize>, Vec<T>)> = None;
        for _ in 0..UNIQUENESS_RETRIES {
            let first = tournament_index(&self.population, &mut self.rng);
            let second = self.distinct_tournament(&[first]);
            let (op, parent_idx) = self.choose_operator(first, second);
            let parents: Vec<ops::Parent<'_, T>> = parent_idx
                .iter()
                .map(|&i| {
                    let m = &self.population[i];
                    (m.genome.as_slice(), m.fitness)
                })
                .collect();
            let genome = ops::apply(
                op,
                &parents,
                self.problem.bounds(),
                &self.params.ops,
                &mut self.rng,
            );
            if !self.is_duplicate(&genome, pending) {
                return self.finish_child(gen, op, &parent_idx, genome);
            }
            last = Some((parent_idx, genome));
        }
        // Retries exhausted: reset random genes until the genome is unique.
        let (parent_idx, mut genome) = last.expect("at least one attempt");
        while self.is_duplicate(&genome, pending) {
            genome = ops::apply(
                Operator::RandomReset,
                &[(genome.as_slice(), T::zero())],
                self.problem.bounds(),
                &self.params.ops,
                &mut self.rng,
            );
        }
        self.finish_child(gen, Operator::RandomReset, &parent_idx[..1], genome)
    }

    /// Picks the operator and parent set for one reproduction. Under
    /// diversity control the random-reset operator fires with a probability
    /// driven by the mating parents' distance; otherwise an operator is
    /// drawn from the portfolio.
    fn choose_operator(&mut self, first: usize, second: usize) -> (Operator, Vec<usize>) {
        let op = if self.design.diversity_control {
            let d = normalized_distance(
                &self.population[first].genome,
                &self.population[second].genome,
                self.problem.bounds(),
            );
            let p = mutation_probability(d, real::<T>(self.params.floor), self.params.delta);
            if self.rng.random::<f64>() < p.to_f64().unwrap() {
                Operator::RandomReset
            } else {
                self.portfolio.sample(&mut self.rng, true)
            }
        } else {
            self.portfolio.sample(&mut self.rng, false)
        };
        let parent_idx = match op.arity() {
            1 => vec![first],
            2 => vec![first, second],
            _ => {
                let third = self.distinct_tournament(&[first, second]);
                vec![first, second, third]
            }
        };
        (op, parent_idx)
    }

    fn finish_child(
        &mut self,
        gen: u32,
        op: Operator,
        parent_idx: &[usize],
        genome: Vec<T>,
    ) -> Individual<T> {
        let fitness = self.problem.evaluate(&genome);
        let parent_genomes: Vec<&[T]> = parent_idx
            .iter()
            .map(|&i| self.population[i].genome.as_slice())
            .collect();
        let dominant = dominant_parent(&parent_genomes, &genome, self.problem.bounds());
        let dominant_member = &self.population[parent_idx[dominant]];
        let event = self.counter.next_id();
        let window = LineageWindow::for_child(
            event,
            op,
            &dominant_member.window,
            self.params.lineage_depth,
        );
        if let Some(log) = &mut self.event_log {
            log.push(LogRecord::Event {
                gen,
                id: event,
                op,
                parents: parent_idx
                    .iter()
                    .map(|&i| self.population[i].event)
                    .collect(),
                dominant: dominant_member.event,
            });
        }
        Individual {
            genome,
            fitness,
            event,
            window,
        }
    }

    /// Binary tournament repeated until it yields an index not in `taken`.
    fn distinct_tournament(&mut self, taken: &[usize]) -> usize {
        assert!(self.population.len() > taken.len());
        loop {
            let pick = tournament_index(&self.population, &mut self.rng);
            if !taken.contains(&pick) {
                return pick;
            }
        }
    }

    fn is_duplicate(&self, genome: &[T], pending: &[Individual<T>]) -> bool {
        self.population
            .iter()
            .chain(pending)
            .any(|m| m.genome == genome)
    }

    fn population_is_unique(&self) -> bool {
        for (i, a) in self.population.iter().enumerate() {
            for b in &self.population[i + 1..] {
                if a.genome == b.genome {
                    return false;
                }
            }
        }
        true
    }
}

/// Uniform-random population of pairwise distinct, evaluated individuals.
pub fn initialize_population<T: Real, R: Rng>(
    problem: &ProblemSpec<T>,
    size: usize,
    rng: &mut R,
) -> Vec<Individual<T>> {
    let bounds = problem.bounds();
    let mut population: Vec<Individual<T>> = Vec::with_capacity(size);
    while population.len() < size {
        let genome: Vec<T> = (0..bounds.dims())
            .map(|i| rng.random_range(bounds.lower()[i]..bounds.upper()[i]))
            .collect();
        if population.iter().any(|m| m.genome == genome) {
            continue;
        }
        let fitness = problem.evaluate(&genome);
        population.push(Individual {
            genome,
            fitness,
            event: 0,
            window: LineageWindow::empty(),
        });
    }
    population
}

/// Index of the winner of one binary tournament: two candidates drawn
/// uniformly with replacement, the fitter wins, exact ties are split by a
/// fair coin.
fn tournament_index<T: Real, R: Rng>(pool: &[Individual<T>], rng: &mut R) -> usize {
    let i = rng.random_range(0..pool.len());
    let j = rng.random_range(0..pool.len());
    if i == j {
        return i;
    }
    if pool[i].fitness > pool[j].fitness {
        i
    } else if pool[j].fitness > pool[i].fitness {
        j
    } else if rng.random_bool(0.5) {
        i
    } else {
        j
    }
}

/// Winner of one binary tournament over `pool`.
pub fn tournament_pick<'a, T: Real, R: Rng>(
    pool: &'a [Individual<T>],
    rng: &mut R,
) -> &'a Individual<T> {
    assert!(!pool.is_empty());
    &pool[tournament_index(pool, rng)]
}

/// Selects `target` survivors by repeated binary tournaments: each winner is
/// removed from the candidate pool into the survivor set, losers re-enter
/// the pool for later tournaments. Not elitist: an individual never drawn is
/// culled regardless of fitness.
pub fn cull<T: Real, R: Rng>(
    mut pool: Vec<Individual<T>>,
    target: usize,
    rng: &mut R,
) -> Vec<Individual<T>> {
    assert!(pool.len() >= target, "cannot cull below target size");
    if pool.len() == target {
        return pool;
    }
    let mut survivors = Vec::with_capacity(target);
    while survivors.len() < target {
        let winner = tournament_index(&pool, rng);
        survivors.push(pool.swap_remove(winner));
    }
    survivors
}

/// Range-normalized Euclidean distance between two genomes.
pub fn normalized_distance<T: Real>(a: &[T], b: &[T], bounds: &Bounds<T>) -> T {
    assert_eq!(a.len(), b.len(), "genome dimensions must match");
    let mut sum = T::zero();
    for i in 0..a.len() {
        let scaled = (a[i] - b[i]) / bounds.range(i);
        sum = sum + scaled * scaled;
    }
    sum.sqrt()
}

/// Diversity-controlled mutation probability: `min(1, p0 + 0.5^(d/delta))`,
/// saturating at 1 for identical parents and falling to `p0` as the parents
/// separate.
pub fn mutation_probability<T: Real>(d: T, p0: T, delta: T) -> T {
    let p = p0 + real::<T>(0.5).powf(d / delta);
    p.min(T::one())
}
