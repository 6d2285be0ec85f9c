//! Acceptance suite: one check per shipping criterion, each printed as a
//! pass/fail line. Run with `--nocapture` to see the lines as they complete.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use etv_ea::credit::decay_weight;
use etv_ea::design::design_by_name;
use etv_ea::ea::{EaParams, EaState};
use etv_ea::genealogy::{EventId, EventLog, LineageWindow, LogRecord};
use etv_ea::stats::mann_whitney_confidence;
use etv_ea::{EventArchive, Operator, OperatorPortfolio, Problem, ProblemId};
use etv_harness::{analyze_results, run_experiment, ExperimentConfig};

type Criterion = (&'static str, fn() -> Result<String, String>);

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("decay schedule", c1_decay_schedule),
        ("takeover value unit semantics", c2_takeover_semantics),
        ("hitchhiking suppression", c3_hitchhiking),
        ("archive equals genealogy replay", c4_oracle_equivalence),
        ("Mann-Whitney exactness", c5_mann_whitney_exact),
        ("outlier+direct stagnation", c6_stagnation),
        ("credit-route effect is positive", c7_effect_direction),
        ("benchmark correctness", c8_benchmarks),
        ("probability-update algebra", c9_update_algebra),
        ("end-to-end sanity on F5", c10_end_to_end),
    ];

    let mut failures = Vec::new();
    for (number, (title, check)) in criteria.iter().enumerate() {
        let label = number + 1;
        match check() {
            Ok(detail) => println!("criterion {label:2} [PASS] {title}: {detail}"),
            Err(reason) => {
                println!("criterion {label:2} [FAIL] {title}: {reason}");
                failures.push(format!("criterion {label} ({title}): {reason}"));
            }
        }
    }
    assert!(
        failures.is_empty(),
        "{} acceptance criterion(s) failed:\n{}",
        failures.len(),
        failures.join("\n")
    );
}

fn c1_decay_schedule() -> Result<String, String> {
    if decay_weight(6) != 0.015625 {
        return Err(format!(
            "decay_weight(6) = {}, want 0.015625",
            decay_weight(6)
        ));
    }
    for x in 0..=6u32 {
        let expected = 0.5f64.powi(x as i32);
        if decay_weight(x).to_bits() != expected.to_bits() {
            return Err(format!(
                "decay_weight({x}) = {} != 0.5^{x}",
                decay_weight(x)
            ));
        }
    }
    Ok("0.5^x exact for x = 0..6, 0.5^6 = 0.015625".into())
}

/// Window whose self event is `ids[0]`, with ancestors following.
fn chain(ids: &[EventId]) -> LineageWindow {
    let mut window = LineageWindow::empty();
    for &id in ids.iter().rev() {
        window = LineageWindow::for_child(id, Operator::Creep, &window, 6);
    }
    window
}

fn c2_takeover_semantics() -> Result<String, String> {
    // event X (id 1) with four surviving descendants over two branches,
    // decay disabled: the takeover value counts the surviving solutions
    let mut archive = EventArchive::new(1.0, 6);
    let windows = [
        chain(&[31, 11, 1]),
        chain(&[32, 11, 1]),
        chain(&[33, 12, 1]),
        chain(&[34, 12, 1]),
    ];
    archive.assign_generation(windows.iter());
    let etv = archive.get(1).map(|e| e.best_etv).unwrap_or(f64::NAN);
    if etv != 4.0 {
        return Err(format!("four-descendant takeover value = {etv}, want 4"));
    }

    // per-generation credit trajectory 1, 4, 8, 6, 2: the peak is archived
    let mut archive = EventArchive::new(1.0, 6);
    for count in [1usize, 4, 8, 6, 2] {
        let windows: Vec<LineageWindow> = (0..count)
            .map(|k| chain(&[100 + k as EventId, 1]))
            .collect();
        archive.assign_generation(windows.iter());
    }
    let best = archive.get(1).map(|e| e.best_etv).unwrap_or(f64::NAN);
    if best != 8.0 {
        return Err(format!("trajectory max = {best}, want 8"));
    }
    Ok("four survivors score 4; trajectory 1,4,8,6,2 archives 8".into())
}

fn c3_hitchhiking() -> Result<String, String> {
    // chain A(1) -> B(2) -> C(3) with only C's solution surviving:
    // every event reaches the population through a single link
    let mut archive = EventArchive::new(0.5, 6);
    archive.pass_back([&chain(&[3, 2, 1])]);
    archive.filter_hitchhikers();
    for id in [1u64, 2] {
        let scratch = archive.get(id).unwrap().scratch_credit();
        if scratch != 0.0 {
            return Err(format!("event {id} kept {scratch} through a single link"));
        }
    }
    if archive.get(3).unwrap().scratch_credit() != 0.0 {
        return Err("C has one distinct link and must be zeroed too".into());
    }

    // with a second surviving branch below C, only C keeps credit
    let mut archive = EventArchive::new(0.5, 6);
    archive.pass_back([&chain(&[3, 2, 1]), &chain(&[4, 3, 2, 1])]);
    archive.filter_hitchhikers();
    let c = archive.get(3).unwrap().scratch_credit();
    if c != 1.5 {
        return Err(format!("C with two links kept {c}, want 1.5"));
    }
    for id in [1u64, 2] {
        if archive.get(id).unwrap().scratch_credit() != 0.0 {
            return Err(format!("upstream event {id} must stay zeroed"));
        }
    }
    Ok("single-link chain zeroed; C retains credit once it has two links".into())
}

/// Replays the event log independently of the incremental archive: rebuilds
/// every survivor's ancestor chain from dominant-parent links, applies the
/// decay, the single-link rule and the running maximum, and mirrors purges.
fn replay_event_log(
    log: &EventLog,
    beta: f64,
    depth: usize,
    adaptation_interval: u32,
    adapts: bool,
) -> BTreeMap<EventId, f64> {
    let mut dominant: BTreeMap<EventId, EventId> = BTreeMap::new();
    let mut best: BTreeMap<EventId, f64> = BTreeMap::new();
    for record in &log.records {
        match record {
            LogRecord::Event {
                id, dominant: d, ..
            } => {
                dominant.insert(*id, *d);
            }
            LogRecord::Survivors { gen, events } => {
                let mut scratch: BTreeMap<EventId, f64> = BTreeMap::new();
                let mut links: BTreeMap<EventId, BTreeSet<EventId>> = BTreeMap::new();
                for &survivor in events {
                    let mut path = vec![survivor];
                    let mut current = survivor;
                    while path.len() < depth + 1 {
                        let parent = dominant[&current];
                        if parent == 0 {
                            break;
                        }
                        path.push(parent);
                        current = parent;
                    }
                    for (x, &event) in path.iter().enumerate() {
                        *scratch.entry(event).or_default() += beta.powi(x as i32);
                        let link = if x == 0 { survivor } else { path[x - 1] };
                        links.entry(event).or_default().insert(link);
                    }
                }
                for (event, credit) in scratch {
                    let credit = if links[&event].len() <= 1 {
                        0.0
                    } else {
                        credit
                    };
                    let slot = best.entry(event).or_insert(0.0);
                    if credit > *slot {
                        *slot = credit;
                    }
                }
                if adapts && gen % adaptation_interval == 0 {
                    best.clear();
                }
            }
        }
    }
    best
}

fn c4_oracle_equivalence() -> Result<String, String> {
    let design = *design_by_name("EA6").unwrap();
    let mut compared_events = 0;
    for (seed, generations) in [(101u64, 15u32), (202, 15), (303, 45)] {
        let params = EaParams::<f64> {
            population_size: 6,
            record_events: true,
            ..EaParams::default()
        };
        let mut ea = EaState::new(Problem::get(ProblemId::F5), design, params.clone(), seed);
        for _ in 0..generations {
            ea.run_generation();
        }

        // round-trip the log through its serialized JSONL form
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let path = dir.path().join("events.jsonl");
        let mut file = fs::File::create(&path).map_err(|e| e.to_string())?;
        ea.event_log()
            .unwrap()
            .write_jsonl(&mut file)
            .map_err(|e| e.to_string())?;
        let log = EventLog::read_jsonl(std::io::BufReader::new(
            fs::File::open(&path).map_err(|e| e.to_string())?,
        ))
        .map_err(|e| e.to_string())?;

        let oracle = replay_event_log(
            &log,
            params.beta,
            params.lineage_depth,
            params.adaptation_interval,
            design.adapts(),
        );
        let archive = ea.archive();
        if oracle.len() != archive.len() {
            return Err(format!(
                "seed {seed}: oracle tracks {} events, archive {}",
                oracle.len(),
                archive.len()
            ));
        }
        for (event, expected) in &oracle {
            let got = archive
                .get(*event)
                .map(|e| e.best_etv)
                .ok_or_else(|| format!("seed {seed}: event {event} missing from archive"))?;
            if (got - expected).abs() > 1e-12 {
                return Err(format!(
                    "seed {seed}: event {event} archive {got} vs replay {expected}"
                ));
            }
            compared_events += 1;
        }
    }
    Ok(format!(
        "{compared_events} event values matched the replay within 1e-12 across 3 runs"
    ))
}

/// Independent route: U from direct pairwise comparisons over an explicit
/// recursive enumeration of every assignment of the pooled values.
fn oracle_confidence(a: &[f64], b: &[f64]) -> f64 {
    fn u_pairwise(a: &[f64], b: &[f64]) -> f64 {
        let mut u = 0.0;
        for &x in a {
            for &y in b {
                if x > y {
                    u += 1.0;
                } else if x == y {
                    u += 0.5;
                }
            }
        }
        u
    }
    fn visit_splits(
        pooled: &[f64],
        need: usize,
        start: usize,
        picked: &mut Vec<usize>,
        out: &mut Vec<(Vec<f64>, Vec<f64>)>,
    ) {
        if picked.len() == need {
            let side_a: Vec<f64> = picked.iter().map(|&i| pooled[i]).collect();
            let side_b: Vec<f64> = (0..pooled.len())
                .filter(|i| !picked.contains(i))
                .map(|i| pooled[i])
                .collect();
            out.push((side_a, side_b));
            return;
        }
        for i in start..pooled.len() {
            picked.push(i);
            visit_splits(pooled, need, i + 1, picked, out);
            picked.pop();
        }
    }

    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let u_obs = u_pairwise(a, b);
    let mut splits = Vec::new();
    visit_splits(&pooled, a.len(), 0, &mut Vec::new(), &mut splits);
    let at_least = splits
        .iter()
        .filter(|(sa, sb)| u_pairwise(sa, sb) >= u_obs)
        .count();
    1.0 - at_least as f64 / splits.len() as f64
}

/// All multisets of `size` drawn from `grid`, as sorted vectors.
fn multisets(grid: &[f64], size: usize) -> Vec<Vec<f64>> {
    fn build(grid: &[f64], size: usize, start: usize, acc: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if acc.len() == size {
            out.push(acc.clone());
            return;
        }
        for i in start..grid.len() {
            acc.push(grid[i]);
            build(grid, size, i, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    build(grid, size, 0, &mut Vec::new(), &mut out);
    out
}

fn c5_mann_whitney_exact() -> Result<String, String> {
    let pinned = mann_whitney_confidence(&[3.0, 4.0, 5.0], &[0.0, 1.0, 2.0]);
    if (pinned - 0.95).abs() > 1e-12 {
        return Err(format!("separated triples give {pinned}, want 0.95"));
    }

    let grid = [0.0, 0.5, 1.0, 1.5];
    let mut pairs = 0;
    for n in 1..=4usize {
        let samples = multisets(&grid, n);
        for a in &samples {
            for b in &samples {
                let implementation = mann_whitney_confidence(a, b);
                let oracle = oracle_confidence(a, b);
                if (implementation - oracle).abs() > 1e-12 {
                    return Err(format!(
                        "{a:?} vs {b:?}: implementation {implementation} vs enumeration {oracle}"
                    ));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "{pairs} grid pairs match exhaustive enumeration within 1e-12; pinned case 0.95"
    ))
}

fn c6_stagnation() -> Result<String, String> {
    for name in ["EA2", "EA4"] {
        let design = *design_by_name(name).unwrap();
        let params = EaParams::<f64>::default();
        let initial = *OperatorPortfolio::for_design(&design, params.floor).weights();
        let mut ea = EaState::new(Problem::get(ProblemId::F2), design, params, 4242);
        let record = ea.run(2000, 100);
        let final_weights = *ea.portfolio().weights();
        for i in 0..10 {
            if final_weights[i].to_bits() != initial[i].to_bits() {
                return Err(format!(
                    "{name}: operator {} drifted from {} to {}",
                    i + 1,
                    initial[i],
                    final_weights[i]
                ));
            }
        }
        if record
            .portfolio_trajectory
            .iter()
            .any(|(_, w)| w != &initial)
        {
            return Err(format!(
                "{name}: an intermediate update moved the portfolio"
            ));
        }
    }
    Ok("EA2 and EA4 portfolios identical to initial values after 2000 generations".into())
}

fn c7_effect_direction() -> Result<String, String> {
    // binary survival data plus outlier interpretation cannot be compared on
    // magnitudes; the gate is the sign of the credit-route effect. One rerun
    // with a fresh base seed is budgeted for statistical flakiness.
    let mut attempts = Vec::new();
    for base_seed in [999u64, 7] {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let config = ExperimentConfig {
            designs: (1..=8).map(|k| format!("EA{k}")).collect(),
            problems: ["F2", "F3", "F4", "F8", "F9"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            runs: 10,
            generations: 2000,
            base_seed,
            out_dir: dir.path().join("matrix"),
            ..ExperimentConfig::default()
        };
        let summary = run_experiment(&config).map_err(|e| e.to_string())?;
        if !summary.failed.is_empty() {
            return Err(format!("{} cells failed to run", summary.failed.len()));
        }
        let report =
            analyze_results(&config.out_dir, &config.out_dir).map_err(|e| e.to_string())?;
        let (mean_effects, final_effects) =
            report.effects.ok_or("effects missing from analysis")?;
        if mean_effects.etv > 0.0 && final_effects.etv > 0.0 {
            return Ok(format!(
                "seed {base_seed}: effect(credit route) = +{:.2} mean, +{:.2} final over 5 problems x 10 runs",
                mean_effects.etv, final_effects.etv
            ));
        }
        attempts.push(format!(
            "seed {base_seed}: mean {:.2}, final {:.2}",
            mean_effects.etv, final_effects.etv
        ));
    }
    Err(format!(
        "credit-route effect not positive on both measures: {}",
        attempts.join("; ")
    ))
}

fn c8_benchmarks() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for problem in Problem::all() {
        let threshold = problem.success_threshold();
        let at_optimum = problem.evaluate(problem.known_optimizer().to_vec().as_slice());
        if at_optimum < -threshold {
            return Err(format!(
                "{} scores {at_optimum:e} at its optimizer (threshold {threshold:e})",
                problem.id()
            ));
        }
        let bounds = problem.bounds();
        for _ in 0..10_000 {
            let x: Vec<f64> = (0..problem.dims())
                .map(|i| rng.random_range(bounds.lower()[i]..bounds.upper()[i]))
                .collect();
            let value = problem.evaluate(&x);
            if value > threshold {
                return Err(format!(
                    "{} exceeded the optimum by {value:e} at {x:?}",
                    problem.id()
                ));
            }
        }
    }
    Ok("10 problems: optimizer within threshold, 10000 random samples never above it".into())
}

fn c9_update_algebra() -> Result<String, String> {
    // mixing: old 0.10 with normalized score 0.30 lands exactly on 0.20
    let mut adaptable = [false; 10];
    adaptable[0] = true;
    adaptable[1] = true;
    let mut weights = [0.0; 10];
    weights[0] = 0.10;
    weights[1] = 0.90;
    let mut p = OperatorPortfolio::new(weights, adaptable, 0.02);
    let mut scores = [0.0; 10];
    scores[0] = 0.3;
    scores[1] = 0.7;
    p.update(&scores);
    if p.weights()[0] != 0.20 {
        return Err(format!("mix gave {}, want exactly 0.20", p.weights()[0]));
    }

    // clamping lands exactly on the floor
    let mut weights = [0.0; 10];
    weights[0] = 0.02;
    weights[1] = 0.98;
    let mut p = OperatorPortfolio::new(weights, adaptable, 0.02);
    let mut scores = [0.0; 10];
    scores[1] = 1.0;
    p.update(&scores);
    if p.weights()[0] != 0.02 {
        return Err(format!("clamp gave {}, want exactly 0.02", p.weights()[0]));
    }

    // all-zero scores hold the portfolio bit-identically
    let mut p = OperatorPortfolio::adaptive(true, 0.02);
    let before = *p.weights();
    p.update(&[0.0; 10]);
    for (i, (after, orig)) in p.weights().iter().zip(&before).enumerate() {
        if after.to_bits() != orig.to_bits() {
            return Err(format!("hold rule moved operator {}", i + 1));
        }
    }
    Ok("0.5*0.10 + 0.5*0.30 = 0.20; floor hit exactly; zero scores hold bits".into())
}

fn c10_end_to_end() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = ExperimentConfig {
        designs: vec!["SGA".into()],
        problems: vec!["F5".into()],
        runs: 10,
        generations: 2000,
        base_seed: 42,
        out_dir: dir.path().join("sga"),
        ..ExperimentConfig::default()
    };
    let summary = run_experiment(&config).map_err(|e| e.to_string())?;
    if !summary.failed.is_empty() {
        return Err(format!("{} cells failed to run", summary.failed.len()));
    }
    let text = fs::read_to_string(&summary.results_csv).map_err(|e| e.to_string())?;
    let mut finals = Vec::new();
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields[3] == "2000" {
            finals.push(fields[4].parse::<f64>().map_err(|e| e.to_string())?);
        }
    }
    if finals.len() != 10 {
        return Err(format!("expected 10 final values, got {}", finals.len()));
    }
    let above = finals.iter().filter(|v| **v > -1e-6).count();
    let best = finals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if above * 2 > finals.len() {
        Ok(format!("{above}/10 runs above -1e-6 (best {best:.2e})"))
    } else {
        Err(format!(
            "{above}/10 runs above -1e-6 (best {best:.2e}); majority required"
        ))
    }
}
