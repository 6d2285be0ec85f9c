//! End-to-end checks through the public crate surface only.

use etv_ea::ea::EaParams;
use etv_ea::{Ea, Problem, ProblemId, DESIGNS};

#[test]
fn every_design_completes_a_short_run_with_sane_records() {
    for design in DESIGNS {
        let problem = Problem::get(ProblemId::F10);
        let mut ea = Ea::new(problem, design, EaParams::default(), 31);
        let record = ea.run(40, 20);
        assert_eq!(record.checkpoints.len(), 2);
        assert_eq!(record.checkpoints[0].0, 20);
        assert_eq!(record.checkpoints[1].0, 40);
        // best-so-far is monotone across checkpoints
        assert!(record.checkpoints[1].1 >= record.checkpoints[0].1);
        let updates = record.portfolio_trajectory.len();
        if design.adapts() {
            assert_eq!(updates, 2, "{} should update twice", design.name);
        } else {
            assert_eq!(updates, 0, "{} must not adapt", design.name);
        }
    }
}

#[test]
fn full_run_is_reproducible_through_the_f64_alias() {
    let design = DESIGNS[5]; // outlier interpretation over takeover credit
    let run = |seed: u64| {
        let mut ea = Ea::new(
            Problem::get(ProblemId::F4),
            design,
            EaParams::default(),
            seed,
        );
        ea.run(60, 20)
    };
    assert_eq!(run(7), run(7));
}
