//! The nine reference algorithm designs.

use std::fmt;

/// How stored measurements are turned into operator scores.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interpretation {
    /// Score each operator by the average of its measurements.
    Average,
    /// Score each operator by how strongly its measurements are outliers
    /// of the pooled measurement distribution.
    Outliers,
}

/// Which credit route feeds the measurement store.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CreditMode {
    /// Binary offspring-survival credit to the creating operator.
    Direct,
    /// Event-takeover credit through the genealogy archive.
    Etv,
    /// No credit bookkeeping at all (fixed-probability designs).
    None,
}

/// One algorithm design: interpretation, diversity control, credit route.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DesignSpec {
    pub name: &'static str,
    pub interpretation: Option<Interpretation>,
    pub diversity_control: bool,
    pub credit: CreditMode,
    /// Fixed operator weights instead of adaptation (the plain GA).
    pub fixed_weights: Option<[f64; 10]>,
}

impl DesignSpec {
    /// Whether the design updates operator probabilities at all.
    pub fn adapts(&self) -> bool {
        self.interpretation.is_some() && self.credit != CreditMode::None
    }
}

impl fmt::Display for DesignSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)
    }
}

/// Fixed weights of the plain GA: uniform crossover at 0.98 and the random
/// reset operator under diversity control at its base probability.
const SGA_WEIGHTS: [f64; 10] = [0.0, 0.0, 0.0, 0.98, 0.0, 0.0, 0.0, 0.0, 0.0, 0.02];

/// The full design matrix: every combination of interpretation, diversity
/// control and credit route, plus the plain GA baseline.
pub const DESIGNS: [DesignSpec; 9] = [
    DesignSpec {
        name: "EA1",
        interpretation: Some(Interpretation::Average),
        diversity_control: false,
        credit: CreditMode::Direct,
        fixed_weights: None,
    },
    DesignSpec {
        name: "EA2",
        interpretation: Some(Interpretation::Outliers),
        diversity_control: false,
        credit: CreditMode::Direct,
        fixed_weights: None,
    },
    DesignSpec {
        name: "EA3",
        interpretation: Some(Interpretation::Average),
        diversity_control: true,
        credit: CreditMode::Direct,
        fixed_weights: None,
    },
    DesignSpec {
        name: "EA4",
        interpretation: Some(Interpretation::Outliers),
        diversity_control: true,
        credit: CreditMode::Direct,
        fixed_weights: None,
    },
    DesignSpec {
        name: "EA5",
        interpretation: Some(Interpretation::Average),
        diversity_control: false,
        credit: CreditMode::Etv,
        fixed_weights: None,
    },
    DesignSpec {
        name: "EA6",
        interpretation: Some(Interpretation::Outliers),
        diversity_control: false,
        credit: CreditMode::Etv,
        fixed_weights: None,
    },
    DesignSpec {
        name: "EA7",
        interpretation: Some(Interpretation::Average),
        diversity_control: true,
        credit: CreditMode::Etv,
        fixed_weights: None,
    },
    DesignSpec {
        name: "EA8",
        interpretation: Some(Interpretation::Outliers),
        diversity_control: true,
        credit: CreditMode::Etv,
        fixed_weights: None,
    },
    DesignSpec {
        name: "SGA",
        interpretation: None,
        diversity_control: true,
        credit: CreditMode::None,
        fixed_weights: Some(SGA_WEIGHTS),
    },
];

/// Looks a design up by name (case-insensitive).
pub fn design_by_name(name: &str) -> Option<&'static DesignSpec> {
    DESIGNS.iter().find(|d| d.name.eq_ignore_ascii_case(name))
}

/// Canonical position of a design in the matrix, used for seed derivation.
pub fn design_index(name: &str) -> Option<usize> {
    DESIGNS
        .iter()
        .position(|d| d.name.eq_ignore_ascii_case(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_designs_with_expected_axes() {
        assert_eq!(DESIGNS.len(), 9);
        let etv_count = DESIGNS
            .iter()
            .filter(|d| d.credit == CreditMode::Etv)
            .count();
        assert_eq!(etv_count, 4);
        let div_count = DESIGNS.iter().filter(|d| d.diversity_control).count();
        assert_eq!(div_count, 5); // EA3, EA4, EA7, EA8 and the plain GA
        assert!(!design_by_name("SGA").unwrap().adapts());
        assert!(design_by_name("ea6").unwrap().adapts());
        assert_eq!(design_index("EA1"), Some(0));
        assert_eq!(design_index("SGA"), Some(8));
    }

    #[test]
    fn sga_weights_sum_to_one() {
        let w = design_by_name("SGA").unwrap().fixed_weights.unwrap();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(w[3], 0.98);
        assert_eq!(w[9], 0.02);
    }
}
