//! Credit assignment: direct survival credit and event-takeover credit.
//!
//! The event archive receives credit passed back from every survivor each
//! generation, attenuated by `beta^x` over the lineage distance `x`. Credit
//! reaching an event through a single distinct link is removed for that
//! generation (hitchhiking suppression), and only the largest per-generation
//! total an event ever reaches is retained as its takeover value.

use std::collections::{BTreeMap, HashSet};

use crate::genealogy::{EventId, LineageWindow};
use crate::ops::Operator;

/// Default per-step credit attenuation.
pub const DEFAULT_BETA: f64 = 0.5;

/// Fraction of a survivor's credit assigned to an event `x` steps back,
/// under the default attenuation of 0.5 per step.
pub fn decay_weight(x: u32) -> f64 {
    DEFAULT_BETA.powi(x as i32)
}

/// One stored performance measurement for an operator. Direct credit records
/// a 0/1 survival flag; takeover credit records an archived event value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub operator: Operator,
    pub value: f64,
}

/// Archive slot for one event.
#[derive(Clone, Debug)]
pub struct ArchiveEntry {
    pub operator: Operator,
    /// Largest filtered per-generation credit observed so far.
    pub best_etv: f64,
    scratch: f64,
    links: HashSet<EventId>,
}

impl ArchiveEntry {
    fn new(operator: Operator) -> Self {
        ArchiveEntry {
            operator,
            best_etv: 0.0,
            scratch: 0.0,
            links: HashSet::new(),
        }
    }

    /// This generation's credit, visible between the pass-back and
    /// max-retention steps.
    pub fn scratch_credit(&self) -> f64 {
        self.scratch
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }
}

/// Event archive with per-generation scratch state.
#[derive(Clone, Debug)]
pub struct EventArchive {
    beta: f64,
    weights: Vec<f64>,
    entries: BTreeMap<EventId, ArchiveEntry>,
}

impl EventArchive {
    pub fn new(beta: f64, depth: usize) -> Self {
        let weights = (0..=depth as i32).map(|x| beta.powi(x)).collect();
        EventArchive {
            beta,
            weights,
            entries: BTreeMap::new(),
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, event: EventId) -> Option<&ArchiveEntry> {
        self.entries.get(&event)
    }

    /// Distributes every survivor's unit credit over its lineage window,
    /// attenuated by distance. Events not yet archived are inserted.
    pub fn pass_back<'a, I>(&mut self, windows: I)
    where
        I: IntoIterator<Item = &'a LineageWindow>,
    {
        for window in windows {
            for (x, entry) in window.entries().iter().enumerate() {
                let slot = self
                    .entries
                    .entry(entry.event)
                    .or_insert_with(|| ArchiveEntry::new(entry.operator));
                slot.scratch += self.weights[x];
                slot.links.insert(window.link_for(x));
            }
        }
    }

    /// Removes this generation's credit from events connected to the
    /// population through at most one distinct link.
    pub fn filter_hitchhikers(&mut self) {
        for entry in self.entries.values_mut() {
            if entry.links.len() <= 1 {
                entry.scratch = 0.0;
            }
        }
    }

    /// Folds this generation's credit into the running maximum and clears
    /// the scratch state.
    pub fn retain_max(&mut self) {
        for entry in self.entries.values_mut() {
            if entry.scratch > entry.best_etv {
                entry.best_etv = entry.scratch;
            }
            entry.scratch = 0.0;
            entry.links.clear();
        }
    }

    /// Runs one full credit-assignment pass for a generation.
    pub fn assign_generation<'a, I>(&mut self, windows: I)
    where
        I: IntoIterator<Item = &'a LineageWindow>,
    {
        self.pass_back(windows);
        self.filter_hitchhikers();
        self.retain_max();
    }

    /// Archived values grouped as per-operator measurements, in event order.
    pub fn measurements(&self) -> Vec<Measurement> {
        self.entries
            .values()
            .map(|e| Measurement {
                operator: e.operator,
                value: e.best_etv,
            })
            .collect()
    }

    /// Empties the archive after an adaptation update.
    pub fn purge(&mut self) {
        self.entries.clear();
    }
}

/// Direct credit: one binary measurement per offspring of this generation,
/// 1 if it survived culling and 0 otherwise.
pub fn assign_direct_credit(
    offspring: &[(Operator, EventId)],
    survivor_events: &HashSet<EventId>,
) -> Vec<Measurement> {
    offspring
        .iter()
        .map(|&(operator, event)| Measurement {
            operator,
            value: if survivor_events.contains(&event) {
                1.0
            } else {
                0.0
            },
        })
        .collect()
}
